//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored as its residue modulo the `N`-th cyclotomic polynomial
//! `Φ_N` in the power basis `1, ζ, ..., ζ^{φ(N)-1}`, with integer numerators
//! over one positive common denominator. The representation is canonical, so
//! zero testing and equality within a conductor are coefficient comparisons.
//!
//! Operands with different conductors are embedded into the lcm conductor.
//! That conductor is capped (default 10080, overridable through the
//! `TOMOFIX_CONDUCTOR_CAP` environment variable); the `try_*` methods report a
//! cap violation as an error, the operator impls panic on it.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::ring::{format_rational, parse_rational, Field, Ring};

pub const DEFAULT_CONDUCTOR_CAP: u64 = 10080;

/// Current conductor cap.
pub fn conductor_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("TOMOFIX_CONDUCTOR_CAP")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&v: &u64| v >= 1)
            .unwrap_or(DEFAULT_CONDUCTOR_CAP)
    })
}

fn check_cap(n: u64) -> Result<()> {
    let cap = conductor_cap();
    if n > cap {
        Err(Error::ConductorCap { requested: n, cap })
    } else {
        Ok(())
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

type PhiCache = RwLock<HashMap<u32, Arc<Vec<i64>>>>;

fn phi_cache() -> &'static PhiCache {
    static CACHE: OnceLock<PhiCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, lowest degree first. Computed as
/// `(x^n - 1) / Π_{d | n, d < n} Φ_d` and cached per conductor.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "Φ_0 is undefined");
    if let Some(p) = phi_cache().read().expect("cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    // x^n - 1
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in divisors(n as u64) {
        if d == n as u64 {
            continue;
        }
        let divisor = cyclotomic_poly(d as u32);
        num = exact_div_monic(&num, &divisor);
    }
    let coeffs: Vec<i64> = num
        .iter()
        .map(|c| c.to_i64().expect("cyclotomic coefficient exceeds i64"))
        .collect();
    let coeffs = Arc::new(coeffs);
    phi_cache()
        .write()
        .expect("cache poisoned")
        .entry(n)
        .or_insert_with(|| Arc::clone(&coeffs));
    coeffs
}

fn exact_div_monic(num: &[BigInt], den: &[i64]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Reduces an integer polynomial modulo the monic `Φ_n`.
fn reduce_mod_phi(mut poly: Vec<BigInt>, n: u32) -> Vec<BigInt> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if poly.len() < deg {
        poly.resize(deg, BigInt::zero());
        return poly;
    }
    for d in (deg..poly.len()).rev() {
        if poly[d].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut poly[d]);
        for (i, &p) in phi.iter().take(deg).enumerate() {
            if p != 0 {
                poly[d - deg + i] -= &c * p;
            }
        }
    }
    poly.truncate(deg);
    poly
}

/// An exact element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycElem {
    conductor: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycElem {
    fn from_parts(conductor: u32, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = CycElem { conductor, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    /// Builds `Σ_k counts[k] ζ_N^k / den` from coefficients on arbitrary
    /// exponents `0..counts.len()`, folding exponents modulo `N`.
    pub fn from_power_coeffs(conductor: u32, counts: &[BigInt], den: BigInt) -> Result<Self> {
        if conductor == 0 {
            return domain("conductor must be positive");
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        check_cap(conductor as u64)?;
        let n = conductor as usize;
        let mut folded = vec![BigInt::zero(); n];
        for (k, c) in counts.iter().enumerate() {
            if !c.is_zero() {
                folded[k % n] += c;
            }
        }
        Ok(Self::from_parts(conductor, reduce_mod_phi(folded, conductor), den))
    }

    /// The rational `r`, in conductor 1.
    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_parts(1, vec![r.numer().clone()], r.denom().clone())
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_parts(1, vec![BigInt::from(v)], BigInt::one())
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coefficients as exact rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Builds an element from its power-basis coefficients (length `φ(N)`).
    pub fn from_coeffs(conductor: u32, coeffs: &[BigRational]) -> Result<Self> {
        if conductor == 0 {
            return domain("conductor must be positive");
        }
        check_cap(conductor as u64)?;
        let phi = euler_phi(conductor as u64) as usize;
        if coeffs.len() != phi {
            return Err(Error::IncompatibleDims(format!(
                "conductor {conductor} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::from_parts(conductor, num, den))
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Re-expresses `self` in conductor `target`, which must be a multiple of
    /// the current conductor.
    pub fn embed(&self, target: u32) -> Result<Self> {
        if target == 0 || target % self.conductor != 0 {
            return domain(format!(
                "cannot embed conductor {} into {}",
                self.conductor, target
            ));
        }
        check_cap(target as u64)?;
        Ok(self.embed_unchecked(target))
    }

    fn embed_unchecked(&self, target: u32) -> Self {
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![BigInt::zero(); target as usize];
        for (k, c) in self.num.iter().enumerate() {
            poly[(k * step) % target as usize] += c;
        }
        CycElem {
            conductor: target,
            num: reduce_mod_phi(poly, target),
            den: self.den.clone(),
        }
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        if self.conductor == other.conductor {
            return Ok((self.clone(), other.clone()));
        }
        let m = lcm(self.conductor as u64, other.conductor as u64);
        check_cap(m)?;
        let m = m as u32;
        Ok((self.embed_unchecked(m), other.embed_unchecked(m)))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        Ok(Self::from_parts(a.conductor, num, &a.den * &b.den))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other.clone())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let mut prod = vec![BigInt::zero(); a.num.len() + b.num.len() - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Ok(Self::from_parts(
            a.conductor,
            reduce_mod_phi(prod, a.conductor),
            &a.den * &b.den,
        ))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::from_parts(self.conductor, num, &self.den * r.denom())
    }

    /// Galois automorphism `ζ ↦ ζ^s`; `s` must be coprime to the conductor.
    pub fn galois(&self, s: i64) -> Result<Self> {
        let n = self.conductor as i64;
        let s = s.rem_euclid(n);
        if gcd(s as u64, n as u64) != 1 {
            return domain(format!("{s} is not a unit modulo {n}"));
        }
        let mut poly = vec![BigInt::zero(); n as usize];
        for (k, c) in self.num.iter().enumerate() {
            poly[((k as i64 * s) % n) as usize] += c;
        }
        Ok(Self::from_parts(
            self.conductor,
            reduce_mod_phi(poly, self.conductor),
            self.den.clone(),
        ))
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1).expect("-1 is always a unit")
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let n = self.conductor as u64;
        let mut acc = self.clone();
        for s in 2..n {
            if gcd(s, n) == 1 {
                acc = acc
                    .try_mul(&self.galois(s as i64).expect("unit"))
                    .expect("same conductor");
            }
        }
        acc.as_rational().expect("norm is rational")
    }

    /// Multiplicative inverse, as the product of the non-trivial conjugates
    /// divided by the norm.
    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.conductor as u64;
        let mut cofactor = CycElem::one().embed_unchecked(self.conductor);
        for s in 2..n {
            if gcd(s, n) == 1 {
                cofactor = cofactor.try_mul(&self.galois(s as i64)?)?;
            }
        }
        let norm = self.try_mul(&cofactor)?.as_rational().expect("norm is rational");
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.try_inv()?)
    }

    /// `self^e`; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.try_inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycElem::one().embed_unchecked(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Identifies `self` as a root of unity `ζ_m^k` in lowest terms.
    pub fn as_root_of_unity(&self) -> Option<RootOfUnity> {
        let n = self.conductor;
        // The roots of unity of Q(ζ_N) are μ_N for even N and μ_{2N} for odd N.
        let l = if n % 2 == 0 { n } else { 2 * n };
        let me = self.embed_unchecked(l);
        (0..l)
            .find(|&k| root_of_unity_unchecked(l, k as i64) == me)
            .map(|k| RootOfUnity::new(l, k as i64))
    }

    /// Least `m >= 1` with `self^m = 1`.
    pub fn order_of(&self) -> Result<u32> {
        self.as_root_of_unity()
            .map(|r| r.order())
            .ok_or_else(|| Error::Domain(format!("{self} is not a root of unity")))
    }

    /// Floating-point value for display and sanity checks only.
    pub fn approx_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let n = self.conductor as f64;
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let angle = std::f64::consts::TAU * k as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN) / den, angle)
            })
            .sum()
    }
}

fn root_of_unity_unchecked(n: u32, k: i64) -> CycElem {
    let k = k.rem_euclid(n as i64) as usize;
    let mut poly = vec![BigInt::zero(); k + 1];
    poly[k] = BigInt::one();
    CycElem::from_parts(n, reduce_mod_phi(poly, n), BigInt::one())
}

/// `ζ_N^k` as a field element of conductor `N`.
pub fn root_of_unity(n: u32, k: i64) -> Result<CycElem> {
    if n == 0 {
        return domain("root of unity needs N >= 1");
    }
    check_cap(n as u64)?;
    Ok(root_of_unity_unchecked(n, k))
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.den == other.den && self.num == other.num;
        }
        let m = lcm(self.conductor as u64, other.conductor as u64) as u32;
        let a = self.embed_unchecked(m);
        let b = other.embed_unchecked(m);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycElem {}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = format_rational(c);
            let term = match k {
                0 => coeff,
                _ => {
                    let z = if k == 1 {
                        format!("z{}", self.conductor)
                    } else {
                        format!("z{}^{}", self.conductor, k)
                    };
                    if c.is_one() {
                        z
                    } else if *c == -BigRational::one() {
                        format!("-{z}")
                    } else {
                        format!("{coeff}*{z}")
                    }
                }
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
        }
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElem[{}]({})", self.conductor, self)
    }
}

impl Add for CycElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for CycElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for CycElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Add<&'a CycElem> for &'a CycElem {
    type Output = CycElem;
    fn add(self, rhs: &CycElem) -> CycElem {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a CycElem> for &'a CycElem {
    type Output = CycElem;
    fn mul(self, rhs: &CycElem) -> CycElem {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for CycElem {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in &mut self.num {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Zero for CycElem {
    fn zero() -> Self {
        CycElem {
            conductor: 1,
            num: vec![BigInt::zero()],
            den: BigInt::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }
}

impl One for CycElem {
    fn one() -> Self {
        CycElem::from_integer(1)
    }
}

impl Ring for CycElem {
    fn from_int(v: i64) -> Self {
        CycElem::from_integer(v)
    }
}

impl Field for CycElem {
    fn inverse(&self) -> Option<Self> {
        self.try_inv().ok()
    }
}

#[derive(Serialize, Deserialize)]
struct CycElemDoc {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycElemDoc {
            conductor: self.conductor,
            coeffs: self.coeffs().iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = CycElemDoc::deserialize(d)?;
        let coeffs = doc
            .coeffs
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycElem::from_coeffs(doc.conductor, &coeffs).map_err(D::Error::custom)
    }
}

/// A root of unity `ζ_order^exp` in lowest terms: `gcd(exp, order) = 1`, and
/// `1` is `(1, 0)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RootOfUnity {
    order: u32,
    exp: u32,
}

impl RootOfUnity {
    /// `ζ_n^k`, reduced to lowest terms.
    pub fn new(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root of unity needs N >= 1");
        let k = k.rem_euclid(n as i64) as u64;
        let g = gcd(k, n as u64);
        RootOfUnity {
            order: (n as u64 / g) as u32,
            exp: (k / g) as u32,
        }
    }

    pub fn one() -> Self {
        RootOfUnity { order: 1, exp: 0 }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    /// Exponent of `self` as a power of `ζ_m`; `m` must be a multiple of the order.
    pub fn exponent_in(&self, m: u32) -> u32 {
        assert_eq!(m % self.order, 0, "order {} does not divide {m}", self.order);
        self.exp * (m / self.order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = lcm(self.order as u64, other.order as u64) as u32;
        RootOfUnity::new(m, self.exponent_in(m) as i64 + other.exponent_in(m) as i64)
    }

    pub fn pow(&self, e: i64) -> Self {
        RootOfUnity::new(self.order, self.exp as i64 * e)
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// Galois action `ζ_m ↦ ζ_m^s` for any `m` divisible by the order.
    pub fn galois(&self, s: i64) -> Self {
        self.pow(s)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn to_elem(&self) -> Result<CycElem> {
        root_of_unity(self.order, self.exp as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exp) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (4, 1) => write!(f, "i"),
            (4, 3) => write!(f, "-i"),
            (n, 1) => write!(f, "z{n}"),
            (n, k) => write!(f, "z{n}^{k}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RootDoc {
    #[serde(rename = "N")]
    n: u32,
    k: u32,
}

impl Serialize for RootOfUnity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootDoc { n: self.order, k: self.exp }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootOfUnity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = RootDoc::deserialize(d)?;
        if doc.n == 0 {
            return Err(D::Error::custom("N must be positive"));
        }
        Ok(RootOfUnity::new(doc.n, doc.k as i64))
    }
}
