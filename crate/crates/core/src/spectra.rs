//! Characteristic Laurent polynomials of windows and the torus zero locus of
//! punctured square windows.
//!
//! The zero locus of `m_{S(n)*}` on `T^2` consists of pairs of roots of unity.
//! [`square_zero_locus`] builds it from the closed form (two families indexed by
//! `c ∈ μ_{n-1}`); [`zero_locus_oracle`] finds it by exhaustive exact evaluation
//! over `μ_M × μ_M`, `M = (n-1)(n+1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{conductor_cap, lcm, CycElem, RootOfUnity};
use crate::error::{domain, Error, Result};
use crate::lattice::{punctured_square, Window};

/// Laurent polynomial in `x, y` with integer coefficients; zero terms are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl LaurentPoly2 {
    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), BigInt)>) -> Self {
        let mut p = LaurentPoly2::default();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: (i64, i64), c: BigInt) {
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), BigInt> {
        &self.terms
    }

    pub fn coeff(&self, e: (i64, i64)) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// `f*(x, y) = f(1/x, 1/y)`.
    pub fn star(&self) -> Self {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(&(a, b), c)| ((-a, -b), c.clone())).collect(),
        }
    }

    /// Exact value at a pair of roots of unity.
    pub fn eval(&self, p: &TorusPoint) -> CycElem {
        let m = lcm(p.x.order() as u64, p.y.order() as u64) as u32;
        let ex = p.x.exponent_in(m) as i64;
        let ey = p.y.exponent_in(m) as i64;
        let mut counts = vec![BigInt::zero(); m as usize];
        for (&(a, b), c) in &self.terms {
            counts[(ex * a + ey * b).rem_euclid(m as i64) as usize] += c;
        }
        CycElem::from_power_coeffs(m, &counts, BigInt::one()).expect("conductor within cap")
    }

    /// Value at arbitrary nonzero field elements.
    pub fn eval_at(&self, x: &CycElem, y: &CycElem) -> Result<CycElem> {
        self.terms.iter().try_fold(CycElem::zero(), |acc, (&(a, b), c)| {
            let term = x.pow(a)?.try_mul(&y.pow(b)?)?;
            acc.try_add(&term.scale(&c.clone().into()))
        })
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b), c)| {
                let mut mono = String::new();
                match a {
                    0 => {}
                    1 => mono.push('x'),
                    _ => mono.push_str(&format!("x^{a}")),
                }
                match b {
                    0 => {}
                    1 => mono.push('y'),
                    _ => mono.push_str(&format!("y^{b}")),
                }
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono,
                    (false, false) => format!("{c}*{mono}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `m_W(x, y) = Σ_{(i1, i2) ∈ W} x^{i1} y^{i2}`.
pub fn char_poly(w: &Window) -> LaurentPoly2 {
    LaurentPoly2::from_terms(w.points().iter().map(|p| ((p.i1, p.i2), BigInt::one())))
}

/// A point of `T^2` whose coordinates are roots of unity.
///
/// Points order by `(order of x, exponent of x, order of y, exponent of y)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct TorusPoint {
    pub x: RootOfUnity,
    pub y: RootOfUnity,
}

impl TorusPoint {
    pub fn new(x: RootOfUnity, y: RootOfUnity) -> Self {
        TorusPoint { x, y }
    }

    /// `(ζ_m^a, ζ_m^b)`.
    pub fn from_exponents(m: u32, a: i64, b: i64) -> Self {
        TorusPoint::new(RootOfUnity::new(m, a), RootOfUnity::new(m, b))
    }

    pub fn conjugate(&self) -> Self {
        TorusPoint::new(self.x.inv(), self.y.inv())
    }

    pub fn swap(&self) -> Self {
        TorusPoint::new(self.y, self.x)
    }

    /// Simultaneous Galois action `ζ ↦ ζ^s` on both coordinates.
    pub fn galois(&self, s: i64) -> Self {
        TorusPoint::new(self.x.galois(s), self.y.galois(s))
    }

    /// Least common multiple of the coordinate orders.
    pub fn conductor(&self) -> u32 {
        lcm(self.x.order() as u64, self.y.order() as u64) as u32
    }

    pub fn x_elem(&self) -> CycElem {
        self.x.to_elem().expect("within cap")
    }

    pub fn y_elem(&self) -> CycElem {
        self.y.to_elem().expect("within cap")
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Zero locus of `m_{S(n)*}` on `T^2` from the closed form
/// `⋃_{c ∈ μ_{n-1}} (S1(c) ∪ S2(c))`, with
/// `S1(c) = {(x, y) ∈ (μ*_{n-1})^2 : xy = c}` and
/// `S2(c) = {(x, y) ∈ (μ*_{(n-1)(n+1)})^2 : xy = c, x^{n+1} = c}`.
///
/// Every returned point is checked to be an exact zero.
pub fn square_zero_locus(n: u32) -> Result<Vec<TorusPoint>> {
    if n < 2 {
        return domain(format!("zero locus needs n >= 2, got {n}"));
    }
    let m = (n as i64 - 1) * (n as i64 + 1);
    check_conductor(m as u64)?;
    let k = n as i64 - 1;
    let mut points = BTreeSet::new();
    for a in 0..k {
        // c = ζ_{n-1}^a = ζ_M^{a(n+1)}
        let c_exp = a * (n as i64 + 1);
        for e in 1..k {
            let y = (a - e).rem_euclid(k);
            if y != 0 {
                points.insert(TorusPoint::from_exponents(k as u32, e, y));
            }
        }
        for e in 1..m {
            if (e * (n as i64 + 1) - c_exp).rem_euclid(m) != 0 {
                continue;
            }
            let y = (c_exp - e).rem_euclid(m);
            if y != 0 {
                points.insert(TorusPoint::from_exponents(m as u32, e, y));
            }
        }
    }
    let m_star = char_poly(&punctured_square(n)?);
    for p in &points {
        if !m_star.eval(p).is_zero() {
            return Err(Error::Verification(format!("{p} is not a zero of m_S({n})*")));
        }
    }
    Ok(points.into_iter().collect())
}

/// Zero locus of `m_{S(n)*}` by exact evaluation at every pair in `μ_M × μ_M`,
/// `M = (n-1)(n+1)`.
pub fn zero_locus_oracle(n: u32) -> Result<Vec<TorusPoint>> {
    if n < 2 {
        return domain(format!("zero locus needs n >= 2, got {n}"));
    }
    let m = (n - 1) * (n + 1);
    check_conductor(m as u64)?;
    let poly = char_poly(&punctured_square(n)?);
    let mut points: Vec<TorusPoint> = (0..m as i64)
        .into_par_iter()
        .flat_map_iter(|a| {
            let poly = &poly;
            (0..m as i64).filter_map(move |b| {
                let p = TorusPoint::from_exponents(m, a, b);
                poly.eval(&p).is_zero().then_some(p)
            })
        })
        .collect();
    points.sort();
    Ok(points)
}

fn check_conductor(m: u64) -> Result<()> {
    let cap = conductor_cap();
    if m > cap {
        return Err(Error::ConductorCap { requested: m, cap });
    }
    Ok(())
}

/// Size of the zero locus predicted by counting the two families:
/// `(n-2)^2` points in `(μ*_{n-1})^2`, `n^2 - 2` points with `x ∈ μ*_M`, `y = x^n`,
/// and `n - 2` diagonal points counted twice.
pub fn zero_locus_size(n: u32) -> usize {
    let n = n as usize;
    (n - 2) * (n - 2) + n * n - n
}

/// Result of the floating-point scan of `|m_{S(n)*}|` over a uniform grid on `T^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub grid: usize,
    /// Grid points with `|m| < tol`.
    pub near_zero: usize,
    /// Near-zero grid points farther than four grid steps (in angle) from every exact zero.
    pub stray: Vec<(f64, f64)>,
}

/// Non-gating numeric sanity check of the exact zero locus.
pub fn numeric_scan(n: u32, grid: usize, tol: f64) -> Result<ScanReport> {
    let exact = square_zero_locus(n)?;
    let angle = |r: &RootOfUnity| std::f64::consts::TAU * r.exp() as f64 / r.order() as f64;
    let zeros: Vec<(f64, f64)> = exact.iter().map(|p| (angle(&p.x), angle(&p.y))).collect();
    let geometric = |t: f64| {
        let z = num_complex::Complex64::from_polar(1.0, t);
        (0..n).fold(num_complex::Complex64::new(0.0, 0.0), |acc, k| acc + z.powu(k))
    };
    let step = std::f64::consts::TAU / grid as f64;
    let gx: Vec<_> = (0..grid).map(|i| geometric(i as f64 * step)).collect();
    let circ = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(std::f64::consts::TAU);
        d.min(std::f64::consts::TAU - d)
    };
    let radius = 4.0 * step + 1e-9;
    let mut near_zero = 0;
    let mut stray = Vec::new();
    for (i, gi) in gx.iter().enumerate() {
        for (j, gj) in gx.iter().enumerate() {
            if (gi * gj - 1.0).norm() >= tol {
                continue;
            }
            near_zero += 1;
            let (t1, t2) = (i as f64 * step, j as f64 * step);
            if !zeros.iter().any(|&(z1, z2)| circ(t1, z1).max(circ(t2, z2)) < radius) {
                stray.push((t1, t2));
            }
        }
    }
    Ok(ScanReport { grid, near_zero, stray })
}

/// Exact complex approximation of a torus point (display only).
pub fn approx_point(p: &TorusPoint) -> (num_complex::Complex64, num_complex::Complex64) {
    (p.x_elem().approx_complex(), p.y_elem().approx_complex())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::square_window;
    use proptest::prelude::*;

    fn pt(m: u32, a: i64, b: i64) -> TorusPoint {
        TorusPoint::from_exponents(m, a, b)
    }

    #[test]
    fn char_poly_examples() {
        let s2 = char_poly(&square_window(2).unwrap());
        assert_eq!(s2.terms().len(), 4);
        for e in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            assert_eq!(s2.coeff(e), BigInt::one());
        }
        let s2p = char_poly(&punctured_square(2).unwrap());
        assert_eq!(s2p.to_string(), "y + x + xy");
        let origin = Window::new([crate::lattice::LatticePoint::ORIGIN]).unwrap();
        assert_eq!(char_poly(&origin).to_string(), "1");
    }

    #[test]
    fn star_examples() {
        let f = char_poly(&punctured_square(2).unwrap());
        let s = f.star();
        assert_eq!(s.coeff((-1, 0)), BigInt::one());
        assert_eq!(s.coeff((0, -1)), BigInt::one());
        assert_eq!(s.coeff((-1, -1)), BigInt::one());
        assert_eq!(s.terms().len(), 3);
        let one = LaurentPoly2::from_terms([((0, 0), BigInt::one())]);
        assert_eq!(one.star(), one);
    }

    proptest! {
        #[test]
        fn star_is_involution(terms in proptest::collection::vec(((-5i64..5, -5i64..5), -9i64..9), 0..12)) {
            let f = LaurentPoly2::from_terms(terms.into_iter().map(|(e, c)| (e, BigInt::from(c))));
            prop_assert_eq!(f.star().star(), f);
        }
    }

    #[test]
    fn eval_examples() {
        let m2 = char_poly(&punctured_square(2).unwrap());
        assert!(m2.eval(&pt(3, 1, 2)).is_zero());
        assert_eq!(m2.eval(&pt(1, 0, 0)), CycElem::from_integer(3));
        let m3 = char_poly(&punctured_square(3).unwrap());
        assert!(m3.eval(&pt(2, 1, 1)).is_zero());
        // The generic evaluation route agrees.
        let p = pt(8, 1, 3);
        assert_eq!(m3.eval_at(&p.x_elem(), &p.y_elem()).unwrap(), m3.eval(&p));
    }

    #[test]
    fn locus_n2() {
        let v = square_zero_locus(2).unwrap();
        assert_eq!(v, vec![pt(3, 1, 2), pt(3, 2, 1)]);
    }

    #[test]
    fn locus_n3_matches_listed_points() {
        let v = square_zero_locus(3).unwrap();
        let want = vec![
            pt(2, 1, 1),
            pt(4, 1, 3),
            pt(4, 3, 1),
            pt(8, 1, 3),
            pt(8, 3, 1),
            pt(8, 5, 7),
            pt(8, 7, 5),
        ];
        assert_eq!(v, want);
    }

    #[test]
    fn locus_matches_oracle_and_count() {
        for n in 2..=6 {
            let closed = square_zero_locus(n).unwrap();
            assert_eq!(closed, zero_locus_oracle(n).unwrap(), "n = {n}");
            assert_eq!(closed.len(), zero_locus_size(n), "n = {n}");
        }
        assert_eq!(square_zero_locus(4).unwrap().len(), 16);
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(zero_locus_oracle(2).unwrap().len(), 2);
        assert_eq!(zero_locus_oracle(3).unwrap().len(), 7);
    }

    #[test]
    fn locus_symmetries() {
        for n in 2..=7 {
            let v: BTreeSet<_> = square_zero_locus(n).unwrap().into_iter().collect();
            for p in &v {
                assert!(v.contains(&p.conjugate()), "conjugate of {p}");
                assert!(v.contains(&p.swap()), "swap of {p}");
                // x^{n-1} y^{n-1} = 1
                assert!(p.x.mul(&p.y).pow(n as i64 - 1).is_one());
            }
        }
    }

    #[test]
    fn numeric_scan_finds_no_stray_minima() {
        for n in [2, 3] {
            let r = numeric_scan(n, 720, 1e-6).unwrap();
            assert!(r.stray.is_empty(), "n = {n}: {:?}", r.stray);
            // 720 is divisible by every conductor involved, so each exact zero is a grid point.
            assert_eq!(r.near_zero, zero_locus_size(n));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(square_zero_locus(1).is_err());
        assert!(zero_locus_oracle(0).is_err());
    }
}
