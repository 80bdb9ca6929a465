//! Scalar contracts. Every array routine in the crate is generic over [`Ring`];
//! elimination routines additionally need [`Field`].
//!
//! Only exact types implement these traits. There is deliberately no impl for
//! `f32`/`f64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A commutative ring with exact equality.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Image of an integer under the canonical map `Z -> R`.
    fn from_int(v: i64) -> Self;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;
}

impl Ring for BigInt {
    fn from_int(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Ring for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Integers modulo a compile-time modulus `M >= 2`. When `M` is prime this is
/// the prime field and [`Field`] is available.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Zmod<const M: u32>(u32);

/// Prime field alias. Primality of `P` is checked when inverting.
pub type Fp<const P: u32> = Zmod<P>;

impl<const M: u32> Zmod<M> {
    pub fn new(v: i64) -> Self {
        Zmod(v.rem_euclid(M as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub const fn modulus() -> u32 {
        M
    }
}

impl<const M: u32> fmt::Debug for Zmod<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, M)
    }
}

impl<const M: u32> fmt::Display for Zmod<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const M: u32> Add for Zmod<M> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Zmod(((self.0 as u64 + rhs.0 as u64) % M as u64) as u32)
    }
}

impl<const M: u32> Sub for Zmod<M> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Zmod(((self.0 as u64 + M as u64 - rhs.0 as u64) % M as u64) as u32)
    }
}

impl<const M: u32> Mul for Zmod<M> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Zmod(((self.0 as u64 * rhs.0 as u64) % M as u64) as u32)
    }
}

impl<const M: u32> Neg for Zmod<M> {
    type Output = Self;
    fn neg(self) -> Self {
        Zmod((M - self.0) % M)
    }
}

impl<const M: u32> Zero for Zmod<M> {
    fn zero() -> Self {
        Zmod(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const M: u32> One for Zmod<M> {
    fn one() -> Self {
        Zmod(1 % M)
    }
}

impl<const M: u32> Ring for Zmod<M> {
    fn from_int(v: i64) -> Self {
        Zmod::new(v)
    }
}

impl<const M: u32> Field for Zmod<M> {
    fn inverse(&self) -> Option<Self> {
        assert!(is_prime(M as u64), "Zmod<{M}> is not a field");
        if self.0 == 0 {
            return None;
        }
        Some(Zmod(pow_mod(self.0 as u64, M as u64 - 2, M as u64) as u32))
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Formats a rational as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}{}/{}", r.numer().abs(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_arithmetic_wraps() {
        let a = Zmod::<9>::new(7);
        let b = Zmod::<9>::new(5);
        assert_eq!((a + b).value(), 3);
        assert_eq!((b - a).value(), 7);
        assert_eq!((a * b).value(), 8);
        assert_eq!((-a).value(), 2);
        assert_eq!(Zmod::<9>::new(-1).value(), 8);
    }

    #[test]
    fn prime_field_inverse() {
        for v in 1..7 {
            let x = Fp::<7>::new(v);
            assert_eq!(x * x.inverse().unwrap(), Fp::<7>::one());
        }
        assert!(Fp::<7>::zero().inverse().is_none());
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "5/7", "-2/9"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
