//! Bounded fixed arrays of square windows: character arrays `x^i y^j` at
//! zero-locus points, their periods, and rational bases built from Galois orbits.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::array::{is_fixed, is_zero_sum, TorusArray};
use crate::cyclotomic::{gcd, lcm, CycElem};
use crate::error::{domain, Error, Result};
use crate::lattice::{punctured_square, square_window, LatticePoint};
use crate::linalg::{in_span, rank_of};
use crate::spectra::{square_zero_locus, TorusPoint};

/// The array `(i, j) ↦ x^i y^j` realized on a torus.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterArray {
    pub point: TorusPoint,
    pub array: TorusArray<CycElem>,
}

/// Exact values `x^i y^j` on a torus whose dims are multiples of the orders of `x` and `y`.
pub fn character_array(p: TorusPoint, dims: (usize, usize)) -> Result<CharacterArray> {
    let (ox, oy) = (p.x.order() as usize, p.y.order() as usize);
    if dims.0 == 0 || dims.1 == 0 || dims.0 % ox != 0 || dims.1 % oy != 0 {
        return Err(Error::IncompatibleDims(format!(
            "dims {}x{} are not multiples of the orders ({ox}, {oy}) of {p}",
            dims.0, dims.1
        )));
    }
    let l = p.conductor();
    let (ex, ey) = (p.x.exponent_in(l) as i64, p.y.exponent_in(l) as i64);
    let powers: Vec<CycElem> = (0..l as i64)
        .map(|k| crate::cyclotomic::root_of_unity(l, k))
        .collect::<Result<_>>()?;
    let array = TorusArray::from_fn(dims.0, dims.1, |i, j| {
        powers[(ex * i + ey * j).rem_euclid(l as i64) as usize].clone()
    });
    Ok(CharacterArray { point: p, array })
}

impl CharacterArray {
    /// Character array on its own minimal torus.
    pub fn minimal(p: TorusPoint) -> Result<Self> {
        character_array(p, (p.x.order() as usize, p.y.order() as usize))
    }
}

/// `((ord x, 0), (0, ord y))`, checked against the stored values.
pub fn period_lattice(a: &CharacterArray) -> (LatticePoint, LatticePoint) {
    let p = LatticePoint::new(a.point.x.order() as i64, 0);
    let q = LatticePoint::new(0, a.point.y.order() as i64);
    let (n1, n2) = a.array.dims();
    for j in 0..n2 as i64 {
        for i in 0..n1 as i64 {
            let v = a.array.get(i, j);
            debug_assert!(v == a.array.get(i + p.i1, j) && v == a.array.get(i, j + q.i2));
        }
    }
    (p, q)
}

/// `(lcm of x-orders, lcm of y-orders)` over a set of points.
pub fn fundamental_dims(points: &[TorusPoint]) -> (usize, usize) {
    points.iter().fold((1, 1), |(a, b), p| {
        (
            lcm(a as u64, p.x.order() as u64) as usize,
            lcm(b as u64, p.y.order() as u64) as usize,
        )
    })
}

/// One character array per zero-locus point of `m_{S(n)*}`, each on the
/// fundamental torus of the whole locus.
pub fn bounded_basis(n: u32) -> Result<Vec<CharacterArray>> {
    let points = square_zero_locus(n)?;
    let dims = fundamental_dims(&points);
    points.par_iter().map(|&p| character_array(p, dims)).collect()
}

/// Rational basis of the bounded fixed arrays of `S(n)` on the fundamental torus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalBasis {
    pub n: u32,
    pub dims: (usize, usize),
    /// Galois orbits of the zero locus, in order of their least point.
    pub orbits: Vec<Vec<TorusPoint>>,
    #[serde(skip)]
    pub arrays: Vec<TorusArray<BigRational>>,
    /// Periods `(p, q)` of each array.
    pub periods: Vec<(LatticePoint, LatticePoint)>,
    /// For each array, the index of its orbit and the horizontal shift `t` used.
    pub provenance: Vec<(usize, i64)>,
}

/// Partition into orbits under the simultaneous Galois action `ζ ↦ ζ^s`.
pub fn galois_orbits(points: &[TorusPoint]) -> Vec<Vec<TorusPoint>> {
    let mut seen = BTreeSet::new();
    let mut sorted = points.to_vec();
    sorted.sort();
    let mut orbits = Vec::new();
    for p in sorted {
        if seen.contains(&p) {
            continue;
        }
        let l = p.conductor() as u64;
        let orbit: BTreeSet<TorusPoint> = (1..=l.max(1))
            .filter(|&s| gcd(s, l) == 1)
            .map(|s| p.galois(s as i64))
            .collect();
        seen.extend(orbit.iter().copied());
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// Orbit sum `Σ_{(x,y) ∈ O} x^{i+t} y^j` for `t = 0..|O|-1`, over every Galois
/// orbit `O` of the zero locus.
///
/// Fails with [`Error::RankDeficient`] when these arrays do not span a space of
/// dimension `#V`.
pub fn rational_basis(n: u32) -> Result<RationalBasis> {
    let points = square_zero_locus(n)?;
    let dims = fundamental_dims(&points);
    let orbits = galois_orbits(&points);
    let per_orbit: Vec<Vec<(TorusArray<BigRational>, i64)>> = orbits
        .par_iter()
        .map(|orbit| orbit_arrays(orbit, dims))
        .collect::<Result<_>>()?;
    let window = punctured_square(n)?;
    let mut basis = RationalBasis {
        n,
        dims,
        orbits: orbits.clone(),
        arrays: Vec::new(),
        periods: Vec::new(),
        provenance: Vec::new(),
    };
    for (k, (orbit, arrays)) in orbits.iter().zip(per_orbit).enumerate() {
        let period = (
            LatticePoint::new(orbit.iter().map(|p| p.x.order() as u64).fold(1, lcm) as i64, 0),
            LatticePoint::new(0, orbit.iter().map(|p| p.y.order() as u64).fold(1, lcm) as i64),
        );
        for (a, t) in arrays {
            if !is_zero_sum(&window, &a) {
                return Err(Error::Verification(format!("orbit {k} shift {t} is not in the kernel")));
            }
            basis.arrays.push(a);
            basis.periods.push(period);
            basis.provenance.push((k, t));
        }
    }
    let vectors: Vec<Vec<BigRational>> = basis.arrays.iter().map(|a| a.values().to_vec()).collect();
    let rank = rank_of(&vectors);
    if rank != points.len() {
        return Err(Error::RankDeficient { n, rank, expected: points.len() });
    }
    Ok(basis)
}

fn orbit_arrays(orbit: &[TorusPoint], dims: (usize, usize)) -> Result<Vec<(TorusArray<BigRational>, i64)>> {
    let chars: Vec<CharacterArray> = orbit.iter().map(|&p| character_array(p, dims)).collect::<Result<_>>()?;
    let mut sum = TorusArray::filled(dims.0, dims.1, CycElem::zero());
    for c in &chars {
        sum = sum.add(&c.array)?;
    }
    let rational = to_rational(&sum)?;
    Ok((0..orbit.len() as i64)
        .map(|t| (rational.translate(LatticePoint::new(t, 0)), t))
        .collect())
}

/// Converts a cyclotomic array to a rational one, failing if any entry is irrational.
pub fn to_rational(a: &TorusArray<CycElem>) -> Result<TorusArray<BigRational>> {
    let (n1, n2) = a.dims();
    let values = a
        .values()
        .iter()
        .map(|v| v.as_rational().ok_or_else(|| Error::Verification(format!("irrational entry {v}"))))
        .collect::<Result<_>>()?;
    TorusArray::new(n1, n2, values)
}

/// Whether every character array of the locus lies in the `Q(ζ)`-span of the
/// rational basis. Each power-basis coordinate of a character array is a rational
/// array; the character array is in the span exactly when all of them are in the
/// rational span.
pub fn spans_characters(basis: &RationalBasis) -> Result<bool> {
    let vectors: Vec<Vec<BigRational>> = basis.arrays.iter().map(|a| a.values().to_vec()).collect();
    for orbit in &basis.orbits {
        for &p in orbit {
            let c = character_array(p, basis.dims)?;
            let l = p.conductor();
            let coords: Vec<Vec<BigRational>> =
                c.array.values().iter().map(|v| v.embed(l).map(|e| e.coeffs())).collect::<Result<_>>()?;
            let width = coords.first().map_or(0, Vec::len);
            for k in 0..width {
                let column: Vec<BigRational> = coords.iter().map(|c| c[k].clone()).collect();
                if !in_span(&vectors, &column) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Checks that every element of `bounded_basis(n)` is fixed by `S(n)`.
pub fn check_bounded_fixed(n: u32) -> Result<bool> {
    if n < 2 {
        return domain(format!("n must be >= 2, got {n}"));
    }
    let w = square_window(n)?;
    let basis = bounded_basis(n)?;
    Ok(basis.par_iter().all(|c| is_fixed(&w, &c.array)))
}

/// Rational array from integer closed form, for golden comparisons.
pub fn int_array(n1: usize, n2: usize, f: impl FnMut(i64, i64) -> i64) -> TorusArray<BigRational> {
    let mut f = f;
    TorusArray::from_fn(n1, n2, |i, j| BigRational::from_integer(BigInt::from(f(i, j))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{root_of_unity, RootOfUnity};

    fn pt(m: u32, a: i64, b: i64) -> TorusPoint {
        TorusPoint::from_exponents(m, a, b)
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn character_examples() {
        let a1 = character_array(pt(3, 1, 2), (3, 3)).unwrap();
        let z3 = root_of_unity(3, 1).unwrap();
        assert_eq!(a1.array.get(1, 1), &z3.pow(3).unwrap());
        assert_eq!(a1.array.get(1, 0), &z3);
        assert!(is_fixed(&square_window(2).unwrap(), &a1.array));

        let checker = character_array(pt(2, 1, 1), (2, 2)).unwrap();
        assert_eq!(checker.array.get(0, 0), &CycElem::from_integer(1));
        assert_eq!(checker.array.get(1, 0), &CycElem::from_integer(-1));
        assert_eq!(checker.array.get(1, 1), &CycElem::from_integer(1));
        assert!(is_fixed(&square_window(3).unwrap(), &checker.array));

        let ones = character_array(TorusPoint::new(RootOfUnity::one(), RootOfUnity::one()), (2, 2)).unwrap();
        let d = crate::array::delta(&punctured_square(2).unwrap(), &ones.array);
        assert!(d.values().iter().all(|v| v == &CycElem::from_integer(3)));
        assert!(!is_fixed(&square_window(2).unwrap(), &ones.array));
    }

    #[test]
    fn character_dims_error() {
        assert!(matches!(character_array(pt(3, 1, 2), (2, 3)), Err(Error::IncompatibleDims(_))));
        assert!(character_array(pt(3, 1, 2), (6, 9)).is_ok());
    }

    #[test]
    fn periods() {
        let a = CharacterArray::minimal(pt(8, 1, 3)).unwrap();
        assert_eq!(period_lattice(&a), (LatticePoint::new(8, 0), LatticePoint::new(0, 8)));
        let a = CharacterArray::minimal(pt(4, 1, 3)).unwrap();
        assert_eq!(period_lattice(&a), (LatticePoint::new(4, 0), LatticePoint::new(0, 4)));
        let a = CharacterArray::minimal(pt(1, 0, 0)).unwrap();
        assert_eq!(period_lattice(&a), (LatticePoint::new(1, 0), LatticePoint::new(0, 1)));
    }

    #[test]
    fn basis_counts_and_periods() {
        assert_eq!(bounded_basis(2).unwrap().len(), 2);
        let b3 = bounded_basis(3).unwrap();
        let periods: Vec<i64> = b3.iter().map(|c| period_lattice(c).0.i1).collect();
        assert_eq!(periods, vec![2, 4, 4, 8, 8, 8, 8]);
        assert!(b3.iter().all(|c| { let (p, q) = period_lattice(c); p.i1 == q.i2 }));
        assert_eq!(bounded_basis(4).unwrap().len(), 16);
    }

    #[test]
    fn bounded_arrays_are_fixed() {
        for n in 2..=4 {
            assert!(check_bounded_fixed(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn orbits_n3() {
        let orbits = galois_orbits(&square_zero_locus(3).unwrap());
        let sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 4]);
        assert_eq!(orbits[1], vec![pt(4, 1, 3), pt(4, 3, 1)]);
    }

    #[test]
    fn rational_basis_n2_matches_closed_forms() {
        let b = rational_basis(2).unwrap();
        assert_eq!(b.dims, (3, 3));
        assert_eq!(b.arrays.len(), 2);
        let b1 = int_array(3, 3, |i, j| if (i - j).rem_euclid(3) == 0 { 2 } else { -1 });
        assert_eq!(b.arrays[0], b1);
        // Ex 2.1's second array is (b¹ + 2 T_(1,0) b¹) / 3.
        let b2 = int_array(3, 3, |i, j| match (i - j).rem_euclid(3) {
            0 => 0,
            1 => 1,
            _ => -1,
        });
        let combo = b.arrays[0]
            .add(&b.arrays[1].scale(&q(2)))
            .unwrap()
            .scale(&BigRational::new(1.into(), 3.into()));
        assert_eq!(combo, b2);
        // Scaling keeps an array in the kernel.
        assert!(is_zero_sum(&punctured_square(2).unwrap(), &b.arrays[0].scale(&q(5))));
    }

    #[test]
    fn rational_basis_n3_translates() {
        let b = rational_basis(3).unwrap();
        assert_eq!(b.arrays.len(), 7);
        assert_eq!(b.dims, (8, 8));
        assert_eq!(b.arrays[2], b.arrays[1].translate(LatticePoint::new(1, 0)));
        let periods: Vec<i64> = b.periods.iter().map(|p| p.0.i1).collect();
        assert_eq!(periods, vec![2, 4, 4, 8, 8, 8, 8]);
    }

    #[test]
    fn rational_span_contains_characters() {
        for n in 2..=4 {
            let b = rational_basis(n).unwrap();
            assert!(spans_characters(&b).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn to_rational_rejects_irrational() {
        let a = character_array(pt(3, 1, 2), (3, 3)).unwrap();
        assert!(to_rational(&a.array).is_err());
    }
}
