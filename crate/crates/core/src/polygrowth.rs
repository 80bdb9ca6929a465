//! Polynomial-growth fixed arrays.
//!
//! At a zero-locus point `p` the characteristic polynomial is re-centred,
//! `m^p(w) = m(w + p)`, turned into a constant-coefficient differential operator
//! `D_p = F₋(m^p)` with `F₋(w_i) = -∂_i`, and each polynomial solution `g` of
//! `D_p g = 0` yields the array `k ↦ Σ c_s (-k)^{s̄} p^{k-s}` where
//! `g = Σ c_s w^s`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::array::{delta_patch, PatchArray, Rect};
use crate::cyclotomic::{root_of_unity, CycElem};
use crate::error::{Error, Result};
use crate::lattice::Window;
use crate::linalg::Matrix;
use crate::spectra::TorusPoint;

type Terms = BTreeMap<(u32, u32), CycElem>;

fn add_into(terms: &mut Terms, s: (u32, u32), c: CycElem) {
    if c.is_zero() {
        return;
    }
    let sum = match terms.remove(&s) {
        Some(old) => old.try_add(&c).expect("conductor within cap"),
        None => c,
    };
    if !sum.is_zero() {
        terms.insert(s, sum);
    }
}

/// Monomial exponents of total degree at most `n` in graded order:
/// `1, x, y, x², xy, y², …`.
pub fn graded_monomials(n: u32) -> Vec<(u32, u32)> {
    (0..=n).flat_map(|d| (0..=d).rev().map(move |a| (a, d - a))).collect()
}

fn graded_key(s: &(u32, u32)) -> (u32, std::cmp::Reverse<u32>) {
    (s.0 + s.1, std::cmp::Reverse(s.0))
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &Terms, var: [&str; 2]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    let mut keys: Vec<_> = terms.keys().copied().collect();
    keys.sort_by_key(graded_key);
    let mut first = true;
    for s in keys {
        let c = &terms[&s];
        let mut mono = Vec::new();
        for (e, v) in [s.0, s.1].into_iter().zip(var) {
            match e {
                0 => {}
                1 => mono.push(v.to_string()),
                _ => mono.push(format!("{v}^{e}")),
            }
        }
        let mono = mono.join("*");
        let coef = c.to_string();
        let (neg, body) = if coef.starts_with('-') && !coef.contains(' ') {
            (true, coef[1..].to_string())
        } else {
            (false, coef)
        };
        let simple = !body.contains(' ');
        let body = if mono.is_empty() {
            if simple { body } else { format!("({body})") }
        } else if body == "1" {
            mono
        } else if simple {
            format!("{body}*{mono}")
        } else {
            format!("({body})*{mono}")
        };
        match (first, neg) {
            (true, true) => write!(f, "-{body}")?,
            (true, false) => write!(f, "{body}")?,
            (false, true) => write!(f, " - {body}")?,
            (false, false) => write!(f, " + {body}")?,
        }
        first = false;
    }
    Ok(())
}

/// Polynomial in the local coordinates `w = (w₁, w₂)`, written `x, y`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Poly2 {
    terms: Terms,
}

/// Constant-coefficient differential operator `Σ c_s ∂^s`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct DiffOp2 {
    terms: Terms,
}

macro_rules! term_container {
    ($t:ty) => {
        impl $t {
            pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), CycElem)>) -> Self {
                let mut out = Terms::new();
                for (s, c) in terms {
                    add_into(&mut out, s, c);
                }
                Self { terms: out }
            }

            pub fn terms(&self) -> &BTreeMap<(u32, u32), CycElem> {
                &self.terms
            }

            pub fn coeff(&self, s: (u32, u32)) -> CycElem {
                self.terms.get(&s).cloned().unwrap_or_else(CycElem::zero)
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            /// Largest `s₁ + s₂` over the support; `None` for zero.
            pub fn degree(&self) -> Option<u32> {
                self.terms.keys().map(|s| s.0 + s.1).max()
            }

            pub fn support(&self) -> BTreeSet<(u32, u32)> {
                self.terms.keys().copied().collect()
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = self.terms.clone();
                for (&s, c) in &other.terms {
                    add_into(&mut out, s, c.clone());
                }
                Self { terms: out }
            }

            pub fn scale(&self, c: &CycElem) -> Self {
                Self::from_terms(self.terms.iter().map(|(&s, v)| (s, v.try_mul(c).expect("conductor within cap"))))
            }
        }
    };
}

term_container!(Poly2);
term_container!(DiffOp2);

impl Poly2 {
    /// Polynomial with integer coefficients.
    pub fn from_int_terms(terms: &[((u32, u32), i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(s, c)| (s, CycElem::from_integer(c))))
    }

    /// Coefficient vector over `graded_monomials(n)`.
    pub fn to_vector(&self, n: u32) -> Vec<CycElem> {
        graded_monomials(n).into_iter().map(|s| self.coeff(s)).collect()
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, ["x", "y"])
    }
}

impl fmt::Display for DiffOp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, ["d1", "d2"])
    }
}

/// `m_W(w₁ + x, w₂ + y)` for `p = (x, y)`, by binomial expansion.
///
/// The constant term is `m_W(p)`; it vanishes exactly when `p` is on the zero locus.
pub fn shift_char_poly(w: &Window, p: &TorusPoint) -> Result<Poly2> {
    if w.points().iter().any(|q| q.i1 < 0 || q.i2 < 0) {
        return Err(Error::UnsupportedWindow);
    }
    let l = p.conductor();
    let (ex, ey) = (p.x.exponent_in(l) as i64, p.y.exponent_in(l) as i64);
    let mut counts: BTreeMap<(u32, u32), Vec<BigInt>> = BTreeMap::new();
    for q in w.points() {
        let (a, b) = (q.i1 as u32, q.i2 as u32);
        for s1 in 0..=a {
            for s2 in 0..=b {
                let c = binomial(BigInt::from(a), BigInt::from(s1)) * binomial(BigInt::from(b), BigInt::from(s2));
                let e = (ex * (a - s1) as i64 + ey * (b - s2) as i64).rem_euclid(l as i64) as usize;
                counts.entry((s1, s2)).or_insert_with(|| vec![BigInt::zero(); l as usize])[e] += c;
            }
        }
    }
    let terms = counts
        .into_iter()
        .map(|(s, c)| Ok((s, CycElem::from_power_coeffs(l, &c, BigInt::one())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly2::from_terms(terms))
}

/// `F₋`: `w^s ↦ (-1)^{s₁+s₂} ∂^s`.
pub fn f_minus(g: &Poly2) -> DiffOp2 {
    DiffOp2::from_terms(g.terms.iter().map(|(&s, c)| {
        let c = if (s.0 + s.1) % 2 == 1 { -c.clone() } else { c.clone() };
        (s, c)
    }))
}

/// `F₋^{-1}` restricted to polynomials: `w^s ↦ ∂^s` with the same coefficients.
pub fn f_minus_inv(g: &Poly2) -> DiffOp2 {
    DiffOp2 { terms: g.terms.clone() }
}

/// `D_p = F₋(m_W(w + p))`; fails unless `p` is a zero of `m_W`.
pub fn operator_at(w: &Window, p: &TorusPoint) -> Result<DiffOp2> {
    let shifted = shift_char_poly(w, p)?;
    if !shifted.coeff((0, 0)).is_zero() {
        return Err(Error::NotApplicable(format!("{p} is not a zero of the characteristic polynomial")));
    }
    Ok(f_minus(&shifted))
}

fn falling(t: u32, s: u32) -> BigInt {
    (0..s).fold(BigInt::one(), |acc, k| acc * BigInt::from(t - k))
}

/// Formal application `D g`.
pub fn apply(d: &DiffOp2, g: &Poly2) -> Poly2 {
    let mut out = Terms::new();
    for (&s, c) in &d.terms {
        for (&t, v) in &g.terms {
            if t.0 < s.0 || t.1 < s.1 {
                continue;
            }
            let k: BigRational = (falling(t.0, s.0) * falling(t.1, s.1)).into();
            let term = c.try_mul(v).expect("conductor within cap").scale(&k);
            add_into(&mut out, (t.0 - s.0, t.1 - s.1), term);
        }
    }
    Poly2 { terms: out }
}

/// Polynomial solutions of `D g = 0` of degree at most `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSpace {
    pub bound: u32,
    /// Basis in increasing degree; element degrees are non-decreasing.
    pub basis: Vec<Poly2>,
    pub dimension: usize,
}

impl SolutionSpace {
    /// `dim Sol(D)_{≤d}` for `d ≤ bound`.
    pub fn dim_upto(&self, d: u32) -> usize {
        self.basis.iter().filter(|g| g.degree().unwrap_or(0) <= d).count()
    }

    /// Representatives of `Sol(D)_{=d}`: basis elements of degree exactly `d`.
    pub fn graded_representatives(&self, d: u32) -> Vec<&Poly2> {
        self.basis.iter().filter(|g| g.degree().unwrap_or(0) == d).collect()
    }
}

/// Kernel of `D` acting on polynomials of degree `≤ n`, by exact elimination.
///
/// Monomial columns are in graded order, so the basis vector attached to a free
/// column has exactly that column's degree.
pub fn sol_space(d: &DiffOp2, n: u32) -> SolutionSpace {
    let monos = graded_monomials(n);
    let index: BTreeMap<(u32, u32), usize> = monos.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut m = Matrix::zeros(monos.len(), monos.len());
    for (col, &t) in monos.iter().enumerate() {
        let image = apply(d, &Poly2::from_terms([(t, CycElem::one())]));
        for (s, c) in image.terms {
            m.set(index[&s], col, c);
        }
    }
    let basis: Vec<Poly2> = m
        .kernel()
        .into_iter()
        .map(|v| Poly2::from_terms(monos.iter().copied().zip(v)))
        .collect();
    SolutionSpace { bound: n, dimension: basis.len(), basis }
}

/// The lattice simplex `{(i, j) ∈ Z²_{≥0} : i + j ≤ n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexN {
    pub n: u32,
}

impl SimplexN {
    pub fn points(&self) -> Vec<(u32, u32)> {
        graded_monomials(self.n)
    }

    pub fn len(&self) -> usize {
        ((self.n as usize + 1) * (self.n as usize + 2)) / 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `max{#Δ_{≤n} − #((Δ_{≤n} − supp D) ∩ Z²_{≥0}), 0}`.
pub fn dim_formula(d: &DiffOp2, n: u32) -> usize {
    let simplex = SimplexN { n };
    let support = d.support();
    let diffs: BTreeSet<(i64, i64)> = simplex
        .points()
        .into_iter()
        .flat_map(|i| {
            support
                .iter()
                .map(move |s| (i.0 as i64 - s.0 as i64, i.1 as i64 - s.1 as i64))
        })
        .filter(|&(a, b)| a >= 0 && b >= 0)
        .collect();
    simplex.len().saturating_sub(diffs.len())
}

/// `k^{s̄} = (k+1)(k+2)⋯(k+s)`; `1` when `s = 0`.
pub fn rising_factorial(k: i64, s: u32) -> BigInt {
    (1..=s as i64).fold(BigInt::one(), |acc, t| acc * BigInt::from(k + t))
}

/// Array `k ↦ Σ_s c_s (-k)^{s̄} p^{k-s}` on `rect`, where `g = Σ c_s w^s`.
///
/// The result is checked to satisfy `Δ_W a = 0` on the interior of `rect`.
pub fn array_from_solution(w: &Window, p: &TorusPoint, g: &Poly2, rect: Rect) -> Result<PatchArray<CycElem>> {
    if rect.interior(w).is_none() {
        return Err(Error::IncompatibleDims(format!(
            "{}x{} region has no interior for this window",
            rect.width(),
            rect.height()
        )));
    }
    let a = solution_values(p, g, rect)?.with_generator(format!("{p}: {g}"));
    let d = delta_patch(w, &a)?;
    if let Some(bad) = d.rect().cells().zip(d.values()).find(|(_, v)| !v.is_zero()) {
        return Err(Error::Verification(format!("Δ_W a ≠ 0 at {}", bad.0)));
    }
    Ok(a)
}

/// Step-(E) values on a rectangle, without the kernel check.
pub fn solution_values(p: &TorusPoint, g: &Poly2, rect: Rect) -> Result<PatchArray<CycElem>> {
    let l = p.conductor() as i64;
    let (ex, ey) = (p.x.exponent_in(l as u32) as i64, p.y.exponent_in(l as u32) as i64);
    let powers: Vec<CycElem> = (0..l).map(|k| root_of_unity(l as u32, k)).collect::<Result<_>>()?;
    let c = f_minus_inv(g);
    PatchArray::try_from_fn(rect, |k| {
        c.terms.iter().try_fold(CycElem::zero(), |acc, (&s, cs)| {
            let r = rising_factorial(-k.i1, s.0) * rising_factorial(-k.i2, s.1);
            if r.is_zero() {
                return Ok(acc);
            }
            let e = (ex * (k.i1 - s.0 as i64) + ey * (k.i2 - s.1 as i64)).rem_euclid(l) as usize;
            acc.try_add(&cs.try_mul(&powers[e])?.scale(&r.into()))
        })
    })
}

/// Degree in `t` of `t ↦ a_{(t, 0)} / x^t` for the step-(E) array of `g` at `p`,
/// from exact finite differences over `t = 0..samples`. `None` for the zero function.
pub fn growth_degree(p: &TorusPoint, g: &Poly2, samples: usize) -> Result<Option<usize>> {
    let rect = Rect::new(0, samples as i64 - 1, 0, 0)?;
    let a = solution_values(p, g, rect)?;
    let x = p.x_elem();
    let mut row: Vec<CycElem> = a
        .values()
        .iter()
        .enumerate()
        .map(|(t, v)| v.try_div(&x.pow(t as i64)?))
        .collect::<Result<_>>()?;
    let mut degree = None;
    let mut order = 0;
    while !row.is_empty() {
        if row.iter().any(|v| !v.is_zero()) {
            degree = Some(order);
        }
        row = row.windows(2).map(|w| w[1].try_sub(&w[0])).collect::<Result<_>>()?;
        order += 1;
    }
    Ok(degree)
}

/// Summary of one `(point, degree)` computation, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionReport {
    pub point: TorusPoint,
    pub operator: String,
    pub bound: u32,
    pub dimension: usize,
    pub formula: usize,
    pub representatives: Vec<String>,
}

/// Operator, solution space and dimension formula at `p` up to degree `n`.
pub fn solution_report(w: &Window, p: &TorusPoint, n: u32) -> Result<(DiffOp2, SolutionSpace, SolutionReport)> {
    let d = operator_at(w, p)?;
    let space = sol_space(&d, n);
    let report = SolutionReport {
        point: *p,
        operator: d.to_string(),
        bound: n,
        dimension: space.dimension,
        formula: dim_formula(&d, n),
        representatives: space.graded_representatives(n).iter().map(|g| g.to_string()).collect(),
    };
    Ok((d, space, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{punctured_square, LatticePoint};
    use crate::linalg::in_span;
    use proptest::prelude::*;

    fn z(n: u32, k: i64) -> CycElem {
        root_of_unity(n, k).unwrap()
    }

    fn int(v: i64) -> CycElem {
        CycElem::from_integer(v)
    }

    fn p1() -> TorusPoint {
        TorusPoint::from_exponents(3, 1, 2)
    }

    fn p2() -> TorusPoint {
        TorusPoint::from_exponents(3, 2, 1)
    }

    fn minus_one() -> TorusPoint {
        TorusPoint::from_exponents(2, 1, 1)
    }

    #[test]
    fn shift_examples() {
        let w = punctured_square(2).unwrap();
        let s = shift_char_poly(&w, &p1()).unwrap();
        let want = Poly2::from_terms([((1, 0), -z(3, 1)), ((0, 1), -z(3, 2)), ((1, 1), int(1))]);
        assert_eq!(s, want);
        let s = shift_char_poly(&w, &p2()).unwrap();
        let want = Poly2::from_terms([((1, 0), -z(3, 2)), ((0, 1), -z(3, 1)), ((1, 1), int(1))]);
        assert_eq!(s, want);
        // Off the locus the constant term is m(p).
        let one = TorusPoint::from_exponents(1, 0, 0);
        assert_eq!(shift_char_poly(&w, &one).unwrap().coeff((0, 0)), int(3));
        assert!(operator_at(&w, &one).is_err());
        let neg = Window::new([LatticePoint::new(-1, 0)]).unwrap();
        assert!(matches!(shift_char_poly(&neg, &p1()), Err(Error::UnsupportedWindow)));
    }

    #[test]
    fn shift_constant_vanishes_on_locus() {
        for n in 2..=4 {
            let w = punctured_square(n).unwrap();
            for p in crate::spectra::square_zero_locus(n).unwrap() {
                assert!(shift_char_poly(&w, &p).unwrap().coeff((0, 0)).is_zero());
            }
        }
    }

    #[test]
    fn f_minus_examples() {
        let w = punctured_square(2).unwrap();
        let d = f_minus(&shift_char_poly(&w, &p1()).unwrap());
        let want = DiffOp2::from_terms([((1, 0), z(3, 1)), ((0, 1), z(3, 2)), ((1, 1), int(1))]);
        assert_eq!(d, want);
        assert_eq!(f_minus(&Poly2::from_int_terms(&[((0, 0), 7)])), DiffOp2::from_terms([((0, 0), int(7))]));

        let d = operator_at(&punctured_square(3).unwrap(), &minus_one()).unwrap();
        // (1 + d1 + d1^2)(1 + d2 + d2^2) - 1
        let mut want = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                if (a, b) != (0, 0) {
                    want.push(((a, b), int(1)));
                }
            }
        }
        assert_eq!(d, DiffOp2::from_terms(want));
    }

    #[test]
    fn f_minus_inv_examples() {
        let g = Poly2::from_int_terms(&[((1, 0), 1), ((0, 1), -1)]);
        assert_eq!(f_minus_inv(&g), DiffOp2::from_terms([((1, 0), int(1)), ((0, 1), int(-1))]));
        let g = Poly2::from_int_terms(&[((2, 0), 1), ((1, 1), -2), ((0, 2), 1), ((1, 0), -1), ((0, 1), -1)]);
        assert_eq!(f_minus_inv(&g).terms().len(), 5);
        assert_eq!(f_minus_inv(&g).coeff((1, 1)), int(-2));
        assert_eq!(f_minus_inv(&Poly2::from_int_terms(&[((0, 0), 1)])), DiffOp2::from_terms([((0, 0), int(1))]));
    }

    #[test]
    fn apply_examples() {
        let d = operator_at(&punctured_square(3).unwrap(), &minus_one()).unwrap();
        let g1 = Poly2::from_int_terms(&[((1, 0), 1), ((0, 1), -1)]);
        assert!(apply(&d, &g1).is_zero());
        let g2 = Poly2::from_int_terms(&[((2, 0), 1), ((1, 1), -2), ((0, 2), 1), ((1, 0), -1), ((0, 1), -1)]);
        assert!(apply(&d, &g2).is_zero());
        let d1 = DiffOp2::from_terms([((1, 0), int(1))]);
        assert!(apply(&d1, &Poly2::from_int_terms(&[((0, 3), 1)])).is_zero());
        let dxx = DiffOp2::from_terms([((2, 0), int(1))]);
        assert_eq!(apply(&dxx, &Poly2::from_int_terms(&[((3, 1), 1)])), Poly2::from_int_terms(&[((1, 1), 6)]));
    }

    #[test]
    fn sol_space_ex31() {
        let d = operator_at(&punctured_square(2).unwrap(), &p1()).unwrap();
        for n in 0..=10 {
            let s = sol_space(&d, n);
            assert_eq!(s.dimension, n as usize + 1, "N = {n}");
            assert!(s.basis.iter().all(|g| apply(&d, g).is_zero()));
            assert_eq!(dim_formula(&d, n), n as usize + 1);
        }
        let s = sol_space(&d, 2);
        let basis: Vec<Vec<CycElem>> = s.basis.iter().map(|g| g.to_vector(2)).collect();
        // Table entries (1) and (2).
        let t1 = Poly2::from_terms([((1, 0), z(3, 2)), ((0, 1), -z(3, 1))]);
        let t2 = Poly2::from_terms([
            ((2, 0), z(3, 1)),
            ((1, 1), int(-2)),
            ((0, 2), z(3, 2)),
            ((1, 0), int(-2)),
            ((0, 1), int(-2)),
        ]);
        for t in [&t1, &t2] {
            assert!(apply(&d, t).is_zero());
            assert!(in_span(&basis, &t.to_vector(2)));
        }
        assert_eq!(s.graded_representatives(1).len(), 1);
        assert_eq!(s.graded_representatives(2).len(), 1);
        // Entries (3) and (4) for the conjugate point.
        let d2 = operator_at(&punctured_square(2).unwrap(), &p2()).unwrap();
        let t3 = Poly2::from_terms([((1, 0), z(3, 1)), ((0, 1), -z(3, 2))]);
        let t4 = Poly2::from_terms([
            ((2, 0), z(3, 2)),
            ((1, 1), int(-2)),
            ((0, 2), z(3, 1)),
            ((1, 0), int(-2)),
            ((0, 1), int(-2)),
        ]);
        assert!(apply(&d2, &t3).is_zero() && apply(&d2, &t4).is_zero());
    }

    #[test]
    fn zero_operator_full_space() {
        let d = DiffOp2::default();
        for n in 0..4 {
            assert_eq!(sol_space(&d, n).dimension, SimplexN { n }.len());
            assert_eq!(dim_formula(&d, n), SimplexN { n }.len());
        }
    }

    #[test]
    fn formula_with_constant_term_is_zero() {
        let d = DiffOp2::from_terms([((0, 0), int(1)), ((1, 0), int(1))]);
        for n in 0..5 {
            assert_eq!(dim_formula(&d, n), 0);
            assert_eq!(sol_space(&d, n).dimension, 0);
        }
    }

    #[test]
    fn kernel_matches_formula_on_square_windows() {
        for n in 2..=4 {
            let w = punctured_square(n).unwrap();
            for p in crate::spectra::square_zero_locus(n).unwrap() {
                let d = operator_at(&w, &p).unwrap();
                for big_n in 0..=6 {
                    assert_eq!(sol_space(&d, big_n).dimension, dim_formula(&d, big_n), "n={n} p={p} N={big_n}");
                }
            }
        }
    }

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial(2, 3), BigInt::from(60));
        assert_eq!(rising_factorial(5, 0), BigInt::one());
        assert_eq!(rising_factorial(-3, 2), BigInt::from(2));
        assert_eq!(rising_factorial(-1, 3), BigInt::zero());
    }

    #[test]
    fn step_e_integer_array() {
        let w = punctured_square(3).unwrap();
        let g = Poly2::from_int_terms(&[((1, 0), 1), ((0, 1), -1)]);
        let rect = Rect::new(0, 11, 0, 11).unwrap();
        let a = array_from_solution(&w, &minus_one(), &g, rect).unwrap();
        assert!(a.values().iter().all(|v| v.as_rational().is_some_and(|r| r.is_integer())));
        // s=(1,0): (-3+1)(-1)^{2+1} = 2; s=(0,1): -(-1+1)(-1)^{3+0} = 0
        assert_eq!(a.get(LatticePoint::new(3, 1)).unwrap(), &int(2));
        let g2 = Poly2::from_int_terms(&[((2, 0), 1), ((1, 1), -2), ((0, 2), 1), ((1, 0), -1), ((0, 1), -1)]);
        assert!(array_from_solution(&w, &minus_one(), &g2, rect).is_ok());
    }

    #[test]
    fn step_e_constant_is_character() {
        let w = punctured_square(2).unwrap();
        let rect = Rect::new(-2, 4, -1, 5).unwrap();
        let a = array_from_solution(&w, &p1(), &Poly2::from_int_terms(&[((0, 0), 1)]), rect).unwrap();
        for k in rect.cells() {
            let want = z(3, k.i1 + 2 * k.i2);
            assert_eq!(a.get(k).unwrap(), &want);
        }
    }

    #[test]
    fn step_e_ex31_combinations() {
        let w = punctured_square(2).unwrap();
        let rect = Rect::new(0, 7, 0, 7).unwrap();
        let t1 = Poly2::from_terms([((1, 0), z(3, 2)), ((0, 1), -z(3, 1))]);
        let t2 = Poly2::from_terms([
            ((2, 0), z(3, 1)),
            ((1, 1), int(-2)),
            ((0, 2), z(3, 2)),
            ((1, 0), int(-2)),
            ((0, 1), int(-2)),
        ]);
        let a1 = array_from_solution(&w, &p1(), &t1, rect).unwrap();
        let a2 = array_from_solution(&w, &p1(), &t2, rect).unwrap();
        for sign in [1, -1] {
            let b = PatchArray::from_fn(rect, |k| {
                a1.get(k).unwrap().try_add(&a2.get(k).unwrap().scale(&BigRational::from_integer(sign.into()))).unwrap()
            });
            assert!(delta_patch(&w, &b).unwrap().values().iter().all(Zero::is_zero));
        }
        assert!(array_from_solution(&w, &p1(), &t1, Rect::new(0, 0, 0, 0).unwrap()).is_err());
    }

    #[test]
    fn growth_examples() {
        let g = Poly2::from_int_terms(&[((1, 0), 1), ((0, 1), -1)]);
        assert_eq!(growth_degree(&minus_one(), &g, 6).unwrap(), Some(1));
        let g2 = Poly2::from_int_terms(&[((2, 0), 1), ((1, 1), -2), ((0, 2), 1), ((1, 0), -1), ((0, 1), -1)]);
        assert_eq!(growth_degree(&minus_one(), &g2, 7).unwrap(), Some(2));
        let t2 = Poly2::from_terms([
            ((2, 0), z(3, 1)),
            ((1, 1), int(-2)),
            ((0, 2), z(3, 2)),
            ((1, 0), int(-2)),
            ((0, 1), int(-2)),
        ]);
        assert_eq!(growth_degree(&p1(), &t2, 7).unwrap(), Some(2));
        assert_eq!(growth_degree(&p1(), &Poly2::default(), 4).unwrap(), None);
    }

    #[test]
    fn display() {
        let w = punctured_square(2).unwrap();
        let s = shift_char_poly(&w, &p1()).unwrap();
        assert_eq!(s.to_string(), "-z3*x + (1 + z3)*y + x*y");
        let d = f_minus(&Poly2::from_int_terms(&[((1, 0), 1), ((0, 1), -1)]));
        assert_eq!(d.to_string(), "-d1 + d2");
    }

    proptest! {
        #[test]
        fn f_minus_round_trip(terms in proptest::collection::vec(((0u32..4, 0u32..4), -5i64..5), 0..8)) {
            let g = Poly2::from_int_terms(&terms);
            let neg = Poly2::from_terms(g.terms().iter().map(|(&s, c)| {
                (s, if (s.0 + s.1) % 2 == 1 { -c.clone() } else { c.clone() })
            }));
            prop_assert_eq!(f_minus(&g), f_minus_inv(&neg));
            let inv = f_minus_inv(&g);
            prop_assert_eq!(inv.terms(), g.terms());
            let h = g.add(&g);
            prop_assert_eq!(f_minus(&h), f_minus(&g).add(&f_minus(&g)));
        }
    }
}
