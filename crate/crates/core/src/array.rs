//! Arrays on tori and finite patches of `Z^2`, and the window-sum operator.
//!
//! For a window `W` and an array `a`, the window sum (degree) at `k` is
//! `d_{W+k}(a) = Σ_{i ∈ W} a_{i+k}` and `Δ_W(a)` collects these sums.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, Window};
use crate::ring::Ring;

/// Values on an `n1 × n2` torus. The value at `(i, j)` is stored at flat
/// index `i + n1 * j`; indices wrap modulo the dimensions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusArray<T> {
    n1: usize,
    n2: usize,
    values: Vec<T>,
}

impl<T> TorusArray<T> {
    pub fn new(n1: usize, n2: usize, values: Vec<T>) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::IncompatibleDims("torus dimensions must be positive".into()));
        }
        if values.len() != n1 * n2 {
            return Err(Error::IncompatibleDims(format!(
                "{}x{} torus needs {} values, got {}",
                n1,
                n2,
                n1 * n2,
                values.len()
            )));
        }
        Ok(TorusArray { n1, n2, values })
    }

    /// Builds the array from `f(i, j)` for `0 <= i < n1`, `0 <= j < n2`.
    pub fn from_fn(n1: usize, n2: usize, mut f: impl FnMut(i64, i64) -> T) -> Self {
        assert!(n1 > 0 && n2 > 0, "torus dimensions must be positive");
        let mut values = Vec::with_capacity(n1 * n2);
        for j in 0..n2 as i64 {
            for i in 0..n1 as i64 {
                values.push(f(i, j));
            }
        }
        TorusArray { n1, n2, values }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn flat_index(&self, i: i64, j: i64) -> usize {
        let i = i.rem_euclid(self.n1 as i64) as usize;
        let j = j.rem_euclid(self.n2 as i64) as usize;
        i + self.n1 * j
    }

    pub fn get(&self, i: i64, j: i64) -> &T {
        &self.values[self.flat_index(i, j)]
    }

    pub fn at(&self, p: LatticePoint) -> &T {
        self.get(p.i1, p.i2)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> TorusArray<U> {
        TorusArray {
            n1: self.n1,
            n2: self.n2,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Row `j` as a slice (`i` increasing).
    pub fn row(&self, j: usize) -> &[T] {
        &self.values[j * self.n1..(j + 1) * self.n1]
    }
}

/// Serialized as `{"dims": [n1, n2], "values": [[row j = 0], ...]}`.
impl<T: Serialize> Serialize for TorusArray<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[T]> = (0..self.n2).map(|j| self.row(j)).collect();
        let mut st = s.serialize_struct("TorusArray", 2)?;
        st.serialize_field("dims", &[self.n1, self.n2])?;
        st.serialize_field("values", &rows)?;
        st.end()
    }
}

impl<T: Clone> TorusArray<T> {
    /// Rows `j = 0..n2`, each indexed by `i`.
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.n2).map(|j| self.row(j).to_vec()).collect()
    }

    pub fn filled(n1: usize, n2: usize, v: T) -> Self {
        TorusArray::from_fn(n1, n2, |_, _| v.clone())
    }

    /// The translate `T_p(a)` with `(T_p(a))_i = a_{i-p}`.
    pub fn translate(&self, p: LatticePoint) -> Self {
        TorusArray::from_fn(self.n1, self.n2, |i, j| self.get(i - p.i1, j - p.i2).clone())
    }

    /// Views the array on a torus whose dimensions are multiples of the current ones.
    pub fn tile(&self, m1: usize, m2: usize) -> Result<Self> {
        if m1 % self.n1 != 0 || m2 % self.n2 != 0 {
            return Err(Error::IncompatibleDims(format!(
                "{m1}x{m2} is not a multiple of {}x{}",
                self.n1, self.n2
            )));
        }
        Ok(TorusArray::from_fn(m1, m2, |i, j| self.get(i, j).clone()))
    }
}

impl<R: Ring> TorusArray<R> {
    pub fn zeros(n1: usize, n2: usize) -> Self {
        TorusArray::filled(n1, n2, R::zero())
    }

    pub fn ones(n1: usize, n2: usize) -> Self {
        TorusArray::filled(n1, n2, R::one())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, s: &R) -> Self {
        self.map(|v| s.clone() * v.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Result<Self> {
        if self.dims() != other.dims() {
            return Err(Error::IncompatibleDims(format!(
                "{:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(TorusArray {
            n1: self.n1,
            n2: self.n2,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }
}

/// `d_{W+k}(a) = Σ_{i ∈ W} a_{i+k}` on a torus.
pub fn degree<R: Ring>(w: &Window, a: &TorusArray<R>, k: LatticePoint) -> R {
    w.points()
        .iter()
        .fold(R::zero(), |acc, &i| acc + a.at(i + k).clone())
}

/// `Δ_W(a)`.
pub fn delta<R: Ring>(w: &Window, a: &TorusArray<R>) -> TorusArray<R> {
    let (n1, n2) = a.dims();
    TorusArray::from_fn(n1, n2, |i, j| degree(w, a, LatticePoint::new(i, j)))
}

/// Whether `Δ_W(a) = a`.
///
/// When the window contains the origin the equivalent condition
/// `Δ_{W*}(a) = 0` is evaluated as well and the two answers must agree.
pub fn is_fixed<R: Ring>(w: &Window, a: &TorusArray<R>) -> bool {
    let direct = delta(w, a) == *a;
    if let Ok(punctured) = w.puncture() {
        let via_kernel = delta(&punctured, a).is_zero();
        assert_eq!(
            direct, via_kernel,
            "Δ_W(a) = a and Δ_W*(a) = 0 disagree"
        );
    }
    direct
}

/// Whether every window sum of `a` over translates of `w` vanishes.
pub fn is_zero_sum<R: Ring>(w: &Window, a: &TorusArray<R>) -> bool {
    delta(w, a).is_zero()
}

/// Inclusive rectangle `[imin, imax] × [jmin, jmax]`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rect {
    pub imin: i64,
    pub imax: i64,
    pub jmin: i64,
    pub jmax: i64,
}

impl Rect {
    pub fn new(imin: i64, imax: i64, jmin: i64, jmax: i64) -> Result<Self> {
        if imin > imax || jmin > jmax {
            return Err(Error::IncompatibleDims(format!(
                "degenerate rectangle [{imin},{imax}]x[{jmin},{jmax}]"
            )));
        }
        Ok(Rect { imin, imax, jmin, jmax })
    }

    /// `[0, width) × [0, height)`.
    pub fn sized(width: usize, height: usize) -> Result<Self> {
        Rect::new(0, width as i64 - 1, 0, height as i64 - 1)
    }

    pub fn width(&self) -> usize {
        (self.imax - self.imin + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.jmax - self.jmin + 1) as usize
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        (self.imin..=self.imax).contains(&p.i1) && (self.jmin..=self.jmax).contains(&p.i2)
    }

    /// Cells `k` with `W + k` inside the rectangle, as a rectangle.
    pub fn interior(&self, w: &Window) -> Option<Rect> {
        let (a1, b1, a2, b2) = match w.bounds() {
            Some(b) => b,
            None => return Some(*self),
        };
        Rect::new(self.imin - a1, self.imax - b1, self.jmin - a2, self.jmax - b2).ok()
    }

    pub fn cells(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (self.jmin..=self.jmax)
            .flat_map(move |j| (self.imin..=self.imax).map(move |i| LatticePoint::new(i, j)))
    }
}

/// A finite view of an array on `Z^2`.
#[derive(Clone, PartialEq, Debug)]
pub struct PatchArray<T> {
    rect: Rect,
    values: Vec<T>,
    /// Optional description of the closed form the values came from.
    pub generator: Option<String>,
}

impl<T> PatchArray<T> {
    pub fn from_fn(rect: Rect, mut f: impl FnMut(LatticePoint) -> T) -> Self {
        let values = rect.cells().map(&mut f).collect();
        PatchArray { rect, values, generator: None }
    }

    pub fn try_from_fn<E>(rect: Rect, mut f: impl FnMut(LatticePoint) -> std::result::Result<T, E>) -> std::result::Result<Self, E> {
        let values = rect.cells().map(&mut f).collect::<std::result::Result<Vec<_>, E>>()?;
        Ok(PatchArray { rect, values, generator: None })
    }

    pub fn with_generator(mut self, tag: impl Into<String>) -> Self {
        self.generator = Some(tag.into());
        self
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, p: LatticePoint) -> Option<&T> {
        if !self.rect.contains(p) {
            return None;
        }
        let idx = (p.i1 - self.rect.imin) as usize + self.rect.width() * (p.i2 - self.rect.jmin) as usize;
        self.values.get(idx)
    }
}

/// `d_{W+k}(a)` on a patch; fails when `W + k` leaves the patch.
pub fn degree_patch<R: Ring>(w: &Window, a: &PatchArray<R>, k: LatticePoint) -> Result<R> {
    w.points().iter().try_fold(R::zero(), |acc, &i| {
        a.get(i + k)
            .map(|v| acc + v.clone())
            .ok_or(Error::OutOfInterior { k1: k.i1, k2: k.i2 })
    })
}

/// `Δ_W(a)` restricted to the interior of the patch.
pub fn delta_patch<R: Ring>(w: &Window, a: &PatchArray<R>) -> Result<PatchArray<R>> {
    let interior = a
        .rect()
        .interior(w)
        .ok_or_else(|| Error::IncompatibleDims("patch has no interior for this window".into()))?;
    PatchArray::try_from_fn(interior, |k| degree_patch(w, a, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{punctured_square, square_window};
    use crate::ring::{Fp, Zmod};
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn int_array(n1: usize, n2: usize, f: impl Fn(i64, i64) -> i64) -> TorusArray<BigInt> {
        TorusArray::from_fn(n1, n2, |i, j| BigInt::from(f(i, j)))
    }

    /// b¹ of the n = 2 bounded example: 2 on the diagonal classes, -1 elsewhere.
    fn b1() -> TorusArray<BigInt> {
        int_array(3, 3, |i, j| if (i - j).rem_euclid(3) == 0 { 2 } else { -1 })
    }

    #[test]
    fn degree_examples() {
        let ones = TorusArray::<Fp<3>>::ones(3, 3);
        let w = punctured_square(2).unwrap();
        assert!(degree(&w, &ones, LatticePoint::ORIGIN).is_zero());
        let ones5 = TorusArray::<Fp<5>>::ones(5, 5);
        let w4 = punctured_square(4).unwrap();
        for j in 0..5 {
            for i in 0..5 {
                assert!(degree(&w4, &ones5, (i, j).into()).is_zero());
            }
        }
        let zero = TorusArray::<BigInt>::zeros(4, 3);
        assert!(degree(&square_window(3).unwrap(), &zero, (2, 1).into()).is_zero());
    }

    #[test]
    fn delta_examples() {
        let s2 = square_window(2).unwrap();
        let ones = TorusArray::<BigInt>::ones(3, 3);
        assert_eq!(delta(&s2, &ones), int_array(3, 3, |_, _| 4));
        assert_eq!(delta(&s2, &b1()), b1());
        let a = int_array(4, 5, |i, j| i * i - 3 * j + 1);
        let diff = delta(&s2, &a).sub(&delta(&s2.puncture().unwrap(), &a)).unwrap();
        assert_eq!(diff, a);
    }

    #[test]
    fn is_fixed_examples() {
        let s2 = square_window(2).unwrap();
        assert!(is_fixed(&s2, &b1()));
        assert!(!is_fixed(&s2, &TorusArray::<BigInt>::ones(3, 3)));
        assert!(is_fixed(&s2, &TorusArray::<BigInt>::zeros(3, 3)));
        assert!(is_fixed(&square_window(5).unwrap(), &TorusArray::<Zmod<4>>::zeros(2, 7)));
    }

    #[test]
    fn fixed_set_depends_on_translate() {
        // Δ_{W+k}(a) = T_{-k}(Δ_W(a)), so a fixed array of W is fixed by W+k
        // only when it is k-periodic. The kernel of the punctured operator is
        // translation invariant.
        let s2 = square_window(2).unwrap();
        let shifted = s2.translate((1, 0).into());
        assert!(!is_fixed(&shifted, &b1()));
        assert!(is_fixed(&s2.translate((3, 0).into()), &b1()));
        let p = s2.puncture().unwrap();
        assert!(is_zero_sum(&p.translate((1, 0).into()), &b1()));
    }

    #[test]
    fn translate_wraps() {
        let a = int_array(3, 2, |i, j| i + 10 * j);
        let t = a.translate((1, 0).into());
        assert_eq!(t.get(0, 0), &BigInt::from(2));
        assert_eq!(t.get(1, 1), &BigInt::from(10));
        assert_eq!(a.translate((3, 2).into()), a);
    }

    #[test]
    fn torus_constructor_errors() {
        assert!(TorusArray::new(2, 2, vec![1, 2, 3]).is_err());
        assert!(TorusArray::<i32>::new(0, 2, vec![]).is_err());
        let a = TorusArray::new(2, 1, vec![1, 2]).unwrap();
        assert_eq!(a.tile(4, 2).unwrap().values(), &[1, 2, 1, 2, 1, 2, 1, 2]);
        assert!(a.tile(3, 1).is_err());
    }

    #[test]
    fn patch_interior() {
        let rect = Rect::sized(5, 4).unwrap();
        let w = punctured_square(3).unwrap();
        assert_eq!(rect.interior(&w), Some(Rect::new(0, 2, 0, 1).unwrap()));
        let a = PatchArray::from_fn(rect, |p| BigInt::from(p.i1 + p.i2));
        assert!(degree_patch(&w, &a, (3, 0).into()).is_err());
        assert_eq!(
            degree_patch(&w, &a, (0, 0).into()).unwrap(),
            BigInt::from(18)
        );
        let d = delta_patch(&w, &a).unwrap();
        assert_eq!(d.rect(), Rect::new(0, 2, 0, 1).unwrap());
        let tiny = PatchArray::from_fn(Rect::sized(2, 2).unwrap(), |_| BigInt::zero());
        assert!(delta_patch(&w, &tiny).is_err());
        assert!(Rect::new(1, 0, 0, 0).is_err());
    }
}
