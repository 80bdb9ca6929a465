//! Lattice points of `Z^2` and finite windows.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A point `(i1, i2)` of the integer lattice. `i1` is the column (horizontal)
/// index and `i2` the row (vertical) index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct LatticePoint {
    pub i1: i64,
    pub i2: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { i1: 0, i2: 0 };

    pub const fn new(i1: i64, i2: i64) -> Self {
        LatticePoint { i1, i2 }
    }

    pub fn is_origin(&self) -> bool {
        self.i1 == 0 && self.i2 == 0
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i1, self.i2)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i1, self.i2)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((i1, i2): (i64, i64)) -> Self {
        LatticePoint { i1, i2 }
    }
}

impl Add for LatticePoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        LatticePoint::new(self.i1 + rhs.i1, self.i2 + rhs.i2)
    }
}

impl Sub for LatticePoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        LatticePoint::new(self.i1 - rhs.i1, self.i2 - rhs.i2)
    }
}

impl Neg for LatticePoint {
    type Output = Self;
    fn neg(self) -> Self {
        LatticePoint::new(-self.i1, -self.i2)
    }
}

/// A finite set of lattice points, kept sorted and free of duplicates.
///
/// Windows built with [`Window::new`] are non-empty. A punctured window may be
/// empty (`{O}` minus the origin); the window sum over an empty set is zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Window {
    points: Vec<LatticePoint>,
}

impl Window {
    pub fn new(points: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        let mut points: Vec<_> = points.into_iter().collect();
        points.sort();
        points.dedup();
        if points.is_empty() {
            return domain("window must be non-empty");
        }
        Ok(Window { points })
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(LatticePoint::ORIGIN)
    }

    /// `W + k`.
    pub fn translate(&self, k: LatticePoint) -> Window {
        Window {
            points: self.points.iter().map(|&p| p + k).collect(),
        }
    }

    /// `W* = W \ {O}`. Fails when the origin is not in the window.
    pub fn puncture(&self) -> Result<Window> {
        if !self.contains_origin() {
            return domain("cannot puncture a window that does not contain the origin");
        }
        Ok(Window {
            points: self.points.iter().copied().filter(|p| !p.is_origin()).collect(),
        })
    }

    /// Inclusive bounding box `(min_i1, max_i1, min_i2, max_i2)`, or `None` for
    /// an empty window.
    pub fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let first = self.points.first()?;
        let mut b = (first.i1, first.i1, first.i2, first.i2);
        for p in &self.points {
            b.0 = b.0.min(p.i1);
            b.1 = b.1.max(p.i1);
            b.2 = b.2.min(p.i2);
            b.3 = b.3.max(p.i2);
        }
        Some(b)
    }
}

/// The square window `S(n) = {(i1, i2) : 0 <= i1, i2 <= n - 1}`.
pub fn square_window(n: u32) -> Result<Window> {
    if n < 2 {
        return domain(format!("square window needs n >= 2, got {n}"));
    }
    let n = n as i64;
    let points = (0..n).flat_map(|i2| (0..n).map(move |i1| LatticePoint::new(i1, i2)));
    Window::new(points)
}

/// `S(n)*`.
pub fn punctured_square(n: u32) -> Result<Window> {
    square_window(n)?.puncture()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        let mut out: Vec<_> = v.iter().map(|&p| p.into()).collect();
        out.sort();
        out
    }

    #[test]
    fn square_window_two() {
        let w = square_window(2).unwrap();
        assert_eq!(w.points(), pts(&[(0, 0), (1, 0), (0, 1), (1, 1)]).as_slice());
    }

    #[test]
    fn square_window_sizes() {
        let w3 = square_window(3).unwrap();
        assert_eq!(w3.len(), 9);
        assert_eq!(w3.bounds(), Some((0, 2, 0, 2)));
        let w5 = square_window(5).unwrap();
        assert_eq!(w5.len(), 25);
        assert_eq!(w5.puncture().unwrap().len(), 24);
        assert!(square_window(1).is_err());
        assert!(square_window(0).is_err());
    }

    #[test]
    fn puncture_cases() {
        let p2 = punctured_square(2).unwrap();
        assert_eq!(p2.points(), pts(&[(1, 0), (0, 1), (1, 1)]).as_slice());
        assert_eq!(punctured_square(3).unwrap().len(), 8);
        let origin_only = Window::new([LatticePoint::ORIGIN]).unwrap();
        assert!(origin_only.puncture().unwrap().is_empty());
        let shifted = square_window(2).unwrap().translate((1, 1).into());
        assert!(shifted.puncture().is_err());
    }

    #[test]
    fn translate_cases() {
        let w = square_window(2).unwrap();
        let t = w.translate((1, 1).into());
        assert_eq!(t.points(), pts(&[(1, 1), (2, 1), (1, 2), (2, 2)]).as_slice());
        assert_eq!(w.translate(LatticePoint::ORIGIN), w);
        let primed = punctured_square(2).unwrap().translate((1, 1).into());
        assert_eq!(primed.points(), pts(&[(2, 1), (1, 2), (2, 2)]).as_slice());
    }

    #[test]
    fn empty_window_rejected() {
        assert!(Window::new(Vec::new()).is_err());
    }
}
