//! Exact computation of fixed points of window-sum operators on arrays over
//! `Z^2` and its finite tori.
//!
//! The array routines are generic over the [`Ring`] contract; the concrete
//! scalar types used throughout are re-exported here together with aliases for
//! the common array instances.

pub mod array;
pub mod balanced;
pub mod bounded;
pub mod cyclotomic;
pub mod error;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod modp;
pub mod polygrowth;
pub mod ring;
pub mod spectra;

pub use array::{delta, degree, is_fixed, is_zero_sum, PatchArray, Rect, TorusArray};
pub use cyclotomic::{root_of_unity, CycElem, RootOfUnity};
pub use error::{Error, Result};
pub use lattice::{punctured_square, square_window, LatticePoint, Window};
pub use ring::{Field, Fp, Ring, Zmod};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Integer-valued torus array.
pub type IntArray = TorusArray<BigInt>;
/// Rational-valued torus array.
pub type RatArray = TorusArray<BigRational>;
/// Cyclotomic-valued torus array.
pub type CycArray = TorusArray<CycElem>;
/// Torus array over the prime field `F_P`.
pub type FpArray<const P: u32> = TorusArray<Fp<P>>;
