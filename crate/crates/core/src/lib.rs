//! Exact computation and certification of bounds on `S(D)`, twice the least
//! area of a non-obtuse lattice triangle whose sides are all at least `D`.
//!
//! `D` is always carried as `q = D²`. Every decision procedure is exact; the
//! only floating point lives in report rendering and in search seeds whose
//! results are re-checked.

pub mod campaigns;
pub mod diophantine;
pub mod error;
pub mod geom;
pub mod oracle;
pub mod quad;
pub mod serde_util;
pub mod witness;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use geom::{LatticePoint, LatticeTriangle, TriangleMetrics};
pub use quad::{compare_quad, dist_to_nearest, floor_mul_sqrt3, sign_quad, FracWitness, QuadValue};
