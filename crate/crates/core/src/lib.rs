//! Exact computations with quadratic algebras, PBW bases and pro-p group
//! presentations over prime fields.

pub mod error;
pub mod field;
pub mod linalg;
pub mod tensor;

pub use error::{Error, Result};
pub use field::{Fp, FpScalar};
pub use linalg::{kernel, rref, FpMatrix, Subspace};
pub use tensor::{DeglexOrder, MultiIndex, NcPoly, TruncSeries};
pub mod quad;

pub use quad::{CombineMode, QuadraticAlgebra, TElement};
pub mod pbw;
pub mod groups;
pub mod et;
