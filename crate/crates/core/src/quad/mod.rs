//! Quadratic algebras T(V)/(Omega), their duals and graded invariants.

mod algebra;
mod cobar;
mod format;
mod graded;

pub use algebra::{CombineMode, QuadraticAlgebra, TElement};
#[cfg(test)]
pub(crate) use algebra::poly_to_coords;
pub(crate) use graded::reciprocal_prefixes;
pub use cobar::{cobar_ext_dims, cobar_ext_dims_within, BigradedTable};
pub use format::{AlgebraFile, RelatorTerm};
pub use graded::{
    graded_dim, hilbert_prefix, hilbert_prefix_with_budget, series_reciprocal_check,
    GradedQuotient, DEFAULT_BUDGET,
};
