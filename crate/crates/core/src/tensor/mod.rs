//! Free tensor algebra: monomials, deglex orders, polynomials and truncated series.

mod monomial;
mod poly;
mod series;

pub use monomial::{DeglexOrder, MultiIndex};
pub use poly::NcPoly;
pub use series::{TruncSeries, DEFAULT_TRUNCATION};
