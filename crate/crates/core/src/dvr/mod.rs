//! Exact linear algebra over `Q[[t]]`, realized as truncated power series with
//! per-entry precision tracking.

mod matrix;
mod poly;
mod smith;

pub use matrix::{rational_nullspace, DVRMatrix};
pub use poly::{q, ValPoly, EXACT, Q};
pub use smith::{kernel_basis, smith_over_dvr, solve_linear, InvariantFactors, Smith};
pub(crate) use smith::solve_with;
