//! Small dense complex linear algebra for Hermitian operators.

mod eigen;
mod matrix;
pub mod real;
mod tensor;

pub use eigen::{HermitianEigen, HERMITIAN_TOL, NEGATIVE_TOL, SUPPORT_CUTOFF};
pub(crate) use matrix::ZERO;
pub use matrix::{inner, kron_vec, norm, normalized, ComplexMatrix, C64};
pub use tensor::{digits, flat_index, kron, partial_trace, partial_transpose, total_dim};
