//! Complex dense-matrix kernels shared by the solvers.

mod eigen;
mod isometry;
mod matrix;
mod nelder_mead;
mod outer;

pub use eigen::{
    hermitian_eigen, hermitian_eigenvalues, hermitian_min_eigenvalue, operator_norm, HermitianEigen,
};
pub use isometry::extend_isometry_to_unitary;
pub use matrix::{CMatrix, HermitianMatrix};
pub use nelder_mead::{nelder_mead, Minimum, NelderMeadOptions};
pub use outer::{
    circle_point, outer_eval, sample_log_modulus, OuterFunction, DEFAULT_QUAD, MAX_INTERIOR_RADIUS,
};
