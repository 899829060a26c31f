//! Dense complex linear algebra: the matrix container, Schur and eigenvector
//! computations, singular values, least squares and matrix polynomials.

mod eigen;
mod matrix;
mod poly;
mod qr;
mod schur;
mod svd;

pub use num_complex::Complex64 as c64;

pub use eigen::{cluster_eigenvalues, eigen_full, SpectralData, CLUSTER_TOL};
pub use matrix::{axpy, dot, norm2, scale_in_place, ComplexMatrix, DenseJson};
pub use poly::{
    apply_matrix_polynomial, eval_polynomial, poly_from_roots, product_form_norm,
    triangular_product,
};
pub use qr::{givens, solve_least_squares, solve_upper, Givens};
pub use schur::{reorder_schur, schur_decompose, solve_sylvester_triangular, Schur};
pub use svd::{
    hermitian_eigen, inverse, rect_shifted_smin, singular_values, smallest_singular_value,
    two_norm, ShiftedSmin,
};

/// Relative tolerance below which a singular value counts as zero.
pub const TOL_SING: f64 = 1e-13;

pub(crate) fn zero() -> c64 {
    c64::new(0.0, 0.0)
}

pub(crate) fn one() -> c64 {
    c64::new(1.0, 0.0)
}
