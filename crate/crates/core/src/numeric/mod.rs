//! Self-contained numerical kernels shared by every model module.

mod eig;
mod grid;
mod hessenberg;
mod matrix;
mod tridiag;

pub use eig::{
    cmp_re_im, eig_complex_dense, eig_complex_dense_with, EigConfig, EigenDecomposition,
    DEFAULT_MAX_DIM, DEFLATION_TOL, RESIDUAL_TOL,
};
pub use grid::{
    cumulative_integral, first_derivative, integrate_samples, linspace, second_derivative,
    GridFunction,
};
pub use hessenberg::hessenberg_reduce;
pub use matrix::ComplexMatrix;
pub use tridiag::{eig_sym_tridiag, sturm_count};
