//! Dense complex linear algebra shared by the rest of the crate.

mod eig;
mod matrix;
mod subspace;
mod vector;

pub use eig::{
    hermitian_eig, hermitian_eig_jacobi, hermitian_eig_with_tol, hermitian_eigenvalues, kernel_basis,
    kernel_basis_with_threshold, min_eigenvalue, EigDecomposition, HERMITIAN_TOL,
};
pub use matrix::{kron, partial_transpose_a, trace_inner, ComplexMatrix};
pub use subspace::SubspaceBasis;
pub use vector::ComplexVector;
