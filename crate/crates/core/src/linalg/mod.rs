//! Dense complex matrices, antilinear operators and real-linear subspace
//! computations.

mod matrix;
mod sparse;
mod subspace;

pub use matrix::{antilinear_conjugate, AntilinearOp, ComplexMatrix};
pub use sparse::SparseMatrix;
pub use subspace::{
    intersect_with_coefficients, nullspace_of_columns, real_nullspace, span_rank, subspace_intersect, to_dense,
    to_sparse, Echelon, RealMatrix, RealSubspaceBasis, Rref, SparseVec,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
}
