//! Dense complex linear algebra kernel: Hermitian eigendecomposition,
//! projections, subspace arithmetic and seeded random unitaries.

mod eig;
mod hermitian;
mod matrix;
mod random;
mod subspace;

use thiserror::Error;

pub use eig::{herm_eig, rank_eps, HermEig, DEFAULT_RANK_TOL, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL};
pub use hermitian::HermitianMatrix;
pub use matrix::{basis_vector, inner, vec_norm, ComplexMatrix};
pub use random::RngState;
pub use subspace::{
    projector_onto, range_basis, subspace_intersection, subspace_sum, Projection, SubspaceBasis,
    ORTHONORMAL_TOL,
};

pub type C64 = num_complex::Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("basis is not orthonormal (‖B*B − I‖_F = {deviation:e})")]
    NotOrthonormal { deviation: f64 },
    #[error("not a projection: eigenvalue {eigenvalue} is far from 0 and 1")]
    NotAProjection { eigenvalue: f64 },
    #[error("not Hermitian (‖A − A*‖_F = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix shape has a zero dimension")]
    EmptyShape,
    #[error("zero vector has no span")]
    ZeroVector,
}

/// Haar-random `n×n` unitary drawn from `rng`.
pub fn haar_unitary(n: usize, rng: &mut RngState) -> ComplexMatrix {
    rng.haar_unitary(n)
}
