//! Executable classification of linear operators on Hermitian matrices that
//! send rank-one projections to rank-one projections.
//!
//! Every such operator on `Herm(C^n)` is either induced by a unitary or
//! anti-unitary `U` (`A ↦ U A U*`, resp. `A ↦ U Aᵀ U*`) or has the form
//! `A ↦ tr(A) P` for a fixed rank-one projection `P`. The [`classifier`]
//! module decides which case holds for a given operator and recovers `U` or
//! `P`; [`geometry`] holds the projective-line toolkit (sets `Λᵏ(X, Y)`,
//! small circles, the Bloch sphere, `SU(2) → SO(3)`) used to check the
//! supporting lemmas numerically.
//!
//! Operators are represented in a fixed orthonormal basis of the real space
//! of Hermitian matrices, see [`coords`].

pub mod classifier;
pub mod coords;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod verify;

pub use classifier::{classify, ClassifyError, ClassifyOptions, Verdict};
pub use coords::SuperOperator;
pub use linalg::{ComplexMatrix, HermitianMatrix, Projection, RngState, SubspaceBasis, C64};
