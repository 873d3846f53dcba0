//! Geometry of rank-one projections on a complex projective line and of the
//! sets `Λᵏ(X, Y) = {Z : P_X + P_Y − P_Z is a rank-k projection}`.
//!
//! * [`line`]: the parametrization `[[t, z], [z̄, 1−t]]` of rank-one
//!   projections in a 2-frame, diagonalizing frames of `P + Q`, small
//!   circles and their intersections.
//! * [`sphere`]: Pauli coordinates of `C²` projections on the sphere of
//!   radius 1/2 and the homomorphism `U(2) → O(3)`.
//! * [`grassmann`]: compatibility, adjacency and intervals `[M, N]_k` for
//!   subspaces of higher dimension.

pub mod grassmann;
pub mod line;
pub mod sphere;

use thiserror::Error;

use crate::coords::CoordsError;
use crate::linalg::{herm_eig, HermitianMatrix, LinalgError, Projection};

pub use grassmann::{adjacent, compatible, interval_membership, random_interval_element};
pub use line::{
    circles_intersection, det0_check, lambda_membership, projection_from_param, sample_circle,
    small_circle, sum_frame, CircleIntersection, LineParam, SmallCircle, SumFrame,
};
pub use sphere::{
    antipodal_iff_orthogonal, projection_from_sphere, sphere_point, su2_to_o3, Mat3, SpherePoint,
};

/// `|t − 1/2|` at or below this counts as an orthogonal generator pair.
pub const ORTHOGONAL_T_TOL: f64 = 1e-10;
/// `|t − 1|` at or below this counts as coinciding generators.
pub const DEGENERATE_T_TOL: f64 = 1e-10;
/// Default eigenvalue tolerance for membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("operation needs C², got ambient dimension {found}")]
    WrongDim { found: usize },
    #[error("expected rank {expected}, got rank {found}")]
    WrongRank { expected: usize, found: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("generators coincide; Λ(X, X) = {{X}} is not a circle")]
    Degenerate,
    #[error("generators are orthogonal (t = {t}); their Λ set is the whole projective line")]
    Orthogonal { t: f64 },
    #[error("projection is not on the circle: {reason}")]
    NotOnCircle { reason: String },
    #[error("invalid interval: {reason}")]
    BadInterval { reason: String },
    #[error("invalid parameter: {reason}")]
    InvalidParam { reason: String },
    #[error("dense scan found {found} intersection points, expected 2")]
    IntersectionScan { found: usize },
    #[error("antipodality ({antipodal}) disagrees with orthogonality ({orthogonal})")]
    AntipodalMismatch { antipodal: bool, orthogonal: bool },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Coords(#[from] CoordsError),
}

/// True iff the eigenvalues of `m` are within `tol` of `1` (k times) and `0`
/// (the rest).
pub fn is_rank_k_projection(m: &HermitianMatrix, k: usize, tol: f64) -> Result<bool, LinalgError> {
    let eig = herm_eig(m)?;
    let n = eig.values.len();
    if k > n {
        return Ok(false);
    }
    // Ascending order: the last k should be ones.
    Ok(eig.values.iter().enumerate().all(|(i, &l)| {
        let target = if i >= n - k { 1.0 } else { 0.0 };
        (l - target).abs() <= tol
    }))
}

pub(crate) fn require_rank(p: &Projection, rank: usize) -> Result<(), GeometryError> {
    if p.rank() != rank {
        return Err(GeometryError::WrongRank {
            expected: rank,
            found: p.rank(),
        });
    }
    Ok(())
}

pub(crate) fn require_same_ambient(a: usize, b: usize) -> Result<(), GeometryError> {
    if a != b {
        return Err(GeometryError::AmbientMismatch { left: a, right: b });
    }
    Ok(())
}
