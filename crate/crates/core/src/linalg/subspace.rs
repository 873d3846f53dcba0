use super::{c64, herm_eig, inner, vec_norm, ComplexMatrix, HermitianMatrix, LinalgError, C64};

/// Maximum `‖B*B − I‖_F` accepted for a basis handed in from outside.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Orthonormal basis of a `k`-dimensional subspace of `C^n`, stored as the
/// columns of an `n×k` matrix. `k = 0` is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    ambient: usize,
    columns: Option<ComplexMatrix>,
}

impl SubspaceBasis {
    /// Checks `B*B = I_k` within [`ORTHONORMAL_TOL`].
    pub fn new(columns: ComplexMatrix) -> Result<Self, LinalgError> {
        let deviation = columns.isometry_defect();
        if deviation > ORTHONORMAL_TOL {
            return Err(LinalgError::NotOrthonormal { deviation });
        }
        if columns.cols() > columns.rows() {
            return Err(LinalgError::NotOrthonormal { deviation });
        }
        Ok(Self::from_trusted(columns))
    }

    pub(crate) fn from_trusted(columns: ComplexMatrix) -> Self {
        Self {
            ambient: columns.rows(),
            columns: Some(columns),
        }
    }

    /// The zero subspace of `C^n`.
    pub fn empty(ambient: usize) -> Self {
        Self {
            ambient,
            columns: None,
        }
    }

    /// Span of the listed standard basis vectors.
    pub fn standard(ambient: usize, indices: &[usize]) -> Self {
        if indices.is_empty() {
            return Self::empty(ambient);
        }
        let cols = ComplexMatrix::from_fn(ambient, indices.len(), |i, j| {
            c64(if i == indices[j] { 1.0 } else { 0.0 }, 0.0)
        });
        Self::new(cols).expect("distinct standard vectors")
    }

    /// Orthonormalizes the given vectors (two-pass Gram-Schmidt), dropping any
    /// vector whose residual norm falls below `drop_tol`.
    pub fn span_of(
        ambient: usize,
        vectors: &[Vec<C64>],
        drop_tol: f64,
    ) -> Result<Self, LinalgError> {
        let mut kept: Vec<Vec<C64>> = Vec::new();
        for v in vectors {
            if v.len() != ambient {
                return Err(LinalgError::DimMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
            let mut w = v.clone();
            for _ in 0..2 {
                for q in &kept {
                    let proj = inner(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= proj * qi;
                    }
                }
            }
            let norm = vec_norm(&w);
            if norm > drop_tol {
                w.iter_mut().for_each(|x| *x /= norm);
                kept.push(w);
            }
        }
        if kept.is_empty() {
            return Ok(Self::empty(ambient));
        }
        Self::new(ComplexMatrix::from_columns(&kept)?)
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.columns.as_ref().map_or(0, |c| c.cols())
    }

    /// The `n×k` column matrix. Panics for the zero subspace.
    pub fn matrix(&self) -> &ComplexMatrix {
        self.columns
            .as_ref()
            .expect("zero subspace has no basis matrix")
    }

    pub fn vectors(&self) -> Vec<Vec<C64>> {
        self.columns
            .as_ref()
            .map(|c| c.columns())
            .unwrap_or_default()
    }

    /// `P = B B*`.
    pub fn projector_matrix(&self) -> HermitianMatrix {
        match &self.columns {
            None => HermitianMatrix::zeros(self.ambient),
            Some(b) => HermitianMatrix::hermitian_part(&b.matmul(&b.adjoint())).expect("square"),
        }
    }

    /// `U(X)` for a unitary `U`.
    pub fn mapped_by(&self, u: &ComplexMatrix) -> Self {
        match &self.columns {
            None => self.clone(),
            Some(b) => Self::from_trusted(u.matmul(b)),
        }
    }

    /// Orthogonal complement within `C^n`.
    pub fn complement(&self) -> Result<Self, LinalgError> {
        let p = self.projector_matrix();
        let eig = herm_eig(&p)?;
        Ok(eig.eigenspace(|l| l < 0.5))
    }
}

/// Orthogonal projection with its rank and a basis of its range.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: HermitianMatrix,
    basis: SubspaceBasis,
}

impl Projection {
    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.basis.dim()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    /// Rank-one projection onto `span{v}`; `v` need not be normalized.
    pub fn rank_one(v: &[C64]) -> Result<Self, LinalgError> {
        let norm = vec_norm(v);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(LinalgError::ZeroVector);
        }
        let unit: Vec<C64> = v.iter().map(|x| x / norm).collect();
        Ok(projector_onto(&SubspaceBasis::from_trusted(
            ComplexMatrix::from_columns(&[unit])?,
        )))
    }

    /// Reads a projection off a Hermitian matrix whose eigenvalues lie within
    /// `tol` of `{0, 1}`. The stored matrix is rebuilt from the range basis.
    pub fn from_matrix(p: &HermitianMatrix, tol: f64) -> Result<Self, LinalgError> {
        Ok(projector_onto(&range_basis(p, tol)?))
    }

    /// The unit vector spanning a rank-one projection.
    pub fn unit_vector(&self) -> Option<Vec<C64>> {
        (self.rank() == 1).then(|| self.basis.matrix().column(0))
    }

    /// `U P U*`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        projector_onto(&self.basis.mapped_by(u))
    }

    /// `tr(P Q)`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.matrix.trace_product(&other.matrix)
    }

    /// `‖P − Q‖_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.matrix.sub(&other.matrix).frobenius_norm()
    }
}

/// `P = B B*` with range basis `B`.
pub fn projector_onto(basis: &SubspaceBasis) -> Projection {
    Projection {
        matrix: basis.projector_matrix(),
        basis: basis.clone(),
    }
}

/// Orthonormal basis of the eigenspace `λ > 1/2` of an approximate projection.
pub fn range_basis(p: &HermitianMatrix, tol: f64) -> Result<SubspaceBasis, LinalgError> {
    let eig = herm_eig(p)?;
    if let Some(&bad) = eig
        .values
        .iter()
        .find(|&&l| l.abs() > tol && (l - 1.0).abs() > tol)
    {
        return Err(LinalgError::NotAProjection { eigenvalue: bad });
    }
    Ok(eig.eigenspace(|l| l > 0.5))
}

fn check_same_ambient(x: &SubspaceBasis, y: &SubspaceBasis) -> Result<(), LinalgError> {
    if x.ambient() != y.ambient() {
        return Err(LinalgError::DimMismatch {
            expected: x.ambient(),
            found: y.ambient(),
        });
    }
    Ok(())
}

/// `X ∩ Y`: eigenvectors of `P_X + P_Y` with eigenvalue within `tol` of 2.
pub fn subspace_intersection(
    x: &SubspaceBasis,
    y: &SubspaceBasis,
    tol: f64,
) -> Result<SubspaceBasis, LinalgError> {
    check_same_ambient(x, y)?;
    let sum = x.projector_matrix().add(&y.projector_matrix());
    Ok(herm_eig(&sum)?.eigenspace(|l| (l - 2.0).abs() <= tol))
}

/// `X + Y`: eigenvectors of `P_X + P_Y` with eigenvalue above `tol`.
pub fn subspace_sum(
    x: &SubspaceBasis,
    y: &SubspaceBasis,
    tol: f64,
) -> Result<SubspaceBasis, LinalgError> {
    check_same_ambient(x, y)?;
    let sum = x.projector_matrix().add(&y.projector_matrix());
    Ok(herm_eig(&sum)?.eigenspace(|l| l > tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RngState;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn projector_examples() {
        let p = projector_onto(&SubspaceBasis::standard(2, &[0]));
        assert_eq!(*p.matrix(), HermitianMatrix::from_real_diag(&[1.0, 0.0]));

        let plus = SubspaceBasis::new(ComplexMatrix::from_fn(2, 1, |_, _| c64(H, 0.0))).unwrap();
        let p = projector_onto(&plus);
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.matrix().get(i, j) - c64(0.5, 0.0)).norm() < 1e-15);
            }
        }

        let full = projector_onto(&SubspaceBasis::standard(3, &[0, 1, 2]));
        assert_eq!(*full.matrix(), HermitianMatrix::identity(3));
        assert_eq!(full.rank(), 3);
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let b = ComplexMatrix::from_fn(2, 2, |i, _| c64(if i == 0 { 1.0 } else { 0.0 }, 0.0));
        assert!(matches!(
            SubspaceBasis::new(b),
            Err(LinalgError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn range_basis_examples() {
        let e00 = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        let b = range_basis(&e00, 1e-9).unwrap();
        assert_eq!(b.dim(), 1);
        assert!((b.matrix().get(0, 0).norm() - 1.0).abs() < 1e-14);

        let half =
            HermitianMatrix::hermitian_part(&ComplexMatrix::from_fn(2, 2, |_, _| c64(0.5, 0.0)))
                .unwrap();
        let b = range_basis(&half, 1e-9).unwrap();
        let v = b.matrix().column(0);
        assert!((inner(&v, &[c64(H, 0.0), c64(H, 0.0)]).norm() - 1.0).abs() < 1e-14);

        assert_eq!(
            range_basis(&HermitianMatrix::identity(2), 1e-9)
                .unwrap()
                .dim(),
            2
        );

        let bad = HermitianMatrix::from_real_diag(&[0.5, 0.0]);
        assert!(matches!(
            range_basis(&bad, 1e-9),
            Err(LinalgError::NotAProjection { .. })
        ));
    }

    #[test]
    fn intersection_and_sum_examples() {
        let x = SubspaceBasis::standard(3, &[0, 1]);
        let y = SubspaceBasis::standard(3, &[1, 2]);
        let meet = subspace_intersection(&x, &y, 1e-9).unwrap();
        assert_eq!(meet.dim(), 1);
        assert!((meet.matrix().get(1, 0).norm() - 1.0).abs() < 1e-14);
        assert_eq!(subspace_sum(&x, &y, 1e-9).unwrap().dim(), 3);

        assert_eq!(subspace_intersection(&x, &x, 1e-9).unwrap().dim(), 2);
        assert_eq!(subspace_sum(&x, &x, 1e-9).unwrap().dim(), 2);

        let a = SubspaceBasis::standard(3, &[0]);
        let b = SubspaceBasis::standard(3, &[2]);
        assert_eq!(subspace_intersection(&a, &b, 1e-9).unwrap().dim(), 0);
        assert_eq!(subspace_sum(&a, &b, 1e-9).unwrap().dim(), 2);
    }

    #[test]
    fn projector_of_range_basis_is_identity_on_projections() {
        let mut rng = RngState::new(3);
        for n in 2..7 {
            for k in 0..=n {
                let x = rng.random_subspace(n, k);
                let p = projector_onto(&x);
                let again = projector_onto(&range_basis(p.matrix(), 1e-9).unwrap());
                assert!(again.distance(&p) <= 1e-9);
                assert_eq!(again.rank(), k);
            }
        }
    }

    #[test]
    fn complement_is_orthogonal() {
        let mut rng = RngState::new(8);
        let x = rng.random_subspace(5, 2);
        let c = x.complement().unwrap();
        assert_eq!(c.dim(), 3);
        let cross = x.matrix().adjoint().matmul(c.matrix());
        assert!(cross.frobenius_norm() < 1e-12);
    }
}
