use super::GeometryError;
use crate::linalg::{
    projector_onto, range_basis, subspace_intersection, HermitianMatrix, RngState, SubspaceBasis,
    C64,
};

/// Tolerance used to read off intersections for [`adjacent`].
pub const ADJACENCY_TOL: f64 = 1e-9;

fn check_ambient(x: &SubspaceBasis, y: &SubspaceBasis) -> Result<(), GeometryError> {
    super::require_same_ambient(x.ambient(), y.ambient())
}

/// `‖P_X P_Y − P_Y P_X‖_F ≤ tol`: commuting projections, i.e. a common
/// orthonormal basis spans both subspaces.
pub fn compatible(x: &SubspaceBasis, y: &SubspaceBasis, tol: f64) -> Result<bool, GeometryError> {
    check_ambient(x, y)?;
    Ok(commutator_norm(x, y) <= tol)
}

pub fn commutator_norm(x: &SubspaceBasis, y: &SubspaceBasis) -> f64 {
    x.projector_matrix()
        .commutator(&y.projector_matrix())
        .frobenius_norm()
}

/// Equal dimension `k` and `dim(X ∩ Y) = k − 1`.
pub fn adjacent(x: &SubspaceBasis, y: &SubspaceBasis) -> Result<bool, GeometryError> {
    check_ambient(x, y)?;
    if x.dim() != y.dim() {
        return Err(GeometryError::RankMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    if x.dim() == 0 {
        return Ok(false);
    }
    Ok(subspace_intersection(x, y, ADJACENCY_TOL)?.dim() == x.dim() - 1)
}

/// `‖P_outer B − B‖_F` for the basis `B` of `inner`.
fn containment_gap(inner: &SubspaceBasis, outer: &HermitianMatrix) -> f64 {
    if inner.dim() == 0 {
        return 0.0;
    }
    let b = inner.matrix();
    (&outer.to_matrix().matmul(b) - b).frobenius_norm()
}

fn check_interval(
    m: &SubspaceBasis,
    n: &SubspaceBasis,
    k: usize,
    tol: f64,
) -> Result<(), GeometryError> {
    check_ambient(m, n)?;
    if !(m.dim() < k && k < n.dim()) {
        return Err(GeometryError::BadInterval {
            reason: format!(
                "need dim M < k < dim N, got {} < {} < {}",
                m.dim(),
                k,
                n.dim()
            ),
        });
    }
    let gap = containment_gap(m, &n.projector_matrix());
    if gap > tol {
        return Err(GeometryError::BadInterval {
            reason: format!("M is not contained in N (gap {gap:e})"),
        });
    }
    Ok(())
}

/// `Z ∈ [M, N]_k`: `dim Z = k`, `P_N Z = Z` and `P_Z M = M` within `tol`.
pub fn interval_membership(
    m: &SubspaceBasis,
    n: &SubspaceBasis,
    z: &SubspaceBasis,
    k: usize,
    tol: f64,
) -> Result<bool, GeometryError> {
    check_interval(m, n, k, tol)?;
    check_ambient(m, z)?;
    Ok(z.dim() == k
        && containment_gap(z, &n.projector_matrix()) <= tol
        && containment_gap(m, &z.projector_matrix()) <= tol)
}

/// Random element of `[M, N]_k`: `M` plus a random `(k − dim M)`-dimensional
/// subspace of `N ⊖ M`.
pub fn random_interval_element(
    m: &SubspaceBasis,
    n: &SubspaceBasis,
    k: usize,
    tol: f64,
    rng: &mut RngState,
) -> Result<SubspaceBasis, GeometryError> {
    check_interval(m, n, k, tol)?;
    let gap = n.projector_matrix().sub(&m.projector_matrix());
    let rest = range_basis(&gap, tol.max(1e-8))?;
    let extra = k - m.dim();
    let coeffs = rng.haar_unitary(rest.dim());
    let chosen = rest
        .matrix()
        .matmul(&coeffs.select_columns(&(0..extra).collect::<Vec<_>>()));
    let mut vectors: Vec<Vec<C64>> = m.vectors();
    vectors.extend(chosen.columns());
    Ok(SubspaceBasis::span_of(m.ambient(), &vectors, 1e-8)?)
}

/// Random `k`-dimensional subspace of `C^n` that fails `P_N Z = Z`.
pub fn random_subspace_outside(n: &SubspaceBasis, k: usize, rng: &mut RngState) -> SubspaceBasis {
    let p = n.projector_matrix().to_matrix();
    loop {
        let z = rng.random_subspace(n.ambient(), k);
        if (&p.matmul(z.matrix()) - z.matrix()).frobenius_norm() > 1e-3 {
            return z;
        }
    }
}

/// Basis as a projection, for use with membership tests.
pub fn as_projection(x: &SubspaceBasis) -> crate::linalg::Projection {
    projector_onto(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::lambda_membership;
    use crate::linalg::{c64, subspace_sum};

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn compatible_examples() {
        let x = SubspaceBasis::standard(2, &[0]);
        let y = SubspaceBasis::standard(2, &[1]);
        assert!(compatible(&x, &y, 1e-10).unwrap());
        assert!(compatible(&x, &x, 1e-10).unwrap());
        let plus = SubspaceBasis::span_of(2, &[vec![c64(H, 0.0), c64(H, 0.0)]], 1e-12).unwrap();
        assert!(!compatible(&x, &plus, 1e-10).unwrap());
    }

    #[test]
    fn adjacent_examples() {
        let a = SubspaceBasis::standard(3, &[0]);
        let b = SubspaceBasis::standard(3, &[1]);
        assert!(adjacent(&a, &b).unwrap());
        assert!(!adjacent(&a, &a).unwrap());
        let x = SubspaceBasis::standard(4, &[0, 1]);
        let y = SubspaceBasis::standard(4, &[1, 2]);
        assert!(adjacent(&x, &y).unwrap());
        let z = SubspaceBasis::standard(4, &[1]);
        assert!(matches!(
            adjacent(&x, &z),
            Err(GeometryError::RankMismatch { .. })
        ));
    }

    #[test]
    fn interval_examples() {
        let m = SubspaceBasis::standard(4, &[0]);
        let n = SubspaceBasis::standard(4, &[0, 1, 2]);
        assert!(
            !interval_membership(&m, &n, &SubspaceBasis::standard(4, &[0, 3]), 2, 1e-9).unwrap()
        );
        assert!(
            interval_membership(&m, &n, &SubspaceBasis::standard(4, &[0, 2]), 2, 1e-9).unwrap()
        );
        let mut rng = RngState::new(2);
        for _ in 0..10 {
            let z = random_interval_element(&m, &n, 2, 1e-9, &mut rng).unwrap();
            assert!(interval_membership(&m, &n, &z, 2, 1e-9).unwrap());
            let out = random_subspace_outside(&n, 2, &mut rng);
            assert!(!interval_membership(&m, &n, &out, 2, 1e-9).unwrap());
        }
        assert!(matches!(
            interval_membership(&n, &m, &m, 2, 1e-9),
            Err(GeometryError::BadInterval { .. })
        ));
        let not_inside = SubspaceBasis::standard(4, &[3]);
        assert!(matches!(
            interval_membership(&not_inside, &n, &m, 2, 1e-9),
            Err(GeometryError::BadInterval { .. })
        ));
    }

    #[test]
    fn compatible_pair_interval_is_lambda() {
        let mut rng = RngState::new(12);
        let f = rng.haar_unitary(4);
        let x = SubspaceBasis::new(f.select_columns(&[0, 1])).unwrap();
        let y = SubspaceBasis::new(f.select_columns(&[1, 2])).unwrap();
        let m = subspace_intersection(&x, &y, 1e-9).unwrap();
        let n = subspace_sum(&x, &y, 1e-9).unwrap();
        assert_eq!((m.dim(), n.dim()), (1, 3));
        let (px, py) = (as_projection(&x), as_projection(&y));
        for _ in 0..10 {
            let z = random_interval_element(&m, &n, 2, 1e-9, &mut rng).unwrap();
            assert!(lambda_membership(&px, &py, &as_projection(&z), 1e-8).unwrap());
        }
    }
}
