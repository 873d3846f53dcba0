//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each step annihilates one off-diagonal pair `(p, q)` with a 2×2 unitary
//! rotation `J = D·G`: the diagonal phase `D = diag(1, e^{-iφ})` turns
//! `a_pq = |a_pq| e^{iφ}` real, then the real Givens rotation `G` zeroes it.
//! The accumulated product of all `J` is the eigenvector matrix.

use super::{c64, ComplexMatrix, HermitianMatrix, LinalgError, SubspaceBasis, C64};

/// Off-diagonal threshold relative to `‖A‖_F`.
pub const JACOBI_REL_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Default relative tolerance of [`rank_eps`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Eigenvalues in ascending order with matching unitary eigenvector matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: SubspaceBasis,
}

impl HermEig {
    /// Eigenvector belonging to `values[index]`.
    pub fn vector(&self, index: usize) -> Vec<C64> {
        self.vectors.matrix().column(index)
    }

    /// `V diag(λ) V*`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let v = self.vectors.matrix();
        let scaled = v.matmul(&ComplexMatrix::from_diag(&self.values));
        HermitianMatrix::hermitian_part(&scaled.matmul(&v.adjoint())).expect("square")
    }

    /// Eigenvectors whose eigenvalue satisfies `keep`, as an orthonormal basis.
    pub fn eigenspace(&self, keep: impl Fn(f64) -> bool) -> SubspaceBasis {
        let indices: Vec<usize> = (0..self.values.len())
            .filter(|&i| keep(self.values[i]))
            .collect();
        let n = self.values.len();
        if indices.is_empty() {
            return SubspaceBasis::empty(n);
        }
        SubspaceBasis::from_trusted(self.vectors.matrix().select_columns(&indices))
    }
}

fn max_off_diagonal(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut worst = 0.0_f64;
    for p in 0..n {
        for q in p + 1..n {
            worst = worst.max(a.get(p, q).norm());
        }
    }
    worst
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn herm_eig(a: &HermitianMatrix) -> Result<HermEig, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.dim();
    let mut work = a.to_matrix();
    let mut vecs = ComplexMatrix::identity(n);
    let threshold = JACOBI_REL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _sweep in 0..=JACOBI_MAX_SWEEPS {
        if max_off_diagonal(&work) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut work, &mut vecs, p, q);
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work.get(i, i).re.total_cmp(&work.get(j, j).re));
    let values = order.iter().map(|&i| work.get(i, i).re).collect();
    let vectors = SubspaceBasis::from_trusted(vecs.select_columns(&order));
    Ok(HermEig { values, vectors })
}

/// One Jacobi step on the `(p, q)` pair: `A ← J* A J`, `V ← V J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let phase = apq / r;

    // Real symmetric 2×2 [[app, r], [r, aqq]].
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = D G, D = diag(1, conj(phase)), G = [[c, s], [-s, c]].
    let jpp = c64(c, 0.0);
    let jpq = c64(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * jpp + akq * jqp);
        a.set(k, q, akp * jpq + akq * jqq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
        a.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
    }
    a.set(p, q, c64(0.0, 0.0));
    a.set(q, p, c64(0.0, 0.0));
    a.set(p, p, c64(a.get(p, p).re, 0.0));
    a.set(q, q, c64(a.get(q, q).re, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * jpp + vkq * jqp);
        v.set(k, q, vkp * jpq + vkq * jqq);
    }
}

/// Number of eigenvalues with `|λ| > tol_rel · max(1, ‖A‖_F)`.
pub fn rank_eps(a: &HermitianMatrix, tol_rel: f64) -> Result<usize, LinalgError> {
    let eig = herm_eig(a)?;
    let cutoff = tol_rel * a.frobenius_norm().max(1.0);
    Ok(eig.values.iter().filter(|l| l.abs() > cutoff).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RngState;

    fn herm(rows: &[&[(f64, f64)]]) -> HermitianMatrix {
        let n = rows.len();
        let m = ComplexMatrix::from_fn(n, n, |i, j| c64(rows[i][j].0, rows[i][j].1));
        HermitianMatrix::from_matrix(&m, 0.0).unwrap()
    }

    fn aligned(u: &[C64], v: &[C64]) -> bool {
        (crate::linalg::inner(u, v).norm() - 1.0).abs() < 1e-12
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let eig = herm_eig(&HermitianMatrix::from_real_diag(&[2.0, 1.0])).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0]);
        let e0 = crate::linalg::basis_vector(2, 0);
        let e1 = crate::linalg::basis_vector(2, 1);
        assert!(aligned(&eig.vector(0), &e1));
        assert!(aligned(&eig.vector(1), &e0));
    }

    #[test]
    fn sigma_x_spectrum() {
        let sx = herm(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]]);
        let eig = herm_eig(&sx).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(aligned(&eig.vector(0), &[c64(h, 0.0), c64(-h, 0.0)]));
        assert!(aligned(&eig.vector(1), &[c64(h, 0.0), c64(h, 0.0)]));
    }

    #[test]
    fn zero_matrix() {
        let eig = herm_eig(&HermitianMatrix::zeros(3)).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
        assert_eq!(*eig.vectors.matrix(), ComplexMatrix::identity(3));
    }

    #[test]
    fn complex_off_diagonal() {
        // σ_y has eigenvalues ±1 with eigenvectors (1, ∓i)/√2.
        let sy = herm(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]]);
        let eig = herm_eig(&sy).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!(aligned(&eig.vector(0), &[c64(h, 0.0), c64(0.0, -h)]));
        assert!(aligned(&eig.vector(1), &[c64(h, 0.0), c64(0.0, h)]));
    }

    #[test]
    fn rejects_non_finite() {
        let mut a = HermitianMatrix::zeros(2);
        a.set(0, 1, c64(f64::INFINITY, 0.0));
        assert_eq!(herm_eig(&a).unwrap_err(), LinalgError::NonFinite);
    }

    #[test]
    fn residual_and_unitarity_on_random_input() {
        let mut rng = RngState::new(11);
        for n in 1..=10 {
            let a = rng.random_hermitian(n);
            let eig = herm_eig(&a).unwrap();
            let v = eig.vectors.matrix();
            let av = a.to_matrix().matmul(v);
            let vl = v.matmul(&ComplexMatrix::from_diag(&eig.values));
            let scale = 1.0 + a.frobenius_norm();
            assert!((&av - &vl).frobenius_norm() <= 1e-11 * scale, "n={n}");
            assert!(v.isometry_defect() <= 1e-11);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // U diag(1,1,1,-2) U*: a threefold eigenvalue.
        let mut rng = RngState::new(5);
        let u = rng.haar_unitary(4);
        let a = HermitianMatrix::from_real_diag(&[1.0, 1.0, 1.0, -2.0]).conjugate_by(&u);
        let eig = herm_eig(&a).unwrap();
        for (got, want) in eig.values.iter().zip([-2.0, 1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(eig.reconstruct().sub(&a).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rank_examples() {
        let e00 = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        assert_eq!(rank_eps(&e00, DEFAULT_RANK_TOL).unwrap(), 1);
        assert_eq!(
            rank_eps(&HermitianMatrix::zeros(3), DEFAULT_RANK_TOL).unwrap(),
            0
        );
        // P_X + P_Y − P_Z with X = Y = span e0, Z = span e1.
        let m = HermitianMatrix::from_real_diag(&[2.0, -1.0]);
        assert_eq!(rank_eps(&m, DEFAULT_RANK_TOL).unwrap(), 2);
    }
}
