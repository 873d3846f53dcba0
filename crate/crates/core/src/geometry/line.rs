use std::f64::consts::{PI, TAU};

use super::{
    is_rank_k_projection, require_rank, require_same_ambient, sphere_point, GeometryError,
    DEGENERATE_T_TOL, ORTHOGONAL_T_TOL,
};
use crate::linalg::{
    c64, herm_eig, inner, ComplexMatrix, HermitianMatrix, Projection, SubspaceBasis, C64,
};

/// Number of samples used by the dense intersection scan.
pub const INTERSECTION_SAMPLES: usize = 720;

/// `(t, α)` with `t ∈ [0, 1]`, `α ∈ [0, 2π)`: the rank-one projection
/// `[[t, z], [z̄, 1 − t]]`, `z = √(t(1−t)) e^{−iα}`, in a chosen 2-frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineParam {
    t: f64,
    alpha: f64,
}

impl LineParam {
    /// `alpha` is reduced mod 2π.
    pub fn new(t: f64, alpha: f64) -> Result<Self, GeometryError> {
        if !(0.0..=1.0).contains(&t) || !alpha.is_finite() {
            return Err(GeometryError::InvalidParam {
                reason: format!("need t in [0, 1] and finite alpha, got t = {t}, alpha = {alpha}"),
            });
        }
        Ok(Self {
            t,
            alpha: alpha.rem_euclid(TAU),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The off-diagonal entry `z`.
    pub fn off_diagonal(&self) -> C64 {
        C64::from_polar((self.t * (1.0 - self.t)).sqrt(), -self.alpha)
    }
}

fn require_frame(frame: &SubspaceBasis) -> Result<(), GeometryError> {
    if frame.dim() != 2 {
        return Err(GeometryError::InvalidParam {
            reason: format!("a frame needs exactly 2 vectors, got {}", frame.dim()),
        });
    }
    Ok(())
}

/// Rank-one projection with matrix `[[t, z], [z̄, 1−t]]` in the ordered
/// 2-frame `frame` (an orthonormal pair in `C^n`).
pub fn projection_from_param(
    p: &LineParam,
    frame: &SubspaceBasis,
) -> Result<Projection, GeometryError> {
    require_frame(frame)?;
    let b = frame.matrix();
    // v = √t b0 + √(1−t) e^{iα} b1 has v v* = [[t, z], [z̄, 1−t]].
    let c0 = c64(p.t.sqrt(), 0.0);
    let c1 = C64::from_polar((1.0 - p.t).sqrt(), p.alpha);
    let v: Vec<C64> = (0..b.rows())
        .map(|i| c0 * b.get(i, 0) + c1 * b.get(i, 1))
        .collect();
    Ok(Projection::rank_one(&v)?)
}

/// Orthonormal frame `(b0, b1)` in which `P + Q = diag(2t, 2(1−t))`, with
/// `t ∈ [1/2, 1]` (larger eigenvalue first).
#[derive(Debug, Clone, PartialEq)]
pub struct SumFrame {
    basis: SubspaceBasis,
    t: f64,
}

impl SumFrame {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn ambient(&self) -> usize {
        self.basis.ambient()
    }

    /// `B* P B`, the 2×2 matrix of `P` compressed to the frame.
    pub fn local(&self, p: &HermitianMatrix) -> ComplexMatrix {
        let b = self.basis.matrix();
        b.adjoint().matmul(&p.to_matrix()).matmul(b)
    }

    /// `B diag(2t, 2(1−t)) B*`, i.e. `P + Q` for the generating pair.
    pub fn sum_matrix(&self) -> HermitianMatrix {
        let b = self.basis.matrix();
        let d = ComplexMatrix::from_diag(&[2.0 * self.t, 2.0 * (1.0 - self.t)]);
        HermitianMatrix::hermitian_part(&b.matmul(&d).matmul(&b.adjoint())).expect("square")
    }

    /// Member of the circle with off-diagonal `ρ = √(t(1−t)) e^{iθ}`.
    pub fn member(&self, theta: f64) -> Projection {
        Projection::rank_one(&self.member_vector(theta)).expect("unit vector")
    }

    fn member_vector(&self, theta: f64) -> Vec<C64> {
        let b = self.basis.matrix();
        let c0 = c64(self.t.sqrt(), 0.0);
        let c1 = C64::from_polar((1.0 - self.t).sqrt(), -theta);
        (0..b.rows())
            .map(|i| c0 * b.get(i, 0) + c1 * b.get(i, 1))
            .collect()
    }

    /// `arg ρ` of a projection written in this frame.
    pub fn angle_of(&self, p: &Projection) -> f64 {
        self.local(p.matrix()).get(0, 1).arg().rem_euclid(TAU)
    }

    fn check_circle(&self) -> Result<(), GeometryError> {
        if (self.t - 1.0).abs() <= DEGENERATE_T_TOL {
            return Err(GeometryError::Degenerate);
        }
        if (self.t - 0.5).abs() <= ORTHOGONAL_T_TOL {
            return Err(GeometryError::Orthogonal { t: self.t });
        }
        Ok(())
    }
}

/// Diagonalizing frame of `P + Q` for two rank-one projections.
pub fn sum_frame(p: &Projection, q: &Projection) -> Result<SumFrame, GeometryError> {
    require_rank(p, 1)?;
    require_rank(q, 1)?;
    require_same_ambient(p.dim(), q.dim())?;
    let n = p.dim();
    if n < 2 {
        return Err(GeometryError::WrongDim { found: n });
    }
    let eig = herm_eig(&p.matrix().add(q.matrix()))?;
    let top = eig.vectors.matrix().select_columns(&[n - 1, n - 2]);
    let t = (eig.values[n - 1] / 2.0).clamp(0.5, 1.0);
    Ok(SumFrame {
        basis: SubspaceBasis::new(top)?,
        t,
    })
}

/// `Z ∈ Λᵏ(X, Y)`: `P + Q − Z` is a rank-k projection within `tol`.
pub fn lambda_membership(
    p: &Projection,
    q: &Projection,
    z: &Projection,
    tol: f64,
) -> Result<bool, GeometryError> {
    require_same_ambient(p.dim(), q.dim())?;
    require_same_ambient(p.dim(), z.dim())?;
    for other in [q, z] {
        if other.rank() != p.rank() {
            return Err(GeometryError::RankMismatch {
                left: p.rank(),
                right: other.rank(),
            });
        }
    }
    let m = p.matrix().add(q.matrix()).sub(z.matrix());
    Ok(is_rank_k_projection(&m, p.rank(), tol)?)
}

/// `(2t − s)(1 + s − 2t) = s(1 − s)` within 1e-12.
pub fn det0_check(t: f64, s: f64) -> bool {
    ((2.0 * t - s) * (1.0 + s - 2.0 * t) - s * (1.0 - s)).abs() <= 1e-12
}

/// `Λ(X, Y)` for distinct, non-orthogonal `X, Y` in `C²`, with its image on
/// the sphere: the plane section through the chord midpoint `O` with normal
/// `O/|O|`.
#[derive(Debug, Clone)]
pub struct SmallCircle {
    pub center: [f64; 3],
    pub radius: f64,
    pub normal: [f64; 3],
    pub frame: SumFrame,
    pub generators: (Projection, Projection),
}

impl SmallCircle {
    /// `m` evenly spaced members, see [`sample_circle`].
    pub fn sample(&self, m: usize) -> Result<Vec<Projection>, GeometryError> {
        sample_circle(&self.frame, m)
    }

    /// Signed distance of a sphere point from the plane of the circle.
    pub fn plane_offset(&self, x: [f64; 3]) -> f64 {
        (0..3)
            .map(|i| (x[i] - self.center[i]) * self.normal[i])
            .sum()
    }
}

pub fn small_circle(p: &Projection, q: &Projection) -> Result<SmallCircle, GeometryError> {
    require_same_ambient(p.dim(), q.dim())?;
    if p.dim() != 2 {
        return Err(GeometryError::WrongDim { found: p.dim() });
    }
    let frame = sum_frame(p, q)?;
    frame.check_circle()?;
    let a = sphere_point(p)?.vector();
    let b = sphere_point(q)?.vector();
    let center = [0, 1, 2].map(|i| 0.5 * (a[i] + b[i]));
    let radius = (0..3)
        .map(|i| (a[i] - center[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    let len = center.iter().map(|x| x * x).sum::<f64>().sqrt();
    let normal = center.map(|x| x / len);
    Ok(SmallCircle {
        center,
        radius,
        normal,
        frame,
        generators: (p.clone(), q.clone()),
    })
}

/// `m` members `[[t, ρ_j], [ρ̄_j, 1−t]]`, `ρ_j = √(t(1−t)) e^{2πij/m}`.
pub fn sample_circle(frame: &SumFrame, m: usize) -> Result<Vec<Projection>, GeometryError> {
    if m == 0 {
        return Err(GeometryError::InvalidParam {
            reason: "sample count must be positive".into(),
        });
    }
    frame.check_circle()?;
    Ok((0..m)
        .map(|j| frame.member(TAU * j as f64 / m as f64))
        .collect())
}

/// Outcome of intersecting `Λ(X', Y')` with the circle `Λ(X, Y)` it was drawn from.
#[derive(Debug, Clone)]
pub enum CircleIntersection {
    /// `P_X' + P_Y' = P_X + P_Y`; `offset = |w + z|`.
    SameCircle { offset: f64 },
    /// The circles meet in two points, located by a dense scan of `Λ(X', Y')`.
    /// `angular_error` is the largest angle between a located point and the
    /// generator it pairs with.
    TwoPoints {
        offset: f64,
        points: [Projection; 2],
        angular_error: f64,
    },
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Decides whether the circle generated by two members `p`, `q` of the
/// frame's circle coincides with it (`|w + z| ≤ tol`) and otherwise locates
/// the two common points by scanning [`INTERSECTION_SAMPLES`] points of the
/// new circle for sign changes of `s − t`.
pub fn circles_intersection(
    frame: &SumFrame,
    p: &Projection,
    q: &Projection,
    tol: f64,
) -> Result<CircleIntersection, GeometryError> {
    frame.check_circle()?;
    require_rank(p, 1)?;
    require_rank(q, 1)?;
    require_same_ambient(frame.ambient(), p.dim())?;
    require_same_ambient(frame.ambient(), q.dim())?;
    let sum = frame.sum_matrix();
    for (name, z) in [("first", p), ("second", q)] {
        if !is_rank_k_projection(&sum.sub(z.matrix()), 1, tol.max(super::MEMBERSHIP_TOL))? {
            return Err(GeometryError::NotOnCircle {
                reason: format!("{name} projection is not a member"),
            });
        }
    }
    if p.distance(q) <= tol.max(super::MEMBERSHIP_TOL) {
        return Err(GeometryError::NotOnCircle {
            reason: "the two projections coincide".into(),
        });
    }

    let w = frame.local(p.matrix()).get(0, 1);
    let z = frame.local(q.matrix()).get(0, 1);
    let offset = (w + z).norm();
    if offset <= tol {
        return Ok(CircleIntersection::SameCircle { offset });
    }

    let inner_frame = sum_frame(p, q)?;
    let b0 = frame.basis().matrix().column(0);
    let t = frame.t();
    let gap = |theta: f64| inner(&b0, &inner_frame.member_vector(theta)).norm_sqr() - t;

    let step = TAU / INTERSECTION_SAMPLES as f64;
    let values: Vec<f64> = (0..INTERSECTION_SAMPLES)
        .map(|j| gap(step * j as f64))
        .collect();
    let mut roots = Vec::new();
    for j in 0..INTERSECTION_SAMPLES {
        let (g0, g1) = (values[j], values[(j + 1) % INTERSECTION_SAMPLES]);
        if (g0 >= 0.0) == (g1 >= 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (step * j as f64, step * (j + 1) as f64);
        let lo_sign = g0 >= 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if (gap(mid) >= 0.0) == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    if roots.len() != 2 {
        return Err(GeometryError::IntersectionScan { found: roots.len() });
    }

    let gp = inner_frame.angle_of(p);
    let gq = inner_frame.angle_of(q);
    let straight = angle_gap(roots[0], gp).max(angle_gap(roots[1], gq));
    let swapped = angle_gap(roots[0], gq).max(angle_gap(roots[1], gp));
    Ok(CircleIntersection::TwoPoints {
        offset,
        points: [inner_frame.member(roots[0]), inner_frame.member(roots[1])],
        angular_error: straight.min(swapped),
    })
}

/// Angle `θ + π`, the antipodal member of a circle sample.
pub fn antipodal_angle(theta: f64) -> f64 {
    (theta + PI).rem_euclid(TAU)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, RngState};

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn e(k: usize) -> Projection {
        Projection::rank_one(&basis_vector(2, k)).unwrap()
    }

    fn plus() -> Projection {
        Projection::rank_one(&[c64(H, 0.0), c64(H, 0.0)]).unwrap()
    }

    fn std_frame() -> SubspaceBasis {
        SubspaceBasis::standard(2, &[0, 1])
    }

    #[test]
    fn param_examples() {
        let p = projection_from_param(&LineParam::new(1.0, 0.0).unwrap(), &std_frame()).unwrap();
        assert!(p.distance(&e(0)) < 1e-15);
        let p = projection_from_param(&LineParam::new(0.5, 0.0).unwrap(), &std_frame()).unwrap();
        assert!(p.distance(&plus()) < 1e-15);
        let p = projection_from_param(&LineParam::new(0.0, 1.0).unwrap(), &std_frame()).unwrap();
        assert!(p.distance(&e(1)) < 1e-15);
        assert!(LineParam::new(1.5, 0.0).is_err());
    }

    #[test]
    fn param_matrix_layout() {
        let lp = LineParam::new(0.3, 1.1).unwrap();
        let p = projection_from_param(&lp, &std_frame()).unwrap();
        assert!((p.matrix().get(0, 0).re - 0.3).abs() < 1e-15);
        assert!((p.matrix().get(0, 1) - lp.off_diagonal()).norm() < 1e-15);
    }

    #[test]
    fn sum_frame_examples() {
        assert_eq!(sum_frame(&e(0), &e(0)).unwrap().t(), 1.0);
        assert!((sum_frame(&e(0), &e(1)).unwrap().t() - 0.5).abs() < 1e-15);
        let want = (1.0 + H) / 2.0;
        let f = sum_frame(&e(0), &plus()).unwrap();
        assert!((f.t() - want).abs() < 1e-14);
        let local = f.local(&e(0).matrix().add(plus().matrix()));
        assert!((local.get(0, 0).re - 2.0 * want).abs() < 1e-14);
        assert!((local.get(1, 1).re - 2.0 * (1.0 - want)).abs() < 1e-14);
        assert!(local.get(0, 1).norm() < 1e-14);
    }

    #[test]
    fn membership_examples() {
        assert!(lambda_membership(&e(0), &e(0), &e(0), 1e-9).unwrap());
        let mut rng = RngState::new(4);
        for _ in 0..10 {
            let z = rng.rank_one_projection(2);
            assert!(lambda_membership(&e(0), &e(1), &z, 1e-9).unwrap());
        }
        assert!(!lambda_membership(&e(0), &e(0), &e(1), 1e-9).unwrap());
        let rank2 = crate::linalg::projector_onto(&SubspaceBasis::standard(2, &[0, 1]));
        assert!(matches!(
            lambda_membership(&e(0), &e(1), &rank2, 1e-9),
            Err(GeometryError::RankMismatch { .. })
        ));
    }

    #[test]
    fn det0_examples() {
        assert!(det0_check(0.3, 0.3));
        for s in [0.0, 0.1, 0.77, 1.0] {
            assert!(det0_check(0.5, s));
        }
        assert!(!det0_check(0.3, 0.4));
    }

    #[test]
    fn small_circle_errors() {
        assert!(matches!(
            small_circle(&e(0), &e(1)),
            Err(GeometryError::Orthogonal { .. })
        ));
        assert!(matches!(
            small_circle(&e(0), &e(0)),
            Err(GeometryError::Degenerate)
        ));
        let p3 = Projection::rank_one(&basis_vector(3, 0)).unwrap();
        assert!(matches!(
            small_circle(&p3, &p3),
            Err(GeometryError::WrongDim { found: 3 })
        ));
    }

    #[test]
    fn horizontal_circle_from_distant_points() {
        // Sphere points (x1, x2, τ) and (−x1, −x2, τ) generate the plane x3 = τ.
        let tau = 0.2_f64;
        let rho = (0.25 - tau * tau).sqrt();
        let (c, s) = (0.7_f64.cos(), 0.7_f64.sin());
        let p = projection_from_sphere([rho * c, rho * s, tau]).unwrap();
        let q = projection_from_sphere([-rho * c, -rho * s, tau]).unwrap();
        let circle = small_circle(&p, &q).unwrap();
        assert!(circle
            .center
            .iter()
            .zip([0.0, 0.0, tau])
            .all(|(a, b)| (a - b).abs() < 1e-14));
        assert!((circle.normal[2] - 1.0).abs() < 1e-14);
        assert!((circle.radius - rho).abs() < 1e-14);
        for m in circle.sample(16).unwrap() {
            let x = sphere_point(&m).unwrap().vector();
            assert!((x[2] - tau).abs() < 1e-12);
        }
    }

    use super::super::projection_from_sphere;

    #[test]
    fn samples_are_members_on_the_plane() {
        let mut rng = RngState::new(21);
        for _ in 0..20 {
            let p = rng.rank_one_projection(2);
            let q = rng.rank_one_projection(2);
            let circle = small_circle(&p, &q).unwrap();
            for m in circle.sample(24).unwrap() {
                assert!(lambda_membership(&p, &q, &m, 1e-9).unwrap());
                let pt = sphere_point(&m).unwrap();
                let x = pt.vector();
                assert!(circle.plane_offset(x).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn single_sample_has_real_offdiagonal() {
        let f = sum_frame(&e(0), &plus()).unwrap();
        let s = sample_circle(&f, 1).unwrap();
        let local = f.local(s[0].matrix());
        let want = (f.t() * (1.0 - f.t())).sqrt();
        assert!((local.get(0, 1) - c64(want, 0.0)).norm() < 1e-14);
        assert!(sample_circle(&f, 0).is_err());
    }

    #[test]
    fn antipodal_samples_share_the_sum() {
        let f = sum_frame(&e(0), &plus()).unwrap();
        let a = f.member(0.4);
        let b = f.member(antipodal_angle(0.4));
        let sum = a.matrix().add(b.matrix());
        assert!(sum.sub(&f.sum_matrix()).frobenius_norm() < 1e-14);
        let regen = sum_frame(&a, &b).unwrap();
        assert!((regen.t() - f.t()).abs() < 1e-14);
    }

    #[test]
    fn intersection_examples() {
        let f = sum_frame(&e(0), &plus()).unwrap();
        let a = f.member(1.0);
        let b = f.member(antipodal_angle(1.0));
        assert!(matches!(
            circles_intersection(&f, &a, &b, 1e-9).unwrap(),
            CircleIntersection::SameCircle { .. }
        ));

        let c = f.member(2.2);
        match circles_intersection(&f, &a, &c, 1e-9).unwrap() {
            CircleIntersection::TwoPoints {
                points,
                angular_error,
                ..
            } => {
                assert!(angular_error <= 1e-6);
                let d0 = points[0].distance(&a).min(points[0].distance(&c));
                let d1 = points[1].distance(&a).min(points[1].distance(&c));
                assert!(d0 < 1e-6 && d1 < 1e-6);
            }
            other => panic!("expected two points, got {other:?}"),
        }

        assert!(matches!(
            circles_intersection(&f, &a, &a, 1e-9),
            Err(GeometryError::NotOnCircle { .. })
        ));
        assert!(matches!(
            circles_intersection(&f, &a, &e(1), 1e-9),
            Err(GeometryError::NotOnCircle { .. })
        ));
    }
}
