use std::f64::consts::TAU;

use proptest::prelude::*;
use wignerkit::coords::{embed_isometry, embed_trace_constant, from_coords, to_coords, HermBasis};
use wignerkit::geometry::sphere::{mat3_distance, mat3_mul};
use wignerkit::geometry::{
    circles_intersection, lambda_membership, projection_from_param, projection_from_sphere,
    sphere_point, su2_to_o3, sum_frame, CircleIntersection, LineParam,
};
use wignerkit::linalg::{herm_eig, projector_onto, range_basis, rank_eps, subspace_sum};
use wignerkit::verify::generic_pair;
use wignerkit::{ComplexMatrix, HermitianMatrix, RngState, SubspaceBasis, SuperOperator};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

fn gram_rank(x: &SubspaceBasis, y: &SubspaceBasis) -> usize {
    let mut cols = x.vectors();
    cols.extend(y.vectors());
    let b = ComplexMatrix::from_columns(&cols).unwrap();
    let g = HermitianMatrix::hermitian_part(&b.adjoint().matmul(&b)).unwrap();
    rank_eps(&g, 1e-9).unwrap()
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn eig_reconstructs(seed in any::<u64>(), n in 1usize..=8, log_scale in -3.0f64..3.0) {
        let a = RngState::new(seed).random_hermitian(n).scale(10f64.powf(log_scale));
        let eig = herm_eig(&a).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let m = a.to_matrix();
        for (i, &l) in eig.values.iter().enumerate() {
            let v = eig.vector(i);
            let r: f64 = m.matvec(&v).iter().zip(&v).map(|(x, y)| (x - y * l).norm_sqr()).sum();
            prop_assert!(r.sqrt() <= 1e-10 * (1.0 + a.frobenius_norm()));
        }
        let err = eig.reconstruct().sub(&a).frobenius_norm();
        prop_assert!(err <= 1e-10 * (1.0 + a.frobenius_norm()), "error {:e}", err);
    }

    #[test]
    fn projector_of_range_is_identity(seed in any::<u64>(), n in 1usize..=6, k in 0usize..=6) {
        let k = k.min(n);
        let p = RngState::new(seed).random_subspace(n, k).projector_matrix();
        let back = projector_onto(&range_basis(&p, 1e-9).unwrap());
        prop_assert!(back.matrix().sub(&p).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn rank_of_sum_is_dimension_of_span(seed in any::<u64>(), n in 2usize..=6, k1 in 1usize..=6, k2 in 1usize..=6, offset in 0usize..6) {
        let (k1, k2) = (k1.min(n), k2.min(n));
        let offset = offset % (n - k2 + 1);
        let mut rng = RngState::new(seed);
        let f = rng.haar_unitary(n);
        let x = SubspaceBasis::new(f.select_columns(&(0..k1).collect::<Vec<_>>())).unwrap();
        let y = SubspaceBasis::new(f.select_columns(&(offset..offset + k2).collect::<Vec<_>>())).unwrap();
        let sum = x.projector_matrix().add(&y.projector_matrix());
        let union = (0..n).filter(|&i| i < k1 || (offset..offset + k2).contains(&i)).count();
        let rank = rank_eps(&sum, 1e-9).unwrap();
        prop_assert_eq!(rank, union);
        prop_assert_eq!(rank, gram_rank(&x, &y));
        prop_assert_eq!(rank, subspace_sum(&x, &y, 1e-9).unwrap().dim());
    }

    #[test]
    fn haar_unitaries_are_unitary(seed in any::<u64>(), n in 1usize..=8) {
        let u = RngState::new(seed).haar_unitary(n);
        let d = (&u.adjoint().matmul(&u) - &ComplexMatrix::identity(n)).frobenius_norm();
        prop_assert!(d <= 1e-11, "defect {:e}", d);
    }

    #[test]
    fn coordinates_are_an_isometry(seed in any::<u64>(), n in 1usize..=6) {
        let a = RngState::new(seed).random_hermitian(n);
        let c = to_coords(&a);
        prop_assert_eq!(c.values().len(), n * n);
        prop_assert!((c.norm() - a.frobenius_norm()).abs() <= 1e-12 * (1.0 + a.frobenius_norm()));
        prop_assert!(from_coords(&c).sub(&a).frobenius_norm() <= 1e-13 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn embedded_isometries_are_orthogonal(seed in any::<u64>(), n in 1usize..=5, anti in any::<bool>()) {
        let u = RngState::new(seed).haar_unitary(n);
        let m = embed_isometry(&u, anti).unwrap();
        let defect = m.transpose().compose(&m).add(&SuperOperator::identity(n).scale(-1.0)).frobenius_norm();
        prop_assert!(defect <= 1e-9, "defect {:e}", defect);
    }

    #[test]
    fn trace_constant_has_rank_one(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = RngState::new(seed);
        let p = rng.rank_one_projection(n);
        let m = embed_trace_constant(&p).unwrap();
        let trace_row = HermBasis::new(n).trace_row();
        let target = to_coords(p.matrix());
        for (row, &cp) in m.rows().iter().zip(target.values()) {
            for (&x, &t) in row.iter().zip(&trace_row) {
                prop_assert!((x - cp * t).abs() <= 1e-12);
            }
        }
        let a = rng.random_hermitian(n);
        prop_assert!((m.apply(&a).trace() - a.trace()).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(cases(128))]

    #[test]
    fn membership_iff_same_t(seed in any::<u64>(), s in 0.0f64..=1.0, alpha in 0.0f64..TAU, exact in any::<bool>()) {
        let mut rng = RngState::new(seed);
        let (p, q, frame) = generic_pair(&mut rng);
        let s = if exact { frame.t() } else { s };
        let z = projection_from_param(&LineParam::new(s, alpha).unwrap(), frame.basis()).unwrap();
        let expected = (s - frame.t()).abs() <= 1e-8;
        prop_assert_eq!(lambda_membership(&p, &q, &z, 1e-10).unwrap(), expected, "t = {}, s = {}", frame.t(), s);
    }

    #[test]
    fn membership_is_unitarily_equivariant(seed in any::<u64>(), on_circle in any::<bool>(), theta in 0.0f64..TAU) {
        let mut rng = RngState::new(seed);
        let (p, q, frame) = generic_pair(&mut rng);
        let z = if on_circle { frame.member(theta) } else { rng.rank_one_projection(2) };
        let u = rng.haar_unitary(2);
        let before = lambda_membership(&p, &q, &z, 1e-9).unwrap();
        let after = lambda_membership(&p.conjugate_by(&u), &q.conjugate_by(&u), &z.conjugate_by(&u), 1e-9).unwrap();
        prop_assert_eq!(before, after);
        prop_assert!(before || !on_circle);
    }

    #[test]
    fn circles_meet_in_the_pair_or_coincide(seed in any::<u64>(), a in 0.0f64..TAU, b in 0.0f64..TAU) {
        let mut rng = RngState::new(seed);
        let (_, _, frame) = generic_pair(&mut rng);
        let gap = (a - b).rem_euclid(std::f64::consts::PI);
        prop_assume!(gap.min(std::f64::consts::PI - gap) >= 1e-3);
        let (x, y) = (frame.member(a), frame.member(b));
        let equal_sums = x.matrix().add(y.matrix()).sub(&frame.sum_matrix()).frobenius_norm() <= 1e-9;
        match circles_intersection(&frame, &x, &y, 1e-9).unwrap() {
            CircleIntersection::SameCircle { .. } => prop_assert!(equal_sums),
            CircleIntersection::TwoPoints { angular_error, .. } => {
                prop_assert!(!equal_sums);
                prop_assert!(angular_error <= 1e-6, "angular error {:e}", angular_error);
            }
        }
    }

    #[test]
    fn sum_frame_diagonalizes_the_sum(seed in any::<u64>()) {
        let mut rng = RngState::new(seed);
        let (p, q) = (rng.rank_one_projection(2), rng.rank_one_projection(2));
        let frame = sum_frame(&p, &q).unwrap();
        let t = frame.t();
        prop_assert!((0.5..=1.0).contains(&t));
        let local = frame.local(&p.matrix().add(q.matrix()));
        prop_assert!((local.get(0, 0).re - 2.0 * t).abs() <= 1e-12);
        prop_assert!((local.get(1, 1).re - 2.0 * (1.0 - t)).abs() <= 1e-12);
        prop_assert!(local.get(0, 1).norm() <= 1e-12);
    }

    #[test]
    fn sphere_points_round_trip(seed in any::<u64>()) {
        let p = RngState::new(seed).rank_one_projection(2);
        let x = sphere_point(&p).unwrap();
        let (d0, dr) = x.defects();
        prop_assert!(d0 <= 1e-12 && dr <= 1e-10);
        prop_assert!(projection_from_sphere(x.vector()).unwrap().distance(&p) <= 1e-12);
    }

    #[test]
    fn rotation_of_a_product(seed in any::<u64>()) {
        let mut rng = RngState::new(seed);
        let (u, v) = (rng.haar_unitary(2), rng.haar_unitary(2));
        let r = |m: &ComplexMatrix| su2_to_o3(m, false).unwrap();
        prop_assert!(mat3_distance(&r(&u.matmul(&v)), &mat3_mul(&r(&u), &r(&v))) <= 1e-9);
    }
}
