//! Numerical certification suites.
//!
//! Each suite runs a list of checks over seeded random trials and collects
//! them into a [`RunReport`]. Trial `i` of a check draws from
//! `RngState::new(trial_seed(master, tag, dim, i))`, so any failure can be
//! replayed from the reported seed alone. Reports contain no timing data
//! and serialize to byte-identical JSON for equal inputs.

use std::f64::consts::{PI, TAU};

use serde::Serialize;
use thiserror::Error;

use crate::classifier::{
    classify, generate, phase_aligned_distance, ClassifyOptions, GenerateKind, Truth, Verdict,
};
use crate::coords::embed_isometry;
use crate::geometry::grassmann::{
    adjacent, as_projection, commutator_norm, compatible, interval_membership,
};
use crate::geometry::line::antipodal_angle;
use crate::geometry::sphere::{mat3_det, mat3_distance, mat3_mul, mat3_orthogonality_defect};
use crate::geometry::{
    antipodal_iff_orthogonal, circles_intersection, det0_check, lambda_membership,
    projection_from_param, random_interval_element, sphere_point, su2_to_o3, sum_frame,
    CircleIntersection, LineParam, SumFrame,
};
use crate::linalg::{
    c64, subspace_intersection, subspace_sum, ComplexMatrix, Projection, RngState, SubspaceBasis,
};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("dimension {found} is outside {MIN_DIM}..{MAX_DIM}")]
    DimOutOfRange { found: usize },
    #[error("no dimensions given")]
    NoDims,
    #[error("trial count must be positive")]
    NoTrials,
    #[error("unknown suite '{0}' (expected lemmas, theorem, section5 or all)")]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemmas,
    Theorem,
    Section5,
    All,
}

impl std::str::FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lemmas" => Ok(Suite::Lemmas),
            "theorem" => Ok(Suite::Theorem),
            "section5" => Ok(Suite::Section5),
            "all" => Ok(Suite::All),
            other => Err(VerifyError::UnknownSuite(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.dims.is_empty() {
            return Err(VerifyError::NoDims);
        }
        if let Some(&bad) = self.dims.iter().find(|d| !(MIN_DIM..=MAX_DIM).contains(*d)) {
            return Err(VerifyError::DimOutOfRange { found: bad });
        }
        if self.trials == 0 {
            return Err(VerifyError::NoTrials);
        }
        Ok(())
    }
}

/// Seed of trial `trial` of the check tagged `tag` at dimension `dim`.
pub fn trial_seed(master: u64, tag: u64, dim: usize, trial: usize) -> u64 {
    let s = RngState::derive_seed(master, tag);
    let s = RngState::derive_seed(s, dim as u64);
    RngState::derive_seed(s, trial as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Every recorded value must be at most the bound; `worst` is the maximum.
    AtMost,
    /// Every recorded value must be at least the bound; `worst` is the minimum.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// The statement this check certifies.
    pub certifies: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub samples: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<f64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Accumulates samples for one [`CheckResult`].
#[derive(Debug, Clone)]
pub struct Check {
    result: CheckResult,
}

impl Check {
    /// A check of logical conditions only.
    pub fn logical(name: &str, certifies: &str, dim: Option<usize>) -> Self {
        Self {
            result: CheckResult {
                name: name.to_string(),
                certifies: certifies.to_string(),
                dim,
                samples: 0,
                violations: 0,
                bound: None,
                direction: None,
                worst: None,
                passed: true,
                failing_seed: None,
                failure: None,
            },
        }
    }

    /// A check of a numeric quantity against `bound`.
    pub fn numeric(
        name: &str,
        certifies: &str,
        dim: Option<usize>,
        direction: Bound,
        bound: f64,
    ) -> Self {
        let mut c = Self::logical(name, certifies, dim);
        c.result.bound = Some(bound);
        c.result.direction = Some(direction);
        c
    }

    fn fail(&mut self, seed: u64, detail: impl FnOnce() -> String) {
        self.result.violations += 1;
        self.result.passed = false;
        if self.result.failing_seed.is_none() {
            self.result.failing_seed = Some(seed);
            self.result.failure = Some(detail());
        }
    }

    pub fn record_bool(&mut self, seed: u64, ok: bool, detail: impl FnOnce() -> String) {
        self.result.samples += 1;
        if !ok {
            self.fail(seed, detail);
        }
    }

    /// Records `value` (and an extra logical condition `also`).
    pub fn record_value(&mut self, seed: u64, value: f64, detail: impl FnOnce() -> String) {
        self.record_value_and(seed, value, true, detail)
    }

    pub fn record_value_and(
        &mut self,
        seed: u64,
        value: f64,
        also: bool,
        detail: impl FnOnce() -> String,
    ) {
        let direction = self.result.direction.expect("numeric check");
        let bound = self.result.bound.expect("numeric check");
        self.result.samples += 1;
        let (within, worse) = match direction {
            Bound::AtMost => (
                value <= bound,
                self.result
                    .worst
                    .is_none_or(|w| value > w || value.is_nan()),
            ),
            Bound::AtLeast => (
                value >= bound,
                self.result
                    .worst
                    .is_none_or(|w| value < w || value.is_nan()),
            ),
        };
        if worse {
            self.result.worst = Some(value);
        }
        if !(within && also) {
            self.fail(seed, || {
                format!("value {value:e} vs bound {bound:e}: {}", detail())
            });
        }
    }

    pub fn finish(self) -> CheckResult {
        self.result
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub suite: Suite,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_seed: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, suite: Suite, config: &VerifyConfig) -> Self {
        Self {
            command: command.to_string(),
            suite,
            seed: config.seed,
            dims: config.dims.clone(),
            trials: config.trials,
            checks: Vec::new(),
            passed: true,
            failing_seed: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        let result = check.finish();
        if !result.passed {
            self.passed = false;
            if self.failing_seed.is_none() {
                self.failing_seed = result.failing_seed;
            }
        }
        self.checks.push(result);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Runs a suite. `command` is echoed into the report.
pub fn run_suite(
    suite: Suite,
    config: &VerifyConfig,
    command: &str,
) -> Result<RunReport, VerifyError> {
    config.validate()?;
    let mut report = RunReport::new(command, suite, config);
    if matches!(suite, Suite::Lemmas | Suite::All) {
        lemma_checks(config, &mut report);
    }
    if matches!(suite, Suite::Theorem | Suite::All) {
        theorem_checks(config, &mut report);
    }
    if matches!(suite, Suite::Section5 | Suite::All) {
        section5_checks(config, &mut report);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Lemmas on the projective line (C²)

const TAG_HOLE: u64 = 1;
const TAG_ORTHO: u64 = 2;
const TAG_INTERSECT: u64 = 3;
const TAG_ISO: u64 = 4;
const TAG_SPHERE: u64 = 5;
const TAG_EQUIVARIANCE: u64 = 6;

/// `|2t − 1|` and `1 − t` must both exceed this for a "generic" pair.
pub const GENERIC_PAIR_MARGIN: f64 = 1e-3;
/// Points on each generic circle scanned for orthogonal pairs.
pub const CIRCLE_SAMPLES: usize = 64;
/// Member pairs drawn on each circle for the intersection check.
pub const PAIRS_PER_CIRCLE: usize = 20;
/// Size of the `s` and `α` grids for membership.
pub const S_GRID: usize = 100;
pub const ALPHA_GRID: usize = 64;

/// Random pair of rank-one projections in `C²` that is neither orthogonal
/// nor (almost) equal, with its sum frame.
pub fn generic_pair(rng: &mut RngState) -> (Projection, Projection, SumFrame) {
    loop {
        let p = rng.rank_one_projection(2);
        let q = rng.rank_one_projection(2);
        let frame = sum_frame(&p, &q).expect("rank-one pair in C²");
        let t = frame.t();
        if (2.0 * t - 1.0).abs() >= GENERIC_PAIR_MARGIN && 1.0 - t >= GENERIC_PAIR_MARGIN {
            return (p, q, frame);
        }
    }
}

/// `S_GRID` values of `s`: `t`, `t + 1e-6` and a uniform grid on `[0, 1]`.
pub fn s_grid(t: f64) -> Vec<f64> {
    let uniform = S_GRID - 2;
    let mut s: Vec<f64> = (0..uniform)
        .map(|k| k as f64 / (uniform - 1) as f64)
        .collect();
    s.push(t);
    s.push((t + 1e-6).min(1.0));
    s
}

fn lemma_checks(config: &VerifyConfig, report: &mut RunReport) {
    hole_checks(config, report);
    orthogonal_pair_check(config, report);
    intersection_checks(config, report);
    iso_checks(config, report);
    sphere_checks(config, report);
    equivariance_check(config, report);
}

/// Membership in `Λ(X, Y)` over the `(s, α)` grid, one generic pair per trial.
pub fn hole_checks(config: &VerifyConfig, report: &mut RunReport) {
    let trials = config.trials;
    let mut membership = Check::logical(
        "hole_membership",
        "Z is in Λ(X, Y) iff ⟨b0|P_Z|b0⟩ = t in the sum frame",
        Some(2),
    );
    let mut det0 = Check::logical(
        "hole_det0",
        "(2t − s)(1 + s − 2t) = s(1 − s) holds iff s = t when t ≠ 1/2",
        Some(2),
    );
    for trial in 0..trials {
        let seed = trial_seed(config.seed, TAG_HOLE, 2, trial);
        let mut rng = RngState::new(seed);
        let (p, q, frame) = generic_pair(&mut rng);
        let t = frame.t();
        for s in s_grid(t) {
            let expected = (s - t).abs() <= 1e-8;
            det0.record_bool(seed, det0_check(t, s) == expected, || {
                format!("t = {t}, s = {s}")
            });
            for k in 0..ALPHA_GRID {
                let alpha = TAU * k as f64 / ALPHA_GRID as f64;
                let z =
                    projection_from_param(&LineParam::new(s, alpha).expect("grid"), frame.basis())
                        .expect("frame");
                let got = lambda_membership(&p, &q, &z, 1e-10).expect("rank one");
                membership.record_bool(seed, got == expected, || {
                    format!(
                        "t = {t}, s = {s}, alpha = {alpha}: membership {got}, expected {expected}"
                    )
                });
            }
        }
    }
    report.push(membership);
    report.push(det0);
}

pub fn orthogonal_pair_check(config: &VerifyConfig, report: &mut RunReport) {
    // tr(P_θ P_θ') = (2t−1)² + 4t(1−t) cos²((θ−θ')/2) ≥ (2t−1)², attained at θ' = θ + π.
    let mut ortho = Check::numeric(
        "hole_no_orthogonal_pair",
        "A small circle contains no orthogonal pair: min tr(P_i P_j) − (2t−1)² over samples",
        Some(2),
        Bound::AtLeast,
        -1e-12,
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_ORTHO, 2, trial);
        let mut rng = RngState::new(seed);
        let (_, _, frame) = generic_pair(&mut rng);
        let t = frame.t();
        let samples =
            crate::geometry::sample_circle(&frame, CIRCLE_SAMPLES).expect("generic circle");
        let min = min_pair_overlap(&samples);
        ortho.record_value_and(seed, min - (2.0 * t - 1.0).powi(2), min > 0.0, || {
            format!("t = {t}, min = {min}")
        });
    }
    report.push(ortho);
}

/// `min_{i<j} tr(P_i P_j)`.
pub fn min_pair_overlap(samples: &[Projection]) -> f64 {
    let mut min = f64::INFINITY;
    for (i, a) in samples.iter().enumerate() {
        for b in &samples[i + 1..] {
            min = min.min(a.overlap(b));
        }
    }
    min
}

/// Per trial: one circle and `PAIRS_PER_CIRCLE` member pairs on it.
pub fn intersection_checks(config: &VerifyConfig, report: &mut RunReport) {
    let mut dichotomy = Check::logical(
        "intersection_dichotomy",
        "Λ(X′, Y′) = Λ(X, Y) iff P_X′ + P_Y′ = P_X + P_Y iff w + z = 0",
        Some(2),
    );
    let mut two_points = Check::numeric(
        "intersection_two_points",
        "Distinct circles through X′, Y′ meet exactly in X′ and Y′ (angular error)",
        Some(2),
        Bound::AtMost,
        1e-6,
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_INTERSECT, 2, trial);
        let mut rng = RngState::new(seed);
        let (_, _, frame) = generic_pair(&mut rng);
        let sum = frame.sum_matrix();
        for pair in 0..PAIRS_PER_CIRCLE {
            let a = rng.uniform_range(0.0, TAU);
            let b = if pair % 2 == 0 {
                antipodal_angle(a)
            } else {
                distinct_angle(a, &mut rng)
            };
            let (p, q) = (frame.member(a), frame.member(b));
            let equal_sums = p.matrix().add(q.matrix()).sub(&sum).frobenius_norm() <= 1e-9;
            match circles_intersection(&frame, &p, &q, 1e-9) {
                Ok(CircleIntersection::SameCircle { offset }) => {
                    dichotomy.record_bool(seed, equal_sums && offset <= 1e-8, || {
                        format!("same circle at angles {a}, {b}: equal sums {equal_sums}, |w+z| = {offset:e}")
                    });
                }
                Ok(CircleIntersection::TwoPoints { angular_error, .. }) => {
                    dichotomy.record_bool(seed, !equal_sums, || {
                        format!("two points but equal sums at {a}, {b}")
                    });
                    two_points.record_value(seed, angular_error, || format!("angles {a}, {b}"));
                }
                Err(e) => dichotomy.record_bool(seed, false, || format!("angles {a}, {b}: {e}")),
            }
        }
    }
    report.push(dichotomy);
    report.push(two_points);
}

/// Uniform angle at least 1e-3 away from `a` and from `a + π`.
fn distinct_angle(a: f64, rng: &mut RngState) -> f64 {
    loop {
        let b = rng.uniform_range(0.0, TAU);
        let d = (b - a).rem_euclid(PI);
        if d.min(PI - d) >= 1e-3 {
            return b;
        }
    }
}

pub fn iso_checks(config: &VerifyConfig, report: &mut RunReport) {
    let mut hom = Check::numeric(
        "iso_homomorphism",
        "U ↦ R(U) is a homomorphism into the orthogonal group of S²: ‖R(UV) − R(U)R(V)‖_F",
        Some(2),
        Bound::AtMost,
        1e-9,
    );
    let mut orth = Check::numeric(
        "iso_orthogonal_det",
        "R(U) is orthogonal with det +1; conjugation contributes the reflection diag(1, −1, 1)",
        Some(2),
        Bound::AtMost,
        1e-9,
    );
    let id = ComplexMatrix::identity(2);
    let conj = su2_to_o3(&id, true).expect("identity is unitary");
    let reflection = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
    orth.record_value(config.seed, mat3_distance(&conj, &reflection), || {
        "conjugation branch".into()
    });
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_ISO, 2, trial);
        let mut rng = RngState::new(seed);
        let u = rng.haar_unitary(2);
        let v = rng.haar_unitary(2);
        let (ru, rv) = (
            su2_to_o3(&u, false).expect("unitary"),
            su2_to_o3(&v, false).expect("unitary"),
        );
        let ruv = su2_to_o3(&u.matmul(&v), false).expect("unitary");
        hom.record_value(seed, mat3_distance(&ruv, &mat3_mul(&ru, &rv)), || {
            "R(UV) vs R(U)R(V)".into()
        });
        let anti = su2_to_o3(&u, true).expect("unitary");
        let err = mat3_orthogonality_defect(&ru)
            .max((mat3_det(&ru) - 1.0).abs())
            .max(mat3_orthogonality_defect(&anti))
            .max((mat3_det(&anti) + 1.0).abs())
            .max(mat3_distance(&anti, &mat3_mul(&ru, &reflection)));
        orth.record_value(seed, err, || {
            "orthogonality, determinant or reflection factor".into()
        });
    }
    report.push(hom);
    report.push(orth);
}

/// Unit vector orthogonal to a unit vector in `C²`.
fn orthogonal_partner(v: &[crate::C64]) -> Vec<crate::C64> {
    vec![-v[1].conj(), v[0].conj()]
}

/// Per trial: 20 random projections on the sphere and 10 antipodality pairs.
pub fn sphere_checks(config: &VerifyConfig, report: &mut RunReport) {
    let mut on_sphere = Check::numeric(
        "sphere_image",
        "Φ maps rank-one projections onto S²: max(|x0 − 1/2|·100, |‖x‖² − 1/4|)",
        Some(2),
        Bound::AtMost,
        1e-10,
    );
    let mut antipodal = Check::logical(
        "sphere_antipodal_orthogonal",
        "Antipodal points on S² are exactly the orthogonal pairs",
        Some(2),
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_SPHERE, 2, trial);
        let mut rng = RngState::new(seed);
        for _ in 0..20 {
            let p = rng.rank_one_projection(2);
            let (d0, dr) = sphere_point(&p).expect("rank one in C²").defects();
            // |x0 − 1/2| is held to 1e-12, the radius to 1e-10.
            on_sphere.record_value(seed, (d0 * 100.0).max(dr), || {
                format!("defects {d0:e}, {dr:e}")
            });
        }
        for k in 0..10 {
            let v = rng.unit_vector(2);
            let p = Projection::rank_one(&v).expect("unit");
            let q = if k % 2 == 0 {
                Projection::rank_one(&orthogonal_partner(&v)).expect("unit")
            } else {
                rng.rank_one_projection(2)
            };
            let expected = p.overlap(&q) <= 1e-10;
            let got = antipodal_iff_orthogonal(&p, &q, 1e-10);
            antipodal.record_bool(seed, got == Ok(expected), || {
                format!("{got:?}, tr(PQ) = {}", p.overlap(&q))
            });
        }
    }
    report.push(on_sphere);
    report.push(antipodal);
}

pub fn equivariance_check(config: &VerifyConfig, report: &mut RunReport) {
    let mut check = Check::logical(
        "lambda_equivariance",
        "U[Λ(X, Y)] = Λ(U(X), U(Y)) for unitary U",
        Some(2),
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_EQUIVARIANCE, 2, trial);
        let mut rng = RngState::new(seed);
        let (p, q, frame) = generic_pair(&mut rng);
        let u = rng.haar_unitary(2);
        let (up, uq) = (p.conjugate_by(&u), q.conjugate_by(&u));
        for k in 0..8 {
            let z = if k % 2 == 0 {
                frame.member(rng.uniform_range(0.0, TAU))
            } else {
                rng.rank_one_projection(2)
            };
            let before = lambda_membership(&p, &q, &z, 1e-9).expect("rank one");
            let after = lambda_membership(&up, &uq, &z.conjugate_by(&u), 1e-9).expect("rank one");
            check.record_bool(seed, before == after && (k % 2 == 1 || before), || {
                format!("membership {before} before, {after} after")
            });
        }
    }
    report.push(check);
}

// ---------------------------------------------------------------------------
// Classification theorem

const TAG_ROUND_TRIP: u64 = 11;
const TAG_TRACE: u64 = 12;
const TAG_LINES: u64 = 13;
const TAG_LAMBDA_MAP: u64 = 14;
const TAG_COMPOSE: u64 = 15;
const TAG_NEGATIVE: u64 = 16;

/// Perturbation sizes for the negative-detection check.
pub const PERTURBATION_EPS: [f64; 2] = [1e-3, 1e-5];

fn theorem_checks(config: &VerifyConfig, report: &mut RunReport) {
    for &n in &config.dims {
        round_trip_checks(config, n, report);
        trace_check(config, n, report);
        line_checks(config, n, report);
        lambda_map_check(config, n, report);
        composition_check(config, n, report);
        negative_check(config, n, report);
    }
}

pub fn round_trip_checks(config: &VerifyConfig, n: usize, report: &mut RunReport) {
    let opts = ClassifyOptions::default();
    let mut iso = Check::numeric(
        "round_trip_isometry",
        "A ↦ UAU* is classified as isometry-induced and U is recovered up to phase",
        Some(n),
        Bound::AtMost,
        1e-8,
    );
    let mut anti = Check::numeric(
        "round_trip_anti_isometry",
        "A ↦ UAᵀU* is classified as anti-isometry-induced and U is recovered up to phase",
        Some(n),
        Bound::AtMost,
        1e-8,
    );
    let mut constant = Check::numeric(
        "round_trip_constant",
        "A ↦ tr(A)P is classified as trace-constant and P is recovered",
        Some(n),
        Bound::AtMost,
        1e-9,
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_ROUND_TRIP, n, trial);
        let mut rng = RngState::new(seed);
        for (kind, check) in [
            (GenerateKind::Isometry, &mut iso),
            (GenerateKind::AntiIsometry, &mut anti),
        ] {
            let g = generate(kind, n, &mut rng, 0.0).expect("n >= 2");
            let Truth::Isometry {
                u: truth,
                antilinear,
            } = g.truth
            else {
                unreachable!()
            };
            match classify(&g.operator, &opts, &mut rng) {
                Ok(Verdict::IsometryInduced {
                    u,
                    antilinear: flag,
                    ..
                }) => check.record_value_and(
                    seed,
                    phase_aligned_distance(&u, &truth),
                    flag == antilinear,
                    || format!("antilinear flag {flag}, expected {antilinear}"),
                ),
                other => check.record_value(seed, f64::INFINITY, || format!("verdict {other:?}")),
            }
        }
        let g = generate(GenerateKind::Constant, n, &mut rng, 0.0).expect("n >= 2");
        let Truth::Constant { p: truth } = g.truth else {
            unreachable!()
        };
        match classify(&g.operator, &opts, &mut rng) {
            Ok(Verdict::TraceConstant { p, .. }) => {
                constant.record_value(seed, p.distance(&truth), String::new)
            }
            other => constant.record_value(seed, f64::INFINITY, || format!("verdict {other:?}")),
        }
    }
    report.push(iso);
    report.push(anti);
    report.push(constant);
}

pub fn trace_check(config: &VerifyConfig, n: usize, report: &mut RunReport) {
    let mut check = Check::numeric(
        "trace_identity",
        "Rank-one preservers fix the trace: |tr L(A) − tr A| / (1 + ‖A‖_F)",
        Some(n),
        Bound::AtMost,
        1e-8,
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_TRACE, n, trial);
        let mut rng = RngState::new(seed);
        for kind in [
            GenerateKind::Isometry,
            GenerateKind::AntiIsometry,
            GenerateKind::Constant,
        ] {
            let g = generate(kind, n, &mut rng, 0.0).expect("n >= 2");
            for _ in 0..20 {
                let a = rng.random_hermitian(n);
                let err =
                    (g.operator.apply(&a).trace() - a.trace()).abs() / (1.0 + a.frobenius_norm());
                check.record_value(seed, err, || format!("{kind} operator"));
            }
        }
    }
    report.push(check);
}

/// Random 2-dimensional subspace and a random rank-one projection inside it.
fn line_point(frame: &SubspaceBasis, rng: &mut RngState) -> Projection {
    let lp = LineParam::new(rng.uniform(), rng.uniform_range(0.0, TAU)).expect("valid");
    projection_from_param(&lp, frame).expect("2-frame")
}

pub fn line_checks(config: &VerifyConfig, n: usize, report: &mut RunReport) {
    let opts = ClassifyOptions::default();
    let mut injective = Check::numeric(
        "line_injective",
        "An isometry-induced map is injective on every line: ‖f(X) − f(Y)‖ / ‖P_X − P_Y‖",
        Some(n),
        Bound::AtLeast,
        1.0 - 1e-8,
    );
    let mut constant = Check::numeric(
        "line_constant",
        "A trace-constant map is constant on every line: ‖f(X) − f(Y)‖_F",
        Some(n),
        Bound::AtMost,
        1e-9,
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_LINES, n, trial);
        let mut rng = RngState::new(seed);
        let kind = if trial % 2 == 0 {
            GenerateKind::Isometry
        } else {
            GenerateKind::AntiIsometry
        };
        for kind in [kind, GenerateKind::Constant] {
            let g = generate(kind, n, &mut rng, 0.0).expect("n >= 2");
            let verdict = classify(&g.operator, &opts, &mut rng);
            let frame = rng.random_subspace(n, 2);
            for _ in 0..50 {
                let (x, y) = (line_point(&frame, &mut rng), line_point(&frame, &mut rng));
                let gap = g
                    .operator
                    .apply(x.matrix())
                    .sub(&g.operator.apply(y.matrix()))
                    .frobenius_norm();
                match &verdict {
                    Ok(Verdict::IsometryInduced { .. }) => {
                        let d = x.distance(&y);
                        injective.record_value_and(seed, gap / d, gap >= 1e-8 || d < 1e-8, || {
                            format!("inputs at distance {d:e}")
                        });
                    }
                    Ok(Verdict::TraceConstant { .. }) => {
                        constant.record_value(seed, gap, String::new)
                    }
                    other => {
                        let check = if kind == GenerateKind::Constant {
                            &mut constant
                        } else {
                            &mut injective
                        };
                        check.record_value_and(seed, f64::NAN, false, || {
                            format!("verdict {other:?}")
                        });
                    }
                }
            }
        }
    }
    report.push(injective);
    report.push(constant);
}

pub fn lambda_map_check(config: &VerifyConfig, n: usize, report: &mut RunReport) {
    let mut check = Check::logical(
        "lambda_image",
        "f(Λ(X, Y)) ⊂ Λ(f(X), f(Y)) for an isometry-induced f",
        Some(n),
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_LAMBDA_MAP, n, trial);
        let mut rng = RngState::new(seed);
        let kind = if trial % 2 == 0 {
            GenerateKind::Isometry
        } else {
            GenerateKind::AntiIsometry
        };
        let g = generate(kind, n, &mut rng, 0.0).expect("n >= 2");
        let plane = rng.random_subspace(n, 2);
        let (x, y, frame) = loop {
            let (x, y) = (line_point(&plane, &mut rng), line_point(&plane, &mut rng));
            let frame = sum_frame(&x, &y).expect("rank one");
            let t = frame.t();
            if (2.0 * t - 1.0).abs() >= GENERIC_PAIR_MARGIN && 1.0 - t >= GENERIC_PAIR_MARGIN {
                break (x, y, frame);
            }
        };
        let image = |p: &Projection| Projection::from_matrix(&g.operator.apply(p.matrix()), 1e-8);
        let (fx, fy) = match (image(&x), image(&y)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                check.record_bool(seed, false, || "generator image is not a projection".into());
                continue;
            }
        };
        for k in 0..16 {
            let z = frame.member(TAU * k as f64 / 16.0);
            let ok =
                image(&z).is_ok_and(|fz| lambda_membership(&fx, &fy, &fz, 1e-8).unwrap_or(false));
            check.record_bool(seed, ok, || format!("sample {k} leaves the image circle"));
        }
    }
    report.push(check);
}

pub fn composition_check(config: &VerifyConfig, n: usize, report: &mut RunReport) {
    let mut check = Check::numeric(
        "composition_closure",
        "Isometry types compose: flags combine by XOR and U = U1·U2 or U1·conj(U2)",
        Some(n),
        Bound::AtMost,
        1e-8,
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_COMPOSE, n, trial);
        let mut rng = RngState::new(seed);
        let (a1, a2) = (trial % 2 == 1, (trial / 2) % 2 == 1);
        let u1 = rng.haar_unitary(n);
        let u2 = rng.haar_unitary(n);
        let m = embed_isometry(&u1, a1)
            .expect("unitary")
            .compose(&embed_isometry(&u2, a2).expect("unitary"));
        let expected = if a1 {
            u1.matmul(&u2.conj())
        } else {
            u1.matmul(&u2)
        };
        match classify(&m, &ClassifyOptions::default(), &mut rng) {
            Ok(Verdict::IsometryInduced { u, antilinear, .. }) => check.record_value_and(
                seed,
                phase_aligned_distance(&u, &expected),
                antilinear == (a1 ^ a2),
                || format!("flags {a1}, {a2} gave {antilinear}"),
            ),
            other => check.record_value(seed, f64::INFINITY, || format!("verdict {other:?}")),
        }
    }
    report.push(check);
}

pub fn negative_check(config: &VerifyConfig, n: usize, report: &mut RunReport) {
    let opts = ClassifyOptions::default();
    let mut detect = Check::numeric(
        "negative_detection",
        "Perturbed operators violate the hypothesis: reported defect / eps",
        Some(n),
        Bound::AtLeast,
        0.1,
    );
    let mut control = Check::logical(
        "negative_control",
        "Unperturbed operators keep their theorem type",
        Some(n),
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_NEGATIVE, n, trial);
        for eps in PERTURBATION_EPS {
            let mut rng = RngState::new(seed);
            let g = generate(GenerateKind::Perturbed, n, &mut rng, eps).expect("n >= 2");
            match classify(&g.operator, &opts, &mut rng) {
                Ok(Verdict::NotRankOnePreserving { defect, .. }) => {
                    detect.record_value(seed, defect / eps, || format!("eps = {eps:e}"))
                }
                other => {
                    detect.record_value(seed, 0.0, || format!("eps = {eps:e}: verdict {other:?}"))
                }
            }
        }
        let mut rng = RngState::new(seed);
        let g = generate(GenerateKind::Perturbed, n, &mut rng, 0.0).expect("n >= 2");
        let Truth::Perturbed { base, .. } = &g.truth else {
            unreachable!()
        };
        let verdict = classify(&g.operator, &opts, &mut rng);
        let ok = matches!(
            (base.as_ref(), &verdict),
            (Truth::Isometry { antilinear: a, .. }, Ok(Verdict::IsometryInduced { antilinear: b, .. })) if a == b
        ) || matches!(
            (base.as_ref(), &verdict),
            (Truth::Constant { .. }, Ok(Verdict::TraceConstant { .. }))
        );
        control.record_bool(seed, ok, || format!("truth {base:?}, verdict {verdict:?}"));
    }
    report.push(detect);
    report.push(control);
}

// ---------------------------------------------------------------------------
// Higher rank: compatibility, adjacency, intervals

const TAG_SECTION5: u64 = 21;
/// Interval elements and outside subspaces sampled per pair.
pub const INTERVAL_SAMPLES: usize = 8;
pub const OUTSIDE_SAMPLES: usize = 4;

/// A pair of `k`-dimensional subspaces of `C^n` together with whether it was
/// built compatible.
#[derive(Debug, Clone)]
pub struct SubspacePair {
    pub x: SubspaceBasis,
    pub y: SubspaceBasis,
    pub compatible: bool,
}

/// Compatible pair: both spanned by columns of one random unitary, sharing
/// `m < k` of them.
pub fn compatible_pair(n: usize, k: usize, rng: &mut RngState) -> SubspacePair {
    let lo = (2 * k).saturating_sub(n);
    let m = lo + rng.index(k - lo);
    let f = rng.haar_unitary(n);
    let x =
        SubspaceBasis::new(f.select_columns(&(0..k).collect::<Vec<_>>())).expect("unitary columns");
    let y = SubspaceBasis::new(f.select_columns(&(k - m..2 * k - m).collect::<Vec<_>>()))
        .expect("unitary columns");
    SubspacePair {
        x,
        y,
        compatible: true,
    }
}

/// Incompatible pair: alternately two generic random subspaces, or an
/// adjacent pair obtained by tilting one basis vector of `X` towards `X^⊥`.
pub fn incompatible_pair(n: usize, k: usize, rng: &mut RngState, tilted: bool) -> SubspacePair {
    if !tilted {
        return SubspacePair {
            x: rng.random_subspace(n, k),
            y: rng.random_subspace(n, k),
            compatible: false,
        };
    }
    let f = rng.haar_unitary(n);
    let angle = rng.uniform_range(0.2, PI / 2.0 - 0.2);
    let x =
        SubspaceBasis::new(f.select_columns(&(0..k).collect::<Vec<_>>())).expect("unitary columns");
    let mut cols = f.select_columns(&(0..k).collect::<Vec<_>>()).columns();
    let extra = f.column(k);
    for (c, e) in cols[k - 1].iter_mut().zip(&extra) {
        *c = *c * c64(angle.cos(), 0.0) + e * c64(angle.sin(), 0.0);
    }
    let y = SubspaceBasis::new(ComplexMatrix::from_columns(&cols).expect("k >= 1"))
        .expect("orthonormal");
    SubspacePair {
        x,
        y,
        compatible: false,
    }
}

/// Outcome of the interval law on one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalLaw {
    /// Λ membership equals interval membership for every sample.
    pub agrees: bool,
    /// Some interval element is not in Λᵏ(X, Y).
    pub interval_element_fails: bool,
}

/// Samples interval elements of `[X ∩ Y, X + Y]_k` and random `k`-dimensional
/// subspaces and compares `Λᵏ(X, Y)` membership with interval membership.
pub fn interval_law(pair: &SubspacePair, rng: &mut RngState) -> IntervalLaw {
    let k = pair.x.dim();
    let m = subspace_intersection(&pair.x, &pair.y, 1e-9).expect("same ambient");
    let n_sum = subspace_sum(&pair.x, &pair.y, 1e-9).expect("same ambient");
    let (px, py) = (as_projection(&pair.x), as_projection(&pair.y));
    let mut law = IntervalLaw {
        agrees: true,
        interval_element_fails: false,
    };
    let lambda = |z: &SubspaceBasis| {
        lambda_membership(&px, &py, &as_projection(z), 1e-8).expect("equal ranks")
    };
    for _ in 0..INTERVAL_SAMPLES {
        let z = random_interval_element(&m, &n_sum, k, 1e-9, rng).expect("valid interval");
        let inside = interval_membership(&m, &n_sum, &z, k, 1e-9).expect("valid interval");
        let member = lambda(&z);
        law.agrees &= inside == member;
        law.interval_element_fails |= inside && !member;
    }
    for _ in 0..OUTSIDE_SAMPLES {
        let z = rng.random_subspace(pair.x.ambient(), k);
        let inside = interval_membership(&m, &n_sum, &z, k, 1e-9).expect("valid interval");
        law.agrees &= inside == lambda(&z);
    }
    law
}

fn section5_checks(config: &VerifyConfig, report: &mut RunReport) {
    for &n in &config.dims {
        for k in (1..=2).filter(|&k| k < n) {
            section5_pair_checks(config, n, k, report);
        }
    }
}

/// Per trial: one compatible and one incompatible pair of `k`-dimensional
/// subspaces of `C^n`.
pub fn section5_pair_checks(config: &VerifyConfig, n: usize, k: usize, report: &mut RunReport) {
    let dim_tag = n * 10 + k;
    let certifies = |s: &str| format!("{s} (k = {k})");
    let mut commuting = Check::logical(
        "compatible_iff_commuting",
        &certifies("Compatible subspaces are exactly those with commuting projections"),
        Some(n),
    );
    let mut adjacency = Check::logical(
        "adjacency",
        &certifies("Adjacent means a (k−1)-dimensional intersection"),
        Some(n),
    );
    let mut law_compatible = Check::logical(
        "interval_law_compatible",
        &certifies("Λᵏ(X, Y) = [X ∩ Y, X + Y]_k for compatible X, Y"),
        Some(n),
    );
    let mut law_incompatible = Check::logical(
        "interval_law_incompatible",
        &certifies("Λᵏ(X, Y) misses part of [X ∩ Y, X + Y]_k for incompatible X, Y"),
        Some(n),
    );
    for trial in 0..config.trials {
        let seed = trial_seed(config.seed, TAG_SECTION5, dim_tag, trial);
        let mut rng = RngState::new(seed);
        let pairs = [
            compatible_pair(n, k, &mut rng),
            incompatible_pair(n, k, &mut rng, trial % 2 == 1),
        ];
        for pair in &pairs {
            let got = compatible(&pair.x, &pair.y, 1e-9).expect("same ambient");
            commuting.record_bool(seed, got == pair.compatible, || {
                format!(
                    "built compatible = {}, commutator norm {:e}",
                    pair.compatible,
                    commutator_norm(&pair.x, &pair.y)
                )
            });
            let meet = subspace_intersection(&pair.x, &pair.y, 1e-9)
                .expect("same ambient")
                .dim();
            let adj = adjacent(&pair.x, &pair.y).expect("equal dims");
            adjacency.record_bool(seed, adj == (meet + 1 == k), || {
                format!("intersection dim {meet}")
            });
            let law = interval_law(pair, &mut rng);
            if pair.compatible {
                law_compatible.record_bool(seed, law.agrees, || {
                    "membership disagrees with interval".into()
                });
            } else {
                law_incompatible.record_bool(seed, law.interval_element_fails, || {
                    "every sampled interval element is in Λ".into()
                });
            }
        }
    }
    report.push(commuting);
    report.push(adjacency);
    report.push(law_compatible);
    report.push(law_incompatible);
}
