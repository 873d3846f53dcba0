//! Acceptance criteria for `wignerkit`, each run as a [`RunReport`].
//!
//! Reports hold no timing data so that criterion 9 can compare them byte
//! for byte; wall time is measured separately in [`Outcome`].

use std::time::Instant;

use wignerkit::geometry::sample_circle;
use wignerkit::verify::{
    generic_pair, hole_checks, intersection_checks, iso_checks, min_pair_overlap, negative_check,
    orthogonal_pair_check, round_trip_checks, section5_pair_checks, sphere_checks, trace_check,
    trial_seed, Bound, Check, RunReport, Suite, VerifyConfig, CIRCLE_SAMPLES,
};
use wignerkit::RngState;

/// Master seed of every acceptance run.
pub const MASTER_SEED: u64 = 0;

const TAG_MARGIN: u64 = 102;

#[derive(Debug, Clone)]
pub struct Criterion {
    pub number: usize,
    pub title: &'static str,
    /// Wall-time budget in seconds.
    pub budget: Option<f64>,
}

pub const CRITERIA: [Criterion; 8] = [
    Criterion {
        number: 1,
        title: "classification round trip, n in {2,3,4,6}",
        budget: Some(30.0),
    },
    Criterion {
        number: 2,
        title: "membership and orthogonal pairs on small circles",
        budget: Some(10.0),
    },
    Criterion {
        number: 3,
        title: "intersection of small circles",
        budget: Some(20.0),
    },
    Criterion {
        number: 4,
        title: "unitaries act on the sphere by orthogonal maps",
        budget: None,
    },
    Criterion {
        number: 5,
        title: "rank-one projections of C^2 fill the sphere",
        budget: None,
    },
    Criterion {
        number: 6,
        title: "compatibility and intervals, n = 4, k = 2",
        budget: None,
    },
    Criterion {
        number: 7,
        title: "perturbed operators are rejected",
        budget: None,
    },
    Criterion {
        number: 8,
        title: "rank-one preservers fix the trace",
        budget: None,
    },
];

#[derive(Debug, Clone)]
pub struct Outcome {
    pub criterion: Criterion,
    pub report: RunReport,
    pub seconds: f64,
}

impl Outcome {
    pub fn within_budget(&self) -> bool {
        self.criterion.budget.is_none_or(|b| self.seconds <= b)
    }

    pub fn passed(&self) -> bool {
        self.report.passed && self.within_budget()
    }
}

fn config(dims: &[usize], trials: usize, seed: u64) -> VerifyConfig {
    VerifyConfig {
        dims: dims.to_vec(),
        trials,
        seed,
    }
}

fn report(number: usize, suite: Suite, config: &VerifyConfig) -> RunReport {
    RunReport::new(&format!("acceptance criterion {number}"), suite, config)
}

/// Runs criterion `number` (1 to 8) under `seed`.
pub fn run(number: usize, seed: u64) -> Outcome {
    let criterion = CRITERIA[number - 1].clone();
    let started = Instant::now();
    let report = match number {
        1 => round_trip(seed),
        2 => hole(seed),
        3 => intersections(seed),
        4 => iso(seed),
        5 => sphere(seed),
        6 => intervals(seed),
        7 => negative(seed),
        8 => trace(seed),
        _ => panic!("no criterion {number}"),
    };
    Outcome {
        criterion,
        report,
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn round_trip(seed: u64) -> RunReport {
    let c = config(&[2, 3, 4, 6], 100, seed);
    let mut r = report(1, Suite::Theorem, &c);
    for &n in &c.dims {
        round_trip_checks(&c, n, &mut r);
    }
    r
}

fn hole(seed: u64) -> RunReport {
    let c = config(&[2], 50, seed);
    let mut r = report(2, Suite::Lemmas, &c);
    hole_checks(&c, &mut r);
    let mut margin = Check::numeric(
        "hole_orthogonal_margin",
        "min tr(P_i P_j) over circle samples exceeds min(t, 1 − t)² − 1e-8 (value: min − min(t, 1 − t)² + 1e-8)",
        Some(2),
        Bound::AtLeast,
        0.0,
    );
    for trial in 0..c.trials {
        let s = trial_seed(seed, TAG_MARGIN, 2, trial);
        let mut rng = RngState::new(s);
        let (_, _, frame) = generic_pair(&mut rng);
        let t = frame.t();
        let samples = sample_circle(&frame, CIRCLE_SAMPLES).expect("generic circle");
        let min = min_pair_overlap(&samples);
        let floor = t.min(1.0 - t).powi(2) - 1e-8;
        margin.record_value_and(s, min - floor, min > 0.0, || {
            format!(
                "t = {t}, min tr(P_i P_j) = {min}, (2t − 1)² = {}",
                (2.0 * t - 1.0).powi(2)
            )
        });
    }
    r.push(margin);
    orthogonal_pair_check(&c, &mut r);
    r
}

fn intersections(seed: u64) -> RunReport {
    let c = config(&[2], 50, seed);
    let mut r = report(3, Suite::Lemmas, &c);
    intersection_checks(&c, &mut r);
    r
}

fn iso(seed: u64) -> RunReport {
    let c = config(&[2], 100, seed);
    let mut r = report(4, Suite::Lemmas, &c);
    iso_checks(&c, &mut r);
    r
}

fn sphere(seed: u64) -> RunReport {
    // 20 projections and 10 pairs per trial: 1000 projections, 500 pairs.
    let c = config(&[2], 50, seed);
    let mut r = report(5, Suite::Lemmas, &c);
    sphere_checks(&c, &mut r);
    r
}

fn intervals(seed: u64) -> RunReport {
    let c = config(&[4], 20, seed);
    let mut r = report(6, Suite::Section5, &c);
    section5_pair_checks(&c, 4, 2, &mut r);
    r
}

fn negative(seed: u64) -> RunReport {
    let c = config(&[2, 3, 4], 50, seed);
    let mut r = report(7, Suite::Theorem, &c);
    for &n in &c.dims {
        negative_check(&c, n, &mut r);
    }
    r
}

fn trace(seed: u64) -> RunReport {
    let c = config(&[2, 3, 4, 6], 20, seed);
    let mut r = report(8, Suite::Theorem, &c);
    for &n in &c.dims {
        trace_check(&c, n, &mut r);
    }
    r
}
