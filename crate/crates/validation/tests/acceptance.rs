use std::process::ExitCode;

use wignerkit_validation::{run, Outcome, CRITERIA, MASTER_SEED};

fn print_outcome(o: &Outcome) {
    let status = if o.passed() { "PASS" } else { "FAIL" };
    let budget = o
        .criterion
        .budget
        .map_or(String::new(), |b| format!(" / {b:.0}s"));
    let samples: usize = o.report.checks.iter().map(|c| c.samples).sum();
    println!(
        "criterion {} {status}: {} ({} checks, {samples} samples, {:.2}s{budget})",
        o.criterion.number,
        o.criterion.title,
        o.report.checks.len(),
        o.seconds
    );
    for c in &o.report.checks {
        let worst = c.worst.map_or(String::new(), |w| {
            format!(", worst {w:e} vs {:e}", c.bound.unwrap())
        });
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!(
            "    {mark} {} {}/{} violations{worst}",
            c.name, c.violations, c.samples
        );
        if let (Some(seed), Some(why)) = (c.failing_seed, &c.failure) {
            println!("         first failure at seed {seed}: {why}");
        }
    }
    if !o.within_budget() {
        println!("    FAIL wall time {:.2}s over budget", o.seconds);
    }
}

fn main() -> ExitCode {
    let first: Vec<Outcome> = CRITERIA
        .iter()
        .map(|c| run(c.number, MASTER_SEED))
        .collect();
    for o in &first {
        print_outcome(o);
    }

    let differing: Vec<usize> = first
        .iter()
        .filter(|o| run(o.criterion.number, MASTER_SEED).report.to_json() != o.report.to_json())
        .map(|o| o.criterion.number)
        .collect();
    let deterministic = differing.is_empty();
    println!(
        "criterion 9 {}: reports of criteria 1-8 are byte-identical on a second run (seed {MASTER_SEED}){}",
        if deterministic { "PASS" } else { "FAIL" },
        if deterministic { String::new() } else { format!("; differing: {differing:?}") }
    );

    let failed: Vec<usize> = first
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.criterion.number)
        .chain((!deterministic).then_some(9))
        .collect();
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
