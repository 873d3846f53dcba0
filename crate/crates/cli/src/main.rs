//! `wignerkit`: generate, classify and certify rank-one preserving maps.
//!
//! Exit codes: 0 on success (including both theorem types from `classify`),
//! 1 on usage, I/O or input errors, 2 when `classify` finds the rank-one
//! hypothesis violated, 3 when a `verify` check fails.

use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use wignerkit::classifier::{classify, generate, ClassifyOptions, GenerateKind, DEFAULT_TOL};
use wignerkit::geometry::{
    projection_from_param, small_circle, sphere_point, LineParam, SmallCircle, SpherePoint,
};
use wignerkit::io::{
    format_operator, parse_projection, read_operator_file, truth_json, VerdictDoc,
};
use wignerkit::verify::{run_suite, Suite, VerifyConfig};
use wignerkit::{Projection, RngState, SubspaceBasis};

const EXIT_ERROR: u8 = 1;
const EXIT_NOT_PRESERVING: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "wignerkit",
    version,
    about = "Classify linear maps that preserve rank-one projections"
)]
struct Cli {
    /// Master seed; every command with the same seed is byte-reproducible.
    #[arg(long, global = true, env = "WIGNERKIT_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random operator file and a `<out>.truth.json` sidecar.
    Generate(GenerateArgs),
    /// Classify the operator in a herm-orthonormal-v1 file.
    Classify(ClassifyArgs),
    /// Run a certification suite and print its report.
    Verify(VerifyArgs),
    /// Bloch-sphere coordinates of projections in C².
    #[command(subcommand)]
    Bloch(BlochCommand),
}

#[derive(Args)]
struct GenerateArgs {
    /// isometry, anti-isometry, constant or perturbed.
    #[arg(long = "type", value_parser = parse_kind)]
    kind: GenerateKind,
    #[arg(long)]
    dim: usize,
    /// Perturbation size for `--type perturbed`.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Random rank-one trials (at least dim²; default max(dim², 32)).
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// lemmas, theorem, section5 or all.
    #[arg(long)]
    suite: Suite,
    /// A dimension, a list `a,b,c` or an inclusive range `a..b`.
    #[arg(long, default_value = "2..4", value_parser = parse_dims)]
    dim: Dims,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BlochCommand {
    /// Sphere point of one projection, given by `--t/--alpha` or `--input`.
    Coords(CoordsArgs),
    /// Small circle generated by two projections, sampled at `--samples` points.
    Circle(CircleArgs),
}

#[derive(Args)]
struct CoordsArgs {
    #[arg(long, requires = "alpha", conflicts_with = "input")]
    t: Option<f64>,
    #[arg(long, requires = "t")]
    alpha: Option<f64>,
    /// Projection file `{"dim": 2, "matrix": [[re, im], ...]}`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct CircleArgs {
    /// First generator as `t,alpha`.
    #[arg(long, value_parser = parse_param, conflicts_with = "input")]
    p: Option<LineParam>,
    /// Second generator as `t,alpha`.
    #[arg(long, value_parser = parse_param, requires = "p")]
    q: Option<LineParam>,
    /// Two projection files, in order.
    #[arg(long, num_args = 2)]
    input: Vec<PathBuf>,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Debug)]
struct Dims(Vec<usize>);

fn parse_kind(s: &str) -> Result<GenerateKind, String> {
    s.parse()
}

fn parse_dims(s: &str) -> Result<Dims, String> {
    let number = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("'{x}' is not a dimension"))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (number(a)?, number(b)?);
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        return Ok(Dims((a..=b).collect()));
    }
    Ok(Dims(s.split(',').map(number).collect::<Result<_, _>>()?))
}

fn parse_param(s: &str) -> Result<LineParam, String> {
    let (t, alpha) = s.split_once(',').ok_or("expected t,alpha")?;
    let t = t.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let alpha = alpha.trim().parse::<f64>().map_err(|e| e.to_string())?;
    LineParam::new(t, alpha).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let seed = cli.seed;
    match cli.command {
        Command::Generate(args) => cmd_generate(args, seed),
        Command::Classify(args) => cmd_classify(args, seed),
        Command::Verify(args) => cmd_verify(args, seed),
        Command::Bloch(BlochCommand::Coords(args)) => cmd_coords(args),
        Command::Bloch(BlochCommand::Circle(args)) => cmd_circle(args),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".truth.json");
    PathBuf::from(name)
}

fn cmd_generate(args: GenerateArgs, seed: u64) -> Result<u8> {
    if args.dim < 2 {
        bail!("--dim must be at least 2, got {}", args.dim);
    }
    let mut rng = RngState::new(seed);
    let g = generate(args.kind, args.dim, &mut rng, args.eps)?;
    write_file(&args.out, &format_operator(&g.operator))?;
    let truth = truth_json(&g.truth, args.dim, seed);
    write_file(&sidecar_path(&args.out), &format!("{truth}\n"))?;
    Ok(0)
}

fn cmd_classify(args: ClassifyArgs, seed: u64) -> Result<u8> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        bail!("--tol must be positive, got {}", args.tol);
    }
    let op = read_operator_file(&args.input)?;
    let mut rng = RngState::new(seed);
    let options = ClassifyOptions {
        tol: args.tol,
        trials: args.trials,
    };
    let verdict = classify(&op, &options, &mut rng)?;
    writeln!(
        std::io::stdout(),
        "{}",
        VerdictDoc::new(&verdict, op.dim(), seed).to_json()
    )?;
    Ok(if verdict.is_theorem_type() {
        0
    } else {
        EXIT_NOT_PRESERVING
    })
}

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Lemmas => "lemmas",
        Suite::Theorem => "theorem",
        Suite::Section5 => "section5",
        Suite::All => "all",
    }
}

fn cmd_verify(args: VerifyArgs, seed: u64) -> Result<u8> {
    let dims = args.dim.0;
    let dim_text = dims
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let command = format!(
        "verify --suite {} --dim {dim_text} --trials {} --seed {seed}",
        suite_name(args.suite),
        args.trials
    );
    let config = VerifyConfig {
        dims,
        trials: args.trials,
        seed,
    };
    let started = Instant::now();
    let report = run_suite(args.suite, &config, &command)?;
    let text = report.to_json();
    writeln!(std::io::stdout(), "{text}")?;
    if let Some(out) = &args.out {
        write_file(out, &format!("{text}\n"))?;
    }
    eprintln!("completed in {:.2}s", started.elapsed().as_secs_f64());
    if report.passed {
        return Ok(0);
    }
    for check in report.checks.iter().filter(|c| !c.passed) {
        eprintln!(
            "FAILED {} (dim {:?}): seed {}: {}",
            check.name,
            check.dim,
            check.failing_seed.unwrap_or(seed),
            check.failure.as_deref().unwrap_or("")
        );
    }
    Ok(EXIT_CHECK_FAILED)
}

fn read_projection(path: &Path) -> Result<Projection> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_projection(&text, 1e-8).with_context(|| path.display().to_string())
}

fn from_param(p: &LineParam) -> Projection {
    projection_from_param(p, &SubspaceBasis::standard(2, &[0, 1])).expect("standard frame")
}

fn cmd_coords(args: CoordsArgs) -> Result<u8> {
    let p = match (&args.input, args.t, args.alpha) {
        (Some(path), _, _) => read_projection(path)?,
        (None, Some(t), Some(alpha)) => from_param(&LineParam::new(t, alpha)?),
        _ => bail!("give either --t and --alpha or --input"),
    };
    let mut x = sphere_point(&p)?;
    // Print 0 rather than -0.
    x.coords.iter_mut().for_each(|v| *v += 0.0);
    let mut out = std::io::stdout().lock();
    if args.csv {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x0", "x1", "x2", "x3"])?;
        w.write_record(x.coords.map(|v| v.to_string()))?;
        w.flush()?;
    } else {
        writeln!(out, "{}", point_json(&x))?;
    }
    Ok(0)
}

fn point_json(x: &SpherePoint) -> serde_json::Value {
    json!({"x0": x.coords[0], "x1": x.coords[1], "x2": x.coords[2], "x3": x.coords[3]})
}

fn cmd_circle(args: CircleArgs) -> Result<u8> {
    let (p, q) = match (&args.p, &args.q, args.input.as_slice()) {
        (_, _, [a, b]) => (read_projection(a)?, read_projection(b)?),
        (Some(p), Some(q), []) => (from_param(p), from_param(q)),
        _ => bail!("give either --p and --q or two --input files"),
    };
    if args.samples == 0 {
        bail!("--samples must be positive");
    }
    let circle = small_circle(&p, &q)?;
    let rows = circle_rows(&circle, args.samples)?;
    let mut out = std::io::stdout().lock();
    if args.csv {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "x1", "x2", "x3"])?;
        for r in &rows {
            w.write_record(r.map(|v| v.to_string()))?;
        }
        w.flush()?;
    } else {
        let samples: Vec<_> = rows
            .iter()
            .map(|r| json!({"theta": r[0], "x1": r[1], "x2": r[2], "x3": r[3]}))
            .collect();
        let doc = json!({
            "t": circle.frame.t(),
            "center": circle.center,
            "radius": circle.radius,
            "normal": circle.normal,
            "samples": samples,
        });
        writeln!(out, "{doc}")?;
    }
    Ok(0)
}

fn circle_rows(circle: &SmallCircle, m: usize) -> Result<Vec<[f64; 4]>> {
    circle
        .sample(m)?
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let x = sphere_point(z)?.vector();
            Ok([
                TAU * j as f64 / m as f64,
                x[0] + 0.0,
                x[1] + 0.0,
                x[2] + 0.0,
            ])
        })
        .collect()
}
