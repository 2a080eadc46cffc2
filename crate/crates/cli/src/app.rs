use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dqsync::bench::{
    align, evaluate, make_problem, run_experiment, sample_ground_truth, summarize, Corruption, ExperimentConfig,
    NoiseSpec,
};
use dqsync::bench::rng::{stream, Purpose};
use dqsync::sync::solve;
use dqsync::{Error, Method, SolverOptions};

use crate::format::{parse_problem, print_estimate, print_problem};
use crate::output::{num, write_results, write_summary};
use crate::sweep::{Key, Sweep};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum Exit {
    Success = 0,
    /// Bad flags, unreadable or malformed input, I/O failure.
    Usage = 1,
    /// Disconnected graph or a degenerate spectrum, rounding or alignment.
    Infeasible = 2,
    NoConvergence = 3,
}

#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self { exit: Exit::Usage, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::DisconnectedGraph
            | Error::DegenerateSpectrum { .. }
            | Error::RoundingDegenerate { .. }
            | Error::DegenerateAlignment
            | Error::ZeroIterate
            | Error::EigenSolver(_) => Exit::Infeasible,
            _ => Exit::Usage,
        };
        Self { exit, msg: e.to_string() }
    }
}

type Outcome = Result<Exit, Failure>;

#[derive(Parser, Debug)]
#[command(name = "dqsync", version, about = "Spectral SE(3) synchronization with dual quaternions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sample ground truth and measurements into a problem file.
    Generate(GenerateArgs),
    /// Estimate the poses of a problem file.
    Solve(SolveArgs),
    /// Align an estimate to the ground truth of a problem and report errors.
    Evaluate(EvaluateArgs),
    /// Run a seeded sweep and write per-repeat and summary CSVs.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct NoiseArgs {
    /// Treat corrupted labels as drawn with the perturbation widths instead
    /// of the ground-truth law.
    #[arg(long)]
    corruption_sigma: bool,
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Power-iteration residual tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Power-iteration cap; defaults to 10n + 1000.
    #[arg(long)]
    max_iters: Option<usize>,
}

impl SolverArgs {
    fn options(&self, seed: u64) -> Result<SolverOptions, Failure> {
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Failure::usage(format!("--tol {} must be finite and non-negative", self.tol)));
        }
        if self.max_iters == Some(0) {
            return Err(Failure::usage("--max-iters must be positive"));
        }
        Ok(SolverOptions { tol: self.tol, max_iters: self.max_iters, seed })
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    /// Edge-presence probability.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Probability that a present edge is not corrupted.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Perturbation angle std, degrees.
    #[arg(long, default_value_t = 0.0)]
    sigma_r: f64,
    /// Perturbation translation std.
    #[arg(long, default_value_t = 0.0)]
    sigma_t: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// dq or mat.
    #[arg(long, default_value = "dq")]
    method: Method,
    #[arg(long)]
    out: PathBuf,
    /// Seed of the random power-iteration start.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Problem file with G lines.
    #[arg(long)]
    problem: PathBuf,
    /// Estimate file written by `solve`.
    #[arg(long)]
    estimate: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// dq, mat or both.
    #[arg(long, default_value = "both")]
    method: String,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    sigma_r: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    sigma_t: Option<Vec<f64>>,
    /// key=start:stop:step over p, q, sigma-r or sigma-t; repeatable, zipped.
    #[arg(long)]
    sweep: Vec<Sweep>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Worker threads; DQSYNC_THREADS caps this.
    #[arg(long)]
    threads: Option<usize>,
    /// Record solve times; outputs are then no longer reproducible.
    #[arg(long)]
    timings: bool,
    /// Per-repeat CSV; the summary goes to `<stem>-summary.csv` beside it.
    #[arg(long)]
    out: PathBuf,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<dqsync::MeasurementProblem, Failure> {
    parse_problem(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn corruption(a: &NoiseArgs) -> Corruption {
    if a.corruption_sigma {
        Corruption::Sigma
    } else {
        Corruption::Prior
    }
}

fn cmd_generate(a: &GenerateArgs) -> Outcome {
    if a.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let noise = NoiseSpec { p: a.p, q: a.q, sigma_r_deg: a.sigma_r, sigma_t: a.sigma_t, corruption: corruption(&a.noise) };
    noise.validate()?;
    // same streams as sweep point 0, repeat 0 of `experiment`
    let truth = sample_ground_truth(a.n, &mut stream(a.seed, 0, 0, Purpose::Truth));
    let problem = make_problem(&truth, &noise, &mut stream(a.seed, 0, 0, Purpose::Measurements))?;
    write(&a.out, print_problem(&problem).as_bytes())?;
    Ok(Exit::Success)
}

/// Writes the estimate even without convergence, but reports exit 3.
fn cmd_solve(a: &SolveArgs) -> Outcome {
    let problem = load(&a.input)?;
    let est = solve(&problem, a.method, &a.solver.options(a.seed)?)?;
    write(&a.out, print_estimate(&est.elements).as_bytes())?;
    if est.diagnostics.converged {
        Ok(Exit::Success)
    } else {
        Err(Failure {
            exit: Exit::NoConvergence,
            msg: format!(
                "power iteration stopped after {} iterations at residual {:e}",
                est.diagnostics.iterations, est.diagnostics.residual
            ),
        })
    }
}

fn cmd_evaluate(a: &EvaluateArgs) -> Outcome {
    let problem = load(&a.problem)?;
    let truth = problem
        .ground_truth()
        .ok_or_else(|| Failure::usage(format!("{}: no G lines", a.problem.display())))?;
    let est = load(&a.estimate)?;
    let est = est
        .ground_truth()
        .ok_or_else(|| Failure::usage(format!("{}: no G lines", a.estimate.display())))?;
    if est.len() != truth.len() {
        return Err(Failure::usage(format!("estimate has {} poses, problem has {}", est.len(), truth.len())));
    }
    let (_, aligned) = align(truth, est)?;
    let r = evaluate(truth, &aligned)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let rec = |w: &mut csv::Writer<Vec<u8>>, v: [String; 6]| w.write_record(v).expect("in-memory CSV");
    rec(&mut w, ["rot_err_mean", "rot_err_min", "rot_err_max", "trans_err_mean", "trans_err_min", "trans_err_max"].map(String::from));
    rec(&mut w, [r.rot_mean, r.rot_min, r.rot_max, r.trans_mean, r.trans_min, r.trans_max].map(num));
    let bytes = w.into_inner().expect("in-memory CSV");
    match &a.out {
        Some(p) => write(p, &bytes)?,
        None => print!("{}", String::from_utf8(bytes).expect("ASCII")),
    }
    Ok(Exit::Success)
}

fn methods(s: &str) -> Result<Vec<Method>, Failure> {
    if s.eq_ignore_ascii_case("both") {
        return Ok(Method::ALL.to_vec());
    }
    Ok(vec![s.parse::<Method>().map_err(|_| Failure::usage(format!("--method {s}: expected dq, mat or both")))?])
}

/// Cartesian product of the comma lists in `p, q, sigma-r, sigma-t` order,
/// with the zipped `--sweep` index varying fastest.
fn sweep_points(a: &ExperimentArgs) -> Result<Vec<NoiseSpec>, Failure> {
    let lists = [&a.p, &a.q, &a.sigma_r, &a.sigma_t];
    let mut zipped: Vec<&Sweep> = Vec::new();
    for s in &a.sweep {
        if zipped.iter().any(|z| z.key == s.key) {
            return Err(Failure::usage(format!("--sweep {} given twice", s.key.as_str())));
        }
        let k = Key::ALL.iter().position(|&k| k == s.key).expect("known key");
        if lists[k].is_some() {
            return Err(Failure::usage(format!("{} is both swept and listed", s.key.as_str())));
        }
        zipped.push(s);
    }
    let len = zipped.first().map_or(1, |s| s.values.len());
    if zipped.iter().any(|s| s.values.len() != len) {
        return Err(Failure::usage("zipped --sweep ranges must have equal lengths"));
    }
    let defaults = [1.0, 1.0, 0.0, 0.0];
    let axes: Vec<Vec<f64>> =
        lists.iter().zip(defaults).map(|(l, d)| (*l).clone().unwrap_or_else(|| vec![d])).collect();
    if axes.iter().any(Vec::is_empty) {
        return Err(Failure::usage("empty value list"));
    }
    let corruption = corruption(&a.noise);
    let mut points = Vec::new();
    for &p in &axes[0] {
        for &q in &axes[1] {
            for &sr in &axes[2] {
                for &st in &axes[3] {
                    for k in 0..len {
                        let mut v = [p, q, sr, st];
                        for s in &zipped {
                            v[s.key as usize] = s.values[k];
                        }
                        points.push(NoiseSpec { p: v[0], q: v[1], sigma_r_deg: v[2], sigma_t: v[3], corruption });
                    }
                }
            }
        }
    }
    Ok(points)
}

fn env_threads() -> Result<Option<usize>, Failure> {
    match std::env::var("DQSYNC_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::usage(format!("DQSYNC_THREADS: {e}"))),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(Failure::usage(format!("DQSYNC_THREADS={s}: expected a positive integer"))),
        },
    }
}

pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map_or_else(|| "csv".to_string(), |e| e.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}-summary.{ext}"))
}

fn cmd_experiment(a: &ExperimentArgs) -> Outcome {
    if a.threads == Some(0) {
        return Err(Failure::usage("--threads must be positive"));
    }
    let threads = match (a.threads, env_threads()?) {
        (Some(t), Some(cap)) => Some(t.min(cap)),
        (t, cap) => t.or(cap),
    };
    let cfg = ExperimentConfig {
        n: a.n,
        repeats: a.repeats,
        seed: a.seed,
        methods: methods(&a.method)?,
        points: sweep_points(a)?,
        solver: a.solver.options(0)?,
        threads,
        record_runtime: a.timings,
    };
    let rows = run_experiment(&cfg)?;
    let mut buf = Vec::new();
    write_results(&mut buf, &rows).map_err(|e| Failure::usage(e.to_string()))?;
    write(&a.out, &buf)?;
    let mut buf = Vec::new();
    write_summary(&mut buf, &summarize(&rows)).map_err(|e| Failure::usage(e.to_string()))?;
    write(&summary_path(&a.out), &buf)?;
    Ok(Exit::Success)
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status. Messages go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Success };
            let _ = e.print();
            return code as i32;
        }
    };
    let outcome = match &cli.cmd {
        Cmd::Generate(a) => cmd_generate(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Evaluate(a) => cmd_evaluate(a),
        Cmd::Experiment(a) => cmd_experiment(a),
    };
    match outcome {
        Ok(code) => code as i32,
        Err(f) => {
            eprintln!("dqsync: {}", f.msg);
            f.exit as i32
        }
    }
}
