use rand::Rng;
use rayon::prelude::*;

use super::align::align;
use super::metrics::{evaluate, ErrorReport};
use super::noise::{make_problem, sample_ground_truth, NoiseSpec};
use super::rng::{child_seed, stream, Purpose};
use crate::error::{Error, Result};
use crate::sync::{solve, Diagnostics, Method, SolverOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub repeats: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    /// Sweep points in output order; each is a complete noise model.
    pub points: Vec<NoiseSpec>,
    /// Tolerance and iteration cap; the start seed is derived per repeat.
    pub solver: SolverOptions,
    /// Worker threads; `None` lets the pool decide.
    pub threads: Option<usize>,
    /// Keep measured solve times. Off by default so outputs are reproducible.
    pub record_runtime: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 10,
            repeats: 1,
            seed: 0,
            methods: Method::ALL.to_vec(),
            points: vec![NoiseSpec::default()],
            solver: SolverOptions::default(),
            threads: None,
            record_runtime: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("n = {} must be at least 2", self.n)));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidConfig("repeats must be at least 1".into()));
        }
        if self.methods.is_empty() || self.points.is_empty() {
            return Err(Error::InvalidConfig("need at least one method and one sweep point".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("thread count must be positive".into()));
        }
        self.points.iter().try_for_each(NoiseSpec::validate)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Ok,
    /// Errors are reported, but the power iteration hit its cap.
    NoConvergence,
    Failed(Error),
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::NoConvergence => "no_convergence",
            RowStatus::Failed(e) => match e {
                Error::DisconnectedGraph => "disconnected",
                Error::DegenerateSpectrum { .. } => "degenerate_spectrum",
                Error::RoundingDegenerate { .. } => "rounding_degenerate",
                Error::DegenerateAlignment => "degenerate_alignment",
                Error::ZeroIterate => "zero_iterate",
                Error::EigenSolver(_) => "eigen_solver_failed",
                _ => "error",
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub sweep: usize,
    pub repeat: usize,
    pub method: Method,
    pub noise: NoiseSpec,
    pub n: usize,
    /// Identifier of the `(seed, sweep, repeat)` cell.
    pub seed: u64,
    pub report: Option<ErrorReport>,
    pub diagnostics: Diagnostics,
    pub status: RowStatus,
}

/// Runs every `(sweep point, repeat)` cell with every method.
///
/// Cells are independent and may run in parallel; rows come back sorted by
/// `(sweep, repeat, method)` and do not depend on the thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let mut methods = cfg.methods.clone();
    methods.sort();
    methods.dedup();
    let cells: Vec<(usize, usize)> =
        (0..cfg.points.len()).flat_map(|s| (0..cfg.repeats).map(move |r| (s, r))).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let rows: Vec<Vec<ExperimentRow>> =
        pool.install(|| cells.par_iter().map(|&(s, r)| run_cell(cfg, &methods, s, r)).collect());
    Ok(rows.into_iter().flatten().collect())
}

fn run_cell(cfg: &ExperimentConfig, methods: &[Method], sweep: usize, repeat: usize) -> Vec<ExperimentRow> {
    let noise = cfg.points[sweep];
    let (s, r) = (sweep as u64, repeat as u64);
    let truth = sample_ground_truth(cfg.n, &mut stream(cfg.seed, s, r, Purpose::Truth));
    let problem = make_problem(&truth, &noise, &mut stream(cfg.seed, s, r, Purpose::Measurements));
    let opts = SolverOptions { seed: stream(cfg.seed, s, r, Purpose::SolverInit).random(), ..cfg.solver };

    methods
        .iter()
        .map(|&method| {
            let outcome = problem.as_ref().map_err(Clone::clone).and_then(|p| {
                let est = solve(p, method, &opts)?;
                let (_, aligned) = align(&truth, &est.elements)?;
                Ok((evaluate(&truth, &aligned)?, est.diagnostics))
            });
            let (report, mut diagnostics, status) = match outcome {
                Ok((rep, d)) => {
                    let st = if d.converged { RowStatus::Ok } else { RowStatus::NoConvergence };
                    (Some(rep), d, st)
                }
                Err(e) => (None, Diagnostics::default(), RowStatus::Failed(e)),
            };
            if !cfg.record_runtime {
                diagnostics.runtime_s = 0.0;
            }
            ExperimentRow {
                sweep,
                repeat,
                method,
                noise,
                n: cfg.n,
                seed: child_seed(cfg.seed, s, r),
                report,
                diagnostics,
                status,
            }
        })
        .collect()
}

/// Means over the successful repeats of one `(sweep point, method)` pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub sweep: usize,
    pub method: Method,
    pub noise: NoiseSpec,
    pub n: usize,
    pub repeats: usize,
    /// Repeats with status `ok`; the means below are over these.
    pub ok: usize,
    pub rot_mean: f64,
    pub rot_min: f64,
    pub rot_max: f64,
    pub trans_mean: f64,
    pub trans_min: f64,
    pub trans_max: f64,
    pub iterations: f64,
    pub residual: f64,
}

/// Groups rows by `(sweep, method)`. Means are NaN when no repeat succeeded.
pub fn summarize(rows: &[ExperimentRow]) -> Vec<SummaryRow> {
    let mut keys: Vec<(usize, Method)> = rows.iter().map(|r| (r.sweep, r.method)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(sweep, method)| {
            let group: Vec<&ExperimentRow> = rows.iter().filter(|r| r.sweep == sweep && r.method == method).collect();
            let ok: Vec<&ExperimentRow> = group.iter().copied().filter(|r| r.status == RowStatus::Ok).collect();
            let mean = |f: &dyn Fn(&ExperimentRow) -> f64| {
                if ok.is_empty() {
                    f64::NAN
                } else {
                    ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64
                }
            };
            let rep = |r: &ExperimentRow| r.report.clone().expect("ok rows carry a report");
            SummaryRow {
                sweep,
                method,
                noise: group[0].noise,
                n: group[0].n,
                repeats: group.len(),
                ok: ok.len(),
                rot_mean: mean(&|r| rep(r).rot_mean),
                rot_min: mean(&|r| rep(r).rot_min),
                rot_max: mean(&|r| rep(r).rot_max),
                trans_mean: mean(&|r| rep(r).trans_mean),
                trans_min: mean(&|r| rep(r).trans_min),
                trans_max: mean(&|r| rep(r).trans_max),
                iterations: mean(&|r| r.diagnostics.iterations as f64),
                residual: mean(&|r| r.diagnostics.residual),
            }
        })
        .collect()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut k = 0;
    while k < idx.len() {
        let mut end = k + 1;
        while end < idx.len() && v[idx[end]] == v[idx[k]] {
            end += 1;
        }
        // ties share their average 1-based rank
        let avg = (k + end + 1) as f64 / 2.0;
        for &i in &idx[k..end] {
            out[i] = avg;
        }
        k = end;
    }
    out
}

/// Spearman rank correlation with average ranks for ties. NaN when either
/// side is constant or the lengths differ.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    if x.len() != y.len() || x.len() < 2 {
        return f64::NAN;
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let m = (x.len() as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - m) * (b - m);
        sxx += (a - m).powi(2);
        syy += (b - m).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spearman_values() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-15);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 1.0, 0.0]) + 1.0).abs() < 1e-15);
        // textbook example with a tie: ranks (1, 2.5, 2.5, 4) vs (1, 2, 3, 4)
        let r = spearman(&[1.0, 2.0, 2.0, 5.0], &[1.0, 2.0, 3.0, 4.0]);
        assert!((r - 4.5 / (4.5f64 * 5.0).sqrt()).abs() < 1e-12, "{r}");
        assert!(spearman(&[1.0, 1.0], &[1.0, 2.0]).is_nan());
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        assert!(ExperimentConfig { n: 1, ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { repeats: 0, ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { methods: vec![], ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { threads: Some(0), ..Default::default() }.validate().is_err());
    }

    #[test]
    fn noiseless_rows_are_exact() {
        let cfg = ExperimentConfig { n: 8, repeats: 2, seed: 1, ..Default::default() };
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert_eq!(r.status, RowStatus::Ok, "{r:?}");
            let rep = r.report.as_ref().unwrap();
            assert!(rep.rot_max < 1e-6 && rep.trans_max < 1e-6, "{rep:?}");
        }
        assert_eq!(rows.iter().map(|r| (r.repeat, r.method)).collect::<Vec<_>>(), vec![
            (0, Method::Dq),
            (0, Method::Mat),
            (1, Method::Dq),
            (1, Method::Mat)
        ]);
        let summary = summarize(&rows);
        assert_eq!(summary.len(), 2);
        assert_eq!(summary[0].ok, 2);
    }

    #[test]
    fn disconnected_repeats_are_recorded() {
        let cfg = ExperimentConfig {
            n: 6,
            points: vec![NoiseSpec { p: 0.0, ..Default::default() }],
            methods: vec![Method::Dq],
            ..Default::default()
        };
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows[0].status.as_str(), "disconnected");
        assert!(rows[0].report.is_none());
        assert!(summarize(&rows)[0].rot_mean.is_nan());
    }
}
