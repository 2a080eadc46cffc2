//! Per-repeat results and per-sweep-point summary tables.
//!
//! Floats use Rust's shortest round-trip formatting, which never depends
//! on the locale; see [`num`]. Missing values are written as `nan`.

use std::io::Write;

use dqsync::bench::{ExperimentRow, SummaryRow};

pub const RESULTS_HEADER: [&str; 18] = [
    "method",
    "n",
    "p",
    "q",
    "sigma_r_deg",
    "sigma_t",
    "repeat",
    "seed",
    "rot_err_mean",
    "rot_err_min",
    "rot_err_max",
    "trans_err_mean",
    "trans_err_min",
    "trans_err_max",
    "iterations",
    "residual",
    "runtime_s",
    "status",
];

pub const SUMMARY_HEADER: [&str; 16] = [
    "method",
    "n",
    "p",
    "q",
    "sigma_r_deg",
    "sigma_t",
    "repeats",
    "ok",
    "rot_err_mean",
    "rot_err_min",
    "rot_err_max",
    "trans_err_mean",
    "trans_err_min",
    "trans_err_max",
    "iterations",
    "residual",
];

/// Shortest round-trip form; scientific below `1e-4` in magnitude.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

pub fn write_results<W: Write>(out: W, rows: &[ExperimentRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        let e = r.report.as_ref();
        let pick = |f: fn(&dqsync::bench::ErrorReport) -> f64| e.map_or(f64::NAN, f);
        let ok = e.is_some();
        w.write_record([
            r.method.as_str().to_string(),
            r.n.to_string(),
            num(r.noise.p),
            num(r.noise.q),
            num(r.noise.sigma_r_deg),
            num(r.noise.sigma_t),
            r.repeat.to_string(),
            r.seed.to_string(),
            num(pick(|e| e.rot_mean)),
            num(pick(|e| e.rot_min)),
            num(pick(|e| e.rot_max)),
            num(pick(|e| e.trans_mean)),
            num(pick(|e| e.trans_min)),
            num(pick(|e| e.trans_max)),
            r.diagnostics.iterations.to_string(),
            num(if ok { r.diagnostics.residual } else { f64::NAN }),
            num(r.diagnostics.runtime_s),
            r.status.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for s in rows {
        w.write_record([
            s.method.as_str().to_string(),
            s.n.to_string(),
            num(s.noise.p),
            num(s.noise.q),
            num(s.noise.sigma_r_deg),
            num(s.noise.sigma_t),
            s.repeats.to_string(),
            s.ok.to_string(),
            num(s.rot_mean),
            num(s.rot_min),
            num(s.rot_max),
            num(s.trans_mean),
            num(s.trans_min),
            num(s.trans_max),
            num(s.iterations),
            num(s.residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}
