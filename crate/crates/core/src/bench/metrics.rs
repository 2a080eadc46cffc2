use crate::error::{Error, Result};
use crate::se3::{rotation_distance, translation_distance, Se3Element};

/// Entrywise errors of an aligned estimate; radians and length units.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub rot_mean: f64,
    pub rot_min: f64,
    pub rot_max: f64,
    pub trans_mean: f64,
    pub trans_min: f64,
    pub trans_max: f64,
    pub rot_errors: Vec<f64>,
    pub trans_errors: Vec<f64>,
}

fn stats(v: &[f64]) -> (f64, f64, f64) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // the mean of equal values can round outside [min, max]
    (mean.clamp(min, max), min, max)
}

pub fn evaluate(truth: &[Se3Element<f64>], aligned: &[Se3Element<f64>]) -> Result<ErrorReport> {
    if truth.len() != aligned.len() {
        return Err(Error::DimensionMismatch { expected: truth.len(), got: aligned.len() });
    }
    if truth.is_empty() {
        return Err(Error::InvalidProblem("nothing to evaluate".into()));
    }
    let rot_errors = truth
        .iter()
        .zip(aligned)
        .map(|(t, a)| rotation_distance(&t.rot(), &a.rot()))
        .collect::<Result<Vec<_>>>()?;
    let trans_errors: Vec<f64> =
        truth.iter().zip(aligned).map(|(t, a)| translation_distance(t.trans(), a.trans())).collect();
    let (rot_mean, rot_min, rot_max) = stats(&rot_errors);
    let (trans_mean, trans_min, trans_max) = stats(&trans_errors);
    Ok(ErrorReport { rot_mean, rot_min, rot_max, trans_mean, trans_min, trans_max, rot_errors, trans_errors })
}
