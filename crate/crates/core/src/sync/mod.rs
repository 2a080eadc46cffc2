//! SE(3) synchronization from pairwise ratio measurements.
//!
//! Two spectral solvers share one problem type: the dual-quaternion method
//! (power iteration on an `n×n` Hermitian dual-quaternion matrix, then
//! entrywise projection onto the unit dual quaternions) and the
//! `4n×4n` homogeneous-matrix baseline with its block rounding.
//! Both recover the poses up to a global right factor.

mod dq;
mod mat;
mod problem;

use std::fmt;
use std::str::FromStr;

pub use dq::{build_dq_matrix, round_dq, solve_dq_spectral};
pub use mat::{build_mat_matrix, degree_normalized_mat_matrix, solve_mat_spectral};
pub use problem::{Edge, MeasurementProblem};

use crate::error::{Error, Result};
use crate::se3::Se3Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Dq,
    Mat,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Dq, Method::Mat];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Dq => "dq",
            Method::Mat => "mat",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dq" => Ok(Method::Dq),
            "mat" => Ok(Method::Mat),
            _ => Err(Error::InvalidConfig(format!("unknown method {s:?} (expected dq or mat)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Residual tolerance of the power iteration.
    pub tol: f64,
    /// Power-iteration cap; `None` means `10·n + 1000`.
    pub max_iters: Option<usize>,
    /// Seed of the random power-iteration start.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iters: None, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Power iterations performed; 0 for the dense eigen-solver.
    pub iterations: usize,
    /// Eigen-residual of the returned eigenvector(s).
    pub residual: f64,
    pub converged: bool,
    /// Wall-clock seconds of the solve.
    pub runtime_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyncEstimate {
    pub elements: Vec<Se3Element<f64>>,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

pub fn solve(problem: &MeasurementProblem, method: Method, opts: &SolverOptions) -> Result<SyncEstimate> {
    match method {
        Method::Dq => solve_dq_spectral(problem, opts),
        Method::Mat => solve_mat_spectral(problem, opts),
    }
}
