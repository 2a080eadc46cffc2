use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::{Diagnostics, Method, MeasurementProblem, SolverOptions, SyncEstimate};
use crate::algebra::DualQuaternion;
use crate::dq_linalg::{power_iteration, DqMatrix, DqVector, PowerIterationOptions};
use crate::error::{Error, Result};
use crate::se3::{project_to_unit_dq, Se3Element};

/// `Y_ii = 1`, `Y_ij = x(label)`, `Y_ji = conj(Y_ij)`, zero elsewhere.
pub fn build_dq_matrix(p: &MeasurementProblem) -> DqMatrix<f64> {
    let mut y = DqMatrix::identity(p.n());
    for e in p.edges() {
        let x = e.dual_quaternion();
        y.set(e.i, e.j, x);
        y.set(e.j, e.i, x.conj());
    }
    y
}

/// Projects every entry onto the unit dual quaternions.
///
/// Entries with a vanishing real coordinate have no canonical projection
/// and are reported by index.
pub fn round_dq(v: &[DualQuaternion<f64>]) -> Result<Vec<DualQuaternion<f64>>> {
    v.iter()
        .enumerate()
        .map(|(index, x)| {
            if x.is_nilpotent() {
                return Err(Error::RoundingDegenerate { index });
            }
            project_to_unit_dq(x).map_err(|_| Error::RoundingDegenerate { index })
        })
        .collect()
}

pub fn solve_dq_spectral(p: &MeasurementProblem, opts: &SolverOptions) -> Result<SyncEstimate> {
    let start = Instant::now();
    p.require_connected()?;
    let y = build_dq_matrix(p);
    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    let v0 = DqVector::random_unit(p.n(), &mut rng);
    let pi = power_iteration(&y, &v0, &PowerIterationOptions { tol: opts.tol, max_iters: opts.max_iters })?;
    let elements = round_dq(pi.eigvec.entries())?
        .iter()
        .enumerate()
        .map(|(index, x)| Se3Element::from_dual_quaternion(x).map_err(|_| Error::RoundingDegenerate { index }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SyncEstimate {
        elements,
        method: Method::Dq,
        diagnostics: Diagnostics {
            iterations: pi.iterations,
            residual: pi.residual,
            converged: pi.converged,
            runtime_s: start.elapsed().as_secs_f64(),
        },
    })
}
