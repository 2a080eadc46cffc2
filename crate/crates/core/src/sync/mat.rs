use std::cmp::Ordering;
use std::time::Instant;

use faer::{c64, Mat, MatRef};

use super::{Diagnostics, Method, MeasurementProblem, SolverOptions, SyncEstimate};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::se3::{project_to_so3, quat_from_rotmat, vec3, Mat4Pose, Matrix3, Se3Element};

/// Relative separation required between the 4th and 5th eigenvalue.
const TAU_GAP: f64 = 1e-8;

/// `4n×4n` block matrix: identity diagonal blocks, `[R t; 0 1]` of the label
/// at block `(i, j)`, its matrix inverse at block `(j, i)`, zero elsewhere.
/// Not symmetric in general.
pub fn build_mat_matrix(p: &MeasurementProblem) -> Mat<f64> {
    let dim = 4 * p.n();
    let mut y = Mat::<f64>::zeros(dim, dim);
    for d in 0..dim {
        y[(d, d)] = 1.0;
    }
    for e in p.edges() {
        let m = Mat4Pose::from_se3(&e.pose());
        let inv = m.inverse();
        for r in 0..4 {
            for c in 0..4 {
                y[(4 * e.i + r, 4 * e.j + c)] = m.m[r][c];
                y[(4 * e.j + r, 4 * e.i + c)] = inv.m[r][c];
            }
        }
    }
    y
}

/// Relative width of an eigenvalue cluster.
const TAU_CLUSTER: f64 = 1e-6;

/// Real `dim×4` basis of the invariant subspace of the selected eigenvalues.
///
/// Isolated eigenvalues contribute their eigenvector, a conjugate pair
/// contributes `(Re v, Im v)`. Eigenvectors of a repeated eigenvalue are
/// unreliable, so a cluster of real eigenvalues contributes the null space
/// of `Y − λ̄I` from the SVD instead.
fn top_subspace(y: &Mat<f64>, vals: &[c64], vecs: MatRef<'_, c64>, top: &[usize], scale: f64) -> Result<Mat<f64>> {
    let dim = y.nrows();
    let mut v = Mat::<f64>::zeros(dim, top.len());
    let mut c = 0;
    while c < top.len() {
        let lead = vals[top[c]];
        let mut end = c + 1;
        while end < top.len() && (vals[top[end]] - lead).norm() <= TAU_CLUSTER * scale {
            end += 1;
        }
        let size = end - c;
        if size > 1 && lead.im.abs() <= TAU_CLUSTER * scale {
            let mean = top[c..end].iter().map(|&k| vals[k].re).sum::<f64>() / size as f64;
            let shifted = Mat::<f64>::from_fn(dim, dim, |r, k| y[(r, k)] - if r == k { mean } else { 0.0 });
            let svd = shifted.svd().map_err(|_| Error::EigenSolver("SVD did not converge"))?;
            let rv = svd.V();
            for (off, col) in (dim - size..dim).enumerate() {
                for r in 0..dim {
                    v[(r, c + off)] = rv[(r, col)];
                }
            }
        } else {
            for (off, &k) in top[c..end].iter().enumerate() {
                let second_of_pair = vals[k].im < -f64::TAU_ZERO * scale;
                for r in 0..dim {
                    let z = vecs[(r, k)];
                    v[(r, c + off)] = if second_of_pair { z.im } else { z.re };
                }
            }
        }
        c = end;
    }
    Ok(v)
}

/// Row block `i` of [`build_mat_matrix`] divided by `1 + deg(i)`.
///
/// Clean data give `D⁻¹Y·G = G` on any connected graph, so the stacked poses
/// stay an eigenspace and every homogeneous row of it is constant. For the
/// raw matrix that holds only on complete graphs.
pub fn degree_normalized_mat_matrix(p: &MeasurementProblem) -> Mat<f64> {
    let mut deg = vec![1.0f64; p.n()];
    for e in p.edges() {
        deg[e.i] += 1.0;
        deg[e.j] += 1.0;
    }
    let y = build_mat_matrix(p);
    Mat::from_fn(y.nrows(), y.ncols(), |r, c| y[(r, c)] / deg[r / 4])
}

/// Spectral baseline on the homogeneous-matrix embedding.
///
/// Runs on [`degree_normalized_mat_matrix`]. The top four eigenvectors span an estimate of the column space of the
/// stacked poses. They are orthonormalized, then mixed by `U = [u₁ u₂ u₃ u₄]`
/// so that every 4th row becomes `(0, 0, 0, 1)`; the `3×3` part of each block
/// is then rounded onto SO(3).
pub fn solve_mat_spectral(p: &MeasurementProblem, _opts: &SolverOptions) -> Result<SyncEstimate> {
    let start = Instant::now();
    p.require_connected()?;
    let n = p.n();
    let dim = 4 * n;
    let y = degree_normalized_mat_matrix(p);

    let eig = y.eigen().map_err(|_| Error::EigenSolver("eigendecomposition did not converge"))?;
    let vals: Vec<c64> = eig.S().column_vector().iter().copied().collect();
    let vecs = eig.U();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| vals[b].re.partial_cmp(&vals[a].re).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    let scale = vals[order[0]].re.abs().max(1.0);
    if dim > 4 {
        let gap = (vals[order[3]].re - vals[order[4]].re) / scale;
        if gap.is_nan() || gap <= TAU_GAP {
            return Err(Error::DegenerateSpectrum { gap });
        }
    }

    let v = top_subspace(&y, &vals, vecs, &order[..4], scale)?;
    let qr = v.qr();
    let rdiag: Vec<f64> = (0..4).map(|k| qr.thin_R()[(k, k)].abs()).collect();
    let rmax = rdiag.iter().cloned().fold(0.0, f64::max);
    if rdiag.iter().any(|&d| d <= 1e-10 * rmax) {
        return Err(Error::EigenSolver("top eigenvectors are numerically dependent"));
    }
    let q = qr.compute_thin_Q();
    let residual = {
        let yq = &y * &q;
        let r = &yq - &q * (q.transpose() * &yq);
        r.norm_l2()
    };

    let v4 = Mat::<f64>::from_fn(n, 4, |r, c| q[(4 * r + 3, c)]);
    let svd = v4.svd().map_err(|_| Error::EigenSolver("SVD did not converge"))?;
    let (lu, sv, rv) = (svd.U(), svd.S().column_vector(), svd.V());
    if sv[0] <= f64::TAU_ZERO {
        return Err(Error::EigenSolver("homogeneous rows of the eigenvectors vanish"));
    }
    // kernel basis: the three smallest right singular vectors. Least-squares
    // solution of V₄·u = 1 on their orthogonal complement:
    let coef = (0..n).map(|r| lu[(r, 0)]).sum::<f64>() / sv[0];
    let mut basis = Mat::<f64>::from_fn(4, 4, |r, c| if c < 3 { rv[(r, c + 1)] } else { coef * rv[(r, 0)] });

    let mut vp = &q * &basis;
    let block = |vp: &Mat<f64>, j: usize| -> Matrix3<f64> { std::array::from_fn(|r| std::array::from_fn(|c| vp[(4 * j + r, c)])) };
    let orientation: f64 = (0..n).map(|j| vec3::det(&block(&vp, j))).sum();
    if orientation < 0.0 {
        for r in 0..4 {
            basis[(r, 2)] = -basis[(r, 2)];
        }
        vp = &q * &basis;
    }

    let elements = (0..n)
        .map(|j| {
            let rot = project_to_so3(&block(&vp, j)).map_err(|_| Error::RoundingDegenerate { index: j })?;
            let t = [vp[(4 * j, 3)], vp[(4 * j + 1, 3)], vp[(4 * j + 2, 3)]];
            Se3Element::new(quat_from_rotmat(&rot), t)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SyncEstimate {
        elements,
        method: Method::Mat,
        diagnostics: Diagnostics {
            iterations: 0,
            residual,
            converged: true,
            runtime_s: start.elapsed().as_secs_f64(),
        },
    })
}
