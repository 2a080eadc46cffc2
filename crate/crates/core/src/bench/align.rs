use faer::{Mat, Side};

use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::se3::{rotmat_from_quat, so3_apply, vec3, Se3Element};

/// `Σ‖R̂_j·R − R_j‖²_F + Σ‖R̂_j·t + t̂_j − t_j‖²` for `g = (R, t)`.
pub fn alignment_objective(truth: &[Se3Element<f64>], est: &[Se3Element<f64>], g: &Se3Element<f64>) -> f64 {
    let r = rotmat_from_quat(&g.rot());
    truth
        .iter()
        .zip(est)
        .map(|(t, e)| {
            let rh = e.rotation_matrix();
            let diff = vec3::mat_mul(&rh, &r);
            let rj = t.rotation_matrix();
            let rot: f64 = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| (diff[a][b] - rj[a][b]).powi(2)).sum();
            let tr = vec3::sub(vec3::add(vec3::mat_vec(&rh, g.trans()), e.trans()), t.trans());
            rot + vec3::dot(tr, tr)
        })
        .sum()
}

/// Global right factor `g` minimizing [`alignment_objective`], and
/// `est_j ∘ g`.
///
/// The rotation part of the objective is `Σ 8(1 − ⟨q, s_j⟩²)` with
/// `s_j = conj(q̂_j)·q_j`, so `q` is the dominant eigenvector of
/// `Σ s_j s_jᵀ`. When the `s_j` share a hemisphere this is the direction of
/// their sum. The translation is `(1/n)·Σ R̂_jᵀ(t_j − t̂_j)`.
pub fn align(truth: &[Se3Element<f64>], est: &[Se3Element<f64>]) -> Result<(Se3Element<f64>, Vec<Se3Element<f64>>)> {
    if truth.len() != est.len() {
        return Err(Error::DimensionMismatch { expected: truth.len(), got: est.len() });
    }
    let n = truth.len();
    if n == 0 {
        return Err(Error::InvalidProblem("nothing to align".into()));
    }
    let s: Vec<[f64; 4]> = truth.iter().zip(est).map(|(t, e)| (e.rot().conj() * t.rot()).to_array()).collect();
    let m = Mat::<f64>::from_fn(4, 4, |a, b| s.iter().map(|v| v[a] * v[b]).sum());
    let eig = m.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenSolver("4x4 symmetric eigendecomposition failed"))?;
    let vals = eig.S().column_vector();
    if vals[3] - vals[2] <= f64::TAU_ZERO * n as f64 {
        return Err(Error::DegenerateAlignment);
    }
    let u = eig.U();
    let q = Quaternion::new(u[(0, 3)], u[(1, 3)], u[(2, 3)], u[(3, 3)]).normalize()?.canonical();

    let mut t = [0.0; 3];
    for (tr, e) in truth.iter().zip(est) {
        let d = so3_apply(&e.rot().conj(), vec3::sub(tr.trans(), e.trans()))?;
        t = vec3::add(t, d);
    }
    let g = Se3Element::new(q, vec3::scale(t, 1.0 / n as f64))?;
    let aligned = est.iter().map(|e| e.compose(&g)).collect();
    Ok((g, aligned))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::noise::{sample_ground_truth, sample_perturbation, sample_pose};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn identity_when_equal() {
        let gt = sample_ground_truth(7, &mut ChaCha20Rng::seed_from_u64(1));
        let (g, aligned) = align(&gt, &gt).unwrap();
        assert!(g.approx_eq(&Se3Element::identity(), 1e-12));
        for (a, b) in aligned.iter().zip(&gt) {
            assert!(a.approx_eq(b, 1e-12));
        }
    }

    #[test]
    fn recovers_gauge() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..20 {
            let gt = sample_ground_truth(9, &mut rng);
            let h = sample_pose(&mut rng);
            let est: Vec<_> = gt.iter().map(|g| g.compose(&h)).collect();
            let (g, aligned) = align(&gt, &est).unwrap();
            assert!(g.approx_eq(&h.inverse(), 1e-9));
            for (a, b) in aligned.iter().zip(&gt) {
                assert!(a.approx_eq(b, 1e-9));
            }
        }
    }

    #[test]
    fn beats_random_aligners() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..5 {
            let gt = sample_ground_truth(8, &mut rng);
            let h = sample_pose(&mut rng);
            let est: Vec<_> =
                gt.iter().map(|g| g.compose(&h).compose(&sample_perturbation(30.0, 0.5, &mut rng))).collect();
            let (g, _) = align(&gt, &est).unwrap();
            let best = alignment_objective(&gt, &est, &g);
            for _ in 0..200 {
                assert!(best <= alignment_objective(&gt, &est, &sample_pose(&mut rng)) + 1e-9);
            }
        }
    }

    #[test]
    fn mismatched_lengths() {
        let gt = vec![Se3Element::identity(); 2];
        assert!(matches!(align(&gt, &gt[..1]), Err(Error::DimensionMismatch { .. })));
    }
}
