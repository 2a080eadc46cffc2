use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::algebra::DualQuaternion;
use crate::error::{Error, Result};
use crate::se3::{AxisAngle, Se3Element, Vector3};
use crate::sync::{Edge, MeasurementProblem};

/// Distribution of the label that replaces a corrupted measurement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Corruption {
    /// Same law as the ground truth: uniform angle, uniform axis, standard
    /// Gaussian translation.
    #[default]
    Prior,
    /// Angle `N(0, σ_r²)` degrees and translation `N(0, σ_t²)` per component.
    Sigma,
}

/// Noise model of the synthetic measurements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    /// Probability that an edge is measured.
    pub p: f64,
    /// Probability that a measured edge is not corrupted.
    pub q: f64,
    /// Std of the perturbation angle, degrees.
    pub sigma_r_deg: f64,
    /// Std of each perturbation translation component.
    pub sigma_t: f64,
    pub corruption: Corruption,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self { p: 1.0, q: 1.0, sigma_r_deg: 0.0, sigma_t: 0.0, corruption: Corruption::Prior }
    }
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must lie in [0, 1]")));
            }
        }
        for (name, v) in [("sigma_r", self.sigma_r_deg), ("sigma_t", self.sigma_t)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must be finite and non-negative")));
            }
        }
        Ok(())
    }
}

fn unit_axis<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v: Vector3<f64> = std::array::from_fn(|_| StandardNormal.sample(rng));
        if let Ok(aa) = AxisAngle::new(v, 0.0) {
            return aa.axis;
        }
    }
}

/// One draw from the ground-truth law.
pub fn sample_pose<R: Rng + ?Sized>(rng: &mut R) -> Se3Element<f64> {
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let axis = unit_axis(rng);
    let trans = std::array::from_fn(|_| StandardNormal.sample(rng));
    Se3Element::from_axis_angle(&AxisAngle::new(axis, angle).expect("unit axis"), trans)
}

/// `n` i.i.d. draws from the ground-truth law.
pub fn sample_ground_truth<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Se3Element<f64>> {
    (0..n).map(|_| sample_pose(rng)).collect()
}

/// Angle `N(0, σ_r²)` degrees about a uniform axis, translation
/// `N(0, σ_t²)` per component. Zero widths give exactly the identity part.
pub fn sample_perturbation<R: Rng + ?Sized>(sigma_r_deg: f64, sigma_t: f64, rng: &mut R) -> Se3Element<f64> {
    let angle = if sigma_r_deg > 0.0 {
        Normal::new(0.0, sigma_r_deg).expect("finite std").sample(rng).to_radians()
    } else {
        0.0
    };
    let axis = unit_axis(rng);
    let trans = if sigma_t > 0.0 {
        let d = Normal::new(0.0, sigma_t).expect("finite std");
        std::array::from_fn(|_| d.sample(rng))
    } else {
        [0.0; 3]
    };
    if angle == 0.0 {
        return Se3Element::from_translation(trans);
    }
    Se3Element::from_axis_angle(&AxisAngle::new(axis, angle).expect("unit axis"), trans)
}

/// Samples measurements of `truth`.
///
/// For each `i < j` the edge is present with probability `p`; a present
/// edge is clean-and-perturbed, `g_i·g_j⁻¹·ε`, with probability `q` and
/// corrupted otherwise. Labels are formed in the dual quaternions, so a
/// noiseless label is exactly `x_i·conj(x_j)`. The result may be
/// disconnected; see [`MeasurementProblem::is_connected`].
pub fn make_problem<R: Rng + ?Sized>(
    truth: &[Se3Element<f64>],
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<MeasurementProblem> {
    noise.validate()?;
    let n = truth.len();
    let x: Vec<DualQuaternion<f64>> = truth.iter().map(Se3Element::to_dual_quaternion).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !rng.random_bool(noise.p) {
                continue;
            }
            let label = if rng.random_bool(noise.q) {
                let ratio = x[i] * x[j].conj();
                let eps = sample_perturbation(noise.sigma_r_deg, noise.sigma_t, rng);
                if eps == Se3Element::identity() {
                    ratio
                } else {
                    ratio * eps.to_dual_quaternion()
                }
            } else {
                match noise.corruption {
                    Corruption::Prior => sample_pose(rng),
                    Corruption::Sigma => sample_perturbation(noise.sigma_r_deg, noise.sigma_t, rng),
                }
                .to_dual_quaternion()
            };
            edges.push(Edge::from_dual_quaternion(i, j, &label)?);
        }
    }
    MeasurementProblem::new(n, edges, Some(truth.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::se3::rotation_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn ground_truth_is_deterministic() {
        let a = sample_ground_truth(5, &mut ChaCha20Rng::seed_from_u64(3));
        let b = sample_ground_truth(5, &mut ChaCha20Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }

    #[test]
    fn ground_truth_moments() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let n = 100_000;
        let gt = sample_ground_truth(n, &mut rng);
        let mut mean_t = [0.0; 3];
        let mut mean_w = 0.0;
        for g in &gt {
            for (m, t) in mean_t.iter_mut().zip(g.trans()) {
                *m += t / n as f64;
            }
            mean_w += g.rot().w / n as f64;
        }
        assert!(mean_t.iter().all(|m| m.abs() < 0.02), "{mean_t:?}");
        assert!((mean_w - 2.0 / std::f64::consts::PI).abs() < 0.01, "{mean_w}");
    }

    #[test]
    fn clean_complete_labels_are_exact_ratios() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let gt = sample_ground_truth(6, &mut rng);
        let p = make_problem(&gt, &NoiseSpec::default(), &mut rng).unwrap();
        assert_eq!(p.edges().len(), 15);
        for e in p.edges() {
            let want = gt[e.i].compose(&gt[e.j].inverse());
            assert!(e.pose().approx_eq(&want, 1e-13));
            let x = gt[e.i].to_dual_quaternion() * gt[e.j].to_dual_quaternion().conj();
            assert_eq!(e.dual_quaternion().re, x.re);
        }
        let empty = make_problem(&gt, &NoiseSpec { p: 0.0, ..Default::default() }, &mut rng).unwrap();
        assert!(empty.edges().is_empty());
        assert!(!empty.is_connected());
    }

    #[test]
    fn perturbation_angle_spread() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let gt = sample_ground_truth(142, &mut rng);
        let noise = NoiseSpec { sigma_r_deg: 5.0, ..Default::default() };
        let p = make_problem(&gt, &noise, &mut rng).unwrap();
        assert!(p.edges().len() >= 10_000);
        // rotation_distance is twice the angle
        let sq: f64 = p
            .edges()
            .iter()
            .map(|e| {
                let want = gt[e.i].compose(&gt[e.j].inverse());
                let d = rotation_distance(&e.pose().rot(), &want.rot()).unwrap() / 2.0;
                d.to_degrees().powi(2)
            })
            .sum();
        let std = (sq / p.edges().len() as f64).sqrt();
        assert!((std - 5.0).abs() < 0.2, "{std}");
    }

    #[test]
    fn rejects_bad_noise() {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        for bad in [
            NoiseSpec { p: 1.5, ..Default::default() },
            NoiseSpec { q: -0.1, ..Default::default() },
            NoiseSpec { sigma_r_deg: -1.0, ..Default::default() },
            NoiseSpec { sigma_t: f64::NAN, ..Default::default() },
        ] {
            assert!(make_problem(&[Se3Element::identity()], &bad, &mut rng).is_err());
        }
    }
}
