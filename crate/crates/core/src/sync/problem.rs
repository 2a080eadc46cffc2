use crate::algebra::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::se3::{Se3Element, Vector3};

/// Ratio measurement `≈ g_i·g_j⁻¹`, 0-based with `i < j`.
///
/// The rotation quaternion keeps the sign it was measured with, so clean
/// labels reproduce `g_i·conj(g_j)` exactly rather than up to `±`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    rot: Quaternion<f64>,
    trans: Vector3<f64>,
}

impl Edge {
    /// Validates `rot` as a unit quaternion within `τ_loose`.
    pub fn from_parts(i: usize, j: usize, rot: Quaternion<f64>, trans: Vector3<f64>) -> Result<Self> {
        let pose = Se3Element::new(rot, trans)?;
        let canonical = pose.rot();
        let rot = if canonical.dot(&rot) < 0.0 { -canonical } else { canonical };
        Ok(Self { i, j, rot, trans })
    }

    pub fn from_pose(i: usize, j: usize, pose: &Se3Element<f64>) -> Self {
        Self { i, j, rot: pose.rot(), trans: pose.trans() }
    }

    /// Keeps the sign of `x`.
    pub fn from_dual_quaternion(i: usize, j: usize, x: &DualQuaternion<f64>) -> Result<Self> {
        let pose = Se3Element::from_dual_quaternion(x)?;
        let rot = if pose.rot().dot(&x.re) < 0.0 { -pose.rot() } else { pose.rot() };
        Ok(Self { i, j, rot, trans: pose.trans() })
    }

    /// Signed rotation quaternion.
    #[inline]
    pub fn rot(&self) -> Quaternion<f64> {
        self.rot
    }

    #[inline]
    pub fn trans(&self) -> Vector3<f64> {
        self.trans
    }

    pub fn pose(&self) -> Se3Element<f64> {
        Se3Element::new(self.rot, self.trans).expect("validated on construction")
    }

    /// `q + ½t'q·ε` with the stored sign of `q`.
    pub fn dual_quaternion(&self) -> DualQuaternion<f64> {
        let q = self.rot;
        DualQuaternion::new(q, (Quaternion::pure(self.trans) * q).scale(0.5))
    }
}

/// A synchronization instance: `n` unknown poses and the measured ratios.
///
/// Edges are kept sorted by `(i, j)`. Connectivity is not enforced here; a
/// disconnected problem is a valid value that the solvers refuse.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementProblem {
    n: usize,
    edges: Vec<Edge>,
    ground_truth: Option<Vec<Se3Element<f64>>>,
}

impl MeasurementProblem {
    pub fn new(n: usize, mut edges: Vec<Edge>, ground_truth: Option<Vec<Se3Element<f64>>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProblem("n must be at least 1".into()));
        }
        for e in &edges {
            if e.i >= e.j {
                return Err(Error::InvalidProblem(format!("edge ({}, {}) needs i < j", e.i, e.j)));
            }
            if e.j >= n {
                return Err(Error::InvalidProblem(format!("edge ({}, {}) out of range for n = {n}", e.i, e.j)));
            }
        }
        edges.sort_by_key(|e| (e.i, e.j));
        if let Some(w) = edges.windows(2).find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err(Error::InvalidProblem(format!("duplicate edge ({}, {})", w[0].i, w[0].j)));
        }
        if let Some(gt) = &ground_truth {
            if gt.len() != n {
                return Err(Error::InvalidProblem(format!("ground truth has {} entries, expected {n}", gt.len())));
            }
        }
        Ok(Self { n, edges, ground_truth })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn ground_truth(&self) -> Option<&[Se3Element<f64>]> {
        self.ground_truth.as_deref()
    }

    pub fn with_ground_truth(mut self, gt: Option<Vec<Se3Element<f64>>>) -> Result<Self> {
        if let Some(g) = &gt {
            if g.len() != self.n {
                return Err(Error::InvalidProblem(format!("ground truth has {} entries, expected {}", g.len(), self.n)));
            }
        }
        self.ground_truth = gt;
        Ok(self)
    }

    /// Whether the measurement graph on `0..n` is connected. A single node is.
    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = self.n;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.i), find(&mut parent, e.j));
            if a != b {
                parent[a.max(b)] = a.min(b);
                components -= 1;
            }
        }
        components == 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::DisconnectedGraph)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(i: usize, j: usize) -> Edge {
        Edge::from_pose(i, j, &Se3Element::identity())
    }

    #[test]
    fn edge_keeps_sign() {
        let x = Se3Element::from_translation([1.0, -2.0, 0.5]).to_dual_quaternion();
        let e = Edge::from_dual_quaternion(0, 1, &-x).unwrap();
        assert_eq!(e.rot().w, -1.0);
        assert!(e.dual_quaternion().approx_eq(&-x, 1e-15));
        assert!(e.pose().approx_eq(&Se3Element::from_translation([1.0, -2.0, 0.5]), 1e-15));
        let f = Edge::from_parts(0, 1, Quaternion::new(-1.0, 0.0, 0.0, 0.0), [0.0; 3]).unwrap();
        assert_eq!(f.rot().w, -1.0);
        assert!(Edge::from_parts(0, 1, Quaternion::new(2.0, 0.0, 0.0, 0.0), [0.0; 3]).is_err());
    }

    #[test]
    fn validation() {
        assert!(MeasurementProblem::new(0, vec![], None).is_err());
        assert!(MeasurementProblem::new(3, vec![edge(1, 1)], None).is_err());
        assert!(MeasurementProblem::new(3, vec![edge(2, 1)], None).is_err());
        assert!(MeasurementProblem::new(3, vec![edge(1, 3)], None).is_err());
        assert!(MeasurementProblem::new(3, vec![edge(0, 1), edge(0, 1)], None).is_err());
        assert!(MeasurementProblem::new(3, vec![], Some(vec![Se3Element::identity()])).is_err());
        let p = MeasurementProblem::new(3, vec![edge(1, 2), edge(0, 2)], None).unwrap();
        assert_eq!((p.edges()[0].i, p.edges()[0].j), (0, 2));
    }

    #[test]
    fn connectivity() {
        assert!(MeasurementProblem::new(1, vec![], None).unwrap().is_connected());
        assert!(!MeasurementProblem::new(3, vec![edge(0, 1)], None).unwrap().is_connected());
        assert!(MeasurementProblem::new(3, vec![edge(0, 2), edge(1, 2)], None).unwrap().is_connected());
        let p = MeasurementProblem::new(4, vec![edge(0, 1), edge(2, 3)], None).unwrap();
        assert_eq!(p.require_connected(), Err(Error::DisconnectedGraph));
    }
}
