//! SO(3) on the unit quaternions: the double cover `q ↦ (v ↦ q v q*)`,
//! axis-angle and rotation-matrix conversions, SVD rounding and the rotation
//! error metric.

use faer::Mat;

use super::vec3::{self, Matrix3, Vector3};
use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Rotation by `angle` radians about the unit `axis`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngle<T> {
    pub axis: Vector3<T>,
    pub angle: T,
}

impl<T: Real> AxisAngle<T> {
    /// Normalizes `axis` and wraps `angle` into `[0, 2π)`.
    pub fn new(axis: Vector3<T>, angle: T) -> Result<Self> {
        let n = vec3::norm(axis);
        if n <= T::TAU_ZERO {
            return Err(Error::ZeroInput);
        }
        let tau = T::TAU();
        let mut angle = angle % tau;
        if angle < T::zero() {
            angle = angle + tau;
        }
        if angle >= tau {
            angle = T::zero();
        }
        Ok(Self { axis: vec3::scale(axis, n.recip()), angle })
    }

    /// `cos(θ/2) + sin(θ/2)(v₁i + v₂j + v₃k)`, canonicalized.
    pub fn to_quaternion(&self) -> Quaternion<T> {
        let half = self.angle * T::half();
        let (s, c) = half.sin_cos();
        Quaternion::new(c, s * self.axis[0], s * self.axis[1], s * self.axis[2]).canonical()
    }

    /// Axis-angle of a unit quaternion, with angle in `[0, π]` for the
    /// canonical sheet. The identity maps to axis `(1, 0, 0)`.
    pub fn from_quaternion(q: &Quaternion<T>) -> Self {
        let q = q.canonical();
        let v = q.vector();
        let s = vec3::norm(v);
        if s <= T::TAU_ZERO {
            return Self { axis: [T::one(), T::zero(), T::zero()], angle: T::zero() };
        }
        Self { axis: vec3::scale(v, s.recip()), angle: T::two() * s.atan2(q.w) }
    }
}

pub(crate) fn unit_deviation<T: Real>(q: &Quaternion<T>) -> T {
    (q.norm() - T::one()).abs()
}

pub(crate) fn check_unit<T: Real>(q: &Quaternion<T>, tol: T) -> Result<()> {
    let dev = unit_deviation(q);
    if dev > tol || dev.is_nan() {
        return Err(Error::NotUnit { deviation: dev.as_f64() });
    }
    Ok(())
}

/// Vector part of `q·v·q*` without validating `q`.
#[inline]
pub(crate) fn rotate<T: Real>(q: &Quaternion<T>, v: Vector3<T>) -> Vector3<T> {
    (*q * Quaternion::pure(v) * q.conj()).vector()
}

/// Applies the rotation covered by the unit quaternion `q` to `v`.
pub fn so3_apply<T: Real>(q: &Quaternion<T>, v: Vector3<T>) -> Result<Vector3<T>> {
    check_unit(q, T::TAU_NUM)?;
    Ok(rotate(q, v))
}

/// The matrix of `φ(q)` in the standard basis.
pub fn rotmat_from_quat<T: Real>(q: &Quaternion<T>) -> Matrix3<T> {
    let (w, x, y, z) = (q.w, q.x, q.y, q.z);
    let one = T::one();
    let two = T::two();
    [
        [one - two * (y * y + z * z), two * (x * y - w * z), two * (x * z + w * y)],
        [two * (x * y + w * z), one - two * (x * x + z * z), two * (y * z - w * x)],
        [two * (x * z - w * y), two * (y * z + w * x), one - two * (x * x + y * y)],
    ]
}

/// Canonical unit quaternion of a rotation matrix (Shepperd's method).
pub fn quat_from_rotmat<T: Real>(m: &Matrix3<T>) -> Quaternion<T> {
    let quarter = T::lit(0.25);
    let tr = vec3::trace(m);
    let q = if tr >= m[0][0] && tr >= m[1][1] && tr >= m[2][2] {
        let s = (tr + T::one()).sqrt() * T::two();
        Quaternion::new(quarter * s, (m[2][1] - m[1][2]) / s, (m[0][2] - m[2][0]) / s, (m[1][0] - m[0][1]) / s)
    } else if m[0][0] >= m[1][1] && m[0][0] >= m[2][2] {
        let s = (T::one() + m[0][0] - m[1][1] - m[2][2]).sqrt() * T::two();
        Quaternion::new((m[2][1] - m[1][2]) / s, quarter * s, (m[0][1] + m[1][0]) / s, (m[0][2] + m[2][0]) / s)
    } else if m[1][1] >= m[2][2] {
        let s = (T::one() + m[1][1] - m[0][0] - m[2][2]).sqrt() * T::two();
        Quaternion::new((m[0][2] - m[2][0]) / s, (m[0][1] + m[1][0]) / s, quarter * s, (m[1][2] + m[2][1]) / s)
    } else {
        let s = (T::one() + m[2][2] - m[0][0] - m[1][1]).sqrt() * T::two();
        Quaternion::new((m[1][0] - m[0][1]) / s, (m[0][2] + m[2][0]) / s, (m[1][2] + m[2][1]) / s, quarter * s)
    };
    let n = q.norm();
    q.scale(n.recip()).canonical()
}

/// Nearest rotation `U·diag(1, 1, det(UVᵀ))·Vᵀ` from the SVD `M = UΣVᵀ`.
pub fn project_to_so3<T: Real>(m: &Matrix3<T>) -> Result<Matrix3<T>> {
    let a = Mat::<f64>::from_fn(3, 3, |r, c| m[r][c].as_f64());
    let svd = a.svd().map_err(|_| Error::Degenerate("SVD did not converge"))?;
    let s = svd.S().column_vector();
    let s_max = s[0].max(1.0);
    if s[2] <= f64::TAU_ZERO * s_max {
        return Err(Error::Degenerate("singular 3x3 block"));
    }
    let (u, v) = (svd.U(), svd.V());
    let uvt = u * v.transpose();
    let det = vec3::det(&std::array::from_fn(|r| std::array::from_fn(|c| uvt[(r, c)])));
    let fix = if det < 0.0 { -1.0 } else { 1.0 };
    Ok(std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let val = u[(r, 0)] * v[(c, 0)] + u[(r, 1)] * v[(c, 1)] + fix * u[(r, 2)] * v[(c, 2)];
            T::lit(val)
        })
    }))
}

/// `2·arccos(2⟨q₁,q₂⟩² − 1)`, i.e. twice the angle of the relative rotation
/// `conj(q₁)·q₂`. Lies in `[0, 2π]` and ignores the sign of either argument.
///
/// Evaluated through `atan2` on the relative quaternion, which equals the
/// arccos form but stays accurate for nearly identical rotations.
pub fn rotation_distance<T: Real>(q1: &Quaternion<T>, q2: &Quaternion<T>) -> Result<T> {
    check_unit(q1, T::TAU_LOOSE)?;
    check_unit(q2, T::TAU_LOOSE)?;
    let rel = q1.conj() * *q2;
    let theta = T::two() * vec3::norm(rel.vector()).atan2(rel.w.abs());
    Ok(T::two() * theta)
}

pub fn translation_distance<T: Real>(t1: Vector3<T>, t2: Vector3<T>) -> T {
    vec3::norm(vec3::sub(t1, t2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type Q = Quaternion<f64>;

    #[test]
    fn apply_examples() {
        let v = [0.3, -2.0, 1.5];
        assert_eq!(so3_apply(&Q::one(), v).unwrap(), v);
        assert_eq!(so3_apply(&Q::i(), [0.0, 0.0, 1.0]).unwrap(), [0.0, 0.0, -1.0]);
        let q = AxisAngle::new([1.0, 2.0, -0.5], 0.7).unwrap().to_quaternion();
        let a = so3_apply(&q, v).unwrap();
        let b = so3_apply(&-q, v).unwrap();
        assert!(vec3::norm(vec3::sub(a, b)) < 1e-15);
        assert!(matches!(so3_apply(&Q::new(2.0, 0.0, 0.0, 0.0), v), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn axis_angle_examples() {
        let id = AxisAngle::new([0.0, 1.0, 0.0], 0.0).unwrap().to_quaternion();
        assert_eq!(id, Q::one());
        let q = AxisAngle::new([1.0, 0.0, 0.0], PI).unwrap().to_quaternion();
        assert!(q.approx_eq(&Q::i(), 1e-15));
        let aa = AxisAngle::new([0.0, 0.0, 1.0], -0.5).unwrap();
        assert!((aa.angle - (2.0 * PI - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn axis_angle_round_trip() {
        let aa = AxisAngle::<f64>::new([0.2, -0.4, 0.8], 1.1).unwrap();
        let back = AxisAngle::from_quaternion(&aa.to_quaternion());
        assert!((back.angle - aa.angle).abs() < 1e-14);
        assert!(vec3::norm(vec3::sub(back.axis, aa.axis)) < 1e-14);
        // angles past π land on the canonical sheet with the flipped axis
        let big = AxisAngle::new([0.0, 0.0, 1.0], 1.5 * PI).unwrap();
        let back = AxisAngle::from_quaternion(&big.to_quaternion());
        assert!((back.angle - 0.5 * PI).abs() < 1e-14);
        assert!(vec3::norm(vec3::sub(back.axis, [0.0, 0.0, -1.0])) < 1e-14);
    }

    #[test]
    fn matrix_round_trip_and_trace() {
        for (axis, angle) in [([1.0, 0.0, 0.0], 0.0), ([0.3, 0.4, -0.2], 2.9), ([0.0, 1.0, 1.0], PI), ([-1.0, 0.1, 0.0], 3.5)] {
            let q = AxisAngle::new(axis, angle).unwrap().to_quaternion();
            let r = rotmat_from_quat(&q);
            assert!((vec3::trace(&r) - (4.0 * q.w * q.w - 1.0)).abs() < 1e-14);
            assert!((vec3::det(&r) - 1.0).abs() < 1e-14);
            let back = quat_from_rotmat(&r);
            assert!(back.approx_eq(&q, 1e-14) || back.approx_eq(&-q, 1e-14), "{back:?} vs {q:?}");
        }
    }

    #[test]
    fn svd_rounding() {
        let q = AxisAngle::new([0.5, -1.0, 0.25], 1.3).unwrap().to_quaternion();
        let r = rotmat_from_quat(&q);
        assert!(vec3::max_abs_diff(&project_to_so3(&r).unwrap(), &r) < 1e-14);
        let two_i = [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]];
        assert!(vec3::max_abs_diff(&project_to_so3(&two_i).unwrap(), &vec3::identity()) < 1e-14);
        let zero = [[0.0; 3]; 3];
        assert!(matches!(project_to_so3(&zero), Err(Error::Degenerate(_))));
    }

    #[test]
    fn svd_rounding_reflection_is_brute_force_optimal() {
        // det < 0: the smallest singular direction gets flipped
        let m = [[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, -1.0]];
        let p = project_to_so3(&m).unwrap();
        assert!(vec3::max_abs_diff(&p, &vec3::identity()) < 1e-14);
        let frob = |r: &Matrix3<f64>| -> f64 {
            (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| (r[i][j] - m[i][j]).powi(2)).sum()
        };
        let best = frob(&p);
        // coarse grid over the rotation ball
        let steps = 24;
        for a in 0..steps {
            for b in 0..steps {
                for c in 0..steps {
                    let v = [a, b, c].map(|k| -PI + 2.0 * PI * (k as f64 + 0.5) / steps as f64);
                    let ang = vec3::norm(v);
                    if ang >= PI || ang == 0.0 {
                        continue;
                    }
                    let r = rotmat_from_quat(&AxisAngle::new(v, ang).unwrap().to_quaternion());
                    assert!(best <= frob(&r) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn distance_examples() {
        let q = AxisAngle::new([0.1, 0.7, -0.3], 0.9).unwrap().to_quaternion();
        assert!(rotation_distance(&q, &q).unwrap() < 1e-15);
        assert!(rotation_distance(&q, &-q).unwrap() < 1e-15);
        assert!((rotation_distance(&Q::one(), &Q::i()).unwrap() - 2.0 * PI).abs() < 1e-15);
        let rz = AxisAngle::new([0.0, 0.0, 1.0], 10f64.to_radians()).unwrap().to_quaternion();
        assert!((rotation_distance(&Q::one(), &rz).unwrap() - 20f64.to_radians()).abs() < 1e-14);
        assert_eq!(translation_distance([3.0, 4.0, 0.0], [0.0; 3]), 5.0);
    }

    #[test]
    fn distance_matches_arccos_form() {
        for (ax, ang) in [([1.0, 0.0, 0.0], 0.3), ([0.2, 0.2, 0.9], 2.0), ([0.0, -1.0, 0.4], 3.1)] {
            let q1 = AxisAngle::new([0.4, 0.1, -0.2], 1.7).unwrap().to_quaternion();
            let q2 = AxisAngle::<f64>::new(ax, ang).unwrap().to_quaternion();
            let c = q1.dot(&q2);
            let oracle = 2.0 * (2.0 * c * c - 1.0).clamp(-1.0, 1.0).acos();
            assert!((rotation_distance(&q1, &q2).unwrap() - oracle).abs() < 1e-12);
        }
    }
}
