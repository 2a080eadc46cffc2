//! Rigid motions: the canonical `(q, t)` pose, its unit-dual-quaternion and
//! 4×4 homogeneous representations, and the projection onto unit dual
//! quaternions.
//!
//! A pose `(R, t)` is embedded as `x = (1 + ½t'ε)·q = q + ½t'q·ε`, with the
//! translation factor on the left. This is the order under which the point
//! action `x (1 + s'ε) x* = 1 + (q s' q* + t')ε` holds.

use super::rotation::{check_unit, quat_from_rotmat, rotate, rotmat_from_quat, AxisAngle};
use super::vec3::{self, Matrix3, Vector3};
use crate::algebra::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// An element of SE(3): unit rotation quaternion on the canonical sheet
/// plus a translation vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Se3Element<T> {
    rot: Quaternion<T>,
    trans: Vector3<T>,
}

impl<T: Real> Se3Element<T> {
    /// Validates `rot` against `TAU_LOOSE`, renormalizes it when it is off by
    /// more than `TAU_NUM`, and moves it to the canonical sheet.
    pub fn new(rot: Quaternion<T>, trans: Vector3<T>) -> Result<Self> {
        check_unit(&rot, T::TAU_LOOSE)?;
        let rot = if (rot.norm() - T::one()).abs() > T::TAU_NUM { rot.normalize()? } else { rot };
        Ok(Self { rot: rot.canonical(), trans })
    }

    pub fn identity() -> Self {
        Self { rot: Quaternion::one(), trans: [T::zero(); 3] }
    }

    pub fn from_axis_angle(aa: &AxisAngle<T>, trans: Vector3<T>) -> Self {
        Self { rot: aa.to_quaternion(), trans }
    }

    pub fn from_translation(trans: Vector3<T>) -> Self {
        Self { rot: Quaternion::one(), trans }
    }

    #[inline]
    pub fn rot(&self) -> Quaternion<T> {
        self.rot
    }

    #[inline]
    pub fn trans(&self) -> Vector3<T> {
        self.trans
    }

    pub fn rotation_matrix(&self) -> Matrix3<T> {
        rotmat_from_quat(&self.rot)
    }

    /// `(R₁R₂, t₁ + R₁t₂)`.
    pub fn compose(&self, other: &Self) -> Self {
        let rot = (self.rot * other.rot).canonical();
        let trans = vec3::add(self.trans, rotate(&self.rot, other.trans));
        Self { rot: renormalize(rot), trans }
    }

    /// `(R⁻¹, −R⁻¹t)`.
    pub fn inverse(&self) -> Self {
        let rot = self.rot.conj().canonical();
        Self { rot, trans: vec3::neg(rotate(&rot, self.trans)) }
    }

    /// `R·s + t`.
    pub fn act(&self, s: Vector3<T>) -> Vector3<T> {
        vec3::add(rotate(&self.rot, s), self.trans)
    }

    /// `q + ½t'q·ε`.
    pub fn to_dual_quaternion(&self) -> DualQuaternion<T> {
        let t = Quaternion::pure(self.trans);
        DualQuaternion::new(self.rot, (t * self.rot).scale(T::half()))
    }

    /// Inverts [`Self::to_dual_quaternion`] for unit dual quaternions on either
    /// sheet of the double cover.
    pub fn from_dual_quaternion(x: &DualQuaternion<T>) -> Result<Self> {
        check_unit_dq(x, T::TAU_NUM)?;
        let sign = if x.re.canonical() == x.re { T::one() } else { -T::one() };
        let (q, b) = (x.re.scale(sign), x.du.scale(sign));
        let t = (b * q.conj()).scale(T::two());
        if t.w.abs() > T::TAU_NUM * t.norm().max(T::one()) {
            return Err(Error::NotPure { first: t.w.as_f64() });
        }
        Self::new(q, t.vector())
    }

    pub fn to_mat4(&self) -> Mat4Pose<T> {
        Mat4Pose::from_se3(self)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        let same_rot = self.rot.approx_eq(&other.rot, tol) || self.rot.approx_eq(&-other.rot, tol);
        same_rot && vec3::norm(vec3::sub(self.trans, other.trans)) <= tol
    }
}

fn renormalize<T: Real>(q: Quaternion<T>) -> Quaternion<T> {
    if (q.norm() - T::one()).abs() > T::TAU_NUM {
        q.scale(q.norm().recip())
    } else {
        q
    }
}

/// Deviation of `conj(x)·x` from one, measured on the standard and dual parts.
pub fn unit_dq_deviation<T: Real>(x: &DualQuaternion<T>) -> T {
    let n = x.norm_sq();
    (n.re - T::one()).abs().max(n.du.abs())
}

pub fn is_unit_dq<T: Real>(x: &DualQuaternion<T>, tol: T) -> bool {
    unit_dq_deviation(x) <= tol
}

fn check_unit_dq<T: Real>(x: &DualQuaternion<T>, tol: T) -> Result<()> {
    let dev = unit_dq_deviation(x);
    if dev > tol || dev.is_nan() {
        return Err(Error::NotUnit { deviation: dev.as_f64() });
    }
    Ok(())
}

/// Acts with the unit dual quaternion `x` on `s`: embeds `s` as `1 + s'ε`
/// (no ½ factor), conjugates, and reads back the dual coordinate.
pub fn dq_act_on_point<T: Real>(x: &DualQuaternion<T>, s: Vector3<T>) -> Result<Vector3<T>> {
    check_unit_dq(x, T::TAU_NUM)?;
    let p = DualQuaternion::new(Quaternion::one(), Quaternion::pure(s));
    // the plain conjugate cancels the translation (t'* = -t'); the combined
    // quaternion-and-dual conjugate a* - b*ε keeps it
    let x_bar = DualQuaternion::new(x.re.conj(), -x.du.conj());
    Ok((*x * p * x_bar).du.vector())
}

/// Closest unit dual quaternion to `x` in the dual-number distance.
///
/// For invertible `x` this is `x / |x|`. When the real coordinate vanishes
/// every `a' + b'ε` with `a' = b/|b|` and `b*b' + b'*b = 0` is optimal; the
/// member with `b' = 0` is returned.
pub fn project_to_unit_dq<T: Real>(x: &DualQuaternion<T>) -> Result<DualQuaternion<T>> {
    if x.coord_norm() == T::zero() {
        return Err(Error::ZeroInput);
    }
    if x.is_nilpotent() {
        return Ok(DualQuaternion::from_quaternion(x.du.normalize()?));
    }
    x.div_dual(&x.abs())
}

/// Real 4×4 homogeneous matrix `[R t; 0 1]`, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4Pose<T> {
    pub m: [[T; 4]; 4],
}

impl<T: Real> Mat4Pose<T> {
    pub fn identity() -> Self {
        Self::from_se3(&Se3Element::identity())
    }

    pub fn from_se3(g: &Se3Element<T>) -> Self {
        let r = g.rotation_matrix();
        let t = g.trans();
        let (z, o) = (T::zero(), T::one());
        Self {
            m: [
                [r[0][0], r[0][1], r[0][2], t[0]],
                [r[1][0], r[1][1], r[1][2], t[1]],
                [r[2][0], r[2][1], r[2][2], t[2]],
                [z, z, z, o],
            ],
        }
    }

    /// Validates the pose invariants within `TAU_LOOSE`.
    pub fn from_matrix(m: [[T; 4]; 4]) -> Result<Self> {
        let (z, o) = (T::zero(), T::one());
        let bottom = [z, z, z, o];
        if m[3].iter().zip(bottom).any(|(a, b)| (*a - b).abs() > T::TAU_LOOSE) {
            return Err(Error::NotAPose("bottom row is not (0, 0, 0, 1)"));
        }
        let mut out = m;
        out[3] = bottom;
        let pose = Self { m: out };
        let r = pose.rotation();
        let rtr = vec3::mat_mul(&vec3::transpose(&r), &r);
        if vec3::max_abs_diff(&rtr, &vec3::identity()) > T::TAU_LOOSE {
            return Err(Error::NotAPose("rotation block is not orthogonal"));
        }
        if (vec3::det(&r) - o).abs() > T::TAU_LOOSE {
            return Err(Error::NotAPose("rotation block has determinant -1"));
        }
        Ok(pose)
    }

    pub fn rotation(&self) -> Matrix3<T> {
        std::array::from_fn(|r| std::array::from_fn(|c| self.m[r][c]))
    }

    pub fn translation(&self) -> Vector3<T> {
        [self.m[0][3], self.m[1][3], self.m[2][3]]
    }

    pub fn to_se3(&self) -> Result<Se3Element<T>> {
        let checked = Self::from_matrix(self.m)?;
        Se3Element::new(quat_from_rotmat(&checked.rotation()), checked.translation())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = [[T::zero(); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.m[r][k] * other.m[k][c]).sum();
            }
        }
        Self { m }
    }

    /// `[Rᵀ −Rᵀt; 0 1]`.
    pub fn inverse(&self) -> Self {
        let rt = vec3::transpose(&self.rotation());
        let t = vec3::neg(vec3::mat_vec(&rt, self.translation()));
        let (z, o) = (T::zero(), T::one());
        Self {
            m: [
                [rt[0][0], rt[0][1], rt[0][2], t[0]],
                [rt[1][0], rt[1][1], rt[1][2], t[1]],
                [rt[2][0], rt[2][1], rt[2][2], t[2]],
                [z, z, z, o],
            ],
        }
    }

    pub fn act(&self, s: Vector3<T>) -> Vector3<T> {
        vec3::add(vec3::mat_vec(&self.rotation(), s), self.translation())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).abs());
            }
        }
        worst
    }
}
