//! Hamilton quaternions `w + x·i + y·j + z·k`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quaternion<T> {
    #[inline]
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub fn from_real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    /// Embeds a 3-vector as the pure quaternion `v₁i + v₂j + v₃k`.
    #[inline]
    pub fn pure(v: [T; 3]) -> Self {
        Self::new(T::zero(), v[0], v[1], v[2])
    }

    #[inline]
    pub fn zero() -> Self {
        Self::from_real(T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::from_real(T::one())
    }

    #[inline]
    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    #[inline]
    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    #[inline]
    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// The `i, j, k` coordinates.
    #[inline]
    pub fn vector(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn to_array(&self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    #[inline]
    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Euclidean inner product on the four coordinates.
    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn scale(&self, t: T) -> Self {
        Self::new(self.w * t, self.x * t, self.y * t, self.z * t)
    }

    /// `conj(q) / |q|²`.
    pub fn inverse(&self) -> Result<Self> {
        let n2 = self.norm_sq();
        if n2 == T::zero() {
            return Err(Error::NotInvertible);
        }
        Ok(self.conj().scale(n2.recip()))
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n <= T::TAU_ZERO {
            return Err(Error::ZeroInput);
        }
        Ok(self.scale(n.recip()))
    }

    /// Largest absolute value of the `i, j, k` coordinates.
    pub fn imag_max_abs(&self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Picks the representative of `{q, −q}` with non-negative first
    /// coordinate. When the first coordinate is (numerically) zero, the sign
    /// is chosen so the first non-zero of `x, y, z` is positive.
    pub fn canonical(&self) -> Self {
        let scale = self.norm().max(T::one());
        let flip = if self.w.abs() > T::TAU_ZERO * scale {
            self.w < T::zero()
        } else {
            let lead = [self.x, self.y, self.z]
                .into_iter()
                .find(|c| c.abs() > T::TAU_ZERO * scale)
                .unwrap_or(T::zero());
            lead < T::zero() || (lead == T::zero() && self.w < T::zero())
        };
        if flip {
            -*self
        } else {
            *self
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        (*self - *other).to_array().iter().all(|c| c.abs() <= tol)
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn add(self, r: Self) -> Self {
        Self::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl<T: Real> AddAssign for Quaternion<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn sub(self, r: Self) -> Self {
        Self::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    // i² = j² = k² = ijk = −1
    #[inline]
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl<T: Real> Mul<T> for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, t: T) -> Self {
        self.scale(t)
    }
}
