//! Dual quaternions `a + bε` with quaternion coordinates `a`, `b`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::{DualNumber, Quaternion};
use crate::error::{Error, Result};
use crate::scalar::{is_negligible, Real};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DualQuaternion<T> {
    /// Real coordinate.
    pub re: Quaternion<T>,
    /// Dual coordinate.
    pub du: Quaternion<T>,
}

impl<T: Real> DualQuaternion<T> {
    #[inline]
    pub fn new(re: Quaternion<T>, du: Quaternion<T>) -> Self {
        Self { re, du }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(Quaternion::zero(), Quaternion::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::new(Quaternion::one(), Quaternion::zero())
    }

    #[inline]
    pub fn from_quaternion(q: Quaternion<T>) -> Self {
        Self::new(q, Quaternion::zero())
    }

    /// Embeds a dual number (central in the dual quaternions).
    #[inline]
    pub fn from_dual_number(d: DualNumber<T>) -> Self {
        Self::new(Quaternion::from_real(d.re), Quaternion::from_real(d.du))
    }

    /// The eight coordinates, real coordinate first.
    pub fn to_array(&self) -> [T; 8] {
        let (a, b) = (self.re, self.du);
        [a.w, a.x, a.y, a.z, b.w, b.x, b.y, b.z]
    }

    pub fn from_array(c: [T; 8]) -> Self {
        Self::new(
            Quaternion::new(c[0], c[1], c[2], c[3]),
            Quaternion::new(c[4], c[5], c[6], c[7]),
        )
    }

    #[inline]
    pub fn conj(&self) -> Self {
        Self::new(self.re.conj(), self.du.conj())
    }

    #[inline]
    pub fn is_nilpotent(&self) -> bool {
        is_negligible(self.re.norm(), self.du.norm())
    }

    #[inline]
    pub fn is_invertible(&self) -> bool {
        !self.is_nilpotent()
    }

    /// `conj(x)·x = |a|² + (ab* + ba*)ε`, always a dual number.
    ///
    /// `ab* + ba*` is twice the Euclidean inner product of `a` and `b`, which
    /// is how it is evaluated here.
    #[inline]
    pub fn norm_sq(&self) -> DualNumber<T> {
        DualNumber::new(self.re.norm_sq(), T::two() * self.re.dot(&self.du))
    }

    /// Dual-number absolute value:
    /// `|a| + ((ab* + ba*)/(2|a|))ε` for `a ≠ 0`, `|b|ε` otherwise.
    pub fn abs(&self) -> DualNumber<T> {
        if self.is_nilpotent() {
            DualNumber::new(T::zero(), self.du.norm())
        } else {
            let na = self.re.norm();
            DualNumber::new(na, self.re.dot(&self.du) / na)
        }
    }

    /// `conj(x) / (conj(x)·x)`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_nilpotent() {
            return Err(Error::NotInvertible);
        }
        self.conj().div_dual(&self.norm_sq())
    }

    /// Multiplication by a dual number `d = c + eε`, which commutes with
    /// every dual quaternion.
    #[inline]
    pub fn scale_dual(&self, d: &DualNumber<T>) -> Self {
        Self::new(self.re.scale(d.re), self.du.scale(d.re) + self.re.scale(d.du))
    }

    #[inline]
    pub fn scale(&self, t: T) -> Self {
        Self::new(self.re.scale(t), self.du.scale(t))
    }

    /// `x / d := x·d⁻¹` for an invertible dual number `d`.
    pub fn div_dual(&self, d: &DualNumber<T>) -> Result<Self> {
        Ok(self.scale_dual(&d.inverse()?))
    }

    /// Reads the first coordinates as a dual number, dropping `i, j, k` parts.
    #[inline]
    pub fn dual_number_part(&self) -> DualNumber<T> {
        DualNumber::new(self.re.w, self.du.w)
    }

    /// Largest absolute `i, j, k` coordinate over both quaternion coordinates.
    pub fn imag_max_abs(&self) -> T {
        self.re.imag_max_abs().max(self.du.imag_max_abs())
    }

    /// Euclidean norm of the eight coordinates.
    pub fn coord_norm(&self) -> T {
        (self.re.norm_sq() + self.du.norm_sq()).sqrt()
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.re.approx_eq(&other.re, tol) && self.du.approx_eq(&other.du, tol)
    }
}

impl<T: Real> Add for DualQuaternion<T> {
    type Output = Self;
    #[inline]
    fn add(self, r: Self) -> Self {
        Self::new(self.re + r.re, self.du + r.du)
    }
}

impl<T: Real> AddAssign for DualQuaternion<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for DualQuaternion<T> {
    type Output = Self;
    #[inline]
    fn sub(self, r: Self) -> Self {
        Self::new(self.re - r.re, self.du - r.du)
    }
}

impl<T: Real> Neg for DualQuaternion<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.du)
    }
}

impl<T: Real> Mul for DualQuaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, r: Self) -> Self {
        Self::new(self.re * r.re, self.re * r.du + self.du * r.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Quaternion<f64>;
    type X = DualQuaternion<f64>;

    #[test]
    fn conjugate_product_is_one() {
        let x = X::new(Q::i(), Q::j());
        let p = x * x.conj();
        assert!(p.approx_eq(&X::one(), 0.0));
        assert_eq!(x * X::one(), x);
        let n1 = X::new(Q::zero(), Q::new(1.0, 2.0, 3.0, 4.0));
        let n2 = X::new(Q::zero(), Q::new(-1.0, 0.5, 0.0, 2.0));
        assert_eq!(n1 * n2, X::zero());
    }

    #[test]
    fn absolute_value() {
        assert_eq!(X::new(Q::i(), Q::one()).abs(), DualNumber::one());
        assert_eq!(X::zero().abs(), DualNumber::zero());
        assert_eq!(X::from_quaternion(Q::from_real(2.0)).abs(), DualNumber::from_real(2.0));
        assert_eq!(
            X::new(Q::zero(), Q::new(0.0, 3.0, 4.0, 0.0)).abs(),
            DualNumber::new(0.0, 5.0)
        );
        // dual numbers embed compatibly
        let d = DualNumber::new(-2.0, 3.0);
        assert_eq!(X::from_dual_number(d).abs(), d.abs());
    }

    #[test]
    fn inverse() {
        let x = X::new(Q::i(), Q::j());
        assert!(x.inverse().unwrap().approx_eq(&X::new(-Q::i(), -Q::j()), 1e-15));
        assert_eq!(X::one().inverse().unwrap(), X::one());
        assert_eq!(X::new(Q::zero(), Q::i()).inverse(), Err(Error::NotInvertible));

        let y = X::new(Q::new(0.5, -1.0, 2.0, 0.1), Q::new(3.0, 0.2, -0.4, 1.0));
        assert!((y * y.inverse().unwrap()).approx_eq(&X::one(), 1e-12));
        assert!((y.inverse().unwrap() * y).approx_eq(&X::one(), 1e-12));
    }

    #[test]
    fn norm_sq_matches_product() {
        let y = X::new(Q::new(0.5, -1.0, 2.0, 0.1), Q::new(3.0, 0.2, -0.4, 1.0));
        let p = y.conj() * y;
        assert!(p.imag_max_abs() < 1e-14);
        assert!(p.dual_number_part().approx_eq(&y.norm_sq(), 1e-14));
    }
}
