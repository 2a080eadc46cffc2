//! Dual numbers `a + bε` with `ε² = 0`.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::scalar::{is_negligible, Real};

/// A dual number `re + du·ε`.
///
/// The derived `PartialOrd` compares `re` first and `du` second, which is
/// exactly the lexicographic total order on dual numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct DualNumber<T> {
    pub re: T,
    pub du: T,
}

impl<T: Real> DualNumber<T> {
    #[inline]
    pub fn new(re: T, du: T) -> Self {
        Self { re, du }
    }

    #[inline]
    pub fn from_real(re: T) -> Self {
        Self { re, du: T::zero() }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::from_real(T::one())
    }

    /// The nilpotent generator `ε`.
    #[inline]
    pub fn epsilon() -> Self {
        Self::new(T::zero(), T::one())
    }

    /// A dual number is nilpotent iff its real coordinate vanishes.
    #[inline]
    pub fn is_nilpotent(&self) -> bool {
        is_negligible(self.re, self.du)
    }

    #[inline]
    pub fn is_invertible(&self) -> bool {
        !self.is_nilpotent()
    }

    /// `a⁻¹ − b·a⁻²·ε`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_nilpotent() {
            return Err(Error::NotInvertible);
        }
        let inv = self.re.recip();
        Ok(Self::new(inv, -self.du * inv * inv))
    }

    /// `self / rhs`, defined when `rhs` is invertible.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(*self * rhs.inverse()?)
    }

    /// Square root of a positive invertible dual number, or of zero.
    pub fn sqrt(&self) -> Result<Self> {
        if self.re == T::zero() && self.du == T::zero() {
            return Ok(Self::zero());
        }
        if self.is_nilpotent() {
            return Err(Error::Domain("nilpotent non-zero dual number"));
        }
        if self.re < T::zero() {
            return Err(Error::Domain("negative real coordinate"));
        }
        let root = self.re.sqrt();
        Ok(Self::new(root, self.du / (T::two() * root)))
    }

    /// `|a| + sgn(a)·b·ε` for `a ≠ 0`, `|b|·ε` otherwise.
    pub fn abs(&self) -> Self {
        if self.is_nilpotent() {
            Self::new(T::zero(), self.du.abs())
        } else {
            let sgn = if self.re > T::zero() { T::one() } else { -T::one() };
            Self::new(self.re.abs(), sgn * self.du)
        }
    }

    /// Lexicographic `≤`.
    #[inline]
    pub fn leq(&self, other: &Self) -> bool {
        self <= other
    }

    /// `leq` with both coordinates relaxed by `tol`; useful when checking
    /// inequalities computed in floating point.
    pub fn leq_within(&self, other: &Self, tol: T) -> bool {
        if self.re < other.re - tol {
            return true;
        }
        if (self.re - other.re).abs() <= tol {
            return self.du <= other.du + tol;
        }
        false
    }

    #[inline]
    pub fn scale(&self, t: T) -> Self {
        Self::new(self.re * t, self.du * t)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        (self.re - other.re).abs() <= tol && (self.du - other.du).abs() <= tol
    }
}

impl<T: Real> Add for DualNumber<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl<T: Real> AddAssign for DualNumber<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for DualNumber<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl<T: Real> SubAssign for DualNumber<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Real> Mul for DualNumber<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.re * rhs.re, self.re * rhs.du + self.du * rhs.re)
    }
}

impl<T: Real> Mul<T> for DualNumber<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: T) -> Self {
        self.scale(rhs)
    }
}

impl<T: Real> Neg for DualNumber<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.du)
    }
}

impl<T: Real> Sum for DualNumber<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = DualNumber<f64>;

    #[test]
    fn product_rule() {
        assert_eq!(D::new(1.0, 2.0) * D::new(3.0, 4.0), D::new(3.0, 10.0));
        let x = D::new(-1.5, 7.25);
        assert_eq!(x * D::one(), x);
        assert_eq!(D::epsilon() * D::epsilon(), D::zero());
    }

    #[test]
    fn inverse_formula() {
        assert_eq!(D::new(2.0, 3.0).inverse().unwrap(), D::new(0.5, -0.75));
        assert_eq!(D::one().inverse().unwrap(), D::one());
        assert_eq!(D::new(0.0, 5.0).inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn nilpotent_and_invertible_partition() {
        for x in [D::new(0.0, 3.0), D::new(1e-14, 1.0), D::new(2.0, 0.0), D::zero()] {
            assert_ne!(x.is_nilpotent(), x.is_invertible());
        }
        assert!(D::new(1e-14, 1.0).is_nilpotent());
        assert!(!D::new(1e-9, 0.0).is_nilpotent());
    }

    #[test]
    fn square_root() {
        assert_eq!(D::new(4.0, 4.0).sqrt().unwrap(), D::new(2.0, 1.0));
        assert_eq!(D::zero().sqrt().unwrap(), D::zero());
        assert!(matches!(D::new(-1.0, 0.0).sqrt(), Err(Error::Domain(_))));
        assert!(matches!(D::new(0.0, 1.0).sqrt(), Err(Error::Domain(_))));
        let r = D::new(2.5, -1.0).sqrt().unwrap();
        assert!((r * r).approx_eq(&D::new(2.5, -1.0), 1e-12));
    }

    #[test]
    fn absolute_value_branches() {
        assert_eq!(D::new(-2.0, 3.0).abs(), D::new(2.0, -3.0));
        assert_eq!(D::new(0.0, -5.0).abs(), D::new(0.0, 5.0));
        assert_eq!(D::new(3.0, 0.0).abs(), D::new(3.0, 0.0));
    }

    #[test]
    fn lexicographic_order() {
        assert!(D::new(1.0, 9.0).leq(&D::new(2.0, 0.0)));
        let x = D::new(0.3, -0.2);
        assert!(x.leq(&x));
        assert!(!D::new(2.0, 1.0).leq(&D::new(2.0, 0.0)));
    }

    #[test]
    fn single_precision_works_too() {
        let x = DualNumber::<f32>::new(2.0, 3.0);
        assert_eq!(x.inverse().unwrap(), DualNumber::new(0.5, -0.75));
    }
}
