//! Minimal 3-vector and 3×3 helpers over `[T; 3]` arrays.

use crate::scalar::Real;

pub type Vector3<T> = [T; 3];
/// Row-major 3×3 matrix.
pub type Matrix3<T> = [[T; 3]; 3];

#[inline]
pub fn add<T: Real>(a: Vector3<T>, b: Vector3<T>) -> Vector3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub<T: Real>(a: Vector3<T>, b: Vector3<T>) -> Vector3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale<T: Real>(a: Vector3<T>, t: T) -> Vector3<T> {
    [a[0] * t, a[1] * t, a[2] * t]
}

#[inline]
pub fn dot<T: Real>(a: Vector3<T>, b: Vector3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm<T: Real>(a: Vector3<T>) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn neg<T: Real>(a: Vector3<T>) -> Vector3<T> {
    [-a[0], -a[1], -a[2]]
}

pub fn mat_vec<T: Real>(m: &Matrix3<T>, v: Vector3<T>) -> Vector3<T> {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

pub fn mat_mul<T: Real>(a: &Matrix3<T>, b: &Matrix3<T>) -> Matrix3<T> {
    let mut out = [[T::zero(); 3]; 3];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

pub fn transpose<T: Real>(m: &Matrix3<T>) -> Matrix3<T> {
    let mut out = *m;
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = m[c][r];
        }
    }
    out
}

pub fn identity<T: Real>() -> Matrix3<T> {
    let (o, z) = (T::one(), T::zero());
    [[o, z, z], [z, o, z], [z, z, o]]
}

pub fn det<T: Real>(m: &Matrix3<T>) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn trace<T: Real>(m: &Matrix3<T>) -> T {
    m[0][0] + m[1][1] + m[2][2]
}

/// Largest absolute entry of `a − b`.
pub fn max_abs_diff<T: Real>(a: &Matrix3<T>, b: &Matrix3<T>) -> T {
    let mut worst = T::zero();
    for r in 0..3 {
        for c in 0..3 {
            worst = worst.max((a[r][c] - b[r][c]).abs());
        }
    }
    worst
}
