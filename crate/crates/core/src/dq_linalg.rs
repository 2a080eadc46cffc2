//! Dense vectors and matrices over the dual quaternions, and the power
//! iteration for the dominant eigenpair of a Hermitian matrix.
//!
//! Vectors form a right module: scalars act by right multiplication,
//! `(x·a)_j = x_j·a`. Eigenpairs are right eigenpairs, `A·x = x·λ`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{DualNumber, DualQuaternion};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct DqVector<T> {
    entries: Vec<DualQuaternion<T>>,
}

impl<T: Real> DqVector<T> {
    pub fn new(entries: Vec<DualQuaternion<T>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(Self { entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self { entries: vec![DualQuaternion::zero(); n.max(1)] }
    }

    /// I.i.d. standard Gaussian coordinates on all eight components of every
    /// entry, normalized. Almost surely has a component with non-zero real
    /// coordinate along every eigenvector.
    pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self
    where
        StandardNormal: Distribution<T>,
    {
        let entries = (0..n.max(1))
            .map(|_| DualQuaternion::from_array(std::array::from_fn(|_| StandardNormal.sample(rng))))
            .collect();
        let v = Self { entries };
        let norm = v.norm();
        v.div_dual(&norm).unwrap_or(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[DualQuaternion<T>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<DualQuaternion<T>> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &DualQuaternion<T>> {
        self.entries.iter()
    }

    /// `x·a`.
    pub fn scale_right(&self, a: &DualQuaternion<T>) -> Self {
        Self { entries: self.entries.iter().map(|x| *x * *a).collect() }
    }

    pub fn scale_dual(&self, d: &DualNumber<T>) -> Self {
        Self { entries: self.entries.iter().map(|x| x.scale_dual(d)).collect() }
    }

    pub fn div_dual(&self, d: &DualNumber<T>) -> Result<Self> {
        Ok(self.scale_dual(&d.inverse()?))
    }

    /// `x*·y = Σ conj(x_j)·y_j`.
    pub fn inner(&self, other: &Self) -> Result<DualQuaternion<T>> {
        self.check_len(other.len())?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(DualQuaternion::zero(), |acc, (x, y)| acc + x.conj() * *y))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_len(other.len())?;
        Ok(Self { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| *a - *b).collect() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other.len())?;
        Ok(Self { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| *a + *b).collect() })
    }

    /// Dual-number norm.
    ///
    /// When every entry is nilpotent, `x = x'ε`, the norm is
    /// `sqrt(Σ|x'_j|²)·ε`; otherwise it is the dual-number square root of
    /// `Σ|x_j|²`.
    pub fn norm(&self) -> DualNumber<T> {
        if self.entries.iter().all(DualQuaternion::is_nilpotent) {
            let s: T = self.entries.iter().map(|x| x.du.norm_sq()).sum();
            return DualNumber::new(T::zero(), s.sqrt());
        }
        let s: DualNumber<T> = self
            .entries
            .iter()
            .map(|x| {
                let a = x.abs();
                a * a
            })
            .sum();
        // s.re > 0 here, so the square root is defined
        s.sqrt().unwrap_or_else(|_| DualNumber::from_real(s.re.max(T::zero()).sqrt()))
    }

    /// Euclidean norm of all `8n` real coordinates.
    pub fn coord_norm(&self) -> T {
        self.entries.iter().map(|x| x.re.norm_sq() + x.du.norm_sq()).sum::<T>().sqrt()
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got });
        }
        Ok(())
    }
}

/// Square dense matrix of dual quaternions, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DqMatrix<T> {
    n: usize,
    data: Vec<DualQuaternion<T>>,
}

impl<T: Real> DqMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![DualQuaternion::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, DualQuaternion::one());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> DualQuaternion<T>) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, data }
    }

    /// `g·g*`, entrywise `g_i·conj(g_j)`.
    pub fn outer(g: &DqVector<T>) -> Self {
        let e = g.entries();
        Self::from_fn(g.len(), |i, j| e[i] * e[j].conj())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> DualQuaternion<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: DualQuaternion<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    /// `(A + A*)/2`, Hermitian exactly.
    pub fn hermitian_part(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            let d = self.get(i, i);
            out.set(i, i, (d + d.conj()).scale(T::half()));
            for j in (i + 1)..self.n {
                let v = (self.get(i, j) + self.get(j, i).conj()).scale(T::half());
                out.set(i, j, v);
                out.set(j, i, v.conj());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| *a + *b).collect() })
    }

    pub fn scale(&self, t: T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a.scale(t)).collect() }
    }

    /// Largest coordinate of `A − A*`.
    pub fn hermitian_deviation(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in i..self.n {
                let d = self.get(i, j) - self.get(j, i).conj();
                for c in d.to_array() {
                    worst = worst.max(c.abs());
                }
            }
        }
        worst
    }

    pub fn max_abs_coord(&self) -> T {
        self.data.iter().flat_map(|x| x.to_array()).fold(T::zero(), |m, c| m.max(c.abs()))
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol * self.max_abs_coord().max(T::one())
    }

    pub fn mul_vec(&self, x: &DqVector<T>) -> Result<DqVector<T>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let xe = x.entries();
        let entries = self
            .data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(xe).fold(DualQuaternion::zero(), |acc, (a, v)| acc + *a * *v))
            .collect();
        Ok(DqVector { entries })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PowerIterationOptions<T> {
    /// Stop once the residual `‖A·v − v·λ‖` falls to this value.
    pub tol: T,
    /// Iteration cap; `None` means `10·n + 1000`.
    pub max_iters: Option<usize>,
}

impl<T: Real> Default for PowerIterationOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-10), max_iters: None }
    }
}

/// Snapshot of the iteration after the Rayleigh value for `v` is formed.
#[derive(Clone, Debug)]
pub struct PowerIterationState<T> {
    pub v: DqVector<T>,
    pub lambda: DualNumber<T>,
    pub k: usize,
    pub residual: T,
}

#[derive(Clone, Debug)]
pub struct PowerIterationResult<T> {
    pub eigvec: DqVector<T>,
    /// Dual-number eigenvalue (first coordinates of `rayleigh`).
    pub eigval: DualNumber<T>,
    /// The full Rayleigh quotient `v*·A·v`; its `i, j, k` parts vanish at convergence.
    pub rayleigh: DualQuaternion<T>,
    pub iterations: usize,
    pub residual: T,
    pub converged: bool,
    pub residual_history: Vec<T>,
}

/// Dual-quaternion power iteration:
///
/// ```text
/// y ← A·v,  λ ← v*·y,  v ← y / ‖y‖
/// ```
///
/// The residual `‖y − v·λ‖` is measured in the Euclidean norm of all real
/// coordinates, which bounds the standard part of the dual-number norm
/// and also tracks the dual coordinates. The returned eigenvector is the
/// iterate whose residual met the tolerance.
pub fn power_iteration<T: Real>(
    a: &DqMatrix<T>,
    v0: &DqVector<T>,
    opts: &PowerIterationOptions<T>,
) -> Result<PowerIterationResult<T>> {
    let n = a.n();
    if v0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v0.len() });
    }
    if !a.is_hermitian(T::TAU_NUM) {
        return Err(Error::NotHermitian { deviation: a.hermitian_deviation().as_f64() });
    }
    if v0.entries().iter().all(DualQuaternion::is_nilpotent) {
        return Err(Error::ZeroIterate);
    }
    let max_iters = opts.max_iters.unwrap_or(10 * n + 1000).max(1);

    let mut v = normalize(v0)?;
    let mut history = Vec::new();
    let mut last = None;
    for k in 0..max_iters {
        let y = a.mul_vec(&v)?;
        let rayleigh = v.inner(&y)?;
        let residual = y.sub(&v.scale_right(&rayleigh))?.coord_norm();
        history.push(residual);
        let state = PowerIterationState { v: v.clone(), lambda: rayleigh.dual_number_part(), k: k + 1, residual };
        if residual <= opts.tol {
            return Ok(finish(state, rayleigh, true, history));
        }
        v = normalize(&y)?;
        last = Some((state, rayleigh));
    }
    let (state, rayleigh) = last.expect("at least one iteration");
    Ok(finish(state, rayleigh, false, history))
}

fn normalize<T: Real>(y: &DqVector<T>) -> Result<DqVector<T>> {
    let norm = y.norm();
    if norm.re <= T::TAU_ZERO {
        return Err(Error::ZeroIterate);
    }
    y.div_dual(&norm)
}

fn finish<T: Real>(
    state: PowerIterationState<T>,
    rayleigh: DualQuaternion<T>,
    converged: bool,
    residual_history: Vec<T>,
) -> PowerIterationResult<T> {
    PowerIterationResult {
        eigvec: state.v,
        eigval: state.lambda,
        rayleigh,
        iterations: state.k,
        residual: state.residual,
        converged,
        residual_history,
    }
}
