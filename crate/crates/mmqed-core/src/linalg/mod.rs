//! Symmetric eigensolver kernel shared by every module in the crate.
//!
//! Two storage formats cover all use cases here: [`SymmetricDense`] for
//! matter grids and projected subspace problems that are solved in full, and
//! [`SparseSymmetric`] for stencil and coupled light-matter operators that
//! only ever appear behind a matvec. Both are strictly real symmetric; the
//! crate has no complex Hamiltonians (velocity-gauge assemblies are rotated
//! to a real representation before they get here).

mod dense;
mod lanczos;
mod secular;
mod sparse;

pub use dense::dense_sym_eig;
pub use lanczos::{krylov_lowest, krylov_lowest_opts, KrylovOptions};
pub use secular::{rank_one_update_eig, rank_one_update_eig_detailed, RankOneEig};
pub use sparse::{SparseBuilder, SparseSymmetric};

use crate::error::{Error, Result};

/// Dense symmetric matrix in row-major storage.
///
/// Symmetry is exact by construction: every constructor writes both `(i, j)`
/// and `(j, i)` from the same value, so `entry(i, j) == entry(j, i)` holds
/// bitwise.
#[derive(Debug, Clone)]
pub struct SymmetricDense {
    order: usize,
    entries: Vec<f64>,
}

impl SymmetricDense {
    /// Zero matrix of the given order.
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![0.0; order * order],
        }
    }

    /// Builds the matrix by evaluating `f(i, j)` on the upper triangle and
    /// mirroring it.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in i..order {
                let v = f(i, j);
                m.entries[i * order + j] = v;
                m.entries[j * order + i] = v;
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    /// Sets `(i, j)` and `(j, i)` to the same value.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.order + j] = v;
        self.entries[j * self.order + i] = v;
    }

    /// Adds `v` to `(i, j)` and, off the diagonal, to `(j, i)` as well.
    pub fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.order + j] += v;
        if i != j {
            self.entries[j * self.order + i] += v;
        }
    }

    /// Row-major backing slice (length `order * order`).
    pub fn raw(&self) -> &[f64] {
        &self.entries
    }

    pub(crate) fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.order);
        assert_eq!(y.len(), self.order);
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.entries[i * self.order..(i + 1) * self.order];
            *yi = dot(row, x);
        }
    }
}

/// Eigenpairs in ascending eigenvalue order.
///
/// `vectors[i]` is the unit-norm eigenvector belonging to `values[i]`, and
/// `residuals[i]` is the 2-norm of `H v - lambda v` measured on the returned
/// pair (one extra matvec per pair, never an internal estimate).
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

impl EigenResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Anything that can act as a real symmetric operator through a matvec.
pub trait SymOp: Sync {
    fn order(&self) -> usize;
    /// `y = A x`. Must be deterministic for identical `x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl SymOp for SymmetricDense {
    fn order(&self) -> usize {
        self.order
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        SymmetricDense::apply(self, x, y)
    }
}

/// Matrix-free operator wrapping a closure.
pub struct MatrixFree<F: Fn(&[f64], &mut [f64]) + Sync> {
    order: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64]) + Sync> MatrixFree<F> {
    pub fn new(order: usize, f: F) -> Self {
        Self { order, f }
    }
}

impl<F: Fn(&[f64], &mut [f64]) + Sync> SymOp for MatrixFree<F> {
    fn order(&self) -> usize {
        self.order
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}

// Sequential vector kernels. Loop order is fixed, so results are bitwise
// reproducible regardless of the rayon pool that may be driving outer sweeps.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

/// Neumaier-compensated sum; used where plain accumulation would cost digits.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn check_finite(values: &[f64], context: &'static str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { context })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_dense_mirrors_entries() {
        let m = SymmetricDense::from_fn(4, |i, j| (i + 2 * j) as f64);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.entry(i, j), m.entry(j, i));
            }
        }
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let s = compensated_sum([1.0e16, 1.0, -1.0e16]);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn dense_apply_matches_manual() {
        let m = SymmetricDense::from_fn(3, |i, j| if i == j { 2.0 } else { -1.0 });
        let x = [1.0, 0.0, -1.0];
        let mut y = [0.0; 3];
        m.apply(&x, &mut y);
        assert_eq!(y, [3.0, 0.0, -3.0]);
    }
}
