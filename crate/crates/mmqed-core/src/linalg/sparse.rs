//! Sparse symmetric storage: sorted upper-triangle coordinates plus a
//! compressed-row view of the full matrix built once at assembly time.

use super::{check_finite, SymOp};
use crate::error::{Error, Result};

/// Accumulates upper-triangle entries before finalizing a [`SparseSymmetric`].
///
/// Entries may be pushed in any order; `(i, j)` with `i > j` is stored as
/// `(j, i)`. Pushing the same coordinate twice is rejected at `finish`, which
/// keeps assembly code honest about double counting.
#[derive(Debug, Default)]
pub struct SparseBuilder {
    order: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl SparseBuilder {
    pub fn new(order: usize) -> Self {
        assert!(order < u32::MAX as usize, "order exceeds index range");
        Self {
            order,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(order: usize, cap: usize) -> Self {
        let mut b = Self::new(order);
        b.entries.reserve(cap);
        b
    }

    /// Stores one upper-triangle entry; zero values are skipped.
    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.order && j < self.order);
        if v == 0.0 {
            return;
        }
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.entries.push((a as u32, b as u32, v));
    }

    pub fn finish(mut self) -> Result<SparseSymmetric> {
        self.entries.sort_unstable_by_key(|&(i, j, _)| (i, j));
        for w in self.entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::InvalidInput(format!(
                    "duplicate sparse entry at ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        let values: Vec<f64> = self.entries.iter().map(|e| e.2).collect();
        check_finite(&values, "sparse matrix entries")?;
        Ok(SparseSymmetric::from_sorted_upper(self.order, self.entries))
    }
}

/// Real symmetric sparse matrix.
///
/// The canonical payload is the sorted upper triangle in coordinate form;
/// `row_ptr`/`col_idx`/`csr_values` describe the symmetric completion and
/// exist purely to make `apply` a cache-friendly row sweep.
#[derive(Debug, Clone)]
pub struct SparseSymmetric {
    order: usize,
    upper: Vec<(u32, u32, f64)>,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    csr_values: Vec<f64>,
}

impl SparseSymmetric {
    fn from_sorted_upper(order: usize, upper: Vec<(u32, u32, f64)>) -> Self {
        let mut counts = vec![0usize; order + 1];
        for &(i, j, _) in &upper {
            counts[i as usize + 1] += 1;
            if i != j {
                counts[j as usize + 1] += 1;
            }
        }
        for r in 0..order {
            counts[r + 1] += counts[r];
        }
        let nnz = counts[order];
        let mut col_idx = vec![0u32; nnz];
        let mut csr_values = vec![0.0; nnz];
        let mut cursor = counts.clone();
        for &(i, j, v) in &upper {
            let p = cursor[i as usize];
            col_idx[p] = j;
            csr_values[p] = v;
            cursor[i as usize] += 1;
            if i != j {
                let q = cursor[j as usize];
                col_idx[q] = i;
                csr_values[q] = v;
                cursor[j as usize] += 1;
            }
        }
        Self {
            order,
            upper,
            row_ptr: counts,
            col_idx,
            csr_values,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Stored upper-triangle entries, sorted by `(row, col)`.
    pub fn upper_triangle(&self) -> &[(u32, u32, f64)] {
        &self.upper
    }

    /// Number of stored entries in the symmetric completion.
    pub fn nnz(&self) -> usize {
        self.csr_values.len()
    }

    /// Count of off-diagonal stored entries (symmetric completion).
    pub fn off_diagonal_nnz(&self) -> usize {
        self.upper
            .iter()
            .filter(|&&(i, j, _)| i != j)
            .count()
            * 2
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.order];
        for &(i, j, v) in &self.upper {
            if i == j {
                d[i as usize] = v;
            }
        }
        d
    }

    /// Densifies; intended for orders small enough to solve in full.
    pub fn to_dense(&self) -> super::SymmetricDense {
        let mut m = super::SymmetricDense::zeros(self.order);
        for &(i, j, v) in &self.upper {
            m.set_sym(i as usize, j as usize, v);
        }
        m
    }
}

impl SymOp for SparseSymmetric {
    fn order(&self) -> usize {
        self.order
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.order);
        assert_eq!(y.len(), self.order);
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            let mut s = 0.0;
            for p in lo..hi {
                s += self.csr_values[p] * x[self.col_idx[p] as usize];
            }
            *yi = s;
        }
    }
}
