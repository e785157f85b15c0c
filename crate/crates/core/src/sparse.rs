//! Compressed sparse constraint matrix and the kernels the solver needs.
//!
//! The matrix is stored twice, once row-compressed and once
//! column-compressed, so that both `K x` and `Kᵀ y` are single O(nnz)
//! sweeps with no scatter.

use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::linalg::norm2;

/// Sparse matrix with mirrored CSR and CSC storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    num_rows: usize,
    num_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    row_vals: Vec<f64>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    col_vals: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

thread_local! {
    static COUNTERS: Cell<SpmvCounters> = const { Cell::new(SpmvCounters { multiplies: 0, transpose_multiplies: 0, flops: 0 }) };
}

/// Per-thread tally of sparse products, independent of any solver ledger.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SpmvCounters {
    pub multiplies: u64,
    pub transpose_multiplies: u64,
    /// Multiply-add count: two per stored entry touched.
    pub flops: u64,
}

pub fn spmv_counters() -> SpmvCounters {
    COUNTERS.with(|c| c.get())
}

pub fn reset_spmv_counters() {
    COUNTERS.with(|c| c.set(SpmvCounters::default()));
}

fn record(transpose: bool, nnz: usize) {
    COUNTERS.with(|c| {
        let mut v = c.get();
        if transpose {
            v.transpose_multiplies += 1;
        } else {
            v.multiplies += 1;
        }
        v.flops += 2 * nnz as u64;
        c.set(v);
    });
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets. Duplicate
    /// coordinates are summed; entries that end up exactly zero are dropped.
    pub fn from_triplets(
        num_rows: usize,
        num_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (k, (r, c, v)) in triplets.into_iter().enumerate() {
            if r >= num_rows || c >= num_cols {
                return Err(Error::IndexOutOfRange { row: r, col: c, rows: num_rows, cols: num_cols });
            }
            if !v.is_finite() {
                return Err(Error::NonFiniteData { context: "matrix entry", index: k });
            }
            entries.push((r, c, v));
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2 != 0.0);
        Ok(Self::from_sorted_unique(num_rows, num_cols, &merged))
    }

    /// Dense row-major input; zeros are not stored.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let num_cols = rows.first().map_or(0, Vec::len);
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            check_len("dense row", num_cols, row.len())?;
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(rows.len(), num_cols, triplets)
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        Self::from_sorted_unique(n, n, &t)
    }

    pub fn zeros(num_rows: usize, num_cols: usize) -> Self {
        Self::from_sorted_unique(num_rows, num_cols, &[])
    }

    // `entries` must be sorted by (row, col) with no duplicates or zeros.
    fn from_sorted_unique(num_rows: usize, num_cols: usize, entries: &[(usize, usize, f64)]) -> Self {
        let nnz = entries.len();
        let mut row_ptr = vec![0usize; num_rows + 1];
        let mut col_idx = Vec::with_capacity(nnz);
        let mut row_vals = Vec::with_capacity(nnz);
        let mut col_counts = vec![0usize; num_cols + 1];
        for &(r, c, v) in entries {
            row_ptr[r + 1] += 1;
            col_counts[c + 1] += 1;
            col_idx.push(c);
            row_vals.push(v);
        }
        for i in 0..num_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        for j in 0..num_cols {
            col_counts[j + 1] += col_counts[j];
        }
        let col_ptr = col_counts.clone();
        let mut next = col_counts;
        let mut row_idx = vec![0usize; nnz];
        let mut col_vals = vec![0.0; nnz];
        // Row-major traversal keeps row indices sorted within each column.
        for &(r, c, v) in entries {
            let slot = next[c];
            row_idx[slot] = r;
            col_vals[slot] = v;
            next[c] += 1;
        }
        Self { num_rows, num_cols, row_ptr, col_idx, row_vals, col_ptr, row_idx, col_vals }
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn nnz(&self) -> usize {
        self.row_vals.len()
    }

    /// Entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.row_vals[span].iter().copied())
    }

    /// Entries of column `c` as `(row, value)`.
    pub fn col(&self, c: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[span.clone()].iter().copied().zip(self.col_vals[span].iter().copied())
    }

    pub fn row_nnz(&self, r: usize) -> usize {
        self.row_ptr[r + 1] - self.row_ptr[r]
    }

    pub fn col_nnz(&self, c: usize) -> usize {
        self.col_ptr[c + 1] - self.col_ptr[c]
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.num_cols]; self.num_rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    pub fn multiply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("multiply", self.num_cols, x.len())?;
        let mut out = vec![0.0; self.num_rows];
        self.multiply_into(x, &mut out);
        Ok(out)
    }

    pub fn multiply_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("multiply_transpose", self.num_rows, y.len())?;
        let mut out = vec![0.0; self.num_cols];
        self.multiply_transpose_into(y, &mut out);
        Ok(out)
    }

    /// `out = K x`. Panics on dimension mismatch.
    pub fn multiply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.num_cols);
        assert_eq!(out.len(), self.num_rows);
        record(false, self.nnz());
        for (r, o) in out.iter_mut().enumerate() {
            let span = self.row_ptr[r]..self.row_ptr[r + 1];
            *o = self.col_idx[span.clone()].iter().zip(&self.row_vals[span]).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    /// `out = Kᵀ y`. Panics on dimension mismatch.
    pub fn multiply_transpose_into(&self, y: &[f64], out: &mut [f64]) {
        assert_eq!(y.len(), self.num_rows);
        assert_eq!(out.len(), self.num_cols);
        record(true, self.nnz());
        for (c, o) in out.iter_mut().enumerate() {
            let span = self.col_ptr[c]..self.col_ptr[c + 1];
            *o = self.row_idx[span.clone()].iter().zip(&self.col_vals[span]).map(|(&r, &v)| v * y[r]).sum();
        }
    }

    pub fn max_abs_entry(&self) -> Result<f64> {
        if self.nnz() == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(self.row_vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
    }

    /// ℓ_p norm of every row or column. `p = 0` counts stored entries.
    pub fn axis_norms(&self, axis: Axis, p: f64) -> Result<Vec<f64>> {
        let norm: fn(&mut dyn Iterator<Item = f64>) -> f64 = if p == 1.0 {
            |it| it.map(f64::abs).sum()
        } else if p == 2.0 {
            |it| it.map(|v| v * v).sum::<f64>().sqrt()
        } else if p == f64::INFINITY {
            |it| it.fold(0.0, |m, v| m.max(v.abs()))
        } else if p == 0.0 {
            |it| it.count() as f64
        } else {
            return Err(Error::UnsupportedNorm(p));
        };
        let out = match axis {
            Axis::Rows => (0..self.num_rows).map(|r| norm(&mut self.row(r).map(|(_, v)| v))).collect(),
            Axis::Cols => (0..self.num_cols).map(|c| norm(&mut self.col(c).map(|(_, v)| v))).collect(),
        };
        Ok(out)
    }

    /// Returns `diag(row_scale) · K · diag(col_scale)`.
    pub fn scaled(&self, row_scale: &[f64], col_scale: &[f64]) -> Result<Self> {
        check_len("row scale", self.num_rows, row_scale.len())?;
        check_len("col scale", self.num_cols, col_scale.len())?;
        let mut out = self.clone();
        for r in 0..self.num_rows {
            for k in out.row_ptr[r]..out.row_ptr[r + 1] {
                out.row_vals[k] *= row_scale[r] * col_scale[out.col_idx[k]];
            }
        }
        for c in 0..self.num_cols {
            for k in out.col_ptr[c]..out.col_ptr[c + 1] {
                out.col_vals[k] *= row_scale[out.row_idx[k]] * col_scale[c];
            }
        }
        Ok(out)
    }

    /// Submatrix on the given (sorted, distinct) row and column index sets.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.num_cols];
        for (new, &old) in cols.iter().enumerate() {
            col_map[old] = new;
        }
        let mut entries = Vec::new();
        for (new_r, &old_r) in rows.iter().enumerate() {
            for (c, v) in self.row(old_r) {
                if col_map[c] != usize::MAX {
                    entries.push((new_r, col_map[c], v));
                }
            }
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Self::from_sorted_unique(rows.len(), cols.len(), &entries)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        check_len("vstack columns", self.num_cols, other.num_cols)?;
        let offset = self.num_rows;
        let entries: Vec<_> = self.triplets().chain(other.triplets().map(|(r, c, v)| (r + offset, c, v))).collect();
        Ok(Self::from_sorted_unique(self.num_rows + other.num_rows, self.num_cols, &entries))
    }
}

/// Settings for power iteration on `KᵀK`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub relative_tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self { relative_tol: 1e-4, max_iterations: 1000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralNormEstimate {
    pub value: f64,
    /// Each iteration costs one `K` and one `Kᵀ` product.
    pub iterations: usize,
}

impl PowerIteration {
    pub fn run(&self, k: &SparseMatrix) -> Result<SpectralNormEstimate> {
        if k.nnz() == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut v: Vec<f64> = (0..k.num_cols()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm2(&v);
        v.iter_mut().for_each(|e| *e /= n);

        let mut kv = vec![0.0; k.num_rows()];
        let mut ktkv = vec![0.0; k.num_cols()];
        let mut estimate = 0.0;
        let mut iterations = 0;
        while iterations < self.max_iterations {
            k.multiply_into(&v, &mut kv);
            k.multiply_transpose_into(&kv, &mut ktkv);
            iterations += 1;
            // ‖Kv‖ for unit v is the square root of the Rayleigh quotient of KᵀK.
            let next = norm2(&kv);
            let converged = (next - estimate).abs() <= self.relative_tol * next;
            estimate = next;
            let len = norm2(&ktkv);
            if converged || len == 0.0 {
                break;
            }
            for (vi, wi) in v.iter_mut().zip(&ktkv) {
                *vi = wi / len;
            }
        }
        Ok(SpectralNormEstimate { value: estimate, iterations })
    }
}

pub fn estimate_spectral_norm(k: &SparseMatrix, relative_tol: f64, max_iterations: usize, seed: u64) -> Result<f64> {
    PowerIteration { relative_tol, max_iterations, seed }.run(k).map(|e| e.value)
}
