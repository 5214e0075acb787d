//! Dense row-major matrices and largest-singular-value estimation.

use rayon::prelude::*;
use serde::Serialize;

/// Rows per block when accumulating Aᵀy; fixed so results do not depend on
/// the thread count.
const TRANSPOSE_BLOCK: usize = 64;

/// Something that can apply A and Aᵀ.
pub trait LinearMap: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    fn apply_transpose(&self, y: &[f64]) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_fn<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let mut data = vec![0.0; rows * cols];
        if cols > 0 {
            data.par_chunks_mut(cols).enumerate().for_each(|(n, row)| {
                for (k, v) in row.iter_mut().enumerate() {
                    *v = f(n, k);
                }
            });
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn get(&self, n: usize, k: usize) -> f64 {
        self.data[n * self.cols + k]
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.data[n * self.cols..(n + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Rows `start..` as a view.
    pub fn rows_from(&self, start: usize) -> RowBlock<'_> {
        RowBlock {
            matrix: self,
            start: start.min(self.rows),
        }
    }
}

impl LinearMap for DenseMatrix {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows_from(0).apply(x)
    }

    fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        self.rows_from(0).apply_transpose(y)
    }
}

/// The trailing rows `start..` of a matrix. Its singular values equal those
/// of the full matrix with rows `0..start` zeroed.
#[derive(Debug, Clone, Copy)]
pub struct RowBlock<'a> {
    matrix: &'a DenseMatrix,
    start: usize,
}

impl LinearMap for RowBlock<'_> {
    fn nrows(&self) -> usize {
        self.matrix.rows - self.start
    }

    fn ncols(&self) -> usize {
        self.matrix.cols
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.matrix.cols);
        (self.start..self.matrix.rows)
            .into_par_iter()
            .map(|n| dot(self.matrix.row(n), x))
            .collect()
    }

    fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.nrows());
        let cols = self.matrix.cols;
        let block_rows = &self.matrix.data[self.start * cols..];
        let partials: Vec<Vec<f64>> = block_rows
            .par_chunks(TRANSPOSE_BLOCK * cols.max(1))
            .zip(y.par_chunks(TRANSPOSE_BLOCK))
            .map(|(rows, ys)| {
                let mut acc = vec![0.0; cols];
                for (row, &yn) in rows.chunks(cols).zip(ys) {
                    if yn != 0.0 {
                        for (a, &v) in acc.iter_mut().zip(row) {
                            *a += v * yn;
                        }
                    }
                }
                acc
            })
            .collect();
        let mut out = vec![0.0; cols];
        for p in partials {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Stopping rule for power iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: 1e-8,
            max_iter: 5000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    /// Relative change of the estimate over the last iteration.
    pub residual: f64,
    pub dim: usize,
    /// False when `max_iter` ran out before `residual <= tol`.
    pub converged: bool,
}

/// Largest singular value by power iteration on AᵀA, started from the
/// normalized all-ones vector.
pub fn op_norm<M: LinearMap + ?Sized>(a: &M, opts: PowerOptions) -> NormEstimate {
    let n = a.ncols();
    let dim = a.nrows().max(n);
    if n == 0 || a.nrows() == 0 {
        return NormEstimate {
            value: 0.0,
            iterations: 0,
            residual: 0.0,
            dim,
            converged: true,
        };
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut sigma = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let y = a.apply(&x);
        let next = norm2(&y);
        if next == 0.0 {
            return NormEstimate {
                value: 0.0,
                iterations: it,
                residual: 0.0,
                dim,
                converged: true,
            };
        }
        residual = (next - sigma).abs() / next;
        sigma = next;
        if residual <= opts.tol {
            return NormEstimate {
                value: sigma,
                iterations: it,
                residual,
                dim,
                converged: true,
            };
        }
        let z = a.apply_transpose(&y);
        let zn = norm2(&z);
        x = z.into_iter().map(|v| v / zn).collect();
    }
    NormEstimate {
        value: sigma,
        iterations: opts.max_iter,
        residual,
        dim,
        converged: false,
    }
}
