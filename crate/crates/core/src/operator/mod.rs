//! Finite sections of the generalized Hilbert operator
//!
//! ```text
//! H_{μ,γ}(f)(z) = Σ_n [Γ(n+γ)/(n!Γ(γ))] (Σ_k μ_{n+k} a_k) z^n
//! ```
//!
//! and of its conjugation S_{μ,γ} = V_β ∘ H_{μ,γ} ∘ V_α^{-1}, which acts on
//! H² and whose (n, k) entry is
//! (n+1)^{(1−β)/2} (k+1)^{(α−1)/2} μ_{n+k} Γ(n+γ)/(n!Γ(γ)).

mod experiments;
mod kernel;
mod matrix;

pub use experiments::{
    boundedness_experiment, compactness_experiment, default_tail_cuts, doubling_dims,
    lower_bound_chain, BoundednessOptions, BoundednessReport, BoundednessVerdict,
    CompactnessOptions, CompactnessReport, CompactnessVerdict, GrowthStep, LowerBoundRecord,
    NormRow, TailNorm,
};
pub use kernel::{
    kernel, kernel_constant, kernel_inequality_test, kernel_ratio, schur_constant,
    KernelConstant, KernelTestResult,
};
pub use matrix::{op_norm, DenseMatrix, LinearMap, NormEstimate, PowerOptions, RowBlock};

use rayon::prelude::*;
use serde::Serialize;

use crate::dirichlet::{CoeffSeq, SpaceParams};
use crate::error::{Error, Result};
use crate::measure::{moments, MeasureSpec, MomentSequence};
use crate::specfun::{gamma_ratio, gamma_ratios};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    RawH,
    ConjugatedS,
}

/// N×N section of H_{μ,γ} (raw) or S_{μ,γ} (conjugated).
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    pub dim: usize,
    pub entries: DenseMatrix,
    pub kind: OperatorKind,
    pub gamma: f64,
    /// Present for conjugated operators.
    pub params: Option<SpaceParams>,
    pub measure_id: String,
    /// Set when 2γ−β−1 = α−1, i.e. the row and column exponents of the
    /// model kernel coincide.
    pub symmetric_kernel: bool,
}

impl TruncatedOperator {
    pub fn norm(&self, opts: PowerOptions) -> NormEstimate {
        op_norm(&self.entries, opts)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    gamma_ratio(0, gamma).map(|_| ())
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("operator dimension must be at least 1".into()));
    }
    Ok(())
}

/// Raw section with entries gamma_ratio(n, γ)·μ_{n+k}.
pub fn build_raw(spec: &MeasureSpec, gamma: f64, n: usize) -> Result<TruncatedOperator> {
    check_gamma(gamma)?;
    check_dim(n)?;
    let mom = moments(spec, 2 * n - 1)?;
    let rows = gamma_ratios(n, gamma);
    let entries = DenseMatrix::from_fn(n, n, |i, j| rows[i] * mom.hankel(i, j));
    Ok(TruncatedOperator {
        dim: n,
        entries,
        kind: OperatorKind::RawH,
        gamma,
        params: None,
        measure_id: spec.id(),
        symmetric_kernel: gamma == 1.0,
    })
}

/// Row and column weights of S_{μ,γ}.
pub(crate) fn conjugation_weights(params: &SpaceParams, n: usize) -> (Vec<f64>, Vec<f64>) {
    let row_exp = (1.0 - params.beta) / 2.0;
    let col_exp = (params.alpha - 1.0) / 2.0;
    let rows = gamma_ratios(n, params.gamma)
        .into_iter()
        .enumerate()
        .map(|(i, g)| (i as f64 + 1.0).powf(row_exp) * g)
        .collect();
    let cols = (0..n).map(|k| (k as f64 + 1.0).powf(col_exp)).collect();
    (rows, cols)
}

pub fn build_conjugated(spec: &MeasureSpec, params: &SpaceParams, n: usize) -> Result<TruncatedOperator> {
    check_dim(n)?;
    let mom = moments(spec, 2 * n - 1)?;
    Ok(build_conjugated_from(&mom, params, n, spec.id()))
}

pub(crate) fn build_conjugated_from(
    mom: &MomentSequence,
    params: &SpaceParams,
    n: usize,
    measure_id: String,
) -> TruncatedOperator {
    let (rows, cols) = conjugation_weights(params, n);
    let entries = DenseMatrix::from_fn(n, n, |i, j| rows[i] * cols[j] * mom.hankel(i, j));
    let symmetric_kernel =
        (2.0 * params.gamma - params.beta - 1.0 - (params.alpha - 1.0)).abs() < 1e-12;
    TruncatedOperator {
        dim: n,
        entries,
        kind: OperatorKind::ConjugatedS,
        gamma: params.gamma,
        params: Some(*params),
        measure_id,
        symmetric_kernel,
    }
}

/// b_n = gamma_ratio(n, γ)·Σ_{k<len(f)} μ_{n+k} a_k for n < n_out.
pub fn hankel_apply(spec: &MeasureSpec, gamma: f64, f: &CoeffSeq, n_out: usize) -> Result<CoeffSeq> {
    check_gamma(gamma)?;
    let needed = (n_out + f.len()).saturating_sub(1).max(1);
    let mom = moments(spec, needed)?;
    hankel_apply_with(&mom, gamma, f, n_out)
}

pub fn hankel_apply_with(mom: &MomentSequence, gamma: f64, f: &CoeffSeq, n_out: usize) -> Result<CoeffSeq> {
    check_gamma(gamma)?;
    if n_out == 0 || f.is_empty() {
        return Ok(CoeffSeq::zeros(n_out));
    }
    let needed = n_out + f.len() - 1;
    if mom.len() < needed {
        return Err(Error::Parameter(format!(
            "hankel_apply needs {needed} moments, only {} supplied",
            mom.len()
        )));
    }
    let a = f.coeffs();
    let weights = gamma_ratios(n_out, gamma);
    let out = (0..n_out)
        .into_par_iter()
        .map(|n| {
            let window = &mom.values[n..n + a.len()];
            weights[n] * window.iter().zip(a).map(|(m, x)| m * x).sum::<f64>()
        })
        .collect();
    Ok(CoeffSeq::from_vec_unchecked(out))
}
