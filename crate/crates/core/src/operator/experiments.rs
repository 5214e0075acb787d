//! Finite-dimensional experiments for the boundedness and compactness
//! dichotomies.

use rayon::prelude::*;
use serde::Serialize;

use super::kernel::schur_constant;
use super::matrix::{op_norm, NormEstimate, PowerOptions};
use super::{build_conjugated_from, hankel_apply_with};
use crate::dirichlet::{dirichlet_norm, test_function, test_function_len, SpaceParams};
use crate::error::{Error, Result};
use crate::measure::{moments, tail_mass, well_defined_check, MeasureSpec, WellDefinedCheck};

/// `start, 2·start, … ≤ max`.
pub fn doubling_dims(start: usize, max: usize) -> Vec<usize> {
    std::iter::successors(Some(start.max(1)), |&n| Some(n * 2))
        .take_while(|&n| n <= max)
        .collect()
}

/// Default row cuts for tail norms: N/128, N/64, …, N/8.
pub fn default_tail_cuts(dim: usize) -> Vec<usize> {
    let mut ms: Vec<usize> = [128, 64, 32, 16, 8]
        .iter()
        .map(|d| (dim / d).max(1))
        .filter(|&m| m < dim)
        .collect();
    ms.dedup();
    ms
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessOptions {
    pub dims: Vec<usize>,
    pub power: PowerOptions,
    /// Bounded when each of the last two per-doubling growth rates is below this.
    pub bounded_growth: f64,
    /// Unbounded when every growth rate in the second half of the run is at least this.
    pub unbounded_growth: f64,
}

impl Default for BoundednessOptions {
    fn default() -> Self {
        BoundednessOptions {
            dims: doubling_dims(64, 1024),
            power: PowerOptions::default(),
            bounded_growth: 0.02,
            unbounded_growth: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundednessVerdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormRow {
    pub dim: usize,
    pub norm: NormEstimate,
}

/// Relative growth between two dims, rescaled to one doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthStep {
    pub from: usize,
    pub to: usize,
    pub per_doubling: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub params: SpaceParams,
    pub measure_id: String,
    pub well_defined: WellDefinedCheck,
    pub rows: Vec<NormRow>,
    pub growth: Vec<GrowthStep>,
    pub verdict: BoundednessVerdict,
    /// B(γ−β/2, α/2).
    pub schur_constant: f64,
    /// sup_{n ≤ 2N} μ_n (n+2)^s at the largest N.
    pub moment_sup: f64,
    /// schur_constant × moment_sup.
    pub upper_bound_proxy: f64,
    /// Largest computed norm divided by the proxy.
    pub proxy_ratio: f64,
}

impl BoundednessReport {
    pub fn largest_norm(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.norm.value)
    }
}

pub fn boundedness_experiment(
    spec: &MeasureSpec,
    params: &SpaceParams,
    opts: &BoundednessOptions,
) -> Result<BoundednessReport> {
    let schur = schur_constant(params)?;
    if opts.dims.len() < 3 {
        return Err(Error::Parameter("boundedness run needs at least three dims".into()));
    }
    if opts.dims[0] == 0 || opts.dims.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter(format!(
            "dims must be positive and strictly increasing, got {:?}",
            opts.dims
        )));
    }
    let well_defined = well_defined_check(spec, params.alpha)?;
    if !well_defined.holds {
        return Err(Error::Parameter(format!(
            "moments decay like n^{:.3}, not fast enough for the operator to be defined on D_{}",
            well_defined.slope, params.alpha
        )));
    }
    let n_max = *opts.dims.last().unwrap();
    let mom = moments(spec, 2 * n_max + 1)?;
    let id = spec.id();

    let rows: Vec<NormRow> = opts
        .dims
        .iter()
        .map(|&dim| {
            let op = build_conjugated_from(&mom, params, dim, id.clone());
            NormRow {
                dim,
                norm: op_norm(&op.entries, opts.power),
            }
        })
        .collect();

    let growth: Vec<GrowthStep> = rows
        .windows(2)
        .map(|w| {
            let doublings = (w[1].dim as f64 / w[0].dim as f64).log2();
            GrowthStep {
                from: w[0].dim,
                to: w[1].dim,
                per_doubling: (w[1].norm.value / w[0].norm.value).powf(1.0 / doublings) - 1.0,
            }
        })
        .collect();

    let verdict = if rows.iter().any(|r| !r.norm.converged) {
        BoundednessVerdict::Inconclusive
    } else if growth[growth.len() - 2..].iter().all(|g| g.per_doubling < opts.bounded_growth) {
        BoundednessVerdict::Bounded
    } else if growth[growth.len() / 2..]
        .iter()
        .all(|g| g.per_doubling >= opts.unbounded_growth)
    {
        BoundednessVerdict::Unbounded
    } else {
        BoundednessVerdict::Inconclusive
    };

    let moment_sup = mom
        .values
        .iter()
        .enumerate()
        .map(|(n, m)| m * (n as f64 + 2.0).powf(params.s))
        .fold(0.0, f64::max);
    let upper_bound_proxy = schur * moment_sup;
    let largest = rows.last().unwrap().norm.value;
    Ok(BoundednessReport {
        params: *params,
        measure_id: id,
        well_defined,
        rows,
        growth,
        verdict,
        schur_constant: schur,
        moment_sup,
        upper_bound_proxy,
        proxy_ratio: largest / upper_bound_proxy,
    })
}

/// One point of the extremal-function lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundRecord {
    pub t: f64,
    /// Coefficients kept for f_t (and for H f_t).
    pub terms: usize,
    /// ‖f_t‖_{D_α}
    pub f_norm: f64,
    /// ‖H_{μ,γ} f_t‖_{D_β}
    pub image_norm: f64,
    /// μ([t,1)) / (1−t)^s
    pub carleson_quotient: f64,
    /// carleson_quotient / image_norm
    pub ratio: f64,
}

/// For each t: the truncated image H f_t (same length as f_t), its D_β norm,
/// and the Carleson quotient at t.
pub fn lower_bound_chain(spec: &MeasureSpec, params: &SpaceParams, ts: &[f64]) -> Result<Vec<LowerBoundRecord>> {
    if ts.is_empty() {
        return Err(Error::Parameter("lower bound chain needs at least one t".into()));
    }
    let lens = ts.iter().map(|&t| test_function_len(t)).collect::<Result<Vec<_>>>()?;
    let longest = *lens.iter().max().unwrap();
    let mom = moments(spec, 2 * longest - 1)?;
    ts.iter()
        .map(|&t| {
            let f = test_function(t, params.alpha)?;
            let image = hankel_apply_with(&mom, params.gamma, &f, f.len())?;
            let image_norm = dirichlet_norm(&image, params.beta);
            let carleson_quotient = tail_mass(spec, t)? / (1.0 - t).powf(params.s);
            let ratio = if carleson_quotient == 0.0 {
                0.0
            } else {
                carleson_quotient / image_norm
            };
            Ok(LowerBoundRecord {
                t,
                terms: f.len(),
                f_norm: dirichlet_norm(&f, params.alpha),
                image_norm,
                carleson_quotient,
                ratio,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessOptions {
    pub dim: usize,
    /// Row cuts m; the tail S − S_m keeps rows m+1..N.
    pub ms: Vec<usize>,
    pub power: PowerOptions,
    /// Compact-consistent when the last tail norm is below this fraction of ‖S‖.
    pub compact_fraction: f64,
    /// Not-compact-consistent when every tail norm is at least this fraction.
    pub plateau_fraction: f64,
    /// Relative slack for the monotone-decrease check.
    pub monotone_slack: f64,
}

impl CompactnessOptions {
    pub fn new(dim: usize) -> Self {
        CompactnessOptions {
            dim,
            ms: default_tail_cuts(dim),
            power: PowerOptions::default(),
            compact_fraction: 0.1,
            plateau_fraction: 0.5,
            monotone_slack: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompactnessVerdict {
    CompactConsistent,
    NotCompactConsistent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailNorm {
    pub m: usize,
    pub norm: NormEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessReport {
    pub params: SpaceParams,
    pub measure_id: String,
    pub dim: usize,
    pub full_norm: NormEstimate,
    pub tail_norms: Vec<TailNorm>,
    pub verdict: CompactnessVerdict,
}

impl CompactnessReport {
    /// Tail norms divided by the full norm.
    pub fn relative_tails(&self) -> Vec<(usize, f64)> {
        self.tail_norms
            .iter()
            .map(|t| (t.m, t.norm.value / self.full_norm.value))
            .collect()
    }
}

pub fn compactness_experiment(
    spec: &MeasureSpec,
    params: &SpaceParams,
    opts: &CompactnessOptions,
) -> Result<CompactnessReport> {
    let dim = opts.dim;
    if opts.ms.is_empty() {
        return Err(Error::Parameter("compactness run needs at least one cut m".into()));
    }
    if opts.ms.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter(format!("cuts must be strictly increasing, got {:?}", opts.ms)));
    }
    if let Some(&m) = opts.ms.iter().find(|&&m| m + 1 >= dim) {
        return Err(Error::Parameter(format!("cut m = {m} leaves no rows below N = {dim}")));
    }
    let mom = moments(spec, 2 * dim - 1)?;
    let op = build_conjugated_from(&mom, params, dim, spec.id());
    let full_norm = op_norm(&op.entries, opts.power);
    let tail_norms: Vec<TailNorm> = opts
        .ms
        .par_iter()
        .map(|&m| TailNorm {
            m,
            norm: op_norm(&op.entries.rows_from(m + 1), opts.power),
        })
        .collect();

    let full = full_norm.value;
    let all_converged = full_norm.converged && tail_norms.iter().all(|t| t.norm.converged);
    let monotone = tail_norms
        .windows(2)
        .all(|w| w[1].norm.value <= w[0].norm.value * (1.0 + opts.monotone_slack));
    let last = tail_norms.last().unwrap().norm.value;
    let verdict = if !all_converged {
        CompactnessVerdict::Inconclusive
    } else if monotone && last < opts.compact_fraction * full {
        CompactnessVerdict::CompactConsistent
    } else if tail_norms.iter().all(|t| t.norm.value >= opts.plateau_fraction * full) {
        CompactnessVerdict::NotCompactConsistent
    } else {
        CompactnessVerdict::Inconclusive
    };
    Ok(CompactnessReport {
        params: *params,
        measure_id: op.measure_id,
        dim,
        full_norm,
        tail_norms,
        verdict,
    })
}
