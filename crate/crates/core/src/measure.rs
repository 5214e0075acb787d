//! Finite positive Borel measures on [0, 1): moments, tail masses and
//! numeric s-Carleson diagnostics.
//!
//! A measure is a sum of three kinds of components:
//!
//! * atoms `w·δ_b`,
//! * Beta-type densities `K·t^a·(1−t)^{c−1} dt`,
//! * one optional tabulated density, sampled on the uniform grid
//!   `t_i = i/(grid_n−1)` and interpolated linearly between nodes.
//!
//! JSON schema (all keys except `tabulated` may be omitted when empty):
//!
//! ```json
//! {
//!   "atoms": [{"b": 0.5, "w": 1.0}],
//!   "beta_densities": [{"K": 1.0, "a": 0.0, "c": 1.5}],
//!   "tabulated": {"values": [1.0, 0.5, 0.0], "grid_n": 3}
//! }
//! ```

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::specfun::log_beta_unchecked;

/// Default upper bound on the number of cached moments.
pub const DEFAULT_MOMENT_CAP: usize = 2_000_000;

const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub b: f64,
    pub w: f64,
}

/// Density `K·t^a·(1−t)^{c−1}` on [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaDensity {
    #[serde(rename = "K")]
    pub k: f64,
    pub a: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedDensity {
    pub values: Vec<f64>,
    pub grid_n: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default)]
    pub beta_densities: Vec<BetaDensity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tabulated: Option<TabulatedDensity>,
}

impl MeasureSpec {
    /// Lebesgue measure dt on [0, 1).
    pub fn lebesgue() -> Self {
        Self::power_density(1.0)
    }

    /// Point mass `w` at `b`.
    pub fn atom(b: f64, w: f64) -> Self {
        MeasureSpec {
            atoms: vec![Atom { b, w }],
            ..Default::default()
        }
    }

    /// `(1−t)^{c−1} dt`, whose tail is exactly `(1−t)^c / c`.
    pub fn power_density(c: f64) -> Self {
        Self::beta_density(1.0, 0.0, c)
    }

    pub fn beta_density(k: f64, a: f64, c: f64) -> Self {
        MeasureSpec {
            beta_densities: vec![BetaDensity { k, a, c }],
            ..Default::default()
        }
    }

    pub fn tabulated(values: Vec<f64>) -> Self {
        let grid_n = values.len();
        MeasureSpec {
            tabulated: Some(TabulatedDensity { values, grid_n }),
            ..Default::default()
        }
    }

    /// Sum of two measures.
    pub fn plus(mut self, other: &MeasureSpec) -> Result<Self> {
        self.atoms.extend_from_slice(&other.atoms);
        self.beta_densities.extend_from_slice(&other.beta_densities);
        match (&self.tabulated, &other.tabulated) {
            (_, None) => {}
            (None, Some(t)) => self.tabulated = Some(t.clone()),
            (Some(_), Some(_)) => {
                return Err(Error::spec("tabulated", "at most one tabulated density is supported"))
            }
        }
        Ok(self)
    }

    /// Parse and validate a JSON measure document.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MeasureSpec = serde_json::from_str(text).map_err(|e| {
            // serde_json appends " at line L column C"; the variant carries those
            let full = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            Error::Parse {
                line: e.line(),
                column: e.column(),
                message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
            }
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        for (i, atom) in self.atoms.iter().enumerate() {
            if !(0.0..1.0).contains(&atom.b) {
                return Err(Error::spec(format!("atoms[{i}].b"), format!("location must lie in [0,1), got {}", atom.b)));
            }
            if !(atom.w > 0.0) || !atom.w.is_finite() {
                return Err(Error::spec(format!("atoms[{i}].w"), format!("weight must be positive and finite, got {}", atom.w)));
            }
        }
        for (i, d) in self.beta_densities.iter().enumerate() {
            if !(d.k > 0.0) || !d.k.is_finite() {
                return Err(Error::spec(format!("beta_densities[{i}].K"), format!("scale must be positive and finite, got {}", d.k)));
            }
            if !(d.a >= 0.0) || !d.a.is_finite() {
                return Err(Error::spec(format!("beta_densities[{i}].a"), format!("power must be >= 0, got {}", d.a)));
            }
            if !(d.c > 0.0) || !d.c.is_finite() {
                return Err(Error::spec(format!("beta_densities[{i}].c"), format!("exponent must be positive, got {}", d.c)));
            }
        }
        if let Some(tab) = &self.tabulated {
            if tab.grid_n < 2 {
                return Err(Error::spec("tabulated.grid_n", format!("need at least 2 grid nodes, got {}", tab.grid_n)));
            }
            if tab.values.len() != tab.grid_n {
                return Err(Error::spec(
                    "tabulated.values",
                    format!("expected {} values to match grid_n, got {}", tab.grid_n, tab.values.len()),
                ));
            }
            if let Some(i) = tab.values.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
                return Err(Error::spec(format!("tabulated.values[{i}]"), "density samples must be finite and >= 0"));
            }
            if tab.values.iter().all(|&v| v == 0.0) {
                return Err(Error::spec("tabulated.values", "tabulated density is identically zero"));
            }
        }
        if self.atoms.is_empty() && self.beta_densities.is_empty() && self.tabulated.is_none() {
            return Err(Error::spec("$", "measure has no components"));
        }
        Ok(())
    }

    /// Short stable identifier (FNV-1a of the canonical JSON form).
    pub fn id(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.to_json().bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    fn method(&self) -> MomentMethod {
        let closed = !self.atoms.is_empty() || !self.beta_densities.is_empty();
        match (closed, self.tabulated.is_some()) {
            (true, false) => MomentMethod::ClosedForm,
            (false, true) => MomentMethod::Quadrature,
            _ => MomentMethod::Mixed,
        }
    }
}

impl TabulatedDensity {
    fn step(&self) -> f64 {
        1.0 / (self.grid_n - 1) as f64
    }

    fn cell_integral<F: Fn(f64) -> f64>(&self, i: usize, lo: f64, hi: f64, weight: F) -> f64 {
        let h = self.step();
        let t0 = i as f64 * h;
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        if v0 == 0.0 && v1 == 0.0 {
            return 0.0;
        }
        let density = |t: f64| v0 + (v1 - v0) * (t - t0) / h;
        quadrature::adaptive(&|t: f64| weight(t) * density(t), lo, hi, QUAD_TOL)
    }

    fn moment(&self, n: u64) -> f64 {
        let h = self.step();
        let p = n as f64;
        (0..self.grid_n - 1)
            .map(|i| {
                let lo = i as f64 * h;
                let hi = if i + 2 == self.grid_n { 1.0 } else { (i + 1) as f64 * h };
                self.cell_integral(i, lo, hi, |t| t.powf(p))
            })
            .sum()
    }

    fn tail(&self, t: f64) -> f64 {
        let h = self.step();
        let first = ((t / h).floor() as usize).min(self.grid_n - 2);
        (first..self.grid_n - 1)
            .map(|i| {
                let lo = (i as f64 * h).max(t);
                let hi = if i + 2 == self.grid_n { 1.0 } else { (i + 1) as f64 * h };
                if hi <= lo {
                    0.0
                } else {
                    self.cell_integral(i, lo, hi, |_| 1.0)
                }
            })
            .sum()
    }
}

/// μ_n = ∫ t^n dμ(t), with the convention 0⁰ = 1.
pub fn moment(spec: &MeasureSpec, n: u64) -> Result<f64> {
    spec.validate()?;
    Ok(moment_unchecked(spec, n))
}

fn moment_unchecked(spec: &MeasureSpec, n: u64) -> f64 {
    let p = n as f64;
    let atoms: f64 = spec.atoms.iter().map(|a| a.w * a.b.powf(p)).sum();
    let dens: f64 = spec
        .beta_densities
        .iter()
        .map(|d| d.k * log_beta_unchecked(p + d.a + 1.0, d.c).exp())
        .sum();
    let tab = spec.tabulated.as_ref().map_or(0.0, |t| t.moment(n));
    atoms + dens + tab
}

/// ln μ_n, evaluated without underflow for the closed-form components.
pub fn log_moment(spec: &MeasureSpec, n: u64) -> Result<f64> {
    spec.validate()?;
    Ok(log_moment_unchecked(spec, n))
}

fn log_moment_unchecked(spec: &MeasureSpec, n: u64) -> f64 {
    let p = n as f64;
    let mut logs: Vec<f64> = Vec::new();
    for a in &spec.atoms {
        if a.b > 0.0 {
            logs.push(a.w.ln() + p * a.b.ln());
        } else if n == 0 {
            logs.push(a.w.ln());
        }
    }
    for d in &spec.beta_densities {
        logs.push(d.k.ln() + log_beta_unchecked(p + d.a + 1.0, d.c));
    }
    if let Some(t) = &spec.tabulated {
        let m = t.moment(n);
        if m > 0.0 {
            logs.push(m.ln());
        }
    }
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}

/// Moment of a Beta-type density by dyadic quadrature in w = 1 − t,
/// independent of the closed form K·B(n+a+1, c).
pub fn beta_density_moment_quadrature(d: &BetaDensity, n: u64) -> Result<f64> {
    let p = n as f64 + d.a;
    let integrand = |w: f64| (1.0 - w).powf(p) * w.powf(d.c - 1.0);
    Ok(d.k * quadrature::toward_zero(&integrand, 1.0, QUAD_TOL)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
    Mixed,
}

/// Cached μ_0 … μ_{M−1}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSequence {
    pub values: Vec<f64>,
    pub method: MomentMethod,
}

impl MomentSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Hankel entry μ_{n,k} = μ_{n+k}.
    pub fn hankel(&self, n: usize, k: usize) -> f64 {
        self.values[n + k]
    }
}

pub fn moments(spec: &MeasureSpec, count: usize) -> Result<MomentSequence> {
    moments_capped(spec, count, DEFAULT_MOMENT_CAP)
}

pub fn moments_capped(spec: &MeasureSpec, count: usize, cap: usize) -> Result<MomentSequence> {
    if count == 0 {
        return Err(Error::Parameter("moment count must be at least 1".into()));
    }
    if count > cap {
        return Err(Error::Resource {
            what: "moments",
            requested: count,
            cap,
        });
    }
    spec.validate()?;
    let values = (0..count as u64)
        .into_par_iter()
        .map(|n| moment_unchecked(spec, n))
        .collect();
    Ok(MomentSequence {
        values,
        method: spec.method(),
    })
}

/// μ([t, 1)).
pub fn tail_mass(spec: &MeasureSpec, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::domain("tail_mass", format!("t must lie in [0,1), got {t}")));
    }
    spec.validate()?;
    tail_mass_unchecked(spec, t)
}

fn tail_mass_unchecked(spec: &MeasureSpec, t: f64) -> Result<f64> {
    let atoms: f64 = spec.atoms.iter().filter(|a| a.b >= t).map(|a| a.w).sum();
    let width = 1.0 - t;
    let mut dens = 0.0;
    for d in &spec.beta_densities {
        dens += if d.a == 0.0 {
            d.k * width.powf(d.c) / d.c
        } else {
            let f = |w: f64| (1.0 - w).powf(d.a) * w.powf(d.c - 1.0);
            d.k * quadrature::toward_zero(&f, width, QUAD_TOL)?
        };
    }
    let tab = spec.tabulated.as_ref().map_or(0.0, |tab| tab.tail(t));
    Ok(atoms + dens + tab)
}

/// Cutoffs for the finite-depth Carleson verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarlesonThresholds {
    /// Bounded when every quotient in the last quarter is at most this times the median.
    pub bounded_factor: f64,
    /// Growth when each of the last three quotients exceeds its predecessor by this fraction.
    pub growth: f64,
    /// Vanishing when the last quotient is below this fraction of the maximum.
    pub vanishing_fraction: f64,
}

impl Default for CarlesonThresholds {
    fn default() -> Self {
        CarlesonThresholds {
            bounded_factor: 2.0,
            growth: 0.25,
            vanishing_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarlesonVerdict {
    Carleson,
    VanishingCarleson,
    NotCarleson,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub t: f64,
    pub quotient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlesonReport {
    pub exponent: f64,
    pub sup_quotient: f64,
    pub argmax_t: f64,
    pub quotient_trace: Vec<TracePoint>,
    pub verdict: CarlesonVerdict,
}

pub fn carleson_report(spec: &MeasureSpec, s: f64, depth: u32) -> Result<CarlesonReport> {
    carleson_report_with(spec, s, depth, &CarlesonThresholds::default())
}

/// Quotients μ([t,1))/(1−t)^s on the dyadic points t_j = 1 − 2^{−j}, j = 0..=depth.
pub fn carleson_report_with(
    spec: &MeasureSpec,
    s: f64,
    depth: u32,
    th: &CarlesonThresholds,
) -> Result<CarlesonReport> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Parameter(format!("Carleson exponent s must be positive, got {s}")));
    }
    if !(4..=52).contains(&depth) {
        return Err(Error::Parameter(format!("depth must lie in 4..=52, got {depth}")));
    }
    spec.validate()?;
    let trace = (0..=depth)
        .map(|j| {
            let width = (-(j as f64)).exp2();
            let t = 1.0 - width;
            Ok(TracePoint {
                t,
                quotient: tail_mass_unchecked(spec, t)? / width.powf(s),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (argmax, sup) = trace
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bq), (i, p)| {
            if p.quotient > bq {
                (i, p.quotient)
            } else {
                (bi, bq)
            }
        });
    let q: Vec<f64> = trace.iter().map(|p| p.quotient).collect();
    let verdict = classify_trace(&q, sup, th);
    Ok(CarlesonReport {
        exponent: s,
        sup_quotient: sup,
        argmax_t: trace[argmax].t,
        quotient_trace: trace,
        verdict,
    })
}

fn classify_trace(q: &[f64], sup: f64, th: &CarlesonThresholds) -> CarlesonVerdict {
    let len = q.len();
    let growing = q[len - 4..]
        .windows(2)
        .all(|w| w[0] > 0.0 && w[1] >= (1.0 + th.growth) * w[0]);
    if growing {
        return CarlesonVerdict::NotCarleson;
    }
    let mut sorted = q.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if len % 2 == 1 {
        sorted[len / 2]
    } else {
        0.5 * (sorted[len / 2 - 1] + sorted[len / 2])
    };
    let tail = &q[len - len.div_ceil(4)..];
    if !tail.iter().all(|&v| v <= th.bounded_factor * median) {
        return CarlesonVerdict::Inconclusive;
    }
    let decreasing = tail.windows(2).all(|w| w[1] <= w[0]);
    if decreasing && q[len - 1] < th.vanishing_fraction * sup {
        CarlesonVerdict::VanishingCarleson
    } else {
        CarlesonVerdict::Carleson
    }
}

/// Log-log regression slope of μ_n over a geometric subsample of n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayEstimate {
    pub slope: f64,
    pub samples: usize,
    /// Slope below −50: decay is faster than any polynomial at this range.
    pub super_polynomial: bool,
}

const DECAY_SAMPLES: usize = 40;
const SUPER_POLYNOMIAL_SLOPE: f64 = -50.0;

pub fn moment_decay_exponent(spec: &MeasureSpec, n_lo: u64, n_hi: u64) -> Result<DecayEstimate> {
    if n_lo < 10 || n_lo >= n_hi {
        return Err(Error::Parameter(format!(
            "decay range needs 10 <= n_lo < n_hi, got [{n_lo}, {n_hi}]"
        )));
    }
    spec.validate()?;
    let ratio = n_hi as f64 / n_lo as f64;
    let mut ns: Vec<u64> = (0..DECAY_SAMPLES)
        .map(|i| (n_lo as f64 * ratio.powf(i as f64 / (DECAY_SAMPLES - 1) as f64)).round() as u64)
        .collect();
    ns.dedup();
    let pts = ns
        .iter()
        .map(|&n| {
            let lm = log_moment_unchecked(spec, n);
            if lm == f64::NEG_INFINITY {
                Err(Error::Degenerate(format!("moment mu_{n} is zero")))
            } else {
                Ok(((n as f64).ln(), lm))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(DecayEstimate {
        slope,
        samples: pts.len(),
        super_polynomial: slope < SUPER_POLYNOMIAL_SLOPE,
    })
}

/// Numeric witness that μ_n = O(n^{−(α/2+ε)}) for some ε > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellDefinedCheck {
    pub holds: bool,
    pub slope: f64,
    /// −slope − α/2; positive when the decay beats n^{−α/2}.
    pub witness_epsilon: f64,
    pub super_polynomial: bool,
}

const WELL_DEFINED_RANGE: (u64, u64) = (100, 100_000);
const WELL_DEFINED_MARGIN: f64 = 0.01;

pub fn well_defined_check(spec: &MeasureSpec, alpha: f64) -> Result<WellDefinedCheck> {
    let est = moment_decay_exponent(spec, WELL_DEFINED_RANGE.0, WELL_DEFINED_RANGE.1)?;
    Ok(WellDefinedCheck {
        holds: est.super_polynomial || est.slope < -alpha / 2.0 - WELL_DEFINED_MARGIN,
        slope: est.slope,
        witness_epsilon: -est.slope - alpha / 2.0,
        super_polynomial: est.super_polynomial,
    })
}
