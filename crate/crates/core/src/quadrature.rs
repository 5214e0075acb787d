//! Composite Gauss–Legendre quadrature.
//!
//! Two drivers are provided: plain adaptive bisection for integrands that
//! are smooth on a closed interval, and dyadic splitting for integrands
//! with an integrable power singularity at the left endpoint. The dyadic
//! driver integrates panels [h/2, h], [h/4, h/2], … and closes the sum with
//! a geometric tail estimate once successive panel contributions settle
//! into a constant ratio.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 20;
const MAX_DEPTH: u32 = 48;
/// Panels in the dyadic driver before the remainder must be extrapolated.
const MAX_PANELS: usize = 1000;

/// Nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// n-point rule via Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Single-panel integral over [a, b].
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ORDER))
}

/// ∫_a^b f by recursive bisection until halves agree to `rel_tol`.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let whole = rule().integrate(f, a, b);
    adaptive_step(f, a, b, whole, rel_tol, 0)
}

fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    rel_tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule().integrate(f, a, mid);
    let right = rule().integrate(f, mid, b);
    let halves = left + right;
    let err = (halves - whole).abs();
    if depth >= MAX_DEPTH || err <= rel_tol * halves.abs() || err < 1e-300 {
        return halves;
    }
    adaptive_step(f, a, mid, left, rel_tol, depth + 1)
        + adaptive_step(f, mid, b, right, rel_tol, depth + 1)
}

/// ∫_0^width f(w) dw for f with an integrable singularity (or steep
/// concentration) at w = 0. Each dyadic panel is integrated adaptively.
pub fn toward_zero<F: Fn(f64) -> f64>(f: &F, width: f64, rel_tol: f64) -> Result<f64> {
    dyadic(|lo, hi| adaptive(f, lo, hi, rel_tol * 0.1), width, rel_tol)
}

/// As [`toward_zero`], with one application of `rule` per dyadic panel.
pub fn toward_zero_fixed<F: Fn(f64) -> f64>(
    rule: &GaussLegendre,
    f: &F,
    width: f64,
    rel_tol: f64,
) -> Result<f64> {
    dyadic(|lo, hi| rule.integrate(f, lo, hi), width, rel_tol)
}

fn dyadic<P: Fn(f64, f64) -> f64>(panel: P, width: f64, rel_tol: f64) -> Result<f64> {
    if !(width > 0.0) {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut prev = 0.0;
    let mut prev_ratio = f64::NAN;
    let mut hi = width;
    for index in 0..MAX_PANELS {
        let lo = 0.5 * hi;
        let part = panel(lo, hi);
        total += part;
        if index >= 2 && prev > 0.0 && part >= 0.0 {
            let ratio = part / prev;
            let settled = (ratio - prev_ratio).abs() <= 1e-3 * ratio.max(1e-300);
            if ratio < 1.0 && settled {
                let remainder = part * ratio / (1.0 - ratio);
                if remainder <= rel_tol * total.abs() || lo < 1e-290 {
                    return Ok(total + remainder);
                }
            } else if part == 0.0 && total > 0.0 {
                return Ok(total);
            }
            prev_ratio = ratio;
        }
        prev = part;
        hi = lo;
        if hi < 1e-300 {
            break;
        }
    }
    if prev_ratio < 1.0 && prev > 0.0 {
        return Ok(total + prev * prev_ratio / (1.0 - prev_ratio));
    }
    Err(Error::Quadrature(format!(
        "dyadic panels did not settle into a convergent tail (last ratio {prev_ratio})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let r = GaussLegendre::new(ORDER);
        assert_relative_eq!(r.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
        // degree 39 is the highest exact degree for 20 nodes
        let v = r.integrate(&|x: f64| x.powi(38), -1.0, 1.0);
        assert_relative_eq!(v, 2.0 / 39.0, max_relative = 1e-13);
        for w in r.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let n = 5000;
        let v = adaptive(&|t: f64| t.powi(n), 0.0, 1.0, 1e-12);
        assert_relative_eq!(v, 1.0 / (n as f64 + 1.0), max_relative = 1e-10);
    }

    #[test]
    fn dyadic_resolves_power_singularity() {
        for &p in &[0.05, 0.25, 0.5, 0.9] {
            let v = toward_zero(&|w: f64| w.powf(p - 1.0), 1.0, 1e-12).unwrap();
            assert_relative_eq!(v, 1.0 / p, max_relative = 1e-8);
        }
    }

    #[test]
    fn dyadic_rejects_nonintegrable() {
        assert!(toward_zero(&|w: f64| 1.0 / w, 1.0, 1e-10).is_err());
    }
}
