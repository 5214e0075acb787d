//! Log-Gamma, Beta and the coefficient weight Γ(n+γ)/(n!Γ(γ)).
//!
//! `log_gamma` uses the Stirling series with Bernoulli-number coefficients
//! for x ≥ 10 and shifts smaller arguments upward with the recurrence
//! Γ(x+1) = xΓ(x). Differences lnΓ(x+h) − lnΓ(x) at large x are formed
//! analytically so that the O(x ln x) leading terms cancel exactly rather
//! than in floating point.

use crate::error::{Error, Result};

/// Coefficients B_{2k} / (2k(2k−1)) of the Stirling series, k = 1..8.
///
/// B2 = 1/6, B4 = −1/30, B6 = 1/42, B8 = −1/30, B10 = 5/66,
/// B12 = −691/2730, B14 = 7/6, B16 = −3617/510.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Arguments at or above this use the asymptotic series directly.
const STIRLING_MIN: f64 = 10.0;

/// ½ ln(2π)
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest n for which `gamma_ratio` uses the telescoping product.
pub const GAMMA_RATIO_CROSSOVER: u64 = 64;

/// Tail Σ_k c_k / z^{2k−1} of the Stirling series.
fn stirling_correction(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for &c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("x must be positive and finite, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x);
    }
    let mut z = x;
    let mut prod = 1.0;
    while z < STIRLING_MIN {
        prod *= z;
        z += 1.0;
    }
    log_gamma_unchecked(z) - prod.ln()
}

/// lnΓ(x+h) − lnΓ(x) for x > 0, h ≥ 0.
pub(crate) fn log_gamma_shift(x: f64, h: f64) -> f64 {
    if h == 0.0 {
        return 0.0;
    }
    if x < STIRLING_MIN {
        return log_gamma_unchecked(x + h) - log_gamma_unchecked(x);
    }
    // (x+h−½)ln(x+h) − (x−½)ln x − h, with ln(x+h) = ln x + ln1p(h/x)
    let l = (h / x).ln_1p();
    h * x.ln() + (x + h - 0.5) * l - h + stirling_correction(x + h) - stirling_correction(x)
}

/// ln B(x, y).
pub fn log_beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::domain("beta", format!("arguments must be positive, got ({x}, {y})")));
    }
    Ok(log_beta_unchecked(x, y))
}

pub(crate) fn log_beta_unchecked(x: f64, y: f64) -> f64 {
    // Order the arguments so the result is bitwise symmetric.
    let (small, big) = if x <= y { (x, y) } else { (y, x) };
    log_gamma_unchecked(small) - log_gamma_shift(big, small)
}

/// Beta function B(x, y) = Γ(x)Γ(y)/Γ(x+y).
pub fn beta(x: f64, y: f64) -> Result<f64> {
    log_beta(x, y).map(f64::exp)
}

/// Γ(n+γ) / (n! Γ(γ)), the coefficient weight of the generalized Hilbert operator.
pub fn gamma_ratio(n: u64, gamma: f64) -> Result<f64> {
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::domain("gamma_ratio", format!("gamma must be >= 1, got {gamma}")));
    }
    Ok(gamma_ratio_unchecked(n, gamma))
}

pub(crate) fn gamma_ratio_unchecked(n: u64, gamma: f64) -> f64 {
    if n <= GAMMA_RATIO_CROSSOVER {
        gamma_ratio_product(n, gamma)
    } else {
        gamma_ratio_log(n, gamma)
    }
}

/// ∏_{j<n} (γ+j)/(j+1)
fn gamma_ratio_product(n: u64, gamma: f64) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (gamma + j as f64) / (j as f64 + 1.0))
}

fn gamma_ratio_log(n: u64, gamma: f64) -> f64 {
    let x = n as f64 + 1.0;
    (log_gamma_shift(x, gamma - 1.0) - log_gamma_unchecked(gamma)).exp()
}

/// Weights gamma_ratio(n, γ) for n = 0..len.
pub(crate) fn gamma_ratios(len: usize, gamma: f64) -> Vec<f64> {
    (0..len as u64).map(|n| gamma_ratio_unchecked(n, gamma)).collect()
}
