//! Coefficient-space model of the Dirichlet spaces D_α.
//!
//! ‖f‖²_{D_α} = Σ (n+1)^{1−α} a_n², so D_1 is the Hardy space H² and the
//! diagonal map V_α: a_n ↦ (n+1)^{(1−α)/2} a_n is an isometry D_α → H².
//! Its inverse multiplies by (n+1)^{(α−1)/2}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncated Taylor coefficients a_0 … a_{N−1}.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CoeffSeq(Vec<f64>);

impl CoeffSeq {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::domain("CoeffSeq::new", format!("coefficient {i} is not finite")));
        }
        Ok(CoeffSeq(coeffs))
    }

    /// z^degree.
    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![0.0; degree + 1];
        c[degree] = 1.0;
        CoeffSeq(c)
    }

    pub fn zeros(len: usize) -> Self {
        CoeffSeq(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// ℓ² (= H²) norm of the coefficients.
    pub fn l2_norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub(crate) fn from_vec_unchecked(v: Vec<f64>) -> Self {
        CoeffSeq(v)
    }
}

/// Which published parameter range to accept for α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaRange {
    /// 0 < α < 2
    #[default]
    Strict,
    /// 0 ≤ α < 2
    ClosedBelow,
    /// 0 < α ≤ 2
    ClosedAbove,
}

impl AlphaRange {
    fn admits(self, alpha: f64) -> bool {
        match self {
            AlphaRange::Strict => alpha > 0.0 && alpha < 2.0,
            AlphaRange::ClosedBelow => (0.0..2.0).contains(&alpha),
            AlphaRange::ClosedAbove => alpha > 0.0 && alpha <= 2.0,
        }
    }
}

/// Source space D_α, target space D_β, operator weight γ and the Carleson
/// exponent s = γ − (β−α)/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub s: f64,
    pub alpha_range: AlphaRange,
}

impl SpaceParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::with_range(alpha, beta, gamma, AlphaRange::Strict)
    }

    pub fn with_range(alpha: f64, beta: f64, gamma: f64, alpha_range: AlphaRange) -> Result<Self> {
        if ![alpha, beta, gamma].iter().all(|v| v.is_finite()) {
            return Err(Error::Parameter("alpha, beta and gamma must be finite".into()));
        }
        if !alpha_range.admits(alpha) {
            let range = match alpha_range {
                AlphaRange::Strict => "0 < alpha < 2",
                AlphaRange::ClosedBelow => "0 <= alpha < 2",
                AlphaRange::ClosedAbove => "0 < alpha <= 2",
            };
            return Err(Error::Parameter(format!("alpha = {alpha} outside {range}")));
        }
        if !(2.0..4.0).contains(&beta) {
            return Err(Error::Parameter(format!("beta = {beta} outside 2 <= beta < 4")));
        }
        if !(gamma >= 1.0) {
            return Err(Error::Parameter(format!("gamma = {gamma} must be >= 1")));
        }
        let s = gamma - (beta - alpha) / 2.0;
        if !(s > 0.0) {
            return Err(Error::Parameter(format!(
                "Carleson exponent s = gamma - (beta - alpha)/2 = {s} must be positive"
            )));
        }
        Ok(SpaceParams {
            alpha,
            beta,
            gamma,
            s,
            alpha_range,
        })
    }

    /// Preconditions of the Beta-function Schur bound: γ > β/2 and α > 0.
    pub fn require_schur(&self) -> Result<()> {
        if !(self.gamma > self.beta / 2.0) {
            return Err(Error::Parameter(format!(
                "Schur bound needs gamma > beta/2 (got gamma = {}, beta = {}): \
                 the integral of K(x,1) x^(-1/2) over (0, inf) diverges at 0",
                self.gamma, self.beta
            )));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::Parameter(format!(
                "Schur bound needs alpha > 0 (got {}): the integral of K(1,y) y^(-1/2) diverges at 0",
                self.alpha
            )));
        }
        Ok(())
    }
}

pub fn dirichlet_norm(f: &CoeffSeq, alpha: f64) -> f64 {
    v_map(f, alpha).l2_norm()
}

/// V_α: a_n ↦ (n+1)^{(1−α)/2} a_n.
pub fn v_map(f: &CoeffSeq, alpha: f64) -> CoeffSeq {
    scale_diagonal(f, (1.0 - alpha) / 2.0)
}

/// V_α^{-1}: g_n ↦ (n+1)^{(α−1)/2} g_n.
pub fn v_inv_map(g: &CoeffSeq, alpha: f64) -> CoeffSeq {
    scale_diagonal(g, (alpha - 1.0) / 2.0)
}

fn scale_diagonal(f: &CoeffSeq, exponent: f64) -> CoeffSeq {
    if exponent == 0.0 {
        return f.clone();
    }
    CoeffSeq(
        f.0.iter()
            .enumerate()
            .map(|(n, a)| (n as f64 + 1.0).powf(exponent) * a)
            .collect(),
    )
}

/// Geometric tail bound for the extremal family.
pub const TEST_FUNCTION_TAIL: f64 = 1e-12;

/// Smallest N with t^N ≤ 1e−12.
pub fn test_function_len(t: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::domain("test_function", format!("t must lie in [0,1), got {t}")));
    }
    if t == 0.0 {
        return Ok(1);
    }
    Ok((TEST_FUNCTION_TAIL.ln() / t.ln()).ceil().max(1.0) as usize)
}

/// f_t = (1−t²)^{1−α/2} Σ_{n<N} t^n z^n with the default truncation.
pub fn test_function(t: f64, alpha: f64) -> Result<CoeffSeq> {
    let len = test_function_len(t)?;
    test_function_with_len(t, alpha, len)
}

pub fn test_function_with_len(t: f64, alpha: f64, len: usize) -> Result<CoeffSeq> {
    let needed = test_function_len(t)?;
    if len < needed {
        return Err(Error::Precision(format!(
            "f_t at t = {t} needs at least {needed} terms for a {TEST_FUNCTION_TAIL:e} tail, got {len}"
        )));
    }
    let scale = (1.0 - t * t).powf(1.0 - alpha / 2.0);
    let mut power = 1.0;
    let coeffs = (0..len)
        .map(|_| {
            let a = scale * power;
            power *= t;
            a
        })
        .collect();
    Ok(CoeffSeq(coeffs))
}
