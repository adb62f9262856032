//! Edge-weight laws, their s-fold convolutions, and the probability that two
//! overlapping subgraph copies (a shared edges, b unique edges each) both
//! weigh at most w.

use crate::error::{Error, Result};
use crate::numerics::{self, quad, PrecisionConfig};

/// Bisection depth limit per quadrature panel.
pub const QUAD_MAX_DEPTH: u32 = 40;

/// Distribution of a single edge weight.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum WeightModel {
    /// Uniform on [0, 1].
    Uniform01,
    /// Exponential with the given rate.
    Exponential { rate: f64 },
}

impl WeightModel {
    /// Parse the CLI grammar: `uniform` or `exp:RATE`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("uniform") {
            return Ok(Self::Uniform01);
        }
        if let Some(rate) = t.strip_prefix("exp:") {
            let rate: f64 = rate
                .parse()
                .map_err(|_| Error::Config(format!("bad rate in --dist {text}")))?;
            if rate > 0.0 && rate.is_finite() {
                return Ok(Self::Exponential { rate });
            }
            return Err(Error::Config(format!("rate must be positive, got {rate}")));
        }
        Err(Error::Config(format!(
            "unknown distribution {text:?} (expected `uniform` or `exp:RATE`)"
        )))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform01 => x.clamp(0.0, 1.0),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform01 => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
        }
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!(
                "quantile requires u in [0,1], got {u}"
            )));
        }
        Ok(match *self {
            Self::Uniform01 => u,
            Self::Exponential { rate } => -(-u).ln_1p() / rate,
        })
    }

    /// Upper end of the single-edge support (`inf` for exponential).
    pub fn support_max(&self) -> f64 {
        match self {
            Self::Uniform01 => 1.0,
            Self::Exponential { .. } => f64::INFINITY,
        }
    }

    /// Largest w for which the subgraph machinery has a closed form
    /// (1 for uniform weights, unbounded for exponential).
    pub fn closed_form_max(&self) -> f64 {
        match self {
            Self::Uniform01 => 1.0,
            Self::Exponential { .. } => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for WeightModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Uniform01 => write!(f, "uniform"),
            Self::Exponential { rate } => write!(f, "exp:{rate}"),
        }
    }
}

/// The law of the sum of `s` i.i.d. edge weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvolutionSpec {
    pub model: WeightModel,
    pub s: u32,
}

impl ConvolutionSpec {
    pub fn new(model: WeightModel, s: u32) -> Self {
        assert!(s >= 1, "convolution requires s >= 1");
        Self { model, s }
    }
}

/// CDF of the sum of `spec.s` edges at `r`.
pub fn conv_cdf(spec: ConvolutionSpec, r: f64, cfg: &PrecisionConfig) -> f64 {
    match spec.model {
        WeightModel::Uniform01 => numerics::irwin_hall_cdf(spec.s, r, cfg),
        WeightModel::Exponential { rate } => {
            if r < 0.0 {
                0.0
            } else {
                numerics::erlang_cdf(spec.s, rate * r).expect("nonnegative argument")
            }
        }
    }
}

/// Natural log of `conv_cdf`; keeps deep-tail values that underflow linearly.
pub fn conv_ln_cdf(spec: ConvolutionSpec, r: f64, cfg: &PrecisionConfig) -> f64 {
    match spec.model {
        WeightModel::Uniform01 => numerics::irwin_hall_ln_cdf(spec.s, r, cfg),
        WeightModel::Exponential { rate } => {
            if r <= 0.0 {
                f64::NEG_INFINITY
            } else {
                numerics::erlang_ln_cdf(spec.s, rate * r).expect("nonnegative argument")
            }
        }
    }
}

/// Density of the sum of `spec.s` edges at `r`.
pub fn conv_pdf(spec: ConvolutionSpec, r: f64, cfg: &PrecisionConfig) -> f64 {
    match spec.model {
        WeightModel::Uniform01 => numerics::irwin_hall_pdf(spec.s, r, cfg),
        WeightModel::Exponential { rate } => {
            if r < 0.0 {
                0.0
            } else {
                rate * numerics::erlang_pdf(spec.s, rate * r).expect("nonnegative argument")
            }
        }
    }
}

pub fn conv_ln_pdf(spec: ConvolutionSpec, r: f64, cfg: &PrecisionConfig) -> f64 {
    match spec.model {
        WeightModel::Uniform01 => numerics::irwin_hall_ln_pdf(spec.s, r, cfg),
        WeightModel::Exponential { rate } => {
            if r < 0.0 {
                f64::NEG_INFINITY
            } else {
                rate.ln() + numerics::erlang_ln_pdf(spec.s, rate * r).expect("nonnegative argument")
            }
        }
    }
}

fn check_pair_args(a: u32, b: u32, w: f64) -> Result<()> {
    if a < 1 || b < 1 {
        return Err(Error::Domain(format!(
            "pair probability requires a >= 1 and b >= 1, got a={a} b={b}"
        )));
    }
    if w < 0.0 || !w.is_finite() {
        return Err(Error::Domain(format!(
            "pair probability requires finite w >= 0, got {w}"
        )));
    }
    Ok(())
}

/// ln of the closed-form pair probability for uniform weights and w <= 1:
/// `w^(a+2b) / (a+2b)! * C(2b, b)`.
pub fn pair_prob_closed_ln(a: u32, b: u32, w: f64) -> Result<f64> {
    check_pair_args(a, b, w)?;
    if w > 1.0 {
        return Err(Error::Domain(format!(
            "closed-form pair probability is only valid for w <= 1, got {w}"
        )));
    }
    if w == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let n = (a + 2 * b) as u64;
    Ok(n as f64 * w.ln() - numerics::log_factorial(n)
        + numerics::log_binomial(2 * b as u64, b as u64)?)
}

/// Probability that two overlapping copies (a shared edges, b unique edges
/// each) both weigh at most w, for uniform weights and w <= 1.
pub fn pair_prob_closed(a: u32, b: u32, w: f64) -> Result<f64> {
    Ok(pair_prob_closed_ln(a, b, w)?.exp())
}

/// ln of the pair probability by adaptive quadrature of
/// `int_0^w f_a(t) F_b(w - t)^2 dt`.
///
/// For uniform weights the range is split wherever `t` or `w - t` crosses an
/// integer, so each panel sees a polynomial integrand; the exponential
/// integrand is smooth and integrates directly.
pub fn pair_prob_quadrature_ln(
    model: WeightModel,
    a: u32,
    b: u32,
    w: f64,
    cfg: &PrecisionConfig,
) -> Result<f64> {
    check_pair_args(a, b, w)?;
    if w == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let fa = ConvolutionSpec::new(model, a);
    let fb = ConvolutionSpec::new(model, b);
    let upper = match model {
        WeightModel::Uniform01 => {
            if w >= (a + b) as f64 {
                // Both copies weigh at most a + b almost surely.
                return Ok(0.0);
            }
            w.min(a as f64)
        }
        WeightModel::Exponential { .. } => w,
    };
    let mut points = vec![0.0, upper];
    if let WeightModel::Uniform01 = model {
        let mut push = |t: f64| {
            if t > 0.0 && t < upper {
                points.push(t);
            }
        };
        for i in 1..=(a + 2 * b) {
            push(i as f64); // f_a breakpoints at integral t
            push(w - i as f64); // F_b breakpoints at integral w - t
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
    }
    let ln_f = |t: f64| conv_ln_pdf(fa, t, cfg) + 2.0 * conv_ln_cdf(fb, w - t, cfg);
    let integral = quad::integrate_ln_split(ln_f, &points, cfg.quad_rel_tol, QUAD_MAX_DEPTH)?;
    // A probability: clamp the log at 0 against terminal rounding.
    Ok(integral.ln_abs().min(0.0))
}

/// Linear-scale wrapper around `pair_prob_quadrature_ln`.
pub fn pair_prob_quadrature(
    model: WeightModel,
    a: u32,
    b: u32,
    w: f64,
    cfg: &PrecisionConfig,
) -> Result<f64> {
    Ok(pair_prob_quadrature_ln(model, a, b, w, cfg)?.exp())
}

/// Pair probability in log scale, dispatching to the closed form when valid.
pub fn pair_prob_ln(
    model: WeightModel,
    a: u32,
    b: u32,
    w: f64,
    cfg: &PrecisionConfig,
) -> Result<f64> {
    match model {
        WeightModel::Uniform01 if w <= 1.0 => pair_prob_closed_ln(a, b, w),
        _ => pair_prob_quadrature_ln(model, a, b, w, cfg),
    }
}

/// True when `pair_prob_ln` needs the quadrature engine for this input.
pub fn pair_prob_needs_quadrature(model: WeightModel, w: f64) -> bool {
    !matches!(model, WeightModel::Uniform01 if w <= 1.0)
}
