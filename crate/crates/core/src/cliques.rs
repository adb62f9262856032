//! Explicit CDF bounds for the minimum-weight k-clique.
//!
//! The number of cliques of weight <= w is approximated by a Poisson law
//! with mean lambda; the approximation error is controlled by two computable
//! terms b1 (pair counts times squared single-copy probability) and b2
//! (joint probabilities of overlapping pairs).  Everything downstream —
//! bound curves, the summary table, significance tests — is built from
//! `cdf_bounds`.

use crate::error::{Error, Result};
use crate::numerics::{log_binomial, log_factorial, log_sum_exp, PrecisionConfig, SignedLogReal};
use crate::subgraphs::{self, GraphSpec};
use crate::weights::{
    conv_ln_cdf, pair_prob_ln, pair_prob_needs_quadrature, ConvolutionSpec, WeightModel,
};

/// Number of grid points backing table statistics and the max-gap search.
const GAP_GRID_POINTS: usize = 4096;
/// Grid spans (1e-6 * w_max, w_max].
const GRID_SPAN_DECADES: f64 = 6.0;
/// Bisection: relative 1e-12 on w or 200 iterations.
const BISECT_REL_TOL: f64 = 1e-12;
const BISECT_MAX_ITERS: u32 = 200;

/// A minimum-weight k-clique problem instance.
#[derive(Clone, Copy, Debug)]
pub struct CliqueInstance {
    pub n: u64,
    pub k: u32,
    pub model: WeightModel,
    pub precision: PrecisionConfig,
}

impl CliqueInstance {
    pub fn new(n: u64, k: u32, model: WeightModel) -> Result<Self> {
        Self::with_precision(n, k, model, PrecisionConfig::default())
    }

    pub fn with_precision(
        n: u64,
        k: u32,
        model: WeightModel,
        precision: PrecisionConfig,
    ) -> Result<Self> {
        if k < 3 {
            return Err(Error::Domain(format!("clique size must be >= 3, got {k}")));
        }
        if n < k as u64 {
            return Err(Error::Domain(format!(
                "host order n={n} is smaller than k={k}"
            )));
        }
        precision.validate()?;
        Ok(Self {
            n,
            k,
            model,
            precision,
        })
    }

    /// Edge count of the clique, m = C(k, 2).
    pub fn m(&self) -> u32 {
        self.k * (self.k - 1) / 2
    }

    /// Scaled weight z = w * n^(2/(k-1)).
    pub fn z_of_w(&self, w: f64) -> f64 {
        w * (2.0 / (self.k as f64 - 1.0) * (self.n as f64).ln()).exp()
    }

    /// Raw weight w = z * n^(-2/(k-1)).
    pub fn w_of_z(&self, z: f64) -> f64 {
        z * (-2.0 / (self.k as f64 - 1.0) * (self.n as f64).ln()).exp()
    }

    /// Upper end of the closed-form weight domain (1 for uniform weights).
    pub fn domain_max(&self) -> f64 {
        self.model.closed_form_max()
    }

    fn ln_host_binomial(&self) -> f64 {
        log_binomial(self.n, self.k as u64).expect("k <= n by construction")
    }
}

/// P(a fixed clique weighs <= w): the m-fold convolution CDF.
pub fn single_prob(inst: &CliqueInstance, w: f64) -> f64 {
    single_prob_ln(inst, w).exp()
}

pub(crate) fn single_prob_ln(inst: &CliqueInstance, w: f64) -> f64 {
    assert!(w >= 0.0, "single_prob requires w >= 0");
    conv_ln_cdf(
        ConvolutionSpec::new(inst.model, inst.m()),
        w,
        &inst.precision,
    )
}

/// Expected number of cliques of weight <= w: C(n, k) * p(w).
pub fn lambda(inst: &CliqueInstance, w: f64) -> SignedLogReal {
    SignedLogReal::from_ln(inst.ln_host_binomial() + single_prob_ln(inst, w))
}

/// Number of cliques sharing exactly `ell` vertices with a fixed clique:
/// `u_ell = C(k, ell) * C(n-k, k-ell)`.
pub fn u_count(inst: &CliqueInstance, ell: u32) -> Result<SignedLogReal> {
    if !(2..=inst.k).contains(&ell) {
        return Err(Error::Domain(format!(
            "u_count requires 2 <= ell <= k={}, got {ell}",
            inst.k
        )));
    }
    Ok(SignedLogReal::from_ln(ln_u(inst, ell)))
}

fn ln_u(inst: &CliqueInstance, ell: u32) -> f64 {
    log_binomial(inst.k as u64, ell as u64).expect("ell <= k")
        + log_binomial(inst.n - inst.k as u64, (inst.k - ell) as u64).expect("k - ell <= n - k")
}

/// First Poisson-approximation error term:
/// `b1 = C(n,k) * sum_{ell=2..k} u_ell * p^2`.
pub fn b1(inst: &CliqueInstance, w: f64) -> SignedLogReal {
    let ln_p = single_prob_ln(inst, w);
    if ln_p == f64::NEG_INFINITY {
        return SignedLogReal::ZERO;
    }
    let terms: Vec<f64> = (2..=inst.k).map(|ell| ln_u(inst, ell)).collect();
    SignedLogReal::from_ln(inst.ln_host_binomial() + log_sum_exp(&terms) + 2.0 * ln_p)
}

/// Number of edges unique to a clique sharing `ell` vertices:
/// `m_ell = C(k,2) - C(ell,2)`.
pub fn m_ell(inst: &CliqueInstance, ell: u32) -> u32 {
    inst.m() - ell * (ell - 1) / 2
}

/// Second error term: `b2 = C(n,k) * sum_{ell=2..k-1} u_ell * p_pair(ell)`
/// where the pair probability couples the C(ell,2) shared edges with the
/// m_ell edges unique to each copy.
pub fn b2(inst: &CliqueInstance, w: f64) -> Result<SignedLogReal> {
    if w == 0.0 {
        return Ok(SignedLogReal::ZERO);
    }
    let mut terms = Vec::with_capacity(inst.k as usize);
    for ell in 2..inst.k {
        let shared = ell * (ell - 1) / 2;
        let ln_pair = pair_prob_ln(inst.model, shared, m_ell(inst, ell), w, &inst.precision)?;
        terms.push(ln_u(inst, ell) + ln_pair);
    }
    Ok(SignedLogReal::from_ln(
        inst.ln_host_binomial() + log_sum_exp(&terms),
    ))
}

/// Validity annotations carried by every bound report.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ValidityFlags {
    /// Closed-form uniform path (w <= 1); otherwise the extended engine ran.
    pub closed_form_w_le_1: bool,
    /// The simplified-bound hypothesis holds at this (n, k, w).
    pub thm2_hypothesis: bool,
    /// At least one pair probability came from adaptive quadrature.
    pub quadrature_used: bool,
    /// False when quadrature failed to converge; bounds widen to [0, 1].
    pub bounds_valid: bool,
}

impl ValidityFlags {
    /// Stable single-column encoding for CSV output.
    pub fn tokens(&self) -> String {
        let mut parts = Vec::new();
        if self.closed_form_w_le_1 {
            parts.push("closed_form_w_le_1");
        }
        if self.thm2_hypothesis {
            parts.push("thm2_hypothesis");
        }
        if self.quadrature_used {
            parts.push("quadrature_used");
        }
        if !self.bounds_valid {
            parts.push("bounds_invalid");
        }
        parts.join("|")
    }
}

/// Everything computed for one bound evaluation at weight w.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct BoundReport {
    pub w: f64,
    /// Scaled weight z = w * n^(2/(k-1)) (general H: w * n^(1/d)).
    pub z: f64,
    /// Single-copy probability p(w).
    pub p: f64,
    pub lambda: SignedLogReal,
    pub b1: SignedLogReal,
    pub b2: SignedLogReal,
    /// 1 - exp(-lambda) -/+ (b1 + b2), before clamping.
    pub lower_raw: f64,
    pub upper_raw: f64,
    /// Clamped to [0, 1]; `lower` is additionally monotonized in curves.
    pub lower: f64,
    pub upper: f64,
    /// Simplified summation-free bound on b1 + b2, when its hypothesis holds.
    pub simplified_bound: Option<f64>,
    pub flags: ValidityFlags,
}

impl BoundReport {
    pub fn csv_header() -> &'static str {
        "w,z,p,lambda,b1,b2,lower_raw,upper_raw,lower,upper,flags"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{:.6e},{:.6e},{:.5e},{:.5e},{:.5e},{:.5e},{:.5e},{:.5e},{:.5e},{:.5e},{}",
            self.w,
            self.z,
            self.p,
            self.lambda.to_real(),
            self.b1.to_real(),
            self.b2.to_real(),
            self.lower_raw,
            self.upper_raw,
            self.lower,
            self.upper,
            self.flags.tokens()
        )
    }
}

/// Assemble a report from the log-domain pieces.  Shared with the general-H
/// engine so both routes clamp and flag identically.
#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble_report(
    w: f64,
    z: f64,
    p: f64,
    lambda: SignedLogReal,
    b1: SignedLogReal,
    b2: Result<SignedLogReal>,
    closed_form: bool,
    quadrature_used: bool,
    thm2: bool,
    simplified: Option<f64>,
) -> BoundReport {
    match b2 {
        Ok(b2) => {
            // 1 - e^-lambda via expm1 so tiny lambdas keep full precision.
            let mid = -(-lambda.to_real()).exp_m1();
            let err = (b1 + b2).to_real();
            let lower_raw = mid - err;
            let upper_raw = mid + err;
            BoundReport {
                w,
                z,
                p,
                lambda,
                b1,
                b2,
                lower_raw,
                upper_raw,
                lower: lower_raw.clamp(0.0, 1.0),
                upper: upper_raw.clamp(0.0, 1.0),
                simplified_bound: simplified,
                flags: ValidityFlags {
                    closed_form_w_le_1: closed_form,
                    thm2_hypothesis: thm2,
                    quadrature_used,
                    bounds_valid: true,
                },
            }
        }
        Err(e) => {
            let estimate = match e {
                Error::QuadratureNonConvergence { estimate, .. } => estimate,
                _ => f64::NAN,
            };
            BoundReport {
                w,
                z,
                p,
                lambda,
                b1,
                b2: SignedLogReal::from_real(estimate),
                lower_raw: f64::NAN,
                upper_raw: f64::NAN,
                lower: 0.0,
                upper: 1.0,
                simplified_bound: simplified,
                flags: ValidityFlags {
                    closed_form_w_le_1: closed_form,
                    thm2_hypothesis: thm2,
                    quadrature_used,
                    bounds_valid: false,
                },
            }
        }
    }
}

/// Lower and upper bounds on F(w) = P(W < w), with all intermediates.
///
/// Quadrature nonconvergence does not error: the report comes back with
/// `bounds_valid` unset and the widest safe bounds [0, 1].
pub fn cdf_bounds(inst: &CliqueInstance, w: f64) -> BoundReport {
    assert!(w >= 0.0, "cdf_bounds requires w >= 0");
    let z = inst.z_of_w(w);
    let thm2 = thm2_hypothesis(inst, z).is_ok();
    let simplified = if thm2 {
        simplified_bound(inst, z).ok()
    } else {
        None
    };
    assemble_report(
        w,
        z,
        single_prob(inst, w),
        lambda(inst, w),
        b1(inst, w),
        b2(inst, w),
        matches!(inst.model, WeightModel::Uniform01 if w <= 1.0),
        pair_prob_needs_quadrature(inst.model, w),
        thm2,
        simplified,
    )
}

/// Check the simplified bound's hypothesis in its canonical w-form:
/// `w <= min(n^(-2/k), exp(-(k-1)/(k-2)))`.
///
/// The equivalent z-form caps z at `n^(1/m) = n^(2/(k(k-1)))` and
/// `n^(2/(k-1)) exp(-(k-1)/(k-2))`.
pub fn thm2_hypothesis(inst: &CliqueInstance, z: f64) -> Result<()> {
    let w = inst.w_of_z(z);
    // Slack of a few ulps so that a boundary value survives the w <-> z
    // exp/ln round trip.
    let slack = 1.0 + 1e-12;
    let n_cap = (-2.0 / inst.k as f64 * (inst.n as f64).ln()).exp();
    if w > n_cap * slack {
        return Err(Error::Hypothesis(format!(
            "w = {w:.6e} exceeds n^(-2/k) = {n_cap:.6e}"
        )));
    }
    let e_cap = (-((inst.k as f64 - 1.0) / (inst.k as f64 - 2.0))).exp();
    if w > e_cap * slack {
        return Err(Error::Hypothesis(format!(
            "w = {w:.6e} exceeds exp(-(k-1)/(k-2)) = {e_cap:.6e}"
        )));
    }
    Ok(())
}

/// Summation-free envelope for b1 + b2:
/// `(8/7) (k-2) / (m! ((k-1)!)^2) * z^(m+k-1) / n`, valid under
/// `thm2_hypothesis`.
pub fn simplified_bound(inst: &CliqueInstance, z: f64) -> Result<f64> {
    thm2_hypothesis(inst, z)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    let k = inst.k as f64;
    let m = inst.m() as u64;
    let ln = (8f64 / 7.0).ln() + (k - 2.0).ln()
        - log_factorial(m)
        - 2.0 * log_factorial(inst.k as u64 - 1)
        + (m as f64 + k - 1.0) * z.ln()
        - (inst.n as f64).ln();
    Ok(ln.exp())
}

/// One row of the overlap profile used by the simplified-bound analysis.
#[derive(Clone, Copy, Debug)]
pub struct VProfileEntry {
    pub ell: u32,
    /// `v_ell = C(k,ell) n^(k-ell)/(k-ell)! * p * w^(m_ell)/(k-1)!`,
    /// defined for 2 <= ell <= k-1.
    pub v: Option<SignedLogReal>,
    /// `v'_ell = C(k,ell) n^(k-ell)/(k-ell)! * p^2`, up to ell = k.
    pub v_prime: SignedLogReal,
}

/// The envelope quantities v_ell and v'_ell for ell = 2..=k.
pub fn v_profile(inst: &CliqueInstance, w: f64) -> Vec<VProfileEntry> {
    let ln_p = single_prob_ln(inst, w);
    let ln_n = (inst.n as f64).ln();
    let k = inst.k;
    (2..=k)
        .map(|ell| {
            let ln_front = log_binomial(k as u64, ell as u64).expect("ell <= k")
                + (k - ell) as f64 * ln_n
                - log_factorial((k - ell) as u64);
            let v = (ell < k).then(|| {
                let ln_tail = if w == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    m_ell(inst, ell) as f64 * w.ln()
                };
                SignedLogReal::from_ln(ln_front + ln_p + ln_tail - log_factorial(k as u64 - 1))
            });
            VProfileEntry {
                ell,
                v,
                v_prime: SignedLogReal::from_ln(ln_front + 2.0 * ln_p),
            }
        })
        .collect()
}

/// Envelope on b1: `C(n,k) * sum_{ell=2..k} v'_ell`.
pub fn b_prime_1(inst: &CliqueInstance, w: f64) -> SignedLogReal {
    let terms: Vec<f64> = v_profile(inst, w)
        .iter()
        .map(|e| e.v_prime.ln_abs())
        .collect();
    SignedLogReal::from_ln(inst.ln_host_binomial() + log_sum_exp(&terms))
}

/// Envelope on b2: `C(n,k) * sum_{ell=2..k-1} v_ell`.
pub fn b_prime_2(inst: &CliqueInstance, w: f64) -> SignedLogReal {
    let terms: Vec<f64> = v_profile(inst, w)
        .iter()
        .filter_map(|e| e.v.map(|v| v.ln_abs()))
        .collect();
    SignedLogReal::from_ln(inst.ln_host_binomial() + log_sum_exp(&terms))
}

/// Bound reports over a strictly increasing weight grid, with the lower
/// bound replaced by its running maximum (the upper bound is already
/// nondecreasing on the closed-form domain).
pub fn cdf_curve(inst: &CliqueInstance, grid: &[f64]) -> Result<Vec<BoundReport>> {
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Domain(format!(
                "curve grid must be strictly increasing ({} then {})",
                pair[0], pair[1]
            )));
        }
    }
    if let Some(&first) = grid.first() {
        if first < 0.0 {
            return Err(Error::Domain("curve grid starts below 0".into()));
        }
    }
    use rayon::prelude::*;
    let mut reports: Vec<BoundReport> = grid.par_iter().map(|&w| cdf_bounds(inst, w)).collect();
    let mut running = 0.0f64;
    for r in &mut reports {
        running = running.max(r.lower);
        r.lower = running;
    }
    Ok(reports)
}

/// Dense evaluation of the two bound curves with helpers for root-finding,
/// monotonized-lower queries and the max-gap search.
pub(crate) struct CurveContext<'a> {
    inst: &'a CliqueInstance,
    ws: Vec<f64>,
    /// Running maximum of the clamped lower bound and the index achieving it.
    runmax: Vec<f64>,
    runarg: Vec<usize>,
    up: Vec<f64>,
    w_max: f64,
}

impl<'a> CurveContext<'a> {
    pub(crate) fn build(inst: &'a CliqueInstance, w_max: f64) -> Self {
        use rayon::prelude::*;
        let n = GAP_GRID_POINTS;
        let ws: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                w_max * 10f64.powf(-GRID_SPAN_DECADES * (1.0 - t))
            })
            .collect();
        let pairs: Vec<(f64, f64)> = ws
            .par_iter()
            .map(|&w| {
                let (mid, err) = raw_parts(inst, w);
                ((mid - err).clamp(0.0, 1.0), (mid + err).clamp(0.0, 1.0))
            })
            .collect();
        let low: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let up: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let mut runmax = Vec::with_capacity(n);
        let mut runarg = Vec::with_capacity(n);
        let mut best = f64::NEG_INFINITY;
        let mut besti = 0usize;
        for (i, &l) in low.iter().enumerate() {
            if l > best {
                best = l;
                besti = i;
            }
            runmax.push(best);
            runarg.push(besti);
        }
        Self {
            inst,
            ws,
            runmax,
            runarg,
            up,
            w_max,
        }
    }

    pub(crate) fn upper_at(&self, w: f64) -> f64 {
        let (mid, err) = raw_parts(self.inst, w);
        (mid + err).clamp(0.0, 1.0)
    }

    fn lower_clamped_at(&self, w: f64) -> f64 {
        let (mid, err) = raw_parts(self.inst, w);
        (mid - err).clamp(0.0, 1.0)
    }

    /// Monotonized lower bound: sup of the clamped lower bound over (0, w].
    pub(crate) fn mono_lower_at(&self, w: f64) -> f64 {
        let mut best = self.lower_clamped_at(w);
        let j = self.ws.partition_point(|&x| x <= w);
        if j == 0 {
            return best;
        }
        let j = j - 1;
        best = best.max(self.runmax[j]);
        // Refine around the grid argmax: the true peak can sit between
        // grid points.
        let ja = self.runarg[j];
        let lo = if ja > 0 { self.ws[ja - 1] } else { self.ws[0] };
        let hi = self.ws.get(ja + 1).copied().unwrap_or(self.w_max).min(w);
        if hi > lo {
            best = best.max(golden_max(|x| self.lower_clamped_at(x), lo, hi).1);
        }
        // And between the last grid point <= w and w itself.
        if w > self.ws[j] {
            best = best.max(golden_max(|x| self.lower_clamped_at(x), self.ws[j], w).1);
        }
        best
    }

    pub(crate) fn sup_mono_lower(&self) -> f64 {
        self.mono_lower_at(self.w_max)
    }

    /// The w where the upper bound crosses `target` (the curve is
    /// nondecreasing on the closed-form domain).  Returns the bracket side
    /// on which the bound is still <= target, so that re-evaluating at the
    /// root never overshoots.
    pub(crate) fn bisect_upper(&self, target: f64) -> Option<f64> {
        if self.upper_at(self.w_max) < target {
            return None;
        }
        Some(bisect(|w| self.upper_at(w), 0.0, self.w_max, target).0)
    }

    /// The w where the monotonized lower bound reaches `target` (side on
    /// which the bound is >= target).
    pub(crate) fn bisect_mono_lower(&self, target: f64) -> Option<f64> {
        if self.sup_mono_lower() < target {
            return None;
        }
        Some(bisect(|w| self.mono_lower_at(w), 0.0, self.w_max, target).1)
    }

    /// Largest pointwise gap between the upper bound and the monotonized
    /// lower bound: grid scan plus local refinement (the maximum sits at a
    /// corner where the upper bound saturates, which the grid straddles).
    pub(crate) fn max_gap(&self) -> f64 {
        let mut besti = 0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..self.ws.len() {
            let g = self.up[i] - self.runmax[i];
            if g > best {
                best = g;
                besti = i;
            }
        }
        let lo = if besti > 0 {
            self.ws[besti - 1]
        } else {
            self.ws[0]
        };
        let hi = self.ws.get(besti + 1).copied().unwrap_or(self.w_max);
        let refined = golden_max(|w| self.upper_at(w) - self.mono_lower_at(w), lo, hi).1;
        best.max(refined)
    }
}

/// (1 - exp(-lambda), b1 + b2) in linear scale.  A quadrature failure
/// degrades to an infinite error term, i.e. the widest safe bounds.
fn raw_parts(inst: &CliqueInstance, w: f64) -> (f64, f64) {
    let mid = -(-lambda(inst, w).to_real()).exp_m1();
    let err = match b2(inst, w) {
        Ok(b2) => (b1(inst, w) + b2).to_real(),
        Err(_) => f64::INFINITY,
    };
    (mid, err)
}

/// Bisect a nondecreasing function to `f(lo) < target <= f(hi)` and return
/// the final bracket.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> (f64, f64) {
    for _ in 0..BISECT_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= BISECT_REL_TOL * hi {
            break;
        }
    }
    (lo, hi)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..120 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if (b - a).abs() <= 1e-14 * b.abs().max(1e-300) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x).max(fc).max(fd))
}

/// Quality measures of the bound pair for one (k, n), mirroring the summary
/// table: lower-tail calibration, bounds at the estimated mean, upper-tail
/// calibration, and the maximum gap.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct TableRow {
    pub k: u32,
    pub n: u64,
    /// Monotonized lower bound at the w where the upper bound is 0.05.
    pub col_005: f64,
    /// Asymptotic mean estimate of W.
    pub mu_hat: f64,
    pub lb_at_mu: f64,
    pub ub_at_mu: f64,
    /// Upper bound at the w where the monotonized lower bound is 0.95;
    /// absent when the lower bound never reaches 0.95.
    pub col_095: Option<f64>,
    /// max over w of (upper - monotonized lower).
    pub max_gap: f64,
}

impl TableRow {
    pub fn csv_header() -> &'static str {
        "k,n,col_005,mu_hat,lb_at_mu,ub_at_mu,col_095,max_gap"
    }

    /// Five decimals, mirroring the table convention; absent entries print
    /// as `---`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.5},{:.5},{:.5},{:.5},{},{:.5}",
            self.k,
            self.n,
            self.col_005,
            self.mu_hat,
            self.lb_at_mu,
            self.ub_at_mu,
            self.col_095
                .map_or_else(|| "---".to_string(), |v| format!("{v:.5}")),
            self.max_gap
        )
    }
}

/// Build the quality-measure row for this instance (uniform weights,
/// closed-form domain).
pub fn table_stats(inst: &CliqueInstance) -> Result<TableRow> {
    if inst.model != WeightModel::Uniform01 {
        return Err(Error::Domain(
            "table statistics are defined for the uniform model".into(),
        ));
    }
    let clique = GraphSpec::clique(inst.k, true)?;
    let mu_hat = subgraphs::asymptotic_mean(&clique, inst.n)?;
    if mu_hat > 1.0 {
        return Err(Error::Domain(format!(
            "estimated mean {mu_hat:.5} exceeds the closed-form domain w <= 1; \
             bounds at the mean are not accessible for k={} n={}",
            inst.k, inst.n
        )));
    }
    let ctx = CurveContext::build(inst, 1.0);
    let w05 = ctx.bisect_upper(0.05).ok_or_else(|| {
        Error::Domain("the upper bound stays below 0.05 on the whole domain".into())
    })?;
    let col_005 = ctx.mono_lower_at(w05);
    let lb_at_mu = ctx.mono_lower_at(mu_hat);
    let ub_at_mu = ctx.upper_at(mu_hat);
    let col_095 = ctx.bisect_mono_lower(0.95).map(|w95| ctx.upper_at(w95));
    // The pointwise gap at the mean is itself a candidate for the maximum.
    let max_gap = ctx.max_gap().max(ub_at_mu - lb_at_mu);
    Ok(TableRow {
        k: inst.k,
        n: inst.n,
        col_005,
        mu_hat,
        lb_at_mu,
        ub_at_mu,
        col_095,
        max_gap,
    })
}

/// Which tail an observed minimum weight is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Lower,
    Upper,
}

impl std::str::FromStr for Tail {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lower" => Ok(Tail::Lower),
            "upper" => Ok(Tail::Upper),
            other => Err(Error::Config(format!("unknown tail {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Significance {
    Significant,
    NotSignificant,
    Indeterminate,
}

/// Outcome of a one-tailed significance test of an observed minimum weight.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TestVerdict {
    pub observed_w: f64,
    pub tail: Tail,
    pub alpha: f64,
    /// Monotonized lower / upper CDF bound at the observation.
    pub f_minus: f64,
    pub f_plus: f64,
    /// Certified interval for the p-value of the observation.
    pub p_lower: f64,
    pub p_upper: f64,
    pub outcome: Significance,
    pub explanation: String,
}

/// One-tailed test: is the observed minimum weight anomalously small
/// (lower tail) or large (upper tail) under the i.i.d. null?
pub fn significance_test(
    inst: &CliqueInstance,
    observed_w: f64,
    tail: Tail,
    alpha: f64,
) -> Result<TestVerdict> {
    if observed_w < 0.0 {
        return Err(Error::Domain(format!(
            "observed weight must be >= 0, got {observed_w}"
        )));
    }
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 0.5], got {alpha}"
        )));
    }
    if observed_w > inst.domain_max() {
        return Ok(TestVerdict {
            observed_w,
            tail,
            alpha,
            f_minus: f64::NAN,
            f_plus: f64::NAN,
            p_lower: 0.0,
            p_upper: 1.0,
            outcome: Significance::Indeterminate,
            explanation: format!(
                "observed weight {observed_w} lies outside the closed-form domain \
                 (w <= {}); no bound is available there",
                inst.domain_max()
            ),
        });
    }
    let (f_minus, f_plus) = if observed_w == 0.0 {
        (0.0, 0.0)
    } else {
        let ctx = CurveContext::build(inst, observed_w);
        (ctx.mono_lower_at(observed_w), ctx.upper_at(observed_w))
    };
    let (p_lower, p_upper) = match tail {
        Tail::Lower => (f_minus, f_plus),
        Tail::Upper => (1.0 - f_plus, 1.0 - f_minus),
    };
    let (outcome, explanation) = if p_upper <= alpha {
        (
            Significance::Significant,
            format!("the p-value is at most {p_upper:.6e} <= alpha"),
        )
    } else if p_lower > alpha {
        (
            Significance::NotSignificant,
            format!("the p-value is at least {p_lower:.6e} > alpha"),
        )
    } else {
        (
            Significance::Indeterminate,
            format!(
                "alpha = {alpha} falls inside the certified p-value interval \
                 [{p_lower:.6e}, {p_upper:.6e}]"
            ),
        )
    };
    Ok(TestVerdict {
        observed_w,
        tail,
        alpha,
        f_minus,
        f_plus,
        p_lower,
        p_upper,
        outcome,
        explanation,
    })
}
