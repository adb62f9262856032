//! Reproducible Monte-Carlo sampling of the minimum copy weight W, and the
//! checks that compare empirical distributions against the analytic bounds.
//!
//! # Seeding scheme
//!
//! Trial i draws from a dedicated ChaCha8 stream whose 32-byte key is, in
//! little-endian order: bytes 0..8 the master seed, bytes 8..16 the trial
//! index i, bytes 16..24 the constant 0x9E3779B97F4A7C15, bytes 24..32 the
//! constant 0xD1B54A32D192ED03.  Within a trial, one uniform variate is
//! drawn per unordered pair (i, j), i < j, in lexicographic row order, and
//! mapped through the weight model's quantile function.  The scheme is a
//! pure function of (master_seed, trial index), so results are independent
//! of thread count and execution order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cliques::BoundReport;
use crate::error::{Error, Result};
use crate::solver::{self, WeightMatrix};
use crate::subgraphs::GraphSpec;
use crate::weights::WeightModel;

/// What to search for in each sampled matrix.
#[derive(Clone, Debug)]
pub enum Target {
    Clique(u32),
    Subgraph(GraphSpec),
}

/// Sorted Monte-Carlo samples of W with full provenance.
#[derive(Clone, Debug)]
pub struct EmpiricalCdf {
    /// Ascending minimum weights, one per trial.
    pub samples: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub n: u64,
    pub target: Target,
    pub model: WeightModel,
}

impl EmpiricalCdf {
    /// Empirical P(W < w).
    pub fn cdf_at(&self, w: f64) -> f64 {
        self.samples.partition_point(|&s| s < w) as f64 / self.trials as f64
    }

    /// Empirical P(W >= w) = 1 - cdf.
    pub fn survival_at(&self, w: f64) -> f64 {
        1.0 - self.cdf_at(w)
    }

    pub fn sample_mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.trials as f64
    }

    /// Standard error of the sample mean.
    pub fn std_error(&self) -> f64 {
        let mean = self.sample_mean();
        let var = self
            .samples
            .iter()
            .map(|&x| (x - mean) * (x - mean))
            .sum::<f64>()
            / (self.trials as f64 - 1.0);
        (var / self.trials as f64).sqrt()
    }

    /// One W per line with a provenance header.
    pub fn to_csv(&self) -> String {
        let target = match &self.target {
            Target::Clique(k) => format!("k={k}"),
            Target::Subgraph(g) => format!("subgraph v={} m={}", g.vertex_count(), g.edge_count()),
        };
        let mut out = format!(
            "# n={} {} dist={} trials={} seed={}\nw\n",
            self.n, target, self.model, self.trials, self.master_seed
        );
        for s in &self.samples {
            out.push_str(&format!("{s:.17e}\n"));
        }
        out
    }
}

/// The per-trial generator for the documented counter scheme.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial_index.to_le_bytes());
    key[16..24].copy_from_slice(&0x9E37_79B9_7F4A_7C15u64.to_le_bytes());
    key[24..32].copy_from_slice(&0xD1B5_4A32_D192_ED03u64.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Sample one weight matrix under the coupling rule: uniforms through the
/// model's quantile.
fn sample_matrix(n: u64, model: WeightModel, master_seed: u64, trial: u64) -> WeightMatrix {
    let mut rng = trial_rng(master_seed, trial);
    WeightMatrix::from_fn(n as usize, master_seed, |_, _| {
        model
            .quantile(rng.gen::<f64>())
            .expect("uniform draws lie in [0,1)")
    })
    .expect("quantiles of nonnegative laws are finite and nonnegative")
}

/// Hosts at least this large take the streaming triangle path.
const STREAMING_TRIANGLE_MIN_N: u64 = 200;

/// Minimum triangle weight without materializing the n x n matrix: stream
/// the per-trial uniforms in the documented edge order, keep edges whose
/// uniform is below a threshold, and solve the light subgraph exactly.  Any
/// unexamined triangle contains an edge heavier than the threshold weight,
/// so a light optimum at most that weight is globally optimal; otherwise the
/// threshold quadruples and the same stream is replayed.
fn stream_min_triangle(n: u64, model: WeightModel, master_seed: u64, trial: u64) -> f64 {
    let n = n as usize;
    let mut u_cap = (40.0 / n as f64).min(1.0);
    loop {
        let mut rng = trial_rng(master_seed, trial);
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let u = rng.gen::<f64>();
                if u <= u_cap {
                    let w = model.quantile(u).expect("uniform draws lie in [0,1)");
                    adj[i].push((j as u32, w));
                    adj[j].push((i as u32, w));
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        let mut best = f64::INFINITY;
        for i in 0..n {
            for &(j, wij) in &adj[i] {
                if (j as usize) <= i {
                    continue;
                }
                // Merge the sorted neighbor lists of i and j.
                let (a, b) = (&adj[i], &adj[j as usize]);
                let (mut x, mut y) = (0, 0);
                while x < a.len() && y < b.len() {
                    match a[x].0.cmp(&b[y].0) {
                        std::cmp::Ordering::Less => x += 1,
                        std::cmp::Ordering::Greater => y += 1,
                        std::cmp::Ordering::Equal => {
                            let total = wij + a[x].1 + b[y].1;
                            if total < best {
                                best = total;
                            }
                            x += 1;
                            y += 1;
                        }
                    }
                }
            }
        }
        let w_cap = model.quantile(u_cap).expect("u_cap lies in [0,1]");
        if best <= w_cap || u_cap >= 1.0 {
            return best;
        }
        u_cap = (u_cap * 4.0).min(1.0);
    }
}

/// Run independent trials and collect the empirical distribution of W.
pub fn run_trials(
    n: u64,
    target: Target,
    model: WeightModel,
    trials: u64,
    master_seed: u64,
) -> Result<EmpiricalCdf> {
    if trials < 1 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let results: Result<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|i| match &target {
            Target::Clique(3) if n >= STREAMING_TRIANGLE_MIN_N => {
                Ok(stream_min_triangle(n, model, master_seed, i))
            }
            Target::Clique(k) => {
                let wm = sample_matrix(n, model, master_seed, i);
                Ok(solver::min_weight_clique(&wm, *k)?.weight)
            }
            Target::Subgraph(g) => {
                let wm = sample_matrix(n, model, master_seed, i);
                Ok(solver::min_weight_subgraph(&wm, g, false)?.weight)
            }
        })
        .collect();
    let mut samples = results?;
    samples.sort_unstable_by(f64::total_cmp);
    Ok(EmpiricalCdf {
        samples,
        trials,
        master_seed,
        n,
        target,
        model,
    })
}

/// Result of the uniform-band containment check of an empirical CDF against
/// an analytic bound envelope.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EnvelopeReport {
    /// Half-width of the uniform confidence band.
    pub epsilon: f64,
    pub delta: f64,
    pub points_checked: usize,
    /// Largest excursion outside [lower - eps, upper + eps] (<= 0 if inside).
    pub worst_margin: f64,
    pub worst_w: f64,
    pub pass: bool,
}

/// Check that the empirical CDF stays within [lower - eps, upper + eps] at
/// every curve point, with the Dvoretzky-Kiefer-Wolfowitz half-width
/// `eps = sqrt(ln(2/delta) / (2 trials))`.
pub fn envelope_check(emp: &EmpiricalCdf, curve: &[BoundReport], delta: f64) -> EnvelopeReport {
    let epsilon = ((2.0 / delta).ln() / (2.0 * emp.trials as f64)).sqrt();
    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst_w = f64::NAN;
    for r in curve {
        let f = emp.cdf_at(r.w);
        let margin = (r.lower - epsilon - f).max(f - (r.upper + epsilon));
        if margin > worst_margin {
            worst_margin = margin;
            worst_w = r.w;
        }
    }
    EnvelopeReport {
        epsilon,
        delta,
        points_checked: curve.len(),
        worst_margin,
        worst_w,
        pass: worst_margin <= 0.0,
    }
}

/// Sample-mean comparison against an analytic mean estimate.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MeanReport {
    pub sample_mean: f64,
    pub std_error: f64,
    pub mu_hat: f64,
    pub ratio: f64,
    /// |sample_mean - mu_hat| in units of the standard error.
    pub sigmas: f64,
}

pub fn mean_check(emp: &EmpiricalCdf, mu_hat: f64) -> MeanReport {
    let sample_mean = emp.sample_mean();
    let std_error = emp.std_error();
    MeanReport {
        sample_mean,
        std_error,
        mu_hat,
        ratio: sample_mean / mu_hat,
        sigmas: (sample_mean - mu_hat).abs() / std_error,
    }
}
