//! Adaptive Gauss-Legendre quadrature.
//!
//! Worst-segment-first global refinement: every segment carries a two-rule
//! error estimate (20-point vs 10-point Gauss-Legendre) and the segment with
//! the largest error is bisected until the summed error meets the relative
//! tolerance or a segment hits the per-panel depth limit.
//!
//! Two drivers: `integrate` for ordinary integrands and `integrate_ln_split`
//! for non-negative integrands supplied as their natural log, accumulated in
//! log-domain so that integrals near 1e-200 survive.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use super::logreal::SignedLogReal;
use crate::error::{Error, Result};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], by
/// Newton iteration on the Legendre recurrence.
fn gl_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let pj = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = pj;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn rules() -> &'static [(Vec<f64>, Vec<f64>); 2] {
    static RULES: OnceLock<[(Vec<f64>, Vec<f64>); 2]> = OnceLock::new();
    RULES.get_or_init(|| [gl_nodes(20), gl_nodes(10)])
}

fn panel_with(rule: &(Vec<f64>, Vec<f64>), f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (&x, &w) in rule.0.iter().zip(&rule.1) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

struct Seg {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
    depth: u32,
}

impl Seg {
    fn eval(f: &dyn Fn(f64) -> f64, a: f64, b: f64, depth: u32) -> Self {
        let [hi, lo] = rules();
        let val = panel_with(hi, f, a, b);
        let err = (val - panel_with(lo, f, a, b)).abs();
        Seg {
            a,
            b,
            val,
            err,
            depth,
        }
    }
}

impl PartialEq for Seg {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Seg {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrate `f` over `[a, b]` to relative tolerance `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    integrate_split(f, &[a, b], rel_tol, max_depth)
}

/// Integrate over the union of panels delimited by `points` (sorted).
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let f: &dyn Fn(f64) -> f64 = &f;
    let mut heap: BinaryHeap<Seg> = points
        .windows(2)
        .filter(|p| p[1] > p[0])
        .map(|p| Seg::eval(f, p[0], p[1], 0))
        .collect();
    loop {
        let total: f64 = heap.iter().map(|s| s.val).sum();
        let total_err: f64 = heap.iter().map(|s| s.err).sum();
        if total_err <= rel_tol * total.abs().max(1e-300) || total_err == 0.0 {
            return Ok(total);
        }
        let worst = heap.pop().expect("nonempty heap while error positive");
        if worst.depth >= max_depth || worst.err == 0.0 {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                achieved: total_err / total.abs().max(1e-300),
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(Seg::eval(f, worst.a, mid, worst.depth + 1));
        heap.push(Seg::eval(f, mid, worst.b, worst.depth + 1));
    }
}

struct SegLn {
    a: f64,
    b: f64,
    val: SignedLogReal,
    err: SignedLogReal,
    depth: u32,
}

impl SegLn {
    fn eval(ln_f: &dyn Fn(f64) -> f64, a: f64, b: f64, depth: u32) -> Self {
        let [hi, lo] = rules();
        let val = panel_ln_with(hi, ln_f, a, b);
        let err = (val - panel_ln_with(lo, ln_f, a, b)).abs();
        SegLn {
            a,
            b,
            val,
            err,
            depth,
        }
    }
}

impl PartialEq for SegLn {
    fn eq(&self, other: &Self) -> bool {
        self.err.ln_abs() == other.err.ln_abs()
    }
}
impl Eq for SegLn {}
impl PartialOrd for SegLn {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for SegLn {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.ln_abs().total_cmp(&other.err.ln_abs())
    }
}

/// One Gauss panel of a log-scale integrand, with max extraction so that the
/// weighted sum never under- or overflows.
fn panel_ln_with(
    rule: &(Vec<f64>, Vec<f64>),
    ln_f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
) -> SignedLogReal {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut logs = Vec::with_capacity(rule.0.len());
    let mut max = f64::NEG_INFINITY;
    for &x in &rule.0 {
        let v = ln_f(mid + half * x);
        logs.push(v);
        max = max.max(v);
    }
    if max == f64::NEG_INFINITY {
        return SignedLogReal::ZERO;
    }
    let mut acc = 0.0;
    for (lg, &w) in logs.iter().zip(&rule.1) {
        acc += w * (lg - max).exp();
    }
    // Weights are positive and one term equals its weight, so acc > 0.
    SignedLogReal::from_ln(max + acc.ln() + half.ln())
}

/// Integrate a non-negative integrand given as its natural log over the
/// panels delimited by `points`; the result stays in log-domain.
pub fn integrate_ln_split<F: Fn(f64) -> f64>(
    ln_f: F,
    points: &[f64],
    rel_tol: f64,
    max_depth: u32,
) -> Result<SignedLogReal> {
    let ln_f: &dyn Fn(f64) -> f64 = &ln_f;
    let mut heap: BinaryHeap<SegLn> = points
        .windows(2)
        .filter(|p| p[1] > p[0])
        .map(|p| SegLn::eval(ln_f, p[0], p[1], 0))
        .collect();
    loop {
        let total = heap.iter().fold(SignedLogReal::ZERO, |acc, s| acc + s.val);
        let total_err = heap.iter().fold(SignedLogReal::ZERO, |acc, s| acc + s.err);
        if total_err.is_zero() || total_err.ln_abs() <= rel_tol.ln() + total.ln_abs() {
            return Ok(total);
        }
        let worst = heap.pop().expect("nonempty heap while error positive");
        if worst.depth >= max_depth || worst.err.is_zero() {
            return Err(Error::QuadratureNonConvergence {
                estimate: total.to_real(),
                achieved: (total_err.ln_abs() - total.ln_abs()).exp(),
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(SegLn::eval(ln_f, worst.a, mid, worst.depth + 1));
        heap.push(SegLn::eval(ln_f, mid, worst.b, worst.depth + 1));
    }
}
