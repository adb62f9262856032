//! Irwin-Hall distribution: the sum of m i.i.d. uniform [0,1] variables.
//!
//! The alternating series for the CDF cancels catastrophically in floating
//! point once m reaches the mid-40s, so both CDF and PDF are evaluated in
//! exact rational arithmetic (the f64 argument converts to an exact dyadic
//! rational) and rounded to float only at the end, carrying
//! `PrecisionConfig::working_bits` bits through the final division.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::precision::PrecisionConfig;

fn big_binomial(n: u32, k: u32) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn big_factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Round a positive or negative rational to f64 with `bits` of quotient.
pub(crate) fn big_ratio_to_f64(r: &BigRational, bits: u32) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs();
    let den = r.denom().abs();
    let shift = bits as i64 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    sign * q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-shift as i32)
}

/// ln of a positive rational, exact to f64 rounding even when the value
/// itself would under- or overflow.
pub(crate) fn ln_big_ratio(r: &BigRational) -> f64 {
    debug_assert!(r.is_positive());
    ln_big(r.numer()) - ln_big(r.denom())
}

fn ln_big(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    if let Some(v) = x.to_f64().filter(|v| v.is_finite()) {
        v.ln()
    } else {
        let shift = x.bits() - 64;
        (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Exact rational value of the Irwin-Hall CDF at 0 < w < m:
/// `(1/m!) sum_{i<=floor(w)} (-1)^i C(m,i) (w-i)^m`.
fn cdf_rational(m: u32, w: f64) -> BigRational {
    let wr = BigRational::from_float(w).expect("finite weight");
    let mut acc = BigRational::zero();
    let top = (w.floor() as u32).min(m);
    for i in 0..=top {
        let base = &wr - BigRational::from(BigInt::from(i));
        if base.is_negative() || base.is_zero() {
            break;
        }
        let mut term = BigRational::from(big_binomial(m, i));
        term *= pow_rational(&base, m);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / BigRational::from(big_factorial(m))
}

fn pdf_rational(m: u32, w: f64) -> BigRational {
    let wr = BigRational::from_float(w).expect("finite weight");
    let mut acc = BigRational::zero();
    let top = (w.floor() as u32).min(m);
    for i in 0..=top {
        let base = &wr - BigRational::from(BigInt::from(i));
        if base.is_negative() || base.is_zero() {
            break;
        }
        let mut term = BigRational::from(big_binomial(m, i));
        term *= pow_rational(&base, m - 1);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / BigRational::from(big_factorial(m - 1))
}

fn pow_rational(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// CDF of the sum of `m` uniforms; 0 below 0, 1 above m.
pub fn irwin_hall_cdf(m: u32, w: f64, cfg: &PrecisionConfig) -> f64 {
    assert!(m >= 1, "irwin_hall_cdf requires m >= 1");
    if w <= 0.0 {
        return 0.0;
    }
    if w >= m as f64 {
        return 1.0;
    }
    if w <= 1.0 {
        // Single-term simplex volume w^m / m!.
        return (m as f64 * w.ln() - super::special::log_factorial(m as u64)).exp();
    }
    big_ratio_to_f64(&cdf_rational(m, w), cfg.working_bits())
}

/// Natural log of the CDF (`NEG_INFINITY` below 0, 0 above m); stays finite
/// where the linear-scale value would underflow.
pub fn irwin_hall_ln_cdf(m: u32, w: f64, cfg: &PrecisionConfig) -> f64 {
    assert!(m >= 1);
    if w <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if w >= m as f64 {
        return 0.0;
    }
    if w <= 1.0 {
        return m as f64 * w.ln() - super::special::log_factorial(m as u64);
    }
    let _ = cfg;
    let exact = cdf_rational(m, w);
    if exact.is_zero() {
        f64::NEG_INFINITY
    } else {
        ln_big_ratio(&exact)
    }
}

/// Density of the sum of `m` uniforms (right-continuous at 0).
pub fn irwin_hall_pdf(m: u32, w: f64, cfg: &PrecisionConfig) -> f64 {
    assert!(m >= 1, "irwin_hall_pdf requires m >= 1");
    if w == 0.0 {
        return if m == 1 { 1.0 } else { 0.0 };
    }
    if w <= 0.0 || w >= m as f64 {
        return 0.0;
    }
    if w <= 1.0 {
        return ((m as f64 - 1.0) * w.ln() - super::special::log_factorial(m as u64 - 1)).exp();
    }
    big_ratio_to_f64(&pdf_rational(m, w), cfg.working_bits())
}

/// Natural log of the density.
pub fn irwin_hall_ln_pdf(m: u32, w: f64, cfg: &PrecisionConfig) -> f64 {
    assert!(m >= 1);
    if w == 0.0 && m == 1 {
        return 0.0;
    }
    if w <= 0.0 || w >= m as f64 {
        return f64::NEG_INFINITY;
    }
    if w <= 1.0 {
        return (m as f64 - 1.0) * w.ln() - super::special::log_factorial(m as u64 - 1);
    }
    let _ = cfg;
    let exact = pdf_rational(m, w);
    if exact.is_positive() {
        ln_big_ratio(&exact)
    } else {
        f64::NEG_INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn simplex_volume_below_one() {
        close(irwin_hall_cdf(3, 0.5, &cfg()), 1.0 / 48.0, 1e-16);
        close(irwin_hall_cdf(1, 0.25, &cfg()), 0.25, 1e-16);
    }

    #[test]
    fn symmetry_at_midpoint() {
        for m in [1u32, 2, 3, 5, 10, 20, 45] {
            close(irwin_hall_cdf(m, m as f64 / 2.0, &cfg()), 0.5, 1e-12);
        }
    }

    #[test]
    fn symmetry_identity_everywhere() {
        for m in [2u32, 5, 12, 30, 45] {
            for i in 1..20 {
                let w = m as f64 * i as f64 / 20.0;
                let s = irwin_hall_cdf(m, w, &cfg()) + irwin_hall_cdf(m, m as f64 - w, &cfg());
                close(s, 1.0, 1e-10);
            }
        }
    }

    #[test]
    fn monotone_with_exact_endpoints() {
        for m in [1u32, 3, 7, 20, 45] {
            let mut prev = -1.0;
            for i in 0..=200 {
                let w = m as f64 * i as f64 / 200.0;
                let c = irwin_hall_cdf(m, w, &cfg());
                assert!(c >= prev, "m={m} w={w}");
                prev = c;
            }
            assert_eq!(irwin_hall_cdf(m, 0.0, &cfg()), 0.0);
            assert_eq!(irwin_hall_cdf(m, m as f64, &cfg()), 1.0);
        }
    }

    /// Monte-Carlo oracle for a mid-range argument where the alternating
    /// series actually alternates.
    #[test]
    fn monte_carlo_oracle_m5() {
        close(irwin_hall_cdf(5, 2.5, &cfg()), 0.5, 1e-12);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_240_801);
        let trials = 1_000_000u32;
        let mut hits = 0u32;
        for _ in 0..trials {
            let s: f64 = (0..5).map(|_| rng.gen::<f64>()).sum();
            if s <= 1.7 {
                hits += 1;
            }
        }
        let emp = hits as f64 / trials as f64;
        let p = irwin_hall_cdf(5, 1.7, &cfg());
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((emp - p).abs() <= 3.0 * se, "emp {emp} vs {p} (se {se})");
    }

    #[test]
    fn pdf_matches_cdf_derivative() {
        close(irwin_hall_pdf(1, 0.5, &cfg()), 1.0, 1e-15);
        close(irwin_hall_pdf(2, 1.0 - 1e-9, &cfg()), 1.0, 1e-6);
        for (m, w) in [(4u32, 1.3f64), (7, 3.9), (45, 13.7)] {
            let h = 1e-5;
            let fd =
                (irwin_hall_cdf(m, w + h, &cfg()) - irwin_hall_cdf(m, w - h, &cfg())) / (2.0 * h);
            close(irwin_hall_pdf(m, w, &cfg()), fd, 1e-6);
        }
    }

    #[test]
    fn deep_tail_log_form_stays_finite() {
        // m = 45 at w = 0.1: the CDF is ~1e-130; the log form must not lose it.
        let lc = irwin_hall_ln_cdf(45, 0.1, &cfg());
        close(
            lc,
            45.0 * 0.1f64.ln() - crate::numerics::special::log_factorial(45),
            1e-10,
        );
        // And just above 1 the rational path takes over continuously.
        let below = irwin_hall_ln_cdf(45, 1.0 - 1e-12, &cfg());
        let above = irwin_hall_ln_cdf(45, 1.0 + 1e-12, &cfg());
        assert!((below - above).abs() < 1e-9);
    }
}
