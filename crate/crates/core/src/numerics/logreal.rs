//! Signed log-domain reals.
//!
//! Every probability-scale quantity in the bound engine is assembled as a
//! `SignedLogReal`: binomial coefficients near 10^63 multiply Irwin-Hall tail
//! probabilities near 10^-150, and neither factor fits an `f64`.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// `sign` is -1, 0 or +1; `logmag` is meaningless when `sign == 0`.
#[derive(Clone, Copy, Debug)]
pub struct SignedLogReal {
    sign: i8,
    logmag: f64,
}

impl serde::Serialize for SignedLogReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SignedLogReal", 3)?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("ln_abs", &self.ln_abs())?;
        st.serialize_field("value", &self.to_real())?;
        st.end()
    }
}

impl SignedLogReal {
    pub const ZERO: Self = Self {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };

    pub const ONE: Self = Self {
        sign: 1,
        logmag: 0.0,
    };

    /// Encode an ordinary float.
    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x > 0.0 { 1 } else { -1 },
                logmag: x.abs().ln(),
            }
        }
    }

    /// A positive value given as its natural log (`NEG_INFINITY` encodes zero).
    pub fn from_ln(logmag: f64) -> Self {
        if logmag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: 1, logmag }
        }
    }

    pub fn from_sign_ln(sign: i8, logmag: f64) -> Self {
        if sign == 0 || logmag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                logmag,
            }
        }
    }

    /// Decode; overflows to `±inf` and underflows to `±0` like any `exp`.
    pub fn to_real(self) -> f64 {
        match self.sign {
            0 => 0.0,
            1 => self.logmag.exp(),
            _ => -self.logmag.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(self) -> bool {
        self.sign > 0
    }

    pub fn signum(self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; `NEG_INFINITY` for zero.
    pub fn ln_abs(self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.logmag
        }
    }

    pub fn abs(self) -> Self {
        Self {
            sign: self.sign.abs(),
            logmag: self.logmag,
        }
    }

    /// Relative difference |a-b| / max(|a|,|b|), in linear scale.  Used by
    /// tests and adaptive refinement; returns 0 when both are zero.
    pub fn rel_diff(self, other: Self) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        let diff = (self - other).abs();
        let scale = self.logmag.max(other.logmag);
        (diff.ln_abs() - scale).exp()
    }
}

impl Mul for SignedLogReal {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            Self::ZERO
        } else {
            Self {
                sign: self.sign * rhs.sign,
                logmag: self.logmag + rhs.logmag,
            }
        }
    }
}

impl Add for SignedLogReal {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        if self.sign == rhs.sign {
            let (hi, lo) = if self.logmag >= rhs.logmag {
                (self.logmag, rhs.logmag)
            } else {
                (rhs.logmag, self.logmag)
            };
            return Self {
                sign: self.sign,
                logmag: hi + (lo - hi).exp().ln_1p(),
            };
        }
        // Opposite signs: log-diff-exp, the larger magnitude wins.
        match self
            .logmag
            .partial_cmp(&rhs.logmag)
            .unwrap_or(Ordering::Equal)
        {
            Ordering::Equal => Self::ZERO,
            Ordering::Greater => Self {
                sign: self.sign,
                logmag: self.logmag + (-(rhs.logmag - self.logmag).exp()).ln_1p(),
            },
            Ordering::Less => Self {
                sign: rhs.sign,
                logmag: rhs.logmag + (-(self.logmag - rhs.logmag).exp()).ln_1p(),
            },
        }
    }
}

impl Neg for SignedLogReal {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            logmag: self.logmag,
        }
    }
}

impl Sub for SignedLogReal {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl PartialEq for SignedLogReal {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.logmag == other.logmag)
    }
}

impl PartialOrd for SignedLogReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.logmag.partial_cmp(&other.logmag),
                _ => other.logmag.partial_cmp(&self.logmag),
            },
            ord => Some(ord),
        }
    }
}

/// Log-sum-exp with max extraction: `ln(sum_i exp(xs[i]))`.
///
/// `NEG_INFINITY` entries are allowed and contribute nothing.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}
