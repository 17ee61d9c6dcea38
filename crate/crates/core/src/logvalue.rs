//! Signed real numbers stored as `sign · exp(logmag)`.
//!
//! Norms of degree-`n` eigenfunctions grow like `(q-1)^{n/2}`, and the
//! intermediate quantities of the three-term recurrences overflow `f64`
//! long before the final ratios do. All such values travel as [`LogValue`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `sign · e^{logmag}`. When `sign == 0` the value is zero and `logmag` is
/// `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    sign: i8,
    logmag: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue {
        sign: 1,
        logmag: 0.0,
    };

    /// Builds a value from its parts. A `sign` of zero (or a `-inf`
    /// magnitude) yields [`LogValue::ZERO`].
    pub fn new(sign: i8, logmag: f64) -> Self {
        if sign == 0 || logmag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                sign: sign.signum(),
                logmag,
            }
        }
    }

    /// Positive value `e^{logmag}`.
    pub fn from_log(logmag: f64) -> Self {
        Self::new(1, logmag)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                sign: if x > 0.0 { 1 } else { -1 },
                logmag: x.abs().ln(),
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.logmag.exp()
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// Natural log of the absolute value (`-inf` for zero).
    pub fn logmag(self) -> f64 {
        self.logmag
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        Self::new(self.sign.abs(), self.logmag)
    }

    /// `|self|^p`, always nonnegative.
    pub fn abs_pow(self, p: f64) -> Self {
        if self.sign == 0 {
            if p == 0.0 {
                Self::ONE
            } else {
                Self::ZERO
            }
        } else {
            Self::from_log(p * self.logmag)
        }
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero LogValue");
        LogValue {
            sign: self.sign,
            logmag: -self.logmag,
        }
    }

    /// Multiplies by the plain real `c`.
    pub fn scale(self, c: f64) -> Self {
        self * LogValue::from_f64(c)
    }

    /// Compares magnitudes with a signed total order (negative < zero < positive).
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.logmag.total_cmp(&other.logmag),
                _ => other.logmag.total_cmp(&self.logmag),
            },
            ord => ord,
        }
    }
}

impl Default for LogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<f64> for LogValue {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.logmag.is_nan() || other.logmag.is_nan() {
            None
        } else {
            Some(self.total_cmp(other))
        }
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            sign: -self.sign,
            logmag: self.logmag,
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::new(self.sign * rhs.sign, self.logmag + rhs.logmag)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        self * rhs.recip()
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        // factor out the larger magnitude
        let (big, small) = if self.logmag >= rhs.logmag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let r = (small.logmag - big.logmag).exp();
        if big.sign == small.sign {
            LogValue::new(big.sign, big.logmag + r.ln_1p())
        } else if r == 1.0 {
            LogValue::ZERO
        } else {
            LogValue::new(big.sign, big.logmag + (-r).ln_1p())
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

impl std::iter::Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::ZERO, |acc, v| acc + v)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                if self.logmag.abs() < 700.0 {
                    write!(f, "{}", f64::from(s) * self.logmag.exp())
                } else {
                    let sgn = if s < 0 { "-" } else { "" };
                    write!(f, "{sgn}exp({})", self.logmag)
                }
            }
        }
    }
}
