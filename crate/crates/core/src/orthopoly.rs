//! Classical orthogonal polynomial families and their `L²`-normalized
//! versions on the invariant probability measures.
//!
//! Conventions:
//! - Hermite `H_n`: generating function `exp(2xt - t²) = Σ H_n(x) tⁿ/n!`,
//!   orthogonal for `γ₁ = π^{-1/2} e^{-x²} dx`, `‖H_n‖² = 2ⁿ n!`.
//! - Laguerre `L_n^α`: `Σ L_n^α(x) rⁿ = (1-r)^{-α-1} exp(-rx/(1-r))`,
//!   orthogonal for `μ_α = x^α e^{-x} dx / Γ(α+1)`.
//! - Jacobi `J_n^{(α,β)}` with the usual normalization `J_n(1) = (α+1)_n / n!`,
//!   orthogonal for `μ_{α,β} ∝ (1-x)^α (1+x)^β` on `(-1, 1)`.
//! - Gegenbauer `C_n^λ` with `Σ C_n^λ(x) tⁿ = (1 - 2xt + t²)^{-λ}`.
//!
//! Evaluation runs the forward three-term recurrence on a mantissa pair with
//! a shared log-scale, so degree-`n` values never overflow.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::logvalue::LogValue;
use crate::quadrature::Measure;
use crate::special::{ln_factorial, ln_gamma};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolyFamily {
    Hermite,
    Laguerre { alpha: f64 },
    Jacobi { alpha: f64, beta: f64 },
    Gegenbauer { lambda: f64 },
}

const RESCALE_ABOVE: f64 = 1e150;

impl PolyFamily {
    pub fn laguerre(alpha: f64) -> Result<Self> {
        let f = PolyFamily::Laguerre { alpha };
        f.validate()?;
        Ok(f)
    }

    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        let f = PolyFamily::Jacobi { alpha, beta };
        f.validate()?;
        Ok(f)
    }

    pub fn gegenbauer(lambda: f64) -> Result<Self> {
        let f = PolyFamily::Gegenbauer { lambda };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64, lo: f64| v.is_finite() && v > lo;
        match *self {
            PolyFamily::Hermite => Ok(()),
            PolyFamily::Laguerre { alpha } if ok(alpha, -1.0) => Ok(()),
            PolyFamily::Laguerre { alpha } => Err(invalid(format!("Laguerre alpha {alpha} must exceed -1"))),
            PolyFamily::Jacobi { alpha, beta } if ok(alpha, -1.0) && ok(beta, -1.0) => Ok(()),
            PolyFamily::Jacobi { alpha, beta } => Err(invalid(format!(
                "Jacobi parameters ({alpha}, {beta}) must both exceed -1"
            ))),
            PolyFamily::Gegenbauer { lambda } if ok(lambda, 0.0) => Ok(()),
            PolyFamily::Gegenbauer { lambda } => Err(invalid(format!("Gegenbauer lambda {lambda} must be positive"))),
        }
    }

    /// The invariant probability measure the normalized family lives on.
    pub fn measure(&self) -> Measure {
        match *self {
            PolyFamily::Hermite => Measure::Gaussian,
            PolyFamily::Laguerre { alpha } => Measure::Gamma { alpha },
            PolyFamily::Jacobi { alpha, beta } => Measure::Jacobi { alpha, beta },
            PolyFamily::Gegenbauer { lambda } => Measure::Jacobi {
                alpha: lambda - 0.5,
                beta: lambda - 0.5,
            },
        }
    }

    /// `λ_n` with `-L φ_n = λ_n φ_n`.
    pub fn eigenvalue(&self, n: usize) -> Result<f64> {
        self.validate()?;
        let nf = n as f64;
        Ok(match *self {
            PolyFamily::Hermite | PolyFamily::Laguerre { .. } => nf,
            PolyFamily::Jacobi { alpha, beta } => nf * (nf + alpha + beta + 1.0),
            PolyFamily::Gegenbauer { lambda } => nf * (nf + 2.0 * lambda),
        })
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::OutOfDomain {
                x,
                domain: "finite reals",
            });
        }
        match self {
            PolyFamily::Jacobi { .. } | PolyFamily::Gegenbauer { .. } if x.abs() > 1.0 => Err(Error::OutOfDomain {
                x,
                domain: "[-1, 1]",
            }),
            _ => Ok(()),
        }
    }

    /// First-degree polynomial `p_1(x)`.
    fn first(&self, x: f64) -> f64 {
        match *self {
            PolyFamily::Hermite => 2.0 * x,
            PolyFamily::Laguerre { alpha } => 1.0 + alpha - x,
            PolyFamily::Jacobi { alpha, beta } => 0.5 * ((alpha + beta + 2.0) * x + alpha - beta),
            PolyFamily::Gegenbauer { lambda } => 2.0 * lambda * x,
        }
    }

    /// Coefficients of `p_{k+1} = (A x + B) p_k - C p_{k-1}` for `k ≥ 1`.
    fn step(&self, k: usize) -> (f64, f64, f64) {
        let k = k as f64;
        match *self {
            PolyFamily::Hermite => (2.0, 0.0, 2.0 * k),
            PolyFamily::Laguerre { alpha } => {
                let d = k + 1.0;
                (-1.0 / d, (2.0 * k + 1.0 + alpha) / d, (k + alpha) / d)
            }
            PolyFamily::Jacobi { alpha, beta } => {
                let s = 2.0 * k + alpha + beta;
                let d = 2.0 * (k + 1.0) * (k + alpha + beta + 1.0) * s;
                (
                    (s + 1.0) * (s + 2.0) * s / d,
                    (s + 1.0) * (alpha * alpha - beta * beta) / d,
                    2.0 * (k + alpha) * (k + beta) * (s + 2.0) / d,
                )
            }
            PolyFamily::Gegenbauer { lambda } => {
                let d = k + 1.0;
                (2.0 * (k + lambda) / d, 0.0, (k + 2.0 * lambda - 1.0) / d)
            }
        }
    }

    /// Runs the recurrence up to degree `n`, handing each classical value
    /// `p_k(x)` to `visit`.
    fn run(&self, n: usize, x: f64, mut visit: impl FnMut(usize, LogValue)) {
        let mut scale = 0.0;
        let mut prev = 1.0;
        visit(0, LogValue::ONE);
        if n == 0 {
            return;
        }
        let mut cur = self.first(x);
        visit(1, LogValue::from_f64(cur));
        for k in 1..n {
            let (a, b, c) = self.step(k);
            let next = (a * x + b) * cur - c * prev;
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE_ABOVE {
                prev /= RESCALE_ABOVE;
                cur /= RESCALE_ABOVE;
                scale += RESCALE_ABOVE.ln();
            }
            let v = LogValue::from_f64(cur);
            visit(k + 1, LogValue::new(v.sign(), v.logmag() + scale));
        }
    }

    /// Classical `H_n`, `L_n^α`, `J_n^{(α,β)}` or `C_n^λ` at `x`.
    pub fn eval_classical(&self, n: usize, x: f64) -> Result<LogValue> {
        self.validate()?;
        self.check_domain(x)?;
        Ok(self.eval_unchecked(n, x))
    }

    pub(crate) fn eval_unchecked(&self, n: usize, x: f64) -> LogValue {
        let mut out = LogValue::ONE;
        self.run(n, x, |k, v| {
            if k == n {
                out = v
            }
        });
        out
    }

    /// `ln ‖p_n‖²` of the classical polynomial against the family measure.
    pub fn log_norm_sq(&self, n: usize) -> Result<f64> {
        self.validate()?;
        let nf = n as f64;
        Ok(match *self {
            PolyFamily::Hermite => nf * std::f64::consts::LN_2 + ln_factorial(n),
            PolyFamily::Laguerre { alpha } => ln_gamma(nf + alpha + 1.0) - ln_gamma(alpha + 1.0) - ln_factorial(n),
            PolyFamily::Jacobi { alpha, beta } => jacobi_log_norm_sq(n, alpha, beta),
            PolyFamily::Gegenbauer { lambda } => {
                let a = lambda - 0.5;
                2.0 * gegenbauer_log_factor(n, lambda) + jacobi_log_norm_sq(n, a, a)
            }
        })
    }

    /// `L²`-normalized eigenfunction `h_n`, `ℓ_n^α`, `j_n^{(α,β)}` at `x`.
    /// For Gegenbauer this is `j_n^{(λ-1/2, λ-1/2)}`.
    pub fn eval_normalized(&self, n: usize, x: f64) -> Result<LogValue> {
        let c = -0.5 * self.log_norm_sq(n)?;
        Ok(self.eval_classical(n, x)? * LogValue::from_log(c))
    }

    /// Normalized values for every degree `0..=n_max` at one point.
    pub fn normalized_sequence(&self, n_max: usize, x: f64) -> Result<Vec<LogValue>> {
        self.validate()?;
        self.check_domain(x)?;
        let mut out = Vec::with_capacity(n_max + 1);
        self.run(n_max, x, |k, v| {
            let c = -0.5 * self.log_norm_sq(k).expect("validated");
            out.push(v * LogValue::from_log(c));
        });
        Ok(out)
    }
}

fn jacobi_log_norm_sq(n: usize, alpha: f64, beta: f64) -> f64 {
    let nf = n as f64;
    let ab = alpha + beta;
    // (2n+α+β+1) Γ(n+α+β+1), written as Γ(α+β+2) at n = 0 so that α+β = -1 is fine
    let tail = if n == 0 {
        ln_gamma(ab + 2.0)
    } else {
        (2.0 * nf + ab + 1.0).ln() + ln_gamma(nf + ab + 1.0)
    };
    ln_gamma(nf + alpha + 1.0) + ln_gamma(nf + beta + 1.0) + ln_gamma(ab + 2.0)
        - ln_gamma(alpha + 1.0)
        - ln_gamma(beta + 1.0)
        - ln_factorial(n)
        - tail
}

/// `ln` of `Γ(λ+1/2) Γ(n+2λ) / (Γ(2λ) Γ(n+λ+1/2))`, the factor with
/// `C_n^λ = factor · J_n^{(λ-1/2, λ-1/2)}`.
pub fn gegenbauer_log_factor(n: usize, lambda: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    ln_gamma(lambda + 0.5) + ln_gamma(nf + 2.0 * lambda) - ln_gamma(2.0 * lambda) - ln_gamma(nf + lambda + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_examples() {
        let h = PolyFamily::Hermite;
        assert_eq!(h.eval_classical(0, 3.7).unwrap().to_f64(), 1.0);
        assert_relative_eq!(h.eval_classical(2, 1.0).unwrap().to_f64(), 2.0, max_relative = 1e-15);
        let l = PolyFamily::laguerre(0.0).unwrap();
        assert_relative_eq!(l.eval_classical(1, 0.5).unwrap().to_f64(), 0.5, max_relative = 1e-15);
        let g = PolyFamily::gegenbauer(2.0).unwrap();
        assert_relative_eq!(g.eval_classical(1, 0.25).unwrap().to_f64(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn normalized_examples() {
        let h = PolyFamily::Hermite;
        assert_relative_eq!(
            h.eval_normalized(1, 1.0).unwrap().to_f64(),
            std::f64::consts::SQRT_2,
            max_relative = 1e-14
        );
        let l = PolyFamily::laguerre(0.0).unwrap();
        assert_relative_eq!(l.eval_normalized(0, 7.0).unwrap().to_f64(), 1.0, max_relative = 1e-15);
        // j_1 for Legendre: quadrature norm equals one
        let j = PolyFamily::jacobi(0.0, 0.0).unwrap();
        let rule = gauss_rule(&j.measure(), 4).unwrap();
        let norm: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * j.eval_normalized(1, x).unwrap().to_f64().powi(2))
            .sum();
        assert!((norm - 1.0).abs() < 1e-12);
        // j_1(0.5) = sqrt(3) * 0.5
        assert_relative_eq!(j.eval_normalized(1, 0.5).unwrap().to_f64(), 0.5 * 3f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(PolyFamily::Hermite.eigenvalue(5).unwrap(), 5.0);
        assert_eq!(PolyFamily::jacobi(0.0, 0.0).unwrap().eigenvalue(1).unwrap(), 2.0);
        for fam in [
            PolyFamily::Hermite,
            PolyFamily::Laguerre { alpha: 0.3 },
            PolyFamily::Jacobi { alpha: 1.0, beta: -0.5 },
            PolyFamily::Gegenbauer { lambda: 2.0 },
        ] {
            assert_eq!(fam.eigenvalue(0).unwrap(), 0.0);
            let mut last = -1.0;
            for n in 0..50 {
                let e = fam.eigenvalue(n).unwrap();
                assert!(e > last);
                last = e;
            }
        }
        assert_eq!(PolyFamily::Gegenbauer { lambda: 2.0 }.eigenvalue(3).unwrap(), 3.0 * 7.0);
    }

    #[test]
    fn domain_and_parameter_errors() {
        assert!(PolyFamily::laguerre(-1.0).is_err());
        assert!(PolyFamily::jacobi(0.0, -1.5).is_err());
        assert!(PolyFamily::gegenbauer(0.0).is_err());
        let j = PolyFamily::Jacobi { alpha: 0.0, beta: 0.0 };
        assert!(matches!(j.eval_classical(3, 1.2), Err(Error::OutOfDomain { .. })));
        assert!(j.eval_classical(3, 1.0).is_ok());
        assert!(j.eval_classical(3, -1.0).is_ok());
        assert!(PolyFamily::Gegenbauer { lambda: 0.5 }.eval_classical(2, 0.3).is_ok());
    }

    #[test]
    fn jacobi_endpoint_value() {
        // J_n(1) = Γ(n+α+1) / (Γ(α+1) n!)
        let (a, b) = (0.7, -0.3);
        let j = PolyFamily::Jacobi { alpha: a, beta: b };
        for n in 0..20 {
            let expect = (ln_gamma(n as f64 + a + 1.0) - ln_gamma(a + 1.0) - ln_factorial(n)).exp();
            assert_relative_eq!(j.eval_classical(n, 1.0).unwrap().to_f64(), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn high_degree_does_not_overflow() {
        let v = PolyFamily::Hermite.eval_classical(400, 3.0).unwrap();
        assert!(v.logmag().is_finite() && v.logmag() > 700.0);
        let nv = PolyFamily::Hermite.eval_normalized(400, 3.0).unwrap();
        assert!(nv.logmag().abs() < 10.0);
    }

    #[test]
    fn sequence_matches_pointwise() {
        let fam = PolyFamily::Laguerre { alpha: 1.5 };
        let seq = fam.normalized_sequence(25, 3.3).unwrap();
        for (n, v) in seq.iter().enumerate() {
            assert_relative_eq!(v.to_f64(), fam.eval_normalized(n, 3.3).unwrap().to_f64(), max_relative = 1e-13);
        }
    }
}
