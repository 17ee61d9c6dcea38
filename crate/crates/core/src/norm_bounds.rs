//! Explicit `L^q` bounds and growth rates for Hermite and Laguerre
//! eigenfunctions, and certificates that measured norms respect them.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::logvalue::LogValue;
use crate::orthopoly::PolyFamily;
use crate::quadrature::eigen_lp_norm;
use crate::special::{ln_factorial, ln_gamma, ls_slope};

/// Relative slack applied to the measured norm when comparing against bounds.
pub const SANDWICH_SLACK: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormBoundReport {
    pub n: usize,
    pub q: f64,
    pub measured: LogValue,
    pub lower: LogValue,
    pub upper: LogValue,
    pub passed: bool,
}

impl NormBoundReport {
    fn new(n: usize, q: f64, measured: LogValue, lower: LogValue, upper: LogValue) -> Self {
        let slack = SANDWICH_SLACK.ln_1p();
        let m = measured.logmag();
        let passed = lower.logmag() <= m + slack && m - slack <= upper.logmag();
        NormBoundReport {
            n,
            q,
            measured,
            lower,
            upper,
            passed,
        }
    }
}

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q > 2.0 {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("the bounds need q > 2, got {q}")))
    }
}

/// `(q-1)^{n/2} (2πn)^{-1/4} e^{-1/(24n)} ≤ ‖h_n‖_q ≤ (q-1)^{n/2}`.
pub fn hermite_bounds(n: usize, q: f64) -> Result<(LogValue, LogValue)> {
    check_q(q)?;
    if n == 0 {
        return Err(invalid("Hermite bounds need n >= 1"));
    }
    let nf = n as f64;
    let up = 0.5 * nf * (q - 1.0).ln();
    let lo = up - 0.25 * (2.0 * std::f64::consts::PI * nf).ln() - 1.0 / (24.0 * nf);
    Ok((LogValue::from_log(lo), LogValue::from_log(up)))
}

fn conjugate(q: f64) -> f64 {
    q / (q - 1.0)
}

/// Explicit lower bound for `‖ℓ_n^α‖_{L^q(μ_α)}` obtained by testing against
/// `e^{bx}`, `b = ρ/(1+ρ)`:
/// `(1-q'b)^{(α+1)/q'} (1-b)^{-(α+1)} (Γ(n+α+1)/(Γ(α+1)n!))^{1/2} (b/(1-b))^n`.
pub fn laguerre_lower(n: usize, alpha: f64, q: f64, rho: f64) -> Result<LogValue> {
    PolyFamily::laguerre(alpha)?;
    check_q(q)?;
    if !(rho > 0.0 && rho < q - 1.0) {
        return Err(invalid(format!("rho = {rho} must lie in (0, {})", q - 1.0)));
    }
    let nf = n as f64;
    let qc = conjugate(q);
    let b = rho / (1.0 + rho);
    let l = (alpha + 1.0) / qc * (-qc * b).ln_1p() - (alpha + 1.0) * (-b).ln_1p()
        + 0.5 * (ln_gamma(nf + alpha + 1.0) - ln_gamma(alpha + 1.0) - ln_factorial(n))
        + nf * rho.ln();
    Ok(LogValue::from_log(l))
}

/// `(q-1)^n`, valid for `α ≥ -1/2`.
pub fn laguerre_upper(n: usize, alpha: f64, q: f64) -> Result<LogValue> {
    PolyFamily::laguerre(alpha)?;
    check_q(q)?;
    if alpha < -0.5 {
        return Err(Error::Hypothesis(format!("the upper bound needs alpha >= -1/2, got {alpha}")));
    }
    Ok(LogValue::from_log(n as f64 * (q - 1.0).ln()))
}

/// `⟨φ_n, e^{b·}⟩` for the normalized Hermite or Laguerre eigenfunction.
pub fn fourier_coefficient(family: &PolyFamily, n: usize, b: f64) -> Result<LogValue> {
    let nf = n as f64;
    match *family {
        PolyFamily::Hermite => {
            if !b.is_finite() {
                return Err(invalid("b must be finite"));
            }
            let head = pow_signed(b, n);
            Ok(head * LogValue::from_log(b * b / 4.0 - 0.5 * (nf * std::f64::consts::LN_2 + ln_factorial(n))))
        }
        PolyFamily::Laguerre { alpha } => {
            let classical = laguerre_fourier_classical(n, alpha, b)?;
            let norm = 0.5 * (ln_gamma(nf + alpha + 1.0) - ln_gamma(alpha + 1.0) - ln_factorial(n));
            Ok(classical * LogValue::from_log(-norm))
        }
        _ => Err(invalid("Fourier coefficients are available for Hermite and Laguerre only")),
    }
}

/// `⟨L_n^α, e^{b·}⟩_{μ_α} = (-1)^n Γ(n+α+1)/(Γ(α+1) n!) · bⁿ/(1-b)^{n+α+1}`.
pub fn laguerre_fourier_classical(n: usize, alpha: f64, b: f64) -> Result<LogValue> {
    PolyFamily::laguerre(alpha)?;
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::Hypothesis(format!("Laguerre coefficient needs 0 < b < 1, got {b}")));
    }
    let nf = n as f64;
    let l = ln_gamma(nf + alpha + 1.0) - ln_gamma(alpha + 1.0) - ln_factorial(n) + nf * b.ln()
        - (nf + alpha + 1.0) * (-b).ln_1p();
    Ok(LogValue::new(if n % 2 == 0 { 1 } else { -1 }, l))
}

fn pow_signed(b: f64, n: usize) -> LogValue {
    if n == 0 {
        return LogValue::ONE;
    }
    let s = LogValue::from_f64(b);
    let sign = if s.sign() < 0 && n % 2 == 1 { -1 } else { s.sign().abs() };
    LogValue::new(sign, n as f64 * s.logmag())
}

/// Measured `‖h_n‖_q` against [`hermite_bounds`].
pub fn hermite_sandwich(n: usize, q: f64, tol: f64) -> Result<NormBoundReport> {
    let (lower, upper) = hermite_bounds(n, q)?;
    let measured = eigen_lp_norm(&PolyFamily::Hermite, n, q, tol)?;
    Ok(NormBoundReport::new(n, q, measured, lower, upper))
}

/// Measured `‖ℓ_n^α‖_q` against [`laguerre_lower`] and [`laguerre_upper`].
pub fn laguerre_sandwich(n: usize, alpha: f64, q: f64, rho: f64, tol: f64) -> Result<NormBoundReport> {
    let lower = laguerre_lower(n, alpha, q, rho)?;
    let upper = laguerre_upper(n, alpha, q)?;
    let measured = eigen_lp_norm(&PolyFamily::Laguerre { alpha }, n, q, tol)?;
    Ok(NormBoundReport::new(n, q, measured, lower, upper))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub window: Vec<usize>,
    /// `ln(‖φ_n‖_q / ‖φ_n‖_p)` at each window degree.
    pub log_ratios: Vec<f64>,
}

/// Least-squares slope of `n ↦ ln(‖φ_n‖_q / ‖φ_n‖_p)` over `window`.
pub fn growth_rate(family: &PolyFamily, p: f64, q: f64, window: &[usize], tol: f64) -> Result<GrowthFit> {
    family.validate()?;
    if window.len() < 5 || window.iter().any(|&n| n < 10) {
        return Err(invalid("growth window needs at least 5 degrees, all >= 10"));
    }
    let mut sorted = window.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != window.len() {
        return Err(invalid("growth window has repeated degrees"));
    }
    if !(p > 1.0 && q >= p && q.is_finite()) {
        return Err(invalid(format!("need 1 < p <= q, got p = {p}, q = {q}")));
    }
    let mut log_ratios = Vec::with_capacity(window.len());
    for &n in window {
        let nq = eigen_lp_norm(family, n, q, tol)?;
        let np = if p == q { nq } else { eigen_lp_norm(family, n, p, tol)? };
        log_ratios.push(nq.logmag() - np.logmag());
    }
    let xs: Vec<f64> = window.iter().map(|&n| n as f64).collect();
    Ok(GrowthFit {
        slope: ls_slope(&xs, &log_ratios),
        window: window.to_vec(),
        log_ratios,
    })
}
