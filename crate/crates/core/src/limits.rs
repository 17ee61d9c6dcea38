//! Rescalings that turn Jacobi into Laguerre (`x ↦ (β/2)(1-x)`, `β → ∞`)
//! and symmetric Jacobi into Hermite (`x ↦ √λ x`, `λ → ∞`), the limit
//! residuals, and finite certificates that rescaled Poisson–Jacobi lower
//! bounds exceed any level.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::logvalue::LogValue;
use crate::obstruction::log_norm_ratio;
use crate::orthopoly::PolyFamily;
use crate::quadrature::Measure;
use crate::special::ln_factorial;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RescaledBase {
    JacobiNearOne { alpha: f64, beta: f64 },
    SymmetricJacobi { lambda: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaledFamily {
    pub base: RescaledBase,
}

impl RescaledFamily {
    pub fn near_one(alpha: f64, beta: f64) -> Result<Self> {
        let r = RescaledFamily {
            base: RescaledBase::JacobiNearOne { alpha, beta },
        };
        r.pushforward().validate()?;
        Ok(r)
    }

    pub fn symmetric(lambda: f64) -> Result<Self> {
        let r = RescaledFamily {
            base: RescaledBase::SymmetricJacobi { lambda },
        };
        r.pushforward().validate()?;
        Ok(r)
    }

    /// The Jacobi family before rescaling.
    pub fn base_family(&self) -> PolyFamily {
        match self.base {
            RescaledBase::JacobiNearOne { alpha, beta } => PolyFamily::Jacobi { alpha, beta },
            RescaledBase::SymmetricJacobi { lambda } => PolyFamily::Gegenbauer { lambda },
        }
    }

    /// The limit family as the scale grows.
    pub fn target(&self) -> PolyFamily {
        match self.base {
            RescaledBase::JacobiNearOne { alpha, .. } => PolyFamily::Laguerre { alpha },
            RescaledBase::SymmetricJacobi { .. } => PolyFamily::Hermite,
        }
    }

    pub fn scale(&self) -> f64 {
        match self.base {
            RescaledBase::JacobiNearOne { beta, .. } => beta,
            RescaledBase::SymmetricJacobi { lambda } => lambda,
        }
    }

    /// Image of the Jacobi measure under [`RescaledFamily::forward`].
    pub fn pushforward(&self) -> Measure {
        match self.base {
            RescaledBase::JacobiNearOne { alpha, beta } => Measure::RescaledJacobiNearOne { alpha, beta },
            RescaledBase::SymmetricJacobi { lambda } => Measure::RescaledSymmetricJacobi { lambda },
        }
    }

    /// `x ∈ [-1, 1] ↦ y` on the rescaled support.
    pub fn forward(&self, x: f64) -> f64 {
        match self.base {
            RescaledBase::JacobiNearOne { beta, .. } => 0.5 * beta * (1.0 - x),
            RescaledBase::SymmetricJacobi { lambda } => lambda.sqrt() * x,
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        match self.base {
            RescaledBase::JacobiNearOne { beta, .. } => 1.0 - 2.0 * y / beta,
            RescaledBase::SymmetricJacobi { lambda } => y / lambda.sqrt(),
        }
    }

    /// Pullback `(Uf)(x) = f(forward(x))`; an isometry from `L^p` of the
    /// push-forward onto `L^p` of the Jacobi measure.
    pub fn pullback<'a>(&'a self, f: &'a dyn Fn(f64) -> LogValue) -> impl Fn(f64) -> LogValue + 'a {
        move |x| f(self.forward(x))
    }
}

/// `|J_n^{(α,β)}(1 - 2x/β) - L_n^α(x)|`.
pub fn limit_residual_jacobi_to_laguerre(n: usize, alpha: f64, beta_scale: f64, x: f64) -> Result<f64> {
    let jac = PolyFamily::jacobi(alpha, beta_scale)?;
    let lag = PolyFamily::laguerre(alpha)?;
    if !(x >= 0.0) {
        return Err(Error::OutOfDomain { x, domain: "[0, inf)" });
    }
    let arg = 1.0 - 2.0 * x / beta_scale;
    if !(arg > -1.0) {
        return Err(Error::OutOfDomain {
            x,
            domain: "[0, beta) after rescaling",
        });
    }
    Ok((jac.eval_classical(n, arg)?.to_f64() - lag.eval_classical(n, x)?.to_f64()).abs())
}

/// `|λ^{-n/2} C_n^λ(x/√λ) - H_n(x)/n!|`.
pub fn limit_residual_gegenbauer_to_hermite(n: usize, lambda_scale: f64, x: f64) -> Result<f64> {
    let geg = PolyFamily::gegenbauer(lambda_scale)?;
    let s = lambda_scale.sqrt();
    if !(x.abs() < s) {
        return Err(Error::OutOfDomain {
            x,
            domain: "(-sqrt(lambda), sqrt(lambda))",
        });
    }
    let c = geg.eval_classical(n, x / s)?;
    let lhs = LogValue::new(c.sign(), c.logmag() - 0.5 * n as f64 * lambda_scale.ln());
    let h = PolyFamily::Hermite.eval_classical(n, x)?;
    let rhs = LogValue::new(h.sign(), h.logmag() - ln_factorial(n));
    Ok((lhs.to_f64() - rhs.to_f64()).abs())
}

/// `(1/√β) √λ_n^{(α,β)}` and its distance to `√n`.
pub fn eigenvalue_rescaling(n: usize, alpha: f64, beta_scale: f64) -> Result<(f64, f64)> {
    let lam = PolyFamily::jacobi(alpha, beta_scale)?.eigenvalue(n)?;
    let v = (lam / beta_scale).sqrt();
    Ok((v, (v - (n as f64).sqrt()).abs()))
}

fn check_exponents(p: f64, q: f64, t: f64) -> Result<()> {
    if !(p > 1.0 && q > 2.0 && q >= p && q.is_finite()) {
        return Err(invalid(format!("need 1 < p <= q < inf and q > 2, got p = {p}, q = {q}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("time t = {t} must be positive")));
    }
    Ok(())
}

/// `e^{-(t/√β)√λ_n} ‖ĵ_{n,β}‖_q / ‖ĵ_{n,β}‖_p`, the norms taken on the
/// Jacobi side through the isometry.
pub fn rescaled_lower_bound(alpha: f64, beta_scale: f64, t: f64, p: f64, q: f64, n: usize, tol: f64) -> Result<LogValue> {
    check_exponents(p, q, t)?;
    let fam = PolyFamily::jacobi(alpha, beta_scale)?;
    let lam = fam.eigenvalue(n)?;
    let ratio = log_norm_ratio(&fam, p, q, n, tol)?;
    Ok(LogValue::from_log(-t * (lam / beta_scale).sqrt() + ratio))
}

/// `e^{-t√n} ‖ℓ_n^α‖_q / ‖ℓ_n^α‖_p`, the `β → ∞` limit of
/// [`rescaled_lower_bound`].
pub fn laguerre_limit_bound(alpha: f64, t: f64, p: f64, q: f64, n: usize, tol: f64) -> Result<LogValue> {
    check_exponents(p, q, t)?;
    let fam = PolyFamily::laguerre(alpha)?;
    Ok(LogValue::from_log(-t * (n as f64).sqrt() + log_norm_ratio(&fam, p, q, n, tol)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationConfig {
    pub n_cap: usize,
    /// Scales tried in increasing order.
    pub beta_ladder: Vec<f64>,
    pub tol: f64,
}

impl Default for DegenerationConfig {
    fn default() -> Self {
        DegenerationConfig {
            n_cap: 100,
            beta_ladder: vec![1e2, 1e3, 1e4, 1e5, 1e6],
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationCertificate {
    pub n: usize,
    pub beta0: f64,
    pub limit_value: LogValue,
    /// `(β, bound)` along the ladder from `beta0` on, all above `2M`.
    pub ladder: Vec<(f64, LogValue)>,
}

/// Smallest `n` with limit bound above `4M`, then the first ladder scale
/// `β₀` from which every remaining ladder bound exceeds `2M`.
pub fn degeneration_certificate(alpha: f64, t: f64, p: f64, q: f64, m: f64) -> Result<DegenerationCertificate> {
    degeneration_certificate_with(alpha, t, p, q, m, &DegenerationConfig::default())
}

pub fn degeneration_certificate_with(
    alpha: f64,
    t: f64,
    p: f64,
    q: f64,
    m: f64,
    cfg: &DegenerationConfig,
) -> Result<DegenerationCertificate> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(invalid(format!("level M = {m} must be positive")));
    }
    if cfg.beta_ladder.is_empty() {
        return Err(invalid("empty beta ladder"));
    }
    let mut best = (0usize, LogValue::ZERO);
    let mut found = None;
    for n in 0..=cfg.n_cap {
        let v = laguerre_limit_bound(alpha, t, p, q, n, cfg.tol)?;
        if v > best.1 {
            best = (n, v);
        }
        if v.logmag() > (4.0 * m).ln() {
            found = Some((n, v));
            break;
        }
    }
    let Some((n, limit_value)) = found else {
        return Err(Error::Exhausted(format!(
            "no n <= {} has limit bound above 4M; best n = {} with {:.6e}",
            cfg.n_cap,
            best.0,
            best.1.to_f64()
        )));
    };
    let vals = cfg
        .beta_ladder
        .iter()
        .map(|&b| Ok((b, rescaled_lower_bound(alpha, b, t, p, q, n, cfg.tol)?)))
        .collect::<Result<Vec<_>>>()?;
    let level = (2.0 * m).ln();
    let mut start = vals.len();
    while start > 0 && vals[start - 1].1.logmag() > level {
        start -= 1;
    }
    if start == vals.len() {
        let last = vals.last().expect("nonempty");
        return Err(Error::Exhausted(format!(
            "n = {n}: bound at the top scale {:e} is {:.6e}, not above 2M",
            last.0,
            last.1.to_f64()
        )));
    }
    Ok(DegenerationCertificate {
        n,
        beta0: vals[start].0,
        limit_value,
        ladder: vals[start..].to_vec(),
    })
}
