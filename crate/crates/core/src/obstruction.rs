//! Lower bounds for `‖S_t^f‖_{p→q}`: eigenfunction tests, the rates
//! `Θ_{p,q,f}` and `κ_{p,q}` on finite windows, the bilinear exponential test
//! on the Gaussian space, threshold classifiers and the Laguerre Parseval
//! series.

use serde::{Deserialize, Serialize};

use crate::bernstein::BernsteinFn;
use crate::error::{invalid, Error, Result};
use crate::logvalue::LogValue;
use crate::orthopoly::PolyFamily;
use crate::quadrature::eigen_lp_norm;
use crate::special::{aitken, ln_factorial, ln_gamma, log_sum_exp, ls_slope};
use crate::subordination::MultiplierSequence;

/// Relative tolerance for placing `q` on the bounded side of a threshold.
pub const BOUNDARY_RTOL: f64 = 1e-12;

fn check_exponents(p: f64, q: f64) -> Result<()> {
    if p > 1.0 && q >= p && q.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("need 1 < p <= q < inf, got p = {p}, q = {q}")))
    }
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("time t = {t} must be positive")))
    }
}

pub fn conjugate(q: f64) -> f64 {
    q / (q - 1.0)
}

/// `ln(‖φ_n‖_q / ‖φ_n‖_p)`.
pub fn log_norm_ratio(family: &PolyFamily, p: f64, q: f64, n: usize, tol: f64) -> Result<f64> {
    if n == 0 || p == q {
        return Ok(0.0);
    }
    let nq = eigen_lp_norm(family, n, q, tol)?;
    let np = if p == 2.0 { LogValue::ONE } else { eigen_lp_norm(family, n, p, tol)? };
    Ok(nq.logmag() - np.logmag())
}

/// `e^{-t f(λ_n)} ‖φ_n‖_q / ‖φ_n‖_p`, a lower bound for `‖S_t^f‖_{p→q}`.
pub fn eigen_lower_bound(
    family: &PolyFamily,
    f: &BernsteinFn,
    t: f64,
    p: f64,
    q: f64,
    n: usize,
    tol: f64,
) -> Result<LogValue> {
    check_exponents(p, q)?;
    check_t(t)?;
    let lam = family.eigenvalue(n)?;
    Ok(LogValue::from_log(-t * f.eval(lam) + log_norm_ratio(family, p, q, n, tol)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionVerdict {
    Diverging,
    BoundedWindow,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub family: PolyFamily,
    pub p: f64,
    pub q: f64,
    pub t: f64,
    pub f: BernsteinFn,
    pub per_n: Vec<(usize, LogValue)>,
    /// Running maximum of `per_n`, the best lower bound so far.
    pub running_max: Vec<LogValue>,
    pub threshold: f64,
    pub verdict: ObstructionVerdict,
    /// `ln(‖φ_N‖_q/‖φ_N‖_p) / f(λ_N)` at the last degree of the window.
    pub fitted_rate: f64,
    /// Least-squares slope of `n ↦ ln(lower bound)` over the second half.
    pub trend: f64,
}

/// Eigenfunction lower bounds over `ns`, with an operational verdict:
/// diverging when the best bound exceeds `threshold` while still rising,
/// bounded when it stays below with a non-increasing trend.
#[allow(clippy::too_many_arguments)]
pub fn obstruction_report(
    family: &PolyFamily,
    f: &BernsteinFn,
    t: f64,
    p: f64,
    q: f64,
    ns: &[usize],
    threshold: f64,
    tol: f64,
) -> Result<ObstructionReport> {
    if ns.len() < 2 {
        return Err(invalid("need at least two degrees"));
    }
    let mut per_n = Vec::with_capacity(ns.len());
    let mut running_max = Vec::with_capacity(ns.len());
    let mut best = LogValue::ZERO;
    let mut last_ratio = 0.0;
    for &n in ns {
        let ratio = log_norm_ratio(family, p, q, n, tol)?;
        check_t(t)?;
        let lb = LogValue::from_log(-t * f.eval(family.eigenvalue(n)?) + ratio);
        if lb > best {
            best = lb;
        }
        per_n.push((n, lb));
        running_max.push(best);
        last_ratio = ratio;
    }
    check_exponents(p, q)?;
    let half = ns.len() / 2;
    let xs: Vec<f64> = ns[half..].iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = per_n[half..].iter().map(|(_, v)| v.logmag()).collect();
    let trend = if xs.len() >= 2 { ls_slope(&xs, &ys) } else { 0.0 };
    let f_last = f.eval(family.eigenvalue(*ns.last().expect("nonempty"))?);
    let fitted_rate = if f_last > 0.0 { last_ratio / f_last } else { f64::INFINITY };
    let verdict = if best.logmag() > threshold.ln() && trend > 0.0 {
        ObstructionVerdict::Diverging
    } else if best.logmag() <= threshold.ln() && trend <= 0.0 {
        ObstructionVerdict::BoundedWindow
    } else {
        ObstructionVerdict::Inconclusive
    };
    Ok(ObstructionReport {
        family: *family,
        p,
        q,
        t,
        f: f.clone(),
        per_n,
        running_max,
        threshold,
        verdict,
        fitted_rate,
        trend,
    })
}

/// Least-squares slope of `ln(‖φ_n‖_q/‖φ_n‖_p)` against `√λ_n` over `window`.
pub fn rate_kappa(family: &PolyFamily, p: f64, q: f64, window: &[usize], tol: f64) -> Result<f64> {
    check_exponents(p, q)?;
    if window.len() < 2 || window.contains(&0) {
        return Err(invalid("kappa window needs at least two positive degrees"));
    }
    let mut xs = Vec::with_capacity(window.len());
    let mut ys = Vec::with_capacity(window.len());
    for &n in window {
        xs.push(family.eigenvalue(n)?.sqrt());
        ys.push(log_norm_ratio(family, p, q, n, tol)?);
    }
    if xs.windows(2).all(|w| w[0] == w[1]) {
        return Err(invalid("degenerate kappa window"));
    }
    Ok(ls_slope(&xs, &ys))
}

/// `F_t(z) = Σ_{n≥0} e^{-t f(n)} zⁿ/n!`, summed until both the next term and
/// the Poisson-tail majorant `z^{N+1}/(N+1)! / (1 - z/(N+2))` drop below
/// `tol` times the partial sum.
pub fn f_t(f: &BernsteinFn, t: f64, z: f64, tol: f64) -> Result<LogValue> {
    check_t(t)?;
    if !(z >= 0.0 && z.is_finite()) {
        return Err(invalid(format!("z = {z} must be finite and >= 0")));
    }
    let first = -t * f.eval(0.0);
    if z == 0.0 {
        return Ok(LogValue::from_log(first));
    }
    let lz = z.ln();
    let log_tol = tol.ln();
    let mut acc = first;
    let mut n = 1usize;
    loop {
        let poisson = n as f64 * lz - ln_factorial(n);
        let term = -t * f.eval(n as f64) + poisson;
        acc = log_sum_exp(&[acc, term]);
        let nn = n as f64;
        if nn + 2.0 > z {
            let next = poisson + lz - (nn + 1.0).ln();
            let majorant = next - (-z / (nn + 2.0)).ln_1p();
            if term - acc < log_tol && majorant - acc < log_tol {
                return Ok(LogValue::from_log(acc));
            }
        }
        n += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FtSlope {
    pub zs: Vec<f64>,
    /// `ln F_t(z) / z` along `zs`.
    pub values: Vec<f64>,
    pub extrapolated: f64,
}

/// Limit of `ln F_t(z)/z` as `z → ∞`, by Aitken extrapolation over a
/// geometric ladder; a secant through the last two points in `1/√z` is
/// used when the Aitken denominator degenerates.
pub fn f_t_slope(f: &BernsteinFn, t: f64, zs: &[f64], tol: f64) -> Result<FtSlope> {
    if zs.len() < 3 {
        return Err(invalid("slope extrapolation needs three z values"));
    }
    let values = zs
        .iter()
        .map(|&z| Ok(f_t(f, t, z, tol)?.logmag() / z))
        .collect::<Result<Vec<_>>>()?;
    let k = values.len();
    let (v0, v1, v2) = (values[k - 3], values[k - 2], values[k - 1]);
    let den = (v2 - v1) - (v1 - v0);
    let extrapolated = if den.abs() > 1e-14 * v2.abs().max(1e-300) {
        aitken(&values)
    } else {
        let (x1, x2) = (zs[k - 2].sqrt().recip(), zs[k - 1].sqrt().recip());
        v2 - (v2 - v1) / (x2 - x1) * x2
    };
    Ok(FtSlope {
        zs: zs.to_vec(),
        values,
        extrapolated,
    })
}

/// `ln[⟨S_t^f g_{τ₁}, g_{τ₂}⟩ / (‖g_{τ₁}‖_p ‖g_{τ₂}‖_{q'})]` on the Gaussian
/// space, `g_τ(x) = e^{τx}`:
/// `-¼[(p-1)τ₁² + (q'-1)τ₂²] + ln F_t(τ₁τ₂/2)`.
pub fn bilinear_value(f: &BernsteinFn, t: f64, p: f64, q: f64, tau1: f64, tau2: f64) -> Result<LogValue> {
    if !(p > 1.0 && q > 1.0 && p.is_finite() && q.is_finite()) {
        return Err(invalid("need 1 < p, q < inf"));
    }
    if !(tau1 > 0.0 && tau2 > 0.0) {
        return Err(invalid("tau1 and tau2 must be positive"));
    }
    let qc = conjugate(q);
    let quad = -0.25 * ((p - 1.0) * tau1 * tau1 + (qc - 1.0) * tau2 * tau2);
    let ft = f_t(f, t, 0.5 * tau1 * tau2, 1e-14)?;
    Ok(LogValue::from_log(quad + ft.logmag()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BilinearVerdict {
    BlowUpCertified,
    BoundedRegime,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilinearReport {
    pub p: f64,
    pub q: f64,
    pub t: f64,
    pub f: BernsteinFn,
    pub k_star: f64,
    /// `(p-1)k*² - 2e^{-bt}k* + (q'-1)`.
    pub quad_form_min: f64,
    /// `(τ₂, ln ratio)` along the ray `τ₁ = k* τ₂`.
    pub ray: Vec<(f64, f64)>,
    /// `ln ratio / τ₂²` at the last ray point; tends to `-quad_form_min/4`.
    pub slope_measured: f64,
    pub threshold: f64,
    pub verdict: BilinearVerdict,
}

/// Bilinear test along the vertex ray `τ₁ = k* τ₂`, `k* = e^{-bt}/(p-1)`,
/// with `τ₂` doubling from 1 to `tau2_max` or until the ratio exceeds
/// `threshold`.
pub fn bilinear_report(
    f: &BernsteinFn,
    t: f64,
    p: f64,
    q: f64,
    threshold: f64,
    tau2_max: f64,
) -> Result<BilinearReport> {
    check_t(t)?;
    let decay = (-f.b * t).exp();
    let k_star = decay / (p - 1.0);
    let qc = conjugate(q);
    let quad_form_min = (p - 1.0) * k_star * k_star - 2.0 * decay * k_star + (qc - 1.0);
    let log_m = threshold.ln();
    let mut ray = Vec::new();
    let mut tau2 = 1.0;
    let mut exceeded = false;
    while tau2 <= tau2_max {
        let v = bilinear_value(f, t, p, q, k_star * tau2, tau2)?.logmag();
        ray.push((tau2, v));
        if v > log_m {
            exceeded = true;
            break;
        }
        tau2 *= 2f64.sqrt();
    }
    let (last_tau, last_v) = *ray.last().expect("tau2_max >= 1");
    let verdict = if quad_form_min < 0.0 && exceeded {
        BilinearVerdict::BlowUpCertified
    } else if quad_form_min >= 0.0 && !exceeded {
        BilinearVerdict::BoundedRegime
    } else {
        BilinearVerdict::Inconclusive
    };
    Ok(BilinearReport {
        p,
        q,
        t,
        f: f.clone(),
        k_star,
        quad_form_min,
        ray,
        slope_measured: last_v / (last_tau * last_tau),
        threshold,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum NormClass {
    /// `‖S_t^f‖_{p→q} = e^{-at}`.
    Bounded { norm: f64, threshold: f64 },
    /// `‖S_t^f‖_{p→q} = +∞`; `discriminant` is `e^{-2bt} - (p-1)(q'-1)` for
    /// the Gaussian test and `e^{-bt}·… ` analogue for Laguerre.
    BlowUp { threshold: f64, discriminant: f64 },
}

impl NormClass {
    pub fn is_blow_up(&self) -> bool {
        matches!(self, NormClass::BlowUp { .. })
    }
}

fn classify(f: &BernsteinFn, t: f64, p: f64, q: f64, growth: f64) -> Result<NormClass> {
    check_t(t)?;
    if !(p > 1.0 && q > 1.0 && p.is_finite() && q.is_finite()) {
        return Err(invalid("need 1 < p, q < inf"));
    }
    let threshold = 1.0 + (p - 1.0) * growth;
    if q <= threshold * (1.0 + BOUNDARY_RTOL) {
        Ok(NormClass::Bounded {
            norm: (-f.a * t).exp(),
            threshold,
        })
    } else {
        Ok(NormClass::BlowUp {
            threshold,
            discriminant: 1.0 / growth - (p - 1.0) * (conjugate(q) - 1.0),
        })
    }
}

/// Threshold `q* = 1 + (p-1)e^{2bt}` for subordinated Ornstein–Uhlenbeck.
pub fn classify_ou(f: &BernsteinFn, t: f64, p: f64, q: f64) -> Result<NormClass> {
    classify(f, t, p, q, (2.0 * f.b * t).exp())
}

/// Threshold `q* = 1 + (p-1)e^{bt}` for subordinated Laguerre. The bounded
/// branch needs `α ≥ -1/2`; the blow-up branch holds for all `α > -1`.
pub fn classify_laguerre(f: &BernsteinFn, t: f64, p: f64, q: f64, alpha: f64) -> Result<NormClass> {
    PolyFamily::laguerre(alpha)?;
    let c = classify(f, t, p, q, (f.b * t).exp())?;
    if !c.is_blow_up() && alpha < -0.5 {
        return Err(Error::Hypothesis(format!(
            "the bounded branch needs alpha >= -1/2, got {alpha}"
        )));
    }
    Ok(c)
}

/// `ϱ(τ₁, τ₂) = τ₁τ₂ / ((1-τ₁)(1-τ₂))`.
pub fn rho(tau1: f64, tau2: f64) -> f64 {
    tau1 * tau2 / ((1.0 - tau1) * (1.0 - tau2))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalEval {
    pub value: LogValue,
    pub terms: usize,
    pub last_term: LogValue,
    /// `T_N r/(1-r)` with `r` the last term ratio, when `r < 1`.
    pub tail_estimate: Option<f64>,
}

/// `(1-τ₁)^{-(α+1)}(1-τ₂)^{-(α+1)} Σ_{n≤N} a_n Γ(n+α+1)/(Γ(α+1)n!) ϱⁿ`,
/// the pairing `⟨A g_{τ₁}, g_{τ₂}⟩` on `μ_α` for `g_τ = e^{τx}`.
#[allow(clippy::too_many_arguments)]
pub fn laguerre_parseval(
    a_seq: &MultiplierSequence,
    alpha: f64,
    p: f64,
    q: f64,
    tau1: f64,
    tau2: f64,
    trunc: usize,
) -> Result<ParsevalEval> {
    PolyFamily::laguerre(alpha)?;
    check_exponents(p, q)?;
    let qc = conjugate(q);
    if !(tau1 > 0.0 && tau1 < 1.0 / p && tau2 > 0.0 && tau2 < 1.0 / qc) {
        return Err(invalid(format!(
            "need tau1 in (0, 1/p) and tau2 in (0, 1/q'), got ({tau1}, {tau2})"
        )));
    }
    if trunc < 1 {
        return Err(invalid("truncation must be at least 1"));
    }
    let lr = rho(tau1, tau2).ln();
    let lg_a = ln_gamma(alpha + 1.0);
    let log_term = |n: usize| {
        a_seq.log_coefficient(n) + ln_gamma(n as f64 + alpha + 1.0) - lg_a - ln_factorial(n) + n as f64 * lr
    };
    let terms: Vec<f64> = (0..=trunc).map(log_term).collect();
    let sum = log_sum_exp(&terms);
    let (t_prev, t_last) = (terms[trunc - 1], terms[trunc]);
    let mut tail_estimate = None;
    if t_last.is_finite() {
        let log_r = t_last - t_prev;
        if log_r >= 0.0 {
            return Err(Error::Diverging {
                index: trunc,
                log_term: t_last,
            });
        }
        let r = log_r.exp();
        tail_estimate = Some((t_last + log_r - (-r).ln_1p()).exp());
    }
    let prefactor = -(alpha + 1.0) * ((-tau1).ln_1p() + (-tau2).ln_1p());
    Ok(ParsevalEval {
        value: LogValue::from_log(prefactor + sum),
        terms: trunc + 1,
        last_term: LogValue::from_log(t_last),
        tail_estimate: tail_estimate.map(|t| t * prefactor.exp()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NecessaryConditionReport {
    pub threshold: f64,
    pub margin: f64,
    /// `(n, a_n^{1/n})`.
    pub roots: Vec<(usize, f64)>,
    pub first_violation: Option<usize>,
    /// `(n, ϱ(τ_{1,n}, τ_{2,n}))`.
    pub rho_seq: Vec<(usize, f64)>,
    pub rho_limit: f64,
    /// `n |ϱ_n/ϱ_∞ - 1|` at `n_max`, the fitted `C` in `ϱ_n = ϱ_∞(1 + O(C/n))`.
    pub fitted_c: f64,
    /// The scaled deviations `n |ϱ_n/ϱ_∞ - 1|` settle: their value at
    /// `n_max/2` and `n_max` agree within 10%.
    pub rho_certified: bool,
}

/// Checks `limsup a_n^{1/n} ≤ (p-1)/(q-1)` along `n ≤ n_max` and evaluates
/// the extremal pairing parameters `τ_{1,n} = n/(p[n+(α+1)(1/p+1/q')])`,
/// `τ_{2,n} = n/(q'[n+(α+1)(1/p+1/q')])`.
pub fn multiplier_necessary_condition(
    a_seq: &MultiplierSequence,
    alpha: f64,
    p: f64,
    q: f64,
    n_max: usize,
    margin: f64,
) -> Result<NecessaryConditionReport> {
    PolyFamily::laguerre(alpha)?;
    check_exponents(p, q)?;
    if n_max < 10 {
        return Err(invalid("n_max must be at least 10"));
    }
    let qc = conjugate(q);
    let threshold = (p - 1.0) / (q - 1.0);
    let mut roots = Vec::with_capacity(n_max);
    let mut first_violation = None;
    let mut rho_seq = Vec::with_capacity(n_max);
    let shift = (alpha + 1.0) * (1.0 / p + 1.0 / qc);
    for n in 1..=n_max {
        let nf = n as f64;
        let root = (a_seq.log_coefficient(n) / nf).exp();
        if first_violation.is_none() && root > threshold + margin {
            first_violation = Some(n);
        }
        roots.push((n, root));
        let t1 = nf / (p * (nf + shift));
        let t2 = nf / (qc * (nf + shift));
        rho_seq.push((n, rho(t1, t2)));
    }
    let rho_limit = (q - 1.0) / (p - 1.0);
    let scaled = |n: usize| n as f64 * (rho_seq[n - 1].1 / rho_limit - 1.0).abs();
    let fitted_c = scaled(n_max);
    let mid = scaled(n_max / 2);
    Ok(NecessaryConditionReport {
        threshold,
        margin,
        roots,
        first_violation,
        rho_seq,
        rho_limit,
        fitted_c,
        rho_certified: (fitted_c - mid).abs() <= 0.1 * fitted_c.max(mid),
    })
}
