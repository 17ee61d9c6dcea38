//! Subordinated spectral multipliers, the Poisson subordination kernel and
//! the Jacobi heat kernel.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bernstein::BernsteinFn;
use crate::error::{invalid, Error, Result};
use crate::orthopoly::PolyFamily;
use crate::quadrature::{integrate_log, shared_rule, Measure};
use crate::special::{ln_factorial, ln_gamma};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierKind {
    /// `a_n = e^{-t f(λ_n)}`.
    Subordinated { f: BernsteinFn, t: f64 },
    /// Explicit finite table; entries past the end are zero.
    Table { values: Vec<f64> },
}

/// Spectral multiplier `A φ_n = a_n φ_n` on a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSequence {
    pub family: PolyFamily,
    pub kind: MultiplierKind,
    pub description: String,
}

impl MultiplierSequence {
    pub fn table(family: PolyFamily, values: Vec<f64>, description: impl Into<String>) -> Result<Self> {
        family.validate()?;
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid("multiplier entries must be finite and nonnegative"));
        }
        Ok(MultiplierSequence {
            family,
            kind: MultiplierKind::Table { values },
            description: description.into(),
        })
    }

    /// `ln a_n`.
    pub fn log_coefficient(&self, n: usize) -> f64 {
        match &self.kind {
            MultiplierKind::Subordinated { f, t } => {
                let lam = self.family.eigenvalue(n).expect("validated family");
                -t * f.eval(lam)
            }
            MultiplierKind::Table { values } => values.get(n).map_or(f64::NEG_INFINITY, |v| v.ln()),
        }
    }

    pub fn coefficient(&self, n: usize) -> f64 {
        self.log_coefficient(n).exp()
    }
}

/// `S_t^f` on `family`: `a_n = e^{-t f(λ_n)}`.
pub fn subordinated_multiplier(f: &BernsteinFn, t: f64, family: &PolyFamily) -> Result<MultiplierSequence> {
    family.validate()?;
    if !(t.is_finite() && t > 0.0) {
        return Err(invalid(format!("time t = {t} must be positive")));
    }
    Ok(MultiplierSequence {
        family: *family,
        kind: MultiplierKind::Subordinated { f: f.clone(), t },
        description: format!("exp(-{t} f(lambda_n)) with f = {}", f.to_json()),
    })
}

/// `|(1/(2√π)) ∫ t s^{-3/2} e^{-t²/(4s)} e^{-λs} ds - e^{-t√λ}|`. With
/// `u = t²/(4s)` the integral is `π^{-1/2} ∫ u^{-1/2} e^{-u-c/u} du`,
/// `c = λt²/4`. The further substitution `u = e^w` gives a concave
/// log-integrand decaying doubly exponentially on the right and at least
/// exponentially on the left, handled by the trapezoid rule with halving.
pub fn poisson_kernel_identity(t: f64, lam: f64, tol: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0 && lam.is_finite() && lam >= 0.0) {
        return Err(invalid("need t > 0 and lambda >= 0"));
    }
    let c = lam * t * t / 4.0;
    let phi = |w: f64| 0.5 * w - w.exp() - c * (-w).exp();
    let log_q = trapezoid_log_concave(&phi, tol)? - 0.5 * PI.ln();
    Ok((log_q.exp() - (-t * lam.sqrt()).exp()).abs())
}

/// `ln ∫_ℝ e^{φ(w)} dw` for concave `φ`, by the trapezoid rule on the range
/// where `φ` is within 60 of its maximum, halving the step until the
/// relative change is below `tol`.
fn trapezoid_log_concave(phi: &dyn Fn(f64) -> f64, tol: f64) -> Result<f64> {
    // the maximizer of a concave function, by golden-section on a bracket
    let (mut lo, mut hi) = (-1.0, 1.0);
    while phi(lo - 1.0) > phi(lo) {
        lo -= 2.0 * (hi - lo);
    }
    while phi(hi + 1.0) > phi(hi) {
        hi += 2.0 * (hi - lo);
    }
    lo -= 1.0;
    hi += 1.0;
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if phi(a) < phi(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    let peak = 0.5 * (lo + hi);
    let top = phi(peak);
    let mut left = peak;
    while phi(left) > top - 60.0 {
        left -= 1.0;
    }
    let mut right = peak;
    while phi(right) > top - 60.0 {
        right += 1.0;
    }
    let sum_at = |h: f64| -> f64 {
        let n = ((right - left) / h).ceil() as usize;
        let terms: Vec<f64> = (0..=n).map(|i| phi(left + i as f64 * h)).collect();
        crate::special::log_sum_exp(&terms) + h.ln()
    };
    let mut h = 0.5;
    let mut last = sum_at(h);
    for _ in 0..14 {
        h /= 2.0;
        let cur = sum_at(h);
        if (cur - last).exp_m1().abs() <= tol {
            return Ok(cur);
        }
        last = cur;
    }
    Err(Error::NonConvergence {
        nodes: ((right - left) / h) as usize,
        change: f64::NAN,
    })
}

/// `(γ(a, c), Γ(a, c))` by quadrature: `γ = c^a ∫_0^1 w^{a-1} e^{-cw} dw` for
/// small `c`, and `Γ = e^{-c} ∫_0^∞ (c+v)^{a-1} e^{-v} dv` for large `c`.
pub fn incomplete_gamma_pair(a: f64, c: f64, tol: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && c >= 0.0 && a.is_finite() && c.is_finite()) {
        return Err(invalid("incomplete gamma needs a > 0, c >= 0"));
    }
    let full = ln_gamma(a).exp();
    if c == 0.0 {
        return Ok((0.0, full));
    }
    if c <= 1.0 {
        // weight (1+x)^{a-1} on (-1,1) maps to w^{a-1} on (0,1], total mass 1/a
        let mu = Measure::Jacobi { alpha: 0.0, beta: a - 1.0 };
        let log_i = integrate_log(&|x: f64| -c * 0.5 * (1.0 + x), &mu, tol)?;
        let lower = (a * c.ln() + log_i).exp() / a;
        Ok((lower, full - lower))
    } else {
        let log_i = integrate_log(&|v: f64| (a - 1.0) * (c + v).ln(), &Measure::Gamma { alpha: 0.0 }, tol)?;
        let upper = (log_i - c).exp();
        Ok((full - upper, upper))
    }
}

/// Majorant of `‖P_t‖_{1→∞}` when `‖T_s‖_{1→∞} ≤ (1∧s)^{-σ/2}`:
/// `(1/(2√π)) [∫_0^1 t s^{-(σ+3)/2} e^{-t²/4s} ds + ∫_1^∞ t s^{-3/2} e^{-t²/4s} ds]`
/// `= (1/(2√π)) [4^{(σ+1)/2} t^{-σ} Γ((σ+1)/2, t²/4) + 2 γ(1/2, t²/4)]`.
pub fn poisson_ultra_bound(sigma: f64, t: f64) -> Result<f64> {
    if !(sigma > 0.0 && t > 0.0 && sigma.is_finite() && t.is_finite()) {
        return Err(invalid("need sigma > 0 and t > 0"));
    }
    let c = t * t / 4.0;
    let a = (sigma + 1.0) / 2.0;
    let (_, upper) = incomplete_gamma_pair(a, c, 1e-13)?;
    let (lower_half, _) = incomplete_gamma_pair(0.5, c, 1e-13)?;
    let first = (a * 4f64.ln() - sigma * t.ln()).exp() * upper;
    Ok((first + 2.0 * lower_half) / (2.0 * PI.sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatKernelEval {
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
    pub x: f64,
    pub y: f64,
    /// Number of retained terms `n = 0..N`.
    pub n_terms: usize,
    pub tail_bound: f64,
    pub value: f64,
}

const HEAT_CAP: usize = 50_000;

fn check_heat_params(alpha: f64, beta: f64, s: f64) -> Result<PolyFamily> {
    if !(alpha >= -0.5 && beta >= -0.5 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::Hypothesis(format!(
            "the heat kernel bounds need alpha, beta >= -1/2, got ({alpha}, {beta})"
        )));
    }
    if !(s > 0.0) {
        return Err(invalid(format!("time s = {s} must be positive")));
    }
    PolyFamily::jacobi(alpha, beta)
}

/// `ln max(|j_n(1)|, |j_n(-1)|)²`; for `α, β ≥ -1/2` the sup of `|j_n|` on
/// `[-1, 1]` is attained at an endpoint.
fn log_endpoint_sup_sq(fam: &PolyFamily, n: usize, alpha: f64, beta: f64) -> f64 {
    let nf = n as f64;
    let e = |p: f64| ln_gamma(nf + p + 1.0) - ln_gamma(p + 1.0) - ln_factorial(n);
    2.0 * e(alpha).max(e(beta)) - fam.log_norm_sq(n).expect("validated")
}

/// Smallest `N` with `Σ_{n>N} e^{-sλ_n} B_n ≤ tol · reference`, where `B_n`
/// bounds `|j_n(x) j_n(y)|`. Once consecutive bound terms shrink by a ratio
/// `r < 1/2`, the remaining tail is at most `T_{N+1} / (1 - r)`; the ratio
/// decreases from there on because `λ_n` is quadratic and `B_n` polynomial.
fn truncation(fam: &PolyFamily, alpha: f64, beta: f64, s: f64, reference: f64, tol: f64) -> Result<(usize, f64)> {
    let log_term = |n: usize| -s * fam.eigenvalue(n).expect("validated") + log_endpoint_sup_sq(fam, n, alpha, beta);
    let target = (tol * reference).ln();
    let mut n = 0;
    while n < HEAT_CAP {
        let t1 = log_term(n + 1);
        let t2 = log_term(n + 2);
        let log_r = t2 - t1;
        if log_r < -std::f64::consts::LN_2 {
            let tail = t1 - (-log_r.exp()).ln_1p();
            if tail <= target {
                return Ok((n, tail.exp()));
            }
        }
        n += 1;
    }
    let required = ((-target).max(1.0) / s).sqrt().ceil() as usize;
    Err(Error::TruncationCap {
        cap: HEAT_CAP,
        required: required.max(HEAT_CAP + 1),
    })
}

fn check_unit(x: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { x, domain: "[-1, 1]" })
    }
}

fn kernel_sum(fam: &PolyFamily, s: f64, jx: &[f64], jy: &[f64]) -> f64 {
    jx.iter()
        .zip(jy)
        .enumerate()
        // the product a·b first keeps G_s(x, y) = G_s(y, x) exact
        .map(|(n, (a, b))| (-s * fam.eigenvalue(n).expect("validated")).exp() * (a * b))
        .sum()
}

fn normalized_values(fam: &PolyFamily, n_max: usize, x: f64) -> Result<Vec<f64>> {
    Ok(fam.normalized_sequence(n_max, x)?.into_iter().map(|v| v.to_f64()).collect())
}

/// `G_s(x, y) = Σ e^{-sλ_n} j_n(x) j_n(y)` with a certified truncation: the
/// reported `tail_bound` is at most `tol` times the retained value.
pub fn jacobi_heat_kernel(alpha: f64, beta: f64, s: f64, x: f64, y: f64, tol: f64) -> Result<HeatKernelEval> {
    let fam = check_heat_params(alpha, beta, s)?;
    check_unit(x)?;
    check_unit(y)?;
    let mut reference = 1.0;
    loop {
        let (n, tail) = truncation(&fam, alpha, beta, s, reference, tol)?;
        let jx = normalized_values(&fam, n, x)?;
        let jy = normalized_values(&fam, n, y)?;
        let value = kernel_sum(&fam, s, &jx, &jy);
        if tail <= tol * value.abs() || reference <= f64::MIN_POSITIVE {
            return Ok(HeatKernelEval {
                alpha,
                beta,
                s,
                x,
                y,
                n_terms: n + 1,
                tail_bound: tail,
                value,
            });
        }
        // retained value smaller than assumed: tighten against it
        reference = if value > 0.0 && value < reference {
            value
        } else {
            reference * 1e-3
        };
    }
}

/// Kernel rows `y ↦ G_s(x, y)` for a fixed truncation, used by identity checks.
pub fn heat_kernel_truncated(alpha: f64, beta: f64, s: f64, n_max: usize, x: f64, y: f64) -> Result<f64> {
    let fam = check_heat_params(alpha, beta, s)?;
    let jx = normalized_values(&fam, n_max, x)?;
    let jy = normalized_values(&fam, n_max, y)?;
    Ok(kernel_sum(&fam, s, &jx, &jy))
}

/// `∫ G_s(x, y) dμ_{α,β}(y)` with a Gauss–Jacobi rule of `N + 1` nodes.
pub fn heat_kernel_mass(alpha: f64, beta: f64, s: f64, x: f64, tol: f64) -> Result<f64> {
    let ev = jacobi_heat_kernel(alpha, beta, s, x, x, tol)?;
    let n = ev.n_terms - 1;
    let fam = PolyFamily::jacobi(alpha, beta)?;
    let jx = normalized_values(&fam, n, x)?;
    let rule = shared_rule(&fam.measure(), n + 1)?;
    let mut total = 0.0;
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        total += w * kernel_sum(&fam, s, &jx, &normalized_values(&fam, n, y)?);
    }
    Ok(total)
}

/// `∫ G_s(x, z) G_{s'}(z, y) dμ(z)` by an exact Gauss–Jacobi rule.
pub fn heat_kernel_compose(alpha: f64, beta: f64, s: f64, s2: f64, x: f64, y: f64, tol: f64) -> Result<f64> {
    let fam = check_heat_params(alpha, beta, s.min(s2))?;
    let n = jacobi_heat_kernel(alpha, beta, s.min(s2), x, y, tol)?.n_terms - 1;
    let jx = normalized_values(&fam, n, x)?;
    let jy = normalized_values(&fam, n, y)?;
    let rule = shared_rule(&fam.measure(), n + 1)?;
    let mut total = 0.0;
    for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
        let jz = normalized_values(&fam, n, z)?;
        total += w * kernel_sum(&fam, s, &jx, &jz) * kernel_sum(&fam, s2, &jz, &jy);
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UltraEstimate {
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
    pub value: f64,
    pub argmax: (f64, f64),
    pub grid: Vec<f64>,
    pub n_terms: usize,
}

impl UltraEstimate {
    pub fn on_boundary(&self) -> bool {
        self.argmax.0.abs() == 1.0 || self.argmax.1.abs() == 1.0
    }
}

const ULTRA_GRID: usize = 33;

/// Grid maximum of `G_s` over a Chebyshev grid with endpoints, refined
/// geometrically toward the corner of the larger parameter. A lower estimate
/// of `‖e^{sL}‖_{1→∞} = sup G_s`.
pub fn ultra_norm_estimate(alpha: f64, beta: f64, s: f64) -> Result<UltraEstimate> {
    let fam = check_heat_params(alpha, beta, s)?;
    let corner = if alpha >= beta { 1.0 } else { -1.0 };
    let mut grid: Vec<f64> = (0..ULTRA_GRID)
        .map(|i| (PI * i as f64 / (ULTRA_GRID - 1) as f64).cos())
        .collect();
    for k in 1..=8 {
        grid.push(corner * (1.0 - 10f64.powi(-k)));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let corner_value = jacobi_heat_kernel(alpha, beta, s, corner, corner, 1e-12)?.value;
    let (n, _) = truncation(&fam, alpha, beta, s, corner_value, 1e-12)?;
    let tables: Vec<Vec<f64>> = grid
        .iter()
        .map(|&x| normalized_values(&fam, n, x))
        .collect::<Result<_>>()?;
    let mut best = (f64::NEG_INFINITY, (0.0, 0.0));
    for (i, jx) in tables.iter().enumerate() {
        for (k, jy) in tables.iter().enumerate().skip(i) {
            let v = kernel_sum(&fam, s, jx, jy);
            if v > best.0 {
                best = (v, (grid[i], grid[k]));
            }
        }
    }
    Ok(UltraEstimate {
        alpha,
        beta,
        s,
        value: best.0,
        argmax: best.1,
        grid,
        n_terms: n + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::LevySpec;
    use approx::assert_relative_eq;

    #[test]
    fn kernel_identity_examples() {
        assert!(poisson_kernel_identity(1.0, 0.0, 1e-12).unwrap() < 1e-8);
        assert!(poisson_kernel_identity(2.0, 1.0, 1e-12).unwrap() < 1e-8);
        assert!(poisson_kernel_identity(0.5, 4.0, 1e-12).unwrap() < 1e-8);
    }

    #[test]
    fn multiplier_examples() {
        let m = subordinated_multiplier(&BernsteinFn::sqrt(), 1.0, &PolyFamily::Hermite).unwrap();
        assert_relative_eq!(m.coefficient(4), (-2.0f64).exp(), max_relative = 1e-15);
        let f = BernsteinFn::new(0.3, 1.0, LevySpec::Stable { theta: 0.5 }).unwrap();
        let m = subordinated_multiplier(&f, 2.0, &PolyFamily::Laguerre { alpha: 0.0 }).unwrap();
        assert_relative_eq!(m.coefficient(0), (-0.6f64).exp(), max_relative = 1e-15);
        let d = BernsteinFn::drift(1.0).unwrap();
        let t = 0.7;
        let m = subordinated_multiplier(&d, t, &PolyFamily::Jacobi { alpha: 0.0, beta: 0.0 }).unwrap();
        assert_relative_eq!(m.coefficient(1), (-2.0 * t).exp(), max_relative = 1e-15);
        assert!(subordinated_multiplier(&d, 0.0, &PolyFamily::Hermite).is_err());
    }

    #[test]
    fn heat_kernel_examples() {
        let v = jacobi_heat_kernel(0.0, 0.0, 60.0, 0.3, -0.8, 1e-12).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
        let a = jacobi_heat_kernel(0.0, 0.0, 0.5, 1.0, 1.0, 1e-12).unwrap();
        assert!(a.value > 0.0 && a.tail_bound <= 1e-10 * a.value);
        let doubled = heat_kernel_truncated(0.0, 0.0, 0.5, 2 * a.n_terms, 1.0, 1.0).unwrap();
        assert!((a.value - doubled).abs() <= 1e-10 * a.value);
        let m = heat_kernel_mass(0.0, 0.0, 1.0, 0.0, 1e-12).unwrap();
        assert!((m - 1.0).abs() < 1e-8);
        assert!(jacobi_heat_kernel(-0.7, 0.0, 1.0, 0.0, 0.0, 1e-12).is_err());
        assert!(jacobi_heat_kernel(0.0, 0.0, 1.0, 1.5, 0.0, 1e-12).is_err());
    }

    #[test]
    fn incomplete_gamma_matches_statrs() {
        use statrs::function::gamma::{gamma_li, gamma_ui};
        for a in [0.5, 1.0, 1.5, 2.7] {
            for c in [1e-7, 0.01, 0.7, 1.0, 3.0, 25.0] {
                let (lo, up) = incomplete_gamma_pair(a, c, 1e-13).unwrap();
                assert_relative_eq!(lo, gamma_li(a, c), max_relative = 1e-9);
                assert_relative_eq!(up, gamma_ui(a, c), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn ultra_large_time() {
        let u = ultra_norm_estimate(0.0, 0.0, 10.0).unwrap();
        assert!((u.value - 1.0).abs() < 1e-6);
    }
}
