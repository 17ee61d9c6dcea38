//! Invariant probability measures, Gauss rules and log-scale integration.
//!
//! Rules are built by Golub–Welsch: nodes are the eigenvalues of the Jacobi
//! matrix of the monic recurrence; weights come from the Christoffel sum
//! `1 / Σ p̃_k(x)²` of the orthonormal polynomials. The Christoffel form keeps
//! full relative accuracy in the far tails where eigenvector components
//! underflow.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::logvalue::LogValue;
use crate::orthopoly::PolyFamily;
use crate::special::{ln_beta, ln_gamma, log_sum_exp};

pub const DEFAULT_TOL: f64 = 1e-10;
const M_START: usize = 64;
const M_CAP: usize = 16384;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Measure {
    /// `π^{-1/2} e^{-x²} dx` on the line.
    Gaussian,
    /// `x^α e^{-x} dx / Γ(α+1)` on `(0, ∞)`.
    Gamma { alpha: f64 },
    /// `(1-x)^α (1+x)^β dx / Z_{α,β}` on `(-1, 1)`.
    Jacobi { alpha: f64, beta: f64 },
    /// Image of `Jacobi{α,β}` under `x ↦ (β/2)(1-x)`, supported on `(0, β)`.
    RescaledJacobiNearOne { alpha: f64, beta: f64 },
    /// Image of `Jacobi{λ-1/2, λ-1/2}` under `x ↦ √λ x`.
    RescaledSymmetricJacobi { lambda: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    /// Probability weights; they may underflow to zero in far tails, in which
    /// case `log_weights` still carries the value.
    pub weights: Vec<f64>,
    pub log_weights: Vec<f64>,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `ln Σ w_i e^{g(x_i)}` for a log-integrand `g`.
    pub fn integrate_log(&self, g: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.log_weights)
            .map(|(&x, &lw)| lw + g(x))
            .collect();
        log_sum_exp(&terms)
    }
}

fn check_finite_gt(name: &str, v: f64, lo: f64) -> Result<()> {
    if v.is_finite() && v > lo {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {v} must be finite and exceed {lo}")))
    }
}

impl Measure {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Measure::Gaussian => Ok(()),
            Measure::Gamma { alpha } => check_finite_gt("alpha", alpha, -1.0),
            Measure::Jacobi { alpha, beta } | Measure::RescaledJacobiNearOne { alpha, beta } => {
                check_finite_gt("alpha", alpha, -1.0)?;
                check_finite_gt("beta", beta, -1.0)?;
                if matches!(self, Measure::RescaledJacobiNearOne { .. }) && beta <= 0.0 {
                    return Err(invalid("rescaling needs beta > 0"));
                }
                Ok(())
            }
            Measure::RescaledSymmetricJacobi { lambda } => check_finite_gt("lambda", lambda, 0.0),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            Measure::Gaussian => (f64::NEG_INFINITY, f64::INFINITY),
            Measure::Gamma { .. } => (0.0, f64::INFINITY),
            Measure::Jacobi { .. } => (-1.0, 1.0),
            Measure::RescaledJacobiNearOne { beta, .. } => (0.0, beta),
            Measure::RescaledSymmetricJacobi { lambda } => (-lambda.sqrt(), lambda.sqrt()),
        }
    }

    /// Exponents `e` of the algebraic factors `(x-a)^e`, `(b-x)^e` at finite
    /// endpoints.
    pub fn endpoint_exponents(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            Measure::Gaussian => (None, None),
            Measure::Gamma { alpha } => (Some(alpha), None),
            Measure::Jacobi { alpha, beta } => (Some(beta), Some(alpha)),
            Measure::RescaledJacobiNearOne { alpha, beta } => (Some(alpha), Some(beta)),
            Measure::RescaledSymmetricJacobi { lambda } => (Some(lambda - 0.5), Some(lambda - 0.5)),
        }
    }

    /// Log-density at `x`; `-inf` outside the support.
    pub fn log_density(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if !(x > a && x < b) {
            return f64::NEG_INFINITY;
        }
        self.log_density_reduced(x, false, false)
    }

    /// Log-density with the left and/or right endpoint factor removed.
    pub(crate) fn log_density_reduced(&self, x: f64, drop_left: bool, drop_right: bool) -> f64 {
        let pow = |drop: bool, e: f64, d: f64| if drop || e == 0.0 { 0.0 } else { e * d.ln() };
        match *self {
            Measure::Gaussian => -x * x - 0.5 * PI.ln(),
            Measure::Gamma { alpha } => pow(drop_left, alpha, x) - x - ln_gamma(alpha + 1.0),
            Measure::Jacobi { alpha, beta } => {
                -log_jacobi_z(alpha, beta) + pow(drop_right, alpha, 1.0 - x) + pow(drop_left, beta, 1.0 + x)
            }
            Measure::RescaledJacobiNearOne { alpha, beta } => {
                // ĉ y^α (1 - y/β)^β = ĉ β^{-β} y^α (β - y)^β
                -(alpha + 1.0) * beta.ln() - ln_beta(alpha + 1.0, beta + 1.0) - beta * beta.ln()
                    + pow(drop_left, alpha, x)
                    + pow(drop_right, beta, beta - x)
            }
            Measure::RescaledSymmetricJacobi { lambda } => {
                let e = lambda - 0.5;
                let r = lambda.sqrt();
                -0.5 * lambda.ln() - log_jacobi_z(e, e) - e * lambda.ln()
                    + pow(drop_left, e, r + x)
                    + pow(drop_right, e, r - x)
            }
        }
    }
}

/// `ln Z_{α,β} = ln(2^{α+β+1} B(α+1, β+1))`.
pub fn log_jacobi_z(alpha: f64, beta: f64) -> f64 {
    (alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_beta(alpha + 1.0, beta + 1.0)
}

/// Monic recurrence `p_{k+1} = (x - a_k) p_k - b_k p_{k-1}`; returns
/// `a_0..a_{m-1}` and `b_0..b_{m-1}` (`b_0` unused).
fn recurrence(measure: &Measure, m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![0.0; m];
    let mut b = vec![0.0; m];
    match *measure {
        Measure::Gaussian => {
            for (k, bk) in b.iter_mut().enumerate() {
                *bk = k as f64 / 2.0;
            }
        }
        Measure::Gamma { alpha } => {
            for k in 0..m {
                let kf = k as f64;
                a[k] = 2.0 * kf + alpha + 1.0;
                b[k] = kf * (kf + alpha);
            }
        }
        Measure::Jacobi { alpha, beta } => {
            let ab = alpha + beta;
            for k in 0..m {
                let kf = k as f64;
                let s = 2.0 * kf + ab;
                a[k] = if k == 0 {
                    (beta - alpha) / (ab + 2.0)
                } else if beta == alpha {
                    0.0
                } else {
                    (beta * beta - alpha * alpha) / (s * (s + 2.0))
                };
                b[k] = match k {
                    0 => 0.0,
                    1 => 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab)),
                    _ => 4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0)),
                };
            }
        }
        _ => unreachable!("rescaled measures map Jacobi rules"),
    }
    (a, b)
}

/// Implicit QL on the symmetric tridiagonal matrix; returns its eigenvalues
/// in increasing order.
fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    // e[i] couples i and i+1
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::NonConvergence { nodes: n, change: e[l].abs() });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let bb = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// `ln` of the Christoffel weight `1 / Σ_{k<m} p̃_k(x)²`.
fn christoffel_log_weight(a: &[f64], b: &[f64], x: f64) -> f64 {
    const BIG: f64 = 1e150;
    let m = a.len();
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut sum = 1.0;
    let mut log_scale = 0.0; // values are p̃ / e^{log_scale}
    for k in 0..m - 1 {
        let sb_next = b[k + 1].sqrt();
        let sb = if k == 0 { 0.0 } else { b[k].sqrt() };
        let next = ((x - a[k]) * cur - sb * prev) / sb_next;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            sum /= BIG * BIG;
            log_scale += BIG.ln();
        }
        sum += cur * cur;
    }
    -(sum.ln() + 2.0 * log_scale)
}

fn rule_from_recurrence(a: &[f64], b: &[f64]) -> Result<QuadratureRule> {
    let m = a.len();
    let off: Vec<f64> = (1..m).map(|k| b[k].sqrt()).collect();
    let nodes = tridiagonal_eigenvalues(a, &off)?;
    let mut log_weights: Vec<f64> = nodes.iter().map(|&x| christoffel_log_weight(a, b, x)).collect();
    let total = log_sum_exp(&log_weights);
    for lw in &mut log_weights {
        *lw -= total;
    }
    let weights = log_weights.iter().map(|lw| lw.exp()).collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        log_weights,
        exactness_degree: 2 * m - 1,
    })
}

type CacheKey = (u8, u64, u64, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn base_rule(measure: &Measure, m: usize) -> Result<Arc<QuadratureRule>> {
    let key = match *measure {
        Measure::Gaussian => (0, 0, 0, m),
        Measure::Gamma { alpha } => (1, alpha.to_bits(), 0, m),
        Measure::Jacobi { alpha, beta } => (2, alpha.to_bits(), beta.to_bits(), m),
        _ => unreachable!(),
    };
    if let Some(r) = cache().lock().expect("rule cache").get(&key) {
        return Ok(Arc::clone(r));
    }
    let (a, b) = recurrence(measure, m);
    let rule = Arc::new(rule_from_recurrence(&a, &b)?);
    cache().lock().expect("rule cache").insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// `m`-point Gauss rule for `measure`, exact through degree `2m - 1`.
pub fn gauss_rule(measure: &Measure, m: usize) -> Result<QuadratureRule> {
    Ok((*shared_rule(measure, m)?).clone())
}

pub(crate) fn shared_rule(measure: &Measure, m: usize) -> Result<Arc<QuadratureRule>> {
    if m == 0 {
        return Err(invalid("a Gauss rule needs at least one node"));
    }
    measure.validate()?;
    match *measure {
        Measure::Gaussian | Measure::Gamma { .. } | Measure::Jacobi { .. } => base_rule(measure, m),
        Measure::RescaledJacobiNearOne { alpha, beta } => {
            let base = base_rule(&Measure::Jacobi { alpha, beta }, m)?;
            // y = (β/2)(1 - x) reverses the order
            let mut r = (*base).clone();
            r.nodes = base.nodes.iter().rev().map(|&x| 0.5 * beta * (1.0 - x)).collect();
            r.weights.reverse();
            r.log_weights.reverse();
            Ok(Arc::new(r))
        }
        Measure::RescaledSymmetricJacobi { lambda } => {
            let e = lambda - 0.5;
            let base = base_rule(&Measure::Jacobi { alpha: e, beta: e }, m)?;
            let mut r = (*base).clone();
            let s = lambda.sqrt();
            r.nodes.iter_mut().for_each(|x| *x *= s);
            Ok(Arc::new(r))
        }
    }
}

/// `ln ∫ e^{g} dμ` by rule doubling from 64 to 16384 nodes.
pub fn integrate_log(g: &dyn Fn(f64) -> f64, measure: &Measure, tol: f64) -> Result<f64> {
    let mut m = M_START;
    let mut last = shared_rule(measure, m)?.integrate_log(g);
    loop {
        let next_m = m * 2;
        if next_m > M_CAP {
            return Err(Error::NonConvergence { nodes: m, change: f64::NAN });
        }
        let cur = shared_rule(measure, next_m)?.integrate_log(g);
        let change = if cur == last { 0.0 } else { (cur - last).exp_m1().abs() };
        if change <= tol || (cur == f64::NEG_INFINITY && last == f64::NEG_INFINITY) {
            return Ok(cur);
        }
        if next_m == M_CAP {
            return Err(Error::NonConvergence { nodes: next_m, change });
        }
        last = cur;
        m = next_m;
    }
}

/// Signed `∫ f dμ` by rule doubling; convergence is judged against the
/// absolute mass `∫ |f| dμ`.
pub fn integrate(f: &dyn Fn(f64) -> f64, measure: &Measure, tol: f64) -> Result<f64> {
    let mut m = M_START;
    let eval = |m: usize| -> Result<(f64, f64)> {
        let r = shared_rule(measure, m)?;
        let (mut s, mut a) = (0.0, 0.0);
        for (&x, &w) in r.nodes.iter().zip(&r.weights) {
            let v = w * f(x);
            s += v;
            a += v.abs();
        }
        Ok((s, a))
    };
    let mut last = eval(m)?;
    while m * 2 <= M_CAP {
        m *= 2;
        let cur = eval(m)?;
        let change = (cur.0 - last.0).abs();
        if change <= tol * cur.1.max(f64::MIN_POSITIVE) {
            return Ok(cur.0);
        }
        last = cur;
    }
    Err(Error::NonConvergence {
        nodes: m,
        change: (last.0).abs(),
    })
}

/// `(∫ |f|^p dμ)^{1/p}` in log scale, by node doubling.
pub fn lp_norm(f: &dyn Fn(f64) -> LogValue, p: f64, measure: &Measure, tol: f64) -> Result<LogValue> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(invalid(format!("exponent p = {p} must be finite and at least 1")));
    }
    let log_int = integrate_log(&|x| p * f(x).logmag(), measure, tol)?;
    Ok(LogValue::new(if log_int == f64::NEG_INFINITY { 0 } else { 1 }, log_int / p))
}

/// `∫ e^{sx} dμ`.
pub fn exp_moment(measure: &Measure, s: f64) -> Result<f64> {
    measure.validate()?;
    if !s.is_finite() {
        return Err(invalid("exponent must be finite"));
    }
    match *measure {
        Measure::Gaussian => Ok((s * s / 4.0).exp()),
        Measure::Gamma { alpha } => {
            if s >= 1.0 {
                Err(Error::Hypothesis(format!("exponential moment diverges for s = {s} >= 1")))
            } else {
                Ok((-(alpha + 1.0) * (-s).ln_1p()).exp())
            }
        }
        _ => Ok(integrate_log(&|x| s * x, measure, DEFAULT_TOL)?.exp()),
    }
}

/// Closed-form moment `∫ x^k dμ` where one exists (tests and diagnostics).
pub fn monomial_moment(measure: &Measure, k: u32) -> Option<f64> {
    match *measure {
        Measure::Gaussian => {
            if k % 2 == 1 {
                Some(0.0)
            } else {
                // Γ((k+1)/2)/√π
                Some((ln_gamma((k as f64 + 1.0) / 2.0) - 0.5 * PI.ln()).exp())
            }
        }
        Measure::Gamma { alpha } => Some((ln_gamma(k as f64 + alpha + 1.0) - ln_gamma(alpha + 1.0)).exp()),
        Measure::Jacobi { alpha, beta } if alpha == beta => {
            if k % 2 == 1 {
                Some(0.0)
            } else {
                // E x^{2j} = B(j+1/2, α+1) / B(1/2, α+1)
                let j = k as f64 / 2.0;
                Some((ln_beta(j + 0.5, alpha + 1.0) - ln_beta(0.5, alpha + 1.0)).exp())
            }
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Panel integration for eigenfunction norms.

#[derive(Clone, Copy, Debug, PartialEq)]
enum Edge {
    /// Simple zero of the integrand's base function: factor `|x - z|^p`.
    Zero,
    /// Finite endpoint of the measure carrying its algebraic factor.
    MeasureEnd(f64),
    /// Plain cut point.
    Open,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    left: Edge,
    right: Edge,
}

fn jacobi_unit_rule(right_exp: f64, left_exp: f64, m: usize) -> Result<Arc<QuadratureRule>> {
    base_rule(
        &Measure::Jacobi {
            alpha: right_exp,
            beta: left_exp,
        },
        m,
    )
}

struct PanelProblem<'a> {
    measure: Measure,
    p: f64,
    /// `ln |f(x)|`.
    log_f: &'a dyn Fn(f64) -> f64,
}

impl PanelProblem<'_> {
    fn exponent(&self, e: Edge) -> f64 {
        match e {
            Edge::Zero => self.p,
            Edge::MeasureEnd(a) => a,
            Edge::Open => 0.0,
        }
    }

    fn plain_log_integrand(&self, x: f64) -> f64 {
        self.p * (self.log_f)(x) + self.measure.log_density(x)
    }

    fn panel_log_integral(&self, panel: &Panel, m: usize) -> Result<f64> {
        let el = self.exponent(panel.left);
        let er = self.exponent(panel.right);
        let rule = jacobi_unit_rule(er, el, m)?;
        let width = panel.hi - panel.lo;
        let half = 0.5 * width;
        let drop_l = matches!(panel.left, Edge::MeasureEnd(_));
        let drop_r = matches!(panel.right, Edge::MeasureEnd(_));
        let mut terms = Vec::with_capacity(m);
        for (&u, &lw) in rule.nodes.iter().zip(&rule.log_weights) {
            let dl = half * (1.0 + u);
            let dr = half * (1.0 - u);
            let x = if u <= 0.0 { panel.lo + dl } else { panel.hi - dr };
            let mut h = self.p * (self.log_f)(x) + self.measure.log_density_reduced(x, drop_l, drop_r);
            if panel.left == Edge::Zero {
                h -= self.p * dl.ln();
            }
            if panel.right == Edge::Zero {
                h -= self.p * dr.ln();
            }
            terms.push(lw + h);
        }
        // ∫ (x-lo)^el (hi-x)^er H dx = width^{el+er+1} B(el+1, er+1) E[H]
        Ok((el + er + 1.0) * width.ln() + ln_beta(el + 1.0, er + 1.0) + log_sum_exp(&terms))
    }

    /// Marches outward from `start` in steps of `h` until the integrand has
    /// dropped 60 e-folds below the running maximum and is decreasing.
    fn tail(&self, start: f64, start_edge: Edge, h: f64, dir: f64, running_max: &mut f64) -> Result<Vec<Panel>> {
        const DROP: f64 = 60.0;
        const MAX_PANELS: usize = 20_000;
        let mut out = Vec::new();
        let mut x = start;
        let mut prev_val = self.plain_log_integrand(start);
        let mut edge = start_edge;
        for _ in 0..MAX_PANELS {
            let nx = x + dir * h;
            let (lo, hi, left, right) = if dir > 0.0 {
                (x, nx, edge, Edge::Open)
            } else {
                (nx, x, Edge::Open, edge)
            };
            out.push(Panel { lo, hi, left, right });
            let v = self.plain_log_integrand(nx);
            if v.is_finite() {
                *running_max = running_max.max(v);
            }
            if v < *running_max - DROP && v <= prev_val {
                return Ok(out);
            }
            prev_val = v;
            x = nx;
            edge = Edge::Open;
        }
        Err(Error::TruncationCap {
            cap: MAX_PANELS,
            required: MAX_PANELS + 1,
        })
    }

    fn panels(&self, zeros: &[f64]) -> Result<Vec<Panel>> {
        let (a, b) = self.measure.support();
        let (ea, eb) = self.measure.endpoint_exponents();
        let n = zeros.len();
        let mut interior = Vec::new();
        for w in zeros.windows(2) {
            interior.push(Panel {
                lo: w[0],
                hi: w[1],
                left: Edge::Zero,
                right: Edge::Zero,
            });
        }
        let mut running_max = f64::NEG_INFINITY;
        for pnl in &interior {
            let v = self.plain_log_integrand(0.5 * (pnl.lo + pnl.hi));
            if v.is_finite() {
                running_max = running_max.max(v);
            }
        }
        let step = if n >= 2 {
            (zeros[n - 1] - zeros[n - 2]).max(zeros[1] - zeros[0]).max(0.25)
        } else {
            1.0
        };
        let mut out = Vec::new();
        // left side
        match (ea, n) {
            (Some(e), 0) => match eb {
                Some(e2) => {
                    return Ok(vec![Panel {
                        lo: a,
                        hi: b,
                        left: Edge::MeasureEnd(e),
                        right: Edge::MeasureEnd(e2),
                    }])
                }
                None => {
                    let first = Panel {
                        lo: a,
                        hi: a + step,
                        left: Edge::MeasureEnd(e),
                        right: Edge::Open,
                    };
                    let v = self.plain_log_integrand(a + 0.5 * step);
                    if v.is_finite() {
                        running_max = running_max.max(v);
                    }
                    out.push(first);
                    out.extend(self.tail(a + step, Edge::Open, step, 1.0, &mut running_max)?);
                    return Ok(out);
                }
            },
            (Some(e), _) => out.push(Panel {
                lo: a,
                hi: zeros[0],
                left: Edge::MeasureEnd(e),
                right: Edge::Zero,
            }),
            (None, 0) => {
                // two-sided infinite support, no zeros: march from the origin
                let v = self.plain_log_integrand(0.0);
                if v.is_finite() {
                    running_max = running_max.max(v);
                }
                let mut left = self.tail(0.0, Edge::Open, step, -1.0, &mut running_max)?;
                let right = self.tail(0.0, Edge::Open, step, 1.0, &mut running_max)?;
                left.reverse();
                left.extend(right);
                return Ok(left);
            }
            (None, _) => {
                let mut left = self.tail(zeros[0], Edge::Zero, step, -1.0, &mut running_max)?;
                left.reverse();
                out.extend(left);
            }
        }
        out.extend(interior);
        match eb {
            Some(e) => out.push(Panel {
                lo: zeros[n - 1],
                hi: b,
                left: Edge::Zero,
                right: Edge::MeasureEnd(e),
            }),
            None => out.extend(self.tail(zeros[n - 1], Edge::Zero, step, 1.0, &mut running_max)?),
        }
        Ok(out)
    }
}

/// `ln ∫ |f|^p dμ` for an `f` whose sign changes are exactly at the sorted
/// simple zeros `zeros`. Each panel between consecutive zeros (and endpoints)
/// uses a Gauss–Jacobi rule absorbing the `|x - z|^p` and endpoint factors,
/// so the remaining integrand is analytic; panels double from 16 to 1024
/// nodes.
pub fn log_lp_integral_between_zeros(
    log_f: &dyn Fn(f64) -> f64,
    zeros: &[f64],
    p: f64,
    measure: &Measure,
    tol: f64,
) -> Result<f64> {
    measure.validate()?;
    if !(p.is_finite() && p >= 1.0) {
        return Err(invalid(format!("exponent p = {p} must be finite and at least 1")));
    }
    let problem = PanelProblem {
        measure: *measure,
        p,
        log_f,
    };
    let panels = problem.panels(zeros)?;
    let total = |m: usize| -> Result<f64> {
        let parts = panels
            .iter()
            .map(|pn| problem.panel_log_integral(pn, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(log_sum_exp(&parts))
    };
    let mut m = 16;
    let mut last = total(m)?;
    while m < 1024 {
        m *= 2;
        let cur = total(m)?;
        let change = (cur - last).exp_m1().abs();
        if change <= tol {
            return Ok(cur);
        }
        last = cur;
    }
    Err(Error::NonConvergence {
        nodes: m * panels.len(),
        change: f64::NAN,
    })
}

/// `‖φ_n‖_{L^p}` of the normalized eigenfunction on the family's measure.
pub fn eigen_lp_norm(family: &PolyFamily, n: usize, p: f64, tol: f64) -> Result<LogValue> {
    family.validate()?;
    let measure = family.measure();
    let zeros = if n == 0 {
        Vec::new()
    } else {
        shared_rule(&measure, n)?.nodes.clone()
    };
    let c = -0.5 * family.log_norm_sq(n)?;
    let log_f = |x: f64| family.eval_unchecked(n, x).logmag() + c;
    let li = log_lp_integral_between_zeros(&log_f, &zeros, p, &measure, tol)?;
    Ok(LogValue::from_log(li / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_rules() {
        let g1 = gauss_rule(&Measure::Gaussian, 1).unwrap();
        assert_eq!(g1.nodes, vec![0.0]);
        assert_relative_eq!(g1.weights[0], 1.0, max_relative = 1e-15);
        let g = gauss_rule(&Measure::Gamma { alpha: 0.0 }, 2).unwrap();
        assert_relative_eq!(g.integrate(|x| x), 1.0, max_relative = 1e-14);
        let j = gauss_rule(&Measure::Jacobi { alpha: 0.0, beta: 0.0 }, 3).unwrap();
        assert_relative_eq!(j.integrate(|x| x * x), 1.0 / 3.0, max_relative = 1e-14);
        assert!(gauss_rule(&Measure::Gaussian, 0).is_err());
        assert!(gauss_rule(&Measure::Gamma { alpha: f64::NAN }, 3).is_err());
    }

    #[test]
    fn moments_and_mass() {
        let measures = [
            Measure::Gaussian,
            Measure::Gamma { alpha: 0.0 },
            Measure::Gamma { alpha: 2.5 },
            Measure::Jacobi { alpha: 1.5, beta: 1.5 },
            Measure::Jacobi { alpha: -0.5, beta: -0.5 },
        ];
        for mu in measures {
            for m in [1usize, 5, 12, 20] {
                let r = gauss_rule(&mu, m).unwrap();
                assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(r.weights.iter().all(|&w| w > 0.0));
                for k in 0..=(r.exactness_degree as u32).min(24) {
                    let exact = monomial_moment(&mu, k).unwrap();
                    let q = r.integrate(|x| x.powi(k as i32));
                    let scale = exact.abs().max(monomial_moment(&mu, k + k % 2).unwrap().abs());
                    assert!((q - exact).abs() <= 1e-10 * scale, "{mu:?} m={m} k={k}: {q} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn asymmetric_jacobi_moments() {
        // E[1+x] for μ_{α,β} equals 2(β+1)/(α+β+2)
        let (a, b) = (0.3, 2.2);
        let r = gauss_rule(&Measure::Jacobi { alpha: a, beta: b }, 7).unwrap();
        assert_relative_eq!(r.integrate(|x| 1.0 + x), 2.0 * (b + 1.0) / (a + b + 2.0), max_relative = 1e-13);
    }

    #[test]
    fn large_rules_are_accurate() {
        let r = gauss_rule(&Measure::Gaussian, 2048).unwrap();
        assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_relative_eq!(r.integrate(|x| (2.0 * x).exp()), 1f64.exp(), max_relative = 1e-12);
    }

    #[test]
    fn lp_norm_examples() {
        let one = |_x: f64| LogValue::ONE;
        for mu in [Measure::Gaussian, Measure::Gamma { alpha: 1.0 }, Measure::Jacobi { alpha: 0.5, beta: 2.0 }] {
            assert_relative_eq!(lp_norm(&one, 3.0, &mu, 1e-10).unwrap().to_f64(), 1.0, max_relative = 1e-12);
        }
        let h1 = |x: f64| LogValue::from_f64(std::f64::consts::SQRT_2 * x);
        assert_relative_eq!(
            lp_norm(&h1, 4.0, &Measure::Gaussian, 1e-10).unwrap().to_f64(),
            3f64.powf(0.25),
            max_relative = 1e-10
        );
        let g = |x: f64| LogValue::from_log(x);
        assert_relative_eq!(
            lp_norm(&g, 2.0, &Measure::Gaussian, 1e-10).unwrap().to_f64(),
            0.5f64.exp(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn exp_moment_examples() {
        assert_eq!(exp_moment(&Measure::Gaussian, 0.0).unwrap(), 1.0);
        assert_relative_eq!(exp_moment(&Measure::Gaussian, 2.0).unwrap(), 1f64.exp(), max_relative = 1e-15);
        assert_relative_eq!(exp_moment(&Measure::Gamma { alpha: 1.0 }, 0.5).unwrap(), 4.0, max_relative = 1e-14);
        assert!(exp_moment(&Measure::Gamma { alpha: 1.0 }, 1.0).is_err());
        // Legendre: sinh(s)/s
        let s = 1.7;
        assert_relative_eq!(
            exp_moment(&Measure::Jacobi { alpha: 0.0, beta: 0.0 }, s).unwrap(),
            s.sinh() / s,
            max_relative = 1e-10
        );
    }

    #[test]
    fn quadrature_matches_closed_form_moment() {
        for s in [-3.0, 0.4, 2.5] {
            let q = integrate_log(&|x| s * x, &Measure::Gaussian, 1e-12).unwrap().exp();
            assert_relative_eq!(q, exp_moment(&Measure::Gaussian, s).unwrap(), max_relative = 1e-10);
        }
        for s in [-2.0, 0.3, 0.7] {
            let mu = Measure::Gamma { alpha: 1.3 };
            let q = integrate_log(&|x| s * x, &mu, 1e-12).unwrap().exp();
            assert_relative_eq!(q, exp_moment(&mu, s).unwrap(), max_relative = 1e-10);
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        // trapezoid sanity check on the log-density formulas, independent of the rules
        for mu in [
            Measure::Jacobi { alpha: 1.0, beta: 2.0 },
            Measure::RescaledJacobiNearOne { alpha: 1.0, beta: 10.0 },
            Measure::RescaledSymmetricJacobi { lambda: 3.0 },
            Measure::Gamma { alpha: 2.0 },
            Measure::Gaussian,
        ] {
            let (a, b) = mu.support();
            let (a, b) = (a.max(-12.0), b.min(80.0));
            let n = 200_000;
            let h = (b - a) / n as f64;
            let s: f64 = (1..n).map(|i| mu.log_density(a + i as f64 * h).exp()).sum::<f64>() * h;
            assert!((s - 1.0).abs() < 1e-6, "{mu:?}: {s}");
        }
    }

    #[test]
    fn eigen_norms_known_values() {
        // ‖h_1‖_4 = 3^{1/4}; ‖h_n‖_2 = 1
        let v = eigen_lp_norm(&PolyFamily::Hermite, 1, 4.0, 1e-12).unwrap().to_f64();
        assert_relative_eq!(v, 3f64.powf(0.25), max_relative = 1e-11);
        for fam in [
            PolyFamily::Hermite,
            PolyFamily::Laguerre { alpha: 0.5 },
            PolyFamily::Jacobi { alpha: 2.0, beta: -0.5 },
            PolyFamily::Gegenbauer { lambda: 1.0 },
        ] {
            for n in [0usize, 1, 7, 30] {
                let v = eigen_lp_norm(&fam, n, 2.0, 1e-12).unwrap().to_f64();
                assert!((v - 1.0).abs() < 1e-10, "{fam:?} n={n}: {v}");
            }
        }
    }

    #[test]
    fn eigen_norm_matches_generic_path() {
        for fam in [PolyFamily::Hermite, PolyFamily::Laguerre { alpha: 0.0 }, PolyFamily::Jacobi { alpha: 1.0, beta: 0.0 }] {
            // the kinks of |φ|^p at non-even p slow the generic rules down
            for (n, p, tol) in [(5usize, 3.0, 1e-7), (12, 1.5, 1e-4), (20, 4.0, 1e-11)] {
                let a = eigen_lp_norm(&fam, n, p, 1e-12).unwrap();
                let f = |x: f64| fam.eval_normalized(n, x).unwrap();
                let b = lp_norm(&f, p, &fam.measure(), tol).unwrap();
                assert!(((a.logmag() - b.logmag()).abs()) < 10.0 * tol, "{fam:?} {n} {p}: {a} vs {b}");
            }
        }
    }
}
