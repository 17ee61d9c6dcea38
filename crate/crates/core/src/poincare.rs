//! Rate functions of super- and weak-Poincaré inequalities and their
//! transforms under Bernstein subordination:
//! `β_f(r) = 4β(1/(2f⁻¹(2/r)))` and `α_f(r) = 2/f(1/(2α(r/4)))`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bernstein::{BernsteinFn, LevySpec};
use crate::error::{invalid, Result};
use crate::special::ls_slope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateKind {
    Super,
    Weak,
}

#[derive(Clone)]
enum RateExpr {
    /// `c r^{-m}`.
    Power { c: f64, m: f64 },
    /// `c (1 + r^{-m})`.
    OnePlusPower { c: f64, m: f64 },
    SuperTransform { inner: Arc<RateFunction>, f: BernsteinFn },
    WeakTransform { inner: Arc<RateFunction>, f: BernsteinFn },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A decreasing map `(0, ∞) → (0, ∞]`; `+∞` is a legitimate value.
#[derive(Clone)]
pub struct RateFunction {
    pub kind: RateKind,
    pub description: String,
    expr: RateExpr,
}

impl fmt::Debug for RateFunction {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("RateFunction")
            .field("kind", &self.kind)
            .field("description", &self.description)
            .finish()
    }
}

impl RateFunction {
    /// `c r^{-m}` with `c > 0`, `m ≥ 0`.
    pub fn power(kind: RateKind, c: f64, m: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite() && m >= 0.0 && m.is_finite()) {
            return Err(invalid(format!("power rate needs c > 0 and m >= 0, got c = {c}, m = {m}")));
        }
        Ok(RateFunction {
            kind,
            description: format!("{c} r^-{m}"),
            expr: RateExpr::Power { c, m },
        })
    }

    /// `c (1 + r^{-m})`.
    pub fn one_plus_power(kind: RateKind, c: f64, m: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite() && m >= 0.0 && m.is_finite()) {
            return Err(invalid(format!("rate needs c > 0 and m >= 0, got c = {c}, m = {m}")));
        }
        Ok(RateFunction {
            kind,
            description: format!("{c} (1 + r^-{m})"),
            expr: RateExpr::OnePlusPower { c, m },
        })
    }

    /// Arbitrary rate; monotonicity is the caller's responsibility and can be
    /// checked with [`RateFunction::is_decreasing_on`].
    pub fn custom(kind: RateKind, description: impl Into<String>, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RateFunction {
            kind,
            description: description.into(),
            expr: RateExpr::Custom(Arc::new(g)),
        }
    }

    /// Value at `r ≥ 0`; `r = 0` gives the limit `r → 0⁺`.
    pub fn eval(&self, r: f64) -> f64 {
        match &self.expr {
            RateExpr::Power { c, m } => {
                if *m == 0.0 {
                    *c
                } else {
                    c * r.powf(-m)
                }
            }
            RateExpr::OnePlusPower { c, m } => {
                if *m == 0.0 {
                    2.0 * c
                } else {
                    c * (1.0 + r.powf(-m))
                }
            }
            RateExpr::SuperTransform { inner, f } => {
                if let Some(arg) = super_argument_closed(f, r) {
                    return 4.0 * inner.eval(arg);
                }
                let u = if r == 0.0 { f64::INFINITY } else { 2.0 / r };
                let finv = bernstein_inverse(f, u);
                if finv == 0.0 || finv.is_nan() {
                    f64::INFINITY
                } else {
                    4.0 * inner.eval(0.5 / finv)
                }
            }
            RateExpr::WeakTransform { inner, f } => {
                let a = inner.eval(r / 4.0);
                let arg = 0.5 / a;
                2.0 / f.eval(arg)
            }
            RateExpr::Custom(g) => g(r),
        }
    }

    /// Non-increasing on `npts` log-spaced points of `[lo, hi]`, allowing
    /// relative rounding of `1e-12`.
    pub fn is_decreasing_on(&self, lo: f64, hi: f64, npts: usize) -> bool {
        let grid = log_grid(lo, hi, npts);
        grid.windows(2).all(|w| {
            let (a, b) = (self.eval(w[0]), self.eval(w[1]));
            a == f64::INFINITY || b <= a * (1.0 + 1e-12)
        })
    }

    /// Least-squares slope of `ln value` against `ln r` on `[lo, hi]`.
    pub fn log_log_slope(&self, lo: f64, hi: f64, npts: usize) -> f64 {
        let grid = log_grid(lo, hi, npts);
        let xs: Vec<f64> = grid.iter().map(|r| r.ln()).collect();
        let ys: Vec<f64> = grid.iter().map(|&r| self.eval(r).ln()).collect();
        ls_slope(&xs, &ys)
    }
}

pub fn log_grid(lo: f64, hi: f64, npts: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && npts >= 2, "log grid needs 0 < lo < hi and two points");
    let (a, b) = (lo.ln(), hi.ln());
    (0..npts)
        .map(|i| (a + (b - a) * i as f64 / (npts - 1) as f64).exp())
        .collect()
}

/// `f⁻¹(u)` for a strictly increasing Bernstein function: `NaN` when
/// `u < f(0) = a`, `+∞` when `u ≥ sup f`. Closed forms cover `a + bλ` and
/// `a + λ^θ`; everything else is bisected to relative `1e-12`.
pub fn bernstein_inverse(f: &BernsteinFn, u: f64) -> f64 {
    if u < f.a {
        return f64::NAN;
    }
    if u >= f.sup() {
        return f64::INFINITY;
    }
    let v = u - f.a;
    if v == 0.0 {
        return 0.0;
    }
    match f.levy {
        LevySpec::Empty => return v / f.b,
        LevySpec::Stable { theta } if f.b == 0.0 => return v.powf(1.0 / theta),
        _ => {}
    }
    let mut hi = 1.0;
    while f.eval(hi) < u {
        hi *= 2.0;
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if f.eval(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `1/(2f⁻¹(2/r))` without the inverse for `bλ` and `λ^θ`, so that the
/// identity case gives `r/4` exactly.
fn super_argument_closed(f: &BernsteinFn, r: f64) -> Option<f64> {
    if f.a != 0.0 {
        return None;
    }
    match f.levy {
        LevySpec::Empty => Some(f.b * r / 4.0),
        LevySpec::Stable { theta } if f.b == 0.0 => Some(0.5 * (0.5 * r).powf(1.0 / theta)),
        _ => None,
    }
}

fn check_increasing(f: &BernsteinFn) -> Result<()> {
    if f.b == 0.0 && f.levy.is_empty() {
        return Err(invalid("f is constant, so its inverse is undefined"));
    }
    Ok(())
}

/// `β_f(r) = 4β(1/(2f⁻¹(2/r)))`, `+∞` where `2/r < f(0)`.
pub fn transform_super(beta: &RateFunction, f: &BernsteinFn) -> Result<RateFunction> {
    if beta.kind != RateKind::Super {
        return Err(invalid("transform_super needs a super-Poincaré rate"));
    }
    check_increasing(f)?;
    Ok(RateFunction {
        kind: RateKind::Super,
        description: format!("4 beta(1/(2 f^-1(2/r))) with beta = {}, f = {}", beta.description, f.to_json()),
        expr: RateExpr::SuperTransform {
            inner: Arc::new(beta.clone()),
            f: f.clone(),
        },
    })
}

/// `α_f(r) = 2/f(1/(2α(r/4)))`.
pub fn transform_weak(alpha: &RateFunction, f: &BernsteinFn) -> Result<RateFunction> {
    if alpha.kind != RateKind::Weak {
        return Err(invalid("transform_weak needs a weak-Poincaré rate"));
    }
    Ok(RateFunction {
        kind: RateKind::Weak,
        description: format!("2/f(1/(2 alpha(r/4))) with alpha = {}, f = {}", alpha.description, f.to_json()),
        expr: RateExpr::WeakTransform {
            inner: Arc::new(alpha.clone()),
            f: f.clone(),
        },
    })
}

/// `c(1 + r^{-(max{α,β}+1)})`, the super-Poincaré rate of the Jacobi
/// operator.
pub fn jacobi_super_rate_with(alpha: f64, beta: f64, c: f64) -> Result<RateFunction> {
    if !(alpha >= -0.5 && beta >= -0.5 && alpha.is_finite() && beta.is_finite()) {
        return Err(invalid(format!("need alpha, beta >= -1/2, got ({alpha}, {beta})")));
    }
    RateFunction::one_plus_power(RateKind::Super, c, alpha.max(beta) + 1.0)
}

pub fn jacobi_super_rate(alpha: f64, beta: f64) -> Result<RateFunction> {
    jacobi_super_rate_with(alpha, beta, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::Atom;
    use approx::assert_relative_eq;

    #[test]
    fn super_examples() {
        let beta = RateFunction::power(RateKind::Super, 1.0, 1.0).unwrap();
        let bf = transform_super(&beta, &BernsteinFn::sqrt()).unwrap();
        for r in [1e-3, 0.1, 1.0, 7.0] {
            assert_relative_eq!(bf.eval(r), 32.0 / (r * r), max_relative = 1e-13);
        }
        let id = BernsteinFn::drift(1.0).unwrap();
        let j = jacobi_super_rate(0.5, -0.5).unwrap();
        let jf = transform_super(&j, &id).unwrap();
        for r in [1e-3, 0.1, 1.0, 7.0] {
            assert_eq!(jf.eval(r), 4.0 * j.eval(r / 4.0));
        }
        assert_eq!(jacobi_super_rate(0.0, 0.0).unwrap().eval(1.0), 2.0);
    }

    #[test]
    fn super_below_a_is_infinite() {
        let beta = RateFunction::power(RateKind::Super, 1.0, 1.0).unwrap();
        let f = BernsteinFn::stable(1.0, 0.5).unwrap();
        let bf = transform_super(&beta, &f).unwrap();
        assert_eq!(bf.eval(3.0), f64::INFINITY);
        assert!(bf.eval(1.0).is_finite());
    }

    #[test]
    fn weak_examples() {
        let one = RateFunction::power(RateKind::Weak, 1.0, 0.0).unwrap();
        let af = transform_weak(&one, &BernsteinFn::sqrt()).unwrap();
        assert_relative_eq!(af.eval(0.3), 2.0 * 2f64.sqrt(), max_relative = 1e-15);
        let a = RateFunction::power(RateKind::Weak, 1.0, 2.0).unwrap();
        let af = transform_weak(&a, &BernsteinFn::drift(1.0).unwrap()).unwrap();
        let asq = transform_weak(&a, &BernsteinFn::sqrt()).unwrap();
        for r in [1e-2, 0.5, 3.0] {
            assert_relative_eq!(af.eval(r), 64.0 / (r * r), max_relative = 1e-13);
            assert_relative_eq!(asq.eval(r), 2.0 * (2.0 * a.eval(r / 4.0)).sqrt(), max_relative = 1e-13);
        }
    }

    #[test]
    fn bisection_inverse_matches_closed_form() {
        let f = BernsteinFn::new(0.2, 0.5, LevySpec::Stable { theta: 0.3 }).unwrap();
        for lam in [1e-6, 0.5, 3.0, 1e4] {
            let back = bernstein_inverse(&f, f.eval(lam));
            assert_relative_eq!(back, lam, max_relative = 1e-10);
        }
        let bounded = BernsteinFn::new(0.0, 0.0, LevySpec::Atoms(vec![Atom { s: 1.0, mass: 2.0 }])).unwrap();
        assert_eq!(bounded.sup(), 2.0);
        assert_eq!(bernstein_inverse(&bounded, 2.0), f64::INFINITY);
        assert_relative_eq!(bernstein_inverse(&bounded, 1.0), 2f64.ln(), max_relative = 1e-11);
    }

    #[test]
    fn composed_jacobi_exponent_doubles() {
        let j = jacobi_super_rate(0.5, -0.5).unwrap();
        let jf = transform_super(&j, &BernsteinFn::sqrt()).unwrap();
        let slope = jf.log_log_slope(1e-6, 1e-2, 200);
        assert!((slope + 3.0).abs() < 0.01, "slope {slope}");
    }
}
