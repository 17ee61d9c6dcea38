//! Bernstein functions `f(λ) = a + bλ + ∫ (1 - e^{-sλ}) ν(ds)` given by
//! their Lévy–Khintchine triplet.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{shared_rule, Measure};
use crate::special::{aitken, ln_gamma, ls_slope};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub s: f64,
    pub mass: f64,
}

/// Lévy measure of a Bernstein function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LevyRaw", into = "LevyRaw")]
pub enum LevySpec {
    Empty,
    Atoms(Vec<Atom>),
    /// `θ s^{-1-θ} / Γ(1-θ) ds`, giving `λ^θ`.
    Stable { theta: f64 },
    /// `θ s^{-1-θ} e^{-κs} / Γ(1-θ) ds`, giving `(λ+κ)^θ - κ^θ`.
    TemperedStable { theta: f64, kappa: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct LevyParams {
    theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct LevyRaw {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<LevyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atoms: Option<Vec<Atom>>,
}

impl TryFrom<LevyRaw> for LevySpec {
    type Error = Error;
    fn try_from(r: LevyRaw) -> Result<Self> {
        let spec = match r.kind.as_str() {
            "none" | "empty" => LevySpec::Empty,
            "atoms" => LevySpec::Atoms(r.atoms.ok_or_else(|| invalid("atoms list missing"))?),
            "stable" => {
                let p = r.params.ok_or_else(|| invalid("stable needs params.theta"))?;
                LevySpec::Stable { theta: p.theta }
            }
            "tempered_stable" => {
                let p = r.params.ok_or_else(|| invalid("tempered_stable needs params"))?;
                LevySpec::TemperedStable {
                    theta: p.theta,
                    kappa: p.kappa.ok_or_else(|| invalid("tempered_stable needs params.kappa"))?,
                }
            }
            other => return Err(invalid(format!("unknown Levy measure type {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<LevySpec> for LevyRaw {
    fn from(s: LevySpec) -> Self {
        let (kind, params, atoms) = match s {
            LevySpec::Empty => ("none", None, None),
            LevySpec::Atoms(a) => ("atoms", None, Some(a)),
            LevySpec::Stable { theta } => ("stable", Some(LevyParams { theta, kappa: None }), None),
            LevySpec::TemperedStable { theta, kappa } => (
                "tempered_stable",
                Some(LevyParams {
                    theta,
                    kappa: Some(kappa),
                }),
                None,
            ),
        };
        LevyRaw {
            kind: kind.into(),
            params,
            atoms,
        }
    }
}

impl LevySpec {
    /// Checks the parameters, which also guarantees `∫ (1 ∧ s) dν < ∞`.
    pub fn validate(&self) -> Result<()> {
        match self {
            LevySpec::Empty => Ok(()),
            LevySpec::Atoms(atoms) => {
                for at in atoms {
                    if !(at.s.is_finite() && at.s > 0.0 && at.mass.is_finite() && at.mass > 0.0) {
                        return Err(invalid(format!("atom {at:?} needs finite positive s and mass")));
                    }
                }
                Ok(())
            }
            LevySpec::Stable { theta } => check_theta(*theta),
            LevySpec::TemperedStable { theta, kappa } => {
                check_theta(*theta)?;
                if kappa.is_finite() && *kappa >= 0.0 {
                    Ok(())
                } else {
                    Err(invalid(format!("tempering kappa = {kappa} must be finite and >= 0")))
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            LevySpec::Empty => true,
            LevySpec::Atoms(a) => a.is_empty(),
            _ => false,
        }
    }

    /// `∫ (1 ∧ s) dν` in closed form.
    pub fn small_jump_integral(&self) -> f64 {
        match self {
            LevySpec::Empty => 0.0,
            LevySpec::Atoms(a) => a.iter().map(|at| at.mass * at.s.min(1.0)).sum(),
            // θ/Γ(1-θ) (∫_0^1 s^{-θ} + ∫_1^∞ s^{-1-θ}) = θ/Γ(1-θ) (1/(1-θ) + 1/θ)
            LevySpec::Stable { theta } => {
                let t = *theta;
                t / ln_gamma(1.0 - t).exp() * (1.0 / (1.0 - t) + 1.0 / t)
            }
            LevySpec::TemperedStable { theta, .. } => LevySpec::Stable { theta: *theta }.small_jump_integral(),
        }
    }

    /// `ν((0, ∞))`, infinite for the stable families.
    pub fn total_mass(&self) -> f64 {
        match self {
            LevySpec::Empty => 0.0,
            LevySpec::Atoms(a) => a.iter().map(|at| at.mass).sum(),
            _ => f64::INFINITY,
        }
    }

    fn integral_closed(&self, lam: f64) -> f64 {
        match self {
            LevySpec::Empty => 0.0,
            LevySpec::Atoms(a) => a.iter().map(|at| -at.mass * (-at.s * lam).exp_m1()).sum(),
            LevySpec::Stable { theta } => lam.powf(*theta),
            LevySpec::TemperedStable { theta, kappa } => {
                if *kappa == 0.0 {
                    lam.powf(*theta)
                } else {
                    kappa.powf(*theta) * (theta * (lam / kappa).ln_1p()).exp_m1()
                }
            }
        }
    }

    /// LK integral by quadrature. With `u = sλ` the stable part becomes
    /// `λ^θ θ/Γ(1-θ) ∫ (1-e^{-u}) u^{-1-θ} e^{-κu/λ} du`; the piece on `(0,1]`
    /// uses the weight `u^{-θ}` and the piece on `[1,∞)` is folded by
    /// `u = 1/v` onto the weight `v^{θ-1}`.
    fn integral_quadrature(&self, lam: f64, tol: f64) -> Result<f64> {
        let (theta, kappa) = match self {
            LevySpec::Stable { theta } => (*theta, 0.0),
            LevySpec::TemperedStable { theta, kappa } => (*theta, *kappa),
            _ => return Ok(self.integral_closed(lam)),
        };
        if lam == 0.0 {
            return Ok(0.0);
        }
        let near = |u: f64| -(-u).exp_m1() / u * (-kappa * u / lam).exp();
        let far = |v: f64| -(-1.0 / v).exp_m1() * (-kappa / (lam * v)).exp();
        let eval = |m: usize| -> Result<f64> {
            // Jacobi weight (1-x)^α (1+x)^β on (-1,1) mapped to (0,1]
            let r0 = shared_rule(&Measure::Jacobi { alpha: 0.0, beta: -theta }, m)?;
            let r1 = shared_rule(&Measure::Jacobi { alpha: 0.0, beta: theta - 1.0 }, m)?;
            // mass of u^{-θ} on (0,1] is 1/(1-θ); of v^{θ-1} is 1/θ
            let i0 = r0.integrate(|x| near(0.5 * (1.0 + x))) / (1.0 - theta);
            let i1 = r1.integrate(|x| far(0.5 * (1.0 + x))) / theta;
            Ok(i0 + i1)
        };
        let coef = lam.powf(theta) * theta / ln_gamma(1.0 - theta).exp();
        let mut m = 16;
        let mut last = eval(m)?;
        while m < 4096 {
            m *= 2;
            let cur = eval(m)?;
            if (cur - last).abs() <= tol * cur.abs() {
                return Ok(coef * cur);
            }
            last = cur;
        }
        Err(Error::NonConvergence {
            nodes: m,
            change: (last - eval(m / 2)?).abs(),
        })
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("stable index theta = {theta} must lie in (0, 1)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BernsteinRaw")]
pub struct BernsteinFn {
    pub a: f64,
    pub b: f64,
    pub levy: LevySpec,
}

#[derive(Deserialize)]
struct BernsteinRaw {
    #[serde(default)]
    a: f64,
    #[serde(default)]
    b: f64,
    #[serde(default = "empty_levy")]
    levy: LevySpec,
}

fn empty_levy() -> LevySpec {
    LevySpec::Empty
}

impl TryFrom<BernsteinRaw> for BernsteinFn {
    type Error = Error;
    fn try_from(r: BernsteinRaw) -> Result<Self> {
        BernsteinFn::new(r.a, r.b, r.levy)
    }
}

impl BernsteinFn {
    /// Validated triplet; the trivial `f ≡ 0` is rejected.
    pub fn new(a: f64, b: f64, levy: LevySpec) -> Result<Self> {
        let f = Self::new_allow_zero(a, b, levy)?;
        if f.is_zero() {
            return Err(invalid("the trivial Bernstein function f = 0 is excluded"));
        }
        Ok(f)
    }

    fn new_allow_zero(a: f64, b: f64, levy: LevySpec) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        levy.validate()?;
        Ok(BernsteinFn { a, b, levy })
    }

    pub fn drift(b: f64) -> Result<Self> {
        Self::new(0.0, b, LevySpec::Empty)
    }

    /// `a + λ^θ`.
    pub fn stable(a: f64, theta: f64) -> Result<Self> {
        Self::new(a, 0.0, LevySpec::Stable { theta })
    }

    /// `√λ`, the Poisson subordinator.
    pub fn sqrt() -> Self {
        Self::stable(0.0, 0.5).expect("valid")
    }

    pub fn json_parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| invalid(format!("Bernstein triplet JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.levy.is_empty()
    }

    /// `f(λ)` using the closed form of the catalogue entry.
    pub fn eval(&self, lam: f64) -> f64 {
        assert!(lam >= 0.0, "Bernstein functions are evaluated on [0, inf)");
        self.a + self.b * lam + self.levy.integral_closed(lam)
    }

    /// `f(λ)` with the LK integral computed by quadrature.
    pub fn eval_quadrature(&self, lam: f64, tol: f64) -> Result<f64> {
        if !(lam >= 0.0) {
            return Err(invalid("lambda must be >= 0"));
        }
        Ok(self.a + self.b * lam + self.levy.integral_quadrature(lam, tol)?)
    }

    /// `sup f = lim_{λ→∞} f(λ)`.
    pub fn sup(&self) -> f64 {
        if self.b > 0.0 {
            f64::INFINITY
        } else {
            self.a + self.levy.total_mass()
        }
    }

    /// `f_0 = f - a - bλ`, the triplet `(0, 0, ν)`.
    pub fn nonlinear_part(&self) -> BernsteinFn {
        BernsteinFn::new_allow_zero(0.0, 0.0, self.levy.clone()).expect("validated parent")
    }

    /// Aitken extrapolation of `f(λ)/λ` along `λ = 10⁵, 10⁶, 10⁷`.
    pub fn drift_estimate(&self) -> f64 {
        let seq: Vec<f64> = [1e5, 1e6, 1e7].iter().map(|&l| self.eval(l) / l).collect();
        aitken(&seq).max(0.0)
    }

    /// [`Self::drift_estimate`], failing when it disagrees with `b` beyond
    /// `1e-3 · max(b, 1)`.
    pub fn checked_drift(&self) -> Result<f64> {
        let est = self.drift_estimate();
        if (est - self.b).abs() <= 1e-3 * self.b.max(1.0) {
            Ok(est)
        } else {
            Err(Error::Inconsistent(format!("drift estimate {est} disagrees with b = {}", self.b)))
        }
    }

    pub fn lower_order_check(&self, theta: f64) -> bool {
        self.lower_order_check_with(theta, &LowerOrderConfig::default())
    }

    /// Finite-grid surrogate for `liminf λ^{-θ} f(λ) > 0`: the sampled
    /// values stay above `floor` and their log-log slope over the last three
    /// grid points is no steeper than `-max_decay_slope`.
    pub fn lower_order_check_with(&self, theta: f64, cfg: &LowerOrderConfig) -> bool {
        let vals: Vec<f64> = cfg.grid.iter().map(|&l| l.powf(-theta) * self.eval(l)).collect();
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > cfg.floor) {
            return false;
        }
        let k = cfg.grid.len().min(3);
        let xs: Vec<f64> = cfg.grid[cfg.grid.len() - k..].iter().map(|l| l.ln()).collect();
        let ys: Vec<f64> = vals[vals.len() - k..].iter().map(|v| v.ln()).collect();
        k < 2 || ls_slope(&xs, &ys) >= -cfg.max_decay_slope
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerOrderConfig {
    pub grid: Vec<f64>,
    pub floor: f64,
    pub max_decay_slope: f64,
}

impl Default for LowerOrderConfig {
    fn default() -> Self {
        LowerOrderConfig {
            grid: (2..=7).map(|k| 10f64.powi(k)).collect(),
            floor: 1e-6,
            max_decay_slope: 0.05,
        }
    }
}
