//! One function per subcommand. Each validates its arguments, computes its
//! rows in a fixed order and reports whether the certification passed.

use anyhow::Result;
use clap::Parser;
use hyperpoly::limits::{
    degeneration_certificate_with, limit_residual_gegenbauer_to_hermite, limit_residual_jacobi_to_laguerre,
    rescaled_lower_bound, DegenerationConfig,
};
use hyperpoly::norm_bounds::{growth_rate, hermite_sandwich, laguerre_sandwich};
use hyperpoly::obstruction::{
    bilinear_report, classify_laguerre, classify_ou, multiplier_necessary_condition, obstruction_report,
    BilinearVerdict, NormClass, ObstructionVerdict,
};
use hyperpoly::poincare::{jacobi_super_rate, log_grid, transform_super, transform_weak, RateFunction, RateKind};
use hyperpoly::subordination::{
    heat_kernel_mass, poisson_kernel_identity, subordinated_multiplier, ultra_norm_estimate,
};
use hyperpoly::{BernsteinFn, PolyFamily};

use crate::config::{parse_bernstein, parse_degrees, require, Degrees, Expectation, FamilyName};
use crate::table::Table;

pub struct Report {
    pub tables: Vec<Table>,
    pub passed: bool,
    /// Free-form lines for the terminal; never written to the tables.
    pub notes: Vec<String>,
}

impl Report {
    fn from_table(table: Table, notes: Vec<String>) -> Self {
        Report {
            passed: table.all_pass(),
            tables: vec![table],
            notes,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    require(v.is_finite() && v > 0.0, || format!("{name} = {v} must be positive and finite"))
}

fn exponents(p: f64, q: f64) -> Result<()> {
    require(p > 1.0 && p.is_finite(), || format!("need p > 1, got p = {p}"))?;
    require(q >= p && q.is_finite(), || format!("need p <= q < inf, got p = {p}, q = {q}"))
}

fn expectation_met(expect: Option<Expectation>, blow_up: bool) -> bool {
    match expect {
        None => true,
        Some(Expectation::BlowUp) => blow_up,
        Some(Expectation::Bounded) => !blow_up,
    }
}

/// Measured `‖φ_n‖_q` against the explicit sandwich bounds.
#[derive(Parser, Clone, Debug)]
pub struct NormsArgs {
    #[arg(long, value_enum, default_value = "hermite")]
    pub family: FamilyName,
    /// Laguerre parameter.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Target exponents, comma separated; each must exceed 2.
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<f64>,
    #[arg(long, default_value = "1..60", value_parser = parse_degrees)]
    pub n: Degrees,
    /// Laguerre lower-bound parameter in `(0, q-1)`; defaults to
    /// `(q-1)(n+1)/(n+2)` per degree.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
}

pub fn norms(args: &NormsArgs) -> Result<Report> {
    positive("tol", args.tol)?;
    let fam = args.family.family(args.alpha)?;
    for &q in &args.q {
        require(q.is_finite() && q > 2.0, || format!("the sandwich bounds need q > 2, got q = {q}"))?;
        if let Some(rho) = args.rho {
            require(rho > 0.0 && rho < q - 1.0, || format!("rho = {rho} must lie in (0, q-1) for q = {q}"))?;
        }
    }
    match fam {
        PolyFamily::Hermite => {
            require(args.n.0[0] >= 1, || "the Hermite lower bound needs n >= 1".into())?;
        }
        _ => require(args.alpha >= -0.5, || {
            format!("the Laguerre upper bound needs alpha >= -1/2, got {}", args.alpha)
        })?,
    }
    let mut table = Table::new(
        format!("norms-{}", args.family.label()),
        vec!["family", "alpha", "q", "n", "rho", "log_measured", "log_lower", "log_upper", "pass"],
    );
    for &q in &args.q {
        for &n in &args.n.0 {
            let (alpha, rho, r) = match fam {
                PolyFamily::Hermite => (None, None, hermite_sandwich(n, q, args.tol)?),
                _ => {
                    let rho = args.rho.unwrap_or((q - 1.0) * (n as f64 + 1.0) / (n as f64 + 2.0));
                    (Some(args.alpha), Some(rho), laguerre_sandwich(n, args.alpha, q, rho, args.tol)?)
                }
            };
            table.push(vec![
                args.family.label().into(),
                alpha.into(),
                q.into(),
                n.into(),
                rho.into(),
                r.measured.logmag().into(),
                r.lower.logmag().into(),
                r.upper.logmag().into(),
                r.passed.into(),
            ]);
        }
    }
    let note = format!("{} rows, all measured norms inside their bounds: {}", table.rows.len(), table.all_pass());
    Ok(Report::from_table(table, vec![note]))
}

/// Eigenfunction lower bounds `e^{-t f(λ_n)} ‖φ_n‖_q / ‖φ_n‖_p`.
#[derive(Parser, Clone, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_enum, default_value = "hermite")]
    pub family: FamilyName,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Inline triplet JSON or catalogue name.
    #[arg(long, default_value = "sqrt", value_parser = parse_bernstein)]
    pub bernstein: BernsteinFn,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4.0)]
    pub q: f64,
    #[arg(long, default_value = "1..60", value_parser = parse_degrees)]
    pub n: Degrees,
    /// Level the best bound must exceed to certify blow-up.
    #[arg(long, default_value_t = 1e6)]
    pub threshold: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
}

pub fn bounds(args: &BoundsArgs) -> Result<Report> {
    let fam = args.family.family(args.alpha)?;
    positive("t", args.t)?;
    positive("tol", args.tol)?;
    positive("threshold", args.threshold)?;
    exponents(args.p, args.q)?;
    require(args.n.0.len() >= 2, || "need at least two degrees".into())?;
    let r = obstruction_report(&fam, &args.bernstein, args.t, args.p, args.q, &args.n.0, args.threshold, args.tol)?;
    let mut table = Table::new(
        format!("bounds-{}", args.family.label()),
        vec![
            "family", "t", "p", "q", "n", "eigenvalue", "f_eigenvalue", "log_bound", "log_running_max", "threshold",
            "pass",
        ],
    );
    for ((n, lb), best) in r.per_n.iter().zip(&r.running_max) {
        let lam = fam.eigenvalue(*n)?;
        table.push(vec![
            args.family.label().into(),
            args.t.into(),
            args.p.into(),
            args.q.into(),
            (*n).into(),
            lam.into(),
            args.bernstein.eval(lam).into(),
            lb.logmag().into(),
            best.logmag().into(),
            args.threshold.into(),
            (lb.logmag() > args.threshold.ln()).into(),
        ]);
    }
    let passed = r.verdict == ObstructionVerdict::Diverging;
    let notes = vec![format!(
        "verdict {:?}, best log bound {:.6}, trend {:.6}, fitted rate {:.6}",
        r.verdict,
        r.running_max.last().map_or(f64::NEG_INFINITY, |v| v.logmag()),
        r.trend,
        r.fitted_rate
    )];
    Ok(Report {
        tables: vec![table],
        passed,
        notes,
    })
}

/// Growth slope of `n ↦ ln(‖φ_n‖_q/‖φ_n‖_p)` against `κ ln((q-1)/(p-1))`,
/// `κ = 1/2` for Hermite and 1 for Laguerre.
#[derive(Parser, Clone, Debug)]
pub struct RatesArgs {
    #[arg(long, value_enum, default_value = "hermite")]
    pub family: FamilyName,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4.0)]
    pub q: f64,
    #[arg(long, default_value = "30..60", value_parser = parse_degrees)]
    pub n: Degrees,
    /// Relative tolerance on the slope; 0.05 for Hermite, 0.10 for Laguerre
    /// when omitted.
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
}

pub fn rates(args: &RatesArgs) -> Result<Report> {
    let fam = args.family.family(args.alpha)?;
    positive("tol", args.tol)?;
    require(args.p >= 2.0 && args.q > args.p && args.q.is_finite(), || {
        format!("the slope target needs 2 <= p < q < inf, got p = {}, q = {}", args.p, args.q)
    })?;
    require(args.n.0.len() >= 5 && args.n.0[0] >= 10, || "need at least five degrees, all >= 10".into())?;
    let (kappa, default_rtol) = match args.family {
        FamilyName::Hermite => (0.5, 0.05),
        FamilyName::Laguerre => (1.0, 0.10),
    };
    let rtol = args.rtol.unwrap_or(default_rtol);
    positive("rtol", rtol)?;
    let fit = growth_rate(&fam, args.p, args.q, &args.n.0, args.tol)?;
    let target = kappa * ((args.q - 1.0) / (args.p - 1.0)).ln();
    let ok = (fit.slope / target - 1.0).abs() < rtol;
    let mut table = Table::new(
        format!("rates-{}", args.family.label()),
        vec!["family", "p", "q", "n", "log_ratio", "fitted_slope", "target_slope", "pass"],
    );
    for (&n, &lr) in fit.window.iter().zip(&fit.log_ratios) {
        table.push(vec![
            args.family.label().into(),
            args.p.into(),
            args.q.into(),
            n.into(),
            lr.into(),
            fit.slope.into(),
            target.into(),
            ok.into(),
        ]);
    }
    let note = format!("slope {:.6} vs target {:.6} (rtol {rtol})", fit.slope, target);
    Ok(Report::from_table(table, vec![note]))
}

/// Residual of the subordination identity for the Poisson kernel.
#[derive(Parser, Clone, Debug)]
pub struct KernelArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2,4")]
    pub t: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2,4")]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub max_residual: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

pub fn kernel(args: &KernelArgs) -> Result<Report> {
    positive("tol", args.tol)?;
    positive("max-residual", args.max_residual)?;
    for &t in &args.t {
        positive("t", t)?;
    }
    for &lam in &args.lambda {
        require(lam.is_finite() && lam >= 0.0, || format!("lambda = {lam} must be >= 0"))?;
    }
    let mut table = Table::new("kernel", vec!["t", "lambda", "residual", "max_residual", "pass"]);
    let mut worst: f64 = 0.0;
    for &t in &args.t {
        for &lam in &args.lambda {
            let r = poisson_kernel_identity(t, lam, args.tol)?;
            worst = worst.max(r);
            table.push(vec![t.into(), lam.into(), r.into(), args.max_residual.into(), (r < args.max_residual).into()]);
        }
    }
    Ok(Report::from_table(table, vec![format!("worst residual {worst:.3e}")]))
}

/// Jacobi heat-kernel sup norm scaled by `(1∧s)^{max{α,β}+1}`, with the
/// kernel mass at `x = 0` as a consistency check.
#[derive(Parser, Clone, Debug)]
pub struct UltraArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-2,1e-1,1")]
    pub s: Vec<f64>,
    /// Largest allowed ratio between scaled values.
    #[arg(long, default_value_t = 10.0)]
    pub max_spread: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub mass_tol: f64,
}

pub fn ultra(args: &UltraArgs) -> Result<Report> {
    let (a, b) = (args.alpha, args.beta);
    require(a >= -0.5 && b >= -0.5 && a.is_finite() && b.is_finite(), || {
        format!("the heat kernel bounds need alpha, beta >= -1/2, got ({a}, {b})")
    })?;
    for &s in &args.s {
        positive("s", s)?;
    }
    positive("max-spread", args.max_spread)?;
    let m = a.max(b) + 1.0;
    let mut table = Table::new(
        "ultra",
        vec![
            "alpha", "beta", "s", "estimate", "scaled", "argmax_x", "argmax_y", "n_terms", "mass_residual", "pass",
        ],
    );
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &s in &args.s {
        let est = ultra_norm_estimate(a, b, s)?;
        let scaled = s.min(1.0).powf(m) * est.value;
        lo = lo.min(scaled);
        hi = hi.max(scaled);
        let mass = (heat_kernel_mass(a, b, s, 0.0, 1e-12)? - 1.0).abs();
        table.push(vec![
            a.into(),
            b.into(),
            s.into(),
            est.value.into(),
            scaled.into(),
            est.argmax.0.into(),
            est.argmax.1.into(),
            est.n_terms.into(),
            mass.into(),
            (mass < args.mass_tol).into(),
        ]);
    }
    let spread = hi / lo;
    Ok(Report {
        passed: table.all_pass() && spread < args.max_spread,
        tables: vec![table],
        notes: vec![format!("spread of scaled values {spread:.4} (limit {})", args.max_spread)],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    Ou,
    Laguerre,
}

/// Exact `p → q` classification of the subordinated semigroup.
#[derive(Parser, Clone, Debug)]
pub struct ClassifyArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long, default_value = "sqrt", value_parser = parse_bernstein)]
    pub bernstein: BernsteinFn,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    /// Laguerre parameter.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Fail unless the verdict matches.
    #[arg(long, value_enum)]
    pub expect: Option<Expectation>,
}

pub fn classify(args: &ClassifyArgs) -> Result<Report> {
    positive("t", args.t)?;
    require(args.p > 1.0 && args.q > 1.0 && args.p.is_finite() && args.q.is_finite(), || {
        format!("need 1 < p, q < inf, got p = {}, q = {}", args.p, args.q)
    })?;
    let f = &args.bernstein;
    let (class, alpha) = match args.model {
        Model::Ou => (classify_ou(f, args.t, args.p, args.q)?, None),
        Model::Laguerre => (classify_laguerre(f, args.t, args.p, args.q, args.alpha)?, Some(args.alpha)),
    };
    let (verdict, threshold, norm, disc) = match class {
        NormClass::Bounded { norm, threshold } => ("bounded", threshold, norm, None),
        NormClass::BlowUp {
            threshold,
            discriminant,
        } => ("blow-up", threshold, f64::INFINITY, Some(discriminant)),
    };
    let model = match args.model {
        Model::Ou => "ou",
        Model::Laguerre => "laguerre",
    };
    let mut table = Table::new(
        "classify",
        vec!["model", "alpha", "a", "b", "t", "p", "q", "threshold", "verdict", "norm", "discriminant", "pass"],
    );
    table.push(vec![
        model.into(),
        alpha.into(),
        f.a.into(),
        f.b.into(),
        args.t.into(),
        args.p.into(),
        args.q.into(),
        threshold.into(),
        verdict.into(),
        norm.into(),
        disc.into(),
        expectation_met(args.expect, class.is_blow_up()).into(),
    ]);
    let note = format!("{model}: {verdict}, threshold q* = {threshold}");
    Ok(Report::from_table(table, vec![note]))
}

/// Bilinear exponential test along the vertex ray.
#[derive(Parser, Clone, Debug)]
pub struct BilinearArgs {
    #[arg(long, default_value = "sqrt", value_parser = parse_bernstein)]
    pub bernstein: BernsteinFn,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4.0)]
    pub q: f64,
    #[arg(long, default_value_t = 1e6)]
    pub threshold: f64,
    #[arg(long, default_value_t = 1e3)]
    pub tau2_max: f64,
    #[arg(long, value_enum)]
    pub expect: Option<Expectation>,
}

pub fn bilinear(args: &BilinearArgs) -> Result<Report> {
    positive("t", args.t)?;
    exponents(args.p, args.q)?;
    require(args.threshold > 1.0 && args.threshold.is_finite(), || "threshold must exceed 1".into())?;
    require(args.tau2_max >= 1.0 && args.tau2_max.is_finite(), || "tau2-max must be at least 1".into())?;
    let r = bilinear_report(&args.bernstein, args.t, args.p, args.q, args.threshold, args.tau2_max)?;
    let verdict = match r.verdict {
        BilinearVerdict::BlowUpCertified => "blow-up",
        BilinearVerdict::BoundedRegime => "bounded",
        BilinearVerdict::Inconclusive => "inconclusive",
    };
    let ok = r.verdict != BilinearVerdict::Inconclusive
        && expectation_met(args.expect, r.verdict == BilinearVerdict::BlowUpCertified);
    let mut table = Table::new(
        "bilinear",
        vec!["t", "p", "q", "k_star", "tau1", "tau2", "log_value", "exceeds", "verdict", "pass"],
    );
    let log_m = args.threshold.ln();
    for &(tau2, v) in &r.ray {
        table.push(vec![
            args.t.into(),
            args.p.into(),
            args.q.into(),
            r.k_star.into(),
            (r.k_star * tau2).into(),
            tau2.into(),
            v.into(),
            (v > log_m).into(),
            verdict.into(),
            ok.into(),
        ]);
    }
    let note = format!(
        "verdict {verdict}, quadratic form minimum {:.6}, measured slope {:.6}",
        r.quad_form_min, r.slope_measured
    );
    Ok(Report::from_table(table, vec![note]))
}

/// Necessary condition `limsup a_n^{1/n} ≤ (p-1)/(q-1)` for the Laguerre
/// multiplier `a_n = e^{-t f(n)}`, cross-checked against the classifier.
#[derive(Parser, Clone, Debug)]
pub struct ParsevalArgs {
    #[arg(long, default_value = "sqrt", value_parser = parse_bernstein)]
    pub bernstein: BernsteinFn,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4.0)]
    pub q: f64,
    #[arg(long, default_value_t = 2000)]
    pub n_max: usize,
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
    /// Write every `every`-th degree.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
}

pub fn parseval(args: &ParsevalArgs) -> Result<Report> {
    positive("t", args.t)?;
    exponents(args.p, args.q)?;
    require(args.n_max >= 10, || "n-max must be at least 10".into())?;
    require(args.every >= 1, || "every must be at least 1".into())?;
    require(args.margin >= 0.0 && args.margin.is_finite(), || "margin must be >= 0".into())?;
    let fam = PolyFamily::laguerre(args.alpha).map_err(|e| crate::config::config_error(e.to_string()))?;
    let a = subordinated_multiplier(&args.bernstein, args.t, &fam)?;
    let r = multiplier_necessary_condition(&a, args.alpha, args.p, args.q, args.n_max, args.margin)?;
    let blow_up = classify_laguerre(&args.bernstein, args.t, args.p, args.q, args.alpha)?.is_blow_up();
    let mut table = Table::new(
        "parseval",
        vec!["alpha", "p", "q", "t", "n", "root", "threshold", "violated", "rho_n", "pass"],
    );
    let mut persistent = true;
    for (&(n, root), &(_, rho_n)) in r.roots.iter().zip(&r.rho_seq) {
        let violated = root > r.threshold + r.margin;
        // once violated the condition must stay violated for a monotone multiplier
        let ok = r.first_violation.is_none_or(|first| n < first || violated);
        persistent &= ok;
        if n % args.every == 0 || n == args.n_max {
            table.push(vec![
                args.alpha.into(),
                args.p.into(),
                args.q.into(),
                args.t.into(),
                n.into(),
                root.into(),
                r.threshold.into(),
                violated.into(),
                rho_n.into(),
                ok.into(),
            ]);
        }
    }
    let agrees = r.first_violation.is_some() == blow_up;
    let notes = vec![
        format!(
            "first violation {:?}, classifier says {}, agreement {agrees}",
            r.first_violation,
            if blow_up { "blow-up" } else { "bounded" }
        ),
        format!("rho limit {:.6}, fitted C {:.6}, settled {}", r.rho_limit, r.fitted_c, r.rho_certified),
    ];
    Ok(Report {
        passed: persistent && agrees,
        tables: vec![table],
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RateShape {
    /// `c r^{-m}`.
    Power,
    /// `c (1 + r^{-m})`.
    OnePlusPower,
    /// `1 + r^{-(max{α,β}+1)}`.
    Jacobi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum KindName {
    Super,
    Weak,
}

/// Transfer of a super- or weak-Poincaré rate through a Bernstein function.
#[derive(Parser, Clone, Debug)]
pub struct PoincareArgs {
    #[arg(long, default_value = "sqrt", value_parser = parse_bernstein)]
    pub bernstein: BernsteinFn,
    #[arg(long, value_enum, default_value = "power")]
    pub rate: RateShape,
    #[arg(long, value_enum, default_value = "super")]
    pub kind: KindName,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    /// Jacobi parameters for `--rate jacobi`.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub r_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub r_max: f64,
    #[arg(long, default_value_t = 61)]
    pub points: usize,
}

pub fn poincare(args: &PoincareArgs) -> Result<Report> {
    positive("r-min", args.r_min)?;
    positive("r-max", args.r_max)?;
    require(args.r_min < args.r_max, || "need r-min < r-max".into())?;
    require(args.points >= 2, || "need at least two points".into())?;
    let kind = match args.kind {
        KindName::Super => RateKind::Super,
        KindName::Weak => RateKind::Weak,
    };
    let base = match args.rate {
        RateShape::Power => RateFunction::power(kind, args.c, args.m)?,
        RateShape::OnePlusPower => RateFunction::one_plus_power(kind, args.c, args.m)?,
        RateShape::Jacobi => {
            require(kind == RateKind::Super, || "the Jacobi rate is a super-Poincaré rate".into())?;
            jacobi_super_rate(args.alpha, args.beta)?
        }
    };
    let transformed = match kind {
        RateKind::Super => transform_super(&base, &args.bernstein)?,
        RateKind::Weak => transform_weak(&base, &args.bernstein)?,
    };
    let is_sqrt = args.bernstein == BernsteinFn::sqrt();
    let label = match kind {
        RateKind::Super => "super",
        RateKind::Weak => "weak",
    };
    let mut table = Table::new("poincare", vec!["kind", "r", "base", "transformed", "closed_form", "pass"]);
    let mut prev = f64::INFINITY;
    for r in log_grid(args.r_min, args.r_max, args.points) {
        let v = transformed.eval(r);
        // for √λ the transforms reduce to elementary closed forms
        let closed = is_sqrt.then(|| match kind {
            RateKind::Super => 4.0 * base.eval(r * r / 8.0),
            RateKind::Weak => 2.0 * (2.0 * base.eval(r / 4.0)).sqrt(),
        });
        let monotone = v == f64::INFINITY || v <= prev * (1.0 + 1e-12);
        let exact = closed.is_none_or(|c| v == c || (v - c).abs() <= 4.0 * f64::EPSILON * c.abs());
        if v.is_finite() {
            prev = v;
        }
        table.push(vec![label.into(), r.into(), base.eval(r).into(), v.into(), closed.into(), (monotone && exact).into()]);
    }
    let notes = vec![format!(
        "{} transformed by {}: log-log slope {:.6} on [{}, {}]",
        base.description,
        args.bernstein.to_json(),
        transformed.log_log_slope(args.r_min, args.r_max, args.points),
        args.r_min,
        args.r_max
    )];
    Ok(Report::from_table(table, notes))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum LimitName {
    Jacobi,
    Gegenbauer,
    Both,
}

/// Limit residuals along a scale ladder and, with `--level`, a
/// degeneration certificate for the rescaled Jacobi lower bound.
#[derive(Parser, Clone, Debug)]
pub struct LimitsArgs {
    #[arg(long, value_enum, default_value = "both")]
    pub which: LimitName,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, default_value = "0..8", value_parser = parse_degrees)]
    pub n: Degrees,
    #[arg(long, value_delimiter = ',', default_value = "1e2,1e3,1e4,1e5")]
    pub ladder: Vec<f64>,
    /// Residual bound enforced from `--from-scale` on.
    #[arg(long, default_value_t = 1e-2)]
    pub max_residual: f64,
    #[arg(long, default_value_t = 1e4)]
    pub from_scale: f64,
    /// Level `M` for the degeneration certificate; omitted means no
    /// certificate table.
    #[arg(long)]
    pub level: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4.0)]
    pub q: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

pub fn limits(args: &LimitsArgs) -> Result<Report> {
    require(!args.ladder.is_empty(), || "empty scale ladder".into())?;
    for &b in &args.ladder {
        positive("ladder scale", b)?;
    }
    require(args.ladder.windows(2).all(|w| w[0] < w[1]), || "the ladder must increase".into())?;
    positive("max-residual", args.max_residual)?;
    if let Some(m) = args.level {
        positive("level", m)?;
        positive("t", args.t)?;
        require(args.q > 2.0, || format!("the rescaled lower bound needs q > 2, got q = {}", args.q))?;
        exponents(args.p, args.q)?;
    }
    let mut table = Table::new("limits", vec!["limit", "alpha", "x", "n", "scale", "residual", "pass"]);
    let kinds: &[LimitName] = match args.which {
        LimitName::Both => &[LimitName::Jacobi, LimitName::Gegenbauer],
        LimitName::Jacobi => &[LimitName::Jacobi],
        LimitName::Gegenbauer => &[LimitName::Gegenbauer],
    };
    for &kind in kinds {
        for &n in &args.n.0 {
            let mut prev = f64::INFINITY;
            for &scale in &args.ladder {
                let (name, alpha, r) = match kind {
                    LimitName::Jacobi => (
                        "jacobi-laguerre",
                        Some(args.alpha),
                        limit_residual_jacobi_to_laguerre(n, args.alpha, scale, args.x)?,
                    ),
                    _ => ("gegenbauer-hermite", None, limit_residual_gegenbauer_to_hermite(n, scale, args.x)?),
                };
                let ok = r <= prev + 1e-13 && (scale < args.from_scale || r < args.max_residual);
                prev = r;
                table.push(vec![name.into(), alpha.into(), args.x.into(), n.into(), scale.into(), r.into(), ok.into()]);
            }
        }
    }
    let mut notes = vec![format!("{} residual rows", table.rows.len())];
    let mut tables = vec![table];
    if let Some(m) = args.level {
        let cfg = DegenerationConfig {
            tol: args.tol,
            ..DegenerationConfig::default()
        };
        let cert = degeneration_certificate_with(args.alpha, args.t, args.p, args.q, m, &cfg)?;
        let again = rescaled_lower_bound(args.alpha, cert.beta0, args.t, args.p, args.q, cert.n, args.tol)?;
        let mut ct = Table::new(
            "limits-certificate",
            vec!["alpha", "t", "p", "q", "level", "n", "scale", "log_bound", "log_limit", "pass"],
        );
        for &(scale, bound) in &cert.ladder {
            ct.push(vec![
                args.alpha.into(),
                args.t.into(),
                args.p.into(),
                args.q.into(),
                m.into(),
                cert.n.into(),
                scale.into(),
                bound.logmag().into(),
                cert.limit_value.logmag().into(),
                (bound.to_f64() > 2.0 * m).into(),
            ]);
        }
        notes.push(format!(
            "certificate n = {}, beta0 = {:e}, recomputed bound {:.6} vs 2M = {}",
            cert.n,
            cert.beta0,
            again.to_f64(),
            2.0 * m
        ));
        tables.push(ct);
    }
    let passed = tables.iter().all(Table::all_pass);
    Ok(Report { tables, passed, notes })
}

/// Every subcommand at the parameters of the acceptance suite.
#[derive(Parser, Clone, Debug)]
pub struct CertifyAllArgs {}

fn sub<A: Parser>(args: &[&str]) -> A {
    A::parse_from(std::iter::once("hyperpoly").chain(args.iter().copied()))
}

pub fn certify_all(_: &CertifyAllArgs) -> Result<Report> {
    let mut runs: Vec<(&str, Report)> = vec![
        ("norms-hermite", norms(&sub(&["--family", "hermite", "--q", "3,4,6", "--n", "1..60"]))?),
        ("norms-laguerre", norms(&sub(&["--family", "laguerre", "--q", "3,4", "--n", "0..30"]))?),
        ("bounds-hermite", bounds(&sub(&["--family", "hermite", "--n", "1..60"]))?),
        ("rates-hermite", rates(&sub(&["--family", "hermite"]))?),
        ("rates-laguerre", rates(&sub(&["--family", "laguerre"]))?),
        ("kernel", kernel(&sub(&[]))?),
    ];
    for (name, a, b) in [("ultra-a0-b0", "0", "0"), ("ultra-a0.5-b-0.5", "0.5", "-0.5"), ("ultra-a1-b1", "1", "1")] {
        runs.push((name, ultra(&sub(&["--alpha", a, "--beta", b]))?));
    }
    let classify_cases = [
        ("classify-ou-blow-up", ["--model", "ou", "--bernstein", "drift:0.5", "--p", "2", "--q", "4", "--expect", "blow-up"]),
        ("classify-ou-bounded", ["--model", "ou", "--bernstein", "drift:0.5", "--p", "2", "--q", "2", "--expect", "bounded"]),
        ("classify-laguerre-blow-up", ["--model", "laguerre", "--bernstein", "sqrt", "--p", "2", "--q", "2.5", "--expect", "blow-up"]),
    ];
    for (name, a) in classify_cases {
        runs.push((name, classify(&sub(&a))?));
    }
    runs.push((
        "bilinear-blow-up",
        bilinear(&sub(&["--bernstein", "drift:0.5", "--q", "4", "--expect", "blow-up"]))?,
    ));
    runs.push((
        "bilinear-bounded",
        bilinear(&sub(&["--bernstein", "drift:0.5", "--q", "3", "--expect", "bounded"]))?,
    ));
    runs.push(("parseval", parseval(&sub(&["--every", "10"]))?));
    runs.push(("poincare-super", poincare(&sub(&["--kind", "super"]))?));
    runs.push(("poincare-weak", poincare(&sub(&["--kind", "weak", "--m", "2"]))?));
    runs.push(("limits", limits(&sub(&["--level", "10"]))?));
    let mut tables = Vec::new();
    let mut notes = Vec::new();
    let mut passed = true;
    for (name, report) in runs {
        passed &= report.passed;
        notes.push(format!("{name}: {}", if report.passed { "PASS" } else { "FAIL" }));
        let single = report.tables.len() == 1;
        for mut t in report.tables {
            if single {
                t.name = name.to_string();
            } else if !t.name.starts_with(name) {
                t.name = format!("{name}-{}", t.name);
            }
            tables.push(t);
        }
    }
    Ok(Report { tables, passed, notes })
}
