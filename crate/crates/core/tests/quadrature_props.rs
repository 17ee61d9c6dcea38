use hyperpoly::limits::RescaledFamily;
use hyperpoly::quadrature::{gauss_rule, integrate, lp_norm, DEFAULT_TOL};
use hyperpoly::special::ln_gamma;
use hyperpoly::{LogValue, Measure};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn poly(coeffs: &[f64], y: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
}

/// `E y^k` under the image of `μ_{α,β}` by `x ↦ (β/2)(1-x)`:
/// `β^k (α+1)_k / (α+β+2)_k`.
fn near_one_moment(alpha: f64, beta: f64, k: usize) -> f64 {
    let kf = k as f64;
    (kf * beta.ln() + ln_gamma(alpha + 1.0 + kf) - ln_gamma(alpha + 1.0) - ln_gamma(alpha + beta + 2.0 + kf)
        + ln_gamma(alpha + beta + 2.0))
    .exp()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 20,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn pushforward_matches_pullback_integral(
        coeffs in prop::collection::vec(0.0f64..1.0, 1..7),
        alpha in -0.5f64..3.0,
        big in prop::bool::ANY,
    ) {
        let beta = if big { 100.0 } else { 10.0 };
        let resc = RescaledFamily::near_one(alpha, beta).unwrap();
        let closed: f64 = coeffs.iter().enumerate().map(|(k, c)| c * near_one_moment(alpha, beta, k)).sum();
        let jac_rule = gauss_rule(&Measure::Jacobi { alpha, beta }, 8).unwrap();
        let pulled = jac_rule.integrate(|x| poly(&coeffs, resc.forward(x)));
        let pushed = integrate(&|y| poly(&coeffs, y), &resc.pushforward(), DEFAULT_TOL).unwrap();
        prop_assert!((pulled - closed).abs() <= 1e-10 * closed, "{} vs {}", pulled, closed);
        prop_assert!((pushed - closed).abs() <= 1e-10 * closed, "{} vs {}", pushed, closed);
    }

    #[test]
    fn pullbacks_are_isometries(
        c1 in 0.0f64..1.0,
        c2 in 0.05f64..1.0,
        alpha in -0.5f64..2.0,
        lambda in 0.5f64..20.0,
    ) {
        // `(1 + c₁y/2)² + c₂y²` has no real zero, so `|f|^p` has no kink to
        // slow the quadrature
        let f = move |y: f64| LogValue::from_f64(1.0 + c1 * y + (c1 * c1 / 4.0 + c2) * y * y);
        for resc in [RescaledFamily::near_one(alpha, 10.0).unwrap(), RescaledFamily::symmetric(lambda).unwrap()] {
            let base = resc.base_family().measure();
            let pulled = resc.pullback(&f);
            for p in [1.5, 2.0, 4.0] {
                let lhs = lp_norm(&pulled, p, &base, 1e-11).unwrap().to_f64();
                let rhs = lp_norm(&f, p, &resc.pushforward(), 1e-11).unwrap().to_f64();
                prop_assert!((lhs / rhs - 1.0).abs() < 1e-9, "{:?} p = {}: {} vs {}", resc, p, lhs, rhs);
            }
        }
    }

    #[test]
    fn lp_norm_is_monotone_in_p(a in 0.0f64..2.0, s in -1.0f64..1.0) {
        let f = move |x: f64| LogValue::from_log((1.0 + a * x * x).ln() + s * x.sin());
        let measures = [
            Measure::Gaussian,
            Measure::Gamma { alpha: 0.5 },
            Measure::Jacobi { alpha: 1.0, beta: -0.5 },
            Measure::RescaledJacobiNearOne { alpha: 0.0, beta: 10.0 },
            Measure::RescaledSymmetricJacobi { lambda: 3.0 },
        ];
        for m in measures {
            let mut last = 0.0;
            for p in [1.0, 1.25, 1.5, 2.0, 3.0, 4.0] {
                let v = lp_norm(&f, p, &m, 1e-10).unwrap().to_f64();
                prop_assert!(v >= last * (1.0 - 1e-10), "{:?}: p = {} gives {} < {}", m, p, v, last);
                last = v;
            }
        }
    }
}
