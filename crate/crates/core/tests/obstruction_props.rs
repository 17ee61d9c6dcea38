use hyperpoly::obstruction::{
    bilinear_report, classify_laguerre, classify_ou, eigen_lower_bound, f_t, laguerre_parseval, BilinearVerdict,
    NormClass,
};
use hyperpoly::subordination::MultiplierSequence;
use hyperpoly::{BernsteinFn, LevySpec, PolyFamily};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 32,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn parseval_is_symmetric(
        t1 in 0.01f64..0.49,
        t2 in 0.01f64..0.49,
        alpha in -0.9f64..3.0,
        decay in 0.1f64..3.0,
    ) {
        let fam = PolyFamily::Laguerre { alpha };
        let a: Vec<f64> = (0..=40).map(|n| (-decay * n as f64).exp()).collect();
        let seq = MultiplierSequence::table(fam, a, "cut at 40").unwrap();
        let x = laguerre_parseval(&seq, alpha, 2.0, 2.0, t1, t2, 40).unwrap();
        let y = laguerre_parseval(&seq, alpha, 2.0, 2.0, t2, t1, 40).unwrap();
        prop_assert_eq!(x.value, y.value);
    }

    #[test]
    fn lower_bound_is_monotone_in_exponents(
        n in 1usize..20,
        t in 0.1f64..2.0,
        p in 1.1f64..1.6,
        dp in 0.0f64..0.4,
        q in 2.0f64..5.0,
        dq in 0.0f64..2.0,
        lag in prop::bool::ANY,
    ) {
        let fam = if lag { PolyFamily::Laguerre { alpha: 0.5 } } else { PolyFamily::Hermite };
        let f = BernsteinFn::sqrt();
        let base = eigen_lower_bound(&fam, &f, t, p, q, n, 1e-10).unwrap().logmag();
        let larger_q = eigen_lower_bound(&fam, &f, t, p, q + dq, n, 1e-10).unwrap().logmag();
        let larger_p = eigen_lower_bound(&fam, &f, t, p + dp, q, n, 1e-10).unwrap().logmag();
        prop_assert!(larger_q >= base - 1e-9);
        prop_assert!(larger_p <= base + 1e-9);
    }

    #[test]
    fn f_t_sandwich(a in 0.0f64..2.0, b in 0.0f64..2.0, theta in 0.1f64..0.9, t in 0.1f64..3.0, z in 0.0f64..300.0) {
        let f = BernsteinFn::new(a, b, LevySpec::Stable { theta }).unwrap();
        let v = f_t(&f, t, z, 1e-14).unwrap().logmag();
        let floor = -t * f.eval(0.0);
        let ceil = hyperpoly::special::log_sum_exp(&[z * (-b * t).exp(), floor]);
        prop_assert!(v >= floor - 1e-12 && v <= ceil + 1e-12, "{} not in [{}, {}]", v, floor, ceil);
    }

    #[test]
    fn poisson_blows_up_for_all_q_above_p(p in 1.05f64..5.0, dq in 0.01f64..5.0, t in 0.05f64..5.0, alpha in -0.5f64..2.0) {
        let f = BernsteinFn::sqrt();
        prop_assert!(classify_ou(&f, t, p, p + dq).unwrap().is_blow_up());
        prop_assert!(classify_laguerre(&f, t, p, p + dq, alpha).unwrap().is_blow_up());
    }
}

#[test]
fn ou_blow_up_agrees_with_bilinear_divergence() {
    let mut blow_ups = 0;
    for b in [0.25, 0.5, 1.0] {
        for t in [0.5, 1.0] {
            for p in [1.5, 2.0, 3.0] {
                for factor in [1.3, 2.0, 4.0] {
                    let f = BernsteinFn::new(0.0, b, LevySpec::Stable { theta: 0.5 }).unwrap();
                    let NormClass::BlowUp { threshold, .. } = classify_ou(&f, t, p, 1e9).unwrap() else {
                        unreachable!()
                    };
                    let q = threshold * factor;
                    assert!(classify_ou(&f, t, p, q).unwrap().is_blow_up());
                    let r = bilinear_report(&f, t, p, q, 1e6, 1e3).unwrap();
                    assert_eq!(r.verdict, BilinearVerdict::BlowUpCertified, "b = {b}, t = {t}, p = {p}, q = {q}");
                    blow_ups += 1;
                }
            }
        }
    }
    assert_eq!(blow_ups, 54);
}
