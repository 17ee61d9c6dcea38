use hyperpoly::norm_bounds::{laguerre_sandwich, SANDWICH_SLACK};
use hyperpoly::quadrature::eigen_lp_norm;
use hyperpoly::PolyFamily;

#[test]
fn hermite_plateau_for_q4() {
    let r = |n: usize| {
        let v = eigen_lp_norm(&PolyFamily::Hermite, n, 4.0, 1e-11).unwrap();
        v.to_f64() * (n as f64).powf(0.25) * 3f64.powf(-(n as f64) / 2.0)
    };
    let ratio = r(60) / r(40);
    assert!((ratio - 1.0).abs() < 0.05, "r60/r40 = {ratio}");
}

#[test]
fn hermite_sub_two_norms_are_at_most_one() {
    for p in [1.2, 1.5, 1.8] {
        for n in 1..=60 {
            let v = eigen_lp_norm(&PolyFamily::Hermite, n, p, 1e-10).unwrap();
            assert!(v.to_f64() <= 1.0 + 1e-10, "p = {p}, n = {n}: {}", v.to_f64());
        }
    }
}

#[test]
fn laguerre_sandwich_holds_on_sample() {
    for alpha in [0.0, 1.0] {
        for q in [3.0, 4.0] {
            for n in [1, 5, 10, 20, 30] {
                let r = laguerre_sandwich(n, alpha, q, 0.9, 1e-10).unwrap();
                assert!(r.passed, "{r:?}");
                assert!(r.measured.logmag() <= r.upper.logmag() + SANDWICH_SLACK);
            }
        }
    }
}
