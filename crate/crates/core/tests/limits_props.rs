use hyperpoly::limits::{eigenvalue_rescaling, limit_residual_gegenbauer_to_hermite, limit_residual_jacobi_to_laguerre};

const LADDER: [f64; 4] = [1e2, 1e3, 1e4, 1e5];

#[test]
fn residuals_decrease_along_ladders() {
    for n in 0..=8 {
        for alpha in [0.0, 0.5, 2.0] {
            for x in [0.3, 1.0, 2.5] {
                let r: Vec<f64> = LADDER
                    .iter()
                    .map(|&b| limit_residual_jacobi_to_laguerre(n, alpha, b, x).unwrap())
                    .collect();
                assert!(r.windows(2).all(|w| w[1] <= w[0] + 1e-13), "n = {n}, alpha = {alpha}, x = {x}: {r:?}");
                // first-order decay: one decade in scale gains one decade
                assert!(r[3] <= 0.2 * r[2] + 1e-13, "n = {n}, alpha = {alpha}, x = {x}: {r:?}");
                if alpha == 0.0 && x <= 1.0 {
                    assert!(r[2] < 1e-2, "n = {n}, x = {x}: {r:?}");
                }
            }
        }
        for x in [0.2, 0.7, 1.5] {
            let r: Vec<f64> = LADDER
                .iter()
                .map(|&l| limit_residual_gegenbauer_to_hermite(n, l, x).unwrap())
                .collect();
            assert!(r.windows(2).all(|w| w[1] <= w[0] + 1e-13), "n = {n}, x = {x}: {r:?}");
            assert!(r[2] < 1e-2);
        }
    }
}

#[test]
fn eigenvalue_rescaling_error_is_order_inverse_sqrt_beta() {
    for n in [1, 5, 20] {
        for alpha in [0.0, 1.5] {
            // C(n, α) fitted as √β · error at the smallest scale; the scaled
            // error must not grow along the ladder
            let scaled: Vec<f64> = LADDER
                .iter()
                .map(|&b| eigenvalue_rescaling(n, alpha, b).unwrap().1 * b.sqrt())
                .collect();
            let c = scaled[0];
            assert!(scaled.iter().all(|&s| s <= c * (1.0 + 1e-12)), "n = {n}: {scaled:?}");
        }
    }
}
