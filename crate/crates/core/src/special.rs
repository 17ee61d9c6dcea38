//! Thin wrappers over `statrs` plus a few log-domain helpers.

use statrs::function::gamma;

pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    gamma::ln_gamma(n as f64 + 1.0)
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln Σ exp(x_i)`, returning `-inf` for an empty or all-`-inf` input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Aitken Δ² extrapolation of the last three entries of a sequence whose
/// error shrinks geometrically. Falls back to the last entry when the second
/// difference vanishes.
pub fn aitken(seq: &[f64]) -> f64 {
    let k = seq.len();
    assert!(k >= 3, "aitken needs three terms");
    let (x0, x1, x2) = (seq[k - 3], seq[k - 2], seq[k - 1]);
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let den = d2 - d1;
    if den.abs() <= 1e-15 * (x2.abs() + d1.abs() + d2.abs()) || den == 0.0 {
        x2
    } else {
        x2 - d2 * d2 / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_is_stable() {
        let v = log_sum_exp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn aitken_recovers_geometric_limit() {
        let seq: Vec<f64> = (0..3).map(|k| 2.0 + 0.5f64.powi(k)).collect();
        assert!((aitken(&seq) - 2.0).abs() < 1e-14);
        assert_eq!(aitken(&[1.0, 1.0, 1.0]), 1.0);
    }

    #[test]
    fn slope_of_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        assert!((ls_slope(&xs, &ys) - 3.0).abs() < 1e-14);
    }
}
