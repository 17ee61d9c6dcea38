//! Exact and floating oracles for exponential Fourier coefficients.
//!
//! Exact route: tilting the measure by `e^{bx}` turns the pairing into a
//! moment computation. For the Gaussian `π^{-1/2}e^{-x²}dx`,
//! `e^{bx}dγ = e^{b²/4} · N(b/2, 1/2)`, so `⟨H_n, e^{b·}⟩ = e^{b²/4} E[H_n(Y + b/2)]`.
//! For `μ_α`, `e^{bx}dμ_α = (1-b)^{-α-1} · law of Y/(1-b)` with `Y ~ Γ(α+1, 1)`.
//! Both expectations are evaluated in exact rational arithmetic from the
//! power-basis coefficients; only the final scalar factors are floating.
//!
//! Floating route: Gauss rules of the shifted or scaled measure, exact for
//! the polynomial degree. The coefficients are far smaller than the
//! integrand, so the comparison scale is `∫|φ_n| e^{bx}`, returned alongside.

#![allow(dead_code)]

use hyperpoly::quadrature::gauss_rule;
use hyperpoly::{Measure, PolyFamily};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Power-basis coefficients of `H_n` from `H_{k+1} = 2x H_k - 2k H_{k-1}`.
fn hermite_coeffs(n: usize) -> Vec<BigRational> {
    let mut prev = vec![BigRational::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![BigRational::zero(), int(2)];
    for k in 1..n {
        let mut next = vec![BigRational::zero(); k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * int(2);
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c * int(2 * k as u64);
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Power-basis coefficients of `L_n^α`: `(-1)^k C(n+α, n-k) / k!`.
fn laguerre_coeffs(n: usize, alpha: &BigRational) -> Vec<BigRational> {
    (0..=n)
        .map(|k| {
            // C(n+α, n-k) = (k+α+1)_{n-k} / (n-k)!
            let mut c = BigRational::one();
            for j in 0..(n - k) {
                c *= alpha + int((k + 1 + j) as u64);
                c /= int((j + 1) as u64);
            }
            for j in 1..=k {
                c /= int(j as u64);
            }
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

fn binom(n: usize, k: usize) -> BigRational {
    let mut c = BigRational::one();
    for j in 0..k {
        c = c * int((n - j) as u64) / int((j + 1) as u64);
    }
    c
}

/// `E[H_n(Y + c)]` with `Y ~ N(0, 1/2)`: `E Y^{2j} = (2j-1)!!/2^j`.
fn hermite_tilted_expectation(n: usize, c: &BigRational) -> BigRational {
    let max_k = n + 1;
    let mut gauss_moment = vec![BigRational::zero(); max_k + 1];
    gauss_moment[0] = BigRational::one();
    for j in (2..=max_k).step_by(2) {
        gauss_moment[j] = &gauss_moment[j - 2] * int((j - 1) as u64) / int(2);
    }
    let mut total = BigRational::zero();
    for (k, hk) in hermite_coeffs(n).iter().enumerate() {
        if hk.is_zero() {
            continue;
        }
        // E (Y + c)^k
        let mut m = BigRational::zero();
        let mut cpow = vec![BigRational::one()];
        for _ in 0..k {
            let last = cpow.last().unwrap() * c;
            cpow.push(last);
        }
        for i in (0..=k).step_by(2) {
            m += binom(k, i) * &gauss_moment[i] * &cpow[k - i];
        }
        total += hk * m;
    }
    total
}

/// `E[L_n^α(Y/(1-b))]` with `Y ~ Γ(α+1, 1)`: `E Y^k = (α+1)_k`.
fn laguerre_tilted_expectation(n: usize, alpha: &BigRational, one_minus_b: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    let mut moment = BigRational::one();
    let mut scale = BigRational::one();
    for (k, lk) in laguerre_coeffs(n, alpha).iter().enumerate() {
        if k > 0 {
            moment *= alpha + int(k as u64);
            scale /= one_minus_b;
        }
        total += lk * &moment * &scale;
    }
    total
}

fn factorial(n: usize) -> BigRational {
    (1..=n).fold(BigRational::one(), |a, k| a * int(k as u64))
}

/// Normalized Hermite coefficient `⟨h_n, e^{b·}⟩` with `b = bn/bd`, exact up
/// to the final rounding.
pub fn hermite_exact(n: usize, bn: i64, bd: i64) -> f64 {
    let b = bn as f64 / bd as f64;
    let e = hermite_tilted_expectation(n, &rat(bn, 2 * bd));
    // normalize by √(2ⁿ n!) in exact arithmetic before rounding
    let norm_sq = factorial(n) * num::pow(int(2), n);
    e.to_f64().unwrap() / norm_sq.to_f64().unwrap().sqrt() * (b * b / 4.0).exp()
}

/// Normalized Laguerre coefficient `⟨ℓ_n^α, e^{b·}⟩`, `α = an/ad`, `b = bn/bd`.
pub fn laguerre_exact(n: usize, an: i64, ad: i64, bn: i64, bd: i64) -> f64 {
    let alpha_q = rat(an, ad);
    let alpha = an as f64 / ad as f64;
    let b = bn as f64 / bd as f64;
    let e = laguerre_tilted_expectation(n, &alpha_q, &rat(bd - bn, bd));
    // ‖L_n^α‖² = (α+1)_n / n!
    let mut norm_sq = BigRational::one();
    for j in 0..n {
        norm_sq *= &alpha_q + int((j + 1) as u64);
    }
    norm_sq /= factorial(n);
    e.to_f64().unwrap() / norm_sq.to_f64().unwrap().sqrt() * (1.0 - b).powf(-alpha - 1.0)
}

/// `(value, absolute mass)` of `⟨h_n, e^{b·}⟩` by a shifted Gauss–Hermite rule.
pub fn hermite_gauss(n: usize, b: f64) -> (f64, f64) {
    let rule = gauss_rule(&Measure::Gaussian, 64).unwrap();
    let (mut s, mut mass) = (0.0, 0.0);
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = PolyFamily::Hermite.eval_normalized(n, y + 0.5 * b).unwrap().to_f64();
        s += w * v;
        mass += w * v.abs();
    }
    let scale = (b * b / 4.0).exp();
    (scale * s, scale * mass)
}

/// `(value, absolute mass)` of `⟨ℓ_n^α, e^{b·}⟩` by a scaled Gauss–Laguerre rule.
pub fn laguerre_gauss(n: usize, alpha: f64, b: f64) -> (f64, f64) {
    let fam = PolyFamily::laguerre(alpha).unwrap();
    let rule = gauss_rule(&Measure::Gamma { alpha }, 64).unwrap();
    let (mut s, mut mass) = (0.0, 0.0);
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = fam.eval_normalized(n, y / (1.0 - b)).unwrap().to_f64();
        s += w * v;
        mass += w * v.abs();
    }
    let scale = (1.0 - b).powf(-alpha - 1.0);
    (scale * s, scale * mass)
}
