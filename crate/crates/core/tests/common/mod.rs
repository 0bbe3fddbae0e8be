//! Reference implementations used as test oracles.
//!
//! Everything here is written from the model definitions with plain power
//! functions, adaptive Simpson integration and bisection. None of it shares
//! code with the library's log-coordinate transforms or quadrature rules.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Yeo-Johnson transform from its four defining branches.
pub fn psi(x: f64, p: f64) -> f64 {
    if x >= 0.0 {
        if p == 1.0 {
            (x + 1.0).ln()
        } else {
            ((x + 1.0).powf(1.0 - p) - 1.0) / (1.0 - p)
        }
    } else if p == -1.0 {
        -(1.0 - x).ln()
    } else {
        (1.0 - (1.0 - x).powf(1.0 + p)) / (1.0 + p)
    }
}

/// Inverse of [`psi`] solved branch by branch.
pub fn psi_inv(y: f64, p: f64) -> f64 {
    if y >= 0.0 {
        if p == 1.0 {
            y.exp() - 1.0
        } else {
            (1.0 + (1.0 - p) * y).powf(1.0 / (1.0 - p)) - 1.0
        }
    } else if p == -1.0 {
        1.0 - (-y).exp()
    } else {
        1.0 - (1.0 - (1.0 + p) * y).powf(1.0 / (1.0 + p))
    }
}

/// Root of an increasing function on `[lo, hi]` by bisection.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) <= 0.0 && f(hi) >= 0.0, "root not bracketed in [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Adaptive Simpson on consecutive panels between `breaks`.
pub fn integrate_panels(f: &dyn Fn(f64) -> f64, breaks: &[f64], tol: f64) -> f64 {
    let per_panel = tol / breaks.len() as f64;
    breaks
        .windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], per_panel))
        .sum()
}

pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Utility change of moving wealth `x` by `w` in transformed coordinates.
pub fn utility_change(x: f64, w: f64, eta: f64, gamma: f64) -> f64 {
    psi(psi_inv(psi(x, gamma) + w, gamma), eta) - psi(x, eta)
}

/// `E[utility_change(x, Pi)]` for `Pi ~ Normal(mu, sigma^2)`, integrated over
/// `mu +/- 10 sigma` with one adaptive panel per standard deviation.
pub fn risky_expectation(x: f64, eta: f64, gamma: f64, mu: f64, sigma: f64) -> f64 {
    let f = |w: f64| normal_pdf((w - mu) / sigma) / sigma * utility_change(x, w, eta, gamma);
    let breaks: Vec<f64> = (-10..=10).map(|k| mu + sigma * k as f64).collect();
    integrate_panels(&f, &breaks, 1e-11)
}

/// Safe payoff at which both options have the same (expected) utility change.
pub fn indifference_threshold(x: f64, eta: f64, gamma: f64, mu: f64, sigma: f64) -> f64 {
    let target = risky_expectation(x, eta, gamma, mu, sigma);
    bisect(
        |l| utility_change(x, l, eta, gamma) - target,
        mu - 20.0 * sigma,
        mu + 20.0 * sigma,
    )
}

/// Fixed-point calibration from oracle thresholds.
pub fn calibrate(gamma: f64, eta_p: f64, eta_q: f64, sigma: f64) -> (f64, f64) {
    let mut c: f64 = 0.1;
    for _ in 0..100 {
        let mu = -c * sigma * sigma / 4.0;
        let lp = indifference_threshold(0.0, eta_p, gamma, mu, sigma);
        let lq = indifference_threshold(0.0, eta_q, gamma, mu, sigma);
        let next = (lp - mu).abs().max((lq - mu).abs()) / (sigma * sigma);
        let done = (next - c).abs() < 1e-10;
        c = next;
        if done {
            break;
        }
    }
    (-c * sigma * sigma / 4.0, c)
}

/// Certain payoff equating expected log wealth with a fair 10-or-100 coin.
pub fn coin_threshold(wealth: f64) -> f64 {
    let coin = 0.5 * ((wealth + 10.0).ln() + (wealth + 100.0).ln());
    bisect(|x| (wealth + x).ln() - coin, 10.0, 100.0)
}

/// Breakpoints in utility space matching `mu + k sigma`, `k = -10..=10`.
pub fn utility_breaks(x: f64, eta: f64, gamma: f64, mu: f64, sigma: f64) -> Vec<f64> {
    (-10..=10)
        .map(|k| psi(psi_inv(psi(x, gamma) + mu + sigma * k as f64, gamma), eta))
        .collect()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}
