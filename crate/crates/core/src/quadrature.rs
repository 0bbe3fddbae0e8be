//! Gaussian quadrature rules.
//!
//! Nodes are found by Newton iteration on the three-term recurrence of the
//! orthonormal polynomials, seeded with the usual asymptotic guesses.

use crate::error::{Error, Result};

const NEWTON_MAX_ITER: usize = 100;

/// Nodes and weights of an interpolatory quadrature rule, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(t_i)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Expectation of `f(Z)` for `Z ~ Normal(mean, sd^2)` using a Gauss-Hermite
    /// rule: `pi^{-1/2} sum_i w_i f(mean + sqrt(2) sd t_i)`.
    ///
    /// Only meaningful for rules built by [`gauss_hermite_rule`].
    pub fn normal_expectation(&self, mean: f64, sd: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let scale = std::f64::consts::SQRT_2 * sd;
        self.integrate(|t| f(mean + scale * t)) * FRAC_1_SQRT_PI
    }
}

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const PI_POW_MINUS_QUARTER: f64 = 0.751_125_544_464_942_5;

/// Physicists' Gauss-Hermite rule with `n` nodes, for weight `exp(-t^2)` on
/// the real line. Weights sum to `sqrt(pi)`.
pub fn gauss_hermite_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::domain("quadrature nodes", 0.0, "n >= 1"));
    }
    let nf = n as f64;
    let half = n.div_ceil(2);
    // NR-style: roots found from largest to smallest
    let mut roots = vec![0.0; half];
    let mut weights = vec![0.0; half];
    let mut z = 0.0f64;
    for i in 0..half {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * roots[0],
            3 => 1.91 * z - 0.91 * roots[1],
            _ => 2.0 * z - roots[i - 2],
        };
        let mut deriv = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = hermite_orthonormal(n, z);
            deriv = dp;
            let step = p / dp;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = hermite_orthonormal(n, z);
        if dp.is_finite() && dp != 0.0 {
            deriv = dp;
        }
        roots[i] = z;
        weights[i] = 2.0 / (deriv * deriv);
    }
    Ok(mirror(n, roots, weights))
}

// Orthonormal Hermite polynomial of degree n at z and its derivative.
fn hermite_orthonormal(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI_POW_MINUS_QUARTER;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

/// Gauss-Legendre rule with `n` nodes on `[-1, 1]`. Weights sum to 2.
pub fn gauss_legendre_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::domain("quadrature nodes", 0.0, "n >= 1"));
    }
    let nf = n as f64;
    let half = n.div_ceil(2);
    let mut roots = vec![0.0; half];
    let mut weights = vec![0.0; half];
    for i in 0..half {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre(n, z);
            deriv = dp;
            let step = p / dp;
            z -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, z);
        if dp.is_finite() && dp != 0.0 {
            deriv = dp;
        }
        roots[i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * deriv * deriv);
    }
    Ok(mirror(n, roots, weights))
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
    }
    (p1, n as f64 * (z * p1 - p2) / (z * z - 1.0))
}

// Expands the non-negative half of a symmetric rule (largest root first) into
// the full rule with ascending nodes.
fn mirror(n: usize, roots: Vec<f64>, weights: Vec<f64>) -> QuadratureRule {
    let mut nodes = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for (&z, &wt) in roots.iter().zip(&weights) {
        nodes.push(-z.abs());
        w.push(wt);
    }
    let upper = n / 2;
    for k in (0..upper).rev() {
        nodes.push(roots[k].abs());
        w.push(weights[k]);
    }
    if n % 2 == 1 {
        // the middle root is exactly zero by symmetry
        let mid = n / 2;
        nodes[mid] = 0.0;
    }
    QuadratureRule { nodes, weights: w }
}
