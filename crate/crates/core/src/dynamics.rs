//! Wealth dynamics of the safe and risky options.
//!
//! Both options add a payoff to the ergodicity-transformed wealth
//! `Psi_gamma(x)`; wealth itself is recovered with the inverse transform. The
//! safe payoff is uniform on `[mu - c sigma^2, mu + c sigma^2]` and revealed
//! before the decision; the risky payoff is `Normal(mu, sigma^2)`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{yj_forward, yj_inverse, TransformParam};

/// The gamble environment shared by all agents of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GambleEnv {
    gamma: TransformParam,
    mu: f64,
    sigma: f64,
    c: f64,
}

impl GambleEnv {
    pub fn new(gamma: TransformParam, mu: f64, sigma: f64, c: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain("sigma", sigma, "(0, inf)"));
        }
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::domain("c", c, "[0, 1]"));
        }
        if !mu.is_finite() {
            return Err(Error::domain("mu", mu, "finite reals"));
        }
        Ok(GambleEnv {
            gamma,
            mu,
            sigma,
            c,
        })
    }

    pub fn gamma(&self) -> TransformParam {
        self.gamma
    }

    /// Mean of the transformed risky payoff.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Standard deviation of the transformed risky payoff.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Half-width factor of the safe payoff range.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Half-width `c sigma^2` of the safe payoff support.
    pub fn safe_half_width(&self) -> f64 {
        self.c * self.sigma * self.sigma
    }

    /// Support `[mu - c sigma^2, mu + c sigma^2]` of the safe payoff.
    pub fn safe_support(&self) -> (f64, f64) {
        let h = self.safe_half_width();
        (self.mu - h, self.mu + h)
    }

    /// Variance of the safe payoff, `(2 c sigma^2)^2 / 12`.
    pub fn safe_variance(&self) -> f64 {
        let w = 2.0 * self.safe_half_width();
        w * w / 12.0
    }

    /// Safe payoff for a standard uniform draw `u` in `[0, 1)`.
    #[inline]
    pub fn safe_payoff_from_uniform(&self, u: f64) -> f64 {
        self.mu + self.safe_half_width() * (2.0 * u - 1.0)
    }

    /// Risky payoff for a standard normal draw `z`.
    #[inline]
    pub fn risky_payoff_from_normal(&self, z: f64) -> f64 {
        self.mu + self.sigma * z
    }
}

/// `Psi_gamma^{-1}(Psi_gamma(x) + delta)`.
#[inline]
pub fn apply_increment(x: f64, delta: f64, gamma: TransformParam) -> f64 {
    yj_inverse(yj_forward(x, gamma) + delta, gamma)
}

/// Draws the safe payoff `lambda ~ Unif(mu - c sigma^2, mu + c sigma^2)`.
pub fn sample_safe_payoff<R: Rng + ?Sized>(rng: &mut R, env: &GambleEnv) -> f64 {
    env.safe_payoff_from_uniform(rng.random::<f64>())
}

/// Draws the risky payoff `pi ~ Normal(mu, sigma^2)`.
pub fn sample_risky_payoff<R: Rng + ?Sized>(rng: &mut R, env: &GambleEnv) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    env.risky_payoff_from_normal(z)
}

/// A wealth path under fixed dynamics, indexed by time step `0..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    gamma: TransformParam,
    wealth: Vec<f64>,
}

impl Trajectory {
    pub fn new(gamma: TransformParam, initial_wealth: f64) -> Self {
        Trajectory {
            gamma,
            wealth: vec![initial_wealth],
        }
    }

    pub fn from_wealth(gamma: TransformParam, wealth: Vec<f64>) -> Result<Self> {
        if wealth.is_empty() {
            return Err(Error::Empty("trajectory"));
        }
        Ok(Trajectory { gamma, wealth })
    }

    pub fn gamma(&self) -> TransformParam {
        self.gamma
    }

    pub fn wealth(&self) -> &[f64] {
        &self.wealth
    }

    /// Number of completed steps `T`.
    pub fn steps(&self) -> usize {
        self.wealth.len() - 1
    }

    pub fn current(&self) -> f64 {
        *self.wealth.last().expect("trajectory is never empty")
    }

    /// Applies a transformed payoff and returns the new wealth.
    pub fn push_increment(&mut self, delta: f64) -> f64 {
        let next = apply_increment(self.current(), delta, self.gamma);
        self.wealth.push(next);
        next
    }
}

/// Per-step growth of the transformed wealth, `(Psi_gamma(X_T) - Psi_gamma(X_0)) / T`.
pub fn realized_growth_rate(traj: &Trajectory) -> Result<f64> {
    let t = traj.steps();
    if t == 0 {
        return Err(Error::Empty("trajectory steps"));
    }
    let start = yj_forward(traj.wealth[0], traj.gamma);
    let end = yj_forward(traj.current(), traj.gamma);
    Ok((end - start) / t as f64)
}
