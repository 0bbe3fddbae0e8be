//! Decision convergence diagnostics.
//!
//! As wealth moves away from zero the indifference thresholds of agents with
//! different utilities approach `mu`, so their choices become
//! indistinguishable. The helpers here measure that effect: threshold curves
//! over a wealth grid, the ratio of second to first Taylor coefficient of the
//! next-step utility, and the probability that two agents disagree.

use rayon::prelude::*;

use crate::agent::Agent;
use crate::calibration::indifference_lambda;
use crate::dynamics::GambleEnv;
use crate::error::{Error, Result};
use crate::transform::{yj_derivative, yj_second_derivative, TransformParam};

/// Indifference thresholds of one agent over a wealth grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCurve {
    pub wealth_grid: Vec<f64>,
    pub lambda_t: Vec<f64>,
    pub eta: TransformParam,
    pub env: GambleEnv,
}

impl ConvergenceCurve {
    /// `|lambda_T(x) - mu|` along the grid.
    pub fn deviations(&self) -> Vec<f64> {
        let mu = self.env.mu();
        self.lambda_t.iter().map(|l| (l - mu).abs()).collect()
    }
}

/// Evaluates [`indifference_lambda`] at every point of a strictly increasing
/// wealth grid. Grid points are evaluated in parallel.
pub fn lambda_t_curve(
    wealth_grid: &[f64],
    agent: &Agent,
    env: &GambleEnv,
) -> Result<ConvergenceCurve> {
    if wealth_grid.is_empty() {
        return Err(Error::Empty("wealth grid"));
    }
    if !wealth_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Config("wealth grid must be strictly increasing".into()));
    }
    let lambda_t = wealth_grid
        .par_iter()
        .map(|&x| indifference_lambda(x, agent, env))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceCurve {
        wealth_grid: wealth_grid.to_vec(),
        lambda_t,
        eta: agent.eta(),
        env: *env,
    })
}

/// First and second derivatives at `z = 0` of
/// `W(z) = Psi_eta(Psi_gamma^{-1}(Psi_gamma(x) + z))`.
pub fn taylor_coefficients(x: f64, eta: TransformParam, gamma: TransformParam) -> (f64, f64) {
    let d_eta = yj_derivative(x, eta);
    let d_gamma = yj_derivative(x, gamma);
    let dd_eta = yj_second_derivative(x, eta);
    let dd_gamma = yj_second_derivative(x, gamma);
    let first = d_eta / d_gamma;
    let second = (dd_eta * d_gamma - d_eta * dd_gamma) / d_gamma.powi(3);
    (first, second)
}

/// `W''(0) / W'(0)`: the weight of the variance term relative to the mean term
/// in the expected utility change. For `x >= 0` this equals
/// `(gamma - eta) (x + 1)^(gamma - 1)`, i.e. it decays like `1 / Psi_gamma(x)`
/// for `gamma < 1` and is constant for `gamma = 1`.
pub fn taylor_ratio(x: f64, eta: TransformParam, gamma: TransformParam) -> f64 {
    let (first, second) = taylor_coefficients(x, eta, gamma);
    second / first
}

/// Probability, over the safe payoff, that two agents at wealth `x` choose
/// differently: the share of the safe support lying between their thresholds.
pub fn disagreement_probability(
    x: f64,
    agent_a: &Agent,
    agent_b: &Agent,
    env: &GambleEnv,
) -> Result<f64> {
    if env.c() == 0.0 {
        return Ok(0.0);
    }
    let la = indifference_lambda(x, agent_a, env)?;
    let lb = indifference_lambda(x, agent_b, env)?;
    let (lo, hi) = env.safe_support();
    let overlap = (la.max(lb).min(hi) - la.min(lb).max(lo)).max(0.0);
    Ok((overlap / (hi - lo)).clamp(0.0, 1.0))
}

/// Certain payoff `x*` at which a log-utility agent with wealth `wealth` is
/// indifferent between it and a fair coin paying 10 or 100:
/// `sqrt((X + 55)^2 - 2025) - X`.
pub fn worked_example_threshold(wealth: f64) -> Result<f64> {
    if !(wealth > 0.0 && wealth.is_finite()) {
        return Err(Error::domain("wealth", wealth, "(0, inf)"));
    }
    // (X + 55)^2 - 2025 = (X + 10)(X + 100); rationalized to avoid cancellation
    let root = ((wealth + 10.0) * (wealth + 100.0)).sqrt();
    Ok((110.0 * wealth + 1000.0) / (root + wealth))
}
