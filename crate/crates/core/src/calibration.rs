//! Choosing gamble parameters.
//!
//! `mu` is tied to `c` so that the growth-rate maximizer has zero growth
//! (`mu = -c sigma^2 / 4`), and `c` is chosen as the smallest half-width
//! whose safe-payoff range contains the zero-wealth indifference thresholds
//! of the two most extreme agents. The two conditions are solved together by
//! fixed-point iteration on `c`.

use serde::{Deserialize, Serialize};

use crate::agent::{risky_expected_utility_change, Agent, AgentSpec, DEFAULT_QUAD_NODES};
use crate::dynamics::GambleEnv;
use crate::error::{Error, Result};
use crate::transform::{reexpress, yj_forward, TransformParam};

/// `mu = -c sigma^2 / 4`: zero growth rate for the growth-rate maximizer.
pub fn zero_growth_mu(c: f64, sigma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::domain("c", c, "[0, 1]"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain("sigma", sigma, "(0, inf)"));
    }
    Ok(-c * sigma * sigma / 4.0)
}

/// Safe payoff `lambda_T` at which the agent is indifferent between the two
/// options at wealth `x`.
///
/// Solves `Psi_eta(Psi_gamma^{-1}(Psi_gamma(x) + lambda_T)) = E[Psi_eta(X_{t+1})]`
/// in closed form by applying `Psi_gamma o Psi_eta^{-1}` to both sides.
pub fn indifference_lambda(x: f64, agent: &Agent, env: &GambleEnv) -> Result<f64> {
    let gamma = env.gamma();
    let eta = agent.eta();
    if eta == gamma {
        return Ok(env.mu());
    }
    let expected_utility = yj_forward(x, eta) + risky_expected_utility_change(x, agent, env)?;
    let lambda = reexpress(expected_utility, eta, gamma) - yj_forward(x, gamma);
    if lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(Error::NonFinite {
            context: format!("indifference threshold at x = {x}, eta = {eta}, gamma = {gamma}"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationOptions {
    pub initial_c: f64,
    pub max_iterations: usize,
    /// Convergence threshold on successive values of `c`.
    pub tolerance: f64,
    pub quad_nodes: usize,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        CalibrationOptions {
            initial_c: 0.1,
            max_iterations: 100,
            tolerance: 1e-6,
            quad_nodes: DEFAULT_QUAD_NODES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub mu: f64,
    pub c: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Zero-wealth threshold of the least risk-averse agent at `(mu, c)`.
    pub lambda_p: f64,
    /// Zero-wealth threshold of the most risk-averse agent at `(mu, c)`.
    pub lambda_q: f64,
    /// `(mu_k, c_k)` for every iterate, starting with the initial guess.
    pub iterates: Vec<(f64, f64)>,
}

impl CalibrationResult {
    pub fn env(&self, gamma: TransformParam, sigma: f64) -> Result<GambleEnv> {
        GambleEnv::new(gamma, self.mu, sigma, self.c)
    }
}

/// Calibrates `(mu, c)` with the default options.
pub fn calibrate(
    gamma: TransformParam,
    eta_p: TransformParam,
    eta_q: TransformParam,
    sigma: f64,
) -> Result<CalibrationResult> {
    calibrate_with(gamma, eta_p, eta_q, sigma, &CalibrationOptions::default())
}

pub fn calibrate_with(
    gamma: TransformParam,
    eta_p: TransformParam,
    eta_q: TransformParam,
    sigma: f64,
    opts: &CalibrationOptions,
) -> Result<CalibrationResult> {
    TransformParam::unit(gamma.value())?;
    if eta_p > eta_q {
        return Err(Error::Calibration(format!(
            "eta_p = {eta_p} must not exceed eta_q = {eta_q}"
        )));
    }
    let agent_p = Agent::new(AgentSpec::new(eta_p, opts.quad_nodes)?)?;
    let agent_q = Agent::new(AgentSpec::new(eta_q, opts.quad_nodes)?)?;
    let thresholds = |c: f64| -> Result<(f64, f64, f64)> {
        let mu = zero_growth_mu(c, sigma)?;
        let env = GambleEnv::new(gamma, mu, sigma, c)?;
        Ok((
            mu,
            indifference_lambda(0.0, &agent_p, &env)?,
            indifference_lambda(0.0, &agent_q, &env)?,
        ))
    };

    let mut c = opts.initial_c;
    let mut iterates = vec![(zero_growth_mu(c, sigma)?, c)];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let (mu, lp, lq) = thresholds(c)?;
        let next = (lp - mu).abs().max((lq - mu).abs()) / (sigma * sigma);
        if !(0.0..=1.0).contains(&next) {
            return Err(Error::Calibration(format!(
                "c left [0, 1] at iteration {iterations}: {next}"
            )));
        }
        let step = (next - c).abs();
        c = next;
        iterates.push((zero_growth_mu(c, sigma)?, c));
        if step < opts.tolerance {
            converged = true;
            break;
        }
    }

    let (mu, lambda_p, lambda_q) = thresholds(c)?;
    Ok(CalibrationResult {
        mu,
        c,
        iterations,
        converged,
        lambda_p,
        lambda_q,
        iterates,
    })
}
