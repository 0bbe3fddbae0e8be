//! Expected-utility agents.
//!
//! An agent with utility `Psi_eta` compares the certain utility change of the
//! safe option with the expected utility change of the risky option and picks
//! the larger (ties go to the safe option).
//!
//! The risky expectation is `E[Psi_eta(Psi_gamma^{-1}(Psi_gamma(x) + Pi))]` for
//! `Pi ~ Normal(mu, sigma^2)`. Its integrand is analytic except where the new
//! wealth crosses zero, at `Pi = -Psi_gamma(x)`: there both transforms switch
//! branch and the third derivative jumps. When that point lies in the far tail
//! a Gauss-Hermite rule is used directly. Otherwise the Gaussian integral is
//! split at the breakpoint and each side is integrated with a Gauss-Legendre
//! rule of the same order, since a single Hermite rule only converges
//! algebraically across the kink.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::dynamics::GambleEnv;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_hermite_rule, gauss_legendre_rule, QuadratureRule};
use crate::transform::{reexpress, yj_derivative, yj_forward, yj_inverse, TransformParam};

pub const DEFAULT_QUAD_NODES: usize = 64;

/// Standardized distance beyond which the Gaussian is truncated when the
/// integral is split, and beyond which the breakpoint is ignored.
const SPLIT_TAIL: f64 = 10.0;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Risk preference of an agent and the size of its quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub eta: TransformParam,
    pub quad_nodes: usize,
}

impl AgentSpec {
    pub fn new(eta: TransformParam, quad_nodes: usize) -> Result<Self> {
        if quad_nodes == 0 {
            return Err(Error::domain("quad_nodes", 0.0, "n >= 1"));
        }
        Ok(AgentSpec { eta, quad_nodes })
    }

    pub fn with_eta(eta: TransformParam) -> Self {
        AgentSpec {
            eta,
            quad_nodes: DEFAULT_QUAD_NODES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Choice {
    Safe,
    Risky,
}

impl Choice {
    pub fn as_str(self) -> &'static str {
        match self {
            Choice::Safe => "safe",
            Choice::Risky => "risky",
        }
    }
}

impl std::fmt::Display for Choice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Choice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "safe" => Ok(Choice::Safe),
            "risky" => Ok(Choice::Risky),
            other => Err(Error::Config(format!("unknown choice {other:?}"))),
        }
    }
}

#[derive(Debug)]
struct Rules {
    hermite: QuadratureRule,
    legendre: QuadratureRule,
}

fn rules_for(n: usize) -> Result<Arc<Rules>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rules>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return Ok(Arc::clone(r));
    }
    let rules = Arc::new(Rules {
        hermite: gauss_hermite_rule(n)?,
        legendre: gauss_legendre_rule(n)?,
    });
    cache.lock().unwrap().insert(n, Arc::clone(&rules));
    Ok(rules)
}

/// An [`AgentSpec`] together with its (shared, immutable) quadrature rules.
#[derive(Debug, Clone)]
pub struct Agent {
    spec: AgentSpec,
    rules: Arc<Rules>,
}

impl Agent {
    pub fn new(spec: AgentSpec) -> Result<Self> {
        if spec.quad_nodes == 0 {
            return Err(Error::domain("quad_nodes", 0.0, "n >= 1"));
        }
        Ok(Agent {
            spec,
            rules: rules_for(spec.quad_nodes)?,
        })
    }

    pub fn with_eta(eta: TransformParam) -> Result<Self> {
        Agent::new(AgentSpec::with_eta(eta))
    }

    pub fn spec(&self) -> AgentSpec {
        self.spec
    }

    pub fn eta(&self) -> TransformParam {
        self.spec.eta
    }

    pub fn hermite_rule(&self) -> &QuadratureRule {
        &self.rules.hermite
    }
}

/// Utility change of the safe option: `Psi_eta(Psi_gamma^{-1}(Psi_gamma(x) + lambda)) - Psi_eta(x)`.
pub fn safe_utility_change(x: f64, lambda: f64, eta: TransformParam, gamma: TransformParam) -> f64 {
    if eta == gamma {
        return lambda;
    }
    reexpress(yj_forward(x, gamma) + lambda, gamma, eta) - yj_forward(x, eta)
}

/// Expected utility change of the risky option.
///
/// For the growth-rate maximizer (`eta == gamma`) the transforms cancel and
/// the result is `mu`; otherwise see [`risky_expected_utility_change_numeric`].
pub fn risky_expected_utility_change(x: f64, agent: &Agent, env: &GambleEnv) -> Result<f64> {
    if agent.eta() == env.gamma() {
        return Ok(env.mu());
    }
    risky_expected_utility_change_numeric(x, agent, env)
}

/// Expected utility change of the risky option evaluated by quadrature for
/// every parameter pair, including `eta == gamma`.
pub fn risky_expected_utility_change_numeric(
    x: f64,
    agent: &Agent,
    env: &GambleEnv,
) -> Result<f64> {
    let gamma = env.gamma();
    let eta = agent.eta();
    let (mu, sigma) = (env.mu(), env.sigma());
    let s0 = yj_forward(x, gamma);
    let base = yj_forward(x, eta);
    let integrand = |w: f64| reexpress(s0 + w, gamma, eta) - base;

    let z_break = (-s0 - mu) / sigma;
    let value = if z_break.abs() >= SPLIT_TAIL {
        agent.rules.hermite.normal_expectation(mu, sigma, integrand)
    } else {
        let panel = |a: f64, b: f64| {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            half * agent.rules.legendre.integrate(|t| {
                let z = mid + half * t;
                (-0.5 * z * z).exp() * integrand(mu + sigma * z)
            })
        };
        FRAC_1_SQRT_2PI * (panel(-SPLIT_TAIL, z_break) + panel(z_break, SPLIT_TAIL))
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite {
            context: format!(
                "risky expected utility change at x = {x}, eta = {eta}, gamma = {gamma}, \
                 mu = {mu}, sigma = {sigma} ({} nodes)",
                agent.spec.quad_nodes
            ),
        })
    }
}

/// Density of the next-step utility `Y = Psi_eta(X_{t+1})` under the risky
/// option, by change of variables from `Pi`.
pub fn utility_pdf(y: f64, x: f64, agent: &Agent, env: &GambleEnv) -> f64 {
    let gamma = env.gamma();
    let eta = agent.eta();
    let wealth = yj_inverse(y, eta);
    let w = yj_forward(wealth, gamma) - yj_forward(x, gamma);
    let z = (w - env.mu()) / env.sigma();
    let jacobian = yj_derivative(wealth, gamma) / yj_derivative(wealth, eta);
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp() / env.sigma() * jacobian.abs()
}

/// Picks the option with the larger (expected) utility change; ties go to `Safe`.
pub fn decide(x: f64, lambda: f64, agent: &Agent, env: &GambleEnv) -> Result<Choice> {
    let safe = safe_utility_change(x, lambda, agent.eta(), env.gamma());
    let risky = risky_expected_utility_change(x, agent, env)?;
    Ok(if safe >= risky {
        Choice::Safe
    } else {
        Choice::Risky
    })
}
