//! Fast decisions for long simulations.
//!
//! An agent takes the safe option exactly when `lambda >= lambda_T(x)`. The
//! threshold is tabulated on a uniform grid in transformed wealth
//! `s = Psi_gamma(x)` and linearly interpolated. Every interval carries an
//! error margin measured at the interval midpoints; when `lambda` falls
//! inside the margin, or `s` is off the grid, the exact rule is evaluated
//! instead. Decisions therefore match [`decide`] one for one.

use rayon::prelude::*;

use crate::agent::{decide, Agent, Choice};
use crate::calibration::indifference_lambda;
use crate::dynamics::GambleEnv;
use crate::error::{Error, Result};
use crate::transform::{yj_forward, yj_inverse};

const SPACING: f64 = 0.05;
const MARGIN_FACTOR: f64 = 4.0;
const MARGIN_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ThresholdTable {
    s_min: f64,
    inv_h: f64,
    lambda: Vec<f64>,
    margin: Vec<f64>,
}

impl ThresholdTable {
    /// Tabulates `lambda_T` over `s` in `[s_min, s_max]`.
    pub fn build(agent: &Agent, env: &GambleEnv, s_min: f64, s_max: f64) -> Result<Self> {
        if !(s_min < s_max && s_min.is_finite() && s_max.is_finite()) {
            return Err(Error::Config(format!("bad table range [{s_min}, {s_max}]")));
        }
        let gamma = env.gamma();
        let intervals = ((s_max - s_min) / SPACING).ceil() as usize;
        let h = (s_max - s_min) / intervals as f64;
        let at = |s: f64| indifference_lambda(yj_inverse(s, gamma), agent, env);
        // even indices are nodes, odd indices interval midpoints
        let values = (0..=2 * intervals)
            .into_par_iter()
            .map(|k| at(s_min + 0.5 * h * k as f64))
            .collect::<Result<Vec<f64>>>()?;
        let lambda: Vec<f64> = values.iter().step_by(2).copied().collect();
        let err: Vec<f64> = (0..intervals)
            .map(|i| (values[2 * i + 1] - 0.5 * (lambda[i] + lambda[i + 1])).abs())
            .collect();
        let margin = (0..intervals)
            .map(|i| {
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(intervals - 1);
                MARGIN_FACTOR * err[lo..=hi].iter().copied().fold(0.0, f64::max) + MARGIN_FLOOR
            })
            .collect();
        Ok(ThresholdTable {
            s_min,
            inv_h: 1.0 / h,
            lambda,
            margin,
        })
    }

    /// Interpolated threshold and its margin, or `None` off the grid.
    #[inline]
    pub fn lookup(&self, s: f64) -> Option<(f64, f64)> {
        let u = (s - self.s_min) * self.inv_h;
        if !(u >= 0.0) {
            return None;
        }
        let i = u as usize;
        if i >= self.margin.len() {
            return None;
        }
        let frac = u - i as f64;
        let l = self.lambda[i] + frac * (self.lambda[i + 1] - self.lambda[i]);
        Some((l, self.margin[i]))
    }
}

/// Decision rule of one agent under fixed dynamics.
#[derive(Debug, Clone)]
pub enum Decider {
    Exact,
    /// The growth-rate maximizer: safe iff `lambda >= mu`.
    Maximizer,
    Tabulated(ThresholdTable),
}

impl Decider {
    /// Chooses the cheapest exact-equivalent rule. Tables cover transformed
    /// wealth within `s_radius` of `s0`.
    pub fn for_agent(
        agent: &Agent,
        env: &GambleEnv,
        tabulate: bool,
        s0: f64,
        s_radius: f64,
    ) -> Result<Self> {
        if agent.eta() == env.gamma() {
            return Ok(Decider::Maximizer);
        }
        if !tabulate {
            return Ok(Decider::Exact);
        }
        Ok(Decider::Tabulated(ThresholdTable::build(
            agent,
            env,
            s0 - s_radius,
            s0 + s_radius,
        )?))
    }

    #[inline]
    pub fn decide(&self, x: f64, lambda: f64, agent: &Agent, env: &GambleEnv) -> Result<Choice> {
        match self {
            Decider::Maximizer => Ok(if lambda >= env.mu() {
                Choice::Safe
            } else {
                Choice::Risky
            }),
            Decider::Exact => decide(x, lambda, agent, env),
            Decider::Tabulated(table) => {
                if let Some((threshold, margin)) = table.lookup(yj_forward(x, env.gamma())) {
                    if lambda > threshold + margin {
                        return Ok(Choice::Safe);
                    }
                    if lambda < threshold - margin {
                        return Ok(Choice::Risky);
                    }
                }
                decide(x, lambda, agent, env)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::AgentSpec;
    use crate::transform::TransformParam;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tp(v: f64) -> TransformParam {
        TransformParam::new(v).unwrap()
    }

    #[test]
    fn tabulated_decisions_match_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for g in [0.0, 0.5, 1.0] {
            let env = GambleEnv::new(tp(g), -0.15, 2.0, 0.15).unwrap();
            for e in [0.0, 0.25, 1.0] {
                let agent = Agent::new(AgentSpec::new(tp(e), 32).unwrap()).unwrap();
                let d = Decider::for_agent(&agent, &env, true, 0.0, 12.0).unwrap();
                let (lo, hi) = env.safe_support();
                for _ in 0..4000 {
                    let s: f64 = rng.random_range(-14.0..14.0);
                    let x = yj_inverse(s, tp(g));
                    let lambda = rng.random_range(lo..hi);
                    assert_eq!(
                        d.decide(x, lambda, &agent, &env).unwrap(),
                        decide(x, lambda, &agent, &env).unwrap(),
                        "g={g} e={e} x={x} lambda={lambda}"
                    );
                }
                // at the tabulated threshold itself the exact rule decides
                if let Decider::Tabulated(t) = &d {
                    let (l, m) = t.lookup(0.3).unwrap();
                    assert!(m >= MARGIN_FLOOR);
                    let x = yj_inverse(0.3, tp(g));
                    assert_eq!(
                        d.decide(x, l, &agent, &env).unwrap(),
                        decide(x, l, &agent, &env).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn maximizer_rule() {
        let env = GambleEnv::new(tp(0.5), -0.2, 2.0, 0.2).unwrap();
        let agent = Agent::with_eta(tp(0.5)).unwrap();
        let d = Decider::for_agent(&agent, &env, true, 0.0, 10.0).unwrap();
        assert!(matches!(d, Decider::Maximizer));
        assert_eq!(d.decide(3.0, -0.2, &agent, &env).unwrap(), Choice::Safe);
        assert_eq!(d.decide(3.0, -0.2000001, &agent, &env).unwrap(), Choice::Risky);
    }

    #[test]
    fn lookup_off_grid() {
        let env = GambleEnv::new(tp(0.5), -0.2, 2.0, 0.2).unwrap();
        let agent = Agent::with_eta(tp(0.0)).unwrap();
        let t = ThresholdTable::build(&agent, &env, -1.0, 1.0).unwrap();
        assert!(t.lookup(-1.5).is_none());
        assert!(t.lookup(1.0).is_none());
        assert!(t.lookup(f64::NAN).is_none());
        assert!(t.lookup(0.99).is_some());
        assert!(ThresholdTable::build(&agent, &env, 1.0, -1.0).is_err());
    }
}
