use serde::{Deserialize, Serialize};

use super::DecisionRecord;
use crate::agent::{decide, Agent, AgentSpec, DEFAULT_QUAD_NODES};
use crate::dynamics::GambleEnv;
use crate::error::{Error, Result};
use crate::transform::TransformParam;

/// Outcome of a revealed-preference fit over a grid of utility parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inference {
    /// First grid value with the fewest mismatches.
    pub eta_hat: TransformParam,
    pub mismatches: usize,
    /// Set when two or more grid values share the minimum.
    pub ambiguous: bool,
    /// Mismatch count of every grid value, in grid order.
    pub mismatch_counts: Vec<(TransformParam, usize)>,
}

/// Fits `eta` by counting, for every grid value, the logged choices that an
/// agent with that utility would have made differently.
pub fn infer_eta(
    log: &[DecisionRecord],
    env: &GambleEnv,
    eta_grid: &[TransformParam],
) -> Result<Inference> {
    infer_eta_with(log, env, eta_grid, DEFAULT_QUAD_NODES)
}

pub fn infer_eta_with(
    log: &[DecisionRecord],
    env: &GambleEnv,
    eta_grid: &[TransformParam],
    quad_nodes: usize,
) -> Result<Inference> {
    if log.is_empty() {
        return Err(Error::Empty("decision log"));
    }
    if eta_grid.is_empty() {
        return Err(Error::Empty("eta grid"));
    }
    let mismatch_counts = eta_grid
        .iter()
        .map(|&eta| {
            let agent = Agent::new(AgentSpec::new(eta, quad_nodes)?)?;
            let mut count = 0;
            for rec in log {
                if decide(rec.wealth_before, rec.lambda, &agent, env)? != rec.choice {
                    count += 1;
                }
            }
            Ok((eta, count))
        })
        .collect::<Result<Vec<_>>>()?;
    let mismatches = mismatch_counts.iter().map(|&(_, n)| n).min().expect("grid is non-empty");
    let mut best = mismatch_counts.iter().filter(|&&(_, n)| n == mismatches);
    let eta_hat = best.next().expect("minimum is attained").0;
    let ambiguous = best.next().is_some();
    Ok(Inference {
        eta_hat,
        mismatches,
        ambiguous,
        mismatch_counts,
    })
}
