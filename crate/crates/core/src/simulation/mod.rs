//! Ensemble experiments.
//!
//! Every run draws one safe payoff and one risky payoff per step. All agents
//! in the run see the same safe payoff and, by default, receive the same
//! risky payoff when they take the risky option. Each run owns a ChaCha
//! stream selected by its index, so results do not depend on how runs are
//! scheduled across threads.

mod cdf;
mod decider;
mod inference;

pub use cdf::{cdfs_cross, count_crossing_pairs, empirical_cdf, pooled_percentiles, EmpiricalCdf};
pub use decider::{Decider, ThresholdTable};
pub use inference::{infer_eta, infer_eta_with, Inference};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agent::{Agent, AgentSpec, Choice, DEFAULT_QUAD_NODES};
use crate::calibration::{calibrate_with, CalibrationOptions};
use crate::dynamics::{apply_increment, GambleEnv, Trajectory};
use crate::error::{Error, Result};
use crate::transform::{yj_forward, TransformParam};

/// Streams per run: index 0 carries the shared draws, `1 + i` the private
/// risky draws of agent `i` when draws are not shared.
const STREAM_BITS: u32 = 16;

/// Below this many agent decisions, threshold tables cost more than they save.
const TABULATE_MIN_DECISIONS: u64 = 200_000;

/// Fixed `(mu, c)` used instead of calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationOverride {
    pub mu: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub gamma_list: Vec<TransformParam>,
    pub eta_list: Vec<TransformParam>,
    pub sigma: f64,
    pub runs: u64,
    pub horizon: usize,
    pub snapshots: Vec<usize>,
    pub master_seed: u64,
    pub initial_wealth: f64,
    pub calibration_override: Option<CalibrationOverride>,
    /// Common random numbers: agents in a run share the risky draw.
    pub share_risky_draws: bool,
    pub quad_nodes: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let grid: Vec<TransformParam> = [0.0, 0.25, 0.5, 0.75, 1.0]
            .into_iter()
            .map(|v| TransformParam::unit(v).expect("grid is in [0, 1]"))
            .collect();
        ExperimentConfig {
            gamma_list: grid.clone(),
            eta_list: grid,
            sigma: 2.0,
            runs: 100_000,
            horizon: 300,
            snapshots: vec![30, 300],
            master_seed: 0,
            initial_wealth: 0.0,
            calibration_override: None,
            share_risky_draws: true,
            quad_nodes: DEFAULT_QUAD_NODES,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma_list.is_empty() {
            return Err(Error::Empty("gamma_list"));
        }
        if self.eta_list.is_empty() {
            return Err(Error::Empty("eta_list"));
        }
        for p in self.gamma_list.iter().chain(&self.eta_list) {
            TransformParam::unit(p.value())?;
        }
        if self.eta_list.len() >= (1 << STREAM_BITS) - 1 {
            return Err(Error::Config("too many agents".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::domain("sigma", self.sigma, "(0, inf)"));
        }
        if self.runs == 0 || self.runs >= 1 << (64 - STREAM_BITS) {
            return Err(Error::Config(format!("runs = {} out of range", self.runs)));
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.snapshots.is_empty() {
            return Err(Error::Empty("snapshots"));
        }
        if let Some(&t) = self
            .snapshots
            .iter()
            .find(|&&t| t == 0 || t > self.horizon)
        {
            return Err(Error::Config(format!(
                "snapshot t = {t} outside [1, {}]",
                self.horizon
            )));
        }
        if !self.initial_wealth.is_finite() {
            return Err(Error::domain("initial_wealth", self.initial_wealth, "finite reals"));
        }
        if self.quad_nodes == 0 {
            return Err(Error::domain("quad_nodes", 0.0, "n >= 1"));
        }
        if let Some(o) = self.calibration_override {
            GambleEnv::new(self.gamma_list[0], o.mu, self.sigma, o.c)?;
        }
        Ok(())
    }

    fn snapshot_times(&self) -> Vec<usize> {
        let mut s = self.snapshots.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    fn eta_range(&self) -> (TransformParam, TransformParam) {
        let lo = self
            .eta_list
            .iter()
            .copied()
            .fold(self.eta_list[0], |a, b| if b < a { b } else { a });
        let hi = self
            .eta_list
            .iter()
            .copied()
            .fold(self.eta_list[0], |a, b| if b > a { b } else { a });
        (lo, hi)
    }
}

/// One decision of one agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub t: usize,
    pub wealth_before: f64,
    pub lambda: f64,
    pub choice: Choice,
    pub payoff_applied: f64,
}

/// Where the `(mu, c)` of a dynamics came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CalibrationSource {
    Calibrated { iterations: usize },
    /// Multiplicative dynamics reuse the parameters of another gamma.
    Reused { from_gamma: f64 },
    Override,
}

/// Resolved gamble parameters for one dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedCalibration {
    pub gamma: f64,
    pub mu: f64,
    pub c: f64,
    pub source: CalibrationSource,
}

/// Wealth of one agent at one snapshot across all runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub eta: TransformParam,
    pub t: usize,
    /// Indexed by run.
    pub by_run: Vec<f64>,
    /// The same samples in ascending order.
    pub sorted: Vec<f64>,
}

impl Cell {
    pub fn cdf(&self) -> EmpiricalCdf<'_> {
        EmpiricalCdf::from_sorted(&self.sorted).expect("cells hold at least one run")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsResult {
    pub gamma: TransformParam,
    pub env: GambleEnv,
    pub calibration: ResolvedCalibration,
    /// Ordered by snapshot time, then by position in `eta_list`.
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub config: ExperimentConfig,
    pub dynamics: Vec<DynamicsResult>,
}

impl EnsembleResult {
    pub fn dynamics(&self, gamma: f64) -> Option<&DynamicsResult> {
        self.dynamics.iter().find(|d| d.gamma.value() == gamma)
    }

    pub fn cell(&self, gamma: f64, eta: f64, t: usize) -> Option<&Cell> {
        self.dynamics(gamma)?
            .cells
            .iter()
            .find(|c| c.eta.value() == eta && c.t == t)
    }
}

/// Resolves `(mu, c)` for every gamma of the config: calibrated against the
/// extreme etas, except gamma = 1 which reuses the gamma = 0.75 parameters.
pub fn resolve_calibrations(config: &ExperimentConfig) -> Result<Vec<ResolvedCalibration>> {
    let (eta_p, eta_q) = config.eta_range();
    let opts = CalibrationOptions {
        quad_nodes: config.quad_nodes,
        ..Default::default()
    };
    let run = |gamma: TransformParam| -> Result<(f64, f64, usize)> {
        let r = calibrate_with(gamma, eta_p, eta_q, config.sigma, &opts)?;
        if !r.converged {
            return Err(Error::Calibration(format!(
                "no convergence for gamma = {gamma} after {} iterations (c = {})",
                r.iterations, r.c
            )));
        }
        Ok((r.mu, r.c, r.iterations))
    };
    config
        .gamma_list
        .iter()
        .map(|&gamma| {
            let g = gamma.value();
            if let Some(o) = config.calibration_override {
                return Ok(ResolvedCalibration {
                    gamma: g,
                    mu: o.mu,
                    c: o.c,
                    source: CalibrationSource::Override,
                });
            }
            if g == 1.0 {
                let (mu, c, _) = run(TransformParam::unit(0.75)?)?;
                return Ok(ResolvedCalibration {
                    gamma: g,
                    mu,
                    c,
                    source: CalibrationSource::Reused { from_gamma: 0.75 },
                });
            }
            let (mu, c, iterations) = run(gamma)?;
            Ok(ResolvedCalibration {
                gamma: g,
                mu,
                c,
                source: CalibrationSource::Calibrated { iterations },
            })
        })
        .collect()
}

/// Random source of one run.
pub struct RunStreams {
    shared: ChaCha8Rng,
    private: Option<Vec<ChaCha8Rng>>,
}

impl RunStreams {
    pub fn new(master_seed: u64, run_index: u64, agents: usize, share_risky_draws: bool) -> Self {
        let stream = |k: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
            rng.set_stream((run_index << STREAM_BITS) | k);
            rng
        };
        RunStreams {
            shared: stream(0),
            private: (!share_risky_draws).then(|| (1..=agents as u64).map(stream).collect()),
        }
    }

    /// Standard uniform and standard normal draws for the next step.
    fn next_step(&mut self) -> (f64, f64) {
        let u: f64 = self.shared.random();
        let z: f64 = self.shared.sample(StandardNormal);
        (u, z)
    }

    fn private_normal(&mut self, agent: usize) -> Option<f64> {
        self.private
            .as_mut()
            .map(|streams| streams[agent].sample(StandardNormal))
    }
}

/// Agents facing one gamble environment, with their decision rules.
#[derive(Debug, Clone)]
pub struct Panel {
    env: GambleEnv,
    agents: Vec<Agent>,
    deciders: Vec<Decider>,
}

impl Panel {
    /// Every decision evaluates the expected utility directly.
    pub fn exact(env: GambleEnv, agents: Vec<Agent>) -> Self {
        let deciders = agents.iter().map(|_| Decider::Exact).collect();
        Panel {
            env,
            agents,
            deciders,
        }
    }

    /// Tabulates thresholds over transformed wealth within `s_radius` of the
    /// start. Decisions are identical to [`Panel::exact`].
    pub fn tabulated(
        env: GambleEnv,
        agents: Vec<Agent>,
        initial_wealth: f64,
        s_radius: f64,
    ) -> Result<Self> {
        let s0 = yj_forward(initial_wealth, env.gamma());
        let deciders = agents
            .iter()
            .map(|a| Decider::for_agent(a, &env, true, s0, s_radius))
            .collect::<Result<_>>()?;
        Ok(Panel {
            env,
            agents,
            deciders,
        })
    }

    /// Picks tabulation when the experiment is large enough to benefit.
    pub fn for_experiment(
        env: GambleEnv,
        agents: Vec<Agent>,
        initial_wealth: f64,
        horizon: usize,
        runs: u64,
    ) -> Result<Self> {
        let decisions = runs
            .saturating_mul(horizon as u64)
            .saturating_mul(agents.len() as u64);
        if decisions < TABULATE_MIN_DECISIONS {
            return Ok(Panel::exact(env, agents));
        }
        // a random walk with step sd sigma rarely leaves 10 sd of its start
        let radius = 10.0 * env.sigma() * (horizon as f64).sqrt() + 1.0;
        Panel::tabulated(env, agents, initial_wealth, radius)
    }

    pub fn env(&self) -> &GambleEnv {
        &self.env
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }
}

/// Plays one run of `horizon` steps for a panel of agents, reporting every
/// decision to `observe(agent_index, record, wealth_after)`.
pub fn play_run(
    panel: &Panel,
    horizon: usize,
    initial_wealth: f64,
    streams: &mut RunStreams,
    mut observe: impl FnMut(usize, &DecisionRecord, f64) -> Result<()>,
) -> Result<Vec<f64>> {
    let env = &panel.env;
    let gamma = env.gamma();
    let mut wealth = vec![initial_wealth; panel.agents.len()];
    for t in 0..horizon {
        let (u, z) = streams.next_step();
        let lambda = env.safe_payoff_from_uniform(u);
        let shared_risky = env.risky_payoff_from_normal(z);
        for (i, (agent, decider)) in panel.agents.iter().zip(&panel.deciders).enumerate() {
            let risky = match streams.private_normal(i) {
                Some(zi) => env.risky_payoff_from_normal(zi),
                None => shared_risky,
            };
            let before = wealth[i];
            let choice = decider.decide(before, lambda, agent, env)?;
            let payoff = match choice {
                Choice::Safe => lambda,
                Choice::Risky => risky,
            };
            let after = apply_increment(before, payoff, gamma);
            wealth[i] = after;
            let record = DecisionRecord {
                t,
                wealth_before: before,
                lambda,
                choice,
                payoff_applied: payoff,
            };
            observe(i, &record, after)?;
        }
    }
    Ok(wealth)
}

/// Full record of a single run: one trajectory and one decision log per agent.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub trajectories: Vec<Trajectory>,
    pub decisions: Vec<Vec<DecisionRecord>>,
}

/// Replays run `run_index` of an experiment with full logging.
pub fn simulate_run(
    panel: &Panel,
    horizon: usize,
    initial_wealth: f64,
    master_seed: u64,
    run_index: u64,
    share_risky_draws: bool,
) -> Result<RunLog> {
    let n = panel.agents.len();
    let mut streams = RunStreams::new(master_seed, run_index, n, share_risky_draws);
    let gamma = panel.env.gamma();
    let mut trajectories: Vec<Trajectory> =
        (0..n).map(|_| Trajectory::new(gamma, initial_wealth)).collect();
    let mut decisions: Vec<Vec<DecisionRecord>> = vec![Vec::with_capacity(horizon); n];
    play_run(panel, horizon, initial_wealth, &mut streams, |i, rec, _| {
        trajectories[i].push_increment(rec.payoff_applied);
        decisions[i].push(*rec);
        Ok(())
    })?;
    Ok(RunLog {
        trajectories,
        decisions,
    })
}

/// Runs the experiment on the current rayon pool.
pub fn run_ensemble(config: &ExperimentConfig) -> Result<EnsembleResult> {
    config.validate()?;
    let calibrations = resolve_calibrations(config)?;
    let snapshots = config.snapshot_times();
    let agents: Vec<Agent> = config
        .eta_list
        .iter()
        .map(|&eta| Agent::new(AgentSpec::new(eta, config.quad_nodes)?))
        .collect::<Result<_>>()?;
    let n_agents = agents.len();

    let mut dynamics = Vec::with_capacity(config.gamma_list.len());
    for (&gamma, calibration) in config.gamma_list.iter().zip(calibrations) {
        let env = GambleEnv::new(gamma, calibration.mu, config.sigma, calibration.c)?;
        let panel = Panel::for_experiment(
            env,
            agents.clone(),
            config.initial_wealth,
            config.horizon,
            config.runs,
        )?;
        // per run: snapshot-major matrix of wealth
        let per_run: Vec<Vec<f64>> = (0..config.runs)
            .into_par_iter()
            .map(|run| {
                let mut streams =
                    RunStreams::new(config.master_seed, run, n_agents, config.share_risky_draws);
                let mut out = vec![0.0; snapshots.len() * n_agents];
                play_run(
                    &panel,
                    config.horizon,
                    config.initial_wealth,
                    &mut streams,
                    |i, rec, after| {
                        let t = rec.t + 1;
                        if !after.is_finite() {
                            return Err(Error::NonFiniteWealth {
                                gamma: gamma.value(),
                                eta: agents[i].eta().value(),
                                run,
                                t,
                            });
                        }
                        if let Ok(k) = snapshots.binary_search(&t) {
                            out[k * n_agents + i] = after;
                        }
                        Ok(())
                    },
                )?;
                Ok(out)
            })
            .collect::<Result<_>>()?;

        let mut cells = Vec::with_capacity(snapshots.len() * n_agents);
        for (k, &t) in snapshots.iter().enumerate() {
            for (i, agent) in agents.iter().enumerate() {
                let by_run: Vec<f64> = per_run.iter().map(|row| row[k * n_agents + i]).collect();
                let mut sorted = by_run.clone();
                sorted.sort_by(f64::total_cmp);
                cells.push(Cell {
                    eta: agent.eta(),
                    t,
                    by_run,
                    sorted,
                });
            }
        }
        dynamics.push(DynamicsResult {
            gamma,
            env,
            calibration,
            cells,
        });
    }
    Ok(EnsembleResult {
        config: config.clone(),
        dynamics,
    })
}

/// Runs the experiment on a dedicated pool of `threads` workers (all
/// available cores when `None`). The result does not depend on `threads`.
pub fn run_ensemble_with_threads(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<EnsembleResult> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_ensemble(config))
}
