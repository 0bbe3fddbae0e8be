//! Repeated gambles under Yeo-Johnson wealth dynamics.
//!
//! An agent repeatedly chooses between a safe payoff, revealed before the
//! decision, and a normally distributed risky payoff. Both payoffs are added
//! to the transformed wealth `Psi_gamma(x)`, so `gamma` interpolates between
//! additive (`gamma = 0`) and asymptotically multiplicative (`gamma = 1`)
//! dynamics. The agent maximizes expected utility `Psi_eta`; the agent with
//! `eta = gamma` maximizes the growth rate.
//!
//! - [`transform`]: the transform family, its inverse and derivatives.
//! - [`dynamics`]: the gamble environment, payoff sampling and trajectories.
//! - [`agent`]: expected utility changes and decisions.
//! - [`calibration`]: indifference thresholds and the `(mu, c)` fixed point.
//! - [`convergence`]: how quickly different agents become indistinguishable.
//! - [`simulation`]: seeded, parallel ensembles, empirical CDFs and inference.
//! - [`io`]: CSV and TOML formats; [`cli`]: the `riskpref` command.
//!
//! ```
//! use riskpref::{calibrate, TransformParam};
//!
//! let half = TransformParam::new(0.5)?;
//! let r = calibrate(half, TransformParam::ADDITIVE, TransformParam::MULTIPLICATIVE, 2.0)?;
//! assert!(r.converged);
//! assert!((r.mu + r.c).abs() < 1e-12);
//! # Ok::<(), riskpref::Error>(())
//! ```

pub mod agent;
pub mod calibration;
pub mod cli;
pub mod convergence;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod quadrature;
pub mod simulation;
pub mod transform;

pub use agent::{decide, risky_expected_utility_change, safe_utility_change, Agent, AgentSpec, Choice};
pub use calibration::{calibrate, calibrate_with, indifference_lambda, CalibrationOptions, CalibrationResult};
pub use convergence::{lambda_t_curve, taylor_ratio, worked_example_threshold, ConvergenceCurve};
pub use dynamics::{apply_increment, realized_growth_rate, GambleEnv, Trajectory};
pub use error::{Error, Result};
pub use simulation::{
    empirical_cdf, infer_eta, run_ensemble, DecisionRecord, EnsembleResult, ExperimentConfig,
};
pub use transform::{reexpress, yj_derivative, yj_forward, yj_inverse, TransformParam};
