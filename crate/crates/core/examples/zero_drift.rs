//! The calibrated gamble gives the growth-rate maximizer zero growth.
//!
//! Follows the `eta = gamma` agent through 300 steps in many runs and reports
//! the ensemble mean of its realized growth rate with its standard error.
//!
//! ```text
//! cargo run --release --example zero_drift -- [runs] [gamma]
//! ```

use riskpref::calibration::calibrate;
use riskpref::simulation::{simulate_run, Panel};
use riskpref::{realized_growth_rate, Agent, TransformParam};

fn main() -> riskpref::Result<()> {
    let mut args = std::env::args().skip(1);
    let runs: u64 = args.next().map_or(10_000, |a| a.parse().expect("runs"));
    let gamma = TransformParam::new(args.next().map_or(0.5, |a| a.parse().expect("gamma")))?;
    let cal = calibrate(gamma, TransformParam::ADDITIVE, TransformParam::MULTIPLICATIVE, 2.0)?;
    let env = cal.env(gamma, 2.0)?;
    let panel = Panel::exact(env, vec![Agent::with_eta(gamma)?]);

    let mut rates = Vec::with_capacity(runs as usize);
    for run in 0..runs {
        let log = simulate_run(&panel, 300, 0.0, 11, run, true)?;
        rates.push(realized_growth_rate(&log.trajectories[0])?);
    }
    let n = rates.len() as f64;
    let mean = rates.iter().sum::<f64>() / n;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    println!("gamma = {gamma}: mu = {:.5}, c = {:.5}", cal.mu, cal.c);
    println!("mean growth rate over {runs} runs: {mean:.3e} (se {se:.3e}, {:.2} se from 0)", mean / se);
    Ok(())
}
