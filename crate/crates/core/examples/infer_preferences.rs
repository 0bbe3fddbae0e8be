//! Recovering an agent's utility parameter from its choices.
//!
//! Simulates one agent per `eta` for 300 steps under the calibrated
//! `gamma = 0.5` gamble, then fits `eta` to each decision log by counting the
//! choices every candidate would have made differently.
//!
//! ```text
//! cargo run --release --example infer_preferences -- [seed]
//! ```

use riskpref::calibration::calibrate;
use riskpref::simulation::{infer_eta, simulate_run, Panel};
use riskpref::{Agent, TransformParam};

fn main() -> riskpref::Result<()> {
    let seed: u64 = std::env::args().nth(1).map_or(7, |a| a.parse().expect("seed"));
    let grid: Vec<TransformParam> = [0.0, 0.25, 0.5, 0.75, 1.0]
        .into_iter()
        .map(TransformParam::new)
        .collect::<Result<_, _>>()?;
    let gamma = TransformParam::new(0.5)?;
    let env = calibrate(gamma, grid[0], grid[4], 2.0)?.env(gamma, 2.0)?;
    let agents = grid.iter().map(|&e| Agent::with_eta(e)).collect::<Result<Vec<_>, _>>()?;
    let panel = Panel::exact(env, agents);

    println!("{:>6} {:>8} {:>11} {:>10}   mismatches per candidate", "eta", "eta_hat", "mismatches", "ambiguous");
    for run in 0..3 {
        let log = simulate_run(&panel, 300, 0.0, seed, run, true)?;
        for (eta, records) in grid.iter().zip(&log.decisions) {
            let fit = infer_eta(records, &env, &grid)?;
            let counts: Vec<String> = fit.mismatch_counts.iter().map(|(_, n)| n.to_string()).collect();
            println!(
                "{:>6} {:>8} {:>11} {:>10}   [{}]",
                eta.value(),
                fit.eta_hat.value(),
                fit.mismatches,
                fit.ambiguous,
                counts.join(", ")
            );
        }
        println!();
    }
    Ok(())
}
