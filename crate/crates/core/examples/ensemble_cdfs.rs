//! Wealth distributions of five agents under five dynamics.
//!
//! Runs the reference experiment (shared gamble streams, zero initial
//! wealth, snapshots at t = 30 and t = 300), prints lower tail, median and
//! upper tail of every agent, and counts how many agent pairs have crossing
//! CDFs at each snapshot.
//!
//! ```text
//! cargo run --release --example ensemble_cdfs -- [runs] [out_dir]
//! ```
//!
//! With `out_dir` the snapshot CSVs (`run_id, eta, wealth`) are written too.

use std::path::PathBuf;
use std::time::Instant;

use riskpref::io::{cdf_file_name, write_cdf_csv};
use riskpref::simulation::{count_crossing_pairs, run_ensemble, ExperimentConfig};

fn main() -> riskpref::Result<()> {
    let mut args = std::env::args().skip(1);
    let runs = args.next().map_or(10_000, |a| a.parse().expect("runs"));
    let out_dir = args.next().map(PathBuf::from);

    let config = ExperimentConfig {
        runs,
        master_seed: 2024,
        ..Default::default()
    };
    let start = Instant::now();
    let result = run_ensemble(&config)?;
    println!("{runs} runs x {} steps in {:.1?}\n", config.horizon, start.elapsed());

    for d in &result.dynamics {
        let cal = d.calibration;
        println!("gamma = {}  (mu = {:.5}, c = {:.5})", d.gamma, cal.mu, cal.c);
        for &t in &config.snapshots {
            let cells: Vec<_> = d.cells.iter().filter(|c| c.t == t).collect();
            let cdfs: Vec<_> = cells.iter().map(|c| c.cdf()).collect();
            println!("  t = {t:>3}   crossing pairs: {}", count_crossing_pairs(&cdfs, 0.05)?);
            for (cell, cdf) in cells.iter().zip(&cdfs) {
                let marker = if cell.eta == d.gamma { "*" } else { " " };
                println!(
                    "   {marker}eta = {:<4}  p05 = {:>12.4}  median = {:>12.4}  p95 = {:>12.4}",
                    cell.eta.value(),
                    cdf.quantile(0.05)?,
                    cdf.quantile(0.5)?,
                    cdf.quantile(0.95)?
                );
            }
            if let Some(dir) = &out_dir {
                write_cdf_csv(&dir.join(cdf_file_name(d.gamma.value(), t)), d, t)?;
            }
        }
        println!();
    }
    println!("* growth-rate maximizer");
    Ok(())
}
