//! Informative gambles for every dynamics.
//!
//! For each `gamma`, solves for the `(mu, c)` at which the growth-rate
//! maximizer has zero growth and the thresholds of the most and least
//! risk-averse agents at zero wealth sit at the edges of the safe range.
//!
//! ```text
//! cargo run --release --example calibrate -- [sigma]
//! ```

use std::time::Instant;

use riskpref::calibration::calibrate;
use riskpref::TransformParam;

fn main() -> riskpref::Result<()> {
    let sigma: f64 = std::env::args().nth(1).map_or(2.0, |a| a.parse().expect("sigma"));
    let (eta_p, eta_q) = (TransformParam::ADDITIVE, TransformParam::MULTIPLICATIVE);
    println!("sigma = {sigma}, agents eta in [{eta_p}, {eta_q}]\n");
    println!(
        "{:>6} {:>10} {:>10} {:>6} {:>10} {:>10} {:>9}",
        "gamma", "mu", "c", "iters", "lambda_p", "lambda_q", "time"
    );
    for g in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let gamma = TransformParam::new(g)?;
        let start = Instant::now();
        let r = calibrate(gamma, eta_p, eta_q, sigma)?;
        println!(
            "{:>6} {:>10.5} {:>10.5} {:>6} {:>10.5} {:>10.5} {:>9.1?}{}",
            g,
            r.mu,
            r.c,
            r.iterations,
            r.lambda_p,
            r.lambda_q,
            start.elapsed(),
            if r.converged { "" } else { "  (not converged)" }
        );
    }

    let r = calibrate(TransformParam::new(0.5)?, eta_p, eta_q, sigma)?;
    println!("\nfixed-point iterates for gamma = 0.5:");
    for (k, (mu, c)) in r.iterates.iter().enumerate() {
        println!("  {k:>2}: c = {c:.8}, mu = {mu:.8}");
    }
    Ok(())
}
