//! Agents become indistinguishable as wealth grows, unless dynamics are
//! multiplicative.
//!
//! Prints indifference thresholds `lambda_T(x)` of the most and least
//! risk-averse agents, the relative weight of the variance term of the
//! expected utility change, and the chance that the two agents disagree.
//!
//! ```text
//! cargo run --release --example decision_convergence
//! ```

use riskpref::calibration::calibrate;
use riskpref::convergence::{disagreement_probability, lambda_t_curve, taylor_ratio};
use riskpref::{Agent, TransformParam};

fn main() -> riskpref::Result<()> {
    let (eta_p, eta_q) = (TransformParam::ADDITIVE, TransformParam::MULTIPLICATIVE);
    let low = Agent::with_eta(eta_p)?;
    let high = Agent::with_eta(eta_q)?;
    let grid = [0.0, 10.0, 100.0, 1e3, 1e4, 1e5];

    for g in [0.0, 0.5, 0.75, 1.0] {
        let gamma = TransformParam::new(g)?;
        // multiplicative dynamics use the gamma = 0.75 gamble
        let cal_gamma = if g == 1.0 { TransformParam::new(0.75)? } else { gamma };
        let env = calibrate(cal_gamma, eta_p, eta_q, 2.0)?.env(gamma, 2.0)?;
        let a = lambda_t_curve(&grid, &low, &env)?;
        let b = lambda_t_curve(&grid, &high, &env)?;
        println!("gamma = {g} (mu = {:.5})", env.mu());
        println!(
            "  {:>8} {:>12} {:>12} {:>12} {:>12}",
            "wealth", "lambda_T(0)", "lambda_T(1)", "W''/W'(1)", "P(disagree)"
        );
        for (i, &x) in grid.iter().enumerate() {
            println!(
                "  {x:>8} {:>12.6} {:>12.6} {:>12.3e} {:>12.6}",
                a.lambda_t[i],
                b.lambda_t[i],
                taylor_ratio(x, eta_q, gamma),
                disagreement_probability(x, &low, &high, &env)?
            );
        }
        println!();
    }
    Ok(())
}
