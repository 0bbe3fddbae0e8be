//! Two fair coins: a certain payoff `x`, or 10 / 100 with equal odds.
//!
//! A growth-rate maximizer under additive dynamics takes the coin iff
//! `x < 55`. A log-utility agent with wealth `X` takes it iff
//! `x < sqrt((X + 55)^2 - 2025) - X`, a threshold that climbs to 55 as `X`
//! grows: with enough wealth the two agents act alike.
//!
//! ```text
//! cargo run --example worked_example
//! ```

use riskpref::convergence::worked_example_threshold;

fn main() -> riskpref::Result<()> {
    println!("{:>10} {:>14} {:>12}", "wealth X", "threshold x*", "55 - x*");
    for wealth in [1.0, 10.0, 45.0, 100.0, 1e3, 1e4, 1e6, 1e9] {
        let t = worked_example_threshold(wealth)?;
        println!("{wealth:>10} {t:>14.9} {:>12.3e}", 55.0 - t);
    }

    // the log-utility agent is indifferent at the threshold
    let wealth = 45.0;
    let t = worked_example_threshold(wealth)?;
    let certain = (wealth + t).ln();
    let coin = 0.5 * ((wealth + 10.0).ln() + (wealth + 100.0).ln());
    println!("\nX = {wealth}: ln(X + x*) = {certain:.15}, E ln(X + coin) = {coin:.15}");
    Ok(())
}
