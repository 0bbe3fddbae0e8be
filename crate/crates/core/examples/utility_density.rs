//! Distribution of next-step utility under the risky option.
//!
//! Tabulates the density of `Psi_eta(X_{t+1})` and checks it against the
//! quadrature expectation: the density integrates to one and its mean is
//! `Psi_eta(x)` plus the expected utility change.
//!
//! ```text
//! cargo run --release --example utility_density -- [x] [eta] [gamma]
//! ```

use riskpref::agent::{risky_expected_utility_change, utility_pdf};
use riskpref::quadrature::gauss_legendre_rule;
use riskpref::{reexpress, yj_forward, Agent, GambleEnv, TransformParam};

fn main() -> riskpref::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("number"));
    let x = args.next().unwrap_or(2.0);
    let eta = TransformParam::new(args.next().unwrap_or(0.0))?;
    let gamma = TransformParam::new(args.next().unwrap_or(0.5))?;
    let env = GambleEnv::new(gamma, -0.154, 2.0, 0.154)?;
    let agent = Agent::with_eta(eta)?;

    // the density lives on the image of mu +/- 10 sigma
    let s0 = yj_forward(x, gamma);
    let edge = |w: f64| reexpress(s0 + w, gamma, eta);
    let (lo, hi) = (edge(env.mu() - 10.0 * env.sigma()), edge(env.mu() + 10.0 * env.sigma()));
    let (show_lo, show_hi) = (edge(env.mu() - 3.0 * env.sigma()), edge(env.mu() + 3.0 * env.sigma()));

    println!("x = {x}, eta = {eta}, gamma = {gamma}\n");
    for k in 0..=24 {
        let y = show_lo + (show_hi - show_lo) * k as f64 / 24.0;
        let density = utility_pdf(y, x, &agent, &env);
        let bar = "#".repeat((density * 400.0).round() as usize);
        println!("{y:>9.3} {density:>9.5} {bar}");
    }

    // composite Gauss-Legendre over 400 panels
    let rule = gauss_legendre_rule(16)?;
    let panels = 400;
    let width = (hi - lo) / panels as f64;
    let (mut mass, mut mean) = (0.0, 0.0);
    for i in 0..panels {
        let a = lo + width * i as f64;
        let half = 0.5 * width;
        mass += half * rule.integrate(|t| utility_pdf(a + half * (t + 1.0), x, &agent, &env));
        mean += half
            * rule.integrate(|t| {
                let y = a + half * (t + 1.0);
                y * utility_pdf(y, x, &agent, &env)
            });
    }
    let expected = yj_forward(x, eta) + risky_expected_utility_change(x, &agent, &env)?;
    println!("\nmass = {mass:.10}");
    println!("mean = {mean:.10}, quadrature = {expected:.10}");
    Ok(())
}
