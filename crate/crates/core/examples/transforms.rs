//! The Yeo-Johnson family next to isoelastic utility.
//!
//! Prints `Psi_p(x)` for the five members used throughout, checks the
//! inverse and shows that for `x >= 0` the transform is isoelastic utility of
//! `x + 1`.
//!
//! ```text
//! cargo run --example transforms
//! ```

use riskpref::transform::{isoelastic, yj_derivative, yj_forward, yj_inverse, TransformParam};

fn main() -> riskpref::Result<()> {
    let params = [0.0, 0.25, 0.5, 0.75, 1.0].map(TransformParam::new);
    let xs = [-10.0, -1.0, -0.5, 0.0, 0.5, 1.0, 10.0, 100.0];

    print!("{:>8}", "x");
    for p in &params {
        print!("{:>12}", format!("p = {}", p.as_ref().unwrap()));
    }
    println!();
    for x in xs {
        print!("{x:>8}");
        for p in &params {
            print!("{:>12.5}", yj_forward(x, *p.as_ref().unwrap()));
        }
        println!();
    }

    let mut worst = 0.0f64;
    for p in &params {
        let p = *p.as_ref().unwrap();
        for x in xs {
            let back = yj_inverse(yj_forward(x, p), p);
            worst = worst.max((back - x).abs() / x.abs().max(1.0));
        }
    }
    println!("\nlargest relative round-trip error: {worst:.1e}");

    println!("\nfor x >= 0, Psi_p(x) equals the isoelastic utility of x + 1:");
    for p in [0.25, 1.0] {
        let p = TransformParam::new(p)?;
        let x = 3.0;
        println!(
            "  p = {p}: Psi = {:.12}, isoelastic(x + 1) = {:.12}, slope = {:.6}",
            yj_forward(x, p),
            isoelastic(x + 1.0, p)?,
            yj_derivative(x, p)
        );
    }
    Ok(())
}
