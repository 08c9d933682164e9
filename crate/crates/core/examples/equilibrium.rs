//! Solve the screening contract and print the rent curve by zone.
//!
//! `cargo run --example equilibrium -- 0.24 0.24 0.25 0.25`

use screenlab::model::{posterior_success, Equilibrium, ModelParams, Signal, SignalNoise};

fn arg(i: usize, default: f64) -> f64 {
    std::env::args()
        .nth(i)
        .and_then(|s| s.parse().ok())
        .unwrap_or(default)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::new(arg(1, 0.24), arg(2, 0.24))?;
    let noise = SignalNoise::new(arg(3, 0.25), arg(4, 0.25))?;
    let eq = Equilibrium::solve(params, noise);

    println!("success wage w*   {:.6}", eq.w_star);
    println!("pool cutoff       {:.6}", eq.theta1);
    println!("always-invest     {:.6}", eq.theta0);
    println!("with commitment   {:.6}", eq.theta_commit());

    println!("\ntheta   p(good)  p(bad)   zone           rent");
    for i in 1..10 {
        let t = i as f64 / 10.0;
        println!(
            "{t:.1}     {:.4}   {:.4}   {:<14} {:.4}",
            posterior_success(t, noise, Signal::Good)?,
            posterior_success(t, noise, Signal::Bad)?,
            format!("{:?}", eq.zone(t)?),
            eq.rent(t)?
        );
    }
    Ok(())
}
