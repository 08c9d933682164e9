//! Firm value along the symmetric noise diagonal, with the gradient split
//! into its screening and profit channels.

use screenlab::distribution::TypeDistribution;
use screenlab::model::{Equilibrium, ModelParams, SignalNoise};
use screenlab::valuation::{find_kstar, firm_value, uniform_endpoint_value, value_gradient};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::new(0.24, 0.24)?;
    for dist in [TypeDistribution::Uniform, TypeDistribution::beta(3.0, 1.0)?] {
        println!("{dist:?}");
        println!("  q      V         dV/dq1     dV/dq0     screening(q1)  profit(q1)");
        for q in [0.01, 0.05, 0.15, 0.25, 0.35, 0.45, 0.5] {
            let eq = Equilibrium::solve(params, SignalNoise::symmetric(q)?);
            let r = value_gradient(&eq, &dist)?;
            println!(
                "  {q:.2}   {:.6}  {:+.6}  {:+.6}  {:+.6}      {:+.6}",
                firm_value(&eq, &dist)?,
                r.grad_q1,
                r.grad_q0,
                r.screening_term[0],
                r.profit_term[0]
            );
        }
    }
    println!(
        "\nuniform value at either noise corner: {:.6}",
        uniform_endpoint_value(params)
    );
    println!(
        "cost k that maximises it for c = 0.24: {:.6}",
        find_kstar(0.24)?
    );
    Ok(())
}
