//! Brute-force checks of the closed forms: an exhaustive reporting game and
//! Monte Carlo payoffs on reproducible counter-keyed streams.

use screenlab::distribution::TypeDistribution;
use screenlab::model::{Equilibrium, ModelParams, SignalNoise};
use screenlab::sim::{best_response_check, simulate_rents, simulate_value, SimConfig};
use screenlab::valuation::firm_value;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eq = Equilibrium::solve(ModelParams::new(0.24, 0.24)?, SignalNoise::symmetric(0.25)?);
    let dist = TypeDistribution::Uniform;

    let game = best_response_check(&eq, SimConfig::new(512, 512, 1, 0)?)?;
    println!("largest gain from misreporting: {:.3e}", game.ic_violation);

    let rents = simulate_rents(&eq, &dist, SimConfig::new(9, 2, 100_000, 42)?)?;
    println!("\ntheta  simulated rent      closed form");
    for ((t, m), se) in rents
        .theta
        .iter()
        .zip(&rents.empirical_rent)
        .zip(&rents.std_errors.rent)
    {
        println!("{t:.1}    {m:.5} +- {se:.5}   {:.5}", eq.rent(*t)?);
    }

    let value = simulate_value(&eq, &dist, SimConfig::new(2, 2, 200_000, 7)?)?;
    println!(
        "\nfirm value: simulated {:.5} +- {:.5}, quadrature {:.5}",
        value.empirical_value.unwrap_or(f64::NAN),
        value.std_errors.value.unwrap_or(f64::NAN),
        firm_value(&eq, &dist)?
    );
    Ok(())
}
