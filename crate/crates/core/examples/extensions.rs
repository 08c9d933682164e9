//! Hidden effort, outside options and non-uniform matching.

use screenlab::distribution::TypeDistribution;
use screenlab::extensions::{
    delta_bound, effort_ic_satisfied, mh_equilibrium, required_success_pay, theta_min,
    theta_min_linear_option, truthful_contract_with_upfront, OutsideOption,
};
use screenlab::model::{Equilibrium, ModelParams, SignalNoise};
use screenlab::valuation::{firm_value, firm_value_weighted, MatchingWeight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::new(0.24, 0.24)?;
    let noise = SignalNoise::symmetric(0.25)?;

    let (contract, eq) = mh_equilibrium(params, noise);
    println!(
        "hidden effort: b = {}, w = {}, effort ok = {}",
        contract.b,
        contract.w,
        effort_ic_satisfied(contract, &eq)
    );
    for b in [0.01, 0.05, 0.2] {
        let (c, eq) = truthful_contract_with_upfront(params, noise, b)?;
        println!(
            "  upfront {b:.2}: w = {:.4} < required {:.4}",
            c.w,
            required_success_pay(&eq)
        );
    }

    let caps = (0.25, 0.25);
    let bound = params.c() * delta_bound(params, caps)?;
    println!("\nconstant outside option, admissible below {bound:.6}");
    for r_min in [0.0, 0.02, 0.06, 0.12] {
        let t = theta_min(params, noise, OutsideOption::new(r_min, caps)?)?;
        println!("  R_min {r_min:.2}: lowest pool type {t:.6}");
    }

    println!("\noutside option rho * theta");
    for q in [0.2, 0.25, 0.3] {
        let eq = Equilibrium::solve(params, SignalNoise::symmetric(q)?);
        println!(
            "  q {q:.2}: lowest pool type {:.6}",
            theta_min_linear_option(&eq, 0.1)?
        );
    }

    let dist = TypeDistribution::Uniform;
    let plain = firm_value(&eq, &dist)?;
    let flat = firm_value_weighted(&eq, &dist, &MatchingWeight::constant())?;
    let tilted = firm_value_weighted(&eq, &dist, &MatchingWeight::new(|t| t))?;
    println!("\nvalue: plain {plain:.6}, constant weight {flat:.6}, weight theta {tilted:.6}");
    Ok(())
}
