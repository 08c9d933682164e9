//! Choosing how much information to produce when precision costs `zeta/q`.

use screenlab::design::{optimize_quality, DesignProblem};
use screenlab::distribution::TypeDistribution;
use screenlab::model::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::new(0.15, 0.15)?;
    let cases = [
        ("beta:3,1", 0.01),
        ("beta:3,1", 0.005),
        ("beta:3,1", 0.001),
        ("beta:3,1", 0.0001),
        ("beta:0.5,1", 0.005),
        ("uniform", 0.001),
    ];
    println!("prior        zeta     q*       net value  corner");
    for (dist, zeta) in cases {
        let problem = DesignProblem::new(params, dist.parse::<TypeDistribution>()?, zeta)?;
        let r = optimize_quality(&problem)?;
        println!(
            "{dist:<12} {zeta:<8} {:.5}  {:.6}   {}",
            r.q_star, r.net_value, r.is_corner
        );
    }
    Ok(())
}
