//! How the pool cutoff moves with average noise and with a tilt toward
//! bad signals.

use screenlab::fd::{conservatism_sensitivities_fd, FD_STEP};
use screenlab::model::{
    boundaries_conservatism, conservatism_sensitivities, theta1_gradient, ConservatismCoords,
    ModelParams, SignalNoise,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::new(0.24, 0.24)?;

    println!("q     lambda  cutoff    d/dq      d/dlambda  (fd d/dq, fd d/dlambda)");
    for q in [0.1_f64, 0.25, 0.4] {
        for frac in [0.0, 0.5, 0.9] {
            let lambda = frac * q.min(0.5 - q);
            let coords = ConservatismCoords::new(q, lambda)?;
            let (cutoff, _) = boundaries_conservatism(params, coords);
            let (dq, dl) = conservatism_sensitivities(params, coords);
            let (fq, fl) = conservatism_sensitivities_fd(params, coords, FD_STEP);
            println!(
                "{q:.2}  {lambda:.3}   {cutoff:.5}  {dq:+.5}  {dl:+.5}   ({fq:+.5}, {fl:+.5})"
            );
        }
    }

    let (g1, g0) = theta1_gradient(params, SignalNoise::new(0.2, 0.3)?);
    println!("\ncutoff gradient at (0.2, 0.3): ({g1:.5}, {g0:.5})");
    Ok(())
}
