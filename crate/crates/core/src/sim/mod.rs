//! Brute-force oracle for the closed forms: an exhaustive reporting game
//! and a Monte Carlo payoff simulation. Nothing here reads the rent or
//! value formulas; payoffs come from sampling or from the event table.

pub mod game;
pub mod monte_carlo;
pub mod rng;

pub use game::{play_once, Draw};
pub use monte_carlo::{
    best_response_check, report_grid, simulate_rents, simulate_value, type_grid, SimConfig,
    SimOutcome, StdErrors,
};
