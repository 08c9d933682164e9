use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::TypeDistribution;
use crate::error::{invalid, Result, ScreenError};
use crate::model::{clamp_type, Equilibrium};
use crate::sim::game::{decisions, expected_payoffs, play_once};
use crate::sim::rng::{cell_rng, seek_trial};

/// Trials per cell in [`simulate_value`].
pub const VALUE_BLOCK: u64 = 4096;
/// Draws from the prior allowed per trial before the pool is declared empty.
pub const MAX_REJECTIONS: u32 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub theta_grid_n: usize,
    pub report_grid_n: usize,
    pub trials: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(theta_grid_n: usize, report_grid_n: usize, trials: u64, seed: u64) -> Result<Self> {
        let cfg = Self {
            theta_grid_n,
            report_grid_n,
            trials,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta_grid_n < 2 {
            return Err(invalid(format!(
                "theta_grid_n >= 2 violated ({})",
                self.theta_grid_n
            )));
        }
        if self.report_grid_n < 2 {
            return Err(invalid(format!(
                "report_grid_n >= 2 violated ({})",
                self.report_grid_n
            )));
        }
        if self.trials < 1 {
            return Err(invalid("trials >= 1 violated (0)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub rent: Vec<f64>,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub theta: Vec<f64>,
    pub empirical_rent: Vec<f64>,
    pub best_report: Vec<f64>,
    pub ic_violation: f64,
    /// Largest rent jump between neighbouring grid types.
    pub ic_grid_bound: f64,
    pub empirical_value: Option<f64>,
    pub std_errors: StdErrors,
    /// Accepted managers behind `empirical_value`, or draws per rent bin.
    pub samples: u64,
}

/// Interior grid `(i + 1)/(n + 1)`, `i < n`.
pub fn type_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i + 1) as f64 / (n + 1) as f64).collect()
}

/// Even report grid plus the two zone boundaries, sorted.
pub fn report_grid(eq: &Equilibrium, n: usize) -> Vec<f64> {
    let mut grid = type_grid(n);
    grid.push(clamp_type(eq.theta1));
    grid.push(clamp_type(eq.theta0));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Exhaustive check of truthful reporting against every grid report, with
/// payoffs taken in expectation so the result is exact up to rounding.
pub fn best_response_check(eq: &Equilibrium, config: SimConfig) -> Result<SimOutcome> {
    config.validate()?;
    let types = type_grid(config.theta_grid_n);
    let reports = report_grid(eq, config.report_grid_n);
    let plays = reports
        .iter()
        .map(|&r| decisions(r, eq))
        .collect::<Result<Vec<_>>>()?;
    let mut rent = Vec::with_capacity(types.len());
    let mut best_report = Vec::with_capacity(types.len());
    let mut ic_violation = f64::NEG_INFINITY;
    for &theta in &types {
        let truthful = expected_payoffs(theta, decisions(theta, eq)?, eq).0;
        let mut best = (f64::NEG_INFINITY, theta);
        for (&r, &d) in reports.iter().zip(&plays) {
            let payoff = expected_payoffs(theta, d, eq).0;
            let closer = (r - theta).abs() < (best.1 - theta).abs();
            if payoff > best.0 || (payoff == best.0 && closer) {
                best = (payoff, r);
            }
        }
        ic_violation = ic_violation.max(best.0 - truthful);
        rent.push(truthful.max(best.0).max(0.0));
        best_report.push(best.1);
    }
    let ic_grid_bound = rent
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    Ok(SimOutcome {
        theta: types,
        std_errors: StdErrors {
            rent: vec![0.0; rent.len()],
            value: None,
        },
        empirical_rent: rent,
        best_report,
        ic_violation,
        ic_grid_bound,
        empirical_value: None,
        samples: 0,
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(self, other: Moments) -> Moments {
        Moments {
            n: self.n + other.n,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    // With fewer than two samples the spread is unknown; report the width
    // of the payoff range instead of zero.
    fn std_error(&self, range: f64) -> f64 {
        if self.n < 2 {
            return range;
        }
        let n = self.n as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Grid types for the rent simulation: the atoms of a discrete prior,
/// otherwise quantiles `F^{-1}((i + 1)/(n + 1))`.
fn rent_types(dist: &TypeDistribution, n: usize) -> Vec<f64> {
    match dist {
        TypeDistribution::Discrete { points } => points.iter().map(|p| p.0).collect(),
        _ => type_grid(n)
            .into_iter()
            .map(|u| clamp_type(dist.quantile(u)))
            .collect(),
    }
}

/// Monte Carlo rent per type bin. Each type reports truthfully and joins
/// only if its expected payoff is positive; declining pays zero.
pub fn simulate_rents(
    eq: &Equilibrium,
    dist: &TypeDistribution,
    config: SimConfig,
) -> Result<SimOutcome> {
    config.validate()?;
    let types = rent_types(dist, config.theta_grid_n);
    let bins = types
        .par_iter()
        .enumerate()
        .map(|(cell, &theta)| -> Result<Moments> {
            let mut m = Moments::default();
            let joins = expected_payoffs(theta, decisions(theta, eq)?, eq).0 > 0.0;
            let mut rng = cell_rng(config.seed, cell as u64);
            for trial in 0..config.trials {
                if joins {
                    seek_trial(&mut rng, trial);
                    m.push(play_once(theta, theta, eq, &mut rng)?.0);
                } else {
                    m.push(0.0);
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let range = eq.w_star;
    Ok(SimOutcome {
        empirical_rent: bins.iter().map(Moments::mean).collect(),
        std_errors: StdErrors {
            rent: bins.iter().map(|m| m.std_error(range)).collect(),
            value: None,
        },
        best_report: types.clone(),
        theta: types,
        ic_violation: 0.0,
        ic_grid_bound: 0.0,
        empirical_value: None,
        samples: config.trials,
    })
}

/// Monte Carlo firm value. Each trial draws managers from the prior by
/// inverse CDF until one with positive expected truthful payoff accepts,
/// then plays one round with that manager.
pub fn simulate_value(
    eq: &Equilibrium,
    dist: &TypeDistribution,
    config: SimConfig,
) -> Result<SimOutcome> {
    config.validate()?;
    let blocks = config.trials.div_ceil(VALUE_BLOCK);
    let parts = (0..blocks)
        .into_par_iter()
        .map(|block| -> Result<Moments> {
            let mut m = Moments::default();
            let mut rng = cell_rng(config.seed, block);
            let start = block * VALUE_BLOCK;
            let end = (start + VALUE_BLOCK).min(config.trials);
            for trial in start..end {
                seek_trial(&mut rng, trial);
                let theta = draw_pool_member(eq, dist, &mut rng)?;
                m.push(play_once(theta, theta, eq, &mut rng)?.1);
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    Ok(SimOutcome {
        theta: Vec::new(),
        empirical_rent: Vec::new(),
        best_report: Vec::new(),
        ic_violation: 0.0,
        ic_grid_bound: 0.0,
        empirical_value: Some(total.mean()),
        std_errors: StdErrors {
            rent: Vec::new(),
            value: Some(total.std_error(1.0)),
        },
        samples: total.n,
    })
}

fn draw_pool_member<R: rand::Rng + ?Sized>(
    eq: &Equilibrium,
    dist: &TypeDistribution,
    rng: &mut R,
) -> Result<f64> {
    for _ in 0..MAX_REJECTIONS {
        let theta = clamp_type(dist.quantile(rng.random::<f64>()));
        if expected_payoffs(theta, decisions(theta, eq)?, eq).0 > 0.0 {
            return Ok(theta);
        }
    }
    Err(ScreenError::EmptyPool {
        cdf_at_cutoff: dist.cdf(eq.theta1),
    })
}
