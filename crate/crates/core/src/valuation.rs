//! Ex-ante firm value per matched manager, its gradient in the noise
//! rates, and the grid maps built from them.
//!
//! The value integrand is piecewise linear in the type with kinks at the zone
//! boundaries, so every integral is split at `theta1` and `theta0` before
//! quadrature.

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::TypeDistribution;
use crate::error::{invalid, Result, ScreenError};
use crate::fd::{bounded, Stencil};
use crate::model::{
    theta1_gradient, Equilibrium, InvestmentZone, ModelParams, SignalNoise, MIN_NOISE,
};

/// Pools with less mass than this are treated as empty.
pub const MIN_POOL_MASS: f64 = 1e-12;

/// Noise level standing in for the perfect-information limit.
pub const NEAR_PERFECT_NOISE: f64 = 1e-4;

/// Firm's expected profit from a type-`theta` manager placed in `zone`.
pub fn zone_profit(theta: f64, eq: &Equilibrium, zone: InvestmentZone) -> f64 {
    let k = eq.params.k();
    let margin = 1.0 - eq.w_star;
    match zone {
        InvestmentZone::NoInvestment => 0.0,
        InvestmentZone::Conditional => {
            theta * (1.0 - eq.noise.q1()) * (margin - k) - (1.0 - theta) * eq.noise.q0() * k
        }
        InvestmentZone::Unconditional => theta * margin - k,
    }
}

fn pool_mass(eq: &Equilibrium, dist: &TypeDistribution) -> Result<f64> {
    let below = dist.cdf(eq.theta1);
    if below >= 1.0 - MIN_POOL_MASS {
        return Err(ScreenError::EmptyPool {
            cdf_at_cutoff: below,
        });
    }
    Ok(1.0 - below)
}

/// Expected firm profit conditional on the matched manager being in the
/// pool `{theta > theta1}`.
pub fn firm_value(eq: &Equilibrium, dist: &TypeDistribution) -> Result<f64> {
    let mass = pool_mass(eq, dist)?;
    let cond = dist.expect(
        |t| zone_profit(t, eq, InvestmentZone::Conditional),
        eq.theta1,
        eq.theta0,
    );
    let uncond = dist.expect(
        |t| zone_profit(t, eq, InvestmentZone::Unconditional),
        eq.theta0,
        1.0,
    );
    Ok((cond + uncond) / mass)
}

/// Value at the two noise corners under a uniform prior,
/// `(k/2)(1 - k - c)/(k + c)`.
pub fn uniform_endpoint_value(params: ModelParams) -> f64 {
    let s = params.total_cost();
    0.5 * params.k() * (1.0 - s) / s
}

/// Firm value with its gradient split into the screening and the
/// investment-profit channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueReport {
    pub value: f64,
    pub grad_q1: f64,
    pub grad_q0: f64,
    /// `V f(theta1) / (1 - F(theta1)) * grad theta1`, componentwise.
    pub screening_term: [f64; 2],
    /// `E[grad v_c; conditional zone] / (1 - F(theta1))`, componentwise.
    pub profit_term: [f64; 2],
    /// Set when a noise rate sits at 1/2, where derivatives are one-sided.
    pub at_corner: bool,
}

/// Analytic gradient of [`firm_value`] in `(q1, q0)`.
///
/// The boundary terms at `theta1` and `theta0` cancel because
/// `v_c(theta1) = 0` and `v_c(theta0) = v_u(theta0)`. At a noise rate of
/// 1/2 the result is the inward one-sided derivative.
pub fn value_gradient(eq: &Equilibrium, dist: &TypeDistribution) -> Result<ValueReport> {
    let density = dist.density(eq.theta1)?;
    let mass = pool_mass(eq, dist)?;
    let value = firm_value(eq, dist)?;
    let (g1, g0) = theta1_gradient(eq.params, eq.noise);
    let hazard = density / mass;
    let screening_term = [value * hazard * g1, value * hazard * g0];

    let k = eq.params.k();
    let margin = 1.0 - eq.w_star - k;
    let d_q1 = dist.expect(|t| -t * margin, eq.theta1, eq.theta0);
    let d_q0 = dist.expect(|t| -(1.0 - t) * k, eq.theta1, eq.theta0);
    let profit_term = [d_q1 / mass, d_q0 / mass];

    Ok(ValueReport {
        value,
        grad_q1: screening_term[0] + profit_term[0],
        grad_q0: screening_term[1] + profit_term[1],
        screening_term,
        profit_term,
        at_corner: eq.noise.q1() == 0.5 || eq.noise.q0() == 0.5,
    })
}

/// Finite-difference gradient of [`firm_value`] with the stencils used.
/// Steps never leave `[MIN_NOISE, 1/2]`.
pub fn value_gradient_fd(
    eq: &Equilibrium,
    dist: &TypeDistribution,
    h: f64,
) -> Result<((f64, Stencil), (f64, Stencil))> {
    let params = eq.params;
    let (q1, q0) = (eq.noise.q1(), eq.noise.q0());
    let err = Cell::new(None);
    let v = |a: f64, b: f64| {
        let out =
            SignalNoise::new(a, b).and_then(|n| firm_value(&Equilibrium::solve(params, n), dist));
        out.unwrap_or_else(|e| {
            err.set(Some(e));
            f64::NAN
        })
    };
    let d1 = bounded(|x| v(x, q0), q1, h, MIN_NOISE, 0.5);
    let d0 = bounded(|x| v(q1, x), q0, h, MIN_NOISE, 0.5);
    match err.take() {
        Some(e) => Err(e),
        None => Ok((d1, d0)),
    }
}

/// One cell of a gradient sign map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignCell {
    pub q1: f64,
    pub q0: f64,
    pub dv_dq1: f64,
    pub dv_dq0: f64,
    pub sign1: i8,
    pub sign0: i8,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Noise levels `1/(2n), 2/(2n), ..., 1/2` used by the grid maps.
pub fn noise_lattice(grid_n: usize) -> Vec<f64> {
    (1..=grid_n)
        .map(|i| 0.5 * i as f64 / grid_n as f64)
        .collect()
}

/// Signs of `dV/dq1` and `dV/dq0` on a `grid_n x grid_n` lattice over
/// `(0, 1/2]^2`, row-major in `q1` then `q0`.
pub fn sign_map(
    params: ModelParams,
    dist: &TypeDistribution,
    grid_n: usize,
) -> Result<Vec<SignCell>> {
    if grid_n < 2 {
        return Err(invalid(format!("grid_n >= 2 violated (grid_n = {grid_n})")));
    }
    let qs = noise_lattice(grid_n);
    let cells: Vec<(f64, f64)> = qs
        .iter()
        .flat_map(|&a| qs.iter().map(move |&b| (a, b)))
        .collect();
    cells
        .par_iter()
        .map(|&(q1, q0)| {
            let eq = Equilibrium::solve(params, SignalNoise::new(q1, q0)?);
            let r = value_gradient(&eq, dist)?;
            Ok(SignCell {
                q1,
                q0,
                dv_dq1: r.grad_q1,
                dv_dq0: r.grad_q0,
                sign1: sign(r.grad_q1),
                sign0: sign(r.grad_q0),
            })
        })
        .collect()
}

/// Relative matching intensity over the pool. Only its shape matters: the
/// matched type has density proportional to `weight(theta) f(theta)` on the
/// pool, which normalises the matching density to one automatically.
#[derive(Clone)]
pub struct MatchingWeight {
    weight: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl MatchingWeight {
    pub fn new(weight: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            weight: Arc::new(weight),
        }
    }

    /// Equal matching probability across the pool.
    pub fn constant() -> Self {
        Self::new(|_| 1.0)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        (self.weight)(theta)
    }
}

impl fmt::Debug for MatchingWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MatchingWeight(..)")
    }
}

/// Firm value when pool members are matched in proportion to `weight`.
///
/// Fails if the weight is non-positive at any point where it is evaluated
/// inside the pool.
pub fn firm_value_weighted(
    eq: &Equilibrium,
    dist: &TypeDistribution,
    weight: &MatchingWeight,
) -> Result<f64> {
    pool_mass(eq, dist)?;
    let bad: Cell<Option<(f64, f64)>> = Cell::new(None);
    let w = |t: f64| {
        let g = weight.eval(t);
        if (g.is_nan() || g <= 0.0) && bad.get().is_none() {
            bad.set(Some((t, g)));
        }
        g
    };
    let norm = dist.expect(w, eq.theta1, 1.0);
    let cond = dist.expect(
        |t| zone_profit(t, eq, InvestmentZone::Conditional) * w(t),
        eq.theta1,
        eq.theta0,
    );
    let uncond = dist.expect(
        |t| zone_profit(t, eq, InvestmentZone::Unconditional) * w(t),
        eq.theta0,
        1.0,
    );
    if let Some((theta, value)) = bad.get() {
        return Err(ScreenError::NonPositiveWeight { theta, value });
    }
    if norm.is_nan() || norm <= 0.0 {
        return Err(ScreenError::EmptyPool {
            cdf_at_cutoff: dist.cdf(eq.theta1),
        });
    }
    Ok((cond + uncond) / norm)
}

/// Log-value slope in `k` at the noise corners under a uniform prior:
/// `1/k - 1/(1-k-c) - 1/(k+c)`.
pub fn log_value_slope_in_k(k: f64, c: f64) -> f64 {
    1.0 / k - 1.0 / (1.0 - k - c) - 1.0 / (k + c)
}

/// The firm cost `k*` at which corner firm value (uniform prior) peaks,
/// i.e. the root of [`log_value_slope_in_k`] on `(0, 1 - c)`.
pub fn find_kstar(c: f64) -> Result<f64> {
    if !(c.is_finite() && c > 0.0 && c < 1.0) {
        return Err(invalid(format!("0 < c < 1 violated (c = {c})")));
    }
    // The slope is strictly decreasing, +inf at 0 and -inf at 1 - c.
    let (mut lo, mut hi) = (0.0_f64, 1.0 - c);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if log_value_slope_in_k(mid, c) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
