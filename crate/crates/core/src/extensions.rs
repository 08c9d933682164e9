//! Variants of the baseline game: a moral-hazard micro-foundation of the
//! success-only wage, and positive outside options for managers.
//!
//! Alternative matching probabilities live in
//! [`crate::valuation::firm_value_weighted`].

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, ScreenError};
use crate::model::{theta0_raw, theta1_raw, Equilibrium, ModelParams, SignalNoise, TYPE_MARGIN};

/// Relative slack when comparing a wage against an effort-IC threshold, so
/// an exactly binding contract is not rejected over rounding.
pub const IC_RELATIVE_SLACK: f64 = 1e-12;

/// Payment `b` made whenever the firm invests plus an extra `w` on success.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoralHazardContract {
    pub b: f64,
    pub w: f64,
}

impl MoralHazardContract {
    pub fn new(b: f64, w: f64) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(invalid(format!("b >= 0 violated (b = {b})")));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(invalid(format!("w >= 0 violated (w = {w})")));
        }
        Ok(Self { b, w })
    }
}

/// Smallest success payment that makes working optimal in both investment
/// zones: `max{c/theta0, (1 + (1-theta1) q0 / (theta1 (1-q1))) c}`.
pub fn required_success_pay(eq: &Equilibrium) -> f64 {
    let c = eq.params.c();
    let (q1, q0) = (eq.noise.q1(), eq.noise.q0());
    let unconditional = c / eq.theta0;
    let conditional = (1.0 + (1.0 - eq.theta1) * q0 / (eq.theta1 * (1.0 - q1))) * c;
    unconditional.max(conditional)
}

/// Whether `contract` induces effort from every pool member of `eq`.
pub fn effort_ic_satisfied(contract: MoralHazardContract, eq: &Equilibrium) -> bool {
    contract.w >= required_success_pay(eq) * (1.0 - IC_RELATIVE_SLACK)
}

/// Truth-telling contract when the firm also pays `b` upon investing.
///
/// The upfront payment shifts costs to `k + b` and `c - b`, so the success
/// pay becomes `(c - b)/(k + c)` while the zone boundaries are unchanged.
pub fn truthful_contract_with_upfront(
    params: ModelParams,
    noise: SignalNoise,
    b: f64,
) -> Result<(MoralHazardContract, Equilibrium)> {
    if !(b >= 0.0 && b < params.c()) {
        return Err(invalid(format!(
            "0 <= b < c violated (b = {b}, c = {})",
            params.c()
        )));
    }
    let k_hat = params.k() + b;
    let c_hat = params.c() - b;
    let s_hat = k_hat + c_hat;
    let w = c_hat / s_hat;
    let contract = MoralHazardContract::new(b, w)?;
    let eq = Equilibrium {
        w_star: w,
        theta1: theta1_raw(s_hat, noise.q1(), noise.q0()),
        theta0: theta0_raw(s_hat, noise.q1(), noise.q0()),
        params,
        noise,
    };
    Ok((contract, eq))
}

/// Equilibrium with hidden effort: bonus only on success (`b = 0`,
/// `w = c/(k + c)`), with the baseline zones.
pub fn mh_equilibrium(
    params: ModelParams,
    noise: SignalNoise,
) -> (MoralHazardContract, Equilibrium) {
    truthful_contract_with_upfront(params, noise, 0.0).expect("b = 0 is always admissible")
}

/// Constant reservation utility together with the noise caps it is
/// assumed against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutsideOption {
    pub r_min: f64,
    pub caps: (f64, f64),
}

impl OutsideOption {
    pub fn new(r_min: f64, caps: (f64, f64)) -> Result<Self> {
        if !(r_min.is_finite() && r_min >= 0.0) {
            return Err(invalid(format!("r_min >= 0 violated (r_min = {r_min})")));
        }
        for q in [caps.0, caps.1] {
            if !(q > 0.0 && q <= 0.5) {
                return Err(invalid(format!(
                    "noise caps must lie in (0, 1/2] (got {q})"
                )));
            }
        }
        if caps.0.min(caps.1) >= 0.5 {
            return Err(invalid("min(cap_q1, cap_q0) < 1/2 violated"));
        }
        Ok(Self { r_min, caps })
    }
}

/// Upper bound factor `Delta` on the outside option; requires
/// `R_min < c * Delta`.
pub fn delta_bound(params: ModelParams, caps: (f64, f64)) -> Result<f64> {
    let (c1, c0) = caps;
    if c1.min(c0) >= 0.5 {
        return Err(invalid("min(cap_q1, cap_q0) < 1/2 violated"));
    }
    let s = params.total_cost();
    let open = 1.0 - c1 - c0;
    Ok(open * (1.0 - s) / (s * open + c1))
}

fn cutoff_denominator(params: ModelParams, noise: SignalNoise) -> f64 {
    let s = params.total_cost();
    (1.0 - noise.q1()) * (1.0 - s) + noise.q0() * s
}

/// Lowest type in the pool when managers hold a constant outside option:
/// the type whose conditional-zone rent equals `R_min`. Managers who are
/// exactly indifferent join.
pub fn theta_min(params: ModelParams, noise: SignalNoise, option: OutsideOption) -> Result<f64> {
    if noise.q1() > option.caps.0 || noise.q0() > option.caps.1 {
        return Err(invalid(format!(
            "noise ({}, {}) exceeds caps ({}, {})",
            noise.q1(),
            noise.q0(),
            option.caps.0,
            option.caps.1
        )));
    }
    let bound = params.c() * delta_bound(params, option.caps)?;
    if option.r_min >= bound {
        return Err(ScreenError::OutsideOptionTooHigh {
            r_min: option.r_min,
            bound,
        });
    }
    let s = params.total_cost();
    let c = params.c();
    Ok((option.r_min + noise.q0() * c) * s / (cutoff_denominator(params, noise) * c))
}

/// Analytic gradient of [`theta_min`] in `(q1, q0)`.
pub fn theta_min_gradient(
    params: ModelParams,
    noise: SignalNoise,
    option: OutsideOption,
) -> Result<(f64, f64)> {
    let t = theta_min(params, noise, option)?;
    let s = params.total_cost();
    let d = cutoff_denominator(params, noise);
    Ok((t * (1.0 - s) / d, (1.0 - t) * s / d))
}

/// Lowest pool type when the outside option grows linearly, `rho * theta`.
///
/// The rent curve is convex and piecewise linear, so `R(theta) - rho theta`
/// crosses zero at most once on `(theta1, 1)`; the crossing is located by
/// bisection to `1e-12`.
pub fn theta_min_linear_option(eq: &Equilibrium, rho: f64) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(invalid(format!("rho > 0 violated (rho = {rho})")));
    }
    let gap = |t: f64| eq.rent(t).map(|r| r - rho * t);
    let mut lo = eq.theta1;
    let mut hi = 1.0 - TYPE_MARGIN;
    if gap(hi)? < 0.0 {
        return Err(ScreenError::NoCrossing(rho));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
