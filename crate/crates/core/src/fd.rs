//! Finite-difference validators for the analytic derivatives.
//!
//! Every analytic derivative in the crate has a counterpart here built only
//! from function evaluations of the closed forms. Steps that would leave the
//! admissible noise range fall back to a one-sided inward difference.

use crate::model::{
    boundaries_conservatism, theta1_raw, ConservatismCoords, ModelParams, SignalNoise,
};

/// Default step for validating closed-form derivatives.
pub const FD_STEP: f64 = 1e-6;

/// How a difference quotient was formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Stencil {
    Central,
    Forward,
    Backward,
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn central<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Difference quotient restricted to `[lo, hi]`: central where possible,
/// otherwise a second-order one-sided stencil pointing inward.
pub fn bounded<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, lo: f64, hi: f64) -> (f64, Stencil) {
    if x + h > hi {
        let d = (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h);
        (d, Stencil::Backward)
    } else if x - h < lo {
        let d = (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
        (d, Stencil::Forward)
    } else {
        (central(f, x, h), Stencil::Central)
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Finite-difference `(d theta1/d q1, d theta1/d q0)`.
pub fn theta1_gradient_fd(params: ModelParams, noise: SignalNoise, h: f64) -> (f64, f64) {
    let s = params.total_cost();
    let (q1, q0) = (noise.q1(), noise.q0());
    let d1 = bounded(|x| theta1_raw(s, x, q0), q1, h, 0.0, 0.5).0;
    let d0 = bounded(|x| theta1_raw(s, q1, x), q0, h, 0.0, 0.5).0;
    (d1, d0)
}

/// Finite-difference `d theta1 / d k` (equal to the `c` derivative).
pub fn theta1_cost_sensitivity_fd(params: ModelParams, noise: SignalNoise, h: f64) -> (f64, f64) {
    let (k, c) = (params.k(), params.c());
    let (q1, q0) = (noise.q1(), noise.q0());
    let dk = central(|x| theta1_raw(x + c, q1, q0), k, h);
    let dc = central(|x| theta1_raw(k + x, q1, q0), c, h);
    (dk, dc)
}

/// Finite-difference `(d theta1/d q, d theta1/d lambda)`.
pub fn conservatism_sensitivities_fd(
    params: ModelParams,
    coords: ConservatismCoords,
    h: f64,
) -> (f64, f64) {
    let (q, l) = (coords.q(), coords.lambda());
    let theta1 = |q: f64, l: f64| {
        let s = params.total_cost();
        (q - l) * s / ((1.0 - q - l) * (1.0 - s) + (q - l) * s)
    };
    debug_assert_eq!(theta1(q, l), boundaries_conservatism(params, coords).0);
    let d_q = bounded(|x| theta1(x, l), q, h, l, 0.5).0;
    let d_l = bounded(|x| theta1(q, x), l, h, 0.0, q).0;
    (d_q, d_l)
}
