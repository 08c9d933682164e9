//! One round of the reporting game and its exact expectation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{Equilibrium, Signal};

/// Realised outcome and signal of one project.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Draw {
    pub success: bool,
    pub signal: Signal,
}

/// Samples success with probability `theta`, then a signal that contradicts
/// the outcome with probability `q1` (success) or `q0` (failure).
pub fn sample_draw<R: Rng + ?Sized>(theta: f64, eq: &Equilibrium, rng: &mut R) -> Draw {
    let success = rng.random::<f64>() < theta;
    let flip = if success {
        eq.noise.q1()
    } else {
        eq.noise.q0()
    };
    let contradicts = rng.random::<f64>() < flip;
    let good = success != contradicts;
    Draw {
        success,
        signal: if good { Signal::Good } else { Signal::Bad },
    }
}

/// `(manager, firm)` payoffs once the draw is known.
pub fn settle(report: f64, eq: &Equilibrium, draw: Draw) -> Result<(f64, f64)> {
    if !eq.invests(report, draw.signal)? {
        return Ok((0.0, 0.0));
    }
    let pay = if draw.success { eq.w_star } else { 0.0 };
    let output = if draw.success { 1.0 } else { 0.0 };
    Ok((pay - eq.params.c(), output - pay - eq.params.k()))
}

/// Plays one round for a type-`theta` manager who reports `report`.
pub fn play_once<R: Rng + ?Sized>(
    theta: f64,
    report: f64,
    eq: &Equilibrium,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let draw = sample_draw(theta, eq, rng);
    settle(report, eq, draw)
}

/// Investment decisions `(after bad, after good)` for a report.
pub fn decisions(report: f64, eq: &Equilibrium) -> Result<(bool, bool)> {
    Ok((
        eq.invests(report, Signal::Bad)?,
        eq.invests(report, Signal::Good)?,
    ))
}

/// Exact `(manager, firm)` expected payoffs from the four-event table.
pub fn expected_payoffs(theta: f64, decisions: (bool, bool), eq: &Equilibrium) -> (f64, f64) {
    let (q1, q0) = (eq.noise.q1(), eq.noise.q0());
    let (w, k, c) = (eq.w_star, eq.params.k(), eq.params.c());
    // (P(success, s), P(failure, s), invest after s) for s = bad, good
    let events = [
        (theta * q1, (1.0 - theta) * (1.0 - q0), decisions.0),
        (theta * (1.0 - q1), (1.0 - theta) * q0, decisions.1),
    ];
    let (mut manager, mut firm) = (0.0, 0.0);
    for (p_success, p_failure, invest) in events {
        if invest {
            manager += p_success * (w - c) - p_failure * c;
            firm += p_success * (1.0 - w - k) - p_failure * k;
        }
    }
    (manager, firm)
}
