//! Choice of symmetric signal noise `q` that maximises firm value net of the
//! information production cost `zeta / q`.
//!
//! Absent costs the value curve is typically U- or V-shaped in `q`, so the
//! net objective is scanned globally before a golden-section refinement in
//! the best bracket.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::TypeDistribution;
use crate::error::{invalid, Result};
use crate::model::{Equilibrium, ModelParams, SignalNoise};
use crate::valuation::firm_value;

/// Lower end of the searched noise range; `zeta / q` explodes below it.
pub const Q_MIN: f64 = 1e-3;
/// Optima this close to 1/2 count as the no-information corner.
pub const CORNER_TOL: f64 = 1e-4;
/// Points in the global scan.
pub const SCAN_POINTS: usize = 400;
/// Bracket width at which golden-section refinement stops.
pub const GOLDEN_TOL: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Information cost `zeta / q`.
pub fn info_cost(q: f64, zeta: f64) -> Result<f64> {
    if !(q.is_finite() && q > 0.0) {
        return Err(invalid(format!("q > 0 violated (q = {q})")));
    }
    Ok(zeta / q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignProblem {
    pub params: ModelParams,
    pub dist: TypeDistribution,
    pub zeta: f64,
}

impl DesignProblem {
    pub fn new(params: ModelParams, dist: TypeDistribution, zeta: f64) -> Result<Self> {
        if !(zeta.is_finite() && zeta > 0.0) {
            return Err(invalid(format!("zeta > 0 violated (zeta = {zeta})")));
        }
        Ok(Self { params, dist, zeta })
    }

    /// Value, cost and net value at symmetric noise `q`.
    pub fn evaluate(&self, q: f64) -> Result<ProfilePoint> {
        let eq = Equilibrium::solve(self.params, SignalNoise::symmetric(q)?);
        let value = firm_value(&eq, &self.dist)?;
        let cost = info_cost(q, self.zeta)?;
        Ok(ProfilePoint {
            q,
            value,
            cost,
            net: value - cost,
        })
    }
}

/// One sample of the net-value curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub q: f64,
    pub value: f64,
    pub cost: f64,
    pub net: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub q_star: f64,
    pub net_value: f64,
    pub is_corner: bool,
    pub profile: Vec<ProfilePoint>,
}

fn even_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

/// Rows `(q, V, h, V - h)` on an even grid over `[Q_MIN, 1/2]`.
pub fn value_profile(problem: &DesignProblem, grid_n: usize) -> Result<Vec<ProfilePoint>> {
    if grid_n < 10 {
        return Err(invalid(format!(
            "grid_n >= 10 violated (grid_n = {grid_n})"
        )));
    }
    even_grid(Q_MIN, 0.5, grid_n)
        .into_par_iter()
        .map(|q| problem.evaluate(q))
        .collect()
}

/// Maximises `f` on `[a, b]` by golden-section search. Returns the best
/// point seen, which may be an endpoint.
pub fn golden_section_max<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a, b] {
        let fx = f(x)?;
        if fx > best.1 {
            best = (x, fx);
        }
    }
    Ok(best)
}

/// Optimal symmetric noise `q*` on `[Q_MIN, 1/2]`.
pub fn optimize_quality(problem: &DesignProblem) -> Result<DesignResult> {
    let profile = value_profile(problem, SCAN_POINTS)?;
    let (best, _) = profile
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.net.total_cmp(&y.1.net))
        .expect("scan is non-empty");
    let lo = profile[best.saturating_sub(1)].q;
    let hi = profile[(best + 1).min(profile.len() - 1)].q;
    let (mut q_star, mut net_value) =
        golden_section_max(|q| problem.evaluate(q).map(|p| p.net), lo, hi, GOLDEN_TOL)?;
    if profile[best].net > net_value {
        q_star = profile[best].q;
        net_value = profile[best].net;
    }
    Ok(DesignResult {
        q_star,
        net_value,
        is_corner: 0.5 - q_star < CORNER_TOL,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_examples() {
        assert!((info_cost(0.5, 0.01).unwrap() - 0.02).abs() < 1e-15);
        assert!((info_cost(0.1, 0.01).unwrap() - 0.1).abs() < 1e-15);
        assert!((info_cost(0.25, 0.005).unwrap() - 0.02).abs() < 1e-15);
        assert!(info_cost(0.0, 0.01).is_err());
        assert!(info_cost(-0.1, 0.01).is_err());
    }

    #[test]
    fn golden_finds_interior_and_endpoint_maxima() {
        let (x, fx) = golden_section_max(|x| Ok(-(x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-9).unwrap();
        assert!((x - 0.3).abs() < 1e-8 && fx <= 0.0);
        let (x, _) = golden_section_max(Ok, 0.0, 1.0, 1e-9).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = ModelParams::new(0.15, 0.15).unwrap();
        assert!(DesignProblem::new(p, TypeDistribution::Uniform, -1.0).is_err());
        let prob = DesignProblem::new(p, TypeDistribution::Uniform, 0.01).unwrap();
        assert!(value_profile(&prob, 9).is_err());
    }

    #[test]
    fn profile_rows_are_finite_and_span_the_range() {
        let p = ModelParams::new(0.15, 0.15).unwrap();
        let prob = DesignProblem::new(p, TypeDistribution::Uniform, 0.01).unwrap();
        let rows = value_profile(&prob, 100).unwrap();
        assert_eq!(rows.len(), 100);
        assert_eq!(rows[0].q, Q_MIN);
        assert_eq!(rows[99].q, 0.5);
        assert!(rows
            .iter()
            .all(|r| r.value.is_finite() && r.net.is_finite()));
    }
}
