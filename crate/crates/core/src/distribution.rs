//! Prior over managerial ability on `(0, 1)`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{invalid, Result, ScreenError};
use crate::quadrature::{integrate, ABS_TOL};

/// Type distribution: uniform, `Beta(a, b)`, or a finite set of atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TypeDistribution {
    Uniform,
    Beta { a: f64, b: f64 },
    Discrete { points: Vec<(f64, f64)> },
}

impl TypeDistribution {
    pub fn beta(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0) {
            return Err(invalid(format!(
                "beta shapes must be > 0 (a = {a}, b = {b})"
            )));
        }
        Ok(TypeDistribution::Beta { a, b })
    }

    /// Builds a discrete prior from `(theta, weight)` pairs. Weights are
    /// normalised to unit mass and atoms sorted by type.
    pub fn discrete(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.into_iter().collect();
        if pts.is_empty() {
            return Err(invalid("discrete distribution needs at least one point"));
        }
        for &(t, w) in &pts {
            if !(t.is_finite() && t > 0.0 && t < 1.0) {
                return Err(ScreenError::Domain(t));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(invalid(format!(
                    "discrete weight must be >= 0 (got {w} at {t})"
                )));
            }
        }
        let total: f64 = pts.iter().map(|p| p.1).sum();
        if total <= 0.0 {
            return Err(invalid("discrete weights sum to zero"));
        }
        pts.sort_by(|x, y| x.0.total_cmp(&y.0));
        for p in &mut pts {
            p.1 /= total;
        }
        Ok(TypeDistribution::Discrete { points: pts })
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self, TypeDistribution::Discrete { .. })
    }

    /// Density at `theta`; discrete priors have none.
    pub fn density(&self, theta: f64) -> Result<f64> {
        match *self {
            TypeDistribution::Uniform => Ok(if theta > 0.0 && theta < 1.0 { 1.0 } else { 0.0 }),
            TypeDistribution::Beta { a, b } => {
                if theta <= 0.0 || theta >= 1.0 {
                    return Ok(0.0);
                }
                let ln = (a - 1.0) * theta.ln() + (b - 1.0) * (-theta).ln_1p() - ln_beta(a, b);
                Ok(ln.exp())
            }
            TypeDistribution::Discrete { .. } => Err(ScreenError::NeedsDensity),
        }
    }

    /// `F(x) = P(theta <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        match self {
            TypeDistribution::Uniform => x,
            &TypeDistribution::Beta { a, b } => {
                if b == 1.0 {
                    x.powf(a)
                } else if a == 1.0 {
                    -(b * (-x).ln_1p()).exp_m1()
                } else {
                    beta_reg(a, b, x)
                }
            }
            TypeDistribution::Discrete { points } => {
                points.iter().take_while(|p| p.0 <= x).map(|p| p.1).sum()
            }
        }
    }

    /// Smallest `theta` with `F(theta) >= u`, for `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            TypeDistribution::Uniform => u,
            &TypeDistribution::Beta { a, b } => {
                if b == 1.0 {
                    u.powf(1.0 / a)
                } else if a == 1.0 {
                    -((-u).ln_1p() / b).exp_m1()
                } else {
                    self.bisect_quantile(u)
                }
            }
            TypeDistribution::Discrete { points } => {
                let mut acc = 0.0;
                for &(t, w) in points {
                    acc += w;
                    if acc >= u {
                        return t;
                    }
                }
                points.last().map(|p| p.0).unwrap_or(1.0)
            }
        }
    }

    fn bisect_quantile(&self, u: f64) -> f64 {
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// `E[g(theta); lo < theta <= hi]`, i.e. the integral of `g` against
    /// `dF` over the half-open interval.
    pub fn expect<G: FnMut(f64) -> f64>(&self, mut g: G, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(0.0);
        let hi = hi.min(1.0);
        if hi <= lo {
            return 0.0;
        }
        match *self {
            TypeDistribution::Uniform => integrate(g, lo, hi, ABS_TOL).value,
            TypeDistribution::Beta { a, b } => beta_expect(a, b, &mut g, lo, hi),
            TypeDistribution::Discrete { ref points } => points
                .iter()
                .filter(|p| p.0 > lo && p.0 <= hi)
                .map(|&(t, w)| w * g(t))
                .sum(),
        }
    }
}

// Shapes below one make the density unbounded at an endpoint. There the
// integral is taken in u = theta^a (resp. v = (1 - theta)^b), which is the
// CDF itself when the other shape is one and removes the singularity in
// general.
fn beta_expect<G: FnMut(f64) -> f64>(a: f64, b: f64, g: &mut G, lo: f64, hi: f64) -> f64 {
    let lnb = ln_beta(a, b);
    let mid = if a < 1.0 && b < 1.0 {
        0.5
    } else if a < 1.0 {
        1.0
    } else {
        0.0
    };
    let mut total = 0.0;
    let (l_lo, l_hi) = (lo, hi.min(mid));
    if a < 1.0 && l_hi > l_lo {
        let scale = (-lnb).exp() / a;
        let f = |u: f64| {
            let t = u.powf(1.0 / a);
            g(t) * ((b - 1.0) * (-t).ln_1p()).exp() * scale
        };
        total += integrate(f, l_lo.powf(a), l_hi.powf(a), ABS_TOL).value;
    }
    let (r_lo, r_hi) = (lo.max(mid), hi);
    if r_hi > r_lo {
        if b < 1.0 {
            let scale = (-lnb).exp() / b;
            let f = |v: f64| {
                let t = 1.0 - v.powf(1.0 / b);
                g(t) * ((a - 1.0) * t.ln()).exp() * scale
            };
            total += integrate(f, (1.0 - r_hi).powf(b), (1.0 - r_lo).powf(b), ABS_TOL).value;
        } else {
            let f = |t: f64| {
                let ln = (a - 1.0) * t.ln() + (b - 1.0) * (-t).ln_1p() - lnb;
                g(t) * ln.exp()
            };
            total += integrate(f, r_lo, r_hi, ABS_TOL).value;
        }
    }
    total
}

impl FromStr for TypeDistribution {
    type Err = ScreenError;

    /// Parses `uniform` or `beta:a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("uniform") {
            return Ok(TypeDistribution::Uniform);
        }
        if let Some(rest) = s.strip_prefix("beta:") {
            let mut parts = rest.split(',');
            let parse = |p: Option<&str>| -> Result<f64> {
                p.and_then(|x| x.trim().parse::<f64>().ok())
                    .ok_or_else(|| invalid(format!("cannot parse beta shapes from '{s}'")))
            };
            let a = parse(parts.next())?;
            let b = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(invalid(format!("cannot parse beta shapes from '{s}'")));
            }
            return TypeDistribution::beta(a, b);
        }
        Err(invalid(format!(
            "unknown distribution '{s}' (expected uniform or beta:a,b)"
        )))
    }
}
