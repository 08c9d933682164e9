//! Closed-form equilibrium of the screening game.
//!
//! A firm hires a manager of privately known ability `theta` (the success
//! probability of a project), pays a wage `w` on success only, and decides
//! whether to invest after observing a binary signal with error rates
//! `(q1, q0)`. Investment costs the firm `k` and the manager `c`. Under the
//! optimal truth-telling contract the wage is flat, and the type space splits
//! into three investment zones separated by `theta1 <= theta0`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, ScreenError};

/// Smallest admissible signal error rate. Perfect information is excluded.
pub const MIN_NOISE: f64 = 1e-9;

/// Clamp margin for callers that need to map a closed type interval onto
/// the open one accepted here.
pub const TYPE_MARGIN: f64 = 1e-12;

/// Clamps `theta` into `[TYPE_MARGIN, 1 - TYPE_MARGIN]`.
pub fn clamp_type(theta: f64) -> f64 {
    theta.clamp(TYPE_MARGIN, 1.0 - TYPE_MARGIN)
}

pub(crate) fn check_type(theta: f64) -> Result<f64> {
    if theta.is_finite() && theta > 0.0 && theta < 1.0 {
        Ok(theta)
    } else {
        Err(ScreenError::Domain(theta))
    }
}

/// Investment costs, as fractions of the unit project output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    k: f64,
    c: f64,
}

impl ModelParams {
    /// `k` is the firm's investment cost and `c` the manager's private cost.
    pub fn new(k: f64, c: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(invalid(format!("k > 0 violated (k = {k})")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(invalid(format!("c > 0 violated (c = {c})")));
        }
        if k + c >= 1.0 {
            return Err(invalid(format!("k + c < 1 violated (k + c = {})", k + c)));
        }
        Ok(Self { k, c })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Total investment cost `k + c`.
    pub fn total_cost(&self) -> f64 {
        self.k + self.c
    }
}

/// Error rates of the internal signal: `q1 = P(bad | success)` and
/// `q0 = P(good | failure)`. `(1/2, 1/2)` is a fully uninformative signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalNoise {
    q1: f64,
    q0: f64,
}

impl SignalNoise {
    pub fn new(q1: f64, q0: f64) -> Result<Self> {
        for (name, q) in [("q1", q1), ("q0", q0)] {
            if !(q.is_finite() && q >= MIN_NOISE) {
                return Err(invalid(format!(
                    "{name} >= {MIN_NOISE:e} violated ({name} = {q})"
                )));
            }
            if q > 0.5 {
                return Err(invalid(format!("{name} <= 1/2 violated ({name} = {q})")));
            }
        }
        Ok(Self { q1, q0 })
    }

    pub fn symmetric(q: f64) -> Result<Self> {
        Self::new(q, q)
    }

    pub fn q1(&self) -> f64 {
        self.q1
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn is_uninformative(&self) -> bool {
        self.q1 == 0.5 && self.q0 == 0.5
    }
}

/// Symmetric noise `q` plus a downward (conservative) bias `lambda`,
/// i.e. `q1 = q + lambda`, `q0 = q - lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservatismCoords {
    q: f64,
    lambda: f64,
}

impl ConservatismCoords {
    /// Requires `0 <= lambda < q < 1/2`.
    pub fn new(q: f64, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(invalid(format!("lambda >= 0 violated (lambda = {lambda})")));
        }
        if !(q.is_finite() && lambda < q) {
            return Err(invalid(format!(
                "lambda < q violated (q = {q}, lambda = {lambda})"
            )));
        }
        if q >= 0.5 {
            return Err(invalid(format!("q < 1/2 violated (q = {q})")));
        }
        Ok(Self { q, lambda })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Binary signal realisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signal {
    Bad = 0,
    Good = 1,
}

impl Signal {
    pub fn value(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for Signal {
    type Error = ScreenError;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Signal::Bad),
            1 => Ok(Signal::Good),
            _ => Err(invalid(format!("signal must be 0 or 1, got {v}"))),
        }
    }
}

/// Where a (truthfully reported) type lands under the equilibrium contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvestmentZone {
    /// `theta <= theta1`: the project is always scrapped.
    NoInvestment,
    /// `theta1 < theta <= theta0`: invest on the good signal only.
    Conditional,
    /// `theta > theta0`: invest regardless of the signal.
    Unconditional,
}

/// `P(success | signal, theta)`.
pub fn posterior_success(theta: f64, noise: SignalNoise, signal: Signal) -> Result<f64> {
    let theta = check_type(theta)?;
    Ok(posterior_raw(theta, noise.q1, noise.q0, signal))
}

pub(crate) fn posterior_raw(theta: f64, q1: f64, q0: f64, signal: Signal) -> f64 {
    match signal {
        Signal::Good => {
            let hit = theta * (1.0 - q1);
            hit / (hit + (1.0 - theta) * q0)
        }
        Signal::Bad => {
            let miss = theta * q1;
            miss / (miss + (1.0 - theta) * (1.0 - q0))
        }
    }
}

/// Flat equilibrium wage on success, `c / (k + c)`.
pub fn equilibrium_wage(params: ModelParams) -> f64 {
    params.c / (params.k + params.c)
}

pub(crate) fn theta1_raw(s: f64, q1: f64, q0: f64) -> f64 {
    q0 * s / ((1.0 - q1) * (1.0 - s) + q0 * s)
}

pub(crate) fn theta0_raw(s: f64, q1: f64, q0: f64) -> f64 {
    (1.0 - q0) * s / (q1 + (1.0 - q1 - q0) * s)
}

/// Boundaries `(theta1, theta0)` of the conditional-investment zone.
pub fn zone_boundaries(params: ModelParams, noise: SignalNoise) -> (f64, f64) {
    let s = params.total_cost();
    (
        theta1_raw(s, noise.q1, noise.q0),
        theta0_raw(s, noise.q1, noise.q0),
    )
}

/// Pool cutoff the firm could reach if it could commit to its investment
/// policy: `c / w* = k + c`.
pub fn theta_commit(params: ModelParams) -> f64 {
    params.c / equilibrium_wage(params)
}

pub fn noise_from_conservatism(coords: ConservatismCoords) -> Result<SignalNoise> {
    let q0 = coords.q - coords.lambda;
    if q0 <= 0.0 {
        return Err(invalid(format!("q0 = q - lambda > 0 violated (q0 = {q0})")));
    }
    SignalNoise::new(coords.q + coords.lambda, q0)
}

/// Inverse of [`noise_from_conservatism`]; needs `q1 >= q0` and a signal
/// that is not fully uninformative.
pub fn conservatism_from_noise(noise: SignalNoise) -> Result<ConservatismCoords> {
    ConservatismCoords::new((noise.q1 + noise.q0) / 2.0, (noise.q1 - noise.q0) / 2.0)
}

/// Zone boundaries written directly in `(q, lambda)` coordinates.
///
/// Defined on all of `0 <= lambda < q < 1/2`, including points where
/// `q + lambda > 1/2` has no [`SignalNoise`] counterpart.
pub fn boundaries_conservatism(params: ModelParams, coords: ConservatismCoords) -> (f64, f64) {
    let s = params.total_cost();
    let (q, l) = (coords.q, coords.lambda);
    let theta1 = (q - l) * s / ((1.0 - q - l) * (1.0 - s) + (q - l) * s);
    let theta0 = (1.0 - q + l) * s / (q + l + (1.0 - 2.0 * q) * s);
    (theta1, theta0)
}

/// Analytic `(d theta1 / d q1, d theta1 / d q0)`.
///
/// Uses `theta1 = 1 / (1 + gamma (1 - q1) / q0)` with `gamma = 1/(k+c) - 1`.
pub fn theta1_gradient(params: ModelParams, noise: SignalNoise) -> (f64, f64) {
    let s = params.total_cost();
    let gamma = 1.0 / s - 1.0;
    let (q1, q0) = (noise.q1, noise.q0);
    let t1 = theta1_raw(s, q1, q0);
    let t1sq = t1 * t1;
    (t1sq * gamma / q0, t1sq * gamma * (1.0 - q1) / (q0 * q0))
}

/// Analytic `d theta1 / d k`, which equals `d theta1 / d c` because the
/// cutoff depends on the costs only through `k + c`.
pub fn theta1_cost_sensitivity(params: ModelParams, noise: SignalNoise) -> f64 {
    let s = params.total_cost();
    let t1 = theta1_raw(s, noise.q1, noise.q0);
    t1 * t1 * (1.0 - noise.q1) / (noise.q0 * s * s)
}

/// Analytic `(d theta1 / d q, d theta1 / d lambda)` in conservatism
/// coordinates. The first is positive, the second negative.
pub fn conservatism_sensitivities(params: ModelParams, coords: ConservatismCoords) -> (f64, f64) {
    let s = params.total_cost();
    let (q, l) = (coords.q, coords.lambda);
    let denom = (1.0 - q - l) * (1.0 - s) + (q - l) * s;
    let d2 = denom * denom;
    let d_q = s * (1.0 - s) * (1.0 - 2.0 * l) / d2;
    let d_lambda = -s * (1.0 - s) * (1.0 - 2.0 * q) / d2;
    (d_q, d_lambda)
}

/// Equilibrium contract and zone boundaries for one environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub w_star: f64,
    pub theta1: f64,
    pub theta0: f64,
    pub params: ModelParams,
    pub noise: SignalNoise,
}

impl Equilibrium {
    pub fn solve(params: ModelParams, noise: SignalNoise) -> Self {
        let (theta1, theta0) = zone_boundaries(params, noise);
        Self {
            w_star: equilibrium_wage(params),
            theta1,
            theta0,
            params,
            noise,
        }
    }

    /// Probability mass-free zone assignment: `theta1` itself is
    /// `NoInvestment` and `theta0` itself is `Conditional`.
    pub fn zone(&self, theta: f64) -> Result<InvestmentZone> {
        let theta = check_type(theta)?;
        Ok(if theta <= self.theta1 {
            InvestmentZone::NoInvestment
        } else if theta <= self.theta0 {
            InvestmentZone::Conditional
        } else {
            InvestmentZone::Unconditional
        })
    }

    /// Equilibrium managerial rent `R(theta)`.
    pub fn rent(&self, theta: f64) -> Result<f64> {
        let zone = self.zone(theta)?;
        Ok(self.zone_rent(theta, zone))
    }

    /// Rent a type-`theta` manager earns when placed in `zone`.
    pub fn zone_rent(&self, theta: f64, zone: InvestmentZone) -> f64 {
        let (w, c) = (self.w_star, self.params.c);
        match zone {
            InvestmentZone::NoInvestment => 0.0,
            InvestmentZone::Conditional => {
                theta * (1.0 - self.noise.q1) * (w - c) - (1.0 - theta) * self.noise.q0 * c
            }
            InvestmentZone::Unconditional => theta * w - c,
        }
    }

    /// Ex-post optimal investment after a report and a signal. Indifference
    /// means no investment.
    pub fn invests(&self, report: f64, signal: Signal) -> Result<bool> {
        let p = posterior_success(report, self.noise, signal)?;
        Ok(p * (1.0 - self.w_star) > self.params.k)
    }

    /// Pool cutoff under commitment, `k + c`.
    pub fn theta_commit(&self) -> f64 {
        theta_commit(self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn base() -> Equilibrium {
        Equilibrium::solve(
            ModelParams::new(0.24, 0.24).unwrap(),
            SignalNoise::symmetric(0.25).unwrap(),
        )
    }

    #[test]
    fn posterior_examples() {
        let n = SignalNoise::symmetric(0.25).unwrap();
        assert_abs_diff_eq!(
            posterior_success(0.5, n, Signal::Good).unwrap(),
            0.75,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            posterior_success(0.5, n, Signal::Bad).unwrap(),
            0.25,
            epsilon = 1e-15
        );
        let flat = SignalNoise::symmetric(0.5).unwrap();
        for s in [Signal::Good, Signal::Bad] {
            assert_abs_diff_eq!(
                posterior_success(0.3, flat, s).unwrap(),
                0.3,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn posterior_rejects_closed_endpoints() {
        let n = SignalNoise::symmetric(0.25).unwrap();
        assert_eq!(
            posterior_success(0.0, n, Signal::Good),
            Err(ScreenError::Domain(0.0))
        );
        assert!(posterior_success(1.0, n, Signal::Bad).is_err());
        assert!(posterior_success(f64::NAN, n, Signal::Bad).is_err());
    }

    #[test]
    fn posterior_limits() {
        for n in [
            SignalNoise::new(0.1, 0.3).unwrap(),
            SignalNoise::symmetric(0.45).unwrap(),
        ] {
            for s in [Signal::Good, Signal::Bad] {
                assert!(posterior_success(1e-9, n, s).unwrap() < 1e-6);
                assert!(posterior_success(1.0 - 1e-9, n, s).unwrap() > 1.0 - 1e-6);
            }
        }
    }

    #[test]
    fn wage_examples() {
        let w = |k, c| equilibrium_wage(ModelParams::new(k, c).unwrap());
        assert_eq!(w(0.24, 0.24), 0.5);
        assert_eq!(w(0.15, 0.15), 0.5);
        assert_abs_diff_eq!(w(0.3, 0.1), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn params_validation_names_the_bound() {
        let err = ModelParams::new(0.6, 0.5).unwrap_err();
        assert!(err.to_string().contains("k + c < 1 violated"), "{err}");
        assert!(ModelParams::new(0.0, 0.2)
            .unwrap_err()
            .to_string()
            .contains("k > 0"));
        assert!(ModelParams::new(0.2, -0.1)
            .unwrap_err()
            .to_string()
            .contains("c > 0"));
        assert!(SignalNoise::new(0.6, 0.2).is_err());
        assert!(SignalNoise::new(1e-10, 0.2).is_err());
        assert!(SignalNoise::new(MIN_NOISE, 0.5).is_ok());
    }

    #[test]
    fn boundary_examples() {
        let eq = base();
        assert_abs_diff_eq!(eq.theta1, 0.12 / 0.51, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.theta0, 0.36 / 0.49, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.theta1, 0.235294117647, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.theta0, 0.734693877551, epsilon = 1e-12);
        let flat = SignalNoise::symmetric(0.5).unwrap();
        let (t1, t0) = zone_boundaries(ModelParams::new(0.24, 0.24).unwrap(), flat);
        assert_abs_diff_eq!(t1, 0.48, epsilon = 1e-15);
        assert_abs_diff_eq!(t0, 0.48, epsilon = 1e-15);
        let (t1, t0) = zone_boundaries(ModelParams::new(0.15, 0.15).unwrap(), flat);
        assert_abs_diff_eq!(t1, 0.30, epsilon = 1e-15);
        assert_abs_diff_eq!(t0, 0.30, epsilon = 1e-15);
    }

    #[test]
    fn rent_examples() {
        let eq = base();
        assert_eq!(eq.rent(eq.theta1).unwrap(), 0.0);
        assert_abs_diff_eq!(eq.rent(0.6).unwrap(), 0.093, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.rent(0.8).unwrap(), 0.16, epsilon = 1e-15);
        assert!(eq.rent(1.0).is_err());
    }

    #[test]
    fn zone_examples_and_half_open_edges() {
        let eq = base();
        assert_eq!(eq.zone(0.1).unwrap(), InvestmentZone::NoInvestment);
        assert_eq!(eq.zone(0.5).unwrap(), InvestmentZone::Conditional);
        assert_eq!(eq.zone(0.9).unwrap(), InvestmentZone::Unconditional);
        assert_eq!(eq.zone(eq.theta1).unwrap(), InvestmentZone::NoInvestment);
        assert_eq!(eq.zone(eq.theta0).unwrap(), InvestmentZone::Conditional);
    }

    #[test]
    fn investment_examples() {
        let eq = base();
        assert!(eq.invests(0.5, Signal::Good).unwrap());
        assert!(!eq.invests(0.5, Signal::Bad).unwrap());
        assert!(eq.invests(0.9, Signal::Bad).unwrap());
    }

    #[test]
    fn indifference_means_no_investment() {
        // Uninformative signal, report at k + c: p(1 - w*) equals k exactly.
        let eq = Equilibrium::solve(
            ModelParams::new(0.24, 0.24).unwrap(),
            SignalNoise::symmetric(0.5).unwrap(),
        );
        assert_eq!(0.48 * (1.0 - eq.w_star), 0.24);
        assert!(!eq.invests(0.48, Signal::Good).unwrap());
        assert!(!eq.invests(0.48, Signal::Bad).unwrap());
    }

    #[test]
    fn commitment_examples() {
        let tc = |k, c| theta_commit(ModelParams::new(k, c).unwrap());
        assert_abs_diff_eq!(tc(0.24, 0.24), 0.48, epsilon = 1e-15);
        assert_abs_diff_eq!(tc(0.15, 0.15), 0.30, epsilon = 1e-15);
        assert_abs_diff_eq!(tc(0.3, 0.1), 0.40, epsilon = 1e-15);
    }

    #[test]
    fn conservatism_coordinates() {
        let n = noise_from_conservatism(ConservatismCoords::new(0.25, 0.1).unwrap()).unwrap();
        assert_abs_diff_eq!(n.q1(), 0.35, epsilon = 1e-15);
        assert_abs_diff_eq!(n.q0(), 0.15, epsilon = 1e-15);
        let n = noise_from_conservatism(ConservatismCoords::new(0.25, 0.0).unwrap()).unwrap();
        assert_eq!((n.q1(), n.q0()), (0.25, 0.25));
        let back = conservatism_from_noise(SignalNoise::new(0.35, 0.15).unwrap()).unwrap();
        assert_abs_diff_eq!(back.q(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(back.lambda(), 0.1, epsilon = 1e-15);
        // q1 = q + lambda above 1/2 has no SignalNoise counterpart.
        assert!(noise_from_conservatism(ConservatismCoords::new(0.45, 0.1).unwrap()).is_err());
        assert!(ConservatismCoords::new(0.2, 0.2).is_err());
        assert!(ConservatismCoords::new(0.5, 0.0).is_err());
    }

    #[test]
    fn conservatism_boundary_examples() {
        let p = ModelParams::new(0.24, 0.24).unwrap();
        let (t1, _) = boundaries_conservatism(p, ConservatismCoords::new(0.25, 0.1).unwrap());
        assert_abs_diff_eq!(t1, 0.072 / 0.41, epsilon = 1e-15);
        assert_abs_diff_eq!(t1, 0.175609756098, epsilon = 1e-12);
        let (t1, _) = boundaries_conservatism(p, ConservatismCoords::new(0.25, 0.0).unwrap());
        assert_abs_diff_eq!(t1, 0.235294117647, epsilon = 1e-12);
        let (t1, t0) =
            boundaries_conservatism(p, ConservatismCoords::new(0.5 - 1e-12, 0.0).unwrap());
        assert_abs_diff_eq!(t1, 0.48, epsilon = 1e-10);
        assert_abs_diff_eq!(t0, 0.48, epsilon = 1e-10);
    }

    #[test]
    fn signal_from_bit() {
        assert_eq!(Signal::try_from(1).unwrap(), Signal::Good);
        assert_eq!(Signal::try_from(0).unwrap().value(), 0);
        assert!(Signal::try_from(2).is_err());
    }
}
