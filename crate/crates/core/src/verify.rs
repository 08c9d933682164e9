//! Numeric checks of the model's qualitative claims, grouped in seven
//! suites. Each check reports a margin: positive means it passed with that
//! much room, negative means it failed by that much.

use serde::{Deserialize, Serialize};

use crate::distribution::TypeDistribution;
use crate::error::Result;
use crate::extensions::{
    delta_bound, effort_ic_satisfied, mh_equilibrium, required_success_pay, theta_min,
    theta_min_gradient, truthful_contract_with_upfront, OutsideOption,
};
use crate::fd::{
    conservatism_sensitivities_fd, relative_error, theta1_cost_sensitivity_fd, theta1_gradient_fd,
    FD_STEP,
};
use crate::model::{
    conservatism_sensitivities, equilibrium_wage, posterior_success, theta1_cost_sensitivity,
    theta1_gradient, zone_boundaries, ConservatismCoords, Equilibrium, ModelParams, Signal,
    SignalNoise,
};
use crate::valuation::{
    find_kstar, firm_value, firm_value_weighted, noise_lattice, sign_map, value_gradient,
    MatchingWeight,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub params: ModelParams,
    /// Coarser grids for a fast pass.
    pub quick: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn margin(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

fn check(name: &str, margin: f64, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed: margin > 0.0,
        margin,
        detail,
    }
}

/// `tol - err`, so that errors below tolerance give a positive margin.
fn within(name: &str, err: f64, tol: f64) -> Check {
    let mut c = check(
        name,
        tol - err,
        format!("max error {err:.3e} (tol {tol:.0e})"),
    );
    c.passed = err <= tol;
    c
}

fn positive(name: &str, min: f64) -> Check {
    check(name, min, format!("min {min:.6e}"))
}

/// Root of an increasing function on `(0, 1)` by bisection.
pub fn bisect_increasing<F: Fn(f64) -> f64>(f: F) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn noise_grid(n: usize) -> Vec<SignalNoise> {
    let qs = noise_lattice(n);
    qs.iter()
        .flat_map(|&a| {
            qs.iter()
                .map(move |&b| SignalNoise::new(a, b).expect("lattice is valid"))
        })
        .collect()
}

fn equilibrium_contract(opts: &VerifyOptions) -> Result<Suite> {
    let p = opts.params;
    let w = equilibrium_wage(p);
    let mut err = 0.0_f64;
    let mut rent_at_cutoff = 0.0_f64;
    for noise in noise_grid(if opts.quick { 8 } else { 20 }) {
        let (t1, t0) = zone_boundaries(p, noise);
        let good = bisect_increasing(|t| {
            posterior_success(t, noise, Signal::Good).unwrap_or(t) * (1.0 - w) - p.k()
        });
        let bad = bisect_increasing(|t| {
            posterior_success(t, noise, Signal::Bad).unwrap_or(t) * (1.0 - w) - p.k()
        });
        err = err.max((t1 - good).abs()).max((t0 - bad).abs());
        let eq = Equilibrium::solve(p, noise);
        rent_at_cutoff = rent_at_cutoff.max(eq.rent(t1)?.abs());
    }
    let wage_err = (w - p.c() / p.total_cost()).abs();
    Ok(Suite {
        name: "equilibrium-contract".into(),
        checks: vec![
            within("boundaries equal indifference roots", err, 1e-10),
            within("rent vanishes at the pool cutoff", rent_at_cutoff, 1e-14),
            within("success wage is c/(k+c)", wage_err, 1e-15),
        ],
    })
}

fn screening_effect(opts: &VerifyOptions) -> Result<Suite> {
    let p = opts.params;
    let mut min_grad = f64::INFINITY;
    let mut fd_err = 0.0_f64;
    for noise in noise_grid(if opts.quick { 8 } else { 20 }) {
        let (g1, g0) = theta1_gradient(p, noise);
        let (f1, f0) = theta1_gradient_fd(p, noise, FD_STEP);
        min_grad = min_grad.min(g1).min(g0);
        fd_err = fd_err
            .max(relative_error(g1, f1))
            .max(relative_error(g0, f0));
    }
    Ok(Suite {
        name: "screening-effect".into(),
        checks: vec![
            positive("pool cutoff rises with both noise rates", min_grad),
            within(
                "analytic cutoff gradient matches finite differences",
                fd_err,
                1e-6,
            ),
        ],
    })
}

fn conservatism(opts: &VerifyOptions) -> Result<Suite> {
    let p = opts.params;
    let n = if opts.quick { 8 } else { 20 };
    let mut min_dq = f64::INFINITY;
    let mut min_neg_dl = f64::INFINITY;
    let mut fd_err = 0.0_f64;
    for i in 1..n {
        let q = 0.5 * i as f64 / n as f64;
        for j in 0..n {
            let lambda = q * j as f64 / n as f64;
            let coords = ConservatismCoords::new(q, lambda)?;
            let (dq, dl) = conservatism_sensitivities(p, coords);
            let (fq, fl) = conservatism_sensitivities_fd(p, coords, FD_STEP);
            min_dq = min_dq.min(dq);
            min_neg_dl = min_neg_dl.min(-dl);
            fd_err = fd_err
                .max(relative_error(dq, fq))
                .max(relative_error(dl, fl));
        }
    }
    Ok(Suite {
        name: "conservatism".into(),
        checks: vec![
            positive("cutoff rises with average noise", min_dq),
            positive("cutoff falls with conservatism", min_neg_dl),
            within(
                "analytic sensitivities match finite differences",
                fd_err,
                1e-6,
            ),
        ],
    })
}

fn value_sign_structure(opts: &VerifyOptions) -> Result<Suite> {
    let p = opts.params;
    let dist = TypeDistribution::Uniform;
    let at = |q: f64| -> Result<(f64, f64)> {
        let r = value_gradient(&Equilibrium::solve(p, SignalNoise::symmetric(q)?), &dist)?;
        Ok((r.grad_q1, r.grad_q0))
    };
    let (l1, l0) = at(0.05)?;
    let (h1, h0) = at(0.45)?;
    let n = if opts.quick { 10 } else { 20 };
    let cells = sign_map(p, &dist, n)?;
    // dV/dq1 along each column (q0 fixed), dV/dq0 along each row (q1 fixed)
    let mut flat_slices = 0usize;
    for line in 0..n {
        let col: Vec<i8> = (0..n).map(|i| cells[i * n + line].sign1).collect();
        let row: Vec<i8> = (0..n).map(|j| cells[line * n + j].sign0).collect();
        for signs in [col, row] {
            if !signs.windows(2).any(|w| w[0] * w[1] < 0) {
                flat_slices += 1;
            }
        }
    }
    let mut slices = check(
        "every coordinate slice changes sign",
        -(flat_slices as f64),
        format!("{flat_slices} of {} slices keep one sign", 2 * n),
    );
    slices.passed = flat_slices == 0;
    Ok(Suite {
        name: "value-sign-structure".into(),
        checks: vec![
            check(
                "value falls in both rates at low noise",
                -l1.max(l0),
                format!("grad at 0.05 = ({l1:.4e}, {l0:.4e})"),
            ),
            check(
                "value rises in both rates at high noise",
                h1.min(h0),
                format!("grad at 0.45 = ({h1:.4e}, {h0:.4e})"),
            ),
            slices,
        ],
    })
}

fn cost_statics(opts: &VerifyOptions) -> Result<Suite> {
    let p = opts.params;
    let mut min_sens = f64::INFINITY;
    for noise in noise_grid(if opts.quick { 8 } else { 20 }) {
        let (dk, dc) = theta1_cost_sensitivity_fd(p, noise, FD_STEP);
        min_sens = min_sens
            .min(dk)
            .min(dc)
            .min(theta1_cost_sensitivity(p, noise));
    }
    let c = p.c();
    let kstar = find_kstar(c)?;
    let dist = TypeDistribution::Uniform;
    let corner_value = |k: f64, c: f64, q: f64| -> Result<f64> {
        firm_value(
            &Equilibrium::solve(ModelParams::new(k, c)?, SignalNoise::symmetric(q)?),
            &dist,
        )
    };
    let mut checks = vec![positive("cutoff rises with both costs", min_sens)];
    let h = 5e-4;
    let mut kink_margin = f64::INFINITY;
    let mut dc_margin = f64::INFINITY;
    for q in [1e-4, 0.5] {
        if kstar - 2.0 * h > 0.0 && kstar + 2.0 * h + c < 1.0 {
            let before = corner_value(kstar - h, c, q)? - corner_value(kstar - 2.0 * h, c, q)?;
            let after = corner_value(kstar + 2.0 * h, c, q)? - corner_value(kstar + h, c, q)?;
            kink_margin = kink_margin.min(before).min(-after);
        }
        let k = p.k();
        let dc = (corner_value(k, c + 1e-6, q)? - corner_value(k, c - 1e-6, q)?) / 2e-6;
        dc_margin = dc_margin.min(-dc);
    }
    checks.push(check(
        "corner value in k peaks within 1e-3 of k*",
        kink_margin,
        format!("k* = {kstar:.6}"),
    ));
    checks.push(positive("corner value falls with manager cost", dc_margin));
    Ok(Suite {
        name: "cost-statics".into(),
        checks,
    })
}

fn moral_hazard(opts: &VerifyOptions) -> Result<Suite> {
    let costs: &[f64] = if opts.quick {
        &[0.1, 0.24]
    } else {
        &[0.05, 0.1, 0.15, 0.24, 0.3]
    };
    let mut boundary_err = 0.0_f64;
    let mut ic_slack = f64::INFINITY;
    let mut ic_ok = true;
    let mut upfront_gap = f64::INFINITY;
    let mut upfront_feasible = 0usize;
    for &k in costs {
        for &c in costs {
            let p = ModelParams::new(k, c)?;
            for noise in noise_grid(if opts.quick { 4 } else { 8 }) {
                let (contract, eq) = mh_equilibrium(p, noise);
                let (t1, t0) = zone_boundaries(p, noise);
                boundary_err = boundary_err
                    .max((eq.theta1 - t1).abs())
                    .max((eq.theta0 - t0).abs());
                let need = required_success_pay(&eq);
                ic_ok &= effort_ic_satisfied(contract, &eq);
                ic_slack = ic_slack.min(contract.w - need);
                for b in [0.1 * c, 0.5 * c, 0.9 * c] {
                    let (contract, eq) = truthful_contract_with_upfront(p, noise, b)?;
                    upfront_gap = upfront_gap.min(required_success_pay(&eq) - contract.w);
                    if effort_ic_satisfied(contract, &eq) {
                        upfront_feasible += 1;
                    }
                }
            }
        }
    }
    let mut ic = check(
        "success-only contract induces effort",
        ic_slack,
        format!("min w - required pay {ic_slack:.3e} (binding)"),
    );
    ic.passed = ic_ok;
    let mut b = check(
        "no upfront payment keeps effort incentives",
        upfront_gap,
        format!(
            "{upfront_feasible} feasible contracts with b > 0; min pay shortfall {upfront_gap:.3e}"
        ),
    );
    b.passed = upfront_feasible == 0;
    Ok(Suite {
        name: "moral-hazard".into(),
        checks: vec![
            within("zones match the baseline", boundary_err, 1e-14),
            ic,
            b,
        ],
    })
}

fn outside_options(opts: &VerifyOptions) -> Result<Suite> {
    let p = opts.params;
    let caps = (0.25, 0.25);
    let bound = p.c() * delta_bound(p, caps)?;
    let n = if opts.quick { 4 } else { 10 };
    let mut rent_err = 0.0_f64;
    let mut below_theta0 = f64::INFINITY;
    let mut min_grad = f64::INFINITY;
    let mut fd_err = 0.0_f64;
    for i in 1..=n {
        for j in 1..=n {
            let noise =
                SignalNoise::new(caps.0 * i as f64 / n as f64, caps.1 * j as f64 / n as f64)?;
            let eq = Equilibrium::solve(p, noise);
            for r in [0.0, 0.25, 0.5, 0.9] {
                let option = OutsideOption::new(r * bound, caps)?;
                let t = theta_min(p, noise, option)?;
                rent_err = rent_err.max(
                    (eq.zone_rent(t, crate::model::InvestmentZone::Conditional) - option.r_min)
                        .abs(),
                );
                below_theta0 = below_theta0.min(eq.theta0 - t);
                let (g1, g0) = theta_min_gradient(p, noise, option)?;
                let tm = |a: f64, b: f64| {
                    SignalNoise::new(a, b)
                        .and_then(|nz| theta_min(p, nz, option))
                        .unwrap_or(f64::NAN)
                };
                let (q1, q0) = (noise.q1(), noise.q0());
                let h = FD_STEP;
                let f1 = if q1 + h <= caps.0 {
                    (tm(q1 + h, q0) - tm(q1 - h, q0)) / (2.0 * h)
                } else {
                    (tm(q1, q0) - tm(q1 - h, q0)) / h
                };
                let f0 = if q0 + h <= caps.1 {
                    (tm(q1, q0 + h) - tm(q1, q0 - h)) / (2.0 * h)
                } else {
                    (tm(q1, q0) - tm(q1, q0 - h)) / h
                };
                min_grad = min_grad.min(f1).min(f0);
                fd_err = fd_err
                    .max(relative_error(g1, f1))
                    .max(relative_error(g0, f0));
            }
        }
    }
    let dist = TypeDistribution::beta(2.0, 3.0)?;
    let mut match_err = 0.0_f64;
    for noise in noise_grid(4) {
        let eq = Equilibrium::solve(p, noise);
        let plain = firm_value(&eq, &dist)?;
        let weighted = firm_value_weighted(&eq, &dist, &MatchingWeight::constant())?;
        match_err = match_err.max((plain - weighted).abs());
    }
    Ok(Suite {
        name: "outside-options-and-matching".into(),
        checks: vec![
            within(
                "rent at the lowest pool type equals the outside option",
                rent_err,
                1e-10,
            ),
            positive(
                "lowest pool type stays below the unconditional zone",
                below_theta0,
            ),
            positive(
                "lowest pool type rises with noise (finite differences)",
                min_grad,
            ),
            within("analytic gradient matches finite differences", fd_err, 1e-5),
            within(
                "constant matching weight leaves value unchanged",
                match_err,
                1e-10,
            ),
        ],
    })
}

/// Runs all seven suites.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<Suite>> {
    Ok(vec![
        equilibrium_contract(opts)?,
        screening_effect(opts)?,
        conservatism(opts)?,
        value_sign_structure(opts)?,
        cost_statics(opts)?,
        moral_hazard(opts)?,
        outside_options(opts)?,
    ])
}
