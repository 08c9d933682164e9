use screenlab::distribution::TypeDistribution;
use screenlab::model::{Equilibrium, InvestmentZone, ModelParams, SignalNoise};
use screenlab::sim::game::{sample_draw, settle};
use screenlab::sim::rng::trial_rng;
use screenlab::sim::{
    best_response_check, play_once, simulate_rents, simulate_value, type_grid, SimConfig,
};

fn eq(q1: f64, q0: f64) -> Equilibrium {
    Equilibrium::solve(
        ModelParams::new(0.24, 0.24).unwrap(),
        SignalNoise::new(q1, q0).unwrap(),
    )
}

#[test]
fn identical_config_gives_identical_outcome() {
    let e = eq(0.25, 0.25);
    let cfg = SimConfig::new(19, 32, 3000, 11).unwrap();
    let a = simulate_rents(&e, &TypeDistribution::Uniform, cfg).unwrap();
    let b = simulate_rents(&e, &TypeDistribution::Uniform, cfg).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let v1 = simulate_value(&e, &TypeDistribution::Uniform, cfg).unwrap();
    let v2 = simulate_value(&e, &TypeDistribution::Uniform, cfg).unwrap();
    assert_eq!(v1, v2);
    let other = SimConfig { seed: 12, ..cfg };
    assert_ne!(
        simulate_rents(&e, &TypeDistribution::Uniform, other).unwrap(),
        a
    );
}

#[test]
fn thread_count_does_not_change_results() {
    let e = eq(0.2, 0.3);
    let cfg = SimConfig::new(9, 8, 10_000, 5).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                (
                    simulate_rents(&e, &TypeDistribution::Uniform, cfg).unwrap(),
                    simulate_value(&e, &TypeDistribution::beta(2.0, 2.0).unwrap(), cfg).unwrap(),
                )
            })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn rent_bins_are_the_sum_of_independently_addressed_trials() {
    let e = eq(0.25, 0.25);
    let cfg = SimConfig::new(9, 2, 2000, 3).unwrap();
    let out = simulate_rents(&e, &TypeDistribution::Uniform, cfg).unwrap();
    let cell = 7;
    let theta = out.theta[cell];
    assert!((theta - 0.8).abs() < 1e-15);
    let mut sum = 0.0;
    for trial in (0..cfg.trials).rev() {
        let mut rng = trial_rng(cfg.seed, cell as u64, trial);
        sum += play_once(theta, theta, &e, &mut rng).unwrap().0;
    }
    let reordered = sum / cfg.trials as f64;
    assert!((reordered - out.empirical_rent[cell]).abs() < 1e-12);
}

#[test]
fn zone_play_law_holds_on_every_path() {
    let e = eq(0.25, 0.25);
    for (i, &theta) in type_grid(49).iter().enumerate() {
        let zone = e.zone(theta).unwrap();
        for trial in 0..200 {
            let mut rng = trial_rng(1, i as u64, trial);
            let draw = sample_draw(theta, &e, &mut rng);
            let (m, f) = settle(theta, &e, draw).unwrap();
            let invested = (m, f) != (0.0, 0.0);
            let expected = match zone {
                InvestmentZone::NoInvestment => false,
                InvestmentZone::Conditional => draw.signal == screenlab::model::Signal::Good,
                InvestmentZone::Unconditional => true,
            };
            assert_eq!(invested, expected, "theta {theta} draw {draw:?}");
        }
    }
}

#[test]
fn rents_match_closed_form_and_pool_edge() {
    let e = eq(0.25, 0.25);
    let out = simulate_rents(
        &e,
        &TypeDistribution::Uniform,
        SimConfig::new(99, 2, 20_000, 42).unwrap(),
    )
    .unwrap();
    let mut inside = 0;
    for ((&t, &m), &se) in out
        .theta
        .iter()
        .zip(&out.empirical_rent)
        .zip(&out.std_errors.rent)
    {
        if (m - e.rent(t).unwrap()).abs() <= 3.0 * se {
            inside += 1;
        }
    }
    assert!(inside >= 95, "{inside}/99");
    let first_positive = out
        .theta
        .iter()
        .zip(&out.empirical_rent)
        .find(|(_, &m)| m > 0.0)
        .unwrap()
        .0;
    assert!(*first_positive > e.theta1 && *first_positive - e.theta1 <= 0.01 + 1e-12);
    let bin = out
        .theta
        .iter()
        .position(|&t| (t - 0.8).abs() < 1e-12)
        .unwrap();
    assert!((out.empirical_rent[bin] - 0.16).abs() <= 3.0 * out.std_errors.rent[bin]);
}

#[test]
fn exhaustive_game_supports_truthtelling() {
    let e = eq(0.25, 0.25);
    for n in [64, 128, 256] {
        let out = best_response_check(&e, SimConfig::new(n, n, 1, 0).unwrap()).unwrap();
        assert!(out.ic_violation <= 2.0 * e.w_star / n as f64);
        let cell = 1.0 / (n + 1) as f64;
        for (&t, &r) in out.theta.iter().zip(&out.best_report) {
            assert!((t - r).abs() <= cell + 1e-12, "theta {t} best report {r}");
        }
        assert!(out.ic_grid_bound <= e.w_star * cell + 1e-12);
    }
    let out = best_response_check(&e, SimConfig::new(511, 64, 1, 0).unwrap()).unwrap();
    let mid = out
        .theta
        .iter()
        .position(|&t| (t - 0.5).abs() < 1e-12)
        .unwrap();
    assert_eq!(
        e.zone(out.best_report[mid]).unwrap(),
        InvestmentZone::Conditional
    );
}

#[test]
fn value_matches_quadrature() {
    let e = eq(0.25, 0.25);
    let out = simulate_value(
        &e,
        &TypeDistribution::Uniform,
        SimConfig::new(2, 2, 200_000, 9).unwrap(),
    )
    .unwrap();
    let exact = screenlab::valuation::firm_value(&e, &TypeDistribution::Uniform).unwrap();
    let se = out.std_errors.value.unwrap();
    assert!((out.empirical_value.unwrap() - exact).abs() <= 3.0 * se);
    assert_eq!(out.samples, 200_000);
}
