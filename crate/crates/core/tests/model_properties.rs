use proptest::prelude::*;
use screenlab::fd::{relative_error, theta1_gradient_fd, FD_STEP};
use screenlab::model::{
    boundaries_conservatism, conservatism_from_noise, noise_from_conservatism, posterior_success,
    theta1_gradient, zone_boundaries, ConservatismCoords, Equilibrium, InvestmentZone, ModelParams,
    Signal, SignalNoise,
};

fn costs() -> impl Strategy<Value = ModelParams> {
    (0.01..0.9_f64, 0.01..0.9_f64)
        .prop_filter("k + c < 1", |(k, c)| k + c < 0.98)
        .prop_map(|(k, c)| ModelParams::new(k, c).unwrap())
}

fn noise() -> impl Strategy<Value = SignalNoise> {
    (0.001..0.5_f64, 0.001..0.5_f64).prop_map(|(a, b)| SignalNoise::new(a, b).unwrap())
}

fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn boundaries_match_indifference_roots_on_grid() {
    let p = ModelParams::new(0.24, 0.24).unwrap();
    let w = 0.5;
    for i in 1..=20 {
        for j in 1..=20 {
            let n = SignalNoise::new(0.025 * i as f64, 0.025 * j as f64).unwrap();
            let (t1, t0) = zone_boundaries(p, n);
            let good = |t: f64| {
                let hit = t * (1.0 - n.q1());
                hit / (hit + (1.0 - t) * n.q0()) * (1.0 - w) - 0.24
            };
            let bad = |t: f64| {
                let hit = t * n.q1();
                hit / (hit + (1.0 - t) * (1.0 - n.q0())) * (1.0 - w) - 0.24
            };
            assert!((t1 - bisect(good)).abs() <= 1e-10);
            assert!((t0 - bisect(bad)).abs() <= 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn boundaries_bracket_the_commitment_cutoff(p in costs(), n in noise()) {
        let (t1, t0) = zone_boundaries(p, n);
        let s = p.total_cost();
        prop_assert!(t1 <= s + 1e-12 && s <= t0 + 1e-12);
        prop_assert!(t1 > 0.0 && t0 < 1.0);
    }

    #[test]
    fn rent_is_continuous_and_nondecreasing(p in costs(), n in noise()) {
        let eq = Equilibrium::solve(p, n);
        let scale = 1e-9;
        prop_assert!(eq.zone_rent(eq.theta1, InvestmentZone::Conditional).abs() < scale);
        let gap = eq.zone_rent(eq.theta0, InvestmentZone::Conditional)
            - eq.zone_rent(eq.theta0, InvestmentZone::Unconditional);
        prop_assert!(gap.abs() < scale);
        let mut last = 0.0;
        for i in 1..200 {
            let r = eq.rent(i as f64 / 200.0).unwrap();
            prop_assert!(r >= last - 1e-12 && r >= 0.0);
            last = r;
        }
    }

    #[test]
    fn rent_is_the_best_zone_for_each_type(p in costs(), n in noise(), t in 0.001..0.999_f64) {
        let eq = Equilibrium::solve(p, n);
        let r = eq.rent(t).unwrap();
        for z in [InvestmentZone::NoInvestment, InvestmentZone::Conditional, InvestmentZone::Unconditional] {
            prop_assert!(r >= eq.zone_rent(t, z) - 1e-12);
        }
    }

    #[test]
    fn good_news_raises_beliefs(n in noise(), t in 0.001..0.999_f64) {
        let good = posterior_success(t, n, Signal::Good).unwrap();
        let bad = posterior_success(t, n, Signal::Bad).unwrap();
        prop_assert!(bad <= t + 1e-15 && t <= good + 1e-15);
    }

    #[test]
    fn uninformative_corner_is_exact(p in costs()) {
        let (t1, t0) = zone_boundaries(p, SignalNoise::symmetric(0.5).unwrap());
        prop_assert!((t1 - p.total_cost()).abs() <= 1e-14);
        prop_assert!((t0 - p.total_cost()).abs() <= 1e-14);
    }

    #[test]
    fn cutoff_gradient_is_positive_and_matches_fd(p in costs(), n in noise()) {
        let (g1, g0) = theta1_gradient(p, n);
        let (f1, f0) = theta1_gradient_fd(p, n, FD_STEP);
        prop_assert!(g1 > 0.0 && g0 > 0.0);
        prop_assert!(relative_error(g1, f1) < 1e-5 && relative_error(g0, f0) < 1e-5);
    }

    #[test]
    fn conservatism_coordinates_agree_with_raw_noise(
        p in costs(), q in 0.01..0.49_f64, frac in 0.0..0.99_f64
    ) {
        let lambda = frac * q.min(0.5 - q);
        let coords = ConservatismCoords::new(q, lambda).unwrap();
        let n = noise_from_conservatism(coords).unwrap();
        let (a1, a0) = boundaries_conservatism(p, coords);
        let (b1, b0) = zone_boundaries(p, n);
        prop_assert!((a1 - b1).abs() < 1e-12 && (a0 - b0).abs() < 1e-12);
        let back = conservatism_from_noise(n).unwrap();
        prop_assert!((back.q() - q).abs() < 1e-12 && (back.lambda() - lambda).abs() < 1e-12);
    }
}
