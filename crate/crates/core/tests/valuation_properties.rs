use proptest::prelude::*;
use screenlab::distribution::TypeDistribution;
use screenlab::model::{Equilibrium, ModelParams, SignalNoise};
use screenlab::valuation::{
    firm_value, firm_value_weighted, sign_map, uniform_endpoint_value, value_gradient,
    value_gradient_fd, MatchingWeight,
};

fn dists() -> impl Strategy<Value = TypeDistribution> {
    prop_oneof![
        Just(TypeDistribution::Uniform),
        (0.6..4.0_f64, 0.6..4.0_f64).prop_map(|(a, b)| TypeDistribution::beta(a, b).unwrap()),
    ]
}

fn solve(k: f64, c: f64, q1: f64, q0: f64) -> Equilibrium {
    Equilibrium::solve(
        ModelParams::new(k, c).unwrap(),
        SignalNoise::new(q1, q0).unwrap(),
    )
}

// Value by a plain midpoint rule over the pool, as an oracle for the
// adaptive quadrature.
fn midpoint_value(eq: &Equilibrium, dist: &TypeDistribution) -> f64 {
    let n = 200_000;
    let (mut num, mut den) = (0.0, 0.0);
    let (k, w) = (eq.params.k(), eq.w_star);
    let (q1, q0) = (eq.noise.q1(), eq.noise.q0());
    for i in 0..n {
        let t = (i as f64 + 0.5) / n as f64;
        if t <= eq.theta1 {
            continue;
        }
        let f = dist.density(t).unwrap();
        let v = if t <= eq.theta0 {
            t * (1.0 - q1) * (1.0 - w - k) - (1.0 - t) * q0 * k
        } else {
            t * (1.0 - w) - k
        };
        num += v * f;
        den += f;
    }
    num / den
}

#[test]
fn quadrature_value_matches_midpoint_oracle() {
    for dist in [
        TypeDistribution::Uniform,
        TypeDistribution::beta(3.0, 1.0).unwrap(),
    ] {
        for (q1, q0) in [(0.1, 0.3), (0.25, 0.25), (0.4, 0.05)] {
            let eq = solve(0.24, 0.24, q1, q0);
            let v = firm_value(&eq, &dist).unwrap();
            assert!(
                (v - midpoint_value(&eq, &dist)).abs() < 1e-6,
                "{dist:?} {q1} {q0}"
            );
        }
    }
}

#[test]
fn uniform_endpoints_coincide() {
    let p = ModelParams::new(0.24, 0.24).unwrap();
    assert!((uniform_endpoint_value(p) - 0.13).abs() < 1e-15);
    let v = firm_value(&solve(0.24, 0.24, 0.5, 0.5), &TypeDistribution::Uniform).unwrap();
    assert!((v - 0.13).abs() < 1e-12);
}

#[test]
fn sign_map_has_grid_shape() {
    let cells = sign_map(
        ModelParams::new(0.24, 0.24).unwrap(),
        &TypeDistribution::Uniform,
        20,
    )
    .unwrap();
    assert_eq!(cells.len(), 400);
    assert_eq!((cells[0].q1, cells[0].q0), (0.025, 0.025));
    assert_eq!((cells[1].q1, cells[1].q0), (0.025, 0.05));
    assert!(cells
        .iter()
        .all(|c| c.sign1 == c.dv_dq1.signum() as i8 && c.sign0 == c.dv_dq0.signum() as i8));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_decomposition_matches_fd(
        dist in dists(), q1 in 0.02..0.48_f64, q0 in 0.02..0.48_f64
    ) {
        let eq = solve(0.24, 0.24, q1, q0);
        let r = value_gradient(&eq, &dist).unwrap();
        let ((f1, _), (f0, _)) = value_gradient_fd(&eq, &dist, 1e-6).unwrap();
        let scale = r.value.abs().max(1e-3);
        prop_assert!((r.grad_q1 - f1).abs() <= 1e-5 * scale.max(f1.abs()), "{} vs {f1}", r.grad_q1);
        prop_assert!((r.grad_q0 - f0).abs() <= 1e-5 * scale.max(f0.abs()), "{} vs {f0}", r.grad_q0);
        prop_assert!(r.screening_term[0] >= 0.0 && r.screening_term[1] >= 0.0);
        prop_assert!(r.profit_term[0] <= 0.0 && r.profit_term[1] <= 0.0);
    }

    #[test]
    fn value_is_positive(dist in dists(), q1 in 0.001..0.5_f64, q0 in 0.001..0.5_f64) {
        prop_assert!(firm_value(&solve(0.24, 0.24, q1, q0), &dist).unwrap() > 0.0);
    }

    #[test]
    fn constant_matching_weight_changes_nothing(
        dist in dists(), q in 0.01..0.5_f64, w in 0.1..10.0_f64
    ) {
        let eq = solve(0.2, 0.3, q, q);
        let a = firm_value(&eq, &dist).unwrap();
        let b = firm_value_weighted(&eq, &dist, &MatchingWeight::new(move |_| w)).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}
