use proptest::prelude::*;
use wentzell_core::waves::*;

fn observed_orders(p: f64) -> Vec<f64> {
    let speed = WaveSpeed::Power { coef: 1.0, p };
    let profile = WaveProfile { speed: speed.clone(), kind: ProfileKind::SelfSimilar, r_range: (0.1, 1.0), t_range: (0.5, 1.0) };
    let residual = |n: usize| {
        let samples = profile.tabulate(n + 1, n + 1).unwrap();
        claw_residual(&speed, &samples, 0.9 / n as f64, 0.5 / n as f64).unwrap()
    };
    let errors: Vec<f64> = [16, 32, 64, 128].iter().map(|&n| residual(n)).collect();
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn self_similar_residual_is_second_order() {
    for p in [1.0, 2.0, 3.0] {
        let orders = observed_orders(p);
        assert!(orders.iter().all(|&o| o >= 1.8), "p = {p}: {orders:?}");
    }
}

#[test]
fn expression_speed_matches_power_speed() {
    let closed = WaveSpeed::Power { coef: 1.0, p: 2.0 };
    let parsed = WaveSpeed::<f64>::parse("u^2").unwrap();
    for r in [0.1, 0.4, 0.9] {
        let a = self_similar_profile(&closed, r, 0.7).unwrap();
        let b = self_similar_profile(&parsed, r, 0.7).unwrap();
        assert!((a - b).abs() < 1e-10);
        assert!((flux_primitive(&closed, a) - flux_primitive(&parsed, a)).abs() < 1e-9);
    }
}

#[test]
fn constant_traveling_wave_has_zero_residual() {
    let speed = WaveSpeed::Power { coef: 1.0, p: 2.0 };
    let grid: Vec<f64> = (0..50).map(|k| -1.0 + k as f64 / 25.0).collect();
    let report = traveling_wave_check(&speed, &|_| 0.7, speed.a(0.7), &grid).unwrap();
    assert_eq!(report.eigen_residual, 0.0);
    assert_eq!(report.claw_residual, 0.0);
}

#[test]
fn nonconstant_traveling_wave_with_linear_speed() {
    let speed = WaveSpeed::Constant(1.5);
    let grid: Vec<f64> = (0..40).map(|k| k as f64 / 40.0).collect();
    let report = traveling_wave_check(&speed, &|z: f64| z.sin(), 1.5, &grid).unwrap();
    assert!(report.eigen_residual < 1e-12 && report.claw_residual < 1e-6, "{report:?}");
    let wrong = traveling_wave_check(&speed, &|z: f64| z.sin(), 1.0, &grid).unwrap();
    assert!(wrong.claw_residual > 0.1);
}

#[test]
fn profile_rejects_points_outside_window() {
    let profile = WaveProfile {
        speed: WaveSpeed::Power { coef: 1.0, p: 1.0 },
        kind: ProfileKind::SelfSimilar,
        r_range: (0.1, 1.0),
        t_range: (0.5, 1.0),
    };
    assert!(profile.sample(2.0, 0.75).is_err());
    assert!(profile.sample(0.5, 0.1).is_err());
    assert!(claw_residual(&profile.speed, &profile.tabulate(3, 3).unwrap(), 0.45, 0.25).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn primitive_increases_with_positive_speed(coef in 0.1f64..3.0, p in 0.0f64..4.0, u in -3.0f64..3.0, du in 0.001f64..2.0) {
        let speed = WaveSpeed::Power { coef, p };
        prop_assert!(flux_primitive(&speed, u + du) > flux_primitive(&speed, u));
    }

    #[test]
    fn self_similar_profile_inverts_speed(coef in 0.1f64..3.0, p in 0.5f64..4.0, r in 0.0f64..2.0, t in 0.1f64..2.0) {
        let speed = WaveSpeed::Power { coef, p };
        let u = self_similar_profile(&speed, r, t).unwrap();
        prop_assert!(u >= 0.0);
        prop_assert!((speed.a(u) - r / t).abs() <= 1e-10 * (1.0 + r / t));
    }

    #[test]
    fn bisection_inverse_matches_closed_form(p in 0.5f64..3.0, zeta in 0.01f64..4.0) {
        let parsed = WaveSpeed::<f64>::parse(&format!("abs(u)^{p}")).unwrap();
        let u = self_similar_profile(&parsed, zeta, 1.0).unwrap();
        let exact = zeta.powf(1.0 / p);
        prop_assert!((u - exact).abs() <= 1e-9 * (1.0 + exact));
    }
}
