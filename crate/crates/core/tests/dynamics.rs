use proptest::prelude::*;
use qslcv::dynamics::{
    discretized_bath_oracle, markov_amplitude, master_equation_coefficients, solve_amplitude,
    solve_amplitude_with, SolverOptions, StepSize,
};
use qslcv::{Complex64, SpectralParams64};

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn solver_matches_discretized_bath() {
    let p = SpectralParams64::new(0.1, 1.0, 10.0).unwrap();
    let exact = solve_amplitude(&p, 10.0, StepSize::Fixed(0.005)).unwrap();
    let run = discretized_bath_oracle(&p, 10.0, 2000, 150.0, 0.005).unwrap();
    assert!(max_diff(exact.u(), run.trajectory.u()) < 1e-3);
    assert!(run.max_norm_deviation < 1e-8);
}

#[test]
fn auto_step_meets_its_gate() {
    let p = SpectralParams64::new(0.12, 1.0, 10.0).unwrap();
    let auto = solve_amplitude(&p, 10.0, StepSize::Auto).unwrap();
    let reference = solve_amplitude(&p, 10.0, StepSize::Fixed(auto.step() / 4.0)).unwrap();
    let sub: Vec<_> = reference.u().iter().step_by(4).copied().collect();
    assert!(max_diff(auto.u(), &sub) < 1e-5);
}

#[test]
fn interval_cap_is_enforced() {
    let p = SpectralParams64::new(0.12, 1.0, 10.0).unwrap();
    let opts = SolverOptions {
        step: StepSize::Fixed(0.01),
        max_intervals: 100,
        ..SolverOptions::default()
    };
    assert!(matches!(
        solve_amplitude_with(&p, 10.0, &opts),
        Err(qslcv::Error::Numeric(_))
    ));
}

#[test]
#[ignore = "fails: the bath shift lowers the effective rate to about 0.89κ, and |u| drifts 38% from e^{-κt} by t = 3/κ"]
fn weak_coupling_follows_bare_markov_decay() {
    let p = SpectralParams64::new(0.01, 1.0, 10.0).unwrap();
    let kappa = p.markov_decay_rate();
    let traj = solve_amplitude(&p, 3.0 / kappa, StepSize::Fixed(0.01)).unwrap();
    for (t, u) in traj.times().iter().zip(traj.u()) {
        let m = (-kappa * t).exp();
        assert!((u.norm() - m).abs() / m < 0.05, "t={t}");
    }
}

#[test]
fn weak_coupling_follows_shifted_markov_decay() {
    // The pole sits near ω₀ + Δ(ω₀), where the rate is πJ(ω₀ + Δ).
    let p = SpectralParams64::new(0.01, 1.0, 10.0).unwrap();
    let kappa = p.markov_decay_rate();
    let shifted = 1.0 + p.frequency_shift(1.0).unwrap();
    let rate = std::f64::consts::PI * p.spectral_density(shifted).unwrap();
    let traj = solve_amplitude(&p, 3.0 / kappa, StepSize::Fixed(0.01)).unwrap();
    for (t, u) in traj.times().iter().zip(traj.u()) {
        let m = (-rate * t).exp();
        assert!(
            (u.norm() - m).abs() / m < 0.05,
            "t={t}: {} vs {m}",
            u.norm()
        );
    }
    let c = master_equation_coefficients(&traj);
    let n = c.gamma.len() - 1;
    assert!((c.gamma[n] - rate).abs() / rate < 0.05);
    assert!((c.omega[n] - shifted).abs() < 0.01);
}

#[test]
fn markov_phase_includes_shift() {
    let p = SpectralParams64::new(0.05, 1.0, 10.0).unwrap();
    let d = p.frequency_shift(1.0).unwrap();
    let t = 3.0;
    let with = markov_amplitude(&p, t, true).unwrap();
    let without = markov_amplitude(&p, t, false).unwrap();
    let turn = (with / without).arg();
    assert!((turn + d * t).abs() < 1e-12);
}

#[test]
fn single_precision_tracks_double() {
    let p32 = qslcv::SpectralParams32::new(0.12, 1.0, 10.0).unwrap();
    let p64 = SpectralParams64::new(0.12, 1.0, 10.0).unwrap();
    let a = solve_amplitude(&p32, 20.0, StepSize::Fixed(0.01)).unwrap();
    let b = solve_amplitude(&p64, 20.0, StepSize::Fixed(0.01)).unwrap();
    for (x, y) in a.u().iter().zip(b.u()) {
        assert!((x.re as f64 - y.re).abs() < 1e-3 && (x.im as f64 - y.im).abs() < 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modulus_never_exceeds_one(eta in 0.0f64..0.3, s in 0.5f64..3.0, wc in 2.0f64..20.0) {
        let p = SpectralParams64::new(eta, s, wc).unwrap();
        let traj = solve_amplitude(&p, 8.0, StepSize::Fixed(0.01)).unwrap();
        prop_assert!(traj.max_modulus() <= 1.0 + 1e-3);
        prop_assert_eq!(traj.u()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn coefficients_reconstruct_the_amplitude(eta in 0.01f64..0.2, s in 0.5f64..3.0) {
        // u(t) = exp(-∫(γ + iΩ)) along the grid, by the trapezoid rule.
        let p = SpectralParams64::new(eta, s, 10.0).unwrap();
        let traj = solve_amplitude(&p, 4.0, StepSize::Fixed(0.002)).unwrap();
        let c = master_equation_coefficients(&traj);
        let h = traj.step();
        let mut log_u = Complex64::new(0.0, 0.0);
        for i in 1..c.gamma.len() {
            let r0 = Complex64::new(c.gamma[i - 1], c.omega[i - 1]);
            let r1 = Complex64::new(c.gamma[i], c.omega[i]);
            log_u -= (r0 + r1) * (0.5 * h);
        }
        let n = c.gamma.len() - 1;
        prop_assert!((log_u.exp() - traj.u()[n]).norm() < 1e-4);
    }
}
