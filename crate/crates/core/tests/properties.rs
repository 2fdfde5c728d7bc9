use std::f64::consts::PI;

use proptest::prelude::*;
use winter_core::eigen::{jump_condition_residual, reduced_phase};
use winter_core::quadrature::integrate_with_breaks;
use winter_core::spectrum::spectral_fn;
use winter_core::{
    bracket_for, eval_exceptional_eigenfunction, eval_normal_eigenfunction, inside_amplitude,
    level_derivative, phase_shift, solve_level, solve_level_with, strong_coupling_limit, Form,
    ModelConfig, SolverOptions,
};

fn cfg(g: f64, n: u32) -> ModelConfig {
    ModelConfig::new(g, n).unwrap()
}

fn overlap<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(a: F, b: G, c: &ModelConfig) -> f64 {
    integrate_with_breaks(|x| a(x) * b(x), &[0.0, PI, c.length()], 1e-12)
        .unwrap()
        .value
}

fn wrap(d: f64) -> f64 {
    // distance between angles on the circle
    let r = d.rem_euclid(2.0 * PI);
    r.min(2.0 * PI - r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn root_lies_inside_its_bracket(cavity in 1u32..200, s_frac in 0.0f64..1.0, lg in -6.0f64..4.0) {
        let s = 1 + (s_frac * f64::from(3 * cavity)) as u32;
        let g = 10f64.powf(lg);
        let lev = solve_level(&cfg(g, cavity), s, 1e-13).unwrap();
        let (lo, hi) = bracket_for(s, cavity);
        prop_assert!(lev.k > lo && lev.k < hi);
        prop_assert!(lev.offset > 0.0 && lev.offset < 1.0 / f64::from(cavity));
        // F changes sign across the root and nowhere else in the bracket
        let c = cfg(g, cavity);
        let eps = 1e-9 / f64::from(cavity);
        if lev.k - eps > lo && lev.k + eps < hi {
            prop_assert!(spectral_fn(lev.k - eps, &c).unwrap() > 0.0);
            prop_assert!(spectral_fn(lev.k + eps, &c).unwrap() < 0.0);
        }
    }

    #[test]
    fn levels_decrease_with_coupling(cavity in 1u32..100, s in 1u32..300, lg in -5.0f64..3.0, ratio in 1.01f64..3.0) {
        let g = 10f64.powf(lg);
        let opts = SolverOptions::with_tol(1e-15);
        let a = solve_level_with(&cfg(g, cavity), s, &opts).unwrap();
        let b = solve_level_with(&cfg(g * ratio, cavity), s, &opts).unwrap();
        // offsets grow, so momenta fall
        prop_assert!(b.offset > a.offset);
        prop_assert!(level_derivative(&cfg(g, cavity), s).unwrap() < 0.0);
    }

    #[test]
    fn limits_pin_the_level(cavity in 1u32..60, s in 1u32..200) {
        let weak = solve_level(&cfg(1e-9, cavity), s, 1e-14).unwrap();
        prop_assert!(weak.offset < 1e-6);
        let strong = solve_level(&cfg(1e9, cavity), s, 1e-14).unwrap();
        prop_assert!((strong.k - strong_coupling_limit(s, cavity)).abs() < 1e-6);
    }

    #[test]
    fn amplitude_and_phase_are_periodic(cavity in 2u32..=20, k in 0.001f64..0.999) {
        prop_assert!((inside_amplitude(k + 1.0, cavity) - inside_amplitude(k, cavity)).abs() < 1e-9 * f64::from(cavity));
        if (f64::from(cavity) * k).fract().min(1.0 - (f64::from(cavity) * k).fract()) > 1e-6 {
            prop_assert!(wrap(phase_shift(k + 1.0, cavity) - phase_shift(k, cavity)) < 1e-9);
        }
    }

    #[test]
    fn reduced_phase_agrees_modulo_pi(cavity in 1u32..50, k in 0.001f64..20.0) {
        let nk = f64::from(cavity) * k;
        prop_assume!((nk - nk.round()).abs() > 1e-6 && (k - k.round()).abs() > 1e-6);
        let d = phase_shift(k, cavity) - reduced_phase(k, cavity);
        let r = d.rem_euclid(PI);
        prop_assert!(r.min(PI - r) < 1e-8);
    }

    #[test]
    fn eigenfunctions_are_normalized(cavity in 1u32..30, s_frac in 0.0f64..1.0, lg in -3.0f64..1.0) {
        let s = 1 + (s_frac * f64::from(2 * cavity)) as u32;
        let c = cfg(10f64.powf(lg), cavity);
        let k = solve_level(&c, s, 1e-14).unwrap().k;
        for form in [Form::Product, Form::AmplitudePhase] {
            let psi = |x: f64| eval_normal_eigenfunction(k, x, &c, form).unwrap();
            prop_assert!((overlap(psi, psi, &c) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn jump_condition_holds_only_at_roots(cavity in 1u32..50, s in 1u32..100, lg in -3.0f64..1.0, shift in 0.05f64..0.95) {
        let c = cfg(10f64.powf(lg), cavity);
        let lev = solve_level(&c, s, 1e-14).unwrap();
        let (lo, hi) = bracket_for(s, cavity);
        let other = lo + shift * (hi - lo);
        prop_assume!((other - lev.k).abs() > 1e-3 * (hi - lo));
        for form in [Form::Product, Form::AmplitudePhase] {
            prop_assert!(jump_condition_residual(lev.k, &c, form).unwrap().abs() < 1e-8);
            prop_assert!(jump_condition_residual(other, &c, form).unwrap().abs() > 1e-8);
        }
    }
}

#[test]
fn distinct_levels_are_orthogonal() {
    for (g, cavity) in [(0.05, 9u32), (0.3, 4), (0.01, 20)] {
        let c = cfg(g, cavity);
        let ks: Vec<f64> = (1..=2 * cavity)
            .map(|s| solve_level(&c, s, 1e-14).unwrap().k)
            .collect();
        let psi =
            |k: f64| move |x: f64| eval_normal_eigenfunction(k, x, &c, Form::Product).unwrap();
        for (i, &a) in ks.iter().enumerate() {
            for &b in &ks[i + 1..] {
                assert!(
                    overlap(psi(a), psi(b), &c).abs() < 1e-7,
                    "g={g} N={cavity} {a} {b}"
                );
            }
            let exc = |x: f64| eval_exceptional_eigenfunction(1, x, &c).unwrap();
            assert!(overlap(psi(a), exc, &c).abs() < 1e-7);
        }
    }
}

#[test]
fn exceptional_eigenfunctions_are_normalized() {
    for cavity in [1u32, 4, 9, 30] {
        let c = cfg(0.1, cavity);
        for n in 1..=3 {
            let phi = |x: f64| eval_exceptional_eigenfunction(n, x, &c).unwrap();
            assert!((overlap(phi, phi, &c) - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn exact_quantization_oracle() {
    // F(1/4) at N = 3, g = 1: cot(π/4) + cot(3π/4) + 4/π
    let v = spectral_fn(0.25, &cfg(1.0, 3)).unwrap();
    assert!((v - 4.0 / PI).abs() < 1e-14);
}
