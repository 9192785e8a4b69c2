use lifshitz_core::dielectric::Oscillator;
use lifshitz_core::plasma_gap::{screened_free_energy, vacuum_gap_free_energy, PlasmaGapParams};
use lifshitz_core::planar_kernel::{log_dispersion, reflection};
use lifshitz_core::quantities::{Dimension, Quantity};
use lifshitz_core::resonance::{
    resonance_closed_form, resonance_integral, resonance_series, resummed_sum, PolarizabilityModel, ResonanceQuery,
};
use lifshitz_core::{DielectricModel, Execution, LifshitzEngine, PlanarScenario, Sign, UnitSystem, CONSTANTS};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = DielectricModel> {
    prop_oneof![
        (1.0f64..20.0).prop_map(|e| DielectricModel::constant(e).unwrap()),
        (1e14f64..3e16).prop_map(|w| DielectricModel::plasma(w).unwrap()),
        (1e14f64..3e16, 1e12f64..1e15).prop_map(|(w, g)| DielectricModel::drude(w, g).unwrap()),
        (0.1f64..10.0, 1e14f64..1e17).prop_map(|(s, w)| DielectricModel::oscillator(vec![Oscillator {
            strength: s,
            omega0: w
        }])
        .unwrap()),
    ]
}

/// Σ'ₙ e^{−xn}(1 + xn + x²n²) summed geometrically, with q = e^{−x}.
fn geometric_oracle(x: f64) -> f64 {
    let q = (-x).exp();
    let p = -(-x).exp_m1();
    -0.5 + 1.0 / p + x * q / (p * p) + x * x * q * (1.0 + q) / (p * p * p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permittivity_decreases_along_imaginary_axis(m in model(), xi in 1e10f64..1e17, f in 1.001f64..10.0) {
        let lo = m.eps_imag_axis(xi).unwrap().finite().unwrap();
        let hi = m.eps_imag_axis(xi * f).unwrap().finite().unwrap();
        prop_assert!(lo >= 1.0);
        prop_assert!(hi <= lo);
    }

    #[test]
    fn log_dispersion_is_nonpositive(m in model(), kappa in 0.0f64..1e8, xi in 0.0f64..1e16, d in 1e-8f64..1e-4) {
        let s = PlanarScenario::new(m, DielectricModel::Vacuum, d, 300.0).unwrap();
        if xi == 0.0 && kappa == 0.0 {
            return Ok(());
        }
        let (te, tm) = reflection(&s, kappa, xi).unwrap();
        prop_assert!(te.abs() <= 1.0 && tm.abs() <= 1.0);
        prop_assert!(log_dispersion(&s, kappa, xi).unwrap() <= 0.0);
    }

    #[test]
    fn reflection_is_antisymmetric_under_swap(a in model(), b in model(), kappa in 1.0f64..1e8, xi in 1e10f64..1e16) {
        let ab = PlanarScenario::new(a.clone(), b.clone(), 1e-6, 300.0).unwrap();
        let ba = PlanarScenario::new(b, a, 1e-6, 300.0).unwrap();
        let (te1, tm1) = reflection(&ab, kappa, xi).unwrap();
        let (te2, tm2) = reflection(&ba, kappa, xi).unwrap();
        prop_assert!((te1 + te2).abs() <= 1e-14);
        prop_assert!((tm1 + tm2).abs() <= 1e-14);
    }

    #[test]
    fn resummation_identity_holds(log_x in -3.0f64..1.7) {
        let x = 10f64.powf(log_x);
        let closed = resummed_sum(x);
        prop_assert!((closed / geometric_oracle(x) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn resonance_is_odd_in_sign(d in 1e-9f64..1e-5, t in 1.0f64..3000.0, log_alpha in -31.0f64..-28.0) {
        let alpha0 = 10f64.powf(log_alpha);
        let pol = PolarizabilityModel::london(alpha0, 3e15).unwrap();
        let plus = ResonanceQuery::new(d, t, Sign::Plus).unwrap();
        let minus = ResonanceQuery::new(d, t, Sign::Minus).unwrap();
        prop_assert_eq!(
            resonance_series(&plus, &pol, 1e-10).unwrap().value,
            -resonance_series(&minus, &pol, 1e-10).unwrap().value
        );
        prop_assert_eq!(
            resonance_closed_form(&plus, alpha0).unwrap(),
            -resonance_closed_form(&minus, alpha0).unwrap()
        );
    }

    #[test]
    fn screening_reduces_magnitude(kd in 0.0f64..6.0, step in 0.05f64..1.0) {
        let d = 1e-6;
        let a = PlasmaGapParams::with_kappa(d, 300.0, kd / d).unwrap();
        let b = PlasmaGapParams::with_kappa(d, 300.0, (kd + step) / d).unwrap();
        let fa = screened_free_energy(&a, 1e-10).unwrap().value;
        let fb = screened_free_energy(&b, 1e-10).unwrap().value;
        prop_assert!(fb.abs() < fa.abs());
    }

    #[test]
    fn unit_conversion_round_trips(v in -1e10f64..1e10) {
        for dim in [Dimension::Energy, Dimension::EnergyPerArea, Dimension::Pressure, Dimension::Length, Dimension::Temperature, Dimension::Frequency] {
            let q = Quantity::si(v, dim);
            let back = q.convert(UnitSystem::NaturalNuclear).convert(UnitSystem::Si);
            prop_assert!((back.value - v).abs() <= 1e-15 * v.abs());
        }
    }
}

#[test]
fn identity_on_log_grid() {
    for k in 0..=60 {
        let x = 10f64.powf(-3.0 + 5.0 * k as f64 / 60.0);
        let direct: f64 = 0.5 + (1..2_000_000)
            .map(|n| {
                let y = x * n as f64;
                (-y).exp() * (1.0 + y + y * y)
            })
            .take_while(|t| *t > 0.0)
            .sum::<f64>();
        let closed = resummed_sum(x);
        assert!((closed / geometric_oracle(x) - 1.0).abs() < 1e-12, "x = {x}");
        assert!((closed / direct - 1.0).abs() < 1e-10, "x = {x}");
    }
}

#[test]
#[allow(clippy::excessive_precision)]
fn high_precision_identity_values() {
    // 20-digit reference values of the primed sum
    let cases = [
        (0.01, 399.99999999444449735),
        (0.1, 39.999994449732474881),
        (1.0, 3.9949450682021061363),
        (10.0, 0.50504026003643730703),
    ];
    for (x, expected) in cases {
        assert!((resummed_sum(x) / expected - 1.0).abs() < 1e-13, "x = {x}");
    }
}

#[test]
fn screened_at_zero_kappa_is_the_vacuum_gap() {
    for (d, t) in [(1e-7, 10.0), (1e-6, 300.0), (1e-5, 3000.0)] {
        let a = screened_free_energy(&PlasmaGapParams::with_kappa(d, t, 0.0).unwrap(), 1e-10).unwrap();
        let b = vacuum_gap_free_energy(d, t, 1e-10).unwrap();
        assert_eq!(a.value, b.value);
    }
}

#[test]
fn sequential_and_parallel_agree_bitwise() {
    let seq = LifshitzEngine::with_execution(Execution::Sequential);
    let par = LifshitzEngine::with_execution(Execution::Parallel);
    let scenarios = [
        PlanarScenario::new(DielectricModel::drude_ev(9.0, 0.035).unwrap(), DielectricModel::Vacuum, 3e-7, 300.0)
            .unwrap(),
        PlanarScenario::new(
            DielectricModel::constant(4.0).unwrap(),
            DielectricModel::constant(2.0).unwrap(),
            1e-6,
            77.0,
        )
        .unwrap(),
    ];
    for s in &scenarios {
        let a = seq.free_energy(s, 1e-9).unwrap();
        let b = par.free_energy(s, 1e-9).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.abs_error.to_bits(), b.abs_error.to_bits());
        let a0 = seq.free_energy_zero_t(s, 1e-8).unwrap();
        let b0 = par.free_energy_zero_t(s, 1e-8).unwrap();
        assert_eq!(a0.value.to_bits(), b0.value.to_bits());
    }
    let drude = &scenarios[0].with_separation(1e-6);
    let a = seq.extra_term(drude, 1e-5, 2).unwrap();
    let b = par.extra_term(drude, 1e-5, 2).unwrap();
    assert_eq!(a.value_real.to_bits(), b.value_real.to_bits());
}

#[test]
fn plus_branch_is_monotone_in_distance() {
    let pol = PolarizabilityModel::london(1e-30, 1e16).unwrap();
    let mut prev = f64::INFINITY;
    for k in 0..20 {
        let d = 1e-9 * 10f64.powf(k as f64 / 4.0);
        let u = resonance_integral(d, &pol, Sign::Plus, 1e-9).unwrap().value;
        assert!(u > 0.0 && u < prev, "d = {d}");
        prev = u;
    }
    let _ = CONSTANTS;
}
