use std::f64::consts::PI;

use lifshitz_core::lifshitz_engine::{classical_ideal_energy, ideal_casimir_energy};
use lifshitz_core::planar_kernel::log_dispersion_off_axis;
use lifshitz_core::plasma_gap::{
    nuclear_demo, pair_density, screened_expansion, screened_free_energy, vacuum_gap_expansion,
    vacuum_gap_free_energy, PlasmaGapParams, DEMO_DISCLAIMER,
};
use lifshitz_core::quadrature::{integrate, integrate_decaying, QuadOptions};
use lifshitz_core::resonance::{
    field_susceptibility, resonance_integral, resonance_n0, resonance_series, PolarizabilityModel, ResonanceQuery,
};
use lifshitz_core::{
    drude_plasma_ratio, extra_term, free_energy, free_energy_zero_t, DielectricModel, Error, PlanarScenario, Sign,
    CONSTANTS,
};
use num_complex::Complex64;

fn ideal(d: f64, t: f64) -> PlanarScenario {
    PlanarScenario::new(DielectricModel::IdealMetal, DielectricModel::Vacuum, d, t).unwrap()
}

#[test]
fn engine_matches_polylog_path_on_grid() {
    for d in [1e-7, 1e-6, 1e-5] {
        for t in [3.0, 300.0, 3000.0] {
            let a = vacuum_gap_free_energy(d, t, 1e-12).unwrap();
            let b = free_energy(&ideal(d, t), 1e-9).unwrap();
            assert!(
                (a.value - b.value).abs() <= a.abs_error + b.abs_error,
                "d = {d}, T = {t}: {} vs {}",
                a.value,
                b.value
            );
        }
    }
}

#[test]
fn zero_temperature_engine_is_the_low_temperature_limit() {
    let d = 1e-6;
    let f0 = free_energy_zero_t(&ideal(d, 0.0), 1e-9).unwrap().value;
    assert!((f0 / ideal_casimir_energy(d) - 1.0).abs() < 1e-8);
    let cold = free_energy(&ideal(d, 1.0), 1e-10).unwrap().value;
    assert!((cold / f0 - 1.0).abs() < 1e-6);
}

#[test]
fn expansion_terms_scale_as_printed() {
    let (c1, t3a, t4a) = vacuum_gap_expansion(1e-6, 300.0).unwrap();
    let (c2, t3b, t4b) = vacuum_gap_expansion(2e-6, 300.0).unwrap();
    assert!((c1 / c2 - 8.0).abs() < 1e-12);
    assert_eq!(t3a, t3b);
    assert!((t4b / t4a - 2.0).abs() < 1e-14);
    assert!((c1 / ideal_casimir_energy(1e-6) - 1.0).abs() < 1e-15);
}

#[test]
fn screened_n0_matches_asymptotic_integral() {
    let d = 1e-6;
    let t = 300.0;
    let p = PlasmaGapParams::with_kappa(d, t, 5.0 / d).unwrap();
    let f = screened_free_energy(&p, 1e-10).unwrap();
    let kappa = p.kappa_pl;
    // (k_BT/2π) ∫_κ^∞ s e^{−2ds} ds, the leading image term of the n = 0 integral
    let oracle = -CONSTANTS.k_b * t / (2.0 * PI) * (-2.0 * kappa * d).exp() * (kappa / (2.0 * d) + 1.0 / (4.0 * d * d));
    let n0 = f.term(0).unwrap().total();
    assert!((n0 / oracle - 1.0).abs() < 1e-4);
    let (expansion, _) = screened_expansion(&p);
    assert!((expansion / oracle - 1.0).abs() < 1e-14);
}

#[test]
fn screened_expansion_limits() {
    let d = 1e-6;
    let zero = PlasmaGapParams::with_kappa(d, 300.0, 0.0).unwrap();
    let (n0, _) = screened_expansion(&zero);
    assert!((n0 / (-CONSTANTS.k_b * 300.0 / (8.0 * PI * d * d)) - 1.0).abs() < 1e-15);
    let mut prev = f64::INFINITY;
    for k in 1..10 {
        let p = PlasmaGapParams::with_kappa(d * k as f64, 300.0, 2e6).unwrap();
        let (a, b) = screened_expansion(&p);
        assert!(a.abs() < prev && b < 0.0);
        prev = a.abs();
    }
}

#[test]
fn pair_density_derived_screening() {
    let p = PlasmaGapParams::from_pair_density(1e-6, 1e10).unwrap();
    let rho = pair_density(1e10).unwrap();
    let omega_p = (4.0 * PI * rho * CONSTANTS.alpha_fs * CONSTANTS.hbar_c() / CONSTANTS.m_e).sqrt();
    assert!((p.kappa_pl / (omega_p / CONSTANTS.c) - 1.0).abs() < 1e-14);
    assert!((p.eta / (2.0 * CONSTANTS.k_b * 1e10 / CONSTANTS.hbar_c()) - 1.0).abs() < 1e-15);
}

#[test]
fn nuclear_demo_parameter_set() {
    // d = 1 fm with the temperature set to a 140 MeV mass scale
    let t = 140.0 * lifshitz_core::quantities::MEV / CONSTANTS.k_b;
    let r = nuclear_demo(1.0, t, None).unwrap();
    assert_eq!(r.disclaimer, DEMO_DISCLAIMER);
    assert!((0.1..=10.0).contains(&r.term_n0_mev.abs()), "{r:?}");
}

#[test]
fn high_temperature_classical_limit() {
    let d = 2e-6;
    let t = CONSTANTS.temperature_for_ratio(d, 25.0);
    let f = free_energy(&ideal(d, t), 1e-9).unwrap().value;
    assert!((f / classical_ideal_energy(d, t) - 1.0).abs() < 1e-9);
}

#[test]
fn drude_plasma_ratio_limits() {
    let d = 20e-6;
    let t = CONSTANTS.temperature_for_ratio(d, 25.0);
    let wp = CONSTANTS.ev_to_rad_per_s(9.0);
    let r = drude_plasma_ratio(d, t, wp, CONSTANTS.ev_to_rad_per_s(0.035), 1e-8).unwrap();
    assert!((0.5..0.55).contains(&r));
    // γ = 0 is the plasma model itself
    assert_eq!(drude_plasma_ratio(d, t, wp, 0.0, 1e-8).unwrap(), 1.0);
    // the n = 0 TE term does not return as γ → 0⁺
    let tiny = drude_plasma_ratio(d, t, wp, 1e-6, 1e-8).unwrap();
    assert!(tiny < 0.55);
}

#[test]
fn plasma_model_te_term_is_suppressed_without_dissipation() {
    let s = PlanarScenario::new(DielectricModel::drude_ev(9.0, 0.035).unwrap(), DielectricModel::Vacuum, 1e-6, 300.0)
        .unwrap();
    let f = free_energy(&s, 1e-8).unwrap();
    assert_eq!(f.term(0).unwrap().te, 0.0);
}

/// The first sine-series term by a direct double integral in (ξ, κ).
fn extra_term_n1_direct(s: &PlanarScenario) -> Complex64 {
    let d = s.d;
    let gamma = match s.halfspace {
        DielectricModel::Drude { gamma, .. } => gamma,
        _ => unreachable!(),
    };
    // sin(ħξ/k_BT) = sin(2πξ/ξ₁)
    let xi1 = CONSTANTS.thermal_ratio(d, s.temperature) * CONSTANTS.c / d;
    let inner = |xi: f64| -> Complex64 {
        let q = xi / CONSTANTS.c;
        let out = integrate_decaying(
            |kappa: f64| {
                let p = log_dispersion_off_axis(s, kappa, xi, Sign::Plus)?.as_complex();
                let m = log_dispersion_off_axis(s, kappa, xi, Sign::Minus)?.as_complex();
                Ok((p - m) * kappa)
            },
            0.0,
            (10.0 / d).max(q),
            |k| 50.0 * (k * d * 2.0 + 1.0) * (-2.0 * k * d).exp() / (d * d),
            QuadOptions::relative(1e-9).with_abs(1e-30),
            200,
        )
        .unwrap();
        out.value
    };
    let f = |xi: f64| -> lifshitz_core::Result<Complex64> { Ok(inner(xi) * (2.0 * PI * xi / xi1).sin()) };
    let opts = QuadOptions::relative(1e-8);
    let upper = 40.0 * CONSTANTS.c / (2.0 * d);
    let a = integrate(f, 0.0, gamma, opts).unwrap();
    let b = integrate(f, gamma, upper, opts).unwrap();
    // −(iħ/4π²) ∫dξ sin(..) ∫κ dκ [ln D(+) − ln D(−)]
    (a.value + b.value) * Complex64::new(0.0, -CONSTANTS.hbar / (4.0 * PI * PI))
}

#[test]
fn drude_extra_term_first_harmonic_matches_direct_integral() {
    let s = PlanarScenario::new(DielectricModel::drude_ev(9.0, 0.035).unwrap(), DielectricModel::Vacuum, 1e-6, 300.0)
        .unwrap();
    let ours = extra_term(&s, 1e-7, 1).unwrap();
    let direct = extra_term_n1_direct(&s);
    let scale = direct.norm();
    assert!((ours.value_real - direct.re).abs() < 1e-4 * scale, "{} vs {}", ours.value_real, direct.re);
    assert!((ours.value_imag_part - direct.im).abs() < 1e-4 * scale, "{} vs {}", ours.value_imag_part, direct.im);
    assert!(!ours.pv_windows.is_empty());
    assert_eq!(ours.per_n.len(), 1);
}

#[test]
fn field_susceptibility_reproduces_series_terms() {
    let d = 1e-6;
    let t = 300.0;
    let x = CONSTANTS.thermal_ratio(d, t);
    for n in 1..6u64 {
        let xi = lifshitz_core::quantities::matsubara_frequency(n, t).unwrap();
        let nx = n as f64 * x;
        let expected = (-nx).exp() * (1.0 + nx + nx * nx) / d.powi(3);
        assert!((field_susceptibility(d, xi).unwrap() / expected - 1.0).abs() < 1e-13);
    }
}

#[test]
fn linearized_integral_matches_cold_series() {
    let d = 1e-8;
    let pol = PolarizabilityModel::london(1e-30, 1e15).unwrap();
    assert!(pol.omega0 * d / CONSTANTS.c < 0.05);
    let full = resonance_integral(d, &pol, Sign::Plus, 1e-9).unwrap().value;
    let t = CONSTANTS.temperature_for_ratio(d, 1e-4);
    let cold = resonance_series(&ResonanceQuery::new(d, t, Sign::Plus).unwrap(), &pol, 1e-10).unwrap().value;
    assert!((full / cold - 1.0).abs() < 0.02, "{full} vs {cold}");
}

#[test]
fn retarded_resonance_falls_as_inverse_fourth_power() {
    let pol = PolarizabilityModel::london(1e-30, 1e16).unwrap();
    let (d1, d2) = (1e-5, 1e-4);
    let u1 = resonance_integral(d1, &pol, Sign::Plus, 1e-10).unwrap().value;
    let u2 = resonance_integral(d2, &pol, Sign::Plus, 1e-10).unwrap().value;
    let slope = (u2 / u1).ln() / (d2 / d1).ln();
    assert!((slope + 4.0).abs() < 0.05, "slope {slope}");
}

#[test]
fn resonance_n0_examples() {
    let v = resonance_n0(10e-9, 300.0, 1e-29, Sign::Plus).unwrap();
    assert!((v - 4.142e-26).abs() < 1e-3 * 4.142e-26);
    let hot = resonance_n0(10e-9, 600.0, 1e-29, Sign::Plus).unwrap();
    assert_eq!(hot, 2.0 * v);
}

#[test]
fn resonance_large_x_is_classical() {
    let d = 1e-6;
    let t = CONSTANTS.temperature_for_ratio(d, 40.0);
    let pol = PolarizabilityModel::static_only(1e-29).unwrap();
    let q = ResonanceQuery::new(d, t, Sign::Plus).unwrap();
    let s = resonance_series(&q, &pol, 1e-12).unwrap().value;
    assert!((s / resonance_n0(d, t, 1e-29, Sign::Plus).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn errors_are_typed() {
    assert!(matches!(free_energy(&ideal(1e-6, 300.0), 1.0), Err(Error::Domain(_))));
    assert!(matches!(free_energy(&ideal(1e-6, 0.0), 1e-6), Err(Error::Domain(_))));
    let p = PlasmaGapParams::with_kappa(1e-6, 300.0, -1.0);
    assert!(p.is_err());
}
