//! Ideal-metal plates across vacuum or across an electron–positron plasma.
//!
//! For perfectly reflecting plates the κ-integral has a closed form. With
//! a² = (ξₙ/c)² + κ_pl² and s = √(q² + a²),
//!
//! ```text
//! ∫₀^∞ q ln(1 − e^{−2d√(q²+a²)}) dq = −[ a Li₂(e^{−2da})/(2d) + Li₃(e^{−2da})/(4d²) ],
//! ```
//!
//! so the free energy is a single Matsubara sum of polylogarithms. This path
//! shares no quadrature with [`crate::lifshitz_engine`], which makes it a
//! useful cross-check of the engine's ideal-metal results.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lifshitz_engine::{check_tol, EnergyResult, MatsubaraGrid, TermContribution};
use crate::quantities::{Dimension, Quantity, UnitSystem, CONSTANTS, FM};
use crate::special::{li2, li3};

const MAX_TERMS: usize = 1_000_000;

pub const DEMO_DISCLAIMER: &str = "order-of-magnitude demo — parameters not fixed by published data";

/// Where the screening wave number came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum KappaSource {
    Vacuum,
    Given,
    /// κ = ω_p/c with ω_p² = 4πρe²/m_e from the thermal pair density.
    PairDensity { omega_p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlasmaGapParams {
    /// m
    pub d: f64,
    /// K
    pub temperature: f64,
    /// Screening wave number ω_p/c, 1/m.
    pub kappa_pl: f64,
    /// 2k_BT/(ħc), 1/m.
    pub eta: f64,
    /// Pair density, 1/m³.
    pub rho: f64,
    /// ρe²ħ²/(πm_e k_B²T²), dimensionless.
    pub rho_star: f64,
    pub kappa_source: KappaSource,
}

impl PlasmaGapParams {
    fn build(d: f64, temperature: f64, kappa_pl: f64, rho: f64, kappa_source: KappaSource) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::domain(format!("d must be > 0, got {d}")));
        }
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::domain(format!("T must be > 0, got {temperature}")));
        }
        if !(kappa_pl >= 0.0 && kappa_pl.is_finite()) {
            return Err(Error::domain(format!("kappa_pl must be >= 0, got {kappa_pl}")));
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::domain(format!("rho must be >= 0, got {rho}")));
        }
        let c = &CONSTANTS;
        let kt = c.k_b * temperature;
        let rho_star = rho * c.e_squared() * c.hbar * c.hbar / (PI * c.m_e * kt * kt);
        Ok(Self {
            d,
            temperature,
            kappa_pl,
            eta: 2.0 * kt / c.hbar_c(),
            rho,
            rho_star,
            kappa_source,
        })
    }

    /// Unscreened gap; ρ is still the thermal pair density so ρ* is defined.
    pub fn vacuum(d: f64, temperature: f64) -> Result<Self> {
        Self::build(d, temperature, 0.0, pair_density_unchecked(temperature), KappaSource::Vacuum)
    }

    pub fn with_kappa(d: f64, temperature: f64, kappa_pl: f64) -> Result<Self> {
        Self::build(d, temperature, kappa_pl, pair_density_unchecked(temperature), KappaSource::Given)
    }

    /// κ from the thermal pair density at `temperature`.
    pub fn from_pair_density(d: f64, temperature: f64) -> Result<Self> {
        let rho = pair_density(temperature)?;
        let omega_p = plasma_frequency(rho);
        Self::build(d, temperature, omega_p / CONSTANTS.c, rho, KappaSource::PairDensity { omega_p })
    }

    pub fn thermal_ratio(&self) -> f64 {
        CONSTANTS.thermal_ratio(self.d, self.temperature)
    }
}

/// ω_p = √(4πρe²/m_e), rad/s.
pub fn plasma_frequency(rho: f64) -> f64 {
    (4.0 * PI * rho * CONSTANTS.e_squared() / CONSTANTS.m_e).sqrt()
}

fn pair_density_unchecked(temperature: f64) -> f64 {
    let c = &CONSTANTS;
    let y = c.k_b * temperature / c.hbar_c();
    3.0 * c.zeta3 * y * y * y / (PI * PI)
}

/// Electron plus positron number density of the thermal pair plasma, 1/m³.
pub fn pair_density(temperature: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::domain(format!("T must be > 0, got {temperature}")));
    }
    Ok(pair_density_unchecked(temperature))
}

/// ∫₀^∞ q ln(1 − e^{−2d√(q²+a²)}) dq.
fn plate_integral(a: f64, d: f64) -> f64 {
    if a == 0.0 {
        return -CONSTANTS.zeta3 / (4.0 * d * d);
    }
    let z = (-2.0 * d * a).exp();
    -(a * li2(z) / (2.0 * d) + li3(z) / (4.0 * d * d))
}

/// Σ_{n>N} of the bound (u+1)/(4d²(eᵘ−1)), u = 2nx, on |plate_integral(a_n)|.
fn series_tail_bound(n_last: usize, x: f64, d: f64) -> f64 {
    let r = (-2.0 * x).exp();
    let m = (n_last + 1) as f64;
    let rm = (-2.0 * x * m).exp();
    let one_minus_r = -(-2.0 * x).exp_m1();
    let geometric = rm * ((2.0 * m * x + 1.0) / one_minus_r + 2.0 * x * r / (one_minus_r * one_minus_r));
    geometric / (4.0 * d * d * -(-2.0 * x * m).exp_m1())
}

/// Finite-temperature free energy of ideal plates across the screened gap.
pub fn screened_free_energy(params: &PlasmaGapParams, tol: f64) -> Result<EnergyResult> {
    check_tol(tol)?;
    let PlasmaGapParams { d, temperature, kappa_pl, .. } = *params;
    let x = params.thermal_ratio();
    let prefactor = CONSTANTS.k_b * temperature / PI;
    let q1 = x / d;

    let mut breakdown = Vec::new();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut n = 0usize;
    loop {
        let a = ((n as f64 * q1).powi(2) + kappa_pl * kappa_pl).sqrt();
        let weight = if n == 0 { 0.5 } else { 1.0 };
        let term = prefactor * weight * plate_integral(a, d);
        sum += term;
        abs_sum += term.abs();
        let xi = n as f64 * q1 * CONSTANTS.c;
        breakdown.push(TermContribution {
            n,
            xi,
            te: 0.5 * term,
            tm: 0.5 * term,
        });
        let tail = prefactor * series_tail_bound(n, x, d);
        if tail <= 0.1 * tol * sum.abs() || tail < f64::MIN_POSITIVE {
            let abs_error = tail + 4.0 * f64::EPSILON * abs_sum;
            return Ok(EnergyResult {
                value: sum,
                abs_error,
                te_value: 0.5 * sum,
                tm_value: 0.5 * sum,
                n_terms_used: n + 1,
                quad_evals: 0,
                tail_estimate: tail,
                grid: Some(MatsubaraGrid::new(temperature, n, tail)?),
                breakdown: Some(breakdown),
            });
        }
        n += 1;
        if n >= MAX_TERMS {
            let partial = EnergyResult {
                value: sum,
                abs_error: tail,
                te_value: 0.5 * sum,
                tm_value: 0.5 * sum,
                n_terms_used: n,
                quad_evals: 0,
                tail_estimate: tail,
                grid: None,
                breakdown: Some(breakdown),
            };
            return Err(Error::Convergence {
                reason: format!("pair-plasma Matsubara sum exceeded {MAX_TERMS} terms"),
                partial: Some(Box::new(partial)),
            });
        }
    }
}

/// Ideal plates across vacuum at finite temperature.
pub fn vacuum_gap_free_energy(d: f64, temperature: f64, tol: f64) -> Result<EnergyResult> {
    screened_free_energy(&PlasmaGapParams::vacuum(d, temperature)?, tol)
}

/// Low-temperature expansion terms, J/m²: (Casimir, T³, T⁴).
pub fn vacuum_gap_expansion(d: f64, temperature: f64) -> Result<(f64, f64, f64)> {
    if !(d > 0.0) || !(temperature >= 0.0) {
        return Err(Error::domain("need d > 0 and T >= 0"));
    }
    let c = &CONSTANTS;
    let hc = c.hbar_c();
    let kt = c.k_b * temperature;
    let casimir = -PI * PI * hc / (720.0 * d.powi(3));
    let t3 = -c.zeta3 * kt.powi(3) / (2.0 * PI * c.hbar * c.hbar * c.c * c.c);
    let t4 = PI * PI * d * kt.powi(4) / (45.0 * hc.powi(3));
    Ok((casimir, t3, t4))
}

/// Yukawa-type expansion of the screened energy, J/m²: (n = 0 term, n > 0 term).
pub fn screened_expansion(params: &PlasmaGapParams) -> (f64, f64) {
    let PlasmaGapParams { d, temperature, kappa_pl, eta, rho_star, .. } = *params;
    let kt = CONSTANTS.k_b * temperature;
    let term_n0 = if kappa_pl == 0.0 {
        // κ → 0 limit of the bracketed product
        -kt / (8.0 * PI * d * d)
    } else {
        -(kt * kappa_pl / (4.0 * PI)) * ((-2.0 * kappa_pl * d).exp() / d) * (1.0 + 1.0 / (2.0 * d * kappa_pl))
    };
    let term_n_pos = -(kt * kt / CONSTANTS.hbar_c()) * (-2.0 * eta * d).exp() * (-rho_star * eta * d).exp() / d;
    (term_n0, term_n_pos)
}

#[derive(Debug, Clone, Serialize)]
pub struct NuclearDemoReport {
    pub disclaimer: &'static str,
    pub d_fm: f64,
    /// Temperature, or the mass scale standing in for it, MeV.
    pub temperature_mev: f64,
    pub kappa_per_fm: f64,
    pub kappa_source: KappaSource,
    pub term_n0_mev_per_fm2: f64,
    pub term_n_pos_mev_per_fm2: f64,
    /// Terms multiplied by d², MeV.
    pub term_n0_mev: f64,
    pub term_n_pos_mev: f64,
}

/// Evaluates the Yukawa expansion at nuclear scales and reports it in MeV.
///
/// `temperature` is in kelvin; it stands in for whatever mass scale the caller
/// wants to substitute. When `kappa_pl` is `None` it is derived from the pair density.
pub fn nuclear_demo(d_fm: f64, temperature: f64, kappa_pl: Option<f64>) -> Result<NuclearDemoReport> {
    if !(0.1..=10.0).contains(&d_fm) {
        return Err(Error::domain(format!("d_fm must lie in [0.1, 10], got {d_fm}")));
    }
    let d = d_fm * FM;
    let params = match kappa_pl {
        Some(k) => PlasmaGapParams::with_kappa(d, temperature, k)?,
        None => PlasmaGapParams::from_pair_density(d, temperature)?,
    };
    let (n0, npos) = screened_expansion(&params);
    let natural = |v: f64, dim: Dimension| Quantity::si(v, dim).convert(UnitSystem::NaturalNuclear).value;
    let n0_area = natural(n0, Dimension::EnergyPerArea);
    let npos_area = natural(npos, Dimension::EnergyPerArea);
    Ok(NuclearDemoReport {
        disclaimer: DEMO_DISCLAIMER,
        d_fm,
        temperature_mev: natural(temperature, Dimension::Temperature),
        kappa_per_fm: params.kappa_pl * FM,
        kappa_source: params.kappa_source,
        term_n0_mev_per_fm2: n0_area,
        term_n_pos_mev_per_fm2: npos_area,
        term_n0_mev: n0_area * d_fm * d_fm,
        term_n_pos_mev: npos_area * d_fm * d_fm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_density_scaling() {
        let r1 = pair_density(1e10).unwrap();
        assert!((r1 / 3.043e37 - 1.0).abs() < 1e-3);
        let r2 = pair_density(2e10).unwrap();
        assert!((r2 / r1 - 8.0).abs() < 1e-12);
        assert!(pair_density(0.0).is_err());
    }

    #[test]
    fn high_temperature_limit() {
        let d = 1e-6;
        let t = CONSTANTS.temperature_for_ratio(d, 30.0);
        let f = vacuum_gap_free_energy(d, t, 1e-10).unwrap().value;
        let classical = -CONSTANTS.zeta3 * CONSTANTS.k_b * t / (8.0 * PI * d * d);
        assert!((f / classical - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_dominates_remaining_terms() {
        let d = 1e-6;
        let x = 0.2;
        let q1 = x / d;
        for n_last in [0usize, 3, 10, 40] {
            let exact: f64 = ((n_last + 1)..5000).map(|n| plate_integral(n as f64 * q1, d).abs()).sum();
            assert!(series_tail_bound(n_last, x, d) >= exact);
        }
    }

    #[test]
    fn expansion_at_zero_temperature() {
        let (a, b, c) = vacuum_gap_expansion(1e-6, 0.0).unwrap();
        assert!(a < 0.0);
        assert_eq!(b, 0.0);
        assert_eq!(c, 0.0);
    }

    #[test]
    fn kappa_zero_limit_of_n0_term() {
        let p0 = PlasmaGapParams::with_kappa(1e-6, 300.0, 0.0).unwrap();
        let p_small = PlasmaGapParams::with_kappa(1e-6, 300.0, 1e-3).unwrap();
        let (a, _) = screened_expansion(&p0);
        let (b, _) = screened_expansion(&p_small);
        assert!((a / b - 1.0).abs() < 1e-8);
    }

    #[test]
    fn demo_carries_disclaimer() {
        let r = nuclear_demo(1.0, 1.6e12, None).unwrap();
        assert_eq!(r.disclaimer, DEMO_DISCLAIMER);
        assert!(nuclear_demo(20.0, 1e12, None).is_err());
    }
}
