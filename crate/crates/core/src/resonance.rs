//! Resonance interaction between an excited and a ground-state atom.
//!
//! With the shared excitation in the symmetric or antisymmetric mode the
//! first-order energy is `U = ±(ħ/π) ∫₀^∞ ln[1 ± α(iξ) T(d|iξ)] dξ`, where the
//! field susceptibility along the (±; x) branch is
//! `T(d|iξ) = (1 + u + u²) e^{−u} / d³` with u = ξd/c. At finite temperature
//! the linearised form becomes a primed Matsubara sum,
//!
//! ```text
//! U(d, T) = ±(2k_BT/d³) Σ'ₙ α(iξₙ) e^{−xn} (1 + xn + x²n²),   x = 2πk_BTd/(ħc),
//! ```
//!
//! which for a constant polarizability sums to a closed form.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lifshitz_engine::check_tol;
use crate::quadrature::{integrate_decaying, QuadOptions};
use crate::quantities::{matsubara_frequency, Sign, CONSTANTS};

/// Below this x the closed form switches to its Taylor expansion.
pub const CLOSED_FORM_SERIES_BELOW: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizabilityMode {
    StaticOnly,
    London,
}

impl FromStr for PolarizabilityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" | "static_only" => Ok(PolarizabilityMode::StaticOnly),
            "london" => Ok(PolarizabilityMode::London),
            other => Err(Error::rejected(format!("unknown polarizability mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizabilityModel {
    /// Static polarizability volume, m³.
    pub alpha0: f64,
    /// London resonance frequency, rad/s; unused for `StaticOnly`.
    pub omega0: f64,
    pub mode: PolarizabilityMode,
}

impl PolarizabilityModel {
    pub fn static_only(alpha0: f64) -> Result<Self> {
        let m = Self {
            alpha0,
            omega0: 0.0,
            mode: PolarizabilityMode::StaticOnly,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn london(alpha0: f64, omega0: f64) -> Result<Self> {
        let m = Self {
            alpha0,
            omega0,
            mode: PolarizabilityMode::London,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return Err(Error::domain(format!("alpha0 must be > 0, got {}", self.alpha0)));
        }
        if self.mode == PolarizabilityMode::London && !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(Error::domain(format!("omega0 must be > 0, got {}", self.omega0)));
        }
        Ok(())
    }

    /// α(iξ), m³.
    pub fn alpha(&self, xi: f64) -> f64 {
        match self.mode {
            PolarizabilityMode::StaticOnly => self.alpha0,
            PolarizabilityMode::London => self.alpha0 / (1.0 + (xi / self.omega0).powi(2)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    XBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceQuery {
    /// m
    pub d: f64,
    /// K
    pub temperature: f64,
    pub sign: Sign,
    pub branch: Branch,
}

impl ResonanceQuery {
    pub fn new(d: f64, temperature: f64, sign: Sign) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::domain(format!("d must be > 0, got {d}")));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::domain(format!("T must be >= 0, got {temperature}")));
        }
        Ok(Self {
            d,
            temperature,
            sign,
            branch: Branch::XBranch,
        })
    }

    pub fn thermal_ratio(&self) -> f64 {
        CONSTANTS.thermal_ratio(self.d, self.temperature)
    }

    fn require_positive_temperature(&self) -> Result<()> {
        if self.temperature > 0.0 {
            Ok(())
        } else {
            Err(Error::domain("this form needs T > 0"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceEnergy {
    /// J
    pub value: f64,
    pub abs_error: f64,
    pub n_terms: usize,
    pub quad_evals: usize,
}

/// (1 + u + u²) e^{−u}
fn retardation(u: f64) -> f64 {
    (1.0 + u + u * u) * (-u).exp()
}

/// Upper bound on Σ_{n≥m} (1 + xn + x²n²) e^{−xn}, valid for xm ≥ 1.
fn retardation_tail(x: f64, m: usize) -> f64 {
    let y0 = x * m as f64;
    retardation(y0) + (-y0).exp() * (y0 * y0 + 3.0 * y0 + 4.0) / x
}

/// T(d|iξ) in 1/m³.
pub fn field_susceptibility(d: f64, xi: f64) -> Result<f64> {
    if !(d > 0.0) || !(xi >= 0.0) {
        return Err(Error::domain("field susceptibility needs d > 0 and xi >= 0"));
    }
    Ok(retardation(xi * d / CONSTANTS.c) / d.powi(3))
}

/// Matsubara-series form of the finite-temperature resonance energy.
pub fn resonance_series(query: &ResonanceQuery, pol: &PolarizabilityModel, tol: f64) -> Result<ResonanceEnergy> {
    pol.validate()?;
    check_tol(tol)?;
    query.require_positive_temperature()?;
    let d = query.d;
    let x = query.thermal_ratio();
    let prefactor = 2.0 * CONSTANTS.k_b * query.temperature / d.powi(3);

    // Neumaier summation keeps long small-x sums at full precision.
    let mut sum = 0.5 * pol.alpha0;
    let mut comp = 0.0;
    let mut n = 1usize;
    loop {
        let xi = matsubara_frequency(n as u64, query.temperature)?;
        let term = pol.alpha(xi) * retardation(x * n as f64);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        let m = n + 1;
        if x * m as f64 >= 1.0 {
            let alpha_next = pol.alpha(matsubara_frequency(m as u64, query.temperature)?);
            let tail = alpha_next * retardation_tail(x, m);
            if tail <= 0.01 * tol * (sum + comp).abs() {
                let total = sum + comp;
                let value = query.sign.as_f64() * prefactor * total;
                return Ok(ResonanceEnergy {
                    value,
                    abs_error: prefactor * (tail + 4.0 * f64::EPSILON * total),
                    n_terms: m,
                    quad_evals: 0,
                });
            }
        }
        n = m;
        assert!(n < 1 << 40, "resonance series failed to converge for x = {x}");
    }
}

/// Taylor coefficients of the bracket, x² through x¹³.
const BRACKET_SERIES: [f64; 12] = [
    8.0,
    12.0,
    10.0,
    6.0,
    257.0 / 90.0,
    17.0 / 15.0,
    122.0 / 315.0,
    7.0 / 60.0,
    4771.0 / 151200.0,
    7.0 / 900.0,
    26471.0 / 14968800.0,
    3737.0 / 9979200.0,
];

/// Σ'ₙ e^{−xn}(1 + xn + x²n²) through the resummed bracket.
pub fn resummed_sum(x: f64) -> f64 {
    if x < CLOSED_FORM_SERIES_BELOW {
        let bracket = BRACKET_SERIES.iter().rev().fold(0.0, |acc, &c| acc * x + c) * x * x;
        let em1 = x.exp_m1();
        return bracket / (2.0 * em1 * em1 * em1);
    }
    // [1 + e^{3x} − e^x(1+2x−2x²) + e^{2x}(−1+2x+2x²)] / (e^x − 1)³, scaled by e^{−3x}
    let q = (-x).exp();
    let one_minus_q = -(-x).exp_m1();
    let scaled = q * q * q + 1.0 - q * q * (1.0 + 2.0 * x - 2.0 * x * x) + q * (-1.0 + 2.0 * x + 2.0 * x * x);
    scaled / (2.0 * one_minus_q.powi(3))
}

/// Closed form of the series for a frequency-independent polarizability.
pub fn resonance_closed_form(query: &ResonanceQuery, alpha0: f64) -> Result<f64> {
    query.require_positive_temperature()?;
    if !(alpha0 > 0.0) {
        return Err(Error::domain("alpha0 must be > 0"));
    }
    let prefactor = 2.0 * CONSTANTS.k_b * query.temperature * alpha0 / query.d.powi(3);
    Ok(query.sign.as_f64() * prefactor * resummed_sum(query.thermal_ratio()))
}

/// Classical n = 0 term, ±k_BT α₀/d³.
pub fn resonance_n0(d: f64, temperature: f64, alpha0: f64, sign: Sign) -> Result<f64> {
    if !(d > 0.0) || !(temperature > 0.0) {
        return Err(Error::domain("need d > 0 and T > 0"));
    }
    Ok(sign.as_f64() * CONSTANTS.k_b * temperature * alpha0 / d.powi(3))
}

/// Zero-temperature energy from the logarithmic mode integral.
pub fn resonance_integral(d: f64, pol: &PolarizabilityModel, sign: Sign, tol: f64) -> Result<ResonanceEnergy> {
    pol.validate()?;
    check_tol(tol)?;
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("d must be > 0, got {d}")));
    }
    let s = sign.as_f64();
    let coupling = pol.alpha0 / d.powi(3);
    if sign == Sign::Minus && coupling >= 1.0 {
        return Err(Error::ModeInstability { xi: 0.0 });
    }
    let c = CONSTANTS.c;
    let scale = match pol.mode {
        PolarizabilityMode::StaticOnly => 1.0,
        PolarizabilityMode::London => (pol.omega0 * d / c).min(1.0),
    };
    // |ln(1 + w)| ≤ w and |ln(1 − w)| ≤ w/(1 − w) for 0 ≤ w < 1
    let bound_factor = match sign {
        Sign::Plus => coupling,
        Sign::Minus => coupling / (1.0 - coupling),
    };
    let out = integrate_decaying(
        |u: f64| {
            let xi = c * u / d;
            let w = s * pol.alpha(xi) * retardation(u) / d.powi(3);
            if !(w > -1.0) {
                return Err(Error::ModeInstability { xi });
            }
            Ok(w.ln_1p())
        },
        0.0,
        10.0 * scale,
        |u| {
            let cutoff = match pol.mode {
                PolarizabilityMode::StaticOnly => 1.0,
                PolarizabilityMode::London => (scale / u).powi(2).min(1.0),
            };
            bound_factor * cutoff * (-u).exp() * (u * u + 3.0 * u + 4.0)
        },
        QuadOptions::relative(tol),
        200,
    )?;
    if !out.converged {
        return Err(Error::convergence("resonance integral did not converge"));
    }
    let prefactor = CONSTANTS.hbar_c() / (PI * d);
    Ok(ResonanceEnergy {
        value: prefactor * out.value,
        abs_error: prefactor * out.abs_error,
        n_terms: 0,
        quad_evals: out.evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn susceptibility_examples() {
        assert_eq!(field_susceptibility(2.0, 0.0).unwrap(), 1.0 / 8.0);
        let u1 = field_susceptibility(1.0, CONSTANTS.c).unwrap();
        assert!((u1 - 3.0 * (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn n0_example() {
        let v = resonance_n0(10e-9, 300.0, 1e-29, Sign::Plus).unwrap();
        assert!((v / 4.142e-26 - 1.0).abs() < 1e-3);
        let half = resonance_n0(20e-9, 300.0, 1e-29, Sign::Minus).unwrap();
        assert!((half * -8.0 / v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn series_branch_matches_exponential_branch() {
        let x = CLOSED_FORM_SERIES_BELOW;
        let below = resummed_sum(x * (1.0 - 1e-12));
        let above = resummed_sum(x);
        assert!((below / above - 1.0).abs() < 1e-11);
    }

    #[test]
    fn tail_bound_holds() {
        let x = 0.3;
        for m in [4usize, 10, 50] {
            let exact: f64 = (m..100_000).map(|n| retardation(x * n as f64)).sum();
            assert!(retardation_tail(x, m) >= exact);
        }
    }

    #[test]
    fn unstable_minus_branch() {
        let pol = PolarizabilityModel::static_only(2.0).unwrap();
        assert!(matches!(
            resonance_integral(1.0, &pol, Sign::Minus, 1e-8),
            Err(Error::ModeInstability { .. })
        ));
    }
}
