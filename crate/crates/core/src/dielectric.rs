//! Dielectric response on the imaginary frequency axis.
//!
//! Models are evaluated at ω = iξ. The Drude model is the only one whose
//! permittivity is not a function of ω² alone, so it is the only model for
//! which ε(iξ) and ε(−iξ) differ; [`DielectricModel::eps_off_axis`] exposes the
//! lower-axis value for the extra-term diagnostic.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantities::{Sign, CONSTANTS};

/// Relative distance from the Drude pole ξ = γ inside which off-axis evaluation is refused.
pub const POLE_EXCLUSION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Oscillator {
    /// Dimensionless oscillator weight.
    pub strength: f64,
    /// Resonance frequency, rad/s.
    pub omega0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DielectricModel {
    Vacuum,
    Constant { eps: f64 },
    IdealMetal,
    Plasma { omega_p: f64 },
    Drude { omega_p: f64, gamma: f64 },
    Oscillator { terms: Vec<Oscillator> },
}

/// ε(iξ): a finite real number, or the perfect-conductor marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EpsValue {
    Finite(f64),
    Infinite,
}

impl EpsValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            EpsValue::Finite(v) => Some(v),
            EpsValue::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsEvaluation {
    pub xi: f64,
    pub value: EpsValue,
}

/// Behaviour of ε(iξ) as ξ → 0⁺.
///
/// `order` is the power of 1/ξ with which ε diverges (0 for insulators) and
/// `coefficient` its prefactor; `k_sq` is the limit of ε(iξ)ξ²/c², which is
/// nonzero only for the dissipationless plasma response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum StaticLimit {
    Ideal,
    Response { order: u8, coefficient: f64, k_sq: f64 },
}

impl DielectricModel {
    pub fn constant(eps: f64) -> Result<Self> {
        let m = DielectricModel::Constant { eps };
        m.validate()?;
        Ok(m)
    }

    pub fn plasma(omega_p: f64) -> Result<Self> {
        let m = DielectricModel::Plasma { omega_p };
        m.validate()?;
        Ok(m)
    }

    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self> {
        let m = DielectricModel::Drude { omega_p, gamma };
        m.validate()?;
        Ok(m)
    }

    pub fn oscillator(terms: Vec<Oscillator>) -> Result<Self> {
        let m = DielectricModel::Oscillator { terms };
        m.validate()?;
        Ok(m)
    }

    /// Drude model with parameters given in eV.
    pub fn drude_ev(omega_p_ev: f64, gamma_ev: f64) -> Result<Self> {
        Self::drude(
            CONSTANTS.ev_to_rad_per_s(omega_p_ev),
            CONSTANTS.ev_to_rad_per_s(gamma_ev),
        )
    }

    pub fn plasma_ev(omega_p_ev: f64) -> Result<Self> {
        Self::plasma(CONSTANTS.ev_to_rad_per_s(omega_p_ev))
    }

    pub fn name(&self) -> &'static str {
        match self {
            DielectricModel::Vacuum => "vacuum",
            DielectricModel::Constant { .. } => "constant",
            DielectricModel::IdealMetal => "ideal",
            DielectricModel::Plasma { .. } => "plasma",
            DielectricModel::Drude { .. } => "drude",
            DielectricModel::Oscillator { .. } => "oscillator",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        let ok = match self {
            DielectricModel::Vacuum | DielectricModel::IdealMetal => true,
            DielectricModel::Constant { eps } => *eps >= 1.0 && eps.is_finite(),
            DielectricModel::Plasma { omega_p } => positive(*omega_p),
            DielectricModel::Drude { omega_p, gamma } => {
                positive(*omega_p) && *gamma >= 0.0 && gamma.is_finite()
            }
            DielectricModel::Oscillator { terms } => terms
                .iter()
                .all(|o| positive(o.strength) && positive(o.omega0)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid parameters for {self:?}")))
        }
    }

    /// True when ε(ω) depends on ω² only, so ε(iξ) = ε(−iξ).
    pub fn is_even_in_omega(&self) -> bool {
        !matches!(self, DielectricModel::Drude { gamma, .. } if *gamma > 0.0)
    }

    /// ε(iξ) for ξ ≥ 0.
    pub fn eps_imag_axis(&self, xi: f64) -> Result<EpsValue> {
        if !(xi >= 0.0) {
            return Err(Error::domain(format!("xi must be >= 0, got {xi}")));
        }
        let value = match self {
            DielectricModel::Vacuum => 1.0,
            DielectricModel::Constant { eps } => *eps,
            DielectricModel::IdealMetal => return Ok(EpsValue::Infinite),
            DielectricModel::Plasma { omega_p } => {
                if xi == 0.0 {
                    return Err(Error::DivergentStaticLimit { model: "plasma" });
                }
                1.0 + omega_p * omega_p / (xi * xi)
            }
            DielectricModel::Drude { omega_p, gamma } => {
                if xi == 0.0 {
                    return Err(Error::DivergentStaticLimit { model: "drude" });
                }
                1.0 + omega_p * omega_p / (xi * (xi + gamma))
            }
            DielectricModel::Oscillator { terms } => {
                1.0 + terms
                    .iter()
                    .map(|o| o.strength / (1.0 + (xi / o.omega0).powi(2)))
                    .sum::<f64>()
            }
        };
        Ok(EpsValue::Finite(value))
    }

    pub fn evaluate(&self, xi: f64) -> Result<EpsEvaluation> {
        Ok(EpsEvaluation {
            xi,
            value: self.eps_imag_axis(xi)?,
        })
    }

    /// ε(±iξ) by direct substitution of ω = ±iξ into the real-frequency model.
    ///
    /// For the Drude model ε(−iξ) = 1 + ω_p²/(ξ(ξ − γ)), which has a pole at ξ = γ.
    /// Every other finite model is even in ω and returns the on-axis value.
    pub fn eps_off_axis(&self, xi: f64, sign: Sign) -> Result<Complex64> {
        if !(xi > 0.0) {
            return Err(Error::domain(format!("off-axis xi must be > 0, got {xi}")));
        }
        match (self, sign) {
            (DielectricModel::IdealMetal, _) => Err(Error::rejected(
                "ideal metal has no finite off-axis permittivity",
            )),
            (DielectricModel::Drude { omega_p, gamma }, Sign::Minus) if *gamma > 0.0 => {
                let gap = xi - gamma;
                if gap.abs() <= POLE_EXCLUSION * gamma {
                    return Err(Error::Pole { xi, gamma: *gamma });
                }
                Ok(Complex64::new(1.0 + omega_p * omega_p / (xi * gap), 0.0))
            }
            _ => {
                let v = self.eps_imag_axis(xi)?;
                Ok(Complex64::new(v.finite().expect("finite model"), 0.0))
            }
        }
    }

    pub(crate) fn static_limit(&self) -> StaticLimit {
        let c2 = CONSTANTS.c * CONSTANTS.c;
        match self {
            DielectricModel::IdealMetal => StaticLimit::Ideal,
            DielectricModel::Vacuum => StaticLimit::Response {
                order: 0,
                coefficient: 1.0,
                k_sq: 0.0,
            },
            DielectricModel::Constant { eps } => StaticLimit::Response {
                order: 0,
                coefficient: *eps,
                k_sq: 0.0,
            },
            DielectricModel::Oscillator { terms } => StaticLimit::Response {
                order: 0,
                coefficient: 1.0 + terms.iter().map(|o| o.strength).sum::<f64>(),
                k_sq: 0.0,
            },
            DielectricModel::Plasma { omega_p } => StaticLimit::Response {
                order: 2,
                coefficient: omega_p * omega_p,
                k_sq: omega_p * omega_p / c2,
            },
            DielectricModel::Drude { omega_p, gamma } => {
                if *gamma > 0.0 {
                    StaticLimit::Response {
                        order: 1,
                        coefficient: omega_p * omega_p / gamma,
                        k_sq: 0.0,
                    }
                } else {
                    StaticLimit::Response {
                        order: 2,
                        coefficient: omega_p * omega_p,
                        k_sq: omega_p * omega_p / c2,
                    }
                }
            }
        }
    }
}
