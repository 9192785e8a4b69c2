//! Physical constants, unit systems and the Matsubara frequency ladder.
//!
//! Every computation in the crate runs in SI. Electromagnetic expressions
//! that are naturally written in Gaussian form (`e²`, `4πσ/ω`) are evaluated
//! through the fine-structure constant, `e² = α ħ c`, so no raw charge in
//! statcoulomb ever enters an SI formula.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// CODATA 2018 values (exact where the SI fixes them).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Elementary charge in statcoulomb (Gaussian).
    pub e_gaussian: f64,
    /// Electron mass, kg.
    pub m_e: f64,
    /// Fine-structure constant e²/(ħc), dimensionless.
    pub alpha_fs: f64,
    /// Apéry's constant ζ(3).
    pub zeta3: f64,
}

pub const CONSTANTS: Constants = Constants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    k_b: 1.380_649e-23,
    e_gaussian: 4.803_204_712_570_263e-10,
    m_e: 9.109_383_701_5e-31,
    alpha_fs: 7.297_352_569_3e-3,
    zeta3: 1.202_056_903_159_594_3,
};

/// One electronvolt in joules.
pub const EV: f64 = 1.602_176_634e-19;
/// One MeV in joules.
pub const MEV: f64 = 1.602_176_634e-13;
/// One femtometre in metres.
pub const FM: f64 = 1e-15;

impl Constants {
    /// ħc in J·m.
    pub fn hbar_c(&self) -> f64 {
        self.hbar * self.c
    }

    /// e² in J·m, the Gaussian squared charge expressed through α ħ c.
    pub fn e_squared(&self) -> f64 {
        self.alpha_fs * self.hbar_c()
    }

    /// Angular frequency (rad/s) of a photon energy given in eV.
    pub fn ev_to_rad_per_s(&self, ev: f64) -> f64 {
        ev * EV / self.hbar
    }

    pub fn rad_per_s_to_ev(&self, omega: f64) -> f64 {
        omega * self.hbar / EV
    }

    /// Dimensionless thermal separation 2π k_B T d/(ħc) = ξ₁ d/c.
    pub fn thermal_ratio(&self, d: f64, temperature: f64) -> f64 {
        2.0 * PI * self.k_b * temperature * d / self.hbar_c()
    }

    /// Temperature giving `thermal_ratio(d, T) == x`.
    pub fn temperature_for_ratio(&self, d: f64, x: f64) -> f64 {
        x * self.hbar_c() / (2.0 * PI * self.k_b * d)
    }
}

/// ξₙ = 2π k_B T n / ħ in rad/s.
pub fn matsubara_frequency(n: u64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::domain(format!(
            "Matsubara frequency needs T > 0, got {temperature}"
        )));
    }
    Ok(2.0 * PI * CONSTANTS.k_b * temperature * n as f64 / CONSTANTS.hbar)
}

/// Branch sign used both for ω = ±iξ and for the ± resonance branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "+1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            other => Err(Error::rejected(format!("unknown sign '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum UnitSystem {
    Si,
    /// Lengths in fm; energies, temperatures (k_B T) and frequencies (ħω) in MeV.
    NaturalNuclear,
}

impl FromStr for UnitSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "si" | "SI" => Ok(UnitSystem::Si),
            "natural" | "natural-nuclear" | "NaturalNuclear" => Ok(UnitSystem::NaturalNuclear),
            other => Err(Error::rejected(format!("unknown unit system '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dimension {
    Energy,
    EnergyPerArea,
    Pressure,
    Length,
    Temperature,
    Frequency,
}

impl Dimension {
    /// Multiplier taking an SI value to its NaturalNuclear value.
    fn si_to_natural(self) -> f64 {
        match self {
            Dimension::Energy => 1.0 / MEV,
            Dimension::EnergyPerArea => FM * FM / MEV,
            Dimension::Pressure => FM * FM * FM / MEV,
            Dimension::Length => 1.0 / FM,
            Dimension::Temperature => CONSTANTS.k_b / MEV,
            Dimension::Frequency => CONSTANTS.hbar / MEV,
        }
    }

    pub fn unit_label(self, system: UnitSystem) -> &'static str {
        match (system, self) {
            (UnitSystem::Si, Dimension::Energy) => "J",
            (UnitSystem::Si, Dimension::EnergyPerArea) => "J_per_m2",
            (UnitSystem::Si, Dimension::Pressure) => "Pa",
            (UnitSystem::Si, Dimension::Length) => "m",
            (UnitSystem::Si, Dimension::Temperature) => "K",
            (UnitSystem::Si, Dimension::Frequency) => "rad_per_s",
            (UnitSystem::NaturalNuclear, Dimension::Energy) => "MeV",
            (UnitSystem::NaturalNuclear, Dimension::EnergyPerArea) => "MeV_per_fm2",
            (UnitSystem::NaturalNuclear, Dimension::Pressure) => "MeV_per_fm3",
            (UnitSystem::NaturalNuclear, Dimension::Length) => "fm",
            (UnitSystem::NaturalNuclear, Dimension::Temperature) => "MeV",
            (UnitSystem::NaturalNuclear, Dimension::Frequency) => "MeV",
        }
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "energy" => Ok(Dimension::Energy),
            "energy_per_area" => Ok(Dimension::EnergyPerArea),
            "pressure" => Ok(Dimension::Pressure),
            "length" => Ok(Dimension::Length),
            "temperature" => Ok(Dimension::Temperature),
            "frequency" => Ok(Dimension::Frequency),
            other => Err(Error::rejected(format!("unknown dimension tag '{other}'"))),
        }
    }
}

/// A number tagged with its dimension and the unit system it is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Dimension,
    pub system: UnitSystem,
}

impl Quantity {
    pub fn si(value: f64, dimension: Dimension) -> Self {
        Self {
            value,
            dimension,
            system: UnitSystem::Si,
        }
    }

    /// Builds a quantity from a textual dimension tag.
    pub fn tagged(value: f64, tag: &str, system: UnitSystem) -> Result<Self> {
        Ok(Self {
            value,
            dimension: tag.parse()?,
            system,
        })
    }

    pub fn convert(self, target: UnitSystem) -> Self {
        let factor = self.dimension.si_to_natural();
        let value = match (self.system, target) {
            (a, b) if a == b => self.value,
            (UnitSystem::Si, UnitSystem::NaturalNuclear) => self.value * factor,
            (UnitSystem::NaturalNuclear, UnitSystem::Si) => self.value / factor,
            _ => unreachable!(),
        };
        Self {
            value,
            dimension: self.dimension,
            system: target,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.dimension.unit_label(self.system))
    }
}

/// Free-function form of [`Quantity::convert`].
pub fn convert(value: Quantity, target: UnitSystem) -> Quantity {
    value.convert(target)
}
