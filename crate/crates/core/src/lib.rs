//! Finite-temperature Casimir–Lifshitz free energies between planar
//! half-spaces, with the analytic limits used to check them.
//!
//! All quantities are SI unless a name says otherwise.

// `!(x > 0.0)` is used on purpose so that NaN fails domain checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod dielectric;
pub mod error;
pub mod exec;
pub mod extra_term;
pub mod lifshitz_engine;
pub mod planar_kernel;
pub mod plasma_gap;
pub mod quadrature;
pub mod quantities;
pub mod resonance;
pub mod special;

pub use dielectric::{DielectricModel, EpsValue, Oscillator};
pub use error::{Error, Result};
pub use exec::Execution;
pub use extra_term::{extra_term, ExtraTermResult};
pub use lifshitz_engine::{
    drude_plasma_ratio, free_energy, free_energy_zero_t, EnergyResult, EngineConfig, LifshitzEngine,
};
pub use planar_kernel::PlanarScenario;
pub use plasma_gap::PlasmaGapParams;
pub use quantities::{Sign, UnitSystem, CONSTANTS};
pub use resonance::{PolarizabilityModel, ResonanceQuery};
