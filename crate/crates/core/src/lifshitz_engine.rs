//! Free energy per unit area of the symmetric planar stack.
//!
//! Finite temperature uses the primed Matsubara sum
//!
//! ```text
//! F(d, T) = (k_B T / 2π) Σ'ₙ ∫₀^∞ κ ln D(iξₙ; κ, d) dκ
//! ```
//!
//! and zero temperature the frequency integral
//! `F(d, 0) = (ħ/4π²) ∫₀^∞ dξ ∫₀^∞ κ ln D(iξ; κ, d) dκ`.
//!
//! The κ-integral is always done in t = 2γ₂d, for which κ dκ = t dt/(4d²)
//! and the integrand decays like t e^{−t} whatever the separation, so one
//! set of tolerances covers nanometres to millimetres. Because |Δ| ≤ 1 on the
//! imaginary axis, |t ln D| ≤ 2t e^{−t}/(1 − e^{−t}) gives a rigorous tail bound.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::dielectric::DielectricModel;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::planar_kernel::{FrequencySlice, PlanarScenario};
use crate::quadrature::{integrate_decaying, integrate_decaying_batched, QuadOptions, QuadValue};
use crate::quantities::{matsubara_frequency, CONSTANTS};

const PANEL: f64 = 30.0;
const MAX_PANELS: usize = 40;

#[derive(Debug, Clone, Serialize)]
pub struct MatsubaraGrid {
    pub temperature: f64,
    pub n_max: usize,
    /// Bound on the magnitude of the discarded n > n_max terms, J/m².
    pub tail_estimate: f64,
    pub frequencies: Vec<f64>,
}

impl MatsubaraGrid {
    pub fn new(temperature: f64, n_max: usize, tail_estimate: f64) -> Result<Self> {
        let frequencies = (0..=n_max as u64)
            .map(|n| matsubara_frequency(n, temperature))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            temperature,
            n_max,
            tail_estimate,
            frequencies,
        })
    }
}

/// Weighted contribution of one Matsubara frequency, J/m².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermContribution {
    pub n: usize,
    pub xi: f64,
    pub te: f64,
    pub tm: f64,
}

impl TermContribution {
    pub fn total(&self) -> f64 {
        self.te + self.tm
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyResult {
    /// J/m² (J for the resonance energies).
    pub value: f64,
    pub abs_error: f64,
    pub te_value: f64,
    pub tm_value: f64,
    pub n_terms_used: usize,
    pub quad_evals: usize,
    pub tail_estimate: f64,
    pub grid: Option<MatsubaraGrid>,
    pub breakdown: Option<Vec<TermContribution>>,
}

impl EnergyResult {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            abs_error: 0.0,
            te_value: 0.0,
            tm_value: 0.0,
            n_terms_used: 0,
            quad_evals: 0,
            tail_estimate: 0.0,
            grid: None,
            breakdown: None,
        }
    }

    /// The weighted n-th Matsubara contribution, if a breakdown was recorded.
    pub fn term(&self, n: usize) -> Option<TermContribution> {
        self.breakdown.as_ref()?.iter().find(|t| t.n == n).copied()
    }
}

/// TE and TM parts of one integrand evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Pair {
    pub te: f64,
    pub tm: f64,
}

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair {
            te: self.te + o.te,
            tm: self.tm + o.tm,
        }
    }
}

impl Sub for Pair {
    type Output = Pair;
    fn sub(self, o: Pair) -> Pair {
        Pair {
            te: self.te - o.te,
            tm: self.tm - o.tm,
        }
    }
}

impl Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, k: f64) -> Pair {
        Pair {
            te: self.te * k,
            tm: self.tm * k,
        }
    }
}

impl QuadValue for Pair {
    fn magnitude(self) -> f64 {
        self.te.abs() + self.tm.abs()
    }
}

/// Upper bound on ∫ₓ^∞ |t ln D| dt for |Δ| ≤ 1.
pub(crate) fn kernel_tail_bound(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * (x + 1.0) * (-x).exp() / -(-x).exp_m1()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EngineConfig {
    /// Hard cap on the number of Matsubara terms.
    pub max_terms: usize,
    /// Subinterval cap for each adaptive quadrature.
    pub max_intervals: usize,
    pub execution: Execution,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            max_terms: 200_000,
            max_intervals: 2000,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LifshitzEngine {
    pub config: EngineConfig,
}

struct KappaIntegral {
    value: Pair,
    abs_error: f64,
    evals: usize,
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 1e-14 && tol < 1e-2 {
        Ok(())
    } else {
        Err(Error::domain(format!("tolerance must lie in (1e-14, 1e-2), got {tol}")))
    }
}

impl LifshitzEngine {
    pub fn new(config: EngineConfig) -> Self {
        Self { config }
    }

    pub fn with_execution(execution: Execution) -> Self {
        Self {
            config: EngineConfig {
                execution,
                ..EngineConfig::default()
            },
        }
    }

    /// ∫_{t_min}^∞ t ln D(t) dt at one frequency (TE and TM separately).
    fn kappa_integral(&self, scenario: &PlanarScenario, xi: f64, rel_tol: f64) -> Result<KappaIntegral> {
        let slice = FrequencySlice::new(scenario, xi)?;
        if slice.is_identical() {
            return Ok(KappaIntegral {
                value: Pair::default(),
                abs_error: 0.0,
                evals: 0,
            });
        }
        let d = scenario.d;
        let t_min = slice.t_min(d);
        let opts = QuadOptions {
            rel_tol,
            abs_tol: 0.0,
            max_intervals: self.config.max_intervals,
        };
        let out = integrate_decaying(
            |t: f64| {
                let (te, tm) = slice.log_d_at_t(t, d, t_min)?;
                Ok(Pair { te: t * te, tm: t * tm })
            },
            t_min,
            PANEL,
            kernel_tail_bound,
            opts,
            MAX_PANELS,
        )?;
        if !out.converged {
            return Err(Error::convergence(format!(
                "kappa quadrature at xi = {xi:e} rad/s reached its interval limit"
            )));
        }
        Ok(KappaIntegral {
            value: out.value,
            abs_error: out.abs_error,
            evals: out.evals,
        })
    }

    /// Primed Matsubara sum at T > 0.
    pub fn free_energy(&self, scenario: &PlanarScenario, tol: f64) -> Result<EnergyResult> {
        scenario.validate()?;
        check_tol(tol)?;
        let temperature = scenario.temperature;
        if !(temperature > 0.0) {
            return Err(Error::domain("free_energy needs T > 0; use free_energy_zero_t"));
        }
        if scenario.is_trivial() {
            let mut r = EnergyResult::zero();
            r.grid = Some(MatsubaraGrid::new(temperature, 0, 0.0)?);
            r.n_terms_used = 1;
            r.breakdown = Some(vec![TermContribution {
                n: 0,
                xi: 0.0,
                te: 0.0,
                tm: 0.0,
            }]);
            return Ok(r);
        }

        let d = scenario.d;
        let prefactor = CONSTANTS.k_b * temperature / (2.0 * PI) / (4.0 * d * d);
        // GK21 cannot resolve below ~50 ulp of the integral
        let quad_tol = (tol / 10.0).max(5e-14);
        let stop_fraction = tol / 10.0;

        let mut breakdown: Vec<TermContribution> = Vec::new();
        let mut sum = Pair::default();
        let mut abs_error = 0.0;
        let mut evals = 0usize;
        let mut quiet_run = 0usize;
        let mut next_n = 0usize;
        let mut batch = 4usize;

        loop {
            if next_n >= self.config.max_terms {
                let partial = self.assemble(temperature, sum, abs_error, 0.0, evals, breakdown)?;
                return Err(Error::Convergence {
                    reason: format!(
                        "Matsubara sum not converged after {} terms",
                        self.config.max_terms
                    ),
                    partial: Some(Box::new(partial)),
                });
            }
            let ns: Vec<usize> = (next_n..(next_n + batch).min(self.config.max_terms)).collect();
            let evaluated = self.config.execution.map_ordered(&ns, |&n| {
                let xi = matsubara_frequency(n as u64, temperature)?;
                self.kappa_integral(scenario, xi, quad_tol).map(|k| (n, xi, k))
            });
            for item in evaluated {
                let (n, xi, k) = match item {
                    Ok(v) => v,
                    Err(Error::Convergence { reason, .. }) => {
                        let partial = self.assemble(temperature, sum, abs_error, 0.0, evals, breakdown)?;
                        return Err(Error::Convergence {
                            reason,
                            partial: Some(Box::new(partial)),
                        });
                    }
                    Err(e) => return Err(e),
                };
                let weight = if n == 0 { 0.5 } else { 1.0 };
                let contribution = k.value * (weight * prefactor);
                sum = sum + contribution;
                abs_error += k.abs_error * weight * prefactor;
                evals += k.evals;
                breakdown.push(TermContribution {
                    n,
                    xi,
                    te: contribution.te,
                    tm: contribution.tm,
                });
                let total = (sum.te + sum.tm).abs();
                let size = (contribution.te + contribution.tm).abs();
                if n > 0 && size <= stop_fraction * total {
                    quiet_run += 1;
                } else {
                    quiet_run = 0;
                }
                if quiet_run >= 3 {
                    let prev = breakdown[breakdown.len() - 2].total().abs();
                    let ratio = if prev > 0.0 { size / prev } else { 0.0 };
                    if ratio < 1.0 {
                        let tail = size * ratio / (1.0 - ratio);
                        return self.assemble(temperature, sum, abs_error, tail, evals, breakdown);
                    }
                }
            }
            next_n += ns.len();
            batch = (batch * 2).min(64);
        }
    }

    fn assemble(
        &self,
        temperature: f64,
        sum: Pair,
        quad_error: f64,
        tail: f64,
        evals: usize,
        breakdown: Vec<TermContribution>,
    ) -> Result<EnergyResult> {
        let n_max = breakdown.last().map(|t| t.n).unwrap_or(0);
        let value = sum.te + sum.tm;
        let rounding = 4.0 * f64::EPSILON * (breakdown.len() as f64) * value.abs();
        Ok(EnergyResult {
            value,
            abs_error: quad_error + tail + rounding,
            te_value: sum.te,
            tm_value: sum.tm,
            n_terms_used: breakdown.len(),
            quad_evals: evals,
            tail_estimate: tail,
            grid: Some(MatsubaraGrid::new(temperature, n_max, tail)?),
            breakdown: Some(breakdown),
        })
    }

    /// Zero-temperature free energy by double quadrature over ξ and κ.
    pub fn free_energy_zero_t(&self, scenario: &PlanarScenario, tol: f64) -> Result<EnergyResult> {
        scenario.validate()?;
        check_tol(tol)?;
        if scenario.is_trivial() {
            return Ok(EnergyResult::zero());
        }
        let d = scenario.d;
        let inner_tol = (tol / 20.0).max(5e-14);
        let outer_tol = tol / 2.0;
        // ξ = c s/(2d)
        let xi_of = |s: f64| CONSTANTS.c * s / (2.0 * d);
        let mut inner_evals = 0usize;
        let mut worst_inner_rel = 0.0f64;
        let opts = QuadOptions {
            rel_tol: outer_tol,
            abs_tol: 0.0,
            max_intervals: self.config.max_intervals,
        };
        let outer = integrate_decaying_batched(
            |ss: &[f64]| {
                let inner = self
                    .config
                    .execution
                    .map_ordered(ss, |&s| self.kappa_integral(scenario, xi_of(s), inner_tol));
                let mut out = Vec::with_capacity(inner.len());
                for k in inner {
                    let k = k?;
                    inner_evals += k.evals;
                    let mag = k.value.magnitude();
                    if mag > 0.0 {
                        worst_inner_rel = worst_inner_rel.max(k.abs_error / mag);
                    }
                    out.push(k.value);
                }
                Ok(out)
            },
            0.0,
            PANEL,
            |s| {
                // ∫ₛ^∞ 2(σ+1)e^{−σ}/(1−e^{−σ}) dσ ≤ 2(s+2)e^{−s}/(1−e^{−s})
                if s <= 0.0 {
                    f64::INFINITY
                } else {
                    2.0 * (s + 2.0) * (-s).exp() / -(-s).exp_m1()
                }
            },
            opts,
            MAX_PANELS,
        )?;
        if !outer.converged {
            return Err(Error::convergence("frequency quadrature reached its interval limit"));
        }
        let prefactor = CONSTANTS.hbar_c() / (32.0 * PI * PI * d.powi(3));
        let value = outer.value * prefactor;
        let total = value.te + value.tm;
        let abs_error = outer.abs_error * prefactor + worst_inner_rel * total.abs();
        Ok(EnergyResult {
            value: total,
            abs_error,
            te_value: value.te,
            tm_value: value.tm,
            n_terms_used: 0,
            quad_evals: outer.evals + inner_evals,
            tail_estimate: 0.0,
            grid: None,
            breakdown: None,
        })
    }

    /// F_Drude / F_plasma at equal (d, T, ω_p) across vacuum.
    pub fn drude_plasma_ratio(
        &self,
        d: f64,
        temperature: f64,
        omega_p: f64,
        gamma: f64,
        tol: f64,
    ) -> Result<DrudePlasmaRatio> {
        let drude = PlanarScenario::new(
            DielectricModel::drude(omega_p, gamma)?,
            DielectricModel::Vacuum,
            d,
            temperature,
        )?;
        let plasma = PlanarScenario::new(
            DielectricModel::plasma(omega_p)?,
            DielectricModel::Vacuum,
            d,
            temperature,
        )?;
        let drude = self.free_energy(&drude, tol)?;
        let plasma = self.free_energy(&plasma, tol)?;
        Ok(DrudePlasmaRatio {
            ratio: drude.value / plasma.value,
            drude,
            plasma,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DrudePlasmaRatio {
    pub ratio: f64,
    pub drude: EnergyResult,
    pub plasma: EnergyResult,
}

pub fn free_energy(scenario: &PlanarScenario, tol: f64) -> Result<EnergyResult> {
    LifshitzEngine::default().free_energy(scenario, tol)
}

pub fn free_energy_zero_t(scenario: &PlanarScenario, tol: f64) -> Result<EnergyResult> {
    LifshitzEngine::default().free_energy_zero_t(scenario, tol)
}

pub fn drude_plasma_ratio(d: f64, temperature: f64, omega_p: f64, gamma: f64, tol: f64) -> Result<f64> {
    Ok(LifshitzEngine::default()
        .drude_plasma_ratio(d, temperature, omega_p, gamma, tol)?
        .ratio)
}

/// −π²ħc/(720 d³), the zero-temperature ideal-metal energy.
pub fn ideal_casimir_energy(d: f64) -> f64 {
    -PI * PI * CONSTANTS.hbar_c() / (720.0 * d.powi(3))
}

/// −ζ(3) k_B T/(8π d²), the classical (n = 0) ideal-metal energy.
pub fn classical_ideal_energy(d: f64, temperature: f64) -> f64 {
    -CONSTANTS.zeta3 * CONSTANTS.k_b * temperature / (8.0 * PI * d * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(d: f64, t: f64) -> PlanarScenario {
        PlanarScenario::new(DielectricModel::IdealMetal, DielectricModel::Vacuum, d, t).unwrap()
    }

    #[test]
    fn tail_bound_dominates_kernel() {
        for x in [0.1, 1.0, 5.0, 20.0] {
            let exact: f64 = {
                // ∫ₓ^∞ −2t ln(1 − e^{−t}) dt by the series Σ (2/k)e^{−kx}(x/k + 1/k²)
                (1..200)
                    .map(|k| {
                        let k = k as f64;
                        2.0 / k * (-k * x).exp() * (x / k + 1.0 / (k * k))
                    })
                    .sum()
            };
            assert!(kernel_tail_bound(x) >= exact);
        }
    }

    #[test]
    fn rejects_bad_tolerance_and_temperature() {
        let s = ideal(1e-6, 300.0);
        assert!(free_energy(&s, 0.5).is_err());
        assert!(free_energy(&s, 1e-16).is_err());
        assert!(free_energy(&s.with_temperature(0.0), 1e-6).is_err());
    }

    #[test]
    fn trivial_scenario_is_exactly_zero() {
        let m = DielectricModel::constant(2.0).unwrap();
        let s = PlanarScenario::new(m.clone(), m, 1e-6, 300.0).unwrap();
        assert_eq!(free_energy(&s, 1e-6).unwrap().value, 0.0);
        assert_eq!(free_energy_zero_t(&s, 1e-6).unwrap().value, 0.0);
    }

    #[test]
    fn primed_weight_on_static_term() {
        let s = ideal(1e-6, 3000.0);
        let r = free_energy(&s, 1e-9).unwrap();
        let t0 = r.term(0).unwrap();
        // n = 0 ideal term at half weight: −ζ(3) k_B T/(8π d²)
        let expected = classical_ideal_energy(s.d, s.temperature);
        assert!((t0.total() / expected - 1.0).abs() < 1e-9);
        assert_eq!(t0.te, t0.tm);
    }

    #[test]
    fn max_terms_reports_partial() {
        let engine = LifshitzEngine::new(EngineConfig {
            max_terms: 5,
            ..EngineConfig::default()
        });
        let err = engine.free_energy(&ideal(1e-5, 1.0), 1e-8).unwrap_err();
        match err {
            Error::Convergence { partial: Some(p), .. } => assert_eq!(p.n_terms_used, 5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
