//! Symmetric half-space | gap | half-space kernel.
//!
//! For a transverse wave number κ and imaginary frequency ξ the normal-mode
//! wave numbers are γᵢ = √(κ² + εᵢ(iξ)ξ²/c²), the interface reflection
//! coefficients are
//!
//! ```text
//! Δ_TE = (γ₂ − γ₁)/(γ₂ + γ₁)        Δ_TM = (ε₁γ₂ − ε₂γ₁)/(ε₁γ₂ + ε₂γ₁)
//! ```
//!
//! and the mode dispersion function is D = (1 − Δ_TM² e^{−2γ₂d})(1 − Δ_TE² e^{−2γ₂d}).
//!
//! At ξ = 0 every quantity is the ξ → 0⁺ limit of the model, never ε(0)
//! itself: that limit is where Drude and plasma metals part ways (Δ_TE → 0
//! for Drude, Δ_TE → (κ − √(κ² + ω_p²/c²))/(κ + √(κ² + ω_p²/c²)) for plasma).

use num_complex::Complex64;
use serde::Serialize;

use crate::dielectric::{DielectricModel, EpsValue, StaticLimit};
use crate::error::{Error, Result};
use crate::quantities::{Sign, CONSTANTS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarScenario {
    /// Material of both half-spaces.
    pub halfspace: DielectricModel,
    /// Material filling the gap.
    pub gap: DielectricModel,
    /// Gap width, m.
    pub d: f64,
    /// Temperature, K.
    pub temperature: f64,
}

impl PlanarScenario {
    pub fn new(halfspace: DielectricModel, gap: DielectricModel, d: f64, temperature: f64) -> Result<Self> {
        let s = Self {
            halfspace,
            gap,
            d,
            temperature,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0) || !self.d.is_finite() {
            return Err(Error::domain(format!("separation must be > 0, got {}", self.d)));
        }
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(Error::domain(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        self.halfspace.validate()?;
        self.gap.validate()?;
        if self.gap == DielectricModel::IdealMetal && !self.is_trivial() {
            return Err(Error::rejected("an ideal-metal gap is only meaningful between ideal metals"));
        }
        Ok(())
    }

    /// Identical media on both sides of each interface: the kernel vanishes identically.
    pub fn is_trivial(&self) -> bool {
        self.halfspace == self.gap
    }

    pub fn with_separation(&self, d: f64) -> Self {
        Self { d, ..self.clone() }
    }

    pub fn with_temperature(&self, temperature: f64) -> Self {
        Self {
            temperature,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WaveNumber {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPoint {
    pub kappa: f64,
    pub xi: f64,
    pub gamma1: WaveNumber,
    pub gamma2: f64,
    pub delta_te: f64,
    pub delta_tm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TmRatio {
    Finite(f64),
    Infinite,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SliceKind {
    Ideal,
    Identical,
    Media { k1_sq: f64, ratio: TmRatio },
}

/// Everything about the kernel that depends on ξ only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct FrequencySlice {
    kind: SliceKind,
    /// ε₂(iξ)ξ²/c², so that γ₂² = κ² + k2_sq.
    k2_sq: f64,
}

fn static_ratio(a: StaticLimit, b: StaticLimit) -> TmRatio {
    match (a, b) {
        (
            StaticLimit::Response {
                order: oa,
                coefficient: ca,
                ..
            },
            StaticLimit::Response {
                order: ob,
                coefficient: cb,
                ..
            },
        ) => match oa.cmp(&ob) {
            std::cmp::Ordering::Greater => TmRatio::Infinite,
            std::cmp::Ordering::Less => TmRatio::Zero,
            std::cmp::Ordering::Equal => TmRatio::Finite(ca / cb),
        },
        (StaticLimit::Ideal, _) => TmRatio::Infinite,
        (_, StaticLimit::Ideal) => TmRatio::Zero,
    }
}

fn k_sq_of(limit: StaticLimit) -> f64 {
    match limit {
        StaticLimit::Response { k_sq, .. } => k_sq,
        StaticLimit::Ideal => 0.0,
    }
}

impl FrequencySlice {
    pub(crate) fn new(scenario: &PlanarScenario, xi: f64) -> Result<Self> {
        if !(xi >= 0.0) {
            return Err(Error::domain(format!("xi must be >= 0, got {xi}")));
        }
        if scenario.is_trivial() {
            let k2_sq = if xi == 0.0 {
                k_sq_of(scenario.gap.static_limit())
            } else {
                scenario.gap.eps_imag_axis(xi)?.finite().unwrap_or(0.0) * (xi / CONSTANTS.c).powi(2)
            };
            return Ok(Self {
                kind: SliceKind::Identical,
                k2_sq,
            });
        }
        if xi == 0.0 {
            let l1 = scenario.halfspace.static_limit();
            let l2 = scenario.gap.static_limit();
            let k2_sq = k_sq_of(l2);
            let kind = if l1 == StaticLimit::Ideal {
                SliceKind::Ideal
            } else {
                SliceKind::Media {
                    k1_sq: k_sq_of(l1),
                    ratio: static_ratio(l1, l2),
                }
            };
            return Ok(Self { kind, k2_sq });
        }
        let q_sq = (xi / CONSTANTS.c).powi(2);
        let eps2 = match scenario.gap.eps_imag_axis(xi)? {
            EpsValue::Finite(v) => v,
            EpsValue::Infinite => unreachable!("ideal gap rejected by validation"),
        };
        let k2_sq = eps2 * q_sq;
        let kind = match scenario.halfspace.eps_imag_axis(xi)? {
            EpsValue::Infinite => SliceKind::Ideal,
            EpsValue::Finite(eps1) => SliceKind::Media {
                k1_sq: eps1 * q_sq,
                ratio: TmRatio::Finite(eps1 / eps2),
            },
        };
        Ok(Self { kind, k2_sq })
    }

    pub(crate) fn is_identical(&self) -> bool {
        self.kind == SliceKind::Identical
    }

    /// Lower end of the t = 2γ₂d range (κ = 0).
    pub(crate) fn t_min(&self, d: f64) -> f64 {
        2.0 * d * self.k2_sq.sqrt()
    }

    fn gamma1(&self, kappa_sq: f64) -> WaveNumber {
        match self.kind {
            SliceKind::Ideal => WaveNumber::Infinite,
            SliceKind::Identical => WaveNumber::Finite((kappa_sq + self.k2_sq).sqrt()),
            SliceKind::Media { k1_sq, .. } => WaveNumber::Finite((kappa_sq + k1_sq).sqrt()),
        }
    }

    fn reflection(&self, kappa_sq: f64, gamma2: f64) -> Result<(f64, f64)> {
        match self.kind {
            SliceKind::Ideal => Ok((-1.0, 1.0)),
            SliceKind::Identical => Ok((0.0, 0.0)),
            SliceKind::Media { k1_sq, ratio } => {
                let gamma1 = (kappa_sq + k1_sq).sqrt();
                let sum = gamma1 + gamma2;
                if !(sum > 0.0) {
                    return Err(Error::domain(
                        "reflection undefined at kappa = 0 in the static limit",
                    ));
                }
                // (γ₂ − γ₁)/(γ₂ + γ₁) written without the cancelling difference
                let te = (self.k2_sq - k1_sq) / (sum * sum);
                let tm = match ratio {
                    TmRatio::Infinite => 1.0,
                    TmRatio::Zero => -1.0,
                    TmRatio::Finite(r) => (r * gamma2 - gamma1) / (r * gamma2 + gamma1),
                };
                Ok((te, tm))
            }
        }
    }

    /// (ln D_TE, ln D_TM) at t = 2γ₂d.
    pub(crate) fn log_d_at_t(&self, t: f64, d: f64, t_min: f64) -> Result<(f64, f64)> {
        if self.kind == SliceKind::Identical {
            return Ok((0.0, 0.0));
        }
        let gamma2 = t / (2.0 * d);
        let kappa_sq = ((t - t_min) * (t + t_min) / (4.0 * d * d)).max(0.0);
        let (te, tm) = self.reflection(kappa_sq, gamma2)?;
        let decay = (-t).exp();
        Ok((log_factor(te, decay)?, log_factor(tm, decay)?))
    }
}

fn log_factor(delta: f64, decay: f64) -> Result<f64> {
    let w = delta * delta * decay;
    if w >= 1.0 {
        return Err(Error::KernelDomain(format!(
            "1 - Δ²e^(-2γ₂d) = {} is not positive",
            1.0 - w
        )));
    }
    Ok((-w).ln_1p())
}

fn check_inputs(kappa: f64, xi: f64) -> Result<()> {
    if !(kappa >= 0.0) || !(xi >= 0.0) {
        return Err(Error::domain(format!(
            "kappa and xi must be >= 0, got kappa = {kappa}, xi = {xi}"
        )));
    }
    Ok(())
}

/// (γ₁, γ₂) at transverse wave number κ (rad/m) and imaginary frequency ξ (rad/s).
pub fn gammas(scenario: &PlanarScenario, kappa: f64, xi: f64) -> Result<(WaveNumber, f64)> {
    check_inputs(kappa, xi)?;
    let slice = FrequencySlice::new(scenario, xi)?;
    let kappa_sq = kappa * kappa;
    Ok((slice.gamma1(kappa_sq), (kappa_sq + slice.k2_sq).sqrt()))
}

/// (Δ_TE, Δ_TM).
pub fn reflection(scenario: &PlanarScenario, kappa: f64, xi: f64) -> Result<(f64, f64)> {
    check_inputs(kappa, xi)?;
    let slice = FrequencySlice::new(scenario, xi)?;
    let kappa_sq = kappa * kappa;
    slice.reflection(kappa_sq, (kappa_sq + slice.k2_sq).sqrt())
}

pub fn kernel_point(scenario: &PlanarScenario, kappa: f64, xi: f64) -> Result<KernelPoint> {
    let (gamma1, gamma2) = gammas(scenario, kappa, xi)?;
    let (delta_te, delta_tm) = reflection(scenario, kappa, xi)?;
    Ok(KernelPoint {
        kappa,
        xi,
        gamma1,
        gamma2,
        delta_te,
        delta_tm,
    })
}

/// (ln D_TE, ln D_TM) at the scenario's separation.
pub fn log_dispersion_split(scenario: &PlanarScenario, kappa: f64, xi: f64) -> Result<(f64, f64)> {
    check_inputs(kappa, xi)?;
    let slice = FrequencySlice::new(scenario, xi)?;
    let kappa_sq = kappa * kappa;
    let gamma2 = (kappa_sq + slice.k2_sq).sqrt();
    if slice.is_identical() {
        return Ok((0.0, 0.0));
    }
    let (te, tm) = slice.reflection(kappa_sq, gamma2)?;
    let decay = (-2.0 * gamma2 * scenario.d).exp();
    Ok((log_factor(te, decay)?, log_factor(tm, decay)?))
}

/// ln D = ln D_TM + ln D_TE, always ≤ 0 on the imaginary axis.
pub fn log_dispersion(scenario: &PlanarScenario, kappa: f64, xi: f64) -> Result<f64> {
    let (te, tm) = log_dispersion_split(scenario, kappa, xi)?;
    Ok(te + tm)
}

/// ln D evaluated at ω = ±iξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffAxisLog {
    pub te: [f64; 2],
    pub tm: [f64; 2],
    /// Real and imaginary part of ln D_TE + ln D_TM.
    pub value: [f64; 2],
    /// A factor was real and negative; its logarithm was taken as the principal
    /// value ln|D| (mean of the ±iπ continuations).
    pub principal_value: bool,
}

impl OffAxisLog {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.value[0], self.value[1])
    }
}

/// ln(1 + w) for complex w, accurate for small |w|.
pub(crate) fn complex_ln_1p(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        // w − w²/2 + w³/3 − w⁴/4 + w⁵/5
        let mut term = w;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 1..=5 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum += term * (sign / k as f64);
            term *= w;
        }
        sum
    } else {
        (Complex64::new(1.0, 0.0) + w).ln()
    }
}

/// Logarithm of one factor 1 − Δ²e^{−2γ₂d} off the imaginary axis.
///
/// Wherever the factor is genuinely complex its real part is positive
/// (|Δ_TE| ≤ 1, and |Δ_TM| = 1 when γ₁ is imaginary), so the principal branch
/// is the continuation from ln D = 0 at large ξ and κ. A real negative factor
/// can only occur for TM with ε₁ < 0 and is given its principal value.
pub(crate) fn off_axis_log_factor(
    delta: Complex64,
    decay: f64,
    xi: f64,
    kappa: f64,
) -> Result<(Complex64, bool)> {
    let w = -(delta * delta) * decay;
    let one_plus = Complex64::new(1.0, 0.0) + w;
    if !w.re.is_finite() || !w.im.is_finite() || one_plus.norm() == 0.0 {
        return Err(Error::BranchAmbiguity { xi, kappa });
    }
    if one_plus.im == 0.0 && one_plus.re < 0.0 {
        return Ok((Complex64::new((-one_plus.re).ln(), 0.0), true));
    }
    Ok((complex_ln_1p(w), false))
}

/// Reflection coefficients for a vacuum gap with complex ε₁ at frequency ξ (gap ε₂ = 1).
pub(crate) fn off_axis_reflection(eps1: Complex64, q_sq: f64, kappa_sq: f64, gamma2: f64) -> (Complex64, Complex64) {
    let k1_sq = eps1 * q_sq;
    let gamma1 = (k1_sq + kappa_sq).sqrt();
    let sum = gamma1 + gamma2;
    let te = (Complex64::new(q_sq, 0.0) - k1_sq) / (sum * sum);
    let tm = (eps1 * gamma2 - gamma1) / (eps1 * gamma2 + gamma1);
    (te, tm)
}

fn require_off_axis_scenario(scenario: &PlanarScenario) -> Result<()> {
    if scenario.gap != DielectricModel::Vacuum {
        return Err(Error::rejected("off-axis kernel requires a vacuum gap"));
    }
    match scenario.halfspace {
        DielectricModel::Drude { .. } | DielectricModel::Plasma { .. } => Ok(()),
        _ => Err(Error::rejected(
            "off-axis kernel supports Drude or plasma half-spaces only",
        )),
    }
}

pub(crate) fn off_axis_log_at(
    eps1: Complex64,
    q_sq: f64,
    kappa_sq: f64,
    gamma2: f64,
    d: f64,
    xi: f64,
) -> Result<(Complex64, Complex64, bool)> {
    let (te, tm) = off_axis_reflection(eps1, q_sq, kappa_sq, gamma2);
    let decay = (-2.0 * gamma2 * d).exp();
    let kappa = kappa_sq.sqrt();
    let (lte, pv_te) = off_axis_log_factor(te, decay, xi, kappa)?;
    let (ltm, pv_tm) = off_axis_log_factor(tm, decay, xi, kappa)?;
    Ok((lte, ltm, pv_te || pv_tm))
}

/// ln D(±iξ; κ, d) for a Drude or plasma half-space across vacuum.
pub fn log_dispersion_off_axis(
    scenario: &PlanarScenario,
    kappa: f64,
    xi: f64,
    sign: Sign,
) -> Result<OffAxisLog> {
    require_off_axis_scenario(scenario)?;
    if !(kappa >= 0.0) || !(xi > 0.0) {
        return Err(Error::domain("off-axis kernel needs kappa >= 0 and xi > 0"));
    }
    let eps1 = scenario.halfspace.eps_off_axis(xi, sign)?;
    let q_sq = (xi / CONSTANTS.c).powi(2);
    let kappa_sq = kappa * kappa;
    let gamma2 = (kappa_sq + q_sq).sqrt();
    let (te, tm, pv) = off_axis_log_at(eps1, q_sq, kappa_sq, gamma2, scenario.d, xi)?;
    let total = te + tm;
    Ok(OffAxisLog {
        te: [te.re, te.im],
        tm: [tm.re, tm.im],
        value: [total.re, total.im],
        principal_value: pv,
    })
}

pub(crate) fn require_extra_term_scenario(scenario: &PlanarScenario) -> Result<()> {
    require_off_axis_scenario(scenario)
}
