//! The sine-series term of the contour representation,
//!
//! ```text
//! X = −(iħ/2π) Σ_{n≥1} ∫₀^∞ sin(nħξ/k_BT) ln[D(iξ)/D(−iξ)] dξ,
//! ```
//!
//! integrated over the transverse wave vector with the same (1/2π)∫κ dκ
//! weight as the Matsubara sum. It vanishes identically whenever ε(ω) is a
//! function of ω², and is the piece the Drude model leaves behind.
//!
//! With ξ = cs/(2d) and t = 2γ₂d the n-th term becomes
//! `−i ħc/(32π²d³) ∫₀^∞ sin(nπs/x) G(s) ds`, with x = 2πk_BTd/(ħc) and
//! `G(s) = ∫_s^∞ t [ln D(+iξ) − ln D(−iξ)] dt`. Each n is integrated between
//! consecutive zeros of its sine, and the Drude pole ξ = γ is excluded by a
//! symmetric window that is shrunk until the result stops moving.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::dielectric::DielectricModel;
use crate::error::{Error, Result};
use crate::lifshitz_engine::{check_tol, kernel_tail_bound, LifshitzEngine};
use crate::planar_kernel::{off_axis_log_at, require_extra_term_scenario, PlanarScenario};
use crate::quadrature::{integrate_batched, integrate_decaying, QuadOptions, QuadValue};
use crate::quantities::{Sign, CONSTANTS};

const INNER_PANEL: f64 = 30.0;
const MAX_PANELS: usize = 40;
const MAX_WINDOW_SHRINKS: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct ExtraTermResult {
    /// Real part of the extra term, J/m².
    pub value_real: f64,
    /// Imaginary part left over after the κ- and ξ-integrations, J/m².
    pub value_imag_part: f64,
    /// Quadrature error plus the sine-series remainder estimate, J/m².
    pub abs_error: f64,
    pub n_series_terms: usize,
    /// Magnitude of the last series term, J/m².
    pub remainder_estimate: f64,
    /// Per-n contributions (real, imaginary), J/m².
    pub per_n: Vec<[f64; 2]>,
    /// ξ-intervals (rad/s) excluded around the Drude pole.
    pub pv_windows: Vec<(f64, f64)>,
    /// True if any lower-axis factor was real and negative somewhere.
    pub principal_value_crossings: bool,
    pub quad_evals: usize,
}

struct OffAxisSetup {
    halfspace: DielectricModel,
    d: f64,
    /// Bound magnitude used as the absolute tolerance scale of inner integrals.
    inner_abs: f64,
}

impl OffAxisSetup {
    /// Worst |Δ_TM(−iξ)|² over κ, used to bound the inner tail.
    fn lower_tm_bound(&self, eps_minus: f64) -> f64 {
        if eps_minus >= 0.0 {
            1.0
        } else {
            let e = -eps_minus;
            ((e + 1.0) / (e - 1.0)).powi(2)
        }
    }

    /// G(s) together with its error, evaluation count and principal-value flag.
    fn g(&self, s: f64) -> Result<(Complex64, f64, usize, bool)> {
        let d = self.d;
        let xi = CONSTANTS.c * s / (2.0 * d);
        let eps_plus = self.halfspace.eps_off_axis(xi, Sign::Plus)?;
        let eps_minus = self.halfspace.eps_off_axis(xi, Sign::Minus)?;
        if eps_plus == eps_minus {
            return Ok((Complex64::new(0.0, 0.0), 0.0, 0, false));
        }
        let q_sq = (s / (2.0 * d)).powi(2);
        let b = self.lower_tm_bound(eps_minus.re);
        let mut pv = false;
        let out = integrate_decaying(
            |t: f64| {
                let gamma2 = t / (2.0 * d);
                let kappa_sq = ((t - s) * (t + s) / (4.0 * d * d)).max(0.0);
                let (te_p, tm_p, _) = off_axis_log_at(eps_plus, q_sq, kappa_sq, gamma2, d, xi)?;
                let (te_m, tm_m, crossed) = off_axis_log_at(eps_minus, q_sq, kappa_sq, gamma2, d, xi)?;
                pv |= crossed;
                Ok((te_p + tm_p - te_m - tm_m) * t)
            },
            s,
            INNER_PANEL,
            |x| {
                let e = (-x).exp();
                if b * e >= 0.5 || x <= 0.0 {
                    return f64::INFINITY;
                }
                // + side: |Δ| ≤ 1; − side: |Δ_TE| ≤ 1, |Δ_TM|² ≤ b
                kernel_tail_bound(x) + (1.0 + b) * 2.0 * (x + 1.0) * e
            },
            QuadOptions::relative(1e-10).with_abs(self.inner_abs),
            MAX_PANELS,
        )?;
        if !out.converged {
            return Err(Error::convergence(format!(
                "lower-axis kappa quadrature at xi = {xi:e} rad/s did not converge"
            )));
        }
        Ok((out.value, out.abs_error, out.evals, pv))
    }
}

struct Piece {
    value: Complex64,
    abs_error: f64,
    evals: usize,
    pv: bool,
}

fn integrate_piece(setup: &OffAxisSetup, n: usize, x: f64, a: f64, b: f64, abs_tol: f64) -> Result<Piece> {
    let mut evals = 0usize;
    let mut inner_err = 0.0;
    let mut pv = false;
    let freq = n as f64 * PI / x;
    let out = integrate_batched(
        |ss: &[f64]| {
            let mut v = Vec::with_capacity(ss.len());
            for &s in ss {
                let (g, err, e, crossed) = setup.g(s)?;
                evals += e;
                inner_err = f64::max(inner_err, err);
                pv |= crossed;
                v.push(g * (freq * s).sin());
            }
            Ok(v)
        },
        a,
        b,
        QuadOptions {
            rel_tol: 1e-10,
            abs_tol,
            max_intervals: 200,
        },
    )?;
    if !out.converged {
        return Err(Error::convergence(format!(
            "sine integral n = {n} on [{a:e}, {b:e}] did not converge"
        )));
    }
    Ok(Piece {
        value: out.value,
        abs_error: out.abs_error + inner_err * (b - a),
        evals: evals + out.evals,
        pv,
    })
}

/// Evaluates the extra term for a Drude or plasma half-space across vacuum.
pub fn extra_term(scenario: &PlanarScenario, tol: f64, n_cap: usize) -> Result<ExtraTermResult> {
    LifshitzEngine::default().extra_term(scenario, tol, n_cap)
}

impl LifshitzEngine {
    pub fn extra_term(&self, scenario: &PlanarScenario, tol: f64, n_cap: usize) -> Result<ExtraTermResult> {
        scenario.validate()?;
        require_extra_term_scenario(scenario)?;
        check_tol(tol)?;
        if n_cap < 1 {
            return Err(Error::domain("n_cap must be >= 1"));
        }
        if !(scenario.temperature > 0.0) {
            return Err(Error::domain("extra term needs T > 0"));
        }
        let d = scenario.d;
        let pole = match scenario.halfspace {
            DielectricModel::Drude { omega_p, gamma } if gamma > 0.0 => {
                if 2.0 * omega_p * omega_p <= gamma * gamma {
                    return Err(Error::rejected(
                        "omega_p <= gamma/sqrt(2): lower-axis TM reflection has a surface pole",
                    ));
                }
                Some(2.0 * gamma * d / CONSTANTS.c)
            }
            _ => None,
        };
        let x = CONSTANTS.thermal_ratio(d, scenario.temperature);
        let prefactor = CONSTANTS.hbar_c() / (32.0 * PI * PI * d.powi(3));

        // Absolute scale: the on-axis double integral ∫ds∫t|ln D|dt.
        let reference = self.free_energy_zero_t(scenario, 1e-4)?.value.abs() / prefactor;
        let abs_target = tol * reference;
        let setup = OffAxisSetup {
            halfspace: scenario.halfspace.clone(),
            d,
            inner_abs: 1e-3 * abs_target,
        };

        // Beyond the pole |G(s)| ≤ 2·kernel_tail_bound(s); pick S with ∫_S^∞ below the target.
        let tail = |s: f64| 4.0 * (s + 2.0) * (-s).exp() / -(-s).exp_m1();
        let mut s_max = pole.map_or(1.0, |p| 2.0 * p).max(1.0);
        while tail(s_max) > 0.01 * abs_target / n_cap as f64 {
            s_max += 1.0;
        }

        let mut per_n = Vec::with_capacity(n_cap);
        let mut total = Complex64::new(0.0, 0.0);
        let mut abs_error = 0.0;
        let mut evals = 0;
        let mut pv_any = false;
        let mut pv_windows = Vec::new();

        for n in 1..=n_cap {
            let period = x / n as f64;
            let mut points = vec![0.0];
            let mut j = 1;
            while j as f64 * period < s_max {
                points.push(j as f64 * period);
                j += 1;
            }
            points.push(s_max);

            let window0 = pole.map(|p| 1e-3 * p);
            let mut intervals: Vec<(f64, f64)> = Vec::new();
            for w in points.windows(2) {
                let (a, b) = (w[0], w[1]);
                match (pole, window0) {
                    (Some(p), Some(delta)) => {
                        let (lo, hi) = (p - delta, p + delta);
                        if b <= lo || a >= hi {
                            intervals.push((a, b));
                        } else {
                            if a < lo {
                                intervals.push((a, lo));
                            }
                            if b > hi {
                                intervals.push((hi, b));
                            }
                        }
                    }
                    _ => intervals.push((a, b)),
                }
            }
            let per_interval = 0.1 * abs_target / (n_cap as f64 * intervals.len() as f64);
            let pieces = self
                .config
                .execution
                .map_ordered(&intervals, |&(a, b)| integrate_piece(&setup, n, x, a, b, per_interval));
            let mut jn = Complex64::new(0.0, 0.0);
            for p in pieces {
                let p = p?;
                jn += p.value;
                abs_error += p.abs_error;
                evals += p.evals;
                pv_any |= p.pv;
            }

            if let (Some(p), Some(mut delta)) = (pole, window0) {
                // shrink the excluded window until the added rings stop contributing
                let mut converged = false;
                for _ in 0..MAX_WINDOW_SHRINKS {
                    let next = delta / 10.0;
                    let rings = [(p - delta, p - next), (p + next, p + delta)];
                    let pieces = self
                        .config
                        .execution
                        .map_ordered(&rings, |&(a, b)| integrate_piece(&setup, n, x, a, b, per_interval));
                    let mut inc = Complex64::new(0.0, 0.0);
                    for piece in pieces {
                        let piece = piece?;
                        inc += piece.value;
                        abs_error += piece.abs_error;
                        evals += piece.evals;
                        pv_any |= piece.pv;
                    }
                    jn += inc;
                    delta = next;
                    if inc.magnitude() <= 0.01 * abs_target / n_cap as f64 {
                        converged = true;
                        break;
                    }
                }
                if !converged {
                    return Err(Error::convergence(
                        "principal-value window around the Drude pole did not converge",
                    ));
                }
                // the remaining window holds at most 2δ·max|G|; bounded by the last ring
                let xi_scale = CONSTANTS.c / (2.0 * d);
                pv_windows.push(((p - delta) * xi_scale, (p + delta) * xi_scale));
            }
            // X_n = −i·prefactor·J_n
            let xn = Complex64::new(0.0, -1.0) * jn * prefactor;
            per_n.push([xn.re, xn.im]);
            total += xn;
        }

        abs_error = abs_error * prefactor + tail(s_max) * prefactor * n_cap as f64;
        let last = per_n.last().map(|v| Complex64::new(v[0], v[1]).norm()).unwrap_or(0.0);
        Ok(ExtraTermResult {
            value_real: total.re,
            value_imag_part: total.im,
            abs_error: abs_error + last,
            n_series_terms: n_cap,
            remainder_estimate: last,
            per_n,
            pv_windows,
            principal_value_crossings: pv_any,
            quad_evals: evals,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsupported_scenarios() {
        let ideal = PlanarScenario::new(DielectricModel::IdealMetal, DielectricModel::Vacuum, 1e-6, 300.0).unwrap();
        assert!(extra_term(&ideal, 1e-6, 2).is_err());
        let plasma = PlanarScenario::new(
            DielectricModel::plasma(1e16).unwrap(),
            DielectricModel::Vacuum,
            1e-6,
            300.0,
        )
        .unwrap();
        assert!(extra_term(&plasma, 1e-6, 0).is_err());
        let lossy = PlanarScenario::new(
            DielectricModel::drude(1e13, 1e14).unwrap(),
            DielectricModel::Vacuum,
            1e-6,
            300.0,
        )
        .unwrap();
        assert!(matches!(extra_term(&lossy, 1e-6, 1), Err(Error::Rejected(_))));
    }

    #[test]
    fn plasma_vanishes_exactly() {
        let plasma = PlanarScenario::new(
            DielectricModel::plasma_ev(9.0).unwrap(),
            DielectricModel::Vacuum,
            1e-6,
            300.0,
        )
        .unwrap();
        let r = extra_term(&plasma, 1e-6, 3).unwrap();
        assert_eq!(r.value_real, 0.0);
        assert_eq!(r.value_imag_part, 0.0);
        assert!(r.pv_windows.is_empty());
    }
}
