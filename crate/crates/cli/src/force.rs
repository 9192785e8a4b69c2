//! Pressure P = −∂F/∂d from a sampled free-energy curve.
//!
//! Second-order three-point stencils on a nonuniform grid: central in the
//! interior, one-sided at the ends. The truncation error is estimated as twice
//! the gap to the third-order four-point derivative (or to the secant when only
//! three points exist), and the propagated energy errors are added on top.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ForceError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("separations must be strictly increasing (index {index}: {prev:e} then {next:e})")]
    NotSorted { index: usize, prev: f64, next: f64 },
    #[error("non-finite input at index {0}")]
    NonFinite(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    /// m
    pub d: f64,
    /// J/m²
    pub value: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressurePoint {
    pub d: f64,
    /// Pa; positive is repulsive.
    pub pressure: f64,
    pub error: f64,
}

/// Weights w so that Σ wⱼ F(xⱼ) is the derivative at `a` of the interpolating polynomial.
fn derivative_weights(x: &[f64], a: f64) -> Vec<f64> {
    (0..x.len())
        .map(|j| {
            let denom: f64 = (0..x.len()).filter(|&l| l != j).map(|l| x[j] - x[l]).product();
            let numer: f64 = (0..x.len())
                .filter(|&m| m != j)
                .map(|m| (0..x.len()).filter(|&l| l != j && l != m).map(|l| a - x[l]).product::<f64>())
                .sum();
            numer / denom
        })
        .collect()
}

/// Nodes `[lo, lo + len)` nearest to `i`, clamped to the curve.
fn window(i: usize, len: usize, n: usize) -> usize {
    i.saturating_sub(1).min(n - len)
}

fn slope(nodes: &[CurvePoint], a: f64) -> (f64, f64) {
    let x: Vec<f64> = nodes.iter().map(|p| p.d).collect();
    let w = derivative_weights(&x, a);
    let s = w.iter().zip(nodes).map(|(w, p)| w * p.value).sum();
    let propagated = w.iter().zip(nodes).map(|(w, p)| (w * p.abs_error).abs()).sum();
    (s, propagated)
}

pub fn force_from_energy(curve: &[CurvePoint]) -> Result<Vec<PressurePoint>, ForceError> {
    let n = curve.len();
    if n < 3 {
        return Err(ForceError::TooFewPoints(n));
    }
    for (i, p) in curve.iter().enumerate() {
        if !(p.d.is_finite() && p.value.is_finite() && p.abs_error.is_finite()) {
            return Err(ForceError::NonFinite(i));
        }
    }
    for i in 1..n {
        if curve[i].d <= curve[i - 1].d {
            return Err(ForceError::NotSorted {
                index: i,
                prev: curve[i - 1].d,
                next: curve[i].d,
            });
        }
    }
    Ok((0..n)
        .map(|i| {
            let a = curve[i].d;
            let lo = window(i, 3, n);
            let (s3, propagated) = slope(&curve[lo..lo + 3], a);
            let reference = if n >= 4 {
                let lo4 = window(i, 4, n);
                slope(&curve[lo4..lo4 + 4], a).0
            } else {
                (curve[lo + 2].value - curve[lo].value) / (curve[lo + 2].d - curve[lo].d)
            };
            PressurePoint {
                d: a,
                pressure: -s3,
                error: 2.0 * (s3 - reference).abs() + propagated,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(ds: &[f64], f: impl Fn(f64) -> f64) -> Vec<CurvePoint> {
        ds.iter()
            .map(|&d| CurvePoint {
                d,
                value: f(d),
                abs_error: 0.0,
            })
            .collect()
    }

    #[test]
    fn quadratic_is_exact() {
        let pts = curve(&[0.0, 0.3, 1.0, 1.7, 3.0], |d| 2.0 - 3.0 * d + 0.5 * d * d);
        for p in force_from_energy(&pts).unwrap() {
            assert!((p.pressure - (3.0 - p.d)).abs() < 1e-13, "{p:?}");
        }
    }

    #[test]
    fn inverse_square_within_error_column() {
        let c0 = -2.5e-20;
        let ds: Vec<f64> = (0..41).map(|k| 1e-6 * 10f64.powf(k as f64 / 40.0)).collect();
        let pts = curve(&ds, |d| c0 / (d * d));
        for p in force_from_energy(&pts).unwrap() {
            let exact = 2.0 * c0 / p.d.powi(3);
            let err = (p.pressure - exact).abs();
            assert!(err <= 2.0 * p.error, "{p:?} exact {exact}");
            assert!(err <= 0.05 * exact.abs());
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(force_from_energy(&curve(&[1.0, 2.0], |d| d)), Err(ForceError::TooFewPoints(2)));
        assert!(matches!(
            force_from_energy(&curve(&[1.0, 2.0, 2.0], |d| d)),
            Err(ForceError::NotSorted { index: 2, .. })
        ));
        assert!(matches!(
            force_from_energy(&curve(&[1.0, 3.0, 2.0], |d| d)),
            Err(ForceError::NotSorted { .. })
        ));
    }
}
