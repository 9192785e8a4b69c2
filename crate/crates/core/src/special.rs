//! Polylogarithms Li₂ and Li₃ on [0, 1].

use std::f64::consts::PI;

use crate::quantities::CONSTANTS;

/// Bernoulli numbers B₂, B₄, …, B₃₀.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// ζ(−n) for n ≥ 0.
fn zeta_nonpositive(n: usize) -> f64 {
    match n {
        0 => -0.5,
        n if n % 2 == 0 => 0.0,
        n => -BERNOULLI_EVEN[n.div_ceil(2) - 1] / (n + 1) as f64,
    }
}

/// ζ(s) for s ∈ {2, 3}.
fn zeta_positive(s: usize) -> f64 {
    match s {
        2 => PI * PI / 6.0,
        3 => CONSTANTS.zeta3,
        _ => unreachable!("only Li2 and Li3 are needed"),
    }
}

fn polylog(s: usize, z: f64) -> f64 {
    assert!((0.0..=1.0).contains(&z), "polylog argument {z} outside [0, 1]");
    if z == 0.0 {
        return 0.0;
    }
    if z <= 0.5 {
        let mut sum = 0.0;
        let mut p = z;
        for k in 1..200 {
            let term = p / (k as f64).powi(s as i32);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            p *= z;
        }
        return sum;
    }
    // Li_s(e^μ) = Σ_{k≠s−1} ζ(s−k) μ^k/k! + μ^{s−1}/(s−1)! [H_{s−1} − ln(−μ)]
    let mu = z.ln();
    if mu == 0.0 {
        return zeta_positive(s);
    }
    let harmonic: f64 = (1..s).map(|j| 1.0 / j as f64).sum();
    let mut sum = 0.0;
    let mut pow = 1.0; // μ^k / k!
    for k in 0..=31 {
        if k > 0 {
            pow *= mu / k as f64;
        }
        if k + 1 == s {
            sum += pow * (harmonic - (-mu).ln());
        } else if k < s {
            sum += pow * zeta_positive(s - k);
        } else {
            sum += pow * zeta_nonpositive(k - s);
        }
    }
    sum
}

/// Dilogarithm Li₂(z) for z ∈ [0, 1].
pub fn li2(z: f64) -> f64 {
    polylog(2, z)
}

/// Trilogarithm Li₃(z) for z ∈ [0, 1].
pub fn li3(z: f64) -> f64 {
    polylog(3, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(s: i32, z: f64) -> f64 {
        (1..20000).map(|k| z.powi(k) / (k as f64).powi(s)).sum()
    }

    #[test]
    fn known_values() {
        assert!((li2(1.0) - PI * PI / 6.0).abs() < 1e-15);
        let ln2 = 2f64.ln();
        assert!((li2(0.5) - (PI * PI / 12.0 - ln2 * ln2 / 2.0)).abs() < 1e-15);
        let li3_half = 7.0 / 8.0 * CONSTANTS.zeta3 - PI * PI * ln2 / 12.0 + ln2.powi(3) / 6.0;
        assert!((li3(0.5) - li3_half).abs() < 1e-15);
        assert!((li3(1.0) - CONSTANTS.zeta3).abs() < 1e-16);
    }

    #[test]
    fn branches_agree_with_direct_series() {
        for &z in &[0.3, 0.49, 0.51, 0.7, 0.9, 0.99] {
            assert!((li2(z) - direct(2, z)).abs() < 1e-13 * li2(z), "li2 {z}");
            assert!((li3(z) - direct(3, z)).abs() < 1e-13 * li3(z), "li3 {z}");
        }
        for &z in &[0.4999999, 0.5000001] {
            assert!((li2(z) - li2(0.5)).abs() < 1e-6);
        }
    }
}
