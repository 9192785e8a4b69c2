//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! The integrand receives every batch of Kronrod nodes at once, so a caller
//! can fan node evaluation out over threads while the rule itself stays
//! sequential and deterministic. Values may be real or complex.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::Result;

pub trait QuadValue:
    Copy + Send + Sync + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

pub const NODES_PER_RULE: usize = 21;

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl QuadOptions {
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: 0.0,
            max_intervals: 2000,
        }
    }

    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome<V> {
    pub value: V,
    pub abs_error: f64,
    pub evals: usize,
    pub converged: bool,
}

impl<V: QuadValue> QuadOutcome<V> {
    fn zero() -> Self {
        Self {
            value: V::default(),
            abs_error: 0.0,
            evals: 0,
            converged: true,
        }
    }

    fn absorb(&mut self, other: QuadOutcome<V>) {
        self.value = self.value + other.value;
        self.abs_error += other.abs_error;
        self.evals += other.evals;
        self.converged &= other.converged;
    }
}

/// The 21 abscissae of the rule on [a, b], in the order `rule_from_values` expects.
pub fn rule_nodes(a: f64, b: f64) -> [f64; NODES_PER_RULE] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut xs = [0.0; NODES_PER_RULE];
    for j in 0..10 {
        xs[2 * j] = center - half * XGK[j];
        xs[2 * j + 1] = center + half * XGK[j];
    }
    xs[20] = center;
    xs
}

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<V> Eq for Segment<V> {}

impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V> Ord for Segment<V> {
    // Largest error first; ties broken by position so the heap order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rule_from_values<V: QuadValue>(a: f64, b: f64, fv: &[V]) -> (V, f64) {
    let half = 0.5 * (b - a);
    let abs_half = half.abs();
    let fc = fv[20];
    let mut resk = fc * WGK[10];
    let mut resg = V::default();
    let mut resabs = fc.magnitude() * WGK[10];
    for j in 0..10 {
        let (f1, f2) = (fv[2 * j], fv[2 * j + 1]);
        resk = resk + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[2 * j] - mean).magnitude() + (fv[2 * j + 1] - mean).magnitude());
    }
    let result = resk * half;
    resabs *= abs_half;
    resasc *= abs_half;
    let mut err = ((resk - resg) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

/// Integrates over [a, b] with a batch integrand (one call per 21-node rule).
pub fn integrate_batched<V, F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadOutcome<V>>
where
    V: QuadValue,
    F: FnMut(&[f64]) -> Result<Vec<V>>,
{
    if a == b {
        return Ok(QuadOutcome::zero());
    }
    let mut eval = |lo: f64, hi: f64| -> Result<Segment<V>> {
        let xs = rule_nodes(lo, hi);
        let fv = f(&xs)?;
        let (value, error) = rule_from_values(lo, hi, &fv);
        Ok(Segment {
            a: lo,
            b: hi,
            value,
            error,
        })
    };

    let first = eval(a, b)?;
    let mut evals = NODES_PER_RULE;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    loop {
        let (total, err) = totals(&heap);
        let target = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if err <= target {
            return Ok(QuadOutcome {
                value: total,
                abs_error: err,
                evals,
                converged: true,
            });
        }
        if heap.len() >= opts.max_intervals {
            return Ok(QuadOutcome {
                value: total,
                abs_error: err,
                evals,
                converged: false,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval can no longer be split in floating point.
            heap.push(worst);
            let (total, err) = totals(&heap);
            return Ok(QuadOutcome {
                value: total,
                abs_error: err,
                evals,
                converged: err <= target,
            });
        }
        heap.push(eval(worst.a, mid)?);
        heap.push(eval(mid, worst.b)?);
        evals += 2 * NODES_PER_RULE;
    }
}

// Sums in interval order so the total is independent of the heap layout.
fn totals<V: QuadValue>(heap: &BinaryHeap<Segment<V>>) -> (V, f64) {
    let mut segs: Vec<&Segment<V>> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    segs.iter().fold((V::default(), 0.0), |(v, e), s| (v + s.value, e + s.error))
}

/// Integrates a pointwise integrand over [a, b].
pub fn integrate<V, F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadOutcome<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> Result<V>,
{
    integrate_batched(|xs: &[f64]| xs.iter().map(|&x| f(x)).collect(), a, b, opts)
}

/// Integrates an exponentially decaying integrand over [a, ∞).
///
/// The range is covered by consecutive panels of `panel` width until
/// `tail_bound(x)`, an upper bound on ∫ₓ^∞ |f|, falls below a tenth of the
/// target accuracy. The bound of the discarded tail is added to the error.
pub fn integrate_decaying_batched<V, F, B>(
    mut f: F,
    a: f64,
    panel: f64,
    tail_bound: B,
    opts: QuadOptions,
    max_panels: usize,
) -> Result<QuadOutcome<V>>
where
    V: QuadValue,
    F: FnMut(&[f64]) -> Result<Vec<V>>,
    B: Fn(f64) -> f64,
{
    let mut out: QuadOutcome<V> = QuadOutcome::zero();
    let mut lo = a;
    for _ in 0..max_panels {
        let hi = lo + panel;
        let panel_opts = QuadOptions {
            abs_tol: opts.abs_tol.max(0.5 * opts.rel_tol * out.value.magnitude()),
            ..opts
        };
        out.absorb(integrate_batched(&mut f, lo, hi, panel_opts)?);
        let tail = tail_bound(hi);
        let target = opts.abs_tol.max(opts.rel_tol * out.value.magnitude());
        if tail <= 0.1 * target || tail < f64::MIN_POSITIVE {
            out.abs_error += tail;
            return Ok(out);
        }
        lo = hi;
    }
    out.abs_error += tail_bound(lo);
    out.converged = false;
    Ok(out)
}

pub fn integrate_decaying<V, F, B>(
    mut f: F,
    a: f64,
    panel: f64,
    tail_bound: B,
    opts: QuadOptions,
    max_panels: usize,
) -> Result<QuadOutcome<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> Result<V>,
    B: Fn(f64) -> f64,
{
    integrate_decaying_batched(
        |xs: &[f64]| xs.iter().map(|&x| f(x)).collect(),
        a,
        panel,
        tail_bound,
        opts,
        max_panels,
    )
}
