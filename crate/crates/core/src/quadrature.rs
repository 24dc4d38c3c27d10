//! Globally adaptive Gauss–Kronrod integration over breakpoint lists, plus
//! the tail devices used for integrals in the log variable `u = -ln t`.
//!
//! After the substitution every outer integral of the engine becomes
//! `∫_0^∞ F(u) du` where `F` is smooth between known breakpoints and, past
//! the last breakpoint, either decays exponentially or behaves like the
//! log-power `c (1+u)^b`. The latter integrates in closed form:
//! `∫_{u0}^∞ (1+u)^b du = (1+u0)^{b+1} / (-(b+1))` for `b < -1`.

use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Resolution and accuracy contract for the weighted log integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    /// Initial Gauss–Kronrod panels per analytic piece.
    pub panels_per_cell: usize,
    /// Truncation depth, in e-folds of the decaying factor, for tails that
    /// are integrated numerically.
    pub tail_cut: f64,
    /// Target relative error.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels_per_cell: 1,
            tail_cut: 50.0,
            rel_tol: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.panels_per_cell < 1 {
            return domain("panels_per_cell must be at least 1");
        }
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return domain("rel_tol must be positive");
        }
        if !(self.tail_cut > 0.0) || !self.tail_cut.is_finite() {
            return domain("tail_cut must be positive");
        }
        Ok(())
    }

    /// Same spec with twice the initial panels.
    pub fn refined(&self) -> Self {
        Self {
            panels_per_cell: self.panels_per_cell * 2,
            ..*self
        }
    }
}

/// An integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, abs_err: 0.0 }
    }

    pub fn rel_err(&self) -> f64 {
        if self.value == 0.0 {
            if self.abs_err == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.abs_err / self.value.abs()
        }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, o: Estimate) -> Estimate {
        Estimate {
            value: self.value + o.value,
            abs_err: self.abs_err + o.abs_err,
        }
    }
}

impl std::iter::Sum for Estimate {
    fn sum<I: Iterator<Item = Estimate>>(iter: I) -> Estimate {
        iter.fold(Estimate::default(), |a, b| a + b)
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

/// 21-point Kronrod rule with embedded 10-point Gauss rule.
/// Returns `(kronrod, |kronrod - gauss|)`.
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let x = half * XGK[j];
        let s = f(center - x) + f(center + x);
        kron += WGK[j] * s;
        // Gauss nodes sit at the odd Kronrod indices
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

const MAX_PANELS: usize = 20_000;

/// Integrate `f` over `[breaks[0], breaks.last()]`, never straddling an
/// interior breakpoint. Panels with the largest error are bisected until the
/// total error estimate drops below `rel_tol · |value|`.
pub fn integrate_breaks<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], spec: &QuadratureSpec) -> Estimate {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(hi > lo) {
            continue;
        }
        let m = spec.panels_per_cell;
        for i in 0..m {
            let a = lo + (hi - lo) * i as f64 / m as f64;
            let b = if i + 1 == m {
                hi
            } else {
                lo + (hi - lo) * (i + 1) as f64 / m as f64
            };
            let (v, e) = gk21(f, a, b);
            total += v;
            err += e;
            heap.push(Panel { a, b, value: v, err: e });
        }
    }
    let floor = f64::MIN_POSITIVE;
    while err > (spec.rel_tol * total.abs()).max(floor) && heap.len() < MAX_PANELS {
        let Some(p) = heap.pop() else { break };
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            // interval exhausted at machine precision
            heap.push(Panel { err: 0.0, ..p });
            err = heap.iter().map(|q| q.err).sum();
            if heap.iter().all(|q| q.err == 0.0) {
                break;
            }
            continue;
        }
        let (v1, e1) = gk21(f, p.a, mid);
        let (v2, e2) = gk21(f, mid, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.err;
        heap.push(Panel {
            a: p.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: p.b,
            value: v2,
            err: e2,
        });
    }
    // recompute to shed accumulated cancellation in the running sums
    let value = heap.iter().map(|p| p.value).sum();
    let abs_err = heap.iter().map(|p| p.err).sum();
    Estimate { value, abs_err }
}

/// `∫_{u0}^∞ (1+u)^b du`, `+∞` when `b ≥ -1`.
pub fn log_tail(b: f64, u0: f64) -> f64 {
    if b >= -1.0 {
        return f64::INFINITY;
    }
    (1.0 + u0).powf(b + 1.0) / (-(b + 1.0))
}

/// `∫_{u0}^∞ f` for an integrand decaying at least like `exp(-rate·u)`;
/// the domain is cut after `spec.tail_cut / rate` e-folds.
pub fn decaying_tail<F: Fn(f64) -> f64>(f: &F, u0: f64, rate: f64, spec: &QuadratureSpec) -> Estimate {
    let span = spec.tail_cut / rate;
    let pieces = 8;
    let breaks: Vec<f64> = (0..=pieces).map(|i| u0 + span * i as f64 / pieces as f64).collect();
    integrate_breaks(f, &breaks, spec)
}

/// `∫_{u0}^∞ f` for an integrand behaving like `(1+u)^exponent` with
/// `exponent < -1`, integrated in `z = ln(1+u)` where it decays exponentially.
pub fn algebraic_tail<F: Fn(f64) -> f64>(f: &F, u0: f64, exponent: f64, spec: &QuadratureSpec) -> Estimate {
    if exponent >= -1.0 {
        return Estimate {
            value: f64::INFINITY,
            abs_err: 0.0,
        };
    }
    let g = |z: f64| {
        let e = z.exp();
        f(e - 1.0) * e
    };
    decaying_tail(&g, (1.0 + u0).ln(), -(exponent + 1.0), spec)
}

const GOLDEN: f64 = 0.381_966_011_250_105_1; // 2 - φ

/// Golden-section maximisation of a unimodal `f` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let mut x1 = a + GOLDEN * (b - a);
    let mut x2 = b - GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + GOLDEN * (b - a);
            f1 = f(x1);
        }
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Supremum of `f` over `[a, b]`: uniform sampling followed by golden
/// refinement around the best sample. Endpoints are always candidates.
pub fn sampled_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, samples: usize) -> f64 {
    let n = samples.max(2);
    let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let (ibest, &vbest) = vals
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty sample");
    if !vbest.is_finite() {
        return vbest;
    }
    let lo = xs[ibest.saturating_sub(1)];
    let hi = xs[(ibest + 1).min(n)];
    let (_, v) = golden_max(f, lo, hi, 200);
    v.max(vbest)
}
