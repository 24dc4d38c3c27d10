//! Bounded orthonormal systems of step functions, the coefficient map and
//! its inverse.
//!
//! A system on `n` equal cells is an `n × n` unitary `U`; its `k`-th function
//! takes the value `√n U[k][j]` on cell `j`, so `∫ φ_k φ̄_m = (UU*)_{km}` and
//! `M = sup_k ‖φ_k‖_∞ = √n max |U[k][j]|`. Transforms are dense `O(n²)`
//! matrix products.

use crate::error::{domain, Error, Result};
use crate::measure::{FiniteSequence, StepFunction};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

/// Grid alignment tolerance for [`forward`].
const GRID_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    /// Discrete exponentials `e^{2πi m j/n}` with frequencies ordered
    /// `0, 1, n-1, 2, n-2, …`.
    Dft,
    /// Sylvester–Walsh matrix; `n` must be a power of two.
    Hadamard,
    /// Normalised cell indicators, `M = √n`.
    IdentityLike,
    /// Haar-like unitary from the QR factorisation of a Gaussian matrix.
    RandomUnitary(u64),
    /// Kronecker power of a planar reflection at angle `(π/4)(1-λ)`:
    /// Hadamard at `λ = 0`, identity-like at `λ = 1`, `M` increasing between.
    GivensInterpolated(f64),
}

impl SystemKind {
    pub fn label(&self) -> String {
        match self {
            SystemKind::Dft => "dft".into(),
            SystemKind::Hadamard => "hadamard".into(),
            SystemKind::IdentityLike => "identity_like".into(),
            SystemKind::RandomUnitary(seed) => format!("random_unitary({seed})"),
            SystemKind::GivensInterpolated(l) => format!("givens_interpolated({l})"),
        }
    }
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;

    /// `dft`, `hadamard`, `identity_like`, `random_unitary(<seed>)`,
    /// `givens_interpolated(<lambda>)`; `name:arg` is accepted too.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.find(['(', ':']) {
            Some(i) => (&s[..i], Some(s[i + 1..].trim_end_matches(')'))),
            None => (s, None),
        };
        let bad = || Error::Domain(format!("unknown system kind {s:?}"));
        match (name, arg) {
            ("dft", None) => Ok(SystemKind::Dft),
            ("hadamard", None) => Ok(SystemKind::Hadamard),
            ("identity_like", None) => Ok(SystemKind::IdentityLike),
            ("random_unitary", a) => Ok(SystemKind::RandomUnitary(a.unwrap_or("0").parse().map_err(|_| bad())?)),
            ("givens_interpolated" | "givens", Some(a)) => {
                Ok(SystemKind::GivensInterpolated(a.parse().map_err(|_| bad())?))
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteONS {
    kind: SystemKind,
    n: usize,
    /// row-major `φ_k` on cell `j`, i.e. `√n U[k][j]`
    values: Vec<Complex64>,
    bound_m: f64,
}

impl DiscreteONS {
    /// Wraps a row-major unitary matrix; unitarity is checked to `1e-10`.
    pub fn from_matrix(kind: SystemKind, n: usize, matrix: Vec<Complex64>) -> Result<Self> {
        if n == 0 || matrix.len() != n * n {
            return domain("system matrix must be n × n with n ≥ 1");
        }
        let s = (n as f64).sqrt();
        let sys = Self::assemble(kind, n, matrix.into_iter().map(|z| z * s).collect());
        let dev = sys.unitarity_defect();
        if !(dev <= 1e-10) {
            return domain(format!("matrix is not unitary (defect {dev:.3e})"));
        }
        Ok(sys)
    }

    fn assemble(kind: SystemKind, n: usize, values: Vec<Complex64>) -> Self {
        let bound_m = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Self {
            kind,
            n,
            values,
            bound_m,
        }
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `M = sup_k ‖φ_k‖_{L∞}`.
    pub fn bound_m(&self) -> f64 {
        self.bound_m
    }

    /// `U[k][j] = φ_k(j) / √n`.
    pub fn entry(&self, k: usize, j: usize) -> Complex64 {
        self.values[k * self.n + j] / (self.n as f64).sqrt()
    }

    /// Values of `φ_{k+1}` on the grid cells.
    pub fn phi_values(&self, k: usize) -> &[Complex64] {
        &self.values[k * self.n..(k + 1) * self.n]
    }

    /// `max_{k,m} |(UU*)_{km} - δ_{km}|`, `O(n³)`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for m in k..n {
                let dot: Complex64 = self
                    .phi_values(k)
                    .iter()
                    .zip(self.phi_values(m))
                    .map(|(a, b)| a * b.conj())
                    .sum::<Complex64>()
                    / n as f64;
                let target = if k == m { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// `φ_k` (1-based) as a step function on the system grid.
    pub fn phi(&self, k: usize) -> Result<StepFunction> {
        if k == 0 || k > self.n {
            return domain(format!("system has functions 1..={}, asked for {k}", self.n));
        }
        StepFunction::uniform(self.phi_values(k - 1).to_vec())
    }

    /// Index (1-based) and cell of the entry realising `M`.
    pub fn argmax_entry(&self) -> (usize, usize) {
        let mut best = (0, 0, -1.0);
        for k in 0..self.n {
            for j in 0..self.n {
                let v = self.values[k * self.n + j].norm();
                if v > best.2 {
                    best = (k, j, v);
                }
            }
        }
        (best.0 + 1, best.1)
    }
}

fn is_power_of_two(n: usize) -> bool {
    n >= 1 && n & (n - 1) == 0
}

pub fn make_system(kind: SystemKind, n: usize) -> Result<DiscreteONS> {
    if n == 0 {
        return domain("system size must be at least 1");
    }
    let nf = n as f64;
    let sqrt_n = nf.sqrt();
    // φ_k on the cells, √n times the unitary matrix
    let values: Vec<Complex64> = match kind {
        SystemKind::Dft => {
            let freq = |k: usize| if k % 2 == 1 { k.div_ceil(2) } else { (n - k / 2) % n };
            let mut m = Vec::with_capacity(n * n);
            for k in 0..n {
                let f = freq(k);
                for j in 0..n {
                    // reduce the product mod n before scaling for an exact phase
                    let ph = 2.0 * PI * ((f * j) % n) as f64 / nf;
                    m.push(Complex64::from_polar(1.0, ph));
                }
            }
            m
        }
        SystemKind::Hadamard => {
            if !is_power_of_two(n) {
                return domain(format!("hadamard systems need n a power of two, got {n}"));
            }
            let mut m = Vec::with_capacity(n * n);
            for k in 0..n {
                for j in 0..n {
                    let sign = if (k & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    m.push(Complex64::new(sign, 0.0));
                }
            }
            m
        }
        SystemKind::IdentityLike => {
            let mut m = vec![Complex64::new(0.0, 0.0); n * n];
            for k in 0..n {
                m[k * n + k] = Complex64::new(sqrt_n, 0.0);
            }
            m
        }
        SystemKind::RandomUnitary(seed) => random_unitary(n, seed).into_iter().map(|z| z * sqrt_n).collect(),
        SystemKind::GivensInterpolated(lambda) => {
            if !is_power_of_two(n) {
                return domain(format!("givens_interpolated systems need n a power of two, got {n}"));
            }
            if !(0.0..=1.0).contains(&lambda) {
                return domain(format!("givens_interpolated needs lambda in [0,1], got {lambda}"));
            }
            let th = FRAC_PI_4 * (1.0 - lambda);
            let (s, c) = th.sin_cos();
            let g = [[c, s], [s, -c]];
            let bits = n.trailing_zeros();
            let mut m = Vec::with_capacity(n * n);
            for k in 0..n {
                for j in 0..n {
                    let mut v = 1.0;
                    for b in 0..bits {
                        v *= g[(k >> b) & 1][(j >> b) & 1];
                    }
                    m.push(Complex64::new(v * sqrt_n, 0.0));
                }
            }
            m
        }
    };
    Ok(DiscreteONS::assemble(kind, n, values))
}

fn random_unitary(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // fix the phases so the distribution does not depend on the QR convention
    let phases: Vec<Complex64> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    let mut m = Vec::with_capacity(n * n);
    for k in 0..n {
        for j in 0..n {
            // rows of U are the columns of Q·diag(phase)
            m.push(q[(j, k)] * phases[k]);
        }
    }
    m
}

/// Values of `f` on the `n`-cell grid. Every breakpoint of `f` must be a
/// grid point, so that `f` is exactly representable on the grid.
pub fn grid_values(f: &StepFunction, n: usize) -> Result<Vec<Complex64>> {
    let nf = n as f64;
    let mut vals = vec![Complex64::new(0.0, 0.0); n];
    for (a, b, v) in f.cells() {
        let (ja, jb) = ((a * nf).round(), (b * nf).round());
        for (x, j) in [(a, ja), (b, jb)] {
            if (x - j / nf).abs() > GRID_TOL {
                return domain(format!("function breakpoint {x} is not on the {n}-cell grid"));
            }
        }
        for slot in &mut vals[ja as usize..jb as usize] {
            *slot = v;
        }
    }
    Ok(vals)
}

/// `c_k = ∫_0^1 f φ̄_k`, `k = 1..=n`.
pub fn forward(f: &StepFunction, sys: &DiscreteONS) -> Result<FiniteSequence> {
    let n = sys.n;
    let vals = grid_values(f, n)?;
    let w = 1.0 / n as f64;
    let coeffs = (0..n)
        .map(|k| {
            sys.phi_values(k)
                .iter()
                .zip(&vals)
                .map(|(p, v)| p.conj() * v)
                .sum::<Complex64>()
                * w
        })
        .collect();
    FiniteSequence::new(coeffs)
}

/// `Σ_k c_k φ_k` on the system grid.
pub fn inverse(c: &FiniteSequence, sys: &DiscreteONS) -> Result<StepFunction> {
    let n = sys.n;
    if c.len() > n {
        return domain(format!("sequence of length {} exceeds system size {n}", c.len()));
    }
    let mut vals = vec![Complex64::new(0.0, 0.0); n];
    for (k, ck) in c.entries().iter().enumerate() {
        if *ck == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (v, p) in vals.iter_mut().zip(sys.phi_values(k)) {
            *v += ck * p;
        }
    }
    StepFunction::uniform(vals)
}

/// Outcome of [`endpoint_norms`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointReport {
    pub system: String,
    pub n: usize,
    pub bound_m: f64,
    pub samples: usize,
    /// `max |‖𝓕f‖₂ - ‖f‖₂| / ‖f‖₂`
    pub parseval_forward_dev: f64,
    /// `max |‖𝓕⁻¹c‖₂ - ‖c‖₂| / ‖c‖₂`
    pub parseval_inverse_dev: f64,
    /// samples with `sup_k |c_k| > M‖f‖₁`
    pub l1_to_linf_violations: usize,
    /// samples with `‖𝓕⁻¹c‖_∞ > M‖c‖₁`
    pub inverse_l1_to_linf_violations: usize,
    /// `m` such that `e_m` attains `‖𝓕⁻¹e_m‖_∞ = M`
    pub witness_index: usize,
    /// `|‖φ_m‖_∞ - M| / M`
    pub witness_dev: f64,
}

impl EndpointReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.parseval_forward_dev <= tol
            && self.parseval_inverse_dev <= tol
            && self.l1_to_linf_violations == 0
            && self.inverse_l1_to_linf_violations == 0
            && self.witness_dev <= tol
    }
}

/// Random grid-aligned function with complex Gaussian cell values.
pub fn random_grid_function(n: usize, rng: &mut ChaCha8Rng) -> StepFunction {
    StepFunction::uniform(random_complex(n, rng)).expect("n ≥ 1 gives a valid function")
}

pub fn random_complex(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect()
}

/// Checks the `L₂→l₂`, `L₁→l∞` and inverse endpoint bounds on random data.
pub fn endpoint_norms(sys: &DiscreteONS, samples: usize, seed: u64) -> Result<EndpointReport> {
    let n = sys.n;
    let m = sys.bound_m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slack = 1.0 + 1e-12;
    let mut report = EndpointReport {
        system: sys.kind.label(),
        n,
        bound_m: m,
        samples,
        parseval_forward_dev: 0.0,
        parseval_inverse_dev: 0.0,
        l1_to_linf_violations: 0,
        inverse_l1_to_linf_violations: 0,
        witness_index: 0,
        witness_dev: 0.0,
    };
    for _ in 0..samples {
        let f = random_grid_function(n, &mut rng);
        let c = forward(&f, sys)?;
        let dev = (c.l2_norm() - f.l2_norm()).abs() / f.l2_norm();
        report.parseval_forward_dev = report.parseval_forward_dev.max(dev);
        if c.linf_norm() > m * f.l1_norm() * slack {
            report.l1_to_linf_violations += 1;
        }
        let c = FiniteSequence::new(random_complex(n, &mut rng))?;
        let g = inverse(&c, sys)?;
        let dev = (g.l2_norm() - c.l2_norm()).abs() / c.l2_norm();
        report.parseval_inverse_dev = report.parseval_inverse_dev.max(dev);
        if g.linf_norm() > m * c.l1_norm() * slack {
            report.inverse_l1_to_linf_violations += 1;
        }
    }
    let (k, _) = sys.argmax_entry();
    let g = inverse(&FiniteSequence::unit(k), sys)?;
    report.witness_index = k;
    report.witness_dev = (g.linf_norm() - m).abs() / m;
    Ok(report)
}
