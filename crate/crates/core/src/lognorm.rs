//! Lorentz–Zygmund quasi-norms and the limiting L/R quasi-norms of step
//! functions and finite sequences.
//!
//! Function norms are evaluated in `u = -ln t`. On the cell of `f*` adjacent
//! to `t = 0` the weight is a pure log-power and integrates in closed form;
//! every other contribution is smooth between breakpoints and goes through
//! [`integrate_breaks`]. Divergent norms come back as `+∞`.

use crate::error::{domain, Error, Result};
use crate::measure::{rearrange_function, rearrange_sequence, FiniteSequence, StepFunction};
use crate::quadrature::{decaying_tail, integrate_breaks, log_tail, Estimate, QuadratureSpec};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Parameters of `L_{p,q}(log L)_α` and `l_{p,q}(log l)_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LZParams {
    #[serde(with = "crate::extreal")]
    pub p: f64,
    #[serde(with = "crate::extreal")]
    pub q: f64,
    pub alpha: f64,
}

impl LZParams {
    pub fn new(p: f64, q: f64, alpha: f64) -> Result<Self> {
        let prm = Self { p, q, alpha };
        prm.validate()?;
        Ok(prm)
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent("p", self.p)?;
        check_exponent("q", self.q)?;
        if !self.alpha.is_finite() {
            return domain(format!("alpha must be finite, got {}", self.alpha));
        }
        Ok(())
    }
}

/// Which part of `f*` feeds the inner norm: `(0,t)` for L, `(t,1)` for R.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(Side::L),
            "R" | "r" => Ok(Side::R),
            _ => domain(format!("side must be L or R, got {s:?}")),
        }
    }
}

/// Parameters of the limiting spaces `L^{L/R}_{p,q,α,r}` and `l^{L/R}_{p,q,α,r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimParams {
    #[serde(with = "crate::extreal")]
    pub q: f64,
    pub alpha: f64,
    #[serde(with = "crate::extreal", default = "two")]
    pub r: f64,
    pub side: Side,
    #[serde(with = "crate::extreal", default = "two")]
    pub p: f64,
}

fn two() -> f64 {
    2.0
}

impl LimParams {
    /// The `p = r = 2` spaces.
    pub fn new(q: f64, alpha: f64, side: Side) -> Result<Self> {
        Self::general(q, alpha, 2.0, side, 2.0)
    }

    pub fn general(q: f64, alpha: f64, r: f64, side: Side, p: f64) -> Result<Self> {
        let prm = Self { q, alpha, r, side, p };
        prm.validate()?;
        Ok(prm)
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent("q", self.q)?;
        check_exponent("r", self.r)?;
        check_exponent("p", self.p)?;
        if !self.alpha.is_finite() {
            return domain(format!("alpha must be finite, got {}", self.alpha));
        }
        Ok(())
    }

    /// `α < -1/q` on side R and `α > -1/q` on side L: the ranges in which the
    /// spaces are the non-trivial ones of the forward and inverse theorems.
    pub fn convergence_condition(&self) -> bool {
        let crit = -1.0 / self.q;
        match self.side {
            Side::R => self.alpha < crit,
            Side::L => self.alpha > crit,
        }
    }

    /// Whether the function norm is finite for every step function. Side L
    /// always is; side R needs `qα < -1` (`α ≤ 0` when `q = ∞`).
    pub fn finite_for_functions(&self) -> bool {
        match self.side {
            Side::L => true,
            Side::R => log_weight_summable(self.q, self.alpha),
        }
    }

    /// Mirror image of [`finite_for_functions`](Self::finite_for_functions):
    /// side R sums are finite, side L needs the log weight to be summable.
    pub fn finite_for_sequences(&self) -> bool {
        match self.side {
            Side::R => true,
            Side::L => log_weight_summable(self.q, self.alpha),
        }
    }
}

fn log_weight_summable(q: f64, alpha: f64) -> bool {
    if q.is_infinite() {
        alpha <= 0.0
    } else {
        q * alpha < -1.0
    }
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v <= 0.0 {
        return domain(format!("{name} must lie in (0, inf], got {v}"));
    }
    Ok(())
}

/// A norm value together with its estimated relative error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    #[serde(with = "crate::extreal")]
    pub value: f64,
    pub rel_err: f64,
}

impl NormEstimate {
    fn exact(value: f64) -> Self {
        Self { value, rel_err: 0.0 }
    }

    /// `I^{1/q}` from an estimate of the integral `I`.
    fn root(est: Estimate, q: f64) -> Self {
        Self {
            value: est.value.max(0.0).powf(1.0 / q),
            rel_err: est.rel_err() / q,
        }
    }
}

fn check_accuracy(est: Estimate, quad: &QuadratureSpec, what: &str) -> Result<Estimate> {
    if est.value.is_finite() && est.rel_err() > quad.rel_tol {
        return Err(Error::Solver(format!(
            "{what}: quadrature error {:.3e} above rel_tol {:.3e}",
            est.rel_err(),
            quad.rel_tol
        )));
    }
    Ok(est)
}

/// Cells of `f*` in the log variable: `us[j] = -ln t_j`, `us[0] = ∞`.
struct LogCells {
    ts: Vec<f64>,
    us: Vec<f64>,
    vals: Vec<f64>,
}

impl LogCells {
    fn new(f: &StepFunction) -> Self {
        let g = rearrange_function(f);
        let ts = g.breakpoints().to_vec();
        let us = ts
            .iter()
            .map(|&t| if t == 0.0 { f64::INFINITY } else { -t.ln() })
            .collect();
        Self {
            ts,
            us,
            vals: g.values().to_vec(),
        }
    }

    fn n(&self) -> usize {
        self.vals.len()
    }

    /// Finite breakpoints in increasing `u`: `[U_N, …, U_1]`.
    fn u_breaks(&self) -> Vec<f64> {
        self.us[1..].iter().rev().copied().collect()
    }

    /// 0-based cell index containing `u ≥ U_1`-side ordering.
    fn cell_at(&self, u: f64) -> usize {
        // us[1..] is decreasing; cell j covers [us[j+1], us[j]]
        let k = self.us[1..].partition_point(|&b| b > u);
        k.min(self.n() - 1)
    }
}

/// `‖t^{1/p-1/q} (1+|ln t|)^α f*(t) | L_q(0,1)‖`.
pub fn lz_function_norm(f: &StepFunction, prm: &LZParams, quad: &QuadratureSpec) -> Result<f64> {
    Ok(lz_function_norm_est(f, prm, quad)?.value)
}

pub fn lz_function_norm_est(f: &StepFunction, prm: &LZParams, quad: &QuadratureSpec) -> Result<NormEstimate> {
    prm.validate()?;
    quad.validate()?;
    if f.is_zero() {
        return Ok(NormEstimate::exact(0.0));
    }
    let cells = LogCells::new(f);
    let LZParams { p, q, alpha } = *prm;
    if q.is_infinite() {
        return Ok(NormEstimate::exact(lz_sup(&cells, p, alpha)));
    }
    let decay = q / p;
    let b = q * alpha;
    let v1 = cells.vals[0];
    let tail = if p.is_infinite() {
        Estimate::exact(v1.powf(q) * log_tail(b, cells.us[1]))
    } else {
        let g = |u: f64| (-decay * u).exp() * (1.0 + u).powf(b);
        let e = decaying_tail(&g, cells.us[1], decay, quad);
        Estimate {
            value: v1.powf(q) * e.value,
            abs_err: v1.powf(q) * e.abs_err,
        }
    };
    if tail.value.is_infinite() {
        return Ok(NormEstimate::exact(f64::INFINITY));
    }
    let integrand = |u: f64| {
        let v = cells.vals[cells.cell_at(u)];
        if v == 0.0 {
            return 0.0;
        }
        let w = if decay == 0.0 { 1.0 } else { (-decay * u).exp() };
        w * (1.0 + u).powf(b) * v.powf(q)
    };
    let body = integrate_breaks(&integrand, &cells.u_breaks(), quad);
    let est = check_accuracy(body + tail, quad, "lz_function_norm")?;
    Ok(NormEstimate::root(est, q))
}

/// `sup_u e^{-u/p} (1+u)^α f*(e^{-u})`, exact: on each cell the weight is
/// log-concave or monotone, so endpoints and `u = αp - 1` suffice.
fn lz_sup(cells: &LogCells, p: f64, alpha: f64) -> f64 {
    let weight = |u: f64| {
        let decay = if p.is_infinite() { 1.0 } else { (-u / p).exp() };
        decay * (1.0 + u).powf(alpha)
    };
    let crit = if p.is_finite() && alpha > 0.0 {
        alpha * p - 1.0
    } else {
        f64::NAN
    };
    let mut best: f64 = 0.0;
    for j in 0..cells.n() {
        let v = cells.vals[j];
        if v == 0.0 {
            continue;
        }
        let lo = cells.us[j + 1];
        let hi = cells.us[j];
        let mut m = weight(lo);
        if hi.is_finite() {
            m = m.max(weight(hi));
        } else if p.is_infinite() {
            // limit of (1+u)^α as u → ∞
            m = m.max(if alpha > 0.0 {
                f64::INFINITY
            } else if alpha == 0.0 {
                1.0
            } else {
                0.0
            });
        }
        if crit > lo && crit < hi {
            m = m.max(weight(crit));
        }
        best = best.max(v * m);
    }
    best
}

/// `‖k^{1/p-1/q} (1+ln k)^α c_k* | l_q‖`, an exact finite sum.
pub fn lz_sequence_norm(c: &FiniteSequence, prm: &LZParams) -> Result<f64> {
    prm.validate()?;
    let s = rearrange_sequence(c);
    let LZParams { p, q, alpha } = *prm;
    let terms = s.entries().iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(i, &v)| {
        let k = (i + 1) as f64;
        (k, v)
    });
    if q.is_infinite() {
        return Ok(terms
            .map(|(k, v)| k.powf(1.0 / p) * (1.0 + k.ln()).powf(alpha) * v)
            .fold(0.0, f64::max));
    }
    let sum: f64 = terms
        .map(|(k, v)| k.powf(q / p - 1.0) * (1.0 + k.ln()).powf(q * alpha) * v.powf(q))
        .collect::<Vec<_>>()
        .iter()
        .rev()
        .sum();
    Ok(sum.powf(1.0 / q))
}

/// Per-cell data for the inner `L_r` energy `E(t) = ∫ u^{ρ-1} f*(u)^r du`,
/// `ρ = r/p`, over `(0,t)` or `(t,1)`.
struct InnerEnergy<'a> {
    cells: &'a LogCells,
    rho: f64,
    /// `c_j = v_j^r / ρ`
    coef: Vec<f64>,
    /// `t_j^ρ`
    tpow: Vec<f64>,
    /// energy of `(0, t_j)`
    head: Vec<f64>,
    /// energy of `(t_j, 1)`
    tail: Vec<f64>,
}

impl<'a> InnerEnergy<'a> {
    fn new(cells: &'a LogCells, r: f64, p: f64) -> Self {
        let rho = r / p;
        let n = cells.n();
        let coef: Vec<f64> = cells.vals.iter().map(|v| v.powf(r) / rho).collect();
        let tpow: Vec<f64> = cells.ts.iter().map(|t| t.powf(rho)).collect();
        let mut head = vec![0.0; n + 1];
        let mut tail = vec![0.0; n + 1];
        for j in 0..n {
            head[j + 1] = head[j] + coef[j] * (tpow[j + 1] - tpow[j]);
        }
        for j in (0..n).rev() {
            tail[j] = tail[j + 1] + coef[j] * (tpow[j + 1] - tpow[j]);
        }
        Self {
            cells,
            rho,
            coef,
            tpow,
            head,
            tail,
        }
    }

    fn total(&self) -> f64 {
        self.tail[0]
    }

    /// Energy at `t = e^{-u}` for `u` inside cell `j`, free of cancellation.
    fn at(&self, side: Side, j: usize, u: f64) -> f64 {
        let c = self.coef[j];
        let us = &self.cells.us;
        let e = match side {
            Side::L if j == 0 => c * (-self.rho * u).exp(),
            Side::L => self.head[j] + c * self.tpow[j] * (self.rho * (us[j] - u)).exp_m1(),
            Side::R => self.tail[j + 1] - c * self.tpow[j + 1] * (self.rho * (us[j + 1] - u)).exp_m1(),
        };
        e.max(0.0)
    }

    /// `E = A + B e^{-ρu}` on cell `j`.
    fn affine(&self, side: Side, j: usize) -> (f64, f64) {
        let c = self.coef[j];
        match side {
            Side::L => (self.head[j] - c * self.tpow[j], c),
            Side::R => (self.tail[j + 1] + c * self.tpow[j + 1], -c),
        }
    }
}

/// `‖t^{-1/q} (1+|ln t|)^α ‖u^{1/p-1/r} f*(u) | L_r(0,t) or L_r(t,1)‖ | L_q(0,1)‖`.
pub fn limiting_function_norm(f: &StepFunction, prm: &LimParams, quad: &QuadratureSpec) -> Result<f64> {
    Ok(limiting_function_norm_est(f, prm, quad)?.value)
}

pub fn limiting_function_norm_est(f: &StepFunction, prm: &LimParams, quad: &QuadratureSpec) -> Result<NormEstimate> {
    prm.validate()?;
    quad.validate()?;
    if prm.p.is_infinite() || prm.r.is_infinite() {
        return domain("limiting function norms need finite p and r");
    }
    if f.is_zero() {
        return Ok(NormEstimate::exact(0.0));
    }
    if !prm.finite_for_functions() {
        return Ok(NormEstimate::exact(f64::INFINITY));
    }
    let cells = LogCells::new(f);
    let energy = InnerEnergy::new(&cells, prm.r, prm.p);
    if prm.q.is_infinite() {
        return Ok(NormEstimate::exact(limiting_sup(&energy, prm, quad)));
    }
    let LimParams { q, alpha, r, side, .. } = *prm;
    let b = q * alpha;
    let s = q / r;
    let rho = energy.rho;
    let u1 = cells.us[1];
    let tail = match side {
        Side::L => {
            let c = energy.coef[0];
            let g = |u: f64| (1.0 + u).powf(b) * (c * (-rho * u).exp()).powf(s);
            decaying_tail(&g, u1, rho * s, quad)
        }
        Side::R => {
            let total = energy.total();
            let c = energy.coef[0];
            let ts = total.powf(s);
            // (T - c e^{-ρu})^s = T^s + T^s ((1-x)^s - 1), x = c e^{-ρu} / T
            let g = |u: f64| {
                let x = c * (-rho * u).exp() / total;
                ts * (1.0 + u).powf(b) * (s * (-x).ln_1p()).exp_m1()
            };
            Estimate::exact(ts * log_tail(b, u1)) + decaying_tail(&g, u1, rho, quad)
        }
    };
    let integrand = |u: f64| {
        let j = cells.cell_at(u);
        (1.0 + u).powf(b) * energy.at(side, j, u).powf(s)
    };
    let body = integrate_breaks(&integrand, &cells.u_breaks(), quad);
    let est = check_accuracy(body + tail, quad, "limiting_function_norm")?;
    Ok(NormEstimate::root(est, q))
}

/// `sup_u (1+u)^α E(u)^{1/r}`. With `E = A + B e^{-ρu}` on a cell, the
/// stationarity condition is `h(u) = αA + B e^{-ρu}(α - ρ(1+u)/r) = 0` and
/// `h` is monotone on either side of `1+u = (rα+1)/ρ`, so each cell has at
/// most two interior critical points, found by bisection.
fn limiting_sup(energy: &InnerEnergy, prm: &LimParams, quad: &QuadratureSpec) -> f64 {
    let cells = energy.cells;
    let side = prm.side;
    let alpha = prm.alpha;
    let kappa = 1.0 / prm.r;
    let rho = energy.rho;
    let mut best: f64 = 0.0;
    if side == Side::R {
        // limit as t → 0
        let lim = if alpha > 0.0 {
            f64::INFINITY
        } else if alpha == 0.0 {
            energy.total().powf(kappa)
        } else {
            0.0
        };
        best = best.max(lim);
    }
    let u_turn = (alpha + kappa) / (kappa * rho) - 1.0;
    for j in 0..cells.n() {
        let lo = cells.us[j + 1];
        let mut hi = cells.us[j];
        if hi.is_infinite() {
            hi = lo.max(u_turn).max(0.0) + quad.tail_cut / rho;
        }
        let value = |u: f64| (1.0 + u).powf(alpha) * energy.at(side, j, u).powf(kappa);
        let (a, b) = energy.affine(side, j);
        let h = |u: f64| alpha * a + b * (-rho * u).exp() * (alpha - kappa * rho * (1.0 + u));
        let mut knots = vec![lo];
        if u_turn > lo && u_turn < hi {
            knots.push(u_turn);
        }
        knots.push(hi);
        best = best.max(value(lo)).max(value(hi));
        for w in knots.windows(2) {
            if let Some(root) = bisect_sign_change(&h, w[0], w[1]) {
                best = best.max(value(root));
            }
        }
    }
    best
}

fn bisect_sign_change<F: Fn(f64) -> f64>(h: &F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut hlo = h(lo);
    let hhi = h(hi);
    if hlo == 0.0 {
        return Some(lo);
    }
    if hhi == 0.0 {
        return Some(hi);
    }
    if hlo.signum() == hhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let hm = h(mid);
        if hm.signum() == hlo.signum() {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Exact summation cut-off for side-L sequence tails.
pub const SEQ_TAIL_CUTOFF: usize = 1 << 20;

/// `Σ_{k=n+1}^{K₀} (1+ln k)^b / k` with `K₀ = max(n, 2^20)`; data independent,
/// so memoized per `(b, n)`.
fn log_harmonic_block(b: f64, n: usize) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (b.to_bits(), n);
    if let Some(&v) = cache.lock().expect("tail cache poisoned").get(&key) {
        return v;
    }
    let k0 = n.max(SEQ_TAIL_CUTOFF);
    // smallest terms first, with compensation
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in (n + 1..=k0).rev() {
        let x = k as f64;
        let term = (1.0 + x.ln()).powf(b) / x;
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    let v = sum + comp;
    cache.lock().expect("tail cache poisoned").insert(key, v);
    v
}

/// `∫_a^∞ (1+ln x)^b dx/x = (1+ln a)^{b+1} / (-(b+1))`, `b < -1`.
fn log_harmonic_integral(b: f64, a: f64) -> f64 {
    (1.0 + a.ln()).powf(b + 1.0) / (-(b + 1.0))
}

/// `Σ_{k>n} (1+ln k)^b / k` for `b < -1`: exact block up to `K₀` plus the
/// rest. The summand is convex and decreasing past `K₀`, so the rest lies
/// between `∫_{K₀+1}^∞ + f(K₀+1)/2` (trapezoid) and `∫_{K₀+1/2}^∞` (midpoint).
pub fn log_harmonic_tail(b: f64, n: usize, rel_tol: f64) -> Result<Estimate> {
    if b >= -1.0 {
        return Ok(Estimate::exact(f64::INFINITY));
    }
    let k0 = n.max(SEQ_TAIL_CUTOFF) as f64;
    let block = log_harmonic_block(b, n);
    let f = |x: f64| (1.0 + x.ln()).powf(b) / x;
    let upper = log_harmonic_integral(b, k0 + 0.5);
    let lower = log_harmonic_integral(b, k0 + 1.0) + 0.5 * f(k0 + 1.0);
    let total = block + 0.5 * (lower + upper);
    let half_width = 0.5 * (upper - lower).abs();
    if half_width > rel_tol * total {
        return Err(Error::Solver(format!(
            "sequence tail bracket {half_width:.3e} exceeds rel_tol at b = {b}"
        )));
    }
    Ok(Estimate {
        value: total,
        abs_err: half_width,
    })
}

/// Inner values `I_k^r` (`r < ∞`) or `I_k` (`r = ∞`) for `k = 1..=n`.
fn sequence_inner(sorted: &[f64], prm: &LimParams) -> Vec<f64> {
    let n = sorted.len();
    let expo = 1.0 / prm.p - 1.0 / prm.r;
    let term = |i: usize| {
        let k = (i + 1) as f64;
        if prm.r.is_infinite() {
            k.powf(expo) * sorted[i]
        } else {
            k.powf(expo * prm.r) * sorted[i].powf(prm.r)
        }
    };
    let combine = |acc: f64, x: f64| if prm.r.is_infinite() { acc.max(x) } else { acc + x };
    let mut out = vec![0.0; n];
    match prm.side {
        Side::L => {
            let mut acc = 0.0;
            for (i, slot) in out.iter_mut().enumerate() {
                acc = combine(acc, term(i));
                *slot = acc;
            }
        }
        Side::R => {
            let mut acc = 0.0;
            for i in (0..n).rev() {
                acc = combine(acc, term(i));
                out[i] = acc;
            }
        }
    }
    out
}

/// Limiting sequence norm `l^{L/R}_{p,q,α,r}`. Side R is an exact finite
/// sum; side L adds the closed-form log-harmonic tail beyond the support.
pub fn limiting_sequence_norm(c: &FiniteSequence, prm: &LimParams) -> Result<f64> {
    Ok(limiting_sequence_norm_est(c, prm, &QuadratureSpec::default())?.value)
}

pub fn limiting_sequence_norm_est(c: &FiniteSequence, prm: &LimParams, quad: &QuadratureSpec) -> Result<NormEstimate> {
    prm.validate()?;
    if c.is_zero() {
        return Ok(NormEstimate::exact(0.0));
    }
    if !prm.finite_for_sequences() {
        return Ok(NormEstimate::exact(f64::INFINITY));
    }
    let s = rearrange_sequence(c);
    let inner = sequence_inner(s.entries(), prm);
    let n = inner.len();
    let (q, alpha) = (prm.q, prm.alpha);
    // I_k from the stored inner value
    let root = |x: f64| if prm.r.is_infinite() { x } else { x.powf(1.0 / prm.r) };
    if q.is_infinite() {
        // side L beyond n: (1+ln k)^α I_n with α ≤ 0 never exceeds k = n
        let best = inner
            .iter()
            .enumerate()
            .map(|(i, &x)| (1.0 + ((i + 1) as f64).ln()).powf(alpha) * root(x))
            .fold(0.0, f64::max);
        return Ok(NormEstimate::exact(best));
    }
    let b = q * alpha;
    let pw = |x: f64| {
        if prm.r.is_infinite() {
            x.powf(q)
        } else {
            x.powf(q / prm.r)
        }
    };
    let head: f64 = inner
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let k = (i + 1) as f64;
            (1.0 + k.ln()).powf(b) / k * pw(x)
        })
        .collect::<Vec<_>>()
        .iter()
        .rev()
        .sum();
    let total = match prm.side {
        Side::R => Estimate::exact(head),
        Side::L => {
            let tail = log_harmonic_tail(b, n, quad.rel_tol)?;
            let scale = pw(inner[n - 1]);
            Estimate::exact(head)
                + Estimate {
                    value: scale * tail.value,
                    abs_err: scale * tail.abs_err,
                }
        }
    };
    Ok(NormEstimate::root(total, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::golden_max;
    use num_complex::Complex64;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::with_rel_tol(1e-10)
    }

    fn one() -> StepFunction {
        StepFunction::constant(Complex64::new(1.0, 0.0))
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    /// Composite midpoint rule in `u` on `[0, umax]` plus the exact tail.
    fn riemann_log(g: impl Fn(f64) -> f64, umax: f64, nodes: usize) -> f64 {
        let h = umax / nodes as f64;
        (0..nodes).map(|i| g((i as f64 + 0.5) * h)).sum::<f64>() * h
    }

    #[test]
    fn lz_function_examples() {
        let q = quad();
        let v = lz_function_norm(&one(), &LZParams::new(2.0, 2.0, 0.0).unwrap(), &q).unwrap();
        assert!(rel(v, 1.0) < 1e-12);
        let v = lz_function_norm(&one(), &LZParams::new(2.0, f64::INFINITY, 0.0).unwrap(), &q).unwrap();
        assert_eq!(v, 1.0);
        // ∫_0^∞ (1+u)^{-2} e^{-u} du, evaluated independently
        let v = lz_function_norm(&one(), &LZParams::new(2.0, 2.0, -1.0).unwrap(), &q).unwrap();
        let oracle = riemann_log(|u| (1.0 + u).powi(-2) * (-u).exp(), 60.0, 2_000_000);
        assert!(rel(v, oracle.sqrt()) < 1e-9, "{v} vs {}", oracle.sqrt());
    }

    #[test]
    fn lz_sequence_examples() {
        let c = FiniteSequence::from_real(&[3.0, 4.0]).unwrap();
        assert_eq!(
            lz_sequence_norm(&c, &LZParams::new(2.0, 2.0, 0.0).unwrap()).unwrap(),
            5.0
        );
        let c = FiniteSequence::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(
            lz_sequence_norm(&c, &LZParams::new(1.0, 1.0, 0.0).unwrap()).unwrap(),
            2.0
        );
        let e1 = FiniteSequence::unit(1);
        for (p, q, a) in [(2.0, 3.0, -2.0), (0.5, f64::INFINITY, 4.0), (f64::INFINITY, 1.0, 0.3)] {
            assert_eq!(lz_sequence_norm(&e1, &LZParams::new(p, q, a).unwrap()).unwrap(), 1.0);
        }
    }

    #[test]
    fn limiting_function_examples() {
        let q = quad();
        let prm = LimParams::new(2.0, -1.0, Side::R).unwrap();
        assert_eq!(limiting_function_norm(&StepFunction::zero(), &prm, &q).unwrap(), 0.0);

        let prm = LimParams::new(f64::INFINITY, -1.0, Side::R).unwrap();
        let v = limiting_function_norm(&one(), &prm, &q).unwrap();
        let (_, oracle) = golden_max(&|t: f64| (1.0 - t.ln()).powi(-1) * (1.0 - t).sqrt(), 1e-9, 1.0, 300);
        assert!(rel(v, oracle) < 1e-12, "{v} vs {oracle}");

        let prm = LimParams::new(f64::INFINITY, 0.0, Side::L).unwrap();
        assert!(rel(limiting_function_norm(&one(), &prm, &q).unwrap(), 1.0) < 1e-15);
    }

    #[test]
    fn limiting_function_divergence() {
        let q = quad();
        for (qq, a) in [(2.0, -0.5), (1.0, -1.0), (f64::INFINITY, 0.1)] {
            let prm = LimParams::new(qq, a, Side::R).unwrap();
            assert_eq!(limiting_function_norm(&one(), &prm, &q).unwrap(), f64::INFINITY);
        }
        let prm = LimParams::new(f64::INFINITY, 0.0, Side::R).unwrap();
        assert!(rel(limiting_function_norm(&one(), &prm, &q).unwrap(), 1.0) < 1e-15);
    }

    #[test]
    fn limiting_function_constant_one_side_r() {
        // f ≡ 1: tail energy is 1 - t, so the norm is (∫_0^∞ (1+u)^{-2} (1-e^{-u}) du)^{1/2}
        let v = limiting_function_norm(&one(), &LimParams::new(2.0, -1.0, Side::R).unwrap(), &quad()).unwrap();
        let oracle = riemann_log(|u| (1.0 + u).powi(-2) * (-(-u).exp_m1()), 2000.0, 4_000_000) + 1.0 / 2001.0;
        assert!(rel(v, oracle.sqrt()) < 1e-8, "{v} vs {}", oracle.sqrt());
    }

    #[test]
    fn limiting_sequence_examples() {
        let e1 = FiniteSequence::unit(1);
        for (q, a) in [(2.0, 0.0), (1.0, 3.0), (4.0, -0.2)] {
            let prm = LimParams::new(q, a, Side::R).unwrap();
            assert_eq!(limiting_sequence_norm(&e1, &prm).unwrap(), 1.0);
        }
        let prm = LimParams::new(f64::INFINITY, -0.5, Side::L).unwrap();
        assert_eq!(limiting_sequence_norm(&e1, &prm).unwrap(), 1.0);
    }

    #[test]
    fn limiting_sequence_side_l_tail() {
        // direct summation to 10^7 plus the bracketed integral remainder
        let b = -2.0;
        let n = 10_000_000usize;
        let mut direct = 0.0;
        for k in (1..=n).rev() {
            let x = k as f64;
            direct += (1.0 + x.ln()).powf(b) / x;
        }
        let lo = direct + log_harmonic_integral(b, n as f64 + 1.0);
        let hi = direct + log_harmonic_integral(b, n as f64);
        let prm = LimParams::new(2.0, -1.0, Side::L).unwrap();
        let v = limiting_sequence_norm(&FiniteSequence::unit(1), &prm).unwrap();
        assert!(
            v * v >= lo * (1.0 - 1e-12) && v * v <= hi * (1.0 + 1e-12),
            "{} not in [{lo}, {hi}]",
            v * v
        );
    }

    #[test]
    fn limiting_sequence_divergence() {
        let e1 = FiniteSequence::unit(1);
        let prm = LimParams::new(2.0, -0.5, Side::L).unwrap();
        assert_eq!(limiting_sequence_norm(&e1, &prm).unwrap(), f64::INFINITY);
        let prm = LimParams::new(f64::INFINITY, 0.5, Side::L).unwrap();
        assert_eq!(limiting_sequence_norm(&e1, &prm).unwrap(), f64::INFINITY);
    }

    #[test]
    fn convergence_flags_mirror_between_models() {
        let r = LimParams::new(2.0, -1.0, Side::R).unwrap();
        assert!(r.convergence_condition() && r.finite_for_functions() && r.finite_for_sequences());
        let l = LimParams::new(2.0, 0.5, Side::L).unwrap();
        assert!(l.convergence_condition() && l.finite_for_functions() && !l.finite_for_sequences());
    }

    #[test]
    fn invalid_parameters() {
        assert!(LZParams::new(0.0, 1.0, 0.0).is_err());
        assert!(LZParams::new(1.0, f64::NAN, 0.0).is_err());
        assert!(LimParams::new(2.0, f64::NAN, Side::L).is_err());
        let prm = LimParams::general(2.0, -1.0, f64::INFINITY, Side::R, 2.0).unwrap();
        assert!(limiting_function_norm(&one(), &prm, &quad()).is_err());
    }
}
