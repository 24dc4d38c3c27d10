//! Step functions on (0,1], finite sequences, their non-increasing
//! rearrangements, and exact prefix/suffix energy functionals.
//!
//! Every function in the engine is piecewise constant, so rearrangements are
//! exact sorts and every energy integral is affine on each cell.

use crate::error::{domain, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Complex piecewise-constant function on (0,1].
///
/// Cell `j` is `(breakpoints[j], breakpoints[j + 1]]` and carries `values[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFunctionRepr")]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<Complex64>,
}

#[derive(Deserialize)]
struct StepFunctionRepr {
    breakpoints: Vec<f64>,
    values: Vec<Complex64>,
}

impl TryFrom<StepFunctionRepr> for StepFunction {
    type Error = crate::Error;

    fn try_from(r: StepFunctionRepr) -> Result<Self> {
        StepFunction::new(r.breakpoints, r.values)
    }
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return domain("a step function needs at least one cell");
        }
        if breakpoints.len() != values.len() + 1 {
            return domain(format!(
                "{} breakpoints cannot delimit {} cells",
                breakpoints.len(),
                values.len()
            ));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return domain("breakpoints must start at 0 and end at 1");
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return domain("breakpoints must be strictly increasing");
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return domain("step function values must be finite");
        }
        Ok(Self { breakpoints, values })
    }

    /// `n = values.len()` equal cells; breakpoints are `j / n`.
    pub fn uniform(values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        Self::new(uniform_grid(n), values)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![0.0, 1.0], vec![c]).expect("constant is valid")
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    /// Characteristic function of `(0, s)`.
    pub fn characteristic(s: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return domain(format!("characteristic support must lie in (0,1], got {s}"));
        }
        let one = Complex64::new(1.0, 0.0);
        if s == 1.0 {
            return Ok(Self::constant(one));
        }
        Self::new(vec![0.0, s, 1.0], vec![one, Complex64::new(0.0, 0.0)])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    pub fn widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints.windows(2).map(|w| w[1] - w[0])
    }

    /// `(left, right, value)` per cell.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, Complex64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (w[0], w[1], *v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm() == 0.0)
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * lambda).collect(),
        }
    }

    /// Value on the cell containing `x` (cells are left-open).
    pub fn eval(&self, x: f64) -> Complex64 {
        let j = self.breakpoints[1..]
            .partition_point(|&b| b < x)
            .min(self.values.len() - 1);
        self.values[j]
    }

    pub fn l1_norm(&self) -> f64 {
        self.widths().zip(&self.values).map(|(w, v)| w * v.norm()).sum()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.widths().zip(&self.values).map(|(w, v)| w * v.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Lebesgue measure of `{ |f| > lambda }`.
    pub fn measure_above(&self, lambda: f64) -> f64 {
        self.widths()
            .zip(&self.values)
            .filter(|(_, v)| v.norm() > lambda)
            .map(|(w, _)| w)
            .sum()
    }
}

pub(crate) fn uniform_grid(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut b: Vec<f64> = (0..=n).map(|j| j as f64 / nf).collect();
    if let Some(last) = b.last_mut() {
        *last = 1.0;
    }
    b
}

/// Non-increasing rearrangement `f*` of `|f|`: non-negative, non-increasing
/// cell values on (0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct Rearrangement {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    /// `head[j] = ∫_0^{t_j} g²`
    head: Vec<f64>,
    /// `tail[j] = ∫_{t_j}^1 g²`, accumulated from the right.
    tail: Vec<f64>,
}

impl Rearrangement {
    fn from_sorted(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        let n = values.len();
        let mut head = vec![0.0; n + 1];
        let mut tail = vec![0.0; n + 1];
        for j in 0..n {
            let w = breakpoints[j + 1] - breakpoints[j];
            head[j + 1] = head[j] + w * values[j] * values[j];
        }
        for j in (0..n).rev() {
            let w = breakpoints[j + 1] - breakpoints[j];
            tail[j] = tail[j + 1] + w * values[j] * values[j];
        }
        Self {
            breakpoints,
            values,
            head,
            tail,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.first().is_none_or(|&v| v == 0.0)
    }

    /// `‖g‖₂²`
    pub fn total_energy(&self) -> f64 {
        self.head[self.values.len()]
    }

    /// Index of the cell whose closure contains `t` (leftmost on ties).
    fn cell_of(&self, t: f64) -> usize {
        self.breakpoints[1..]
            .partition_point(|&b| b < t)
            .min(self.values.len() - 1)
    }

    /// `∫_0^t g(u)² du`, exact.
    pub fn head_energy(&self, t: f64) -> Result<f64> {
        check_unit(t)?;
        let j = self.cell_of(t);
        let v = self.values[j];
        Ok(self.head[j] + v * v * (t - self.breakpoints[j]))
    }

    /// `∫_t^1 g(u)² du`, exact (equal to `head_energy(1) - head_energy(t)`).
    pub fn tail_energy(&self, t: f64) -> Result<f64> {
        check_unit(t)?;
        let j = self.cell_of(t);
        let v = self.values[j];
        Ok(self.tail[j + 1] + v * v * (self.breakpoints[j + 1] - t))
    }

    /// Cumulative head energies at the breakpoints.
    pub fn head_at_breakpoints(&self) -> &[f64] {
        &self.head
    }

    /// Cumulative tail energies at the breakpoints.
    pub fn tail_at_breakpoints(&self) -> &[f64] {
        &self.tail
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.values[self.cell_of(t)]
    }

    pub fn measure_above(&self, lambda: f64) -> f64 {
        // values are non-increasing: the super-level set is an initial segment
        let k = self.values.partition_point(|&v| v > lambda);
        self.breakpoints[k]
    }

    pub fn to_step_function(&self) -> StepFunction {
        StepFunction {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

fn check_unit(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return domain(format!("energy cut-off t = {t} outside [0,1]"));
    }
    Ok(())
}

/// Decreasing rearrangement of `|f|`. Cells are ordered by modulus, ties keep
/// their original order, widths are preserved.
pub fn rearrange_function(f: &StepFunction) -> Rearrangement {
    let mut cells: Vec<(f64, f64)> = f.widths().zip(f.values.iter().map(|v| v.norm())).collect();
    cells.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut breakpoints = Vec::with_capacity(cells.len() + 1);
    breakpoints.push(0.0);
    let mut acc = 0.0;
    for (w, _) in &cells {
        acc += w;
        breakpoints.push(acc);
    }
    *breakpoints.last_mut().unwrap() = 1.0;
    let values = cells.into_iter().map(|(_, v)| v).collect();
    Rearrangement::from_sorted(breakpoints, values)
}

pub fn head_energy(g: &Rearrangement, t: f64) -> Result<f64> {
    g.head_energy(t)
}

pub fn tail_energy(g: &Rearrangement, t: f64) -> Result<f64> {
    g.tail_energy(t)
}

/// Complex sequence `c_1, …, c_n` followed by implicit zeros.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "FiniteSequenceRepr")]
pub struct FiniteSequence {
    entries: Vec<Complex64>,
}

#[derive(Deserialize)]
struct FiniteSequenceRepr {
    entries: Vec<Complex64>,
}

impl TryFrom<FiniteSequenceRepr> for FiniteSequence {
    type Error = crate::Error;

    fn try_from(r: FiniteSequenceRepr) -> Result<Self> {
        FiniteSequence::new(r.entries)
    }
}

impl FiniteSequence {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return domain("sequence entries must be finite");
        }
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Unit vector `e_m` (1-based) of length `m`.
    pub fn unit(m: usize) -> Self {
        assert!(m >= 1, "unit vectors are 1-based");
        let mut entries = vec![Complex64::new(0.0, 0.0); m];
        entries[m - 1] = Complex64::new(1.0, 0.0);
        Self { entries }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.norm() == 0.0)
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|v| v * lambda).collect(),
        }
    }

    /// First `k` entries; the rest are dropped.
    pub fn truncate(&self, k: usize) -> Self {
        Self {
            entries: self.entries[..k.min(self.entries.len())].to_vec(),
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `c₁* ≥ c₂* ≥ … ≥ 0`, the rearrangement of `{|c_k|}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SortedSequence {
    entries: Vec<f64>,
}

impl SortedSequence {
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.first().is_none_or(|&v| v == 0.0)
    }

    /// `prefix_sq()[k-1] = Σ_{i≤k} (c_i*)²`
    pub fn prefix_sq(&self) -> Vec<f64> {
        self.entries
            .iter()
            .scan(0.0, |acc, &v| {
                *acc += v * v;
                Some(*acc)
            })
            .collect()
    }

    /// `suffix_sq()[k-1] = Σ_{i≥k} (c_i*)²`, summed from the small end.
    pub fn suffix_sq(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.entries.len()];
        let mut acc = 0.0;
        for (k, &v) in self.entries.iter().enumerate().rev() {
            acc += v * v;
            out[k] = acc;
        }
        out
    }

    /// 1-based suffix energy, zero beyond the last entry.
    pub fn suffix_sq_at(&self, k: usize) -> f64 {
        if k == 0 || k > self.entries.len() {
            return if k == 0 { self.total_sq() } else { 0.0 };
        }
        self.entries[k - 1..].iter().rev().map(|v| v * v).sum()
    }

    /// 1-based prefix energy, constant beyond the last entry.
    pub fn prefix_sq_at(&self, k: usize) -> f64 {
        self.entries[..k.min(self.entries.len())].iter().map(|v| v * v).sum()
    }

    pub fn total_sq(&self) -> f64 {
        self.entries.iter().rev().map(|v| v * v).sum()
    }
}

pub fn rearrange_sequence(c: &FiniteSequence) -> SortedSequence {
    let mut entries: Vec<f64> = c.entries.iter().map(|v| v.norm()).collect();
    entries.sort_by(|a, b| b.total_cmp(a));
    SortedSequence { entries }
}

pub fn prefix_sq(c: &SortedSequence) -> Vec<f64> {
    c.prefix_sq()
}

pub fn suffix_sq(c: &SortedSequence) -> Vec<f64> {
    c.suffix_sq()
}
