//! Closed-form K-functionals of a finite weighted vector.
//!
//! Both base problems split `a = x + y` with `y = min(a, λ)` clipped at a
//! common level, so the infimum reduces to locating `λ`:
//!
//! * `K_A(s) = inf ‖x‖_{1,w} + s‖y‖_{2,w}`: with `k` coordinates above `λ`,
//!   `λ² = R_k / (s² - m_k)` and `K = s1_k + sqrt(R_k (s² - m_k))`;
//! * `K_B(s) = inf ‖x‖_{2,w} + s‖y‖_∞`: stationarity reads
//!   `s = Σw(a-λ)₊ / ‖(a-λ)₊‖₂`, giving `K = sμ_k + sqrt(D_k (m_k - s²) / m_k)`.
//!
//! Here `m_k, s1_k` are the weight and weighted sum of the top `k` values,
//! `R_k` the energy of the rest and `D_k` the weighted sum of squared
//! deviations of the top `k` from their mean `μ_k`. Both curves are therefore
//! explicit between a finite set of breakpoints in `s`.

use super::Couple;
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Base {
    /// `‖·‖₁ + s‖·‖₂`
    L1L2,
    /// `‖·‖₂ + s‖·‖_∞`
    L2Linf,
}

/// Value of a K-functional with the norms of the optimal pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KValue {
    pub k: f64,
    /// `‖x₀‖_{X₀}`
    pub x0_norm: f64,
    /// `‖x₁‖_{X₁}`
    pub x1_norm: f64,
}

/// The whole curve `t ↦ K(t, x)` of one element, evaluated in `O(log n)`.
#[derive(Debug, Clone)]
pub struct KProfile {
    couple: Couple,
    base: Base,
    /// distinct moduli, strictly decreasing, zeros dropped
    a: Vec<f64>,
    /// `m[k] = Σ_{i<k} w_i`
    m: Vec<f64>,
    s1: Vec<f64>,
    /// `rest[k] = Σ_{i≥k} w_i a_i²`, summed from the small end
    rest: Vec<f64>,
    /// weighted squared deviation of the top `k` values
    dev: Vec<f64>,
    /// breakpoints of the base curve in `s`, increasing
    knots: Vec<f64>,
    norm_l1: f64,
    norm_l2: f64,
}

impl KProfile {
    /// `moduli` and `weights` describe `|x|` cell by cell (for sequences the
    /// weights are 1).
    pub(crate) fn from_weighted(couple: Couple, moduli: &[f64], weights: &[f64]) -> Self {
        let base = match couple {
            Couple::L1L2 | Couple::L2L1 => Base::L1L2,
            Couple::L2Linf | Couple::LinfL2 => Base::L2Linf,
        };
        let mut cells: Vec<(f64, f64)> = moduli
            .iter()
            .zip(weights)
            .filter(|(&a, _)| a > 0.0)
            .map(|(&a, &w)| (a, w))
            .collect();
        cells.sort_by(|x, y| y.0.total_cmp(&x.0));
        // merge ties so the moduli are strictly decreasing
        let mut a: Vec<f64> = Vec::with_capacity(cells.len());
        let mut w: Vec<f64> = Vec::with_capacity(cells.len());
        for (ai, wi) in cells {
            if a.last() == Some(&ai) {
                *w.last_mut().unwrap() += wi;
            } else {
                a.push(ai);
                w.push(wi);
            }
        }
        let g = a.len();
        let mut m = vec![0.0; g + 1];
        let mut s1 = vec![0.0; g + 1];
        let mut dev = vec![0.0; g + 1];
        let mut mean = 0.0;
        for i in 0..g {
            m[i + 1] = m[i] + w[i];
            s1[i + 1] = s1[i] + w[i] * a[i];
            // West's weighted update
            let delta = a[i] - mean;
            mean += w[i] / m[i + 1] * delta;
            dev[i + 1] = dev[i] + w[i] * delta * (a[i] - mean);
        }
        let mut rest = vec![0.0; g + 1];
        for i in (0..g).rev() {
            rest[i] = rest[i + 1] + w[i] * a[i] * a[i];
        }
        let mut prof = Self {
            couple,
            base,
            a,
            m,
            s1,
            rest,
            dev,
            knots: Vec::new(),
            norm_l1: 0.0,
            norm_l2: 0.0,
        };
        prof.norm_l1 = prof.s1[g];
        prof.norm_l2 = prof.rest[0].sqrt();
        prof.knots = prof.base_knots();
        prof
    }

    pub fn couple(&self) -> Couple {
        self.couple
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty()
    }

    fn groups(&self) -> usize {
        self.a.len()
    }

    fn base_knots(&self) -> Vec<f64> {
        let g = self.groups();
        if g == 0 {
            return Vec::new();
        }
        match self.base {
            Base::L1L2 => {
                // s_k = sqrt(m_{k-1} + R_{k-1} / a_k²), k = 1..g, then sqrt(m_g)
                let mut out: Vec<f64> = (0..g)
                    .map(|i| (self.m[i] + self.rest[i] / (self.a[i] * self.a[i])).sqrt())
                    .collect();
                out.push(self.m[g].sqrt());
                out
            }
            Base::L2Linf => {
                // sqrt(m_1), then ρ_k(a_{k+1}) for k = 1..g with a_{g+1} = 0
                let mut out = vec![self.m[1].sqrt()];
                for k in 1..=g {
                    let next = if k < g { self.a[k] } else { 0.0 };
                    out.push(self.rho(k, next));
                }
                out
            }
        }
    }

    /// `Σw(a-λ)₊ / ‖(a-λ)₊‖₂` with the top `k` groups active.
    fn rho(&self, k: usize, lambda: f64) -> f64 {
        let mk = self.m[k];
        let d = self.s1[k] / mk - lambda;
        mk * d / (self.dev[k] + mk * d * d).sqrt()
    }

    /// Base curve at `s ≥ 0`: `(K, ‖x‖, ‖y‖)` in the base problem's norms.
    fn base_eval(&self, s: f64) -> (f64, f64, f64) {
        let g = self.groups();
        if g == 0 {
            return (0.0, 0.0, 0.0);
        }
        let kn = &self.knots;
        match self.base {
            Base::L1L2 => {
                if s >= kn[g] {
                    return (self.norm_l1, self.norm_l1, 0.0);
                }
                // number of clipped groups: knots[i] ≤ s for i < k
                let k = kn[..g].partition_point(|&b| b <= s);
                if k == 0 {
                    return (s * self.norm_l2, 0.0, self.norm_l2);
                }
                let gap = s * s - self.m[k];
                let r = self.rest[k];
                let lambda = (r / gap).sqrt();
                let x = self.s1[k] - self.m[k] * lambda;
                let y = (self.m[k] * lambda * lambda + r).sqrt();
                (self.s1[k] + (r * gap).sqrt(), x, y)
            }
            Base::L2Linf => {
                if s >= kn[g] {
                    return (self.norm_l2, self.norm_l2, 0.0);
                }
                if s <= kn[0] {
                    return (s * self.a[0], 0.0, self.a[0]);
                }
                // piece k covers (knots[k-1], knots[k]]
                let k = kn.partition_point(|&b| b < s).clamp(1, g);
                let mk = self.m[k];
                let dk = self.dev[k];
                let mu = self.s1[k] / mk;
                let gap = (mk - s * s).max(0.0);
                let d = if dk == 0.0 { 0.0 } else { s * (dk / (mk * gap)).sqrt() };
                let lambda = mu - d;
                let x = (dk + mk * d * d).sqrt();
                (s * mu + (dk * gap / mk).sqrt(), x, lambda)
            }
        }
    }

    /// `K(t, x)` and the norms of an optimal decomposition.
    pub fn eval(&self, t: f64) -> KValue {
        if self.is_zero() {
            return KValue {
                k: 0.0,
                x0_norm: 0.0,
                x1_norm: 0.0,
            };
        }
        match self.couple {
            Couple::L1L2 | Couple::L2Linf => {
                let (k, x, y) = self.base_eval(t);
                KValue {
                    k,
                    x0_norm: x,
                    x1_norm: y,
                }
            }
            Couple::L2L1 | Couple::LinfL2 => {
                // K(t) = t K_base(1/t); the base X-part is the X₁ piece here
                if t.is_infinite() {
                    let top = self.x0_norm();
                    return KValue {
                        k: top,
                        x0_norm: top,
                        x1_norm: 0.0,
                    };
                }
                let (k, x, y) = self.base_eval(1.0 / t);
                KValue {
                    k: t * k,
                    x0_norm: y,
                    x1_norm: x,
                }
            }
        }
    }

    pub fn k(&self, t: f64) -> f64 {
        self.eval(t).k
    }

    /// `‖x‖_{X₀}`, the limit of `K(t)` as `t → ∞`.
    pub fn x0_norm(&self) -> f64 {
        match self.couple {
            Couple::L1L2 => self.norm_l1,
            Couple::L2Linf | Couple::L2L1 => self.norm_l2,
            Couple::LinfL2 => self.a.first().copied().unwrap_or(0.0),
        }
    }

    /// `‖x‖_{X₁}`, the limit of `K(t)/t` as `t → 0`.
    pub fn x1_norm(&self) -> f64 {
        match self.couple {
            Couple::L1L2 | Couple::LinfL2 => self.norm_l2,
            Couple::L2Linf => self.a.first().copied().unwrap_or(0.0),
            Couple::L2L1 => self.norm_l1,
        }
    }

    /// Breakpoints of `t ↦ K(t)`, increasing. Below the first one
    /// `K = t‖x‖_{X₁}`, above the last one `K = ‖x‖_{X₀}`.
    pub fn t_breaks(&self) -> Vec<f64> {
        match self.couple {
            Couple::L1L2 | Couple::L2Linf => self.knots.clone(),
            Couple::L2L1 | Couple::LinfL2 => self.knots.iter().rev().map(|s| 1.0 / s).collect(),
        }
    }

    /// `K(t)` checked against its own decomposition and the trivial bounds
    /// `K ≤ ‖x‖_{X₀}`, `K ≤ t‖x‖_{X₁}`, to relative tolerance `tol`.
    pub fn checked(&self, t: f64, tol: f64) -> Result<KValue> {
        if !(t > 0.0) {
            return domain(format!("K-functional needs t > 0, got {t}"));
        }
        if !(tol > 0.0) {
            return domain(format!("tolerance must be positive, got {tol}"));
        }
        let v = self.eval(t);
        let scale = v.k.max(f64::MIN_POSITIVE);
        let primal = if t.is_infinite() {
            v.x0_norm
        } else {
            v.x0_norm + t * v.x1_norm
        };
        let bound = self.x0_norm().min(t * self.x1_norm());
        let slack = tol * scale + 1e-15 * bound;
        if !v.k.is_finite() || (primal - v.k).abs() > slack || v.k > bound + slack {
            return Err(Error::Solver(format!(
                "K({t}) = {} failed certification (decomposition {primal}, bound {bound})",
                v.k
            )));
        }
        Ok(v)
    }
}
