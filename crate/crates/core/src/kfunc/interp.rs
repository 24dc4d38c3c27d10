//! Interpolation quasi-norms over exact K-curves.
//!
//! In `u = -ln t` the K-curve is explicit between the breakpoints of its
//! profile, and below the first breakpoint `K(t) = t‖x‖_{X₁}`, so every
//! tail past the last breakpoint in `u` is either exponentially decaying or
//! a log power with a closed-form integral.

use super::{check_lr_theta, k_profile, Couple, Element, KProfile, ThetaParams};
use crate::error::{domain, Result};
use crate::lognorm::{NormEstimate, Side};
use crate::quadrature::{
    algebraic_tail, decaying_tail, golden_max, integrate_breaks, log_tail, sampled_max, Estimate, QuadratureSpec,
};

const PIECE_SAMPLES: usize = 16;

/// The K-curve in the log variable, restricted to `t ∈ (0,1]`.
struct LogCurve {
    prof: KProfile,
    /// `0 = w_0 < … < w_m = U`, where `K = t‖x‖_{X₁}` for `u ≥ U`
    breaks: Vec<f64>,
    x1: f64,
}

impl LogCurve {
    fn new(prof: KProfile) -> Self {
        let mut breaks = vec![0.0];
        let mut inner: Vec<f64> = prof
            .t_breaks()
            .into_iter()
            .filter(|&t| t < 1.0)
            .map(|t| -t.ln())
            .collect();
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        breaks.extend(inner.into_iter().filter(|&u| u > 0.0));
        let x1 = prof.x1_norm();
        Self { prof, breaks, x1 }
    }

    fn u_lin(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    /// `e^{θu} K(e^{-u})`, computed without overflow.
    fn scaled_k(&self, theta: f64, u: f64) -> f64 {
        if u >= self.u_lin() {
            return self.x1 * (-(1.0 - theta) * u).exp();
        }
        self.prof.k((-u).exp()) * (theta * u).exp()
    }

    /// Index `i` with `breaks[i] ≤ u < breaks[i+1]`.
    fn piece_of(&self, u: f64) -> usize {
        self.breaks
            .partition_point(|&b| b <= u)
            .saturating_sub(1)
            .min(self.breaks.len().saturating_sub(2))
    }
}

fn profile_for(couple: Couple, x: &Element) -> Result<Option<LogCurve>> {
    let prof = k_profile(couple, x)?;
    Ok(if prof.is_zero() {
        None
    } else {
        Some(LogCurve::new(prof))
    })
}

/// `‖t^{-θ-1/q} (1+|ln t|)^α K(t,x) | L_q(0,1)‖`.
pub fn interp_norm(couple: Couple, x: &Element, prm: &ThetaParams, quad: &QuadratureSpec) -> Result<f64> {
    Ok(interp_norm_est(couple, x, prm, quad)?.value)
}

pub fn interp_norm_est(couple: Couple, x: &Element, prm: &ThetaParams, quad: &QuadratureSpec) -> Result<NormEstimate> {
    prm.validate()?;
    quad.validate()?;
    let Some(curve) = profile_for(couple, x)? else {
        return Ok(NormEstimate {
            value: 0.0,
            rel_err: 0.0,
        });
    };
    lower_part(&curve, prm.theta, prm.q, prm.alpha, quad)
}

/// [`interp_norm_est`] for any `θ ∈ [0,1]`, `q > 0`, `α`, without the
/// admissibility check; divergent norms come back as `+∞`.
pub fn interp_norm_unrestricted(
    couple: Couple,
    x: &Element,
    theta: f64,
    q: f64,
    alpha: f64,
    quad: &QuadratureSpec,
) -> Result<NormEstimate> {
    quad.validate()?;
    if !(0.0..=1.0).contains(&theta) || q.is_nan() || q <= 0.0 || !alpha.is_finite() {
        return domain(format!("invalid parameters theta={theta}, q={q}, alpha={alpha}"));
    }
    let Some(curve) = profile_for(couple, x)? else {
        return Ok(NormEstimate {
            value: 0.0,
            rel_err: 0.0,
        });
    };
    lower_part(&curve, theta, q, alpha, quad)
}

/// Norm over `t ∈ (0,1)` for any `θ ∈ [0,1]`; `+∞` when divergent.
fn lower_part(curve: &LogCurve, theta: f64, q: f64, alpha: f64, quad: &QuadratureSpec) -> Result<NormEstimate> {
    let x1 = curve.x1;
    let ul = curve.u_lin();
    let decay = 1.0 - theta;
    if q.is_infinite() {
        let phi = |u: f64| (1.0 + u).powf(alpha) * curve.scaled_k(theta, u);
        let mut best = sup_over_pieces(&phi, &curve.breaks);
        // past U: x1 e^{-(1-θ)u} (1+u)^α
        let tail = if decay == 0.0 {
            match alpha.partial_cmp(&0.0) {
                Some(std::cmp::Ordering::Greater) => f64::INFINITY,
                Some(std::cmp::Ordering::Equal) => x1,
                _ => phi(ul),
            }
        } else if alpha > 0.0 {
            phi((alpha / decay - 1.0).max(ul))
        } else {
            phi(ul)
        };
        best = best.max(tail);
        return Ok(NormEstimate {
            value: best,
            rel_err: 0.0,
        });
    }
    let b = q * alpha;
    let tail = if decay == 0.0 {
        Estimate::exact(x1.powf(q) * log_tail(b, ul))
    } else {
        let g = |u: f64| (1.0 + u).powf(b) * (x1 * (-decay * u).exp()).powf(q);
        decaying_tail(&g, ul, decay * q, quad)
    };
    if tail.value.is_infinite() {
        return Ok(NormEstimate {
            value: f64::INFINITY,
            rel_err: 0.0,
        });
    }
    let integrand = |u: f64| (1.0 + u).powf(b) * curve.scaled_k(theta, u).powf(q);
    let body = integrate_breaks(&integrand, &curve.breaks, quad);
    Ok(root(body + tail, q))
}

fn root(est: Estimate, q: f64) -> NormEstimate {
    NormEstimate {
        value: est.value.max(0.0).powf(1.0 / q),
        rel_err: est.rel_err() / q,
    }
}

fn sup_over_pieces<F: Fn(f64) -> f64>(f: &F, breaks: &[f64]) -> f64 {
    let mut best: f64 = f(breaks[0]);
    for w in breaks.windows(2) {
        best = best.max(sampled_max(f, w[0], w[1], PIECE_SAMPLES));
    }
    best
}

/// `‖t^{-1/q} ℓ^{(α₀,α∞)}(t) K(t,x) | L_q(0,∞)‖`, returned as the `(0,1)` and
/// `(1,∞)` parts; the full norm is their `l_q` combination.
pub fn ell_weighted_norm(
    couple: Couple,
    x: &Element,
    q: f64,
    alpha0: f64,
    alpha_inf: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    quad.validate()?;
    if q.is_nan() || q <= 0.0 || !alpha0.is_finite() || !alpha_inf.is_finite() {
        return domain("invalid weighted-norm parameters");
    }
    let Some(curve) = profile_for(couple, x)? else {
        return Ok((0.0, 0.0));
    };
    let lower = lower_part(&curve, 0.0, q, alpha0, quad)?.value;
    let upper = upper_part(&curve.prof, q, alpha_inf, quad);
    Ok((lower, upper))
}

/// `‖t^{-1/q} (1+ln t)^β K(t,x) | L_q(1,∞)‖`, integrated in `v = ln t`.
fn upper_part(prof: &KProfile, q: f64, beta: f64, quad: &QuadratureSpec) -> f64 {
    let x0 = prof.x0_norm();
    let mut breaks = vec![0.0];
    let mut inner: Vec<f64> = prof.t_breaks().into_iter().filter(|&t| t > 1.0).map(f64::ln).collect();
    inner.sort_by(f64::total_cmp);
    breaks.extend(inner);
    let vs = *breaks.last().unwrap();
    if q.is_infinite() {
        let phi = |v: f64| (1.0 + v).powf(beta) * prof.k(v.exp());
        let tail = if beta > 0.0 {
            f64::INFINITY
        } else if beta == 0.0 {
            x0
        } else {
            phi(vs)
        };
        return sup_over_pieces(&phi, &breaks).max(tail);
    }
    let b = q * beta;
    let tail = x0.powf(q) * log_tail(b, vs);
    if tail.is_infinite() {
        return f64::INFINITY;
    }
    let integrand = |v: f64| (1.0 + v).powf(b) * prof.k(v.exp()).powf(q);
    let body = integrate_breaks(&integrand, &breaks, quad);
    (body.value + tail).powf(1.0 / q)
}

/// Inner `L_r` quantity of the L/R norms as a function of the outer `v`:
/// `I(v) = ∫ e^{θrw} K(e^{-w})^r dw` over `(v,∞)` (L) or `(0,v)` (R), or the
/// supremum of `e^{θw} K(e^{-w})` over the same range when `r = ∞`.
struct Inner<'a> {
    curve: &'a LogCurve,
    theta: f64,
    r: f64,
    side: Side,
    /// per piece: integral (r < ∞) or maximum (r = ∞)
    piece: Vec<f64>,
    /// accumulated from the left (R) or right (L) at each break
    acc: Vec<f64>,
    quad: QuadratureSpec,
}

impl<'a> Inner<'a> {
    fn new(curve: &'a LogCurve, theta: f64, r: f64, side: Side, quad: &QuadratureSpec) -> Self {
        let inner_quad = QuadratureSpec {
            rel_tol: quad.rel_tol * 0.1,
            ..*quad
        };
        let mut me = Self {
            curve,
            theta,
            r,
            side,
            piece: Vec::new(),
            acc: Vec::new(),
            quad: inner_quad,
        };
        let br = &curve.breaks;
        me.piece = br.windows(2).map(|w| me.segment(w[0], w[1])).collect();
        let m = me.piece.len();
        me.acc = vec![0.0; m + 1];
        match side {
            Side::R => {
                for i in 0..m {
                    me.acc[i + 1] = me.combine(me.acc[i], me.piece[i]);
                }
            }
            Side::L => {
                me.acc[m] = me.beyond(curve.u_lin());
                for i in (0..m).rev() {
                    me.acc[i] = me.combine(me.acc[i + 1], me.piece[i]);
                }
            }
        }
        me
    }

    fn finite_r(&self) -> bool {
        self.r.is_finite()
    }

    fn combine(&self, a: f64, b: f64) -> f64 {
        if self.finite_r() {
            a + b
        } else {
            a.max(b)
        }
    }

    fn integrand(&self, w: f64) -> f64 {
        let s = self.curve.scaled_k(self.theta, w);
        if self.finite_r() {
            s.powf(self.r)
        } else {
            s
        }
    }

    /// Integral or maximum over `[a, b]` inside one piece.
    fn segment(&self, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return if self.finite_r() { 0.0 } else { self.integrand(a) };
        }
        let f = |w: f64| self.integrand(w);
        if self.finite_r() {
            integrate_breaks(&f, &[a, b], &self.quad).value
        } else {
            sampled_max(&f, a, b, PIECE_SAMPLES)
        }
    }

    /// Side-L contribution of `(v, ∞)` for `v ≥ U` (`θ < 1`).
    fn beyond(&self, v: f64) -> f64 {
        let x1 = self.curve.x1;
        let d = 1.0 - self.theta;
        if self.finite_r() {
            x1.powf(self.r) * (-d * self.r * v).exp() / (d * self.r)
        } else {
            x1 * (-d * v).exp()
        }
    }

    fn at(&self, v: f64) -> f64 {
        let ul = self.curve.u_lin();
        let m = self.piece.len();
        match self.side {
            Side::L => {
                if v >= ul {
                    return self.beyond(v);
                }
                let i = self.curve.piece_of(v);
                self.combine(self.segment(v, self.curve.breaks[i + 1]), self.acc[i + 1])
            }
            Side::R => {
                if v >= ul {
                    let x1 = self.curve.x1;
                    let d = 1.0 - self.theta;
                    return if !self.finite_r() {
                        self.acc[m].max(self.integrand(ul))
                    } else if d == 0.0 {
                        self.acc[m] + x1.powf(self.r) * (v - ul)
                    } else {
                        let rr = d * self.r;
                        self.acc[m] + x1.powf(self.r) * (-rr * ul).exp() * -(-rr * (v - ul)).exp_m1() / rr
                    };
                }
                let i = self.curve.piece_of(v);
                self.combine(self.acc[i], self.segment(self.curve.breaks[i], v))
            }
        }
    }

    /// `I^{1/r}`, or `I` itself when `r = ∞`.
    fn norm_at(&self, v: f64) -> f64 {
        let i = self.at(v);
        if self.finite_r() {
            i.powf(1.0 / self.r)
        } else {
            i
        }
    }
}

/// `‖t^{-1/q}(1+|ln t|)^α ‖u^{-θ-1/r} K(u,x) | L_r(0,t) or L_r(t,1)‖ | L_q(0,1)‖`.
#[allow(clippy::too_many_arguments)]
pub fn interp_norm_lr(
    couple: Couple,
    x: &Element,
    theta: f64,
    q: f64,
    alpha: f64,
    r: f64,
    side: Side,
    quad: &QuadratureSpec,
) -> Result<f64> {
    Ok(interp_norm_lr_est(couple, x, theta, q, alpha, r, side, quad)?.value)
}

#[allow(clippy::too_many_arguments)]
pub fn interp_norm_lr_est(
    couple: Couple,
    x: &Element,
    theta: f64,
    q: f64,
    alpha: f64,
    r: f64,
    side: Side,
    quad: &QuadratureSpec,
) -> Result<NormEstimate> {
    quad.validate()?;
    check_lr_theta(theta, side)?;
    if q.is_nan() || q <= 0.0 || r.is_nan() || r <= 0.0 || !alpha.is_finite() {
        return domain(format!("invalid parameters q={q}, r={r}, alpha={alpha}"));
    }
    let Some(curve) = profile_for(couple, x)? else {
        return Ok(NormEstimate {
            value: 0.0,
            rel_err: 0.0,
        });
    };
    let inner = Inner::new(&curve, theta, r, side, quad);
    let ul = curve.u_lin();
    let x1 = curve.x1;
    let d = 1.0 - theta;
    // side R with θ = 1 and r < ∞: I grows linearly past U
    let linear_growth = side == Side::R && d == 0.0 && r.is_finite();
    let inf = NormEstimate {
        value: f64::INFINITY,
        rel_err: 0.0,
    };
    let kappa = if r.is_finite() { 1.0 / r } else { 1.0 };

    if q.is_infinite() {
        let phi = |v: f64| (1.0 + v).powf(alpha) * inner.norm_at(v);
        let mut best = sup_over_pieces(&phi, &curve.breaks);
        let tail = match side {
            Side::L => {
                // (1+v)^α C e^{-(1-θ)v}
                if alpha > 0.0 {
                    phi((alpha / d - 1.0).max(ul))
                } else {
                    phi(ul)
                }
            }
            Side::R if linear_growth => {
                let e = alpha + kappa;
                if e > 0.0 {
                    f64::INFINITY
                } else if e == 0.0 {
                    phi(ul).max(x1)
                } else {
                    // (1+v)^α (A + Bv)^{1/r} has a single critical point
                    let a0 = inner.at(ul) - x1.powf(r) * ul;
                    let b0 = x1.powf(r);
                    let crit = -(alpha * r * a0 + b0) / (b0 * (alpha * r + 1.0));
                    phi(ul).max(if crit > ul { phi(crit) } else { 0.0 })
                }
            }
            Side::R => {
                let limit = inner.norm_at(f64::INFINITY);
                if alpha > 0.0 {
                    f64::INFINITY
                } else if alpha == 0.0 {
                    limit
                } else {
                    let stretch = if r.is_finite() { quad.tail_cut / (d * r) } else { 0.0 };
                    if stretch > 0.0 {
                        let (_, v) = golden_max(&phi, ul, ul + stretch, 200);
                        sampled_max(&phi, ul, ul + stretch, 4 * PIECE_SAMPLES).max(v)
                    } else {
                        phi(ul)
                    }
                }
            }
        };
        best = best.max(tail);
        return Ok(NormEstimate {
            value: best,
            rel_err: 0.0,
        });
    }

    let b = q * alpha;
    let s = q * kappa;
    let tail = match side {
        Side::L => {
            let g = |v: f64| (1.0 + v).powf(b) * inner.norm_at(v).powf(q);
            decaying_tail(&g, ul, d * q, quad)
        }
        Side::R if linear_growth => {
            let growth = b + s;
            if growth >= -1.0 {
                return Ok(inf);
            }
            let g = |v: f64| (1.0 + v).powf(b) * inner.at(v).powf(s);
            algebraic_tail(&g, ul, growth, quad)
        }
        Side::R => {
            if b >= -1.0 {
                return Ok(inf);
            }
            if r.is_infinite() {
                Estimate::exact(inner.at(ul).powf(q) * log_tail(b, ul))
            } else {
                // I(v) = I_∞ (1 - y), y = c e^{-(1-θ)r v} / I_∞
                let total = inner.at(f64::INFINITY);
                let rr = d * r;
                let c = x1.powf(r) * (-rr * ul).exp() / rr;
                let g = |v: f64| {
                    let y = c * (-rr * (v - ul)).exp() / total;
                    total.powf(s) * (1.0 + v).powf(b) * (s * (-y).ln_1p()).exp_m1()
                };
                Estimate::exact(total.powf(s) * log_tail(b, ul)) + decaying_tail(&g, ul, rr, quad)
            }
        }
    };
    let integrand = |v: f64| (1.0 + v).powf(b) * inner.norm_at(v).powf(q);
    let body = integrate_breaks(&integrand, &curve.breaks, quad);
    Ok(root(body + tail, q))
}
