//! Pointwise K-functional inequalities for an operator bounded on both
//! endpoint spaces.

use super::{k_profile, Couple, Element};
use crate::error::{domain, Result};
use crate::ons::{forward, inverse, DiscreteONS};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A linear map between the two discrete models.
#[derive(Debug, Clone)]
pub enum Operator {
    Identity,
    Scaled(f64),
    /// `f ↦ (c_k(f))`, from functions to sequences.
    Forward(DiscreteONS),
    /// `c ↦ Σ c_k φ_k`, from sequences to functions.
    Inverse(DiscreteONS),
}

impl Operator {
    pub fn apply(&self, x: &Element) -> Result<Element> {
        match (self, x) {
            (Operator::Identity, _) => Ok(x.clone()),
            (Operator::Scaled(l), Element::Function(f)) => Ok(f.scale(Complex64::new(*l, 0.0)).into()),
            (Operator::Scaled(l), Element::Sequence(c)) => Ok(c.scale(Complex64::new(*l, 0.0)).into()),
            (Operator::Forward(sys), Element::Function(f)) => Ok(forward(f, sys)?.into()),
            (Operator::Inverse(sys), Element::Sequence(c)) => Ok(inverse(c, sys)?.into()),
            _ => domain("operator does not act on this element model"),
        }
    }

    /// Natural couples and endpoint norms `(X, Y, M₀, M₁)`: the forward map
    /// takes `(L₁,L₂)` to `(l∞,l₂)` with norms `(M, 1)`, the inverse map takes
    /// `(l₂,l₁)` to `(L₂,L∞)` with norms `(1, M)`.
    pub fn natural_couples(&self) -> Option<(Couple, Couple, f64, f64)> {
        match self {
            Operator::Forward(sys) => Some((Couple::L1L2, Couple::LinfL2, sys.bound_m(), 1.0)),
            Operator::Inverse(sys) => Some((Couple::L2L1, Couple::L2Linf, 1.0, sys.bound_m())),
            _ => None,
        }
    }
}

/// Both sides of the two K-inequalities at one `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformCheck {
    /// `K(t, Tx; Y)`
    pub lhs: f64,
    /// `max(M₀, M₁) K(t, x; X)`
    pub rhs_max: f64,
    /// `M₀ K(t M₁/M₀, x; X)`
    pub rhs_scaled: f64,
    pub holds_max: bool,
    pub holds_scaled: bool,
}

/// Checks `K(t,Tx;Y) ≤ max(M₀,M₁) K(t,x;X)` and `K(t,Tx;Y) ≤ M₀ K(tM₁/M₀,x;X)`
/// with relative slack `tol`.
#[allow(clippy::too_many_arguments)]
pub fn k_transform_check(
    x: &Element,
    couple_src: Couple,
    couple_dst: Couple,
    op: &Operator,
    t: f64,
    m0: f64,
    m1: f64,
    tol: f64,
) -> Result<TransformCheck> {
    if !(t > 0.0) || !(m0 > 0.0) || !(m1 > 0.0) {
        return domain("t, M0 and M1 must be positive");
    }
    let tx = op.apply(x)?;
    let src = k_profile(couple_src, x)?;
    let dst = k_profile(couple_dst, &tx)?;
    let lhs = dst.k(t);
    let rhs_max = m0.max(m1) * src.k(t);
    let rhs_scaled = m0 * src.k(t * m1 / m0);
    let ok = |rhs: f64| lhs <= rhs * (1.0 + tol) + tol * f64::MIN_POSITIVE;
    Ok(TransformCheck {
        lhs,
        rhs_max,
        rhs_scaled,
        holds_max: ok(rhs_max),
        holds_scaled: ok(rhs_scaled),
    })
}
