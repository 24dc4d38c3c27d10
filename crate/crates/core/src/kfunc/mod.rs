//! K-functionals of the couples `(L₁,L₂)`, `(L₂,L∞)` on (0,1] and `(l∞,l₂)`,
//! `(l₂,l₁)` on sequences, their two-term proxies, and the interpolation
//! quasi-norms built on them.

mod interp;
mod profile;
mod transform;

pub use interp::{
    ell_weighted_norm, interp_norm, interp_norm_est, interp_norm_lr, interp_norm_lr_est, interp_norm_unrestricted,
};
pub use profile::{KProfile, KValue};
pub use transform::{k_transform_check, Operator, TransformCheck};

use crate::error::{domain, Result};
use crate::lognorm::Side;
use crate::measure::{rearrange_function, rearrange_sequence, FiniteSequence, StepFunction};
use serde::{Deserialize, Serialize};

/// Default absolute-on-scale tolerance of [`k_exact`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// An ordered couple `X₀ ⊃ X₁` with embedding norm 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Couple {
    #[serde(rename = "L1_L2")]
    L1L2,
    #[serde(rename = "L2_Linf")]
    L2Linf,
    #[serde(rename = "linf_l2")]
    LinfL2,
    #[serde(rename = "l2_l1")]
    L2L1,
}

impl Couple {
    pub const ALL: [Couple; 4] = [Couple::L1L2, Couple::L2Linf, Couple::LinfL2, Couple::L2L1];

    pub fn name(self) -> &'static str {
        match self {
            Couple::L1L2 => "L1_L2",
            Couple::L2Linf => "L2_Linf",
            Couple::LinfL2 => "linf_l2",
            Couple::L2L1 => "l2_l1",
        }
    }

    /// Function couples act on [`StepFunction`]s, the others on sequences.
    pub fn is_function_couple(self) -> bool {
        matches!(self, Couple::L1L2 | Couple::L2Linf)
    }
}

impl std::fmt::Display for Couple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Couple {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Couple::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .map_or_else(|| domain(format!("unknown couple {s:?}")), Ok)
    }
}

/// An element of one of the two discrete models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    Function(StepFunction),
    Sequence(FiniteSequence),
}

impl Element {
    pub fn is_zero(&self) -> bool {
        match self {
            Element::Function(f) => f.is_zero(),
            Element::Sequence(c) => c.is_zero(),
        }
    }

    pub fn as_function(&self) -> Option<&StepFunction> {
        match self {
            Element::Function(f) => Some(f),
            Element::Sequence(_) => None,
        }
    }

    pub fn as_sequence(&self) -> Option<&FiniteSequence> {
        match self {
            Element::Sequence(c) => Some(c),
            Element::Function(_) => None,
        }
    }
}

impl From<StepFunction> for Element {
    fn from(f: StepFunction) -> Self {
        Element::Function(f)
    }
}

impl From<FiniteSequence> for Element {
    fn from(c: FiniteSequence) -> Self {
        Element::Sequence(c)
    }
}

/// Exact K-curve of `x` for `couple`; errors if the model does not match.
pub fn k_profile(couple: Couple, x: &Element) -> Result<KProfile> {
    match (x, couple.is_function_couple()) {
        (Element::Function(f), true) => {
            let moduli: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
            let widths: Vec<f64> = f.widths().collect();
            Ok(KProfile::from_weighted(couple, &moduli, &widths))
        }
        (Element::Sequence(c), false) => {
            let moduli: Vec<f64> = c.entries().iter().map(|v| v.norm()).collect();
            Ok(KProfile::from_weighted(couple, &moduli, &vec![1.0; moduli.len()]))
        }
        _ => domain(format!("couple {couple} does not act on this element model")),
    }
}

/// `K(t, x) = inf_{x = x₀ + x₁} ‖x₀‖_{X₀} + t‖x₁‖_{X₁}`.
pub fn k_exact(couple: Couple, x: &Element, t: f64, tol: f64) -> Result<f64> {
    Ok(k_profile(couple, x)?.checked(t, tol)?.k)
}

/// `(θ, q, α)` of the interpolation space `(X₀, X₁)_{θ,q,α}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaParams {
    pub theta: f64,
    #[serde(with = "crate::extreal")]
    pub q: f64,
    pub alpha: f64,
}

impl ThetaParams {
    pub fn new(theta: f64, q: f64, alpha: f64) -> Result<Self> {
        let prm = Self { theta, q, alpha };
        prm.validate()?;
        Ok(prm)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { theta, q, alpha } = *self;
        if q.is_nan() || q <= 0.0 || !alpha.is_finite() || theta.is_nan() {
            return domain(format!("invalid parameters theta={theta}, q={q}, alpha={alpha}"));
        }
        let crit = -1.0 / q;
        let ok = (theta > 0.0 && theta < 1.0)
            || (theta == 0.0 && alpha >= crit)
            || (theta == 1.0 && alpha < crit)
            || (theta == 1.0 && q.is_infinite() && alpha == 0.0);
        if !ok {
            return domain(format!(
                "(theta, q, alpha) = ({theta}, {q}, {alpha}) is outside the admissible range"
            ));
        }
        Ok(())
    }
}

/// Admissible `θ` for the limiting L/R spaces: `[0,1)` for L, `[0,1]` for R.
pub(crate) fn check_lr_theta(theta: f64, side: Side) -> Result<()> {
    let ok = match side {
        Side::L => (0.0..1.0).contains(&theta),
        Side::R => (0.0..=1.0).contains(&theta),
    };
    if !ok {
        return domain(format!("theta = {theta} is not admissible on side {side:?}"));
    }
    Ok(())
}

/// Sampled K-curve with the norms of the optimal pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KCurve {
    pub couple: Couple,
    pub element: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub x0_norm: Vec<f64>,
    pub x1_norm: Vec<f64>,
}

impl KCurve {
    /// CSV with header `t,K,x0_norm,x1_norm`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,K,x0_norm,x1_norm\n");
        for i in 0..self.grid.len() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                self.grid[i], self.values[i], self.x0_norm[i], self.x1_norm[i]
            ));
        }
        out
    }
}

/// Geometric grid with ratio `2^{1/(8·density)}` from `lo` to 1.
pub fn geometric_grid(lo: f64, density: usize) -> Vec<f64> {
    let ratio_ln = std::f64::consts::LN_2 / (8 * density.max(1)) as f64;
    let steps = ((-lo.ln()) / ratio_ln).ceil() as usize;
    (0..=steps)
        .rev()
        .map(|i| (-(i as f64) * ratio_ln).exp().max(lo))
        .collect()
}

pub fn k_curve(couple: Couple, x: &Element, grid: &[f64], tol: f64) -> Result<KCurve> {
    use rayon::prelude::*;
    let prof = k_profile(couple, x)?;
    let vals: Vec<KValue> = grid.par_iter().map(|&t| prof.checked(t, tol)).collect::<Result<_>>()?;
    let element = match x {
        Element::Function(f) => format!("function({} cells)", f.num_cells()),
        Element::Sequence(c) => format!("sequence(len {})", c.len()),
    };
    Ok(KCurve {
        couple,
        element,
        grid: grid.to_vec(),
        values: vals.iter().map(|v| v.k).collect(),
        x0_norm: vals.iter().map(|v| v.x0_norm).collect(),
        x1_norm: vals.iter().map(|v| v.x1_norm).collect(),
    })
}

/// Non-increasing staircase on `(0, ends.last()]`.
struct Staircase {
    ends: Vec<f64>,
    vals: Vec<f64>,
}

impl Staircase {
    /// `∫_0^x v^power`, `power ∈ {1, 2}`.
    fn integral(&self, x: f64, power: i32) -> f64 {
        let mut acc = 0.0;
        let mut start = 0.0;
        for (&end, &v) in self.ends.iter().zip(&self.vals) {
            if x <= start {
                break;
            }
            acc += (end.min(x) - start) * v.powi(power);
            start = end;
        }
        acc
    }

    fn total(&self, power: i32) -> f64 {
        self.integral(f64::INFINITY, power)
    }
}

/// Two-term closed-form proxies equivalent to `K(t, x)`:
/// `∫_0^{t²} f* + t (∫_{t²}^1 f*²)^{1/2}` for `(L₁,L₂)`,
/// `(∫_0^{t²} f*²)^{1/2}` for `(L₂,L∞)`; the sequence couples use the same
/// forms on `c*` at `s = 1/t`, scaled by `t`.
pub fn k_proxy(couple: Couple, x: &Element, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("K-proxy needs t > 0, got {t}"));
    }
    let stairs = match (x, couple.is_function_couple()) {
        (Element::Function(f), true) => {
            let g = rearrange_function(f);
            Staircase {
                ends: g.breakpoints()[1..].to_vec(),
                vals: g.values().to_vec(),
            }
        }
        (Element::Sequence(c), false) => {
            let s = rearrange_sequence(c);
            Staircase {
                ends: (1..=s.len()).map(|k| k as f64).collect(),
                vals: s.entries().to_vec(),
            }
        }
        _ => return domain(format!("couple {couple} does not act on this element model")),
    };
    let l1l2 = |s: f64| {
        let cut = s * s;
        let rest = (stairs.total(2) - stairs.integral(cut, 2)).max(0.0);
        stairs.integral(cut, 1) + s * rest.sqrt()
    };
    let l2linf = |s: f64| stairs.integral(s * s, 2).sqrt();
    Ok(match couple {
        Couple::L1L2 => l1l2(t),
        Couple::L2Linf => l2linf(t),
        Couple::L2L1 => t * l1l2(1.0 / t),
        Couple::LinfL2 => t * l2linf(1.0 / t),
    })
}

/// `ℓ^{(α₀,α∞)}(t)`: `(1 - ln t)^{α₀}` on (0,1], `(1 + ln t)^{α∞}` on [1,∞).
pub fn ell_weight(alpha0: f64, alpha_inf: f64, t: f64) -> f64 {
    if t <= 1.0 {
        (1.0 - t.ln()).powf(alpha0)
    } else {
        (1.0 + t.ln()).powf(alpha_inf)
    }
}
