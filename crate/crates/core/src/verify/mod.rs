//! Verification campaigns. Each statement is evaluated on both sides over
//! sample families; the unspecified constants of the inequalities are
//! reported as measured ratios, and exact inequalities are checked.

mod campaign;
mod families;
mod statements;

pub use campaign::{
    preset, run_campaign, CampaignBundle, CampaignConfig, FamilySpec, Grids, StatementSpec, DEFAULT_SEED,
};
pub use families::{collect_samples, FamilyKind, Sample, SampleFamily};
pub use statements::{
    iso_ratio, truncation_distances, verify_embedding, verify_lemma22, verify_thm11, verify_thm12, Branch,
    EmbeddingStatement, IsoStatement, OperatorKind,
};

use crate::error::{domain, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `G(M, γ) = min(M, (1 + ln M)^γ)`.
pub fn g_factor(m: f64, gamma: f64) -> Result<f64> {
    check_g(m, gamma)?;
    Ok(m.min((1.0 + m.ln()).powf(gamma)))
}

/// The same factor through its case split at `γ = ln M / ln(1 + ln M)`.
pub fn g_factor_piecewise(m: f64, gamma: f64) -> Result<f64> {
    check_g(m, gamma)?;
    if m == 1.0 {
        return Ok(1.0);
    }
    let lm = m.ln();
    Ok(if gamma <= lm / lm.ln_1p() {
        (1.0 + lm).powf(gamma)
    } else {
        m
    })
}

fn check_g(m: f64, gamma: f64) -> Result<()> {
    if !(m >= 1.0) || !m.is_finite() {
        return domain(format!("G(M, gamma) needs finite M >= 1, got {m}"));
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return domain(format!("G(M, gamma) needs finite gamma >= 0, got {gamma}"));
    }
    Ok(())
}

/// Parameters of one report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioParams {
    #[serde(with = "crate::extreal")]
    pub q: f64,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    pub families: Vec<String>,
}

/// A sample on which an exact claim failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub label: String,
    pub detail: String,
    pub sample: Sample,
}

/// Per-sample ratios `LHS / RHS` of one statement with their extremes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub statement: String,
    pub params: RatioParams,
    pub samples: usize,
    /// Samples with both sides finite and positive.
    pub evaluated: usize,
    pub skipped_zero: usize,
    pub skipped_infinite: usize,
    /// `None` for skipped samples.
    pub ratios: Vec<Option<f64>>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub argmin: Option<String>,
    pub argmax: Option<String>,
    /// Statement-specific summaries.
    pub extras: BTreeMap<String, f64>,
    pub violations: Vec<Violation>,
}

impl RatioReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// What a statement evaluator returns for one sample.
#[derive(Debug, Clone, Default)]
pub(crate) struct SampleEval {
    pub lhs: f64,
    pub rhs: f64,
    /// Statement-specific per-sample quantities, aggregated by the caller.
    pub aux: Vec<f64>,
    pub violation: Option<String>,
}

/// Evaluates `eval` on every sample in parallel and assembles the report in
/// sample order. Returns the per-sample evaluations for aggregation of `aux`.
pub(crate) fn run_samples<F>(
    statement: &str,
    params: RatioParams,
    samples: &[Sample],
    eval: F,
) -> Result<(RatioReport, Vec<SampleEval>)>
where
    F: Fn(&Sample) -> Result<SampleEval> + Sync,
{
    let results: Vec<Result<SampleEval>> = samples.par_iter().map(&eval).collect();
    let evals = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rep = RatioReport {
        statement: statement.to_string(),
        params,
        samples: samples.len(),
        evaluated: 0,
        skipped_zero: 0,
        skipped_infinite: 0,
        ratios: Vec::with_capacity(samples.len()),
        min_ratio: None,
        max_ratio: None,
        argmin: None,
        argmax: None,
        extras: BTreeMap::new(),
        violations: Vec::new(),
    };
    for (s, e) in samples.iter().zip(&evals) {
        let mut violation = e.violation.clone();
        let ratio = if e.rhs == 0.0 {
            if e.lhs != 0.0 {
                violation.get_or_insert_with(|| format!("LHS {} with RHS 0", e.lhs));
            }
            rep.skipped_zero += 1;
            None
        } else if !e.rhs.is_finite() {
            rep.skipped_infinite += 1;
            None
        } else if !e.lhs.is_finite() {
            violation.get_or_insert_with(|| format!("LHS infinite with finite RHS {}", e.rhs));
            rep.skipped_infinite += 1;
            None
        } else {
            rep.evaluated += 1;
            Some(e.lhs / e.rhs)
        };
        if let Some(r) = ratio {
            if rep.min_ratio.is_none_or(|m| r < m) {
                rep.min_ratio = Some(r);
                rep.argmin = Some(s.label.clone());
            }
            if rep.max_ratio.is_none_or(|m| r > m) {
                rep.max_ratio = Some(r);
                rep.argmax = Some(s.label.clone());
            }
        }
        rep.ratios.push(ratio);
        if let Some(detail) = violation {
            rep.violations.push(Violation {
                label: s.label.clone(),
                detail,
                sample: s.clone(),
            });
        }
    }
    Ok((rep, evals))
}

/// Running min/max of a per-sample quantity, written as `<key>_min`/`<key>_max`.
pub(crate) fn record_range(extras: &mut BTreeMap<String, f64>, key: &str, values: impl Iterator<Item = f64>) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo <= hi {
        extras.insert(format!("{key}_min"), lo);
        extras.insert(format!("{key}_max"), hi);
    }
}
