//! Campaign configuration, presets and the report bundle.

use super::{
    iso_ratio, verify_embedding, verify_lemma22, verify_thm11, verify_thm12, Branch, EmbeddingStatement, FamilyKind,
    IsoStatement, OperatorKind, RatioReport, SampleFamily,
};
use crate::error::{domain, Error, Result};
use crate::ons::{make_system, SystemKind};
use crate::quadrature::QuadratureSpec;
use serde::{Deserialize, Serialize};

/// Seed used when a configuration does not set one.
pub const DEFAULT_SEED: u64 = 7;

/// One statement at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatementSpec {
    pub statement: String,
    #[serde(with = "crate::extreal")]
    pub q: f64,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
}

impl StatementSpec {
    pub fn new(statement: &str, q: f64, alpha: f64) -> Self {
        Self {
            statement: statement.into(),
            q,
            alpha,
            epsilon: None,
            operator: None,
            branch: None,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn lemma22(op: OperatorKind, branch: Branch, q: f64, alpha: f64, epsilon: Option<f64>) -> Self {
        Self {
            statement: "lemma22".into(),
            q,
            alpha,
            epsilon,
            operator: Some(op),
            branch: Some(branch),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Grids {
    pub sizes: Vec<usize>,
    /// System labels as accepted by [`SystemKind`]'s parser.
    pub systems: Vec<String>,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            sizes: vec![64, 256],
            systems: vec!["dft".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FamilySpec {
    pub kinds: Vec<FamilyKind>,
    /// Samples per kind.
    pub count: usize,
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self {
            kinds: FamilyKind::ALL.to_vec(),
            count: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignConfig {
    pub statements: Vec<StatementSpec>,
    pub grids: Grids,
    pub family: FamilySpec,
    pub seed: u64,
    pub quad: QuadratureSpec,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            statements: Vec::new(),
            grids: Grids::default(),
            family: FamilySpec::default(),
            seed: DEFAULT_SEED,
            quad: QuadratureSpec::default(),
        }
    }
}

/// All reports of one campaign, in configuration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignBundle {
    pub seed: u64,
    pub reports: Vec<RatioReport>,
}

impl CampaignBundle {
    /// `statement,q,alpha,N,system,M,min_ratio,max_ratio`, 17 significant digits.
    pub fn summary_csv(&self) -> String {
        let num = |v: f64| {
            if v.is_infinite() {
                if v > 0.0 { "inf" } else { "-inf" }.to_string()
            } else {
                format!("{v:.16e}")
            }
        };
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        let mut out = String::from("statement,q,alpha,N,system,M,min_ratio,max_ratio\n");
        for r in &self.reports {
            let p = &r.params;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.statement,
                num(p.q),
                num(p.alpha),
                p.n,
                p.system.as_deref().unwrap_or(""),
                opt(p.m),
                opt(r.min_ratio),
                opt(r.max_ratio),
            ));
        }
        out
    }
}

/// Named configurations.
pub fn preset(name: &str) -> Result<CampaignConfig> {
    match name {
        "paper-suite" => Ok(paper_suite()),
        "smoke" => Ok(CampaignConfig {
            statements: vec![
                StatementSpec::new("thm11", 2.0, -1.0),
                StatementSpec::new("thm12", 2.0, 0.0).with_epsilon(0.1),
                StatementSpec::new("lemma28_R_seq", 2.0, 0.5),
            ],
            grids: Grids {
                sizes: vec![16],
                systems: vec!["dft".into(), "hadamard".into()],
            },
            family: FamilySpec {
                kinds: FamilyKind::ALL.to_vec(),
                count: 2,
            },
            ..CampaignConfig::default()
        }),
        _ => domain(format!("unknown preset {name:?} (known: paper-suite, smoke)")),
    }
}

fn paper_suite() -> CampaignConfig {
    let inf = f64::INFINITY;
    let mut statements = Vec::new();
    for (q, a) in [(inf, -1.0), (2.0, -1.0), (1.0, -1.5)] {
        statements.push(StatementSpec::new("thm11", q, a));
    }
    for (q, a, e) in [(inf, 0.0, 0.1), (2.0, 0.0, 0.1), (2.0, 0.5, 0.05)] {
        statements.push(StatementSpec::new("thm12", q, a).with_epsilon(e));
    }
    statements.push(StatementSpec::lemma22(
        OperatorKind::Forward,
        Branch::A,
        2.0,
        -1.0,
        None,
    ));
    statements.push(StatementSpec::lemma22(
        OperatorKind::Inverse,
        Branch::B,
        2.0,
        0.0,
        Some(0.1),
    ));
    for (q, a) in [(2.0, -1.0), (inf, -1.0)] {
        statements.push(StatementSpec::new("lemma28_R_func", q, a));
        statements.push(StatementSpec::new("lemma28_L_seq", q, a));
    }
    for (q, a) in [(2.0, 0.5), (inf, 0.5)] {
        statements.push(StatementSpec::new("lemma28_L_func", q, a));
        statements.push(StatementSpec::new("lemma28_R_seq", q, a));
    }
    for a in [-1.0, 0.5] {
        statements.push(StatementSpec::new("cor211", 2.0, a));
        statements.push(StatementSpec::new("cor211_seq", 2.0, a));
    }
    // the left space of lemma25 is trivial unless α + 1/min(q,2) < -1/q on the θ = 1 side
    for (q, a) in [(2.0, -1.5), (1.0, -2.5), (2.0, 0.5)] {
        statements.push(StatementSpec::new("lemma25", q, a));
    }
    for (q, a) in [(2.0, -1.0), (1.0, -1.5), (2.0, 0.5)] {
        statements.push(StatementSpec::new("lemma29_func", q, a));
        statements.push(StatementSpec::new("lemma29_seq", q, a));
    }
    statements.push(StatementSpec::new("lemma212", 2.0, -1.0));
    statements.push(StatementSpec::new("remark35_compare", 4.0, -0.5));
    CampaignConfig {
        statements,
        grids: Grids {
            sizes: vec![64, 256, 1024],
            systems: ["dft", "hadamard", "identity_like", "givens_interpolated(0.5)"]
                .map(String::from)
                .to_vec(),
        },
        family: FamilySpec::default(),
        seed: DEFAULT_SEED,
        quad: QuadratureSpec::default(),
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl CampaignConfig {
    /// Families at size `n`; seeds depend on the campaign seed, `n` and the
    /// kind index only, so every statement at one size sees the same samples.
    pub fn families_at(&self, n: usize) -> Result<Vec<SampleFamily>> {
        self.family
            .kinds
            .iter()
            .enumerate()
            .map(|(i, &kind)| {
                let seed = splitmix(splitmix(self.seed ^ (n as u64)) ^ i as u64);
                SampleFamily::new(kind, self.family.count, seed, n)
            })
            .collect()
    }
}

enum Target {
    Thm11,
    Thm12(f64),
    Lemma22(OperatorKind, Branch, f64),
    Iso(IsoStatement),
    Embedding(EmbeddingStatement),
}

fn target(spec: &StatementSpec) -> Result<Target> {
    let eps = || {
        spec.epsilon
            .ok_or_else(|| Error::Domain(format!("{} needs epsilon", spec.statement)))
    };
    Ok(match spec.statement.as_str() {
        "thm11" => Target::Thm11,
        "thm12" => Target::Thm12(eps()?),
        "lemma22" => {
            let op = spec
                .operator
                .ok_or_else(|| Error::Domain("lemma22 needs an operator".into()))?;
            let branch = spec
                .branch
                .ok_or_else(|| Error::Domain("lemma22 needs a branch".into()))?;
            let e = if branch == Branch::B {
                eps()?
            } else {
                spec.epsilon.unwrap_or(0.0)
            };
            Target::Lemma22(op, branch, e)
        }
        s => match s.parse::<IsoStatement>() {
            Ok(iso) => Target::Iso(iso),
            Err(_) => Target::Embedding(s.parse::<EmbeddingStatement>()?),
        },
    })
}

/// Runs every statement over the grids. Statements tied to a system run
/// once per `(size, system)`, the others once per size. The first report
/// with a violated exact claim aborts the campaign with the offending
/// sample attached.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignBundle> {
    cfg.quad.validate()?;
    let targets: Vec<Target> = cfg.statements.iter().map(target).collect::<Result<_>>()?;
    let systems: Vec<SystemKind> = cfg.grids.systems.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let mut reports = Vec::new();
    for (spec, tgt) in cfg.statements.iter().zip(&targets) {
        for &n in &cfg.grids.sizes {
            let fams = cfg.families_at(n)?;
            let (q, a, quad) = (spec.q, spec.alpha, &cfg.quad);
            let mut batch = Vec::new();
            match *tgt {
                Target::Iso(st) => batch.push(iso_ratio(st, &fams, q, a, quad)?),
                Target::Embedding(st) => batch.push(verify_embedding(st, &fams, q, a, quad)?),
                _ => {
                    for &kind in &systems {
                        let sys = make_system(kind, n)?;
                        batch.push(match *tgt {
                            Target::Thm11 => verify_thm11(&sys, &fams, q, a, quad)?,
                            Target::Thm12(e) => verify_thm12(&sys, &fams, q, a, e, quad)?,
                            Target::Lemma22(op, br, e) => verify_lemma22(op, &sys, br, q, a, e, &fams, quad)?,
                            _ => unreachable!(),
                        });
                    }
                }
            }
            for rep in &batch {
                if let Some(v) = rep.violations.first() {
                    return Err(Error::Verification {
                        statement: rep.statement.clone(),
                        detail: format!("{}: {}", v.label, v.detail),
                        sample: Some(serde_json::to_value(&v.sample)?),
                    });
                }
            }
            reports.extend(batch);
        }
    }
    Ok(CampaignBundle {
        seed: cfg.seed,
        reports,
    })
}
