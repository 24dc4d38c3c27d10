//! Seeded generators of test elements for both discrete models.

use crate::error::{domain, Error, Result};
use crate::kfunc::Element;
use crate::measure::{FiniteSequence, StepFunction};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Shape of the generated elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FamilyKind {
    /// Complex Gaussian values with log-normal magnitudes.
    RandomStep,
    /// `χ_{(0,s)}` for functions, the first `sN` (rounded) unit entries for
    /// sequences. Without `s` the supports `N^{i/(count-1)}` sweep all scales.
    Characteristic(Option<f64>),
    /// `f*(t) = (1 - ln t)^β` on the cell midpoints, `c*_k = k^{-1/2}(1 + ln k)^β`,
    /// randomly permuted. Without `β` the exponents are stratified over `[-1, 1]`.
    LogSpike(Option<f64>),
    /// Gaussian entries damped by `k^{-γ}`, `γ` stratified over `[0, 1]`; cells
    /// are permuted in the function model.
    RandomSequence,
    /// Random `±1` pattern.
    HadamardWorst,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::RandomStep,
        FamilyKind::Characteristic(None),
        FamilyKind::LogSpike(None),
        FamilyKind::RandomSequence,
        FamilyKind::HadamardWorst,
    ];

    pub fn label(&self) -> String {
        let opt = |name: &str, v: &Option<f64>| match v {
            Some(v) => format!("{name}({v})"),
            None => name.to_string(),
        };
        match self {
            FamilyKind::RandomStep => "random_step".into(),
            FamilyKind::Characteristic(s) => opt("characteristic", s),
            FamilyKind::LogSpike(b) => opt("log_spike", b),
            FamilyKind::RandomSequence => "random_sequence".into(),
            FamilyKind::HadamardWorst => "hadamard_worst".into(),
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.find(['(', ':']) {
            Some(i) => (&s[..i], Some(s[i + 1..].trim_end_matches(')'))),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<Option<f64>> {
            a.map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Domain(format!("bad family argument in {s:?}")))
            })
            .transpose()
        };
        let kind = match name {
            "random_step" => FamilyKind::RandomStep,
            "characteristic" | "chi" => {
                let v = num(arg)?;
                if let Some(v) = v {
                    if !(v > 0.0 && v <= 1.0) {
                        return domain(format!("characteristic family needs s in (0,1], got {v}"));
                    }
                }
                FamilyKind::Characteristic(v)
            }
            "log_spike" => {
                let v = num(arg)?;
                if v.is_some_and(|b| !b.is_finite()) {
                    return domain("log_spike exponent must be finite");
                }
                FamilyKind::LogSpike(v)
            }
            "random_sequence" => FamilyKind::RandomSequence,
            "hadamard_worst" => FamilyKind::HadamardWorst,
            _ => return domain(format!("unknown sample family {s:?}")),
        };
        if arg.is_some() && !matches!(kind, FamilyKind::Characteristic(_) | FamilyKind::LogSpike(_)) {
            return domain(format!("family {name} takes no argument"));
        }
        Ok(kind)
    }
}

impl TryFrom<String> for FamilyKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FamilyKind> for String {
    fn from(k: FamilyKind) -> Self {
        k.label()
    }
}

/// `count` elements of one kind on `size` cells (or of length `size`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleFamily {
    pub kind: FamilyKind,
    pub count: usize,
    pub seed: u64,
    pub size: usize,
}

/// A generated element with a replayable label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub label: String,
    pub element: Element,
}

impl SampleFamily {
    pub fn new(kind: FamilyKind, count: usize, seed: u64, size: usize) -> Result<Self> {
        if size == 0 {
            return domain("sample size must be at least 1");
        }
        Ok(Self {
            kind,
            count,
            seed,
            size,
        })
    }

    fn label(&self, i: usize) -> String {
        format!("{}#{i}", self.kind.label())
    }

    /// Raw magnitude profiles and phases, shared by both models.
    fn raw(&self, function_model: bool) -> Vec<Vec<Complex64>> {
        let n = self.size;
        let count = self.count;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        // midpoint of the i-th of `count` equal strata of [lo, hi]
        let stratum = |i: usize, lo: f64, hi: f64| lo + (hi - lo) * (i as f64 + 0.5) / count as f64;
        (0..count)
            .map(|i| {
                let mut v: Vec<Complex64> = match self.kind {
                    FamilyKind::RandomStep => (0..n)
                        .map(|_| {
                            let z: f64 = StandardNormal.sample(&mut rng);
                            gaussian(&mut rng) * z.exp()
                        })
                        .collect(),
                    FamilyKind::Characteristic(s) => {
                        let m = match s {
                            Some(s) => ((s * n as f64).round() as usize).clamp(1, n),
                            None if count > 1 => {
                                ((n as f64).powf(i as f64 / (count - 1) as f64).round() as usize).clamp(1, n)
                            }
                            None => n,
                        };
                        (0..n)
                            .map(|j| Complex64::new(if j < m { 1.0 } else { 0.0 }, 0.0))
                            .collect()
                    }
                    FamilyKind::LogSpike(beta) => {
                        let beta = beta.unwrap_or_else(|| stratum(i, -1.0, 1.0));
                        let mut v: Vec<Complex64> = (0..n)
                            .map(|j| {
                                let x = if function_model {
                                    (1.0 + (n as f64 / (j as f64 + 0.5)).ln()).powf(beta)
                                } else {
                                    let k = (j + 1) as f64;
                                    k.powf(-0.5) * (1.0 + k.ln()).powf(beta)
                                };
                                Complex64::new(x, 0.0)
                            })
                            .collect();
                        v.shuffle(&mut rng);
                        v
                    }
                    FamilyKind::RandomSequence => {
                        let gamma = stratum(i, 0.0, 1.0);
                        let mut v: Vec<Complex64> = (0..n)
                            .map(|k| gaussian(&mut rng) * ((k + 1) as f64).powf(-gamma))
                            .collect();
                        if function_model {
                            v.shuffle(&mut rng);
                        }
                        v
                    }
                    FamilyKind::HadamardWorst => (0..n)
                        .map(|_| Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0))
                        .collect(),
                };
                if v.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                    v[0] = Complex64::new(1.0, 0.0);
                }
                v
            })
            .collect()
    }

    /// Step functions on the uniform `size`-cell grid.
    pub fn functions(&self) -> Vec<Sample> {
        self.raw(true)
            .into_iter()
            .enumerate()
            .map(|(i, v)| Sample {
                label: self.label(i),
                element: StepFunction::uniform(v).expect("size ≥ 1").into(),
            })
            .collect()
    }

    /// Sequences of length `size`.
    pub fn sequences(&self) -> Vec<Sample> {
        self.raw(false)
            .into_iter()
            .enumerate()
            .map(|(i, v)| Sample {
                label: self.label(i),
                element: FiniteSequence::new(v).expect("finite entries").into(),
            })
            .collect()
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// All samples of `families` in one model, in family order.
pub fn collect_samples(families: &[SampleFamily], functions: bool) -> Vec<Sample> {
    families
        .iter()
        .flat_map(|f| if functions { f.functions() } else { f.sequences() })
        .collect()
}
