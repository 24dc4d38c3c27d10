//! Command-line front end: norms, K-functionals, Fourier maps and
//! verification campaigns with JSON/CSV output.
//!
//! Exit codes: 0 success, 1 bad parameters or input, 2 a checked inequality
//! failed, 64 usage error.

mod input;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use limfourier::kfunc::{
    interp_norm_est, interp_norm_lr_est, k_curve, k_exact, k_proxy, k_transform_check, Couple, Operator, ThetaParams,
};
use limfourier::lognorm::{
    limiting_function_norm_est, limiting_sequence_norm_est, lz_function_norm_est, lz_sequence_norm, LZParams,
    LimParams, Side,
};
use limfourier::measure::{head_energy, prefix_sq, rearrange_function, rearrange_sequence, suffix_sq, tail_energy};
use limfourier::ons::{endpoint_norms, forward, inverse, make_system, SystemKind};
use limfourier::quadrature::QuadratureSpec;
use limfourier::verify::{
    g_factor, iso_ratio, preset, run_campaign, verify_embedding, verify_lemma22, verify_thm11, verify_thm12, Branch,
    CampaignBundle, CampaignConfig, EmbeddingStatement, FamilyKind, FamilySpec, IsoStatement, OperatorKind,
    RatioReport, SampleFamily, DEFAULT_SEED,
};
use limfourier::{Error, Result};
use output::Format;
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "LIMFOURIER_THREADS";

const INPUT_HELP: &str = "\
INPUT LITERALS:
  functions   constant:<v>   chi:<s> (indicator of (0,s))   steps:[v1,v2,...] (uniform cells)
              steps:{\"breakpoints\":[...],\"values\":[...]}   [v1,v2,...]   {\"breakpoints\":...}
  sequences   [c1,c2,...]   unit:<m>   {\"entries\":[...]}
  values are numbers or [re, im] pairs; @path reads the literal from a file.
  q and p accept inf.

EXIT CODES:
  0 success, 1 bad parameters or input, 2 a checked inequality failed, 64 usage error.
  Threads: set LIMFOURIER_THREADS.";

/// Each operation of the engine and one command line that reaches it.
pub struct Operation {
    pub name: &'static str,
    pub argv: &'static [&'static str],
}

pub const OPERATIONS: &[Operation] = &[
    Operation {
        name: "rearrange_function",
        argv: &["norm", "--family", "rearrange-func", "--input", "[1,3,2]"],
    },
    Operation {
        name: "rearrange_sequence",
        argv: &["norm", "--family", "rearrange-seq", "--input", "[1,-3,2]"],
    },
    Operation {
        name: "head_energy",
        argv: &["norm", "--family", "head-energy", "--t", "0.5", "--input", "[1,3,2]"],
    },
    Operation {
        name: "tail_energy",
        argv: &["norm", "--family", "tail-energy", "--t", "0.5", "--input", "[1,3,2]"],
    },
    Operation {
        name: "prefix_sq",
        argv: &["norm", "--family", "prefix-sq", "--input", "[1,3,2]"],
    },
    Operation {
        name: "suffix_sq",
        argv: &["norm", "--family", "suffix-sq", "--input", "[1,3,2]"],
    },
    Operation {
        name: "lz_function_norm",
        argv: &[
            "norm", "--family", "lz-func", "--q", "1", "--alpha", "1", "--input", "chi:0.5",
        ],
    },
    Operation {
        name: "lz_sequence_norm",
        argv: &["norm", "--family", "lz-seq", "--input", "[3,4]"],
    },
    Operation {
        name: "limiting_function_norm",
        argv: &[
            "norm", "--family", "lim-func", "--q", "2", "--alpha", "-1", "--side", "R", "--input", "[2,1]",
        ],
    },
    Operation {
        name: "limiting_sequence_norm",
        argv: &[
            "norm", "--family", "lim-seq", "--q", "inf", "--alpha", "-1", "--side", "L", "--input", "[1,1]",
        ],
    },
    Operation {
        name: "k_exact",
        argv: &[
            "kfunc", "--mode", "exact", "--couple", "l2_l1", "--t", "0.5", "--input", "unit:1",
        ],
    },
    Operation {
        name: "k_proxy",
        argv: &[
            "kfunc", "--mode", "proxy", "--couple", "L1_L2", "--t", "0.5", "--input", "[1,2]",
        ],
    },
    Operation {
        name: "interp_norm",
        argv: &[
            "kfunc", "--mode", "interp", "--couple", "l2_l1", "--theta", "0", "--q", "inf", "--alpha", "0", "--input",
            "unit:1",
        ],
    },
    Operation {
        name: "interp_norm_lr",
        argv: &[
            "kfunc",
            "--mode",
            "interp-lr",
            "--couple",
            "l2_l1",
            "--theta",
            "0",
            "--q",
            "2",
            "--alpha",
            "0",
            "--side",
            "R",
            "--input",
            "unit:1",
        ],
    },
    Operation {
        name: "k_transform_check",
        argv: &[
            "kfunc",
            "--mode",
            "transform-check",
            "--system",
            "dft",
            "--n",
            "4",
            "--operator",
            "forward",
            "--t",
            "0.5",
            "--input",
            "[1,0,2,1]",
        ],
    },
    Operation {
        name: "make_system",
        argv: &["fourier", "--op", "system", "--system", "hadamard", "--n", "4"],
    },
    Operation {
        name: "forward",
        argv: &["fourier", "--system", "hadamard", "--n", "2", "--input", "constant:1"],
    },
    Operation {
        name: "inverse",
        argv: &[
            "fourier", "--op", "inverse", "--system", "dft", "--n", "4", "--input", "unit:2",
        ],
    },
    Operation {
        name: "endpoint_norms",
        argv: &[
            "fourier",
            "--op",
            "endpoint-norms",
            "--system",
            "givens_interpolated(0.5)",
            "--n",
            "8",
            "--samples",
            "10",
        ],
    },
    Operation {
        name: "g_factor",
        argv: &["verify", "g-factor", "--m", "4", "--gamma", "0.6"],
    },
    Operation {
        name: "verify_thm11",
        argv: &[
            "verify", "thm11", "--system", "dft", "--n", "8", "--q", "2", "--alpha", "-1", "--count", "1",
        ],
    },
    Operation {
        name: "verify_thm12",
        argv: &[
            "verify",
            "thm12",
            "--system",
            "hadamard",
            "--n",
            "8",
            "--q",
            "2",
            "--alpha",
            "0",
            "--epsilon",
            "0.1",
            "--count",
            "1",
        ],
    },
    Operation {
        name: "verify_lemma22",
        argv: &[
            "verify",
            "lemma22",
            "--operator",
            "forward",
            "--branch",
            "a",
            "--system",
            "dft",
            "--n",
            "8",
            "--q",
            "2",
            "--alpha",
            "-1",
            "--count",
            "1",
        ],
    },
    Operation {
        name: "iso_ratio",
        argv: &[
            "verify",
            "iso",
            "--statement",
            "lemma28_R_seq",
            "--n",
            "8",
            "--q",
            "2",
            "--alpha",
            "0.5",
            "--count",
            "1",
        ],
    },
    Operation {
        name: "verify_embedding",
        argv: &[
            "verify",
            "embedding",
            "--statement",
            "lemma212",
            "--n",
            "8",
            "--q",
            "2",
            "--alpha",
            "-1",
            "--count",
            "1",
        ],
    },
    Operation {
        name: "run_campaign",
        argv: &["campaign", "--preset", "smoke"],
    },
];

fn ext_real(s: &str) -> std::result::Result<f64, String> {
    limfourier::extreal::parse(s).ok_or_else(|| format!("not a number or inf: {s:?}"))
}

#[derive(Debug, Parser)]
#[command(name = "limfourier", version, about = "Limiting interpolation norms, K-functionals and Fourier maps on bounded orthonormal systems", after_help = INPUT_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for sample families and random inputs (default 7)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Target relative error of the log-variable quadrature.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Initial Gauss-Kronrod panels per piece.
    #[arg(long, global = true)]
    panels: Option<usize>,
    /// Depth, in e-folds, of numerically integrated tails.
    #[arg(long, global = true)]
    tail_cut: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quasi-norms, rearrangements and energy functionals.
    Norm(NormArgs),
    /// K-functionals, their proxies and interpolation norms.
    Kfunc(KfuncArgs),
    /// Coefficient map, synthesis map and system diagnostics.
    Fourier(FourierArgs),
    /// One verification report.
    Verify(VerifyArgs),
    /// A full campaign from a preset or a JSON configuration.
    Campaign(CampaignArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormFamily {
    LzFunc,
    LzSeq,
    LimFunc,
    LimSeq,
    RearrangeFunc,
    RearrangeSeq,
    HeadEnergy,
    TailEnergy,
    PrefixSq,
    SuffixSq,
}

#[derive(Debug, Args)]
struct NormArgs {
    #[arg(long, value_enum)]
    family: NormFamily,
    #[arg(long, value_parser = ext_real, default_value = "2", allow_negative_numbers = true)]
    p: f64,
    #[arg(long, value_parser = ext_real, default_value = "2", allow_negative_numbers = true)]
    q: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Inner exponent of the limiting norms.
    #[arg(long, value_parser = ext_real, default_value = "2", allow_negative_numbers = true)]
    r: f64,
    /// L or R, for the limiting norms.
    #[arg(long)]
    side: Option<Side>,
    /// Point for the energy functionals.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long)]
    input: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KMode {
    Exact,
    Proxy,
    Interp,
    InterpLr,
    TransformCheck,
}

#[derive(Debug, Args)]
struct KfuncArgs {
    #[arg(long, value_enum)]
    mode: KMode,
    /// L1_L2, L2_Linf, linf_l2 or l2_l1; transform-check derives it from the operator.
    #[arg(long)]
    couple: Option<Couple>,
    /// Single point; without it a geometric grid from --lo to --hi is used.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
    lo: f64,
    #[arg(long, default_value_t = 1e4, allow_negative_numbers = true)]
    hi: f64,
    /// Grid points per octave, in units of eight.
    #[arg(long, default_value_t = 1)]
    density: usize,
    #[arg(long, default_value_t = limfourier::kfunc::DEFAULT_TOL, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, value_parser = ext_real, default_value = "2", allow_negative_numbers = true)]
    q: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_parser = ext_real, default_value = "2", allow_negative_numbers = true)]
    r: f64,
    #[arg(long)]
    side: Option<Side>,
    #[arg(long)]
    system: Option<SystemKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    operator: Option<OperatorKind>,
    /// Endpoint norms; default to those of the operator.
    #[arg(long, allow_negative_numbers = true)]
    m0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m1: Option<f64>,
    #[arg(long)]
    input: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FourierOp {
    Forward,
    Inverse,
    System,
    EndpointNorms,
}

#[derive(Debug, Args)]
struct FourierArgs {
    #[arg(long, value_enum, default_value_t = FourierOp::Forward)]
    op: FourierOp,
    /// dft, hadamard, identity_like, random_unitary(<seed>), givens_interpolated(<lambda>).
    #[arg(long)]
    system: SystemKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    input: Option<String>,
    /// Random samples for endpoint-norms.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Include the matrix in the system description.
    #[arg(long)]
    matrix: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyKind {
    Thm11,
    Thm12,
    Lemma22,
    Iso,
    Embedding,
    GFactor,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    what: VerifyKind,
    #[arg(long, default_value = "dft")]
    system: SystemKind,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, value_parser = ext_real, default_value = "2", allow_negative_numbers = true)]
    q: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    #[arg(long)]
    branch: Option<Branch>,
    #[arg(long)]
    operator: Option<OperatorKind>,
    /// Statement for iso and embedding.
    #[arg(long)]
    statement: Option<String>,
    /// Sample families, comma separated; all kinds by default.
    #[arg(long, value_delimiter = ',')]
    families: Vec<FamilyKind>,
    /// Samples per family.
    #[arg(long, default_value_t = 8)]
    count: usize,
    #[arg(long, allow_negative_numbers = true)]
    m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
struct CampaignSource {
    /// paper-suite or smoke.
    #[arg(long)]
    preset: Option<String>,
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CampaignArgs {
    #[command(flatten)]
    source: CampaignSource,
    /// Directory for reports.json and summary.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// What a command produced: text for stdout and whether a checked
/// inequality failed.
struct Outcome {
    text: String,
    failures: Vec<String>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Self {
            text,
            failures: Vec::new(),
        }
    }
}

struct Ctx {
    seed: u64,
    seed_given: bool,
    format: Format,
    quad: QuadratureSpec,
    quad_overrides: (Option<f64>, Option<usize>, Option<f64>),
}

fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        if n > 0 {
            // a second call within one process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Runs one command line and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    configure_threads();
    match execute(cli) {
        Ok((outcome, path)) => {
            let written = match path {
                Some(p) => std::fs::write(&p, &outcome.text).map_err(Error::from),
                None => out.write_all(outcome.text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_DOMAIN;
            }
            if outcome.failures.is_empty() {
                EXIT_OK
            } else {
                for f in &outcome.failures {
                    let _ = writeln!(err, "violation: {f}");
                }
                EXIT_VERIFICATION
            }
        }
        Err(Error::Verification {
            statement,
            detail,
            sample,
        }) => {
            let _ = writeln!(err, "verification failure in {statement}: {detail}");
            if let Some(s) = sample {
                let _ = writeln!(
                    err,
                    "{}",
                    serde_json::to_string(&json!({ "sample": s })).unwrap_or_default()
                );
            }
            EXIT_VERIFICATION
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn execute(cli: Cli) -> Result<(Outcome, Option<PathBuf>)> {
    let mut quad = QuadratureSpec::default();
    if let Some(v) = cli.rel_tol {
        quad.rel_tol = v;
    }
    if let Some(v) = cli.panels {
        quad.panels_per_cell = v;
    }
    if let Some(v) = cli.tail_cut {
        quad.tail_cut = v;
    }
    quad.validate()?;
    let ctx = Ctx {
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        seed_given: cli.seed.is_some(),
        format: cli.format,
        quad,
        quad_overrides: (cli.rel_tol, cli.panels, cli.tail_cut),
    };
    let outcome = match cli.command {
        Command::Norm(a) => norm(&ctx, a)?.into(),
        Command::Kfunc(a) => kfunc(&ctx, a)?,
        Command::Fourier(a) => fourier(&ctx, a)?,
        Command::Verify(a) => verify(&ctx, a)?,
        Command::Campaign(a) => campaign(&ctx, a)?,
    };
    Ok((outcome, cli.output))
}

fn need_side(side: Option<Side>) -> Result<Side> {
    side.map_or_else(|| domain("limiting norms need --side L or R"), Ok)
}

fn need_t(t: Option<f64>) -> Result<f64> {
    t.map_or_else(|| domain("this family needs --t"), Ok)
}

fn norm(ctx: &Ctx, a: NormArgs) -> Result<String> {
    use NormFamily::*;
    let quad = &ctx.quad;
    Ok(match a.family {
        LzFunc => output::scalar(
            lz_function_norm_est(&input::function(&a.input)?, &LZParams::new(a.p, a.q, a.alpha)?, quad)?.value,
        ),
        LzSeq => output::scalar(lz_sequence_norm(
            &input::sequence(&a.input)?,
            &LZParams::new(a.p, a.q, a.alpha)?,
        )?),
        LimFunc => {
            let prm = LimParams::general(a.q, a.alpha, a.r, need_side(a.side)?, a.p)?;
            output::scalar(limiting_function_norm_est(&input::function(&a.input)?, &prm, quad)?.value)
        }
        LimSeq => {
            let prm = LimParams::general(a.q, a.alpha, a.r, need_side(a.side)?, a.p)?;
            output::scalar(limiting_sequence_norm_est(&input::sequence(&a.input)?, &prm, quad)?.value)
        }
        RearrangeFunc => {
            let g = rearrange_function(&input::function(&a.input)?);
            match ctx.format {
                Format::Json => output::json(&json!({ "breakpoints": g.breakpoints(), "values": g.values() }))?,
                Format::Csv => {
                    let bp = g.breakpoints();
                    output::table(&["a", "b", "value"], &[&bp[..bp.len() - 1], &bp[1..], g.values()])
                }
            }
        }
        RearrangeSeq => {
            let s = rearrange_sequence(&input::sequence(&a.input)?);
            match ctx.format {
                Format::Json => output::json(&s.entries())?,
                Format::Csv => {
                    let k: Vec<f64> = (1..=s.len()).map(|k| k as f64).collect();
                    output::table(&["k", "value"], &[&k, s.entries()])
                }
            }
        }
        HeadEnergy => output::scalar(head_energy(
            &rearrange_function(&input::function(&a.input)?),
            need_t(a.t)?,
        )?),
        TailEnergy => output::scalar(tail_energy(
            &rearrange_function(&input::function(&a.input)?),
            need_t(a.t)?,
        )?),
        PrefixSq | SuffixSq => {
            let s = rearrange_sequence(&input::sequence(&a.input)?);
            let v = if matches!(a.family, PrefixSq) {
                prefix_sq(&s)
            } else {
                suffix_sq(&s)
            };
            match ctx.format {
                Format::Json => output::json(&v)?,
                Format::Csv => {
                    let k: Vec<f64> = (0..v.len()).map(|k| k as f64).collect();
                    output::table(&["k", "value"], &[&k, &v])
                }
            }
        }
    })
}

fn grid(a: &KfuncArgs) -> Result<Vec<f64>> {
    if let Some(t) = a.t {
        return Ok(vec![t]);
    }
    if !(a.lo > 0.0 && a.hi > a.lo && a.hi.is_finite()) {
        return domain("grid needs 0 < lo < hi < inf");
    }
    Ok(limfourier::kfunc::geometric_grid(a.lo / a.hi, a.density)
        .into_iter()
        .map(|t| t * a.hi)
        .collect())
}

fn kfunc(ctx: &Ctx, a: KfuncArgs) -> Result<Outcome> {
    let quad = &ctx.quad;
    if let KMode::TransformCheck = a.mode {
        return transform_check(ctx, &a);
    }
    let couple = a.couple.map_or_else(|| domain("this mode needs --couple"), Ok)?;
    let x = input::element(&a.input, couple.is_function_couple())?;
    let text = match a.mode {
        KMode::Exact if a.t.is_some() => output::scalar(k_exact(couple, &x, a.t.unwrap_or_default(), a.tol)?),
        KMode::Exact => {
            let curve = k_curve(couple, &x, &grid(&a)?, a.tol)?;
            match ctx.format {
                Format::Json => output::json(&curve)?,
                Format::Csv => curve.to_csv(),
            }
        }
        KMode::Proxy if a.t.is_some() => output::scalar(k_proxy(couple, &x, a.t.unwrap_or_default())?),
        KMode::Proxy => {
            let ts = grid(&a)?;
            let proxy: Vec<f64> = ts.iter().map(|&t| k_proxy(couple, &x, t)).collect::<Result<_>>()?;
            let exact: Vec<f64> = ts
                .iter()
                .map(|&t| k_exact(couple, &x, t, a.tol))
                .collect::<Result<_>>()?;
            match ctx.format {
                Format::Json => output::json(&json!({ "t": ts, "proxy": proxy, "exact": exact }))?,
                Format::Csv => output::table(&["t", "proxy", "exact"], &[&ts, &proxy, &exact]),
            }
        }
        KMode::Interp => {
            let est = interp_norm_est(couple, &x, &ThetaParams::new(a.theta, a.q, a.alpha)?, quad)?;
            output::scalar(est.value)
        }
        KMode::InterpLr => {
            let side = need_side(a.side)?;
            output::scalar(interp_norm_lr_est(couple, &x, a.theta, a.q, a.alpha, a.r, side, quad)?.value)
        }
        KMode::TransformCheck => unreachable!(),
    };
    Ok(text.into())
}

fn transform_check(ctx: &Ctx, a: &KfuncArgs) -> Result<Outcome> {
    let (Some(kind), Some(n), Some(op)) = (a.system, a.n, a.operator) else {
        return domain("transform-check needs --system, --n and --operator");
    };
    let sys = make_system(kind, n)?;
    let op = match op {
        OperatorKind::Forward => Operator::Forward(sys),
        OperatorKind::Inverse => Operator::Inverse(sys),
    };
    let (src, dst, m0, m1) = op.natural_couples().expect("coefficient maps have natural couples");
    if a.couple.is_some_and(|c| c != src) {
        return domain(format!("the operator acts on {src}"));
    }
    let (m0, m1) = (a.m0.unwrap_or(m0), a.m1.unwrap_or(m1));
    let x = input::element(&a.input, src.is_function_couple())?;
    let ts = grid(a)?;
    let checks = ts
        .iter()
        .map(|&t| k_transform_check(&x, src, dst, &op, t, m0, m1, a.tol))
        .collect::<Result<Vec<_>>>()?;
    let failures = ts
        .iter()
        .zip(&checks)
        .filter(|(_, c)| !(c.holds_max && c.holds_scaled))
        .map(|(t, c)| {
            format!(
                "K inequality fails at t = {}: lhs {}",
                output::num(*t),
                output::num(c.lhs)
            )
        })
        .collect();
    let text = match ctx.format {
        Format::Json => output::json(
            &json!({ "couple_src": src, "couple_dst": dst, "m0": m0, "m1": m1, "t": ts, "checks": checks }),
        )?,
        Format::Csv => {
            let col = |f: fn(&limfourier::kfunc::TransformCheck) -> f64| checks.iter().map(f).collect::<Vec<f64>>();
            let (lhs, rmax, rscaled) = (col(|c| c.lhs), col(|c| c.rhs_max), col(|c| c.rhs_scaled));
            output::table(&["t", "lhs", "rhs_max", "rhs_scaled"], &[&ts, &lhs, &rmax, &rscaled])
        }
    };
    Ok(Outcome { text, failures })
}

fn fourier(ctx: &Ctx, a: FourierArgs) -> Result<Outcome> {
    let sys = make_system(a.system, a.n)?;
    let need_input = || {
        a.input
            .as_deref()
            .map_or_else(|| domain("this operation needs --input"), Ok)
    };
    Ok(match a.op {
        FourierOp::Forward => output::sequence(&forward(&input::function(need_input()?)?, &sys)?, ctx.format)?.into(),
        FourierOp::Inverse => output::function(&inverse(&input::sequence(need_input()?)?, &sys)?, ctx.format)?.into(),
        FourierOp::System => {
            let (k, j) = sys.argmax_entry();
            let mut desc = json!({
                "kind": sys.kind(),
                "label": sys.kind().label(),
                "n": sys.n(),
                "bound_m": sys.bound_m(),
                "unitarity_defect": sys.unitarity_defect(),
                "argmax_entry": [k, j],
            });
            if a.matrix {
                let rows: Vec<Vec<_>> = (0..sys.n())
                    .map(|k| (0..sys.n()).map(|j| sys.entry(k, j)).collect())
                    .collect();
                desc["matrix"] = json!(rows);
            }
            output::json(&desc)?.into()
        }
        FourierOp::EndpointNorms => {
            let rep = endpoint_norms(&sys, a.samples, ctx.seed)?;
            let failures = if rep.passed(1e-12) {
                Vec::new()
            } else {
                vec![format!("endpoint bounds fail for {}", rep.system)]
            };
            Outcome {
                text: output::json(&rep)?,
                failures,
            }
        }
    })
}

fn report_outcome(rep: RatioReport, fmt: Format) -> Result<Outcome> {
    let failures = rep
        .violations
        .iter()
        .map(|v| format!("{} {}: {}", rep.statement, v.label, v.detail))
        .collect();
    let text = match fmt {
        Format::Json => output::json(&rep)?,
        Format::Csv => CampaignBundle {
            seed: 0,
            reports: vec![rep],
        }
        .summary_csv(),
    };
    Ok(Outcome { text, failures })
}

fn families(ctx: &Ctx, a: &VerifyArgs) -> Result<Vec<SampleFamily>> {
    let kinds = if a.families.is_empty() {
        FamilyKind::ALL.to_vec()
    } else {
        a.families.clone()
    };
    let cfg = CampaignConfig {
        family: FamilySpec { kinds, count: a.count },
        seed: ctx.seed,
        ..CampaignConfig::default()
    };
    cfg.families_at(a.n)
}

fn verify(ctx: &Ctx, a: VerifyArgs) -> Result<Outcome> {
    let quad = &ctx.quad;
    let statement = || {
        a.statement
            .as_deref()
            .map_or_else(|| domain("this check needs --statement"), Ok)
    };
    let rep = match a.what {
        VerifyKind::GFactor => {
            let (Some(m), Some(gamma)) = (a.m, a.gamma) else {
                return domain("g-factor needs --m and --gamma");
            };
            return Ok(output::scalar(g_factor(m, gamma)?).into());
        }
        VerifyKind::Thm11 => verify_thm11(&make_system(a.system, a.n)?, &families(ctx, &a)?, a.q, a.alpha, quad)?,
        VerifyKind::Thm12 => {
            let eps = a.epsilon.map_or_else(|| domain("thm12 needs --epsilon"), Ok)?;
            verify_thm12(
                &make_system(a.system, a.n)?,
                &families(ctx, &a)?,
                a.q,
                a.alpha,
                eps,
                quad,
            )?
        }
        VerifyKind::Lemma22 => {
            let (Some(op), Some(branch)) = (a.operator, a.branch) else {
                return domain("lemma22 needs --operator and --branch");
            };
            let eps = match (branch, a.epsilon) {
                (Branch::B, None) => return domain("branch b needs --epsilon"),
                (_, e) => e.unwrap_or(0.0),
            };
            let sys = make_system(a.system, a.n)?;
            verify_lemma22(op, &sys, branch, a.q, a.alpha, eps, &families(ctx, &a)?, quad)?
        }
        VerifyKind::Iso => iso_ratio(
            statement()?.parse::<IsoStatement>()?,
            &families(ctx, &a)?,
            a.q,
            a.alpha,
            quad,
        )?,
        VerifyKind::Embedding => {
            let st = statement()?.parse::<EmbeddingStatement>()?;
            verify_embedding(st, &families(ctx, &a)?, a.q, a.alpha, quad)?
        }
    };
    report_outcome(rep, ctx.format)
}

fn campaign(ctx: &Ctx, a: CampaignArgs) -> Result<Outcome> {
    let mut cfg = match (&a.source.preset, &a.source.config) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => serde_json::from_str::<CampaignConfig>(&std::fs::read_to_string(path)?)?,
        (None, None) => return domain("campaign needs --preset or --config"),
    };
    if ctx.seed_given {
        cfg.seed = ctx.seed;
    }
    let (rel_tol, panels, tail_cut) = ctx.quad_overrides;
    if rel_tol.is_some() || panels.is_some() || tail_cut.is_some() {
        cfg.quad = ctx.quad;
    }
    let bundle = run_campaign(&cfg)?;
    let text = match &a.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let reports = dir.join("reports.json");
            let summary = dir.join("summary.csv");
            std::fs::write(&reports, output::json(&bundle)?)?;
            std::fs::write(&summary, bundle.summary_csv())?;
            format!("{}\n{}\n", reports.display(), summary.display())
        }
        None => match ctx.format {
            Format::Json => output::json(&bundle)?,
            Format::Csv => bundle.summary_csv(),
        },
    };
    Ok(text.into())
}
