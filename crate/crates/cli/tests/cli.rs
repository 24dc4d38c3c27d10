use limfourier_cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, OPERATIONS};
use std::process::Command;

fn call(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("limfourier").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const ENGINE_OPS: &[&str] = &[
    "rearrange_function",
    "rearrange_sequence",
    "head_energy",
    "tail_energy",
    "prefix_sq",
    "suffix_sq",
    "lz_function_norm",
    "lz_sequence_norm",
    "limiting_function_norm",
    "limiting_sequence_norm",
    "k_exact",
    "k_proxy",
    "interp_norm",
    "interp_norm_lr",
    "k_transform_check",
    "make_system",
    "forward",
    "inverse",
    "endpoint_norms",
    "g_factor",
    "verify_thm11",
    "verify_thm12",
    "verify_lemma22",
    "iso_ratio",
    "verify_embedding",
    "run_campaign",
];

#[test]
fn every_operation_is_reachable() {
    for name in ENGINE_OPS {
        assert!(
            OPERATIONS.iter().any(|op| op.name == *name),
            "{name} has no command line"
        );
    }
    for op in OPERATIONS {
        let (code, out, err) = call(op.argv);
        assert_eq!(code, EXIT_OK, "{}: {err}", op.name);
        assert!(!out.trim().is_empty(), "{} printed nothing", op.name);
    }
}

#[test]
fn l2_norm_of_three_four() {
    let (code, out, _) = call(&[
        "norm", "--family", "lz-seq", "--p", "2", "--q", "2", "--alpha", "0", "--input", "[3,4]",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "5.0\n");
}

#[test]
fn hadamard_of_a_constant() {
    let (code, out, _) = call(&[
        "fourier",
        "--system",
        "hadamard",
        "--n",
        "2",
        "--input",
        "constant:1",
        "--format",
        "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "k,re,im\n1,1.0,0.0\n2,0.0,0.0\n");
    let (_, json, _) = call(&["fourier", "--system", "hadamard", "--n", "2", "--input", "constant:1"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["entries"], serde_json::json!([[1.0, 0.0], [0.0, 0.0]]));
}

#[test]
fn campaign_output_is_deterministic() {
    let a = call(&["campaign", "--preset", "smoke", "--seed", "7"]);
    let b = call(&["campaign", "--preset", "smoke", "--seed", "7"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, b.1);
    let c = call(&["campaign", "--preset", "smoke", "--seed", "8"]);
    assert_ne!(a.1, c.1);
    let default = call(&["campaign", "--preset", "smoke"]);
    assert_eq!(a.1, default.1);
}

#[test]
fn campaign_writes_its_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let (code, _, err) = call(&["campaign", "--preset", "smoke", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let reports: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("reports.json")).unwrap()).unwrap();
    assert!(!reports["reports"].as_array().unwrap().is_empty());
    let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(csv.starts_with("statement,q,alpha,N,system,M,min_ratio,max_ratio\n"));
    assert_eq!(csv.lines().count(), reports["reports"].as_array().unwrap().len() + 1);
}

#[test]
fn campaign_reads_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let (_, preset, _) = call(&["campaign", "--preset", "smoke"]);
    let config = dir.path().join("c.json");
    std::fs::write(
        &config,
        serde_json::to_string(&limfourier::verify::preset("smoke").unwrap()).unwrap(),
    )
    .unwrap();
    let (code, out, err) = call(&["campaign", "--config", config.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out, preset);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.csv");
    let args = [
        "kfunc", "--mode", "exact", "--couple", "l2_l1", "--lo", "0.01", "--hi", "100", "--input", "unit:1",
    ];
    let (_, stdout, _) = call(&[&args[..], &["--format", "csv"]].concat());
    let (code, quiet, _) = call(&[&args[..], &["--format", "csv", "-o", path.to_str().unwrap()]].concat());
    assert_eq!(code, EXIT_OK);
    assert!(quiet.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
    assert!(stdout.starts_with("t,"));
    // K(t, e₁; l₂, l₁) = min(1, t)
    for line in stdout.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[1] - cols[0].min(1.0)).abs() < 1e-9, "{line}");
    }
}

#[test]
fn bad_parameters_exit_one() {
    for args in [
        &["norm", "--family", "lz-func", "--p", "-1", "--input", "constant:1"][..],
        &["norm", "--family", "lz-seq", "--input", "[1,"],
        &["fourier", "--system", "hadamard", "--n", "3", "--input", "constant:1"],
        &["verify", "g-factor", "--m", "0.5", "--gamma", "1"],
        &[
            "verify", "thm11", "--q", "2", "--alpha", "0.5", "--count", "1", "--n", "8",
        ],
        &["norm", "--family", "lz-func", "--input", "@/definitely/missing"],
    ] {
        let (code, out, err) = call(args);
        assert_eq!(code, EXIT_DOMAIN, "{args:?}: {out}{err}");
        assert!(err.starts_with("error:"), "{args:?}: {err}");
    }
}

#[test]
fn violated_inequality_exits_two() {
    let (code, out, err) = call(&[
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
        "--m0",
        "0.01",
        "--m1",
        "0.01",
        "--input",
        "[1,0,2,1]",
    ]);
    assert_eq!(code, EXIT_VERIFICATION);
    assert!(out.contains("\"holds_max\": false"));
    assert!(err.contains("violation"));
}

#[test]
fn usage_errors_exit_sixty_four() {
    assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(
        call(&["norm", "--family", "lz-seq", "--input", "[1]", "--frobnicate"]).0,
        EXIT_USAGE
    );
    assert_eq!(call(&["norm", "--input", "[1]"]).0, EXIT_USAGE);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("constant:<v>") && out.contains("LIMFOURIER_THREADS"));
    assert!(out.contains(&format!("(default {})", limfourier::verify::DEFAULT_SEED)));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_limfourier");
    let ok = Command::new(bin)
        .args(["verify", "g-factor", "--m", "4", "--gamma", "0.5"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let g: f64 = String::from_utf8(ok.stdout).unwrap().trim().parse().unwrap();
    assert_eq!(g, limfourier::verify::g_factor(4.0, 0.5).unwrap());
    let usage = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    let threads = Command::new(bin)
        .env("LIMFOURIER_THREADS", "2")
        .args(["campaign", "--preset", "smoke"])
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(EXIT_OK));
    let (_, inproc, _) = call(&["campaign", "--preset", "smoke"]);
    assert_eq!(String::from_utf8(threads.stdout).unwrap(), inproc);
}
