use std::process::{Command, Output};

use serde_json::Value;

fn monolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monolab"))
        .args(args)
        .env_remove("MONOLAB_DIM_CAP")
        .output()
        .expect("spawn monolab")
}

fn json_ok(args: &[&str]) -> Value {
    let out = monolab(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn analyze_w3_concurrence() {
    let v = json_ok(&["analyze", "--state", "named:W3", "--measure", "concurrence"]);
    assert!((v["mu"].as_f64().unwrap() - 0.41421356).abs() < 1e-8);
    assert_eq!(v["region"], "YELLOW");
    assert_eq!(v["provenance"]["e_ab"], "wootters");
}

#[test]
fn analyze_ghz_tangle_is_degenerate() {
    let v = json_ok(&["analyze", "--state", "named:GHZ3", "--measure", "tangle"]);
    assert_eq!(v["region"], "DEGENERATE_TRIVIAL");
    assert_eq!(v["mu"], "inf");
}

#[test]
fn analyze_qutrit_with_quoted_pairs() {
    let v = json_ok(&[
        "analyze",
        "--state",
        "named:QUTRIT_ANTISYM",
        "--measure",
        "concurrence",
        "--pair-override",
        "1",
        "1",
    ]);
    assert_eq!(v["alpha_min_integer"], 5);
    assert_eq!(v["provenance"]["e_ab"], "override");
    assert_eq!(v["provenance"]["e_total"], "pure_spectrum");
    let t = json_ok(&[
        "analyze",
        "--state",
        "named:QUTRIT_ANTISYM",
        "--measure",
        "tangle",
        "--pair-override",
        "1",
        "1",
    ]);
    assert!((t["mu"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(t["region"], "YELLOW");
}

#[test]
fn dispatch_failure_exit_code_and_json() {
    let out = monolab(&[
        "analyze",
        "--state",
        "named:QUTRIT_ANTISYM",
        "--measure",
        "tangle",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let e = stderr_json(&out);
    assert_eq!(e["error"], "dispatch_error");
    assert!(out.stdout.is_empty());
}

#[test]
fn input_errors_exit_two() {
    let out = monolab(&["analyze", "--state", "named:NOPE"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "input_error");
    assert_eq!(
        monolab(&["analyze", "--state", "named:W3", "--measure", "entropy"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        monolab(&["analyze", "--state", "named:W3", "--alpha", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        monolab(&["analyze", "--state", "@/nonexistent/state.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn dim_cap_env() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_monolab"))
            .args([
                "analyze",
                "--state",
                "power:2:named:W3",
                "--measure",
                "negativity",
            ])
            .env("MONOLAB_DIM_CAP", cap)
            .output()
            .unwrap()
    };
    assert_eq!(run("32").status.code(), Some(3));
    assert!(run("64").status.success());
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn state_from_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("w.json");
    std::fs::write(&state, r#"{"kind":"schmidt","lambda":[0.5,0,0.5,0.5,0.5]}"#).unwrap();
    let out_path = dir.path().join("report.json");
    let out = monolab(&[
        "analyze",
        "--state",
        &format!("@{}", state.display()),
        "--measure",
        "tangle",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    // λ3 = λ4 gives μ_τ = 2
    assert!((v["mu"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert_eq!(v["state"]["kind"], "schmidt");
}

#[test]
fn unwritable_output() {
    let out = monolab(&[
        "analyze",
        "--state",
        "named:W3",
        "--output",
        "/nonexistent/dir/out.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schmidt_sweep_header_and_w_slice() {
    let out = monolab(&[
        "sweep",
        "--resolution",
        "8",
        "--measure",
        "tangle",
        "--canonical",
        "--w-slice",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(
        rows[0].join(","),
        "lambda0,lambda1,lambda2,lambda3,lambda4,phi,e_total,e_ab,e_ac,x1,x2,mu,region,alpha_min"
    );
    let mut finite = 0;
    for r in &rows[1..] {
        assert_eq!(r[4], "0");
        if let Ok(mu) = r[11].parse::<f64>() {
            if mu.is_finite() {
                assert!((mu - 1.0).abs() < 1e-8, "{r:?}");
                finite += 1;
            }
        }
    }
    assert!(finite > 0);
}

#[test]
fn empty_grid_is_header_only() {
    let out = monolab(&["sweep", "--resolution", "0"]);
    assert!(out.status.success());
    assert_eq!(csv_rows(&out).len(), 1);
    let out = monolab(&["sweep", "--kind", "haar", "--samples", "0"]);
    assert_eq!(csv_rows(&out).len(), 1);
}

#[test]
fn haar_tangle_sweep_is_blue() {
    let out = monolab(&[
        "sweep",
        "--kind",
        "haar",
        "--samples",
        "1000",
        "--measure",
        "tangle",
        "--seed",
        "9",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1001);
    for r in &rows[1..] {
        let mu = r[6].as_str();
        assert!(
            mu == "inf" || mu.parse::<f64>().unwrap() >= 1.0 - 1e-9,
            "{r:?}"
        );
        assert!(r[7] == "BLUE" || r[7] == "DEGENERATE_TRIVIAL");
    }
}

#[test]
fn sweeps_are_byte_identical() {
    let args = ["sweep", "--kind", "haar", "--samples", "200", "--seed", "4"];
    assert_eq!(monolab(&args).stdout, monolab(&args).stdout);
    let args = ["sweep", "--resolution", "6", "--phi", "0.7"];
    assert_eq!(monolab(&args).stdout, monolab(&args).stdout);
}

#[test]
fn copies_w3_and_product() {
    let v = json_ok(&["copies", "--state", "named:W3"]);
    assert_eq!(v["paper_w_formula"]["m_min"], 4);
    assert_eq!(v["ratio_lm"]["m_min"], 2);
    assert_eq!(v["oracle_negativity"]["model"], "ORACLE_NEGATIVITY");
    let p = json_ok(&["copies", "--state", "named:PRODUCT(3)"]);
    assert_eq!(p["ratio_lm"]["m_min"], 1);
    assert_eq!(p["oracle_negativity"]["m_min"], 1);
    assert!(p["paper_w_formula"].is_null());
}

#[test]
fn copies_within_small_dim_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_monolab"))
        .args(["copies", "--state", "named:W3", "--measure", "negativity"])
        .env("MONOLAB_DIM_CAP", "8")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    // ρ_AB is 4×4 at m = 1 and W3 itself is 8-dimensional; m = 2 would need 64
    assert_eq!(v["oracle_negativity"]["m_min"], 1);
}

#[test]
fn chain_examples() {
    let w4 = json_ok(&["chain", "--state", "named:W(4)", "--measure", "negativity"]);
    assert_eq!(w4["holds"], true);
    assert_eq!(w4["levels"].as_array().unwrap().len(), 2);
    assert!(w4["bound_rhs"].as_f64().unwrap() <= w4["e_total"].as_f64().unwrap() + 1e-8);
    let ghz = json_ok(&[
        "chain",
        "--state",
        "named:GHZ_CLASS(4;sqrt(0.5),sqrt(0.5))",
        "--measure",
        "tangle",
    ]);
    assert_eq!(ghz["bound_rhs"], 0.0);
    assert_eq!(ghz["holds"], true);
    let w3 = json_ok(&["chain", "--state", "named:W3", "--measure", "concurrence"]);
    assert_eq!(w3["levels"].as_array().unwrap().len(), 1);
    let out = monolab(&["chain", "--state", "haar:2x2x2x2:1", "--measure", "tangle"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_json(&out)["message"]
        .as_str()
        .unwrap()
        .contains("level 2"));
}

#[test]
fn verify_filter_and_tampering() {
    let out = monolab(&["verify", "--filter", "copies"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with("summary")).collect();
    assert!(!rows.is_empty());
    assert!(rows
        .iter()
        .all(|l| l.split_whitespace().nth(1).unwrap().starts_with("copies/")));

    let tampered = monolab(&[
        "verify",
        "--filter",
        "copies",
        "--override-tol",
        "w-formula-m1-global=-1",
    ]);
    assert_eq!(tampered.status.code(), Some(4));
    assert!(String::from_utf8(tampered.stdout)
        .unwrap()
        .contains("FAIL copies/w-formula-m1-global"));

    assert_eq!(
        monolab(&["verify", "--filter", "nothing"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_full_suite() {
    let out = monolab(&["verify", "--format", "json"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.len() >= 12);
    assert_eq!(v["failed"], 0);
    assert!(rows
        .iter()
        .any(|r| r["status"] == "INFO" && r["group"] == "qutrit"));
}
