use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn bin() -> Command {
    Command::cargo_bin("secondkind").unwrap()
}

fn json_output(args: &[&str], code: i32) -> Value {
    let out = bin()
        .args(args)
        .assert()
        .code(code)
        .get_output()
        .stdout
        .clone();
    serde_json::from_slice(&out).expect("stdout is JSON")
}

/// Compares against `tests/golden/<name>` with the timing block removed.
/// Set `UPDATE_GOLDEN=1` to rewrite the file.
fn golden(name: &str, args: &[&str]) {
    let mut v = json_output(args, 0);
    v.as_object_mut().unwrap().remove("timing");
    let text = serde_json::to_string_pretty(&v).unwrap() + "\n";
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, want, "golden mismatch for {name}");
}

#[test]
fn golden_spectrum_cp1xcp1() {
    golden(
        "spectrum_cp1xcp1.json",
        &["spectrum", fixture("cp1xcp1.json").to_str().unwrap()],
    );
}

#[test]
fn golden_classify_line() {
    golden(
        "classify_s3xr_line.json",
        &[
            "classify",
            fixture("s3xr.json").to_str().unwrap(),
            "--alpha",
            "line",
        ],
    );
}

#[test]
fn golden_threshold_cp2() {
    golden(
        "threshold_cp2.json",
        &["threshold", fixture("cp2.json").to_str().unwrap()],
    );
}

#[test]
fn spectrum_clusters_cp1xcp1() {
    let v = json_output(&["spectrum", fixture("cp1xcp1.json").to_str().unwrap()], 0);
    let clusters: Vec<(f64, u64)> = v["clusters"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["value"].as_f64().unwrap(),
                c["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect();
    let want = [(-4.0, 1), (0.0, 4), (4.0, 4)];
    assert_eq!(clusters.len(), 3);
    for ((a, k), (b, l)) in clusters.iter().zip(want) {
        assert!((a - b).abs() < 1e-9);
        assert_eq!(*k, l);
    }
    let total: u64 = clusters.iter().map(|c| c.1).sum();
    assert_eq!(total, v["N"].as_u64().unwrap());
    assert_eq!(v["closed_form"]["matches"], Value::Bool(true));
}

#[test]
fn classify_resolves_symbolic_alphas() {
    let v = json_output(
        &[
            "classify",
            fixture("s3xr.json").to_str().unwrap(),
            "--alpha",
            "line",
            "--alpha",
            "A",
        ],
        0,
    );
    assert_eq!(v["verdicts"][0]["alpha"], 4.5);
    assert_eq!(v["verdicts"][0]["verdict"], "nonnegative");
    assert_eq!(v["verdicts"][1]["alpha"], 4.5);
    let v = json_output(
        &[
            "classify",
            fixture("h3xr.json").to_str().unwrap(),
            "--alpha",
            "line",
        ],
        0,
    );
    assert_eq!(v["verdicts"][0]["verdict"], "nonpositive");
    let v = json_output(
        &[
            "classify",
            fixture("s2xs3.json").to_str().unwrap(),
            "--alpha",
            "A",
        ],
        0,
    );
    assert_eq!(v["verdicts"][0]["verdict"], "nonnegative");
}

#[test]
fn symbolic_alpha_needs_matching_shape() {
    bin()
        .args([
            "classify",
            fixture("s2xs3.json").to_str().unwrap(),
            "--alpha",
            "B",
        ])
        .assert()
        .code(2);
    bin()
        .args([
            "classify",
            fixture("cp2.json").to_str().unwrap(),
            "--alpha",
            "nope",
        ])
        .assert()
        .code(2);
    bin()
        .args([
            "classify",
            fixture("cp2.json").to_str().unwrap(),
            "--alpha",
            "100",
        ])
        .assert()
        .code(2);
}

#[test]
fn validation_errors_exit_two_and_name_the_path() {
    let out = bin()
        .args(["spectrum", fixture("sphere_dim1.json").to_str().unwrap()])
        .assert()
        .code(2)
        .get_output()
        .stderr
        .clone();
    assert!(String::from_utf8(out).unwrap().contains("$.dim"));
    let out = bin()
        .args(["spectrum", fixture("bad_nested.json").to_str().unwrap()])
        .assert()
        .code(2)
        .get_output()
        .stderr
        .clone();
    assert!(String::from_utf8(out).unwrap().contains("$.factors[1].m"));
    bin()
        .args(["spectrum", "/nonexistent.json"])
        .assert()
        .code(2);
    bin().arg("bogus").assert().code(2);
}

#[test]
fn report_echo_round_trips() {
    let v = json_output(&["spectrum", fixture("s3xr.json").to_str().unwrap()], 0);
    let echoed = secondkind_cli::ManifoldDescriptor::parse(&v["input"].to_string()).unwrap();
    let original = secondkind_cli::load_descriptor(&fixture("s3xr.json")).unwrap();
    assert_eq!(echoed, original);
}

#[test]
fn examples_exit_zero_with_thirteen_blocks() {
    let v = json_output(&["examples"], 0);
    assert_eq!(v["families"].as_array().unwrap().len(), 13);
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn verify_line_is_consistent_and_deterministic() {
    let args = ["verify", "line", "--samples", "40", "--seed", "3"];
    let a = json_output(&args, 0);
    let b = json_output(&args, 0);
    assert_eq!(a, b);
    assert_eq!(a["verdict"], "consistent");
}

#[test]
fn verify_product_kahler_reports_violation() {
    let v = json_output(&["verify", "product-kahler", "--samples", "8"], 1);
    assert_eq!(v["verdict"], "violated");
}

#[test]
fn verify_product_structure() {
    let v = json_output(
        &[
            "verify",
            "product-structure",
            "--descriptor",
            fixture("s3xr.json").to_str().unwrap(),
        ],
        0,
    );
    assert_eq!(v["verdict"], "consistent");
    assert!((v["measurements"]["zeta_entry"].as_f64().unwrap() + 0.5).abs() < 1e-12);
    bin().args(["verify", "product-structure"]).assert().code(2);
}

#[test]
fn verify_iff_kahler_emits_findings() {
    let v = json_output(&["verify", "iff-kahler", "--kappas", "1,2"], 0);
    assert!(!v["findings"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_agrees_with_eigenvalue_sum() {
    let v = json_output(
        &[
            "oracle",
            fixture("s2xs3.json").to_str().unwrap(),
            "--alpha",
            "A",
            "--samples",
            "30",
        ],
        0,
    );
    assert_eq!(v["consistent"], Value::Bool(true));
    assert_eq!(v["samples"], 30);
}
