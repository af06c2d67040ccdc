use std::process::Command;

use serde_json::Value;

fn livsic(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_livsic"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = livsic(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: stdout={out} stderr={err}"));
    (code, v)
}

#[test]
fn model_at_2i() {
    let (code, v) = json(&["model", "--length", "1", "--eval", "0+2i"]);
    assert_eq!(code, 0);
    let s = v["s"]["re"].as_f64().unwrap();
    assert!((s - 0.244_728_471_054_797_7).abs() < 1e-15);
    assert!((v["S"]["re"].as_f64().unwrap() - (-2.0f64).exp()).abs() < 1e-15);
    assert!((v["kappa"]["re"].as_f64().unwrap() - (-1.0f64).exp()).abs() < 1e-16);
}

#[test]
fn couple_nunu_passes() {
    let (code, v) = json(&[
        "couple", "--kappa1", "0.5", "--kappa2", "0.5", "--grid", "default", "--check", "nunu",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["sweep"]["points"].as_array().unwrap().len(), 442);
}

#[test]
fn unnormalized_measure_fails_check() {
    let (code, v) = json(&["measure", "--atoms", "0:1", "--check-normalization"]);
    assert_eq!(code, 0);
    assert_eq!(v["defect"].as_f64(), Some(0.0));
    let (code, v) = json(&["measure", "--atoms", "1:1", "--check", "normalization"]);
    assert_eq!(code, 1);
    assert!((v["defect"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn class_verdicts_set_exit_code() {
    let (code, v) = json(&["check-class", "--length", "2"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("ConsistentWithC")));
    let (code, _) = json(&["check-class", "--atoms", "0:1"]);
    assert_eq!(code, 1);
}

#[test]
fn csv_sweep() {
    let (code, out, _) = livsic(&[
        "model", "--length", "1", "--grid", "default", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("re,im,f_re,f_im"));
    assert_eq!(lines.count(), 442);
}

#[test]
fn grid_file() {
    let dir = std::env::temp_dir().join(format!("livsic-grid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.json");
    std::fs::write(
        &path,
        r#"{"points": [{"re": 0.0, "im": 1.0}, {"re": 1.0, "im": 0.5}], "description": "two"}"#,
    )
    .unwrap();
    let arg = format!("file:{}", path.display());
    let (code, v) = json(&[
        "multiply", "--length", "1", "--length", "2", "--grid", &arg, "--check", "nunu",
    ]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["sweep"]["points"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors() {
    for args in [
        &["model", "--length", "0"][..],
        &["model", "--length", "1", "--eval", "0-1i"],
        &["couple", "--kappa1", "0.5"],
        &["measure", "--atoms", "0:-1"],
        &[
            "add", "--alpha", "0.3", "--atoms", "0:1", "--atoms", "1:2", "--atoms", "2:5",
        ],
        &["frobnicate"],
    ] {
        let (code, _, err) = livsic(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "couple", "--kappa1", "0.3", "--kappa2", "0.7", "--length", "0.5", "--length", "2",
        "--grid", "default",
    ];
    assert_eq!(livsic(&args).1, livsic(&args).1);
}

#[test]
fn verify_all_passes() {
    let (code, v) = json(&["verify-all"]);
    assert_eq!(code, 0);
    assert_eq!(v["all_pass"], Value::Bool(true));
}
