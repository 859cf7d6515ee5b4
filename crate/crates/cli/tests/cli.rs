use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crouzeix-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn reports(dir: &Path) -> BTreeMap<u64, String> {
    let mut out = BTreeMap::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        let name = p.file_name().unwrap().to_str().unwrap().to_string();
        if name.ends_with(".json") && name != "manifest.json" && !name.contains(".pair") {
            let text = std::fs::read_to_string(&p).unwrap();
            let v: Value = serde_json::from_str(&text).unwrap();
            out.insert(v["seed"].as_u64().unwrap(), text);
        }
    }
    out
}

fn out_arg(dir: &tempfile::TempDir) -> String {
    dir.path().to_str().unwrap().to_string()
}

#[test]
fn cp_check_on_nilpotent_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = lab(&[
        "run", "--experiment", "cp-check", "--generator", "nilpotent2:2", "--domain", "disk:0,1.001",
        "--seeds", "1..10", "--out", &out_arg(&tmp),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dir = tmp.path().join("cp-check");
    let rs = reports(&dir);
    assert_eq!(rs.len(), 10);
    for text in rs.values() {
        let v: Value = serde_json::from_str(text).unwrap();
        assert_eq!(v["schema"], 1);
        assert!(v["pass"].as_bool().unwrap());
        assert!(v["margin"].as_f64().unwrap() >= -1e-6);
        assert!(v.get("runtime_ms").is_none());
    }
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["config_digest"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["reports"].as_array().unwrap().len(), 10);
    let csv = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("cp-check,10,10,0,0,"));
}

#[test]
fn block_lemma_sweep_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = lab(&["block-lemma", "--seeds", "1..100", "--out", &out_arg(&tmp)]);
    assert_eq!(code(&o), 0);
    assert_eq!(reports(&tmp.path().join("block-lemma")).len(), 100);
    assert!(String::from_utf8_lossy(&o.stdout).contains("100/100"));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = lab(&["basic-bound", "--generator", "ginibre:3", "--seeds", "0..3", "--budget", "3", "--out", &out_arg(d)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ra, rb) = (reports(&a.path().join("basic-bound")), reports(&b.path().join("basic-bound")));
    assert_eq!(ra.len(), 4);
    assert_eq!(ra, rb);
}

#[test]
fn malformed_matrix_is_an_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    let m = tmp.path().join("bad.json");
    std::fs::write(&m, r#"{"dim": 2, "re": [[1, 0]], "im": [[0, 0], [0, 0]]}"#).unwrap();
    let out = tmp.path().join("results");
    let o = lab(&["cp-check", "--matrix", m.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
    let o = lab(&["cp-check", "--matrix", "/nonexistent.json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn matrix_file_is_used_verbatim() {
    let tmp = tempfile::tempdir().unwrap();
    let m = tmp.path().join("t.json");
    std::fs::write(&m, r#"{"dim": 2, "re": [[0, 2], [0, 0]], "im": [[0, 0], [0, 0]]}"#).unwrap();
    let o = lab(&["okubo-ando", "--matrix", m.to_str().unwrap(), "--out", &out_arg(&tmp)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rs = reports(&tmp.path().join("okubo-ando"));
    let v: Value = serde_json::from_str(&rs[&0]).unwrap();
    assert_eq!(v["inputs"]["rescaled_by"], Value::Null);
    assert!((v["lhs"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    // ρ = 1 does not hold and a file matrix is never rescaled
    let o = lab(&["okubo-ando", "--matrix", m.to_str().unwrap(), "--rho", "1", "--out", &out_arg(&tmp)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_experiment_prints_usage() {
    let o = lab(&["frobnicate", "--seeds", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = lab(&["run", "--experiment", "frobnicate"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn failing_reports_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    // a negative tolerance demands strict slack, which the saturating instance lacks
    let o = lab(&[
        "cp-check", "--generator", "nilpotent2:2", "--domain", "disk:0,1.001", "--seeds", "0..1",
        "--tol", "cp-check=-1e-3", "--no-plots", "--out", &out_arg(&tmp),
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    std::fs::write(
        &cfg,
        "experiment = \"xtx\"\ngenerator = \"nilpotent2:2\"\nseeds = [1, 2, 3]\nout = \"res\"\n",
    )
    .unwrap();
    let o = lab(&["run", "--config", cfg.to_str().unwrap(), "--seeds", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rs = reports(&tmp.path().join("res").join("xtx"));
    assert_eq!(rs.keys().copied().collect::<Vec<_>>(), vec![7]);
    std::fs::write(&cfg, "experiment = \"xtx\"\ncolour = 3\n").unwrap();
    assert_eq!(code(&lab(&["run", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn plots_are_svg() {
    let tmp = tempfile::tempdir().unwrap();
    let o = lab(&["basic-bound", "--seeds", "4", "--budget", "2", "--out", &out_arg(&tmp)]);
    assert_eq!(code(&o), 0);
    let dir = tmp.path().join("basic-bound");
    let svg = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "svg"))
        .unwrap();
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<?xml"));
    assert!(text.contains(r#"version="1.1""#) && text.contains("xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(text.trim_end().ends_with("</svg>"));
    assert!(text.contains("<title>basic-bound seed 4"));
    assert!(text.contains("<line"), "witness heat line present");
    assert_eq!(text.matches("<svg").count(), 1);
}

#[test]
fn summary_examples() {
    let tmp = tempfile::tempdir().unwrap();
    let o = lab(&["summary", &out_arg(&tmp)]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 1);

    let o = lab(&["cp-check", "--generator", "ginibre:3", "--seeds", "1..10", "--no-plots", "--out", &out_arg(&tmp)]);
    assert_eq!(code(&o), 0);
    let dir = tmp.path().join("cp-check");
    let first = dir.read_dir().unwrap().map(|e| e.unwrap().path()).filter(|p| p.to_str().unwrap().ends_with("-1.json")).next().unwrap();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    v["pass"] = Value::Bool(false);
    v["outcome"] = Value::String("fail".into());
    std::fs::write(&first, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = lab(&["summary", &out_arg(&tmp)]);
    assert_eq!(code(&o), 0);
    let table = String::from_utf8_lossy(&o.stdout).to_string();
    assert!(table.contains("9/10"), "{table}");
    let csv = std::fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    assert!(csv.contains("cp-check,10,9,1,"));

    v["schema"] = Value::from(2);
    std::fs::write(dir.join("other.json"), serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&lab(&["summary", &out_arg(&tmp)])), 2);
}

#[test]
fn dilate_writes_pair_files() {
    let tmp = tempfile::tempdir().unwrap();
    let o = lab(&["dilate", "--generator", "ginibre:2", "--seeds", "3", "--order", "3", "--out", &out_arg(&tmp)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dir = tmp.path().join("dilate");
    let stem = dir
        .read_dir()
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .find(|n| n.ends_with(".pair.json"))
        .unwrap();
    assert!(dir.join(stem.replace(".pair.json", ".pair.U.json")).is_file());
    let pair = dir.join(stem.trim_end_matches(".json"));
    let o = lab(&["equiv", "--pair", pair.to_str().unwrap(), "--out", &out_arg(&tmp)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}
