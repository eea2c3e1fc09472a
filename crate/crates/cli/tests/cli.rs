use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sleepscore"));
    c.env_remove("SLEEPSCORE_CACHE_DIR").env_remove("RUST_LOG");
    c
}

fn run(c: &mut Command) -> Output {
    let out = c.output().expect("binary runs");
    if !out.status.success() {
        eprintln!("stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    out
}

/// One synthetic cohort shared by every test.
fn data_dir() -> &'static Path {
    static DATA: OnceLock<(TempDir, PathBuf)> = OnceLock::new();
    let (_, dir) = DATA.get_or_init(|| {
        let tmp = TempDir::new().unwrap();
        let dir = tmp.path().join("data");
        let out = run(bin().args(["synth", "--subjects", "8", "--epochs", "160", "--out"]).arg(&dir));
        assert!(out.status.success());
        (tmp, dir)
    });
    dir
}

fn write_config(dir: &Path, extra: &str) -> PathBuf {
    let path = dir.join("cfg.json");
    let body = format!(
        r#"{{"data_dir": {:?}, "output_dir": {:?}, "pipeline": {{"n_trees": 15}}{extra}}}"#,
        data_dir(),
        dir.join("runs")
    );
    std::fs::write(&path, body).unwrap();
    path
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn synth_writes_pairs_and_manifest() {
    let dir = data_dir();
    let psg = std::fs::read_dir(dir)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().ends_with("-PSG.edf"))
        .count();
    assert_eq!(psg, 8);
    assert!(dir.join("manifest.json").is_file() && dir.join("profile.json").is_file());
}

#[test]
fn cascade_experiment_writes_reports() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "");
    let out = run(bin().args(["experiment", "cascade", "--svg", "--config"]).arg(&cfg));
    assert_eq!(out.status.code(), Some(0));
    let run_dir = tmp.path().join("runs/experiment-cascade");
    for f in ["report.json", "report.csv", "per_subject.csv", "report.svg", "manifest.json"] {
        assert!(run_dir.join(f).is_file(), "{f} missing");
    }
    let csv = String::from_utf8(read(&run_dir.join("report.csv"))).unwrap();
    assert!(csv.lines().count() >= 3, "{csv}");
    let report: serde_json::Value = serde_json::from_slice(&read(&run_dir.join("report.json"))).unwrap();
    assert!(report.is_object());
}

#[test]
fn rerun_is_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out_dir = tmp.path().join(format!("run{i}"));
        let out = run(bin().args(["train", "--no-cache", "--config"]).arg(&cfg).arg("--out").arg(&out_dir));
        assert!(out.status.success());
        outputs.push((read(&out_dir.join("manifest.json")), read(&out_dir.join("model.ssm"))));
    }
    assert_eq!(outputs[0], outputs[1]);
    let manifest: serde_json::Value = serde_json::from_slice(&outputs[0].0).unwrap();
    let listed: Vec<_> = manifest["outputs"].as_array().unwrap().iter().map(|o| o["path"].as_str().unwrap()).collect();
    assert!(listed.contains(&"model.ssm"), "{listed:?}");
    assert!(!String::from_utf8_lossy(&outputs[0].0).contains("timestamp"));
}

#[test]
fn unknown_config_key_exits_one_with_the_key() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), r#", "features": {"familly": "db4"}"#);
    let out = run(bin().args(["preprocess", "--config"]).arg(&cfg));
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("features.familly"), "{err}");
}

#[test]
fn every_bad_value_is_reported() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), r#", "train_fraction": 2.0, "notch_hz": -1"#);
    let out = run(bin().args(["preprocess", "--config"]).arg(&cfg));
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("train_fraction") && err.contains("notch_hz"), "{err}");
}

#[test]
fn missing_data_dir_exits_two() {
    let tmp = TempDir::new().unwrap();
    let out = run(bin().args(["preprocess", "--data"]).arg(tmp.path().join("absent")).arg("--out").arg(tmp.path()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn no_source_for_the_config_exits_one() {
    let out = run(bin().arg("preprocess"));
    assert_eq!(out.status.code(), Some(1));
    let out = run(bin().arg("no-such-command"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn preprocess_reports_every_subject() {
    let tmp = TempDir::new().unwrap();
    let out = run(bin().args(["preprocess", "--data"]).arg(data_dir()).arg("--out").arg(tmp.path()));
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&read(&tmp.path().join("report.json"))).unwrap();
    let text = report.to_string();
    for i in 0..8 {
        assert!(text.contains(&format!("SYN-{i:03}")), "{text}");
    }
    assert!(tmp.path().join("report.csv").is_file());
}

#[test]
fn train_then_evaluate_saved_model() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "");
    let train_dir = tmp.path().join("train");
    assert!(run(bin().args(["train", "--config"]).arg(&cfg).arg("--out").arg(&train_dir)).status.success());
    let eval_dir = tmp.path().join("eval");
    let out = run(
        bin()
            .args(["evaluate", "--config"])
            .arg(&cfg)
            .arg("--model")
            .arg(train_dir.join("model.ssm"))
            .arg("--out")
            .arg(&eval_dir),
    );
    assert!(out.status.success());
    let csv = String::from_utf8(read(&eval_dir.join("report.csv"))).unwrap();
    assert!(csv.starts_with("subject,n_epochs,macro_f"), "{csv}");
    assert!(csv.lines().any(|l| l.starts_with("all,")), "{csv}");
}

#[test]
fn corrupt_model_exits_two() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "");
    let model = tmp.path().join("bad.ssm");
    std::fs::write(&model, b"not a model").unwrap();
    let out = run(bin().args(["evaluate", "--config"]).arg(&cfg).arg("--model").arg(&model));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_dir_follows_env_and_flag() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "");
    let cache = tmp.path().join("cache-env");
    let extract = |no_cache: bool, out: &str| {
        let mut c = bin();
        c.env("SLEEPSCORE_CACHE_DIR", &cache).args(["extract", "--config"]).arg(&cfg);
        c.arg("--out").arg(tmp.path().join(out));
        if no_cache {
            c.arg("--no-cache");
        }
        run(&mut c)
    };
    assert!(extract(true, "a").status.success());
    assert!(!cache.exists() || std::fs::read_dir(&cache).unwrap().next().is_none());
    assert!(extract(false, "b").status.success());
    let entries = std::fs::read_dir(&cache).unwrap().count();
    assert!(entries >= 1);
    assert!(extract(false, "c").status.success());
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), entries);
    assert_eq!(read(&tmp.path().join("b/features.ssf")), read(&tmp.path().join("c/features.ssf")));
    assert_eq!(read(&tmp.path().join("a/features.ssf")), read(&tmp.path().join("b/features.ssf")));
}
