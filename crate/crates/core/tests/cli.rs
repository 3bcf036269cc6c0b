use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/two_point.toml")
}

fn amcl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amcl"))
        .args(args)
        .env_remove("AMCL_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn train_writes_every_artifact_quickly() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let started = Instant::now();
    let o = amcl(&["train", "--config", fixture().to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(started.elapsed() < Duration::from_secs(10));
    for name in ["trajectory.csv", "eval.csv", "checkpoint", "config.toml", "manifest.json"] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let trajectory = csv_rows(&out.join("trajectory.csv"));
    // every 5 epochs of 50, plus the final point
    assert_eq!(trajectory.len(), 11);
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "train");
    assert_eq!(manifest["seed"], 1);
}

#[test]
fn seed_flag_lands_in_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = amcl(&[
        "train",
        "--config",
        fixture().to_str().unwrap(),
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["config"]["seed"], 7);
}

#[test]
fn rerun_from_manifest_reproduces_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    let o = amcl(&["train", "--config", fixture().to_str().unwrap(), "--out", first.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest = first.join("manifest.json");
    let o = amcl(&["train", "--config", manifest.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(first.join("trajectory.csv")).unwrap(),
        fs::read(second.join("trajectory.csv")).unwrap()
    );
    assert_eq!(fs::read(first.join("checkpoint")).unwrap(), fs::read(second.join("checkpoint")).unwrap());
}

#[test]
fn overrides_change_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = amcl(&[
        "train",
        "--config",
        fixture().to_str().unwrap(),
        "--override",
        "trainer.epochs=10",
        "--override",
        "trainer.eval_every=2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let epochs: Vec<String> = csv_rows(&out.join("trajectory.csv")).into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(epochs, ["0", "2", "4", "6", "8", "10"]);
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    let o = amcl(&["train", "--config", missing.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nope.toml"));

    let bad = dir.path().join("bad.toml");
    let text = fs::read_to_string(fixture()).unwrap().replace("eval_every = 5", "eval_every = 5\nbogus = 1");
    fs::write(&bad, text).unwrap();
    let o = amcl(&["train", "--config", bad.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bogus"));

    let o = amcl(&["train", "--config", fixture().to_str().unwrap(), "--override", "trainer.epochs=0"]);
    assert_eq!(o.status.code(), Some(1));

    let o = amcl(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn seed_sweep_writes_one_directory_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let o = amcl(&[
        "sweep",
        "--config",
        fixture().to_str().unwrap(),
        "--override",
        "trainer.epochs=10",
        "--axis",
        "seed",
        "--values",
        "1,2,3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for s in 1..=3 {
        assert!(out.join(format!("seed-{s}/manifest.json")).is_file());
    }
    let rows = csv_rows(&out.join("summary.csv"));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1] == "ok"));
    // different seeds give different runs
    assert_ne!(rows[0][3], rows[1][3]);
}

#[test]
fn empty_sweep_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = amcl(&[
        "sweep",
        "--config",
        fixture().to_str().unwrap(),
        "--axis",
        "seed",
        "--values",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

fn conditional_config(dir: &Path) -> PathBuf {
    let path = dir.join("conditional.toml");
    fs::write(
        &path,
        "seed = 3\n[trainer]\nmethod = \"amcl\"\nn_hypotheses = 4\nepochs = 1\n\
         [data]\nsource = \"synthetic\"\nkind = \"conditional_three_gaussians\"\n",
    )
    .unwrap();
    path
}

#[test]
fn diagnose_tracks_the_growing_spread() {
    let dir = tempfile::tempdir().unwrap();
    let config = conditional_config(dir.path());
    let out = dir.path().join("diag");
    let o = amcl(&[
        "diagnose",
        "--config",
        config.to_str().unwrap(),
        "--probes",
        "0.1,0.5,1.0",
        "--samples",
        "4000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&out.join("diagnostics.csv"));
    assert_eq!(rows.len(), 3);
    let tc: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(tc[0] < tc[1] && tc[1] < tc[2], "{tc:?}");
    assert!(out.join("diagnostics.json").is_file());
}

#[test]
fn diagnose_skips_single_sample_probes() {
    let dir = tempfile::tempdir().unwrap();
    let config = conditional_config(dir.path());
    let out = dir.path().join("diag");
    let o = amcl(&[
        "diagnose",
        "--config",
        config.to_str().unwrap(),
        "--probes",
        "0.5",
        "--samples",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(csv_rows(&out.join("diagnostics.csv")).is_empty());
    assert!(String::from_utf8_lossy(&o.stdout).contains("no probe"));
}

#[test]
fn bench_match_skips_large_exhaustive_search() {
    let dir = tempfile::tempdir().unwrap();
    let o = amcl(&[
        "bench-match",
        "--m",
        "3,8",
        "--trials",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("bench_match.csv"));
    assert_eq!(rows.len(), 8);
    for r in &rows {
        let mcl: f64 = r[3].parse().unwrap();
        let hungarian: f64 = r[5].parse().unwrap();
        assert!(mcl <= hungarian + 1e-12);
        if r[0] == "8" {
            assert!(r[6].is_empty());
            assert!(r[11].contains("skipped"));
        } else {
            let exhaustive: f64 = r[6].parse().unwrap();
            assert!((exhaustive - hungarian).abs() < 1e-10);
        }
    }
}
