use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn pressurekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pressurekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Writes `cfg` next to copies of the bundled inputs it may refer to.
fn scratch(cfg: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(configs()).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e != "cfg") {
            fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
        }
    }
    let path = dir.path().join("run.cfg");
    fs::write(&path, cfg).unwrap();
    (dir, path)
}

fn tail_value(csv: &str) -> f64 {
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let at = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rec = rdr
        .records()
        .map(Result::unwrap)
        .find(|r| &r[at("n_or_N")] == "tail")
        .expect("tail row");
    rec[at("value")].parse().unwrap()
}

#[test]
fn zero_potential_gives_log_two() {
    let (dir, cfg) = scratch("command = pressure\nsystem = full2.sft\npotential = zero.pot\nn_range = 1-12\n");
    let out = dir.path().join("p.csv");
    let o = pressurekit(&["pressure", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = tail_value(&fs::read_to_string(&out).unwrap());
    assert!((v - 2f64.ln()).abs() < 1e-9, "{v}");
}

#[test]
fn csv_goes_to_stdout_without_out() {
    let (_dir, cfg) = scratch("command = pressure\nsystem = full2.sft\npotential = log12.pot\nn_range = 1-8\n");
    let o = pressurekit(&["pressure", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let v = tail_value(&String::from_utf8(o.stdout).unwrap());
    assert!((v - 3f64.ln()).abs() < 1e-9, "{v}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("transfer oracle"));
}

#[test]
fn middle_third_root_bracket() {
    let cfg = configs().join("bowen_middle_third.cfg");
    let o = pressurekit(&["bowen-root", "--config", cfg.to_str().unwrap(), "--out", "/dev/null"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("s0 bracket")).expect("s0 line");
    let inner = &line[line.find('[').unwrap() + 1..line.find(']').unwrap()];
    let (lo, hi) = inner.split_once(", ").unwrap();
    let (lo, hi): (f64, f64) = (lo.parse().unwrap(), hi.parse().unwrap());
    assert!(lo >= 0.6299 && hi <= 0.6319 && lo <= hi, "{line}");
}

#[test]
fn malformed_system_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.sft"), "2 0.5\n1 1\n1\n").unwrap();
    fs::write(dir.path().join("zero.pot"), "birkhoff 2 1\n0 0\n1 0\n").unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "system = bad.sft\npotential = zero.pot\n").unwrap();
    let out = dir.path().join("p.csv");
    let o = pressurekit(&["pressure", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert!(!out.exists());
}

#[test]
fn config_errors_exit_2() {
    for cfg in [
        "system = full2.sft\npotential = zero.pot\nn_rnage = 1-4\n",
        "system = full2.sft\npotential = zero.pot\nn_range = 1-4\nn_range = 1-5\n",
        "system = full2.sft\npotential = zero.pot\nword_cap = 999999999\n",
        "system = full2.sft\npotential = zero.pot\nn_range = 1-40\n",
        "command = kingman\nsystem = full2.sft\npotential = zero.pot\n",
    ] {
        let (_dir, path) = scratch(cfg);
        let o = pressurekit(&["pressure", "--config", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{cfg}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = pressurekit(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn includes_resolve_relative_to_the_including_file() {
    let (dir, _) = scratch("");
    fs::create_dir(dir.path().join("sub")).unwrap();
    fs::write(dir.path().join("sub/inner.cfg"), "system = ../full2.sft\n").unwrap();
    let cfg = dir.path().join("outer.cfg");
    fs::write(&cfg, "include sub/inner.cfg\npotential = zero.pot\nn_range = 1-4\n").unwrap();
    let o = pressurekit(&["pressure", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn repeat_runs_are_byte_identical() {
    let (dir, cfg) = scratch(
        "command = kingman\nsystem = full2.sft\nmeasure = bernoulli07.mu\npotential = diag_norm.pot\n\
         n_exact = 8\nmc_orbits = 50\nmc_length = 256\nseed = 7\n",
    );
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = pressurekit(&["kingman", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        (fs::read(out).unwrap(), o.stdout)
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn exhausted_budget_exits_3() {
    let (_dir, cfg) = scratch("command = pressure\nsystem = full2.sft\npotential = diag_norm.pot\nn_range = 1-20\n");
    let o = pressurekit(&["pressure", "--config", cfg.to_str().unwrap(), "--budget-minutes", "0.00001"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_core_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = pressurekit(&["verify", "--suite", "core", "--threads", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report = fs::read_to_string(out).unwrap();
    assert!(report.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!report.contains("FAIL"));
}
