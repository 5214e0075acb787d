use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_genhilbert"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn density(&self, c: f64) -> String {
        self.file(
            &format!("density_{c}.json"),
            &format!(r#"{{"beta_densities": [{{"K": 1, "a": 0, "c": {c}}}]}}"#),
        )
    }

    fn atom(&self) -> String {
        self.file("atom.json", r#"{"atoms": [{"b": 0.5, "w": 1}]}"#)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn moments_of_lebesgue_and_atom() {
    let fx = Fixture::new();
    let leb = fx.density(1.0);
    let v = json_of(&run(&["moments", "--measure", &leb, "--count", "4"]));
    let mus: Vec<f64> = v["results"]["moments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["mu"].as_f64().unwrap())
        .collect();
    for (got, want) in mus.iter().zip([1.0, 0.5, 1.0 / 3.0, 0.25]) {
        assert!(close(*got, want, 1e-12), "{mus:?}");
    }

    let atom = fx.atom();
    let out = run(&["moments", "--measure", &atom, "--count", "3", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,mu\n0,1.0\n1,0.5\n2,0.25\n");
}

#[test]
fn malformed_spec_exits_2_with_location() {
    let fx = Fixture::new();
    let bad = fx.file("bad.json", r#"{"atoms": [{"b": 0.5, "w": 1},]}"#);
    let out = run(&["moments", "--measure", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));

    let field = fx.file("field.json", r#"{"atoms": [{"b": 0.5, "w": 1}, {"b": 1.5, "w": 1}]}"#);
    let out = run(&["moments", "--measure", &field]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("atoms[1].b"), "{}", stderr(&out));

    let out = run(&["moments", "--measure", "/nonexistent/spec.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn carleson_verdicts() {
    let fx = Fixture::new();
    let leb = fx.density(1.0);
    let verdict = |m: &str, s: &str| json_of(&run(&["carleson", "--measure", m, "--s", s]))["results"]["verdict"].clone();
    assert_eq!(verdict(&leb, "1"), "carleson");
    assert_eq!(verdict(&leb, "2"), "not-carleson");
    assert_eq!(verdict(&fx.density(2.0), "1.5"), "vanishing-carleson");

    // s defaults to gamma - (beta - alpha)/2 = 1.5
    let v = json_of(&run(&[
        "carleson", "--measure", &leb, "--alpha", "1", "--beta", "2", "--gamma", "2",
    ]));
    assert_eq!(v["results"]["exponent"].as_f64(), Some(1.5));
    assert_eq!(v["results"]["verdict"], "not-carleson");

    let out = run(&["carleson", "--measure", &leb, "--s", "1", "--depth", "60"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_dichotomy() {
    let fx = Fixture::new();
    let p = ["--alpha", "1", "--beta", "2", "--gamma", "2"];
    let dims = "64,128,256,512,1024,2048,4096";
    let at = |c: f64| {
        let m = fx.density(c);
        let mut args = vec!["bound", "--measure", &m, "--dims", dims];
        args.extend(p);
        json_of(&run(&args))["results"].clone()
    };
    // c = s = 1.5 is the Carleson boundary; c = s - 0.5 is not Carleson
    let boundary = at(1.5);
    assert_eq!(boundary["verdict"], "bounded", "{boundary}");
    assert!(boundary["proxy_ratio"].as_f64().unwrap() <= 1.05);
    assert_eq!(at(1.0)["verdict"], "unbounded");
}

#[test]
fn bound_rejects_schur_violation() {
    let fx = Fixture::new();
    let m = fx.density(2.0);
    let out = run(&["bound", "--measure", &m, "--alpha", "1.5", "--beta", "3", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("gamma > beta/2"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let out = run(&["bound", "--measure", &m, "--alpha", "1", "--beta", "3", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["bound", "--measure", &m, "--alpha", "1", "--beta", "2", "--gamma", "2", "--dims", "64,128"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bound", "--measure", &m, "--alpha", "1", "--beta", "2", "--gamma", "2", "--dims", "64,128,100000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compact_examples() {
    let fx = Fixture::new();
    let p = ["--alpha", "1", "--beta", "2", "--gamma", "2"];
    let run_with = |m: &str, n: &str| {
        let mut args = vec!["compact", "--measure", m, "--n", n];
        args.extend(p);
        json_of(&run(&args))["results"].clone()
    };
    assert_eq!(run_with(&fx.atom(), "512")["verdict"], "compact-consistent");
    assert_eq!(run_with(&fx.density(2.0), "2048")["verdict"], "compact-consistent");
    assert_eq!(run_with(&fx.density(1.5), "2048")["verdict"], "not-compact-consistent");

    let m = fx.atom();
    let out = run(&["compact", "--measure", &m, "--alpha", "1", "--beta", "2", "--gamma", "2", "--n", "64", "--ms", "8,63"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernel_constants() {
    let v = json_of(&run(&["kernel", "--alpha", "1", "--beta", "3", "--gamma", "2"]));
    let r = &v["results"];
    assert!(close(r["constant"]["x_integral"].as_f64().unwrap(), std::f64::consts::PI, 1e-6));
    assert!(r["inequality"]["max_ratio"].as_f64().unwrap() <= 1.0);
    assert_eq!(r["inequality"]["holds"], true);

    let v = json_of(&run(&[
        "kernel", "--alpha", "2", "--beta", "2", "--gamma", "2", "--alpha-range", "closed-above",
    ]));
    assert!(close(v["results"]["constant"]["y_integral"].as_f64().unwrap(), 1.0, 1e-6));

    // alpha = 2 is outside the default open range
    let out = run(&["kernel", "--alpha", "2", "--beta", "2", "--gamma", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["kernel", "--alpha", "1", "--beta", "3", "--gamma", "2", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_ratios_stay_in_band() {
    let fx = Fixture::new();
    let m = fx.density(1.5);
    let v = json_of(&run(&["chain", "--measure", &m, "--alpha", "1", "--beta", "2", "--gamma", "2"]));
    let records = v["results"]["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert!(v["results"]["ratio_spread"].as_f64().unwrap() <= 4.0);
    let out = run(&["chain", "--measure", &m, "--alpha", "1", "--beta", "2", "--gamma", "2", "--ts", "0.5,1"]);
    assert_eq!(out.status.code(), Some(2));
}

const SWEEP: [&str; 13] = [
    "sweep", "--alphas", "1,1.5", "--betas", "2,2.5", "--gammas", "2", "--c-offsets", "-0.5,0,0.5",
    "--dims", "64,128,256", "--n", "256",
];

#[test]
fn sweep_grid_rows() {
    let v = json_of(&run(&SWEEP));
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r["index"].as_u64(), Some(i as u64));
        assert_eq!(r["status"], "ok");
        assert!(r["bound_verdict"].is_string() && r["compact_verdict"].is_string());
    }
    let boundary: Vec<&Value> = rows.iter().filter(|r| r["class"] == "boundary").collect();
    assert_eq!(boundary.len(), 4);
    assert!(boundary.iter().all(|r| r["c"] == r["s"]));
    assert!(rows.iter().filter(|r| r["class"] == "below").all(|r| r["bound_verdict"] == "unbounded"));

    let csv = run(&[&SWEEP[..], &["--format", "csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(text.starts_with("index,alpha,beta,gamma,s,c_offset,c,class,status,"));
}

#[test]
fn sweep_marks_invalid_points_and_exits_3() {
    // gamma = 1 < beta/2 for beta = 3: the Schur precondition fails per row
    let out = run(&[
        "sweep", "--alphas", "1.5", "--betas", "2,3", "--gammas", "1.2", "--c-offsets", "0",
        "--dims", "32,64,128", "--n", "128",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["status"], "ok");
    assert_eq!(rows[1]["status"], "error");
    assert!(rows[1]["error"].as_str().unwrap().contains("gamma > beta/2"));
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

fn write_report(fx: &Fixture, name: &str, extra: &[&str]) -> PathBuf {
    let path = fx.path(name);
    let out = run(&[&SWEEP[..], extra, &["--out", path.to_str().unwrap()]].concat());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    path
}

#[test]
fn identical_runs_are_byte_identical() {
    let fx = Fixture::new();
    let a = std::fs::read(write_report(&fx, "a.json", &[])).unwrap();
    let b = std::fs::read(write_report(&fx, "b.json", &[])).unwrap();
    assert_eq!(a, b);

    let m = fx.density(2.0);
    let args = ["kernel", "--alpha", "1", "--beta", "3", "--gamma", "2", "--seed", "7", "--measure", &m];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

fn resume_from(fx: &Fixture, prior: &Path) -> Output {
    let out = fx.path("resumed.json");
    run(&[
        &SWEEP[..],
        &["--resume", prior.to_str().unwrap(), "--out", out.to_str().unwrap()],
    ]
    .concat())
}

#[test]
fn resume_reemits_completed_rows() {
    let fx = Fixture::new();
    let full_path = write_report(&fx, "full.json", &[]);
    let full_bytes = std::fs::read(&full_path).unwrap();
    let mut partial: Value = serde_json::from_slice(&full_bytes).unwrap();

    // Simulate an interrupted run: two rows failed, and a completed row
    // carries a marker that only survives if it is copied, not recomputed.
    let rows = partial["results"]["rows"].as_array_mut().unwrap();
    for i in [3, 8] {
        rows[i]["status"] = "error".into();
        rows[i]["largest_norm"] = Value::Null;
    }
    rows[5]["measure_id"] = "copied".into();
    let partial_path = fx.file("partial.json", &serde_json::to_string_pretty(&partial).unwrap());

    let out = resume_from(&fx, Path::new(&partial_path));
    assert!(out.status.success(), "{}", stderr(&out));
    let resumed: Value = serde_json::from_slice(&std::fs::read(fx.path("resumed.json")).unwrap()).unwrap();
    let full: Value = serde_json::from_slice(&full_bytes).unwrap();
    let (got, want) = (resumed["results"]["rows"].as_array().unwrap(), full["results"]["rows"].as_array().unwrap());
    for i in 0..12 {
        if i == 5 {
            assert_eq!(got[i]["measure_id"], "copied");
        } else {
            assert_eq!(got[i], want[i], "row {i}");
        }
    }

    // restore the marker: the resumed report is then byte-identical to the full one
    partial["results"]["rows"][5] = full["results"]["rows"][5].clone();
    std::fs::write(&partial_path, serde_json::to_string(&partial).unwrap()).unwrap();
    let out = resume_from(&fx, Path::new(&partial_path));
    assert!(out.status.success());
    assert_eq!(std::fs::read(fx.path("resumed.json")).unwrap(), full_bytes);
}

#[test]
fn resume_rejects_other_grid() {
    let fx = Fixture::new();
    let prior = write_report(&fx, "prior.json", &[]);
    let out = run(&[
        "sweep", "--alphas", "1", "--betas", "2", "--gammas", "2", "--dims", "64,128,256", "--n", "256",
        "--resume", prior.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("options"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bound", "--dims", "a,b"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["moments"]).status.code(), Some(2));
    assert_eq!(run(&["kernel", "--alpha", "1", "--beta", "2"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
