use std::process::{Command, Output};

fn nkh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nkh"))
        .arg("--no-save")
        .args(args)
        .env_remove("NKH_TOLERANCE")
        .output()
        .expect("run nkh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn verify_reports_verdict_and_parameters() {
    let o = nkh(&["verify", "flag", "r=1", "s=1", "t=1", "eps=---"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["verdict"], "StrictNK");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["parameters"]["eps"], "---");
    assert_eq!(v["details"]["type_constant"]["value"], "1");

    let v = json(&nkh(&["verify", "s3s3"]));
    assert_eq!(v["verdict"], "StrictNK");
    assert_eq!(v["details"]["reyes_carrion_lambda_squared"]["value"], "1/9");

    let v = json(&nkh(&["verify", "cp3", "t=2"]));
    assert_eq!(v["verdict"], "Kahler");
    assert_eq!(v["details"]["selected_en"], 1);
    let v = json(&nkh(&["verify", "cp3", "t=3"]));
    assert_eq!(v["verdict"], "Neither");
}

#[test]
fn output_is_deterministic() {
    let args = ["--backend", "float", "sweep", "cp3", "t=0.5:2:4", "en=all"];
    let a = nkh(&args);
    let b = nkh(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let s = nkh(&["verify", "s6", "points=5", "--seed", "3"]);
    assert_eq!(s.stdout, nkh(&["verify", "s6", "points=5", "--seed", "3"]).stdout);
    assert_eq!(json(&s)["verdict"], "StrictNK");
}

#[test]
fn csv_output_for_sweeps() {
    let o = nkh(&["--format", "csv", "sweep", "flag", "r=1", "s=1", "t=1,2", "eps=+++"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "eps,r,s,t,verdict,predicted,agrees,nabla_omega,sym_residual,nijenhuis"
    );
    assert!(lines.next().unwrap().starts_with("+++,1,1,1,StrictNK,StrictNK,true"));
    assert!(!nkh(&["--format", "csv", "verify", "s3s3"]).status.success());
}

#[test]
fn save_and_report_round_trip() {
    let dir = std::env::temp_dir().join(format!("nkh-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let p = path.to_str().unwrap();
    let _ = std::fs::remove_file(&path);
    let first = nkh(&["--save", p, "solve", "cp3"]);
    assert!(first.status.success());
    assert!(!path.exists(), "--no-save must win");
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_nkh")).args(args).current_dir(&dir).output().unwrap();
    let sweep = run(&["sweep", "flag", "r=1,2", "eps=+++"]);
    assert!(sweep.status.success());
    let again = run(&["report"]);
    assert!(again.status.success());
    assert_eq!(json(&sweep), json(&again));
    let csv = run(&["report", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 3);
    assert!(!first.stdout.is_empty());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn model_file_input() {
    let dir = std::env::temp_dir().join(format!("nkh-model-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("flag.model");
    let model = nkh_core::catalog::build_flag(
        &nkh_core::catalog::FlagMetricParams::new(
            nkh_core::Scalar::int(1),
            nkh_core::Scalar::int(1),
            nkh_core::Scalar::int(1),
        )
        .unwrap(),
        [1, 1, 1],
    )
    .unwrap();
    std::fs::write(&path, nkh_core::homog::render_model_file(&model)).unwrap();
    let o = nkh(&["verify", "--model-file", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["verdict"], "StrictNK");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(nkh(&["verify", "nope"]).status.code(), Some(1));
    assert_eq!(nkh(&["verify", "flag", "q=1"]).status.code(), Some(1));
    assert_eq!(nkh(&["verify", "flag", "r=-1"]).status.code(), Some(1));
    assert_eq!(nkh(&["sweep", "flag", "r=1:2:1000", "s=1:2:1000", "t=1:2:10"]).status.code(), Some(1));
    // a tolerance this loose makes the analytic locus swallow t = 1.05
    let o = nkh(&["--backend", "float", "--tolerance", "0.05", "verify", "cp3", "t=1.05", "en=-"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!json(&o)["disagreements"].as_array().unwrap().is_empty());
}

#[test]
fn tolerance_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_nkh"))
        .args(["--no-save", "--backend", "float", "verify", "cp3", "t=1.05", "en=-"])
        .env("NKH_TOLERANCE", "0.05")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["tolerance"], 0.05);
}
