use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz-lab")).args(args).env_remove("ORLICZ_LAB_THREADS").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn json_envelope_carries_effective_config() {
    let out = run(&["conjugate", "--phi", "pow:p=2", "--dim", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "version", "config", "result"]);
    assert_eq!(v["config"]["phi"], "pow:p=2");
    assert_eq!(v["config"]["dim"], 4);
    assert_eq!(v["config"]["eigen"]["nodes"], 2000);
    let r = &v["result"];
    assert!((r["slopes"]["phi_n"].as_f64().unwrap() - 4.0).abs() < 1e-6);
    assert_eq!(r["samples"].as_array().unwrap().len(), 13);
}

#[test]
fn output_is_deterministic() {
    let args = ["norm", "--weight", "hardy:a=1", "--phi", "pow:p=2", "--dim", "3", "--omega", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn verify_csv_header() {
    let out = run(&["verify", "--weight", "hardy:a=2", "--phi", "pow:p=2", "--dim", "4", "--family", "cones", "--emit", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("test_id,param,lhs,rhs,ratio"));
    assert_eq!(lines.count(), 25);
}

#[test]
fn conjugate_csv_header() {
    let out = run(&["conjugate", "--phi", "sumpow:p=2,q=3", "--dim", "5", "--emit", "csv"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("t,phi_n,b_phi,b_tilde\n"));
}

#[test]
fn parse_errors_exit_4() {
    let out = run(&["check", "--phi", "maxpow:p=2,q=1"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("q must exceed 1"));
    assert_eq!(code(&run(&["norm", "--weight", "hardy:b=2"])), 4);
    assert_eq!(code(&run(&["no-such-command"])), 4);
    assert_eq!(code(&run(&["verify", "--family", "cone"])), 4);
    assert_eq!(code(&run(&["eigen", "--r", "-1"])), 4);
    assert_eq!(code(&run(&["norm", "--phi", "table:/nonexistent/phi.csv"])), 4);
}

#[test]
fn help_exits_0() {
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn blocked_hypotheses_exit_2() {
    let out = run(&["check", "--weight", "hardy:a=3", "--phi", "pow:p=2", "--dim", "3"]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert!(v["result"]["routes"].as_array().unwrap().iter().all(|r| r["verdict"] != "admissible"));
}

#[test]
fn admissible_check_exits_0() {
    let out = run(&["check", "--weight", "hardy:a=2", "--phi", "pow:p=2", "--dim", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["result"]["routes"].as_array().unwrap().iter().any(|r| r["verdict"] == "admissible"));
}

#[test]
fn eigen_reports_profile() {
    let out = run(&["eigen", "--phi", "pow:p=2", "--weight", "const:c=1", "--dim", "3", "--R", "1", "--r", "1", "--nodes", "400"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let level = &v["result"]["levels"][0];
    let lam = level["lambda_tilde"].as_f64().unwrap();
    assert!((lam / std::f64::consts::PI.powi(2) - 1.0).abs() < 5e-3, "{lam}");
    assert_eq!(level["profile"]["rho"].as_array().unwrap().len(), 101);
    assert!(level["init_disagreement"].as_f64().unwrap() < 1e-6);
}

#[test]
fn eigen_nonconvergence_exits_3_with_best_iterate() {
    let out = run(&["eigen", "--phi", "maxpow:p=2,q=3", "--psi", "pow:p=3", "--weight", "const:c=1", "--dim", "3", "--r", "1", "--nodes", "200", "--emit", "csv"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("level,rho,u\n"));
}

#[test]
fn toml_config_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("orlicz-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(&path, "phi = \"pow:p=3\"\ndim = 5\n[conjugate]\npoints = 4\n").unwrap();
    let out = run(&["--config", path.to_str().unwrap(), "conjugate", "--dim", "6"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["config"]["phi"], "pow:p=3");
    assert_eq!(v["config"]["dim"], 6);
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 4);
    std::fs::write(&path, "dimension = 5\n").unwrap();
    assert_eq!(code(&run(&["--config", path.to_str().unwrap(), "conjugate"])), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn threads_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_orlicz-lab")).args(["examples"]).env("ORLICZ_LAB_THREADS", "1").output().unwrap();
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["config"]["threads"], 1);
    assert!(v["result"].as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("orlicz-lab-out-{}.csv", std::process::id()));
    let out = run(&["norm", "--kind", "l1", "--weight", "const:c=2,m=3", "--emit", "csv", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("l1,6,") || row.starts_with("l1,6.0,"), "{row}");
}
