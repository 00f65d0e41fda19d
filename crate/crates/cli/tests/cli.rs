use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const STREET: &str = r#"{"omega":{"family":"path","k":2},"base_state":0,"lambda":{"family":"infinite_path"}}"#;

fn wreathgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wreathgame")).args(args).output().expect("run wreathgame")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn simulate_stationary_survives() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"streetmap":{STREET},"n":1,"sigma":1,"rho":1,"copiers":[{{"kind":"stationary"}}],"horizon":10}}"#),
    );
    let out = dir.path().join("t.ndjson");
    let o = wreathgame(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out).unwrap();
    assert!(text.lines().last().unwrap().contains(r#""outcome":"survived""#));
}

#[test]
fn simulate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "z.json", &format!(r#"{{"streetmap":{STREET},"n":1,"sigma":0,"rho":1}}"#));
    assert_eq!(wreathgame(&["simulate", "--config", &zero]).status.code(), Some(2));
    let garbage = write(dir.path(), "g.json", "{");
    assert_eq!(wreathgame(&["simulate", "--config", &garbage]).status.code(), Some(2));
    assert_eq!(wreathgame(&["simulate", "--config", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn simulate_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &format!(r#"{{"streetmap":{STREET},"n":1,"sigma":1,"rho":1,"horizon":2}}"#));
    let o = wreathgame(&["simulate", "--config", &cfg, "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
    assert!(stdout.starts_with(r#"{"t":0,"#));
}

#[test]
fn sweep_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.json",
        &format!(
            r#"{{"n":[1],"sigma":[1,2],"rho":[1],"streetmaps":[{STREET}],"adversaries":[{{"kind":"greedy"}}],
                "horizon":5,"write_traces":true}}"#
        ),
    );
    let out = dir.path().join("out");
    let o = wreathgame(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(out.join("summary.csv")).unwrap();
    assert_eq!(rdr.records().count(), 2);
    assert!(out.join("traces/cell-1.ndjson").exists());
}

#[test]
fn verify_prints_pass_lines() {
    let o = wreathgame(&["verify", "--check", "iso-fig3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 2, "{text}");
    let o = wreathgame(&["verify", "--check", "cayley-link", "--radius", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(wreathgame(&["verify", "--check", "nope"]).status.code() != Some(0));
}
