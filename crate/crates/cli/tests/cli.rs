use std::process::{Command, Output};

use serde_json::Value;

fn kgood(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgood"))
        .args(args)
        .env_remove("MK_MAX_DIM")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn chi_g7_prints_three_equal_values() {
    let o = kgood(&[
        "chi", "--s", "2", "--n", "2", "--group", "G7", "--method", "all",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("2104").count(), 3, "{text}");
}

#[test]
fn height_one_is_a_usage_error() {
    let o = kgood(&["verify", "--s", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_group_is_a_usage_error() {
    let o = kgood(&["verify", "--group", "G18"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn guard_violation_exits_two() {
    let o = Command::new(env!("CARGO_BIN_EXE_kgood"))
        .args(["verify", "--s", "2", "--n", "1", "--group", "G1"])
        .env("MK_MAX_DIM", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_groups_prints_seventeen_relations() {
    let o = kgood(&["list-groups", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 17);
    assert_eq!(lines[0], "G1: c a c = a^1 b^0, c b c = a^0 b^1");
    assert!(lines
        .iter()
        .enumerate()
        .all(|(i, l)| l.starts_with(&format!("G{}:", i + 1))));
}

#[test]
fn fgl_json_reports_all_identities() {
    let o = kgood(&["fgl", "--s", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|c| c["pass"] == Value::Bool(true)));
}

fn statuses(report: &Value) -> Vec<&str> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["status"].as_str().unwrap())
        .collect()
}

#[test]
fn verify_json_at_n2_passes_everywhere() {
    let o = kgood(&["verify", "--s", "2", "--n", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 17);
    for r in reports {
        assert_eq!(r["params"]["M"], 64);
        assert!(statuses(r).iter().all(|s| *s == "pass"), "{}", r["group"]);
        assert_eq!(r["chi"]["formula"], r["chi"]["bruteforce"]);
    }
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));
}

#[test]
fn verify_json_at_n1_flags_collapsed_presentations() {
    let o = kgood(&["verify", "--s", "2", "--n", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 17);
    let failing: Vec<&str> = reports
        .iter()
        .filter(|r| statuses(r).contains(&"fail"))
        .map(|r| r["group"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["G6", "G8", "G11", "G12", "G13", "G17"]);
    for r in reports {
        let goodness = r["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == "goodness-auto")
            .unwrap();
        assert_eq!(goodness["status"], "pass");
    }
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "verify", "--s", "2", "--n", "1", "--group", "G3", "--format", "json", "--seed", "7",
    ];
    assert_eq!(kgood(&args).stdout, kgood(&args).stdout);
}

#[test]
fn out_flag_writes_file_and_checks_filter() {
    let dir = std::env::temp_dir().join(format!("kgood-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = kgood(&[
        "verify",
        "--group",
        "G7",
        "--checks",
        "basis,tprime",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let names: Vec<&str> = v[0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["special-basis", "tprime"]);
    std::fs::remove_dir_all(dir).ok();
}
