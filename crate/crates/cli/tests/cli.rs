use std::process::Command;

fn rankforge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rankforge")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

const X1Y1: &str = r#"{"q": 2, "n": 2, "terms": [{"c": 1, "e": [1, 1]}]}"#;

#[test]
fn gowers_json() {
    let (code, out, _) = rankforge(&["gowers", "--poly", X1Y1, "--d", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["norm_power"], "1/4");
    let (_, direct, _) = rankforge(&["gowers", "--poly", X1Y1, "--direct"]);
    let w: serde_json::Value = serde_json::from_str(&direct).unwrap();
    assert_eq!(w["norm_power"], "1/4");
}

#[test]
fn malformed_input_is_exit_2() {
    let (code, _, err) = rankforge(&["bias", "--poly", "{not json"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = rankforge(&["bias", "--poly", r#"{"q": 6, "n": 1, "terms": []}"#]);
    assert_eq!(code, 2);
    let (code, _, _) = rankforge(&["bias", "--poly", X1Y1, "--q", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn over_budget_is_exit_3() {
    let (code, _, err) = rankforge(&["gowers", "--poly", X1Y1, "--direct", "--d", "2", "--budget", "10"]);
    assert_eq!(code, 3);
    assert!(err.contains("cost"), "{err}");
}

#[test]
fn negative_results_are_exit_1() {
    let (code, out, _) = rankforge(&["star", "--named", "counterexample", "--a", "1"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["weak_dim"].as_u64(), v["restriction_dim"].as_u64()), (Some(4), Some(3)));
    let (code, out, _) = rankforge(&["extend", "--named", "counterexample"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"feasible\": false"));
    let (code, _, _) = rankforge(&["weaktest", "--named", "counterexample"]);
    assert_eq!(code, 0);
}

#[test]
fn named_constructors() {
    let (code, out, _) = rankforge(&["points", "--named", "xn", "--q", "3", "--xn", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 33);
    let (code, out, _) = rankforge(&["ncrank", "--named", "char2-quartic", "--rmax", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["exact"].is_object() || v["upper_bound"]["bound"].as_u64() <= Some(3));
    let (code, out, _) = rankforge(&["xn", "--q", "7", "--d", "2", "--n", "2", "--m", "3", "extend"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["weak_dim"], 5);
}

#[test]
fn csv_output() {
    let (code, out, _) = rankforge(&["kappa", "--named", "xn", "--q", "3", "--xn", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("value_table,fiber_size\n"));
    assert_eq!(out.lines().count(), 28);
    let (_, out, _) = rankforge(&["xn", "--q", "7", "--m", "3", "characters", "--format", "csv"]);
    assert!(out.starts_with("character,class,gamma\n"));
}

#[test]
fn nullsatz_membership() {
    let p = r#"{"q": 5, "n": 1, "terms": [{"c": 1, "e": [2]}]}"#;
    let r = r#"{"q": 5, "n": 1, "terms": [{"c": 1, "e": [1]}]}"#;
    let (code, out, _) = rankforge(&["nullsatz", "--poly", p, "--cap", "1", "--r", r]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["member"], false);
    assert_eq!((v["vanishing_dim"].as_u64(), v["ideal_dim"].as_u64()), (Some(1), Some(0)));
}

#[test]
fn suite_filter_and_refusals() {
    let (code, out, _) = rankforge(&["suite", "--only", "gowers-identity"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 1);
    let (code, out, _) = rankforge(&["suite", "--only", "1,12", "--budget", "1000"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["refused"], 2);
    assert_eq!(v["failed"], 0);
    let (code, _, _) = rankforge(&["suite", "--only", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn output_independent_of_workers() {
    let a = rankforge(&["kappa", "--named", "xn", "--q", "3", "--xn", "2", "--workers", "1"]).1;
    let b = rankforge(&["kappa", "--named", "xn", "--q", "3", "--xn", "2", "--workers", "4"]).1;
    assert_eq!(a, b);
}
