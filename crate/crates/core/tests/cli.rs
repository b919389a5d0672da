use std::process::{Command, Output};

use serde_json::Value;

fn ogpush(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ogpush")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn route_lines(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| {
            let l = l.trim();
            let (name, value) = l.split_once(char::is_whitespace)?;
            ["oracle", "long", "short", "dp", "closed"]
                .contains(&name)
                .then(|| (name.to_string(), value.trim().to_string()))
        })
        .collect()
}

#[test]
fn push_worked_example_on_all_routes() {
    let o = ogpush(&[
        "push",
        "--n",
        "2",
        "--component",
        "plus",
        "--class",
        "s[2,1]",
        "--routes",
        "oracle,long,short,closed",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines = route_lines(&stdout(&o));
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|(_, v)| v == "2*t1*t2"), "{lines:?}");
}

#[test]
fn push_minus_defaults_to_oracle_and_short() {
    let o = ogpush(&["push", "--n", "2", "--component", "minus", "--class", "s[2,1]"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = route_lines(&stdout(&o));
    let names: Vec<&str> = lines.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["oracle", "short"]);
    assert!(lines.iter().all(|(_, v)| v == "-2*t1*t2"));
}

#[test]
fn input_errors_exit_with_one() {
    let o = ogpush(&["push", "--n", "2", "--component", "plus", "--class", "z1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not symmetric"));
    for args in [
        &["push", "--n", "2", "--class", "s[2,1]", "--routes", "dp"][..],
        &[
            "push",
            "--n",
            "2",
            "--component",
            "full",
            "--class",
            "s[2,1]",
            "--routes",
            "closed",
        ],
        &["push", "--n", "2", "--class", "e1^2", "--routes", "closed"],
        &["push", "--n", "2", "--class", "s[1,2]"],
        &["push", "--n", "5", "--partition", "1"],
        &["push", "--n", "2", "--class", "z1 +"],
        &["push", "--n", "2", "--routes", "bogus", "--class", "e1"],
        &["table", "--n", "2"],
        &["ktheory", "--n", "2", "--partition", "1,2"],
    ] {
        assert_eq!(ogpush(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn push_json_schema() {
    let o = ogpush(&[
        "push",
        "--n",
        "2",
        "--component",
        "full",
        "--class",
        "s[1,0]",
        "--routes",
        "long,dp",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 2);
    assert_eq!(v["component"], "full");
    assert_eq!(v["class"], "z2 + z1");
    assert_eq!(v["agreement"], true);
    let routes = v["routes"].as_object().unwrap();
    assert_eq!(routes.keys().collect::<Vec<_>>(), ["dp", "long", "oracle"]);
    assert!(routes.values().all(|r| r == "4"));
    assert_eq!(v["schur_t2"]["(0,0)"], "4");
    assert!(v["schur_t2"]["with_t_factor"].as_object().unwrap().is_empty());
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("ogpush-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = ogpush(&["push", "--n", "2", "--partition", "2,1", "--format", "json", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["routes"]["oracle"], "2*t1*t2");
    assert_eq!(v["schur_t2"]["with_t_factor"]["(0,0)"], "2");
}

#[test]
fn table_rows() {
    let o = ogpush(&["table", "--n", "2", "--bound", "2", "--component", "plus"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.lines()
            .any(|l| l == "\"(2,1)\",2*t1*t2,2*t1*t2,RhoN,\"(0,0)\",true"),
        "{text}"
    );
    assert!(text.lines().any(|l| l == "\"(1,1)\",0,0,Neither,,true"), "{text}");
    let o = ogpush(&["table", "--n", "1", "--bound", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &v["rows"][1];
    assert_eq!(row["lambda"], "(1)");
    assert_eq!(row["oracle"], "t1");
    assert_eq!(row["case"], "RhoN");
    assert_eq!(row["mu"], "(0)");
    assert_eq!(row["match"], true);
}

#[test]
fn ktheory_reports() {
    let o = ogpush(&["ktheory", "--n", "2", "--partition", "1,1", "--component", "plus"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("plus: 1 + t1*t2 + t1^-1*t2^-1"));
    let o = ogpush(&[
        "ktheory",
        "--n",
        "2",
        "--partition",
        "1,0",
        "--component",
        "both",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["plus"], v["minus"]);
    assert_eq!(v["equal"], true);
    let o = ogpush(&["ktheory", "--n", "1", "--partition", "0"]);
    assert!(stdout(&o).contains("plus: 1\n"));
}

#[test]
fn validate_all_components() {
    let o = ogpush(&["validate", "--n", "3", "--class", "s[3,1]", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agreement"], true);
    assert_eq!(v["additivity"], true);
    assert_eq!(v["components"].as_array().unwrap().len(), 3);
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(ogpush(&["--help"]).status.code(), Some(0));
    assert_eq!(ogpush(&[]).status.code(), Some(1));
}
