use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dualgraph"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default().as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn named(name: &str) -> String {
    let o = run(&["named", name], None);
    assert!(o.status.success());
    stdout(&o)
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn point_is_regular_with_empty_order() {
    let o = run(&["is-regular", "-"], Some(&named("point")));
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "yes\nblowdown order: []\n");
}

#[test]
fn a2_is_sandwiched_with_one_leaf() {
    let o = run(&["--json", "is-sandwiched", "--budget", "4", "-"], Some(&named("A2")));
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["leaves"], serde_json::json!([[1, 1]]));
    assert_eq!(v["document"]["kind"], "sandwich");
}

#[test]
fn validate_reports_loops() {
    let text = r#"{"format_version":"1","vertices":[{"id":2,"genus":0,"weight":1}],"edges":[[2,2]]}"#;
    let o = run(&["validate", "-"], Some(text));
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("loop"));
    let o = run(&["validate", "-"], Some(&named("E7")));
    assert_eq!(code(&o), 0);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(code(&run(&["validate", "-"], Some("{"))), 2);
    assert_eq!(code(&run(&["is-regular", "-"], Some("[]"))), 2);
    assert_eq!(code(&run(&["named", "Q7"], None)), 2);
    assert_eq!(code(&run(&["blowup", "-"], Some(&named("A2")))), 2);
    assert_eq!(code(&run(&["no-such-command"], None)), 2);
    let loop_doc = r#"{"format_version":"1","vertices":[{"id":0,"genus":0,"weight":1}],"edges":[[0,0]]}"#;
    assert_eq!(code(&run(&["det", "-"], Some(loop_doc))), 2);
}

#[test]
fn blowup_then_blowdown_round_trips() {
    let a2 = named("A2");
    let up = run(&["blowup", "--edge", "1,0", "-"], Some(&a2));
    assert_eq!(code(&up), 0);
    let up = stdout(&up);
    assert!(up.contains("\"weight\": 3"));
    let down = run(&["blowdown", "--vertex", "2", "-"], Some(&up));
    assert_eq!(code(&down), 0);
    let plain = run(&["is-regular", "-"], Some(&a2));
    assert_eq!(code(&plain), 1);
    let original = &a2.replace("  \"name\": \"A2\",\n", "");
    assert_eq!(&stdout(&down), original);
}

#[test]
fn blowdown_names_the_failed_precondition() {
    let doc = r#"{"format_version":"1","vertices":[{"id":0,"genus":0,"weight":3},{"id":1,"genus":0,"weight":2},{"id":2,"genus":0,"weight":1}],"edges":[[0,1],[0,2],[1,2]]}"#;
    let o = run(&["blowdown", "--vertex", "2", "-"], Some(doc));
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("adjacent"), "{}", stdout(&o));
}

#[test]
fn matrix_commands() {
    let a3 = named("A3");
    assert_eq!(stdout(&run(&["det", "-"], Some(&a3))), "-4\n");
    assert_eq!(code(&run(&["negdef", "-"], Some(&a3))), 0);
    let o = run(&["--json", "matrix", "-"], Some(&a3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matrix"], serde_json::json!([[-2, 1, 0], [1, -2, 1], [0, 1, -2]]));
    let two_points = r#"{"format_version":"1","vertices":[{"id":0,"genus":0,"weight":1},{"id":1,"genus":0,"weight":1}],"edges":[[0,1]]}"#;
    assert_eq!(code(&run(&["negdef", "-"], Some(two_points))), 1);
    assert_eq!(stdout(&run(&["det", "-"], Some(two_points))), "0\n");
}

#[test]
fn verdicts_for_obstructed_graphs() {
    let genus = r#"{"format_version":"1","vertices":[{"id":0,"genus":1,"weight":1}],"edges":[]}"#;
    let o = run(&["is-sandwiched", "-"], Some(genus));
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("definitely-not"));
    let o = run(&["is-self-similar", "--budget", "20", "-"], Some(&named("E8")));
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("no-within-budget"));
}

#[test]
fn witnesses_reverify_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    for name in ["point", "A1", "A4", "star-3-2"] {
        let g = named(name);
        let sw = path(&format!("{name}-sandwich.json"));
        assert_eq!(code(&run(&["is-sandwiched", "-o", &sw, "-"], Some(&g))), 0, "{name}");
        let ss = path(&format!("{name}-selfsim.json"));
        assert_eq!(code(&run(&["is-self-similar", "-o", &ss, "-"], Some(&g))), 0, "{name}");
        let ex = path(&format!("{name}-extract.json"));
        assert_eq!(code(&run(&["extract", &ss, "-o", &ex], None)), 0, "{name}");
        for w in [&sw, &ss, &ex] {
            let o = run(&["verify-witness", w], None);
            assert_eq!(code(&o), 0, "{name} {w}: {}", stdout(&o));
        }
    }
}

#[test]
fn tampered_witness_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let ss = dir.path().join("w.json");
    let o = run(&["is-self-similar", "-o", ss.to_str().unwrap(), "-"], Some(&named("A1")));
    assert_eq!(code(&o), 0);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&ss).unwrap()).unwrap();
    v["embedding"] = serde_json::json!([[0, 0]]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["verify-witness", bad.to_str().unwrap()], None);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("violation"));
    assert!(Path::new(&ss).exists());
}

#[test]
fn json_and_human_verdicts_agree() {
    for name in ["point", "A2", "D5", "E6", "star-2-1"] {
        let g = named(name);
        for cmd in ["is-regular", "is-sandwiched", "negdef"] {
            let human = run(&[cmd, "-"], Some(&g));
            let machine = run(&["--json", cmd, "-"], Some(&g));
            assert_eq!(code(&human), code(&machine), "{name} {cmd}");
            serde_json::from_str::<Value>(&stdout(&machine)).unwrap();
        }
    }
}

#[test]
fn dot_labels() {
    let o = run(&["export-dot", "-"], Some(&named("A2")));
    assert_eq!(stdout(&o), "graph G {\n  0 [label=\"0:(0,2)\"];\n  1 [label=\"1:(0,2)\"];\n  0 -- 1;\n}\n");
}

#[test]
fn roundtrip_subcommand() {
    let o = run(&["roundtrip", "--seed", "9", "--count", "25"], None);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "passed 25/25\n");
}
