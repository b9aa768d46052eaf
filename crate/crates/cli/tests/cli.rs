use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bouquet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bouquet"))
        .args(args)
        .output()
        .unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bouquet"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn assert_error(out: &Output, expected: i32) {
    assert_eq!(
        code(out),
        expected,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(
        out.stdout.is_empty(),
        "stdout on an error path: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(!out.stderr.is_empty());
}

#[test]
fn lift_examples() {
    let out = bouquet(&["lift", "-n", "2", "-w", "a1 a2", "-f", "M:1,2^1@3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["lifts"], true);
    assert_eq!(v["criterion"], true);
    assert_eq!(v["traversal"], true);

    let out = bouquet(&["lift", "-n", "2", "-w", "a1", "-f", "M:1@3"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["lifts"], false);

    let out = bouquet(&["lift", "-n", "2", "-w", "a1^2 a2^3", "-f", "L:2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["end_sheet"], 1);
}

#[test]
fn lift_text_and_json_agree() {
    for (word, family) in [
        ("a1 a2", "M:1,2^1@3"),
        ("a1^4 a2^-2", "N:2,1^2@5"),
        ("a1^2 a2^3", "L:1,2"),
    ] {
        let j = bouquet(&["lift", "-n", "2", "-w", word, "-f", family]);
        let t = bouquet(&[
            "lift", "-n", "2", "-w", word, "-f", family, "--format", "text",
        ]);
        assert_eq!(code(&j), code(&t));
        let text = String::from_utf8(t.stdout).unwrap();
        let verdict = if json(&j)["lifts"] == true {
            "lifts: yes"
        } else {
            "lifts: no"
        };
        assert!(text.starts_with(verdict), "{text}");
    }
}

#[test]
fn lift_from_cover_file_and_stdin() {
    let dir = std::env::temp_dir().join(format!("bouquet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("cover.json");
    let export = bouquet(&["export", "-n", "2", "-f", "M:1,2^3@7"]);
    assert_eq!(code(&export), 0);
    std::fs::write(&file, &export.stdout).unwrap();

    let out = with_stdin(
        &["lift", "-n", "2", "-w", "-", "-F", file.to_str().unwrap()],
        "a1^3 a2\n",
    );
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["criterion"], Value::Null);
    assert_eq!(v["traversal"], true);

    let out = bouquet(&["lift", "-n", "3", "-w", "a1", "-F", file.to_str().unwrap()]);
    assert_error(&out, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn find_cover_examples() {
    let out = bouquet(&["find-cover", "-n", "2", "-w", "a1 a2^2", "-p", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["family"], "N:1,2^1@3");
    assert_eq!(v["cover"]["degree"], 3);
    assert_eq!(v["rationale"]["case"], "AX_PLUS_B");

    let out = bouquet(&["find-cover", "-n", "2", "-w", "", "-p", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["family"], "M:1@5");

    assert_error(
        &bouquet(&["find-cover", "-n", "1", "-w", "a1", "-p", "3"]),
        2,
    );
    assert_error(
        &bouquet(&["find-cover", "-n", "2", "-w", "a1", "-p", "9"]),
        2,
    );
}

#[test]
fn find_cover_dot() {
    let out = bouquet(&[
        "find-cover",
        "-n",
        "2",
        "-w",
        "a1 a2",
        "-p",
        "5",
        "--format",
        "dot",
    ]);
    assert_eq!(code(&out), 0);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 10);
}

#[test]
fn census_examples() {
    let out = bouquet(&["census", "-n", "2", "-d", "2", "--connected"]);
    assert_eq!(code(&out), 0);
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[3]["summary"]["count"], 3);

    let out = bouquet(&[
        "census",
        "-n",
        "2",
        "-d",
        "3",
        "--connected",
        "--up-to-iso",
        "--jobs",
        "2",
    ]);
    assert_eq!(json_lines(&out).last().unwrap()["summary"]["count"], 7);

    let out = bouquet(&["census", "-n", "2", "-d", "5", "--connected", "--normal"]);
    assert_eq!(json_lines(&out).last().unwrap()["summary"]["count"], 6);
}

#[test]
fn census_output_does_not_depend_on_width() {
    let one = bouquet(&["census", "-n", "2", "-d", "4", "--connected", "--jobs", "1"]);
    let four = bouquet(&["census", "-n", "2", "-d", "4", "--connected", "--jobs", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn budget_exit_code() {
    let out = bouquet(&[
        "census",
        "-n",
        "3",
        "-d",
        "6",
        "--connected",
        "--budget",
        "100",
    ]);
    assert_error(&out, 4);
    let out = bouquet(&["rmin", "-n", "2", "-w", "a1^60", "--dmax", "3"]);
    assert_error(&out, 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains('3'));
}

#[test]
fn rmin_example() {
    let out = bouquet(&["rmin", "-n", "2", "-w", "a1^2 a2^3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["r"], 2);
    assert_eq!(v["witness"]["perms"], serde_json::json!([[0, 1], [1, 0]]));
}

#[test]
fn verify_quick_passes() {
    let out = bouquet(&["verify", "--quick"]);
    assert_eq!(code(&out), 0);
    let lines = json_lines(&out);
    assert!(lines.len() >= 8);
    assert!(lines
        .iter()
        .all(|l| l["passed"] == true && l["violations"] == 0));
}

#[test]
fn usage_errors() {
    assert_error(
        &bouquet(&["lift", "-n", "2", "-w", "a1 ^2", "-f", "M:1@3"]),
        2,
    );
    assert_error(&bouquet(&["lift", "-n", "2", "-w", "a3", "-f", "M:1@3"]), 2);
    assert_error(&bouquet(&["lift", "-n", "2", "-w", "a1", "-f", "M:1@4"]), 2);
    assert_error(&bouquet(&["lift", "-n", "2", "-w", "a1"]), 2);
    assert_error(&bouquet(&["lift", "-n", "0", "-w", "", "-f", "L:1"]), 2);
    assert_error(&bouquet(&["frobnicate"]), 2);
}

#[test]
fn export_formats() {
    let out = bouquet(&["export", "-n", "2", "-f", "L:1,2"]);
    assert_eq!(
        json(&out),
        serde_json::json!({"n": 2, "degree": 2, "base": 0, "perms": [[1, 0], [1, 0]]})
    );
    let out = bouquet(&["export", "-n", "2", "-f", "L:1", "--format", "text"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "degree 2 base 0: a1=(0 1) a2=()\n"
    );
}
