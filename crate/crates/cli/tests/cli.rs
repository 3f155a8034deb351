//! End-to-end checks of the command-line interface: report content,
//! documented exit codes, and byte-stable output.

use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_origami-gaps");
const TEN: &str = "(1,2,3,4,5)(6,7,8,9,10)|(1,9)(2,10)";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn analyze_ten_tile_report() {
    let text = stdout(&["analyze", "-o", TEN]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["index"], 12);
    assert_eq!(v["cusps"].as_array().unwrap().len(), 4);
    assert_eq!(v["breakpoints"].as_array().unwrap().len(), 11);
    assert_eq!(v["total_area"], "33/8");
    assert_eq!(v["hall_signature"]["closure_ok"], false);
    let witnesses = v["hall_signature"]["witnesses"].as_array().unwrap();
    assert!(witnesses.iter().any(|w| w == "16/3"));
}

#[test]
fn analyze_torus_report() {
    let text = stdout(&["analyze", "-o", "(1)|(1)"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["index"], 1);
    assert_eq!(v["cusps"].as_array().unwrap().len(), 1);
    assert_eq!(
        v["breakpoints"],
        serde_json::json!(["1", "4"])
    );
    assert_eq!(v["hall_signature"]["closure_ok"], true);
}

#[test]
fn exit_codes_are_documented() {
    // 2: parse error
    assert_eq!(run(&["analyze", "-o", "(1,2"]).status.code(), Some(2));
    // 3: disconnected
    assert_eq!(run(&["analyze", "-o", "(1,2)|(3,4)"]).status.code(), Some(3));
    // 4: -I not in the Veech group
    assert_eq!(
        run(&["analyze", "-o", "(2,3)(4,5)|(1,2,3,4)"]).status.code(),
        Some(4)
    );
    // 5: orbit cap exceeded
    assert_eq!(
        run(&["analyze", "-o", TEN, "--orbit-cap", "3"]).status.code(),
        Some(5)
    );
}

#[test]
fn pdf_csv_rows_and_breakpoints() {
    let text = stdout(&["pdf", "-o", "(1)|(1)", "--samples", "50", "--tmax", "10", "--csv"]);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 51);
    assert_eq!(lines[0], "t,pdf,cdf");
    // each row has three numeric fields
    for row in &lines[1..] {
        assert_eq!(row.split(',').count(), 3);
    }
    let bps = stdout(&["pdf", "-o", "(1)|(1)", "--breakpoints"]);
    assert_eq!(bps, "1\n4\n");
    let ten_bps = stdout(&["pdf", "-o", TEN, "--breakpoints"]);
    assert_eq!(ten_bps, "1\n2\n3\n4\n16/3\n6\n8\n9\n32/3\n12\n16\n");
}

#[test]
fn pdf_pieces_metadata() {
    let text = stdout(&["pdf", "-o", "(1)|(1)", "--pieces"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let pieces = v.as_array().unwrap();
    assert_eq!(pieces.len(), 2);
    assert_eq!(pieces[0]["t_lo"], "1");
    assert_eq!(pieces[1]["t_lo"], "4");
}

#[test]
fn output_is_byte_stable() {
    let a = stdout(&["pdf", "-o", TEN, "--samples", "200", "--csv"]);
    let b = stdout(&["pdf", "-o", TEN, "--samples", "200", "--csv"]);
    assert_eq!(a, b);
    let a = stdout(&["verify", "-o", "(1)|(1)", "--all", "--seed", "42", "--bound", "60"]);
    let b = stdout(&["verify", "-o", "(1)|(1)", "--all", "--seed", "42", "--bound", "60"]);
    assert_eq!(a, b);
}

#[test]
fn orbit_dot_and_cusps() {
    let dot = stdout(&["orbit", "-o", "(1,2)|(1,3)", "--dot"]);
    assert!(dot.starts_with("digraph"));
    let vertex_count = dot.lines().filter(|l| l.contains("label=\"(")).count();
    assert_eq!(vertex_count, 3);
    assert!(dot.contains("[label=\"S\"]") && dot.contains("[label=\"T\"]"));
    let cusps = stdout(&["orbit", "-o", "(1,2)|(1,3)", "--cusps"]);
    let v: serde_json::Value = serde_json::from_str(&cusps).unwrap();
    let widths: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["width"].as_u64().unwrap())
        .collect();
    let mut sorted = widths.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, vec![1, 2]);
}

#[test]
fn histogram_rows_match_bins() {
    let text = stdout(&[
        "histogram",
        "-o",
        TEN,
        "--bound",
        "80",
        "--bins",
        "40",
        "--csv",
    ]);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 41);
    assert_eq!(lines[0], "bin_lo,bin_hi,density");
}

#[test]
fn verify_passes_on_fixtures() {
    for o in ["(1)|(1)", "(1,2)|(1,3)"] {
        let text = stdout(&["verify", "-o", o, "--all", "--seed", "1", "--bound", "80"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for check in v.as_array().unwrap() {
            assert_eq!(check["status"], "pass", "{o}: {check}");
        }
    }
}
