//! End-to-end checks of the `rnf` binary.

use std::process::Command;

fn rnf(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rnf"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn expand_prints_printed_prefix() {
    let out = rnf(&["expand", "--label", "Delta_22_3_plus_a", "--prec", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("q^1*1 + q^2*1728 + q^3*-59049"), "{}", text);
    assert!(text.contains("[0, 1, 1728, -59049, 888832, -41512770]"), "{}", text);
}

#[test]
fn expand_json_format() {
    let out = rnf(&["expand", "--label", "Delta_12_1", "--prec", "4", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dense"][2], "-24");
    assert_eq!(v["precision"], 4);
}

#[test]
fn expand_with_twist() {
    let out = rnf(&["expand", "--label", "Delta_12_1", "--prec", "8", "--twist", "-4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // chi_-4(3) = -1 flips a_3 = 252
    assert!(text.contains("q^3*-252"), "{}", text);
    assert!(text.contains("level bound 16"), "{}", text);
}

#[test]
fn unknown_label_is_a_data_error() {
    let out = rnf(&["expand", "--label", "Delta_99_9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = rnf(&["expand", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_heuristic_suite_passes() {
    let out = rnf(&["verify", "--suite", "heuristic"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("suite heuristic: 9/9 checks pass"), "{}", text);
}

#[test]
fn catalog_queries() {
    let out = rnf(&["catalog", "--level", "3", "--weight", "22"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("N=3 k=22: 2 twist classes (2 unforced)"), "{}", text);
    assert!(text.contains("Delta_22_3_plus_a"), "{}", text);

    let out = rnf(&["catalog", "--summatory", "--weight", "50"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("#_50(30) = 1"), "{}", text);
}

#[test]
fn heuristic_figure2_totals() {
    let out = rnf(&["heuristic", "--figure2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total"], 1951);
    assert_eq!(v["split"], 276);
    assert_eq!(v["points"].as_array().unwrap().len(), 1951);
    assert_eq!(v["split_points"].as_array().unwrap().len(), 276);
}

#[test]
fn dims_single_cell() {
    let out = rnf(&["dims", "--level", "8", "--weight", "16"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("N=8 eps=- k=16: dim 2"), "{}", text);
    assert!(text.contains("mass 3/2"), "{}", text);
}
