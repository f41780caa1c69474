use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use voteexplain_core::fixtures;
use voteexplain_core::report::{ExplanationReport, FeatureReport};

const P5: &str = r#"{"candidates": ["A","B","C"], "ballots": [
    {"order": ["A","B","C"], "count": 2},
    {"order": ["B","C","A"], "count": 1},
    {"order": ["C","B","A"], "count": 2}]}"#;

const U1: &str = r#"{"candidates": ["A","B","C"], "ballots": [
    {"order": ["A","B","C"], "count": 5}]}"#;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voteexplain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn item_codes(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|l| {
            let start = l.find('[')?;
            let end = l.find(']')?;
            l.chars()
                .next()?
                .is_ascii_digit()
                .then(|| l[start + 1..end].to_string())
        })
        .collect()
}

#[test]
fn analyze_instance_one() {
    let dir = tempfile::tempdir().unwrap();
    let rec = fixtures::committed_fixtures()
        .into_iter()
        .find(|r| r.id == "1")
        .unwrap();
    let path = write(
        dir.path(),
        "i1.json",
        &serde_json::to_string(&rec.profile).unwrap(),
    );
    let out = bin(&[
        "analyze",
        "--input",
        path.to_str().unwrap(),
        "--winner",
        &rec.winner,
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let codes: BTreeSet<String> = item_codes(&stdout(&out)).into_iter().collect();
    assert_eq!(codes, ["H", "L", "BR"].map(String::from).into());
}

#[test]
fn analyze_unanimous_and_small() {
    let dir = tempfile::tempdir().unwrap();
    let u1 = write(dir.path(), "u1.json", U1);
    let out = bin(&["analyze", "--input", u1.to_str().unwrap(), "--winner", "A"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(item_codes(&stdout(&out)).len(), 3);

    let p5 = write(dir.path(), "p5.json", P5);
    let out = bin(&["analyze", "--input", p5.to_str().unwrap(), "--winner", "A"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(item_codes(&stdout(&out)), ["P"]);
}

#[test]
fn analyze_dominated_winner_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "d.json",
        r#"{"candidates": ["A","B","C"], "ballots": [
            {"order": ["B","C","A"], "count": 3},
            {"order": ["C","B","A"], "count": 2}]}"#,
    );
    let out = bin(&[
        "analyze",
        "--input",
        path.to_str().unwrap(),
        "--winner",
        "A",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("beaten on every feature"));
}

#[test]
fn analyze_input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"candidates": ["A","B","C"], "ballots": [{"order": ["A","A","B"], "count": 1}]}"#,
    );
    let out = bin(&["analyze", "--input", bad.to_str().unwrap(), "--winner", "A"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a permutation"));

    let p5 = write(dir.path(), "p5.json", P5);
    let out = bin(&["analyze", "--input", p5.to_str().unwrap(), "--winner", "Z"]);
    assert_eq!(out.status.code(), Some(1));
    let out = bin(&["analyze", "--input", p5.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = bin(&[
        "analyze",
        "--input",
        p5.to_str().unwrap(),
        "--winner",
        "A",
        "--n",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = bin(&["analyze", "--input", "/nonexistent.json", "--winner", "A"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_and_text_agree() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.json", P5);
    let args = |fmt: &'static str| {
        bin(&[
            "analyze",
            "--input",
            p5.to_str().unwrap(),
            "--winner",
            "B",
            "--seed",
            "11",
            "--audit",
            "--format",
            fmt,
        ])
    };
    let json = args("json");
    let text = args("text");
    let report: ExplanationReport = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(
        serde_json::to_string_pretty(&report).unwrap() + "\n",
        stdout(&json)
    );
    assert_eq!(report.to_text(), stdout(&text));
    let codes: Vec<String> = report
        .items
        .iter()
        .map(|i| i.feature_code.clone())
        .collect();
    assert_eq!(codes, item_codes(&stdout(&text)));
    assert_eq!(report.items[0].normalized_score, "3/2");
    assert_eq!(report.surviving_features.as_ref().unwrap().len(), 5);
    // Repeated invocation is byte-identical.
    assert_eq!(args("json").stdout, json.stdout);
}

#[test]
fn feature_table() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.json", P5);
    let out = stdout(&bin(&["features", "--input", p5.to_str().unwrap()]));
    let row = |code: &str| -> Vec<String> {
        out.lines()
            .map(|l| l.split_whitespace().map(String::from).collect::<Vec<_>>())
            .find(|w| w.first().map(String::as_str) == Some(code))
            .unwrap()
    };
    assert_eq!(row("B")[2..5], ["4", "6", "5"]);
    for code in ["P", "L"] {
        let sum: i64 = row(code)[2..5]
            .iter()
            .map(|v| v.parse::<i64>().unwrap())
            .sum();
        assert_eq!(sum, 5);
    }

    let u1 = write(dir.path(), "u1.json", U1);
    let out = bin(&[
        "features",
        "--input",
        u1.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let rep: FeatureReport = serde_json::from_slice(&out.stdout).unwrap();
    let p = rep.features.iter().find(|f| f.short_code == "P").unwrap();
    assert_eq!(p.values, ["5", "0", "0"]);

    let out = bin(&["features", "--input", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fixtures_listing() {
    let out = bin(&["fixtures"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for row in [
        "1    6/4/4/7/4/4",
        "2    6/2/8/5/4/4",
        "3    1/4/7/6/7/4",
        "3a   1/4/7/6/7/4",
        "4    5/2/6/4/6/6",
        "4a   5/2/6/4/6/6",
    ] {
        assert!(text.contains(row), "missing {row}");
    }
    let json = bin(&["fixtures", "--format", "json"]);
    let insts: Vec<fixtures::PublishedInstance> = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(insts, fixtures::published_instances());
}

#[test]
fn derive_reports_every_instance_consistent() {
    let out = bin(&["derive"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().filter(|l| l.contains(" consistent ")).count(),
        6
    );

    let json = bin(&["derive", "--format", "json"]);
    assert_eq!(stdout(&json), fixtures::committed_fixture_text());
}

#[test]
fn derive_rejects_corrupted_instance() {
    let dir = tempfile::tempdir().unwrap();
    let mut insts = fixtures::published_instances();
    insts[2].distribution[0] = 2;
    let path = write(
        dir.path(),
        "insts.json",
        &serde_json::to_string(&insts).unwrap(),
    );
    let out = bin(&["derive", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("instance 3 "), "{err}");

    let junk = write(dir.path(), "junk.json", "not json");
    assert_eq!(
        bin(&["derive", "--input", junk.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn library_entry_point_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = voteexplain_core::cli::run(["voteexplain", "fixtures"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, bin(&["fixtures"]).stdout);
    let code = voteexplain_core::cli::run(["voteexplain", "bogus"], &mut out, &mut err);
    assert_eq!(code, 1);
}
