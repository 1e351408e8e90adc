use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn onto_enrich(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onto-enrich"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture_args(out: &std::path::Path) -> Vec<String> {
    let mut args = Vec::new();
    for (flag, name) in [
        ("--ontology", "ontology.nt"),
        ("--corpus", "corpus.xml"),
        ("--lexicon", "lexicon.tsv"),
        ("--stoplist", "stoplist.txt"),
    ] {
        args.push(flag.to_string());
        args.push(fixture(name).display().to_string());
    }
    args.push("--out".into());
    args.push(out.display().to_string());
    args
}

fn run_with(out: &std::path::Path, extra: &[&str]) -> Output {
    let mut args = fixture_args(out);
    args.extend(extra.iter().map(|s| s.to_string()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    onto_enrich(&args)
}

#[test]
fn json_report_matches_library_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let result = run_with(&out, &[]);
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    assert!(result.stdout.is_empty());
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(
        stderr.contains("warning: question q8: phrase \"in it\""),
        "{stderr}"
    );

    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 4);
    let optimal: Vec<_> = records
        .iter()
        .filter(|r| r["optimal"] == true)
        .map(|r| {
            (
                r["concept_a"].as_str().unwrap(),
                r["full"]["length"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        optimal,
        [
            ("c:Perpendicular", 3),
            ("c:OppositeAnglesOfQuadrilateral", 4)
        ]
    );
    assert!(report["config"]["ontology"]
        .as_str()
        .unwrap()
        .ends_with("ontology.nt"));
}

#[test]
fn serial_and_parallel_outputs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(run_with(&a, &["--serial"]).status.success());
    assert!(run_with(&b, &[]).status.success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn csv_optimal_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    assert!(run_with(&out, &["--format", "csv", "--optimal-only"])
        .status
        .success());
    let csv = std::fs::read_to_string(out).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("concept_a,concept_b,hier_len,full_len,optimal"));
    assert!(lines[1..]
        .iter()
        .all(|l| l.split(',').nth(4) == Some("true")));
}

#[test]
fn max_depth_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    assert!(run_with(&out, &["--max-depth", "4"]).status.success());
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    let optimal = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["optimal"] == true)
        .count();
    assert_eq!(optimal, 1);
    assert_eq!(report["config"]["max_depth"], 4);
}

#[test]
fn custom_hierarchy_predicates() {
    // With only subClassOf hierarchical, hasChild counts as an ordinary
    // relation and AngleOfPolygon loses its hierarchical link.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    assert!(
        run_with(&out, &["--hierarchical-predicate", "rdfs:subClassOf"])
            .status
            .success()
    );
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(
        report["config"]["hierarchical_predicates"],
        serde_json::json!(["rdfs:subClassOf"])
    );
    let r = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["concept_a"] == "c:OppositeAnglesOfQuadrilateral")
        .unwrap();
    assert!(r["hierarchical"].is_null());
    assert_eq!(r["full"]["length"], 4);
}

#[test]
fn missing_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let missing = dir.path().join("missing.nt");
    let result = onto_enrich(&[
        "--ontology",
        missing.to_str().unwrap(),
        "--corpus",
        fixture("corpus.xml").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&result.stderr).contains("missing.nt"));
    assert!(!out.exists());
}

#[test]
fn malformed_corpus_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.xml");
    std::fs::write(&corpus, "<corpus><question id=\"q1\"><text>open").unwrap();
    let out = dir.path().join("report.json");
    let result = onto_enrich(&[
        "--ontology",
        fixture("ontology.nt").to_str().unwrap(),
        "--corpus",
        corpus.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&result.stderr).contains("bad.xml"));
}

#[test]
fn bad_arguments_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    for extra in [
        &["--word-threshold", "1.5"][..],
        &["--format", "yaml"],
        &["--max-depth", "-1"],
        &["--max-depth", "0"],
    ] {
        let result = run_with(&out, extra);
        assert_eq!(result.status.code(), Some(1), "{extra:?}");
    }
    assert_eq!(onto_enrich(&["--corpus", "x.xml"]).status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let result = onto_enrich(&["--help"]);
    assert_eq!(result.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&result.stdout).contains("--hierarchical-predicate"));
}
