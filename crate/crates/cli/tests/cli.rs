use std::process::{Command, Output};

fn crepant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crepant")).args(args).env_remove("CREPANT_CAP").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_diffs_report_known_discrepancies() {
    let o = crepant(&["tables", "table2", "--diff-paper"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("table2: 44/45 match, 1 known typo"), "{out}");
    assert!(out.contains("typo: multiset={3/4}"));

    let o = crepant(&["tables", "table3", "--diff-paper", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["omitted_in_print"], 2);
    assert_eq!(v["unexpected"], 0);
}

#[test]
fn table_emission_formats() {
    let tsv = stdout(&crepant(&["tables", "table1"]));
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], "d\ttail");
    assert_eq!(lines.len(), 13);

    let o = crepant(&["tables", "table4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 26);
}

#[test]
fn verify_passes_every_check() {
    let o = crepant(&["verify", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.iter().all(|r| r["status"] == "pass"), "{v:#}");
    assert!(reports.iter().any(|r| r["check_id"] == "lattice_k16_maximal"));
}

#[test]
fn group_inspection() {
    let out = stdout(&crepant(&["group", "SL23", "--chars"]));
    assert!(out.starts_with("degrees\t1,1,1,2,2,2,3\n"), "{out}");

    let out = stdout(&crepant(&["group", "Q16", "--sylow", "2"]));
    assert!(out.contains("2-Sylow of order 16\tcyclic false"), "{out}");

    let o = crepant(&["group", "SL32", "--info", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 168);
}

#[test]
fn search_by_bundled_name_and_file() {
    let o = crepant(&["search", "search5_order168", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v["matches"].as_array().unwrap().iter().map(|m| m["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["SL32", "Z7"]);

    let dir = std::env::temp_dir().join(format!("crepant-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("spec.json");
    std::fs::write(&spec, r#"{"name":"small","predicates":[{"order_divides":8}]}"#).unwrap();
    let out = stdout(&crepant(&["search", spec.to_str().unwrap()]));
    assert!(out.contains("match\tQ8\t"), "{out}");
    assert!(!out.contains("match\tQ16"));
}

#[test]
fn small_cap_reports_errors_per_entry() {
    let o = crepant(&["--cap", "100", "search", "search5_order168"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("error\tSL32"), "{out}");
    assert!(out.contains("match\tZ7"));

    let o = Command::new(env!("CARGO_BIN_EXE_crepant"))
        .args(["search", "search5_order168"])
        .env("CREPANT_CAP", "100")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("error\tSL32"));
}

#[test]
fn catalog_dump_round_trips_through_a_file() {
    let json = crepant(&["catalog"]).stdout;
    let dir = std::env::temp_dir().join(format!("crepant-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.json");
    std::fs::write(&path, &json).unwrap();
    let out = stdout(&crepant(&["group", "Z7sdZ3", "--catalog", path.to_str().unwrap(), "--info"]));
    assert!(out.contains("order\t21"), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["tables", "table9"][..],
        &["group", "Nope", "--info"],
        &["group", "SL23"],
        &["group", "SL23", "--sylow", "4"],
        &["search", "no_such_spec"],
    ] {
        let o = crepant(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let dir = std::env::temp_dir().join(format!("crepant-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "[{\"name\": \"X\", \"generators\": 3}]").unwrap();
    let o = crepant(&["group", "X", "--catalog", bad.to_str().unwrap(), "--info"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.json"), "{err}");
}
