use std::path::Path;
use std::process::{Command, Output};

use kplane_cli::report::{round15, sig15, CHECK_COLUMNS};
use kplane_cli::{ExperimentFile, Overrides};

fn kplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kplane")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const SMALL: &str = r#"{
  "schema_version": 1,
  "seed": 7,
  "checks": [
    { "check_id": "rk_p1_equality", "params": { "n": 3, "k": 1, "mu": 0.0 }, "budget": { "samples": 20000 } },
    { "check_id": "furstenberg_tzkoni", "budget": { "samples": 3000 } },
    { "check_id": "funk_sharp", "params": { "n": 3, "k": 2, "members": 2 }, "budget": { "samples": 2000, "order": 8 } }
  ]
}"#;

#[test]
fn constants_print_fifteen_digits() {
    let o = kplane(&["constants", "omega", "--n", "5", "--k", "2", "--p", "1", "--mu", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1.00000000000000");

    let o = kplane(&["constants", "big-omega", "--n", "2", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - (std::f64::consts::PI / 2.0).cbrt()).abs() < 1e-14);
    assert_eq!(stdout(&o).trim().len(), "1.16244735150963".len());
}

#[test]
fn constants_domain_errors_exit_2() {
    let o = kplane(&["constants", "omega", "--n", "2", "--k", "3", "--p", "1", "--mu", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires k < n"), "{}", stderr(&o));

    let o = kplane(&["constants", "omega", "--n", "3", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing --p"));

    let o = kplane(&["constants", "omega", "--n", "3", "--k", "1", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constants_json_format() {
    let o = kplane(&["constants", "gardner", "--n", "3", "--k", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn transform_matches_oracle() {
    let o = kplane(&["transform", "kplane", "--n", "3", "--k", "1", "--field", "gaussian", "--planes", "4", "--order", "48"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let (a, b) = (r["value"].as_f64().unwrap(), r["oracle"].as_f64().unwrap());
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    let o = kplane(&["transform", "funk", "--n", "3", "--k", "2", "--field", "constant", "--planes", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("index,distance,value,stderr,oracle\n"));

    let o = kplane(&["transform", "kplane", "--n", "3", "--k", "1", "--field", "not-a-field"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_check_passes_and_reports() {
    let o = kplane(&["check", "--id", "furstenberg_tzkoni", "--samples", "4000", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["summary"]["passed"], 1);
    let r = &v["results"][0];
    assert_eq!(r["check_id"], "furstenberg_tzkoni");
    assert_eq!(r["verdict"], "PassEquality");
    assert_eq!(r["seed"], 3);
    assert!(r["relation"].as_str().is_some_and(|s| !s.is_empty()));
    for key in ["lhs", "rhs", "constant", "ratio", "stderr", "margin_sigma", "params"] {
        assert!(!r[key].is_null(), "{key}");
    }
}

#[test]
fn misspecified_checks_exit_2() {
    // μ must exceed k − n/p.
    let o =
        kplane(&["check", "--id", "rk_weighted_bound", "--n", "3", "--k", "1", "--p", "2", "--mu", "-0.6", "--samples", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires"), "{}", stderr(&o));

    let o = kplane(&["check", "--id", "no_such_check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown check"));

    let o = kplane(&["check", "--id", "measure_transfer", "--members", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("does not take parameter"));
}

#[test]
fn invalid_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("version.json", r#"{"schema_version": 2, "seed": 1, "checks": [{"check_id": "busemann"}]}"#),
        ("unknown.json", r#"{"schema_version": 1, "seed": 1, "extra": 0, "checks": [{"check_id": "busemann"}]}"#),
        ("nested.json", r#"{"schema_version": 1, "seed": 1, "checks": [{"check_id": "busemann", "budget": {"sample": 5}}]}"#),
        ("params.json", r#"{"schema_version": 1, "seed": 1, "checks": [{"check_id": "busemann", "params": {"nu": 1}}]}"#),
        ("empty.json", r#"{"schema_version": 1, "seed": 1, "checks": []}"#),
        ("id.json", r#"{"schema_version": 1, "seed": 1, "checks": [{"check_id": "nothing"}]}"#),
        ("syntax.json", r#"{"schema_version": 1,"#),
    ];
    for (name, text) in cases {
        let path = write(dir.path(), name, text);
        let o = kplane(&["check", &path]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", stderr(&o));
    }
    let o = kplane(&["check", "/nonexistent/suite.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_and_inconclusive_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let tight = r#"{"schema_version": 1, "seed": 1, "checks": [
        {"check_id": "rk_p1_equality", "budget": {"samples": 2000}, "tolerance": {"rel_tol": 1e-9}}]}"#;
    let o = kplane(&["check", &write(dir.path(), "tight.json", tight)]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));

    let o = kplane(&["check", "--id", "rk_p1_equality", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["inconclusive"], 1);
}

#[test]
fn reports_are_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "small.json", SMALL);
    let mut outs = Vec::new();
    for threads in ["1", "1", "4"] {
        let o = kplane(&["check", &path, "--threads", threads]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outs.push(o.stdout);
    }
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0], outs[2]);

    let o = kplane(&["check", &path, "--seed", "8"]);
    assert_ne!(o.stdout, outs[0]);
}

#[test]
fn csv_report_has_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "small.json", SMALL);
    let out = dir.path().join("report.csv");
    let o = kplane(&["check", &path, "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let mut r = csv::Reader::from_path(&out).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, CHECK_COLUMNS);
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][0], "rk_p1_equality");
    assert_eq!(&rows[0][1], "equality");
}

#[test]
fn output_section_of_the_file_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let text = format!(
        r#"{{"schema_version": 1, "seed": 2, "checks": [{{"check_id": "furstenberg_tzkoni", "budget": {{"samples": 2000}}}}],
            "output": {{"format": "csv", "path": {:?}}}}}"#,
        out.display().to_string()
    );
    let o = kplane(&["check", &write(dir.path(), "f.json", &text)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("check_id,kind,"));
}

#[test]
fn explore_exit_codes() {
    let o = kplane(&[
        "explore",
        "--target",
        "star-sections",
        "--family",
        "random-smooth",
        "--n",
        "3",
        "--j",
        "1",
        "--k",
        "2",
        "--members",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = kplane(&["explore", "--target", "star-sections", "--family", "extremizer", "--n", "3", "--j", "1", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = kplane(&[
        "explore",
        "--target",
        "star-sections",
        "--family",
        "ball",
        "--n",
        "3",
        "--j",
        "2",
        "--k",
        "2",
        "--members",
        "3",
        "--samples",
        "500",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["best_ratio"], v["bound"]);
    assert_eq!(v["violation_found"], false);
    assert_eq!(v["evaluated"], 3);
}

#[test]
fn explore_star_search_with_tiny_budget_counts_members() {
    let o = kplane(&[
        "explore",
        "--target",
        "star-sections",
        "--family",
        "random-smooth",
        "--n",
        "3",
        "--j",
        "1",
        "--k",
        "2",
        "--members",
        "5",
        "--refine",
        "0",
        "--samples",
        "20",
        "--order",
        "4",
        "--format",
        "csv",
    ]);
    assert!(matches!(o.status.code(), Some(0) | Some(4)), "{}", stderr(&o));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let row = r.records().next().unwrap().unwrap();
    let evaluated: usize = row[10].parse().unwrap();
    let skipped: usize = row[11].parse().unwrap();
    let inconclusive: usize = row[12].parse().unwrap();
    assert_eq!(evaluated, 5);
    assert!(skipped + inconclusive <= 5);
}

#[test]
fn list_checks_enumerates_the_registry() {
    let o = kplane(&["list-checks"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), kplane_core::harness::registry().len());
    assert!(rows.iter().all(|r| r["budget"]["samples"].as_u64().unwrap() > 0));

    let o = kplane(&["list-checks", "--format", "csv"]);
    assert!(stdout(&o).starts_with("id,kind,samples,order,params,relation\n"));
}

#[test]
fn zero_threads_is_a_usage_error() {
    let o = kplane(&["check", "--id", "furstenberg_tzkoni", "--threads", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn number_formatting() {
    assert_eq!(sig15(1.0), "1.00000000000000");
    assert_eq!(sig15(0.5), "0.500000000000000");
    assert_eq!(sig15(123.456), "123.456000000000");
    assert_eq!(sig15(9.999999999999999), "10.0000000000000");
    assert_eq!(sig15(1.5e20), "1.50000000000000e20");
    assert_eq!(sig15(-2.5e-7), "-2.50000000000000e-7");
    assert_eq!(round15(0.1 + 0.2), 0.3);
    assert_eq!(round15(f64::INFINITY), f64::INFINITY);
}

#[test]
fn file_specs_take_registry_budgets_and_overrides() {
    let f = ExperimentFile::parse(SMALL).unwrap();
    let specs = f.specs(Overrides::default()).unwrap();
    assert_eq!(specs.len(), 3);
    assert_eq!(specs[0].budget.samples, 20000);
    assert_eq!(specs[2].budget.order, 8);
    assert!(specs.iter().all(|s| s.seed == 7));

    let f = ExperimentFile::parse(r#"{"schema_version": 1, "seed": 4, "checks": [{"check_id": "busemann"}]}"#).unwrap();
    let info = kplane_core::harness::registry().iter().find(|c| c.id == "busemann").unwrap();
    let s = &f.specs(Overrides::default()).unwrap()[0];
    assert_eq!(s.budget, info.budget);
    let s = &f.specs(Overrides { seed: Some(9), samples: Some(10) }).unwrap()[0];
    assert_eq!((s.seed, s.budget.samples), (9, 10));
}

#[test]
fn default_suite_parses() {
    let f = ExperimentFile::parse(kplane_cli::experiment::DEFAULT_SUITE).unwrap();
    assert!(f.specs(Overrides::default()).is_ok());
}
