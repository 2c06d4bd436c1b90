use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn mmk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmk"))
        .args(args)
        .env_remove("MMK_WORKERS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = mmk(&full);
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (code(&out), v)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const SIM: [&str; 10] = ["--n", "100", "--alpha", "10", "--beta", "4", "--trials", "500", "--seed", "9"];

#[test]
fn every_report_has_the_common_envelope() {
    let zoo = fixture("zoo.mmk");
    let acts = fixture("table_activations.csv");
    let triples = fixture("table_triples.csv");
    let mut runs: Vec<Vec<&str>> = vec![
        vec!["parse", &zoo],
        vec!["parse", "--check", &zoo],
        vec!["classify", &zoo],
        vec!["equiv", &zoo, "--map", "F", "--map", "G"],
        vec!["detect", "--data", &acts, "--triples", &triples, "--n", "11"],
    ];
    let mut sim = vec!["simulate"];
    sim.extend(SIM);
    let mut ver = vec!["verify"];
    ver.extend(SIM);
    runs.push(sim);
    runs.push(ver);
    for args in runs {
        let (status, v) = json(&args);
        assert!(status == 0 || status == 1, "{args:?}");
        assert_eq!(v["command"], args[0], "{args:?}");
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
        assert!(v["inputs"].is_object() && v["results"].is_object());
        assert!(v["timing_ms"].as_f64().unwrap() >= 0.0);
        let seeded = matches!(args[0], "simulate" | "verify");
        assert_eq!(v["seed"].is_u64(), seeded, "{args:?}");
    }
}

#[test]
fn parse_reports_counts_and_canonical_form_matches_golden() {
    for name in ["zoo.mmk", "concepts.mmk", "mutual.mmk", "partial.mmk"] {
        let out = mmk(&["parse", "--canonical", &fixture(name)]);
        assert_eq!(code(&out), 0);
        let golden = std::fs::read_to_string(fixture(&format!("golden/{name}"))).unwrap();
        assert_eq!(stdout(&out), golden, "{name}");
    }
    let (status, v) = json(&["parse", &fixture("zoo.mmk")]);
    assert_eq!(status, 0);
    assert_eq!(v["results"]["ok"], true);
    assert_eq!(v["results"]["declarations"]["theories"], 9);
    assert_eq!(v["results"]["declarations"]["maps"], 2);
}

#[test]
fn parse_errors_exit_two_with_a_location() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"world w { atoms: a; edges: r = {a b}; }").unwrap();
    let path = file.path().to_str().unwrap();
    let out = mmk(&["parse", path]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains(":1:35: error[E003]"), "{}", stdout(&out));
    let (status, v) = json(&["parse", path]);
    assert_eq!(status, 2);
    let d = &v["results"]["diagnostics"][0];
    assert_eq!(d["code"], "E003");
    assert_eq!(d["span"]["start"]["line"], 1);
    assert_eq!(d["span"]["start"]["column"], 35);
    assert_eq!(mmk(&["parse", "/no/such/file.mmk"]).status.code(), Some(2));
}

#[test]
fn check_flags_warnings_without_failing() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"world w { atoms: a; edges: r = {a}; }\ntheory p : panpsychism { world: w; Q: none; }\n")
        .unwrap();
    let (status, v) = json(&["parse", "--check", file.path().to_str().unwrap()]);
    assert_eq!(status, 0, "{v}");
    assert_eq!(v["results"]["errors"], 0);
    assert_eq!(v["results"]["warnings"], 1);
    assert_eq!(v["results"]["diagnostics"][0]["code"], "W001");
}

#[test]
fn classify_tags_the_zoo() {
    let (status, v) = json(&["classify", &fixture("zoo.mmk")]);
    assert_eq!(status, 0);
    let theories = v["results"]["theories"].as_array().unwrap();
    assert_eq!(theories.len(), 9);
    for t in theories {
        let families: Vec<&str> = t["families"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
        assert!(families.contains(&t["declared"].as_str().unwrap()), "{t}");
        assert!(t["violations"].as_array().unwrap().is_empty(), "{t}");
    }
    let table = stdout(&mmk(&["classify", &fixture("zoo.mmk")]));
    assert!(table.lines().any(|l| l.starts_with("physicalist") && l.contains("materialism iit")));
    assert_eq!(code(&mmk(&["--format", "csv", "classify", &fixture("zoo.mmk")])), 2);
}

#[test]
fn equiv_classes_and_theory_consistency() {
    let (status, v) = json(&["equiv", &fixture("mutual.mmk"), "--map", "F", "--map", "G"]);
    assert_eq!(status, 0);
    assert_eq!(v["results"]["report"]["class"], "MutualNonEquivalence");
    let (status, v) = json(&["equiv", &fixture("partial.mmk"), "--map", "F", "--map", "G"]);
    assert_eq!(status, 0);
    assert_eq!(v["results"]["report"]["class"], "PartialEquivalenceMaterial");
    let (status, _) = json(&[
        "equiv",
        &fixture("mutual.mmk"),
        "--map",
        "F",
        "--map",
        "G",
        "--theory",
        "materialism_example",
    ]);
    assert_eq!(status, 1);
    let out = mmk(&["equiv", &fixture("zoo.mmk"), "--map", "F", "--map", "Nope"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Nope"));
}

#[test]
fn simulate_json_table_and_csv_agree() {
    let mut args = vec!["simulate"];
    args.extend(SIM);
    let (status, v) = json(&args);
    assert_eq!(status, 0);
    let r = &v["results"];
    let table = stdout(&mmk(&args));
    let row = |label: &str| -> f64 {
        let line = table.lines().find(|l| l.starts_with(label)).unwrap();
        line[label.len()..].trim().parse().unwrap()
    };
    assert_eq!(row("mean |A ∪ B|"), r["mean_union"].as_f64().unwrap());
    assert_eq!(row("in-union frequency"), r["in_union_freq"].as_f64().unwrap());
    assert_eq!(row("outside frequency"), r["outside_freq"].as_f64().unwrap());

    let mut csv_args = vec!["--format", "csv"];
    csv_args.extend(&args);
    let csv = stdout(&mmk(&csv_args));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 101);
    assert_eq!(lines[0], "neuron,frequency");
    let freqs = r["neuron_freq"].as_array().unwrap();
    for (i, line) in lines[1..].iter().enumerate() {
        let (idx, f) = line.split_once(',').unwrap();
        assert_eq!(idx.parse::<usize>().unwrap(), i);
        assert_eq!(f.parse::<f64>().unwrap(), freqs[i].as_f64().unwrap());
    }
}

#[test]
fn simulate_edge_and_error_cases() {
    let out = mmk(&["simulate", "--n", "20", "--alpha", "0", "--beta", "0", "--trials", "5", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let out = mmk(&["simulate", "--n", "20", "--alpha", "4", "--beta", "2", "--trials", "5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
    let out = mmk(&["simulate", "--n", "5", "--alpha", "9", "--beta", "1", "--trials", "5", "--seed", "1"]);
    assert_eq!(code(&out), 1);
    let out = mmk(&["simulate", "--n", "5", "--alpha", "x", "--beta", "1", "--trials", "5", "--seed", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn workers_come_from_the_environment_unless_given() {
    let run = |env: Option<&str>, flag: Option<&str>| -> Value {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_mmk"));
        cmd.arg("--json").arg("simulate").args(SIM).env_remove("MMK_WORKERS");
        if let Some(w) = env {
            cmd.env("MMK_WORKERS", w);
        }
        if let Some(w) = flag {
            cmd.args(["--workers", w]);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice(&out.stdout).unwrap()
    };
    assert_eq!(run(None, None)["inputs"]["workers"], 1);
    assert_eq!(run(Some("3"), None)["inputs"]["workers"], 3);
    assert_eq!(run(Some("3"), Some("2"))["inputs"]["workers"], 2);
    let a = run(Some("3"), None)["results"].clone();
    let b = run(None, Some("3"))["results"].clone();
    assert_eq!(a, b);
}

#[test]
fn verify_exit_status_follows_the_tolerances() {
    for (trials, want) in [("20000", 0), ("3", 1)] {
        let args = ["verify", "--n", "100", "--alpha", "10", "--beta", "4", "--trials", trials, "--seed", "3"];
        let (status, v) = json(&args);
        let rows = v["results"]["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 5);
        let all = rows.iter().all(|r| r["within"] == true);
        assert_eq!(v["results"]["all_within"], all);
        assert_eq!(status, if all { 0 } else { 1 });
        assert_eq!(status, want);
        let csv = stdout(&mmk(&[&["--format", "csv"][..], &args[..]].concat()));
        assert_eq!(csv.lines().count(), 6);
        for (line, row) in csv.lines().skip(1).zip(rows) {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells[0], row["quantity"]);
            assert_eq!(cells[1].parse::<f64>().unwrap(), row["analytic"].as_f64().unwrap());
            assert_eq!(cells[2].parse::<f64>().unwrap(), row["empirical"].as_f64().unwrap());
        }
    }
}

#[test]
fn detect_on_the_concept_table() {
    let acts = fixture("table_activations.csv");
    let triples = fixture("table_triples.csv");
    let (status, v) = json(&["detect", "--data", &acts, "--triples", &triples, "--n", "11"]);
    assert_eq!(status, 0);
    let test = &v["results"]["test"];
    assert_eq!(test["reject"], true);
    for t in test["triples"].as_array().unwrap() {
        assert_eq!(t["observed_overlap"], 4);
        assert!((t["p_value"].as_f64().unwrap() - 15.0 / 330.0).abs() < 1e-12);
    }
    assert_eq!(v["results"]["estimate"]["beta_hat"], 2.0);
    let csv = stdout(&mmk(&["--format", "csv", "detect", "--data", &acts, "--triples", &triples, "--n", "11"]));
    assert_eq!(csv.lines().count(), 4);
    let out = mmk(&["detect", "--data", &acts, "--triples", &triples, "--n", "5"]);
    assert_eq!(code(&out), 1);
    let out = mmk(&["detect", "--data", "/no/such.csv", "--triples", &triples, "--n", "11"]);
    assert_eq!(code(&out), 2);
}
