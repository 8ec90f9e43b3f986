use std::path::Path;

use serde_json::{json, Value};

fn run(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("degseq").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = degseq_cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn report(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn error(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(v["error"]["exit_code"], code);
    (code, v)
}

fn schema(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_required(v: &Value, s: &Value) {
    for key in s["required"].as_array().into_iter().flatten() {
        assert!(v.get(key.as_str().unwrap()).is_some(), "missing {key} in {v}");
    }
    if let Some(props) = s["properties"].as_object() {
        for (k, sub) in props {
            if let Some(x) = v.get(k) {
                if sub.get("required").is_some() {
                    assert_required(x, sub);
                }
            }
        }
    }
}

fn without_wall_time(mut v: Value) -> Value {
    v["provenance"]["wall_time_s"] = Value::Null;
    v
}

#[test]
fn count_of_3_regular_on_six_vertices() {
    let r = report(&["count", "--seq", "3,3,3,3,3,3"]);
    assert_eq!(r["command"], "count");
    assert_eq!(r["result"]["count"], "70");
}

#[test]
fn graphical_rejects_odd_sum() {
    let r = report(&["graphical", "--seq", "1,1,1"]);
    assert_eq!(r["result"]["graphical"], false);
    let r = report(&["graphical", "--seq", "3,3,3,3", "--mode", "koren"]);
    assert_eq!(r["result"]["graphical"], true);
}

#[test]
fn asym_regular_has_finite_log_value() {
    let r = report(&["asym", "--formula", "regular", "--n", "6", "--d", "3"]);
    let lv = r["result"]["log_value"].as_f64().unwrap();
    assert!((lv.exp() - 70.0).abs() < 10.0, "{lv}");
}

#[test]
fn prob_is_exact_and_one_based() {
    let r = report(&["prob", "--seq", "2,2,2,2", "--pair", "1,2"]);
    assert_eq!(r["result"]["prob"]["exact"], "2/3");
    assert_eq!(r["result"]["pair"], json!([1, 2]));
}

#[test]
fn reports_match_schema() {
    let s = schema("report.schema.json");
    for args in [
        vec!["count", "--seq", "2,2,2"],
        vec!["asym", "--formula", "binom", "--seq", "2,2,2,2"],
        vec!["--seed", "5", "concentration", "--model", "gnm", "--n", "8", "--m", "8", "--samples", "100"],
    ] {
        let r = report(&args);
        assert_required(&r, &s);
        assert_eq!(r["provenance"]["config"]["command"]["name"], r["command"]);
    }
}

#[test]
fn parse_errors_exit_2() {
    let (code, v) = error(&["graphical", "--seq", "1,x"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(error(&["count"]).0, 2);
    assert_eq!(error(&["--threads", "0", "count", "--seq", "1,1"]).0, 2);
    assert_eq!(error(&["prob", "--seq", "1,1", "--pair", "1,3"]).0, 2);
}

#[test]
fn capacity_exits_3() {
    let (code, v) = error(&["--cap", "4", "count", "--seq", "3,3,3,3,3,3"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "capacity");
    assert_eq!(error(&["table", "--n", "11", "--m", "3"]).0, 3);
}

#[test]
fn singular_ratio_exits_4() {
    let (code, v) = error(&["ratio", "--seq", "2,1,1,2", "--pair", "1,2"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "singularity");
}

#[test]
fn csv_output() {
    let (code, out, _) = run(&["--format", "csv", "count", "--seq", "2,2,2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["count", "1"]);
    let (code, out, _) = run(&["--format", "csv", "table", "--n", "4", "--m", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() > 1);
}

#[test]
fn sample_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let r = report(&["--seed", "3", "sample", "--model", "bm", "--n", "6", "--m", "5", "--count", "20", "--out", path.to_str().unwrap()]);
    assert_eq!(r["result"]["count"], 20);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 20);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        let total: u64 = v["seq"]["degrees"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum();
        assert_eq!(total, 10);
        assert_eq!(v["model"], "bm");
    }
}

#[test]
fn results_do_not_depend_on_threads() {
    let args = |t: &'static str| vec!["--threads", t, "--seed", "9", "compare", "--model-a", "gnm", "--model-b", "bm", "--n", "10", "--m", "12", "--samples", "2000", "--bootstrap", "20"];
    let a = report(&args("1"));
    let b = report(&args("3"));
    assert_eq!(a["result"], b["result"]);
    let c = report(&["--sequential", "--seed", "9", "compare", "--model-a", "gnm", "--model-b", "bm", "--n", "10", "--m", "12", "--samples", "2000", "--bootstrap", "20"]);
    assert_eq!(a["result"], c["result"]);
    assert_eq!(c["provenance"]["exec"], "sequential");
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["--seed", "4", "concentration", "--model", "bm", "--n", "12", "--m", "20", "--samples", "500"];
    assert_eq!(without_wall_time(report(&args)), without_wall_time(report(&args)));
}

fn experiment(recipe: &Value) -> (i32, tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let rp = dir.path().join("recipe.json");
    std::fs::write(&rp, recipe.to_string()).unwrap();
    let out = dir.path().join("out");
    let (code, stdout, stderr) = run(&["experiment", "--recipe", rp.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    (code, dir, if code == 0 { stdout } else { stderr })
}

#[test]
fn empty_recipe_gives_empty_manifest() {
    let (code, dir, _) = experiment(&json!({"seed": 1, "runs": []}));
    assert_eq!(code, 0);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["runs"], json!([]));
    assert_eq!(m["seed"], 1);
    assert_required(&m, &schema("manifest.schema.json"));
}

#[test]
fn recipe_writes_one_report_per_run() {
    let runs: Vec<Value> = ["2,2,2", "3,3,3,3", "1,1,1,1"]
        .iter()
        .enumerate()
        .map(|(i, s)| json!({"name": format!("count-{i}"), "args": ["count", "--seq", s]}))
        .collect();
    let (code, dir, _) = experiment(&json!({"seed": 7, "runs": runs}));
    assert_eq!(code, 0);
    let out = dir.path().join("out");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_required(&m, &schema("manifest.schema.json"));
    let counts: Vec<Value> = m["runs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            assert_eq!(r["status"], "ok");
            let rep: Value = serde_json::from_str(&std::fs::read_to_string(out.join(r["file"].as_str().unwrap())).unwrap()).unwrap();
            assert_required(&rep, &schema("report.schema.json"));
            assert_eq!(rep["provenance"]["seed"], 7);
            rep["result"]["count"].clone()
        })
        .collect();
    assert_eq!(counts, [json!("1"), json!("1"), json!("3")]);
}

#[test]
fn failing_run_is_recorded() {
    let recipe = json!({"runs": [
        {"name": "good", "args": ["count", "--seq", "1,1"]},
        {"name": "bad", "args": ["ratio", "--seq", "2,1,1,2", "--pair", "1,2"]},
    ]});
    let (_, dir, _) = experiment(&recipe);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["runs"][0]["status"], "ok");
    assert_eq!(m["runs"][1]["status"], "error");
    assert_eq!(m["runs"][1]["exit_code"], 4);
}

#[test]
fn malformed_recipes_are_parse_errors() {
    assert_eq!(experiment(&json!({"runs": [{"name": "../x", "args": ["count", "--seq", "1,1"]}]})).0, 2);
    assert_eq!(experiment(&json!({"runs": [], "extra": 1})).0, 2);
}

#[test]
fn nested_experiment_fails_its_run() {
    let (code, dir, _) = experiment(&json!({"runs": [{"name": "x", "args": ["experiment", "--recipe", "r", "--out", "o"]}]}));
    assert_eq!(code, 0);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["runs"][0]["exit_code"], 2);
    assert!(m["runs"][0]["file"].is_null());
}
