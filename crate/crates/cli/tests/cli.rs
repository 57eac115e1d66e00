use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn cinorm(args: &[&str], cache: &Path, threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cinorm"))
        .args(args)
        .env("CINORM_CACHE_DIR", cache)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn suite_reports_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["aff-z", "seven-fcomm", "gbar-defect"] {
        let mut reports = Vec::new();
        for threads in ["1", "4"] {
            let path = dir.path().join(format!("{suite}-{threads}.json"));
            let timings = dir.path().join(format!("{suite}-{threads}.timings.json"));
            let out = cinorm(
                &["verify", "--suite", suite, "--seed", "42", "--budget", "200", "--out", path.to_str().unwrap(), "--timings", timings.to_str().unwrap()],
                dir.path(),
                threads,
            );
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
            assert!(timings.exists());
            reports.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(reports[0], reports[1], "{suite}");
        let v: Value = serde_json::from_slice(&reports[0]).unwrap();
        assert_eq!(v["config"]["seed"], 42);
        assert!(v["version"].is_string() && v["passed"] == true);
    }
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 3, "budget": 10}"#).unwrap();
    let out = cinorm(&["verify", "--suite", "lemma23", "--config", cfg.to_str().unwrap()], dir.path(), "1");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["config"]["budget"], 10);
    std::fs::write(&cfg, r#"{"seed": 3, "sede": 4}"#).unwrap();
    let out = cinorm(&["verify", "--suite", "lemma23", "--config", cfg.to_str().unwrap()], dir.path(), "1");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| cinorm(args, dir.path(), "1").status.code();
    assert_eq!(code(&["verify", "--suite", "nope"]), Some(2));
    assert_eq!(code(&["qk", "--group", "sn:x", "--k", "(1 2)"]), Some(2));
    assert_eq!(code(&["qk", "--group", "sn:4", "--k", "(1 5)"]), Some(2));
    assert_eq!(code(&["cl", "--group", "free:2"]), Some(2));
    assert_eq!(code(&["qk", "--group", "sn:9", "--k", "(1 2)", "--limit", "100", "--no-cache"]), Some(3));
    assert_eq!(code(&["qk", "--group", "sn:4", "--k", "(1 2)(3 4)", "--no-cache"]), Some(1));
    assert_eq!(code(&["norm-verify", "--group", "sn:4", "--norm", "support"]), Some(0));
}

#[test]
fn qk_tables_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["qk", "--group", "an:5", "--k", "(1 2 3 4 5)"];
    let first = cinorm(&args, dir.path(), "4");
    let second = cinorm(&args, dir.path(), "1");
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let v = json(&first);
    assert_eq!(v["values"].as_array().unwrap().len(), 60);
    assert_eq!(v["meta"]["diameter"], "3/1");
    let list = cinorm(&["cache", "list"], dir.path(), "1");
    assert_eq!(String::from_utf8_lossy(&list.stdout).lines().count(), 1);

    let mut tsv_args = args.to_vec();
    tsv_args.extend(["--format", "tsv"]);
    let tsv = cinorm(&tsv_args, dir.path(), "1");
    let text = String::from_utf8(tsv.stdout).unwrap();
    assert!(text.starts_with("# group=an:5"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 60);

    let cl = json(&cinorm(&["cl", "--group", "an:5"], dir.path(), "1"));
    let values = cl["values"].as_array().unwrap();
    assert_eq!(values.len(), 60);
    assert!(values.iter().all(|r| r[1] == "1/1" || r[1] == "0/1"));
}

#[test]
fn report_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        let out = cinorm(args, dir.path(), "2");
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        json(&out)
    };
    let f = run(&["fcomm", "--group", "wreath:sn:3:zn:3", "--f", "(1 2), (1 2 3)", "--g", "(2 3), (1 3)"]);
    for key in ["target", "factors", "verified", "factor_count", "audit"] {
        assert!(f.get(key).is_some(), "{key}");
    }
    assert_eq!(f["verified"], true);
    assert!(f["factor_count"].as_u64().unwrap() <= 7);

    let e = run(&["energy", "--group", "sn:6", "--h", "(1 2), (1 2 3)", "--m", "2"]);
    assert_eq!(e["p"], 2);
    assert_eq!(e["energies"][0]["value"], "6/1");
    assert_eq!(e["energies"][1]["value"], "infinite");
    assert!(e["inequality_checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));

    let p = run(&["packing", "--group", "sn:6", "--h", "(1 2), (1 2 3)"]);
    assert_eq!((p["p"].clone(), p["exhausted"].clone()), (Value::from(2), Value::Bool(true)));

    let d = run(&["qm", "defect", "--pattern", "a b", "--seed", "5", "--budget", "300"]);
    assert_eq!(d["certified"], "sampled_lower_bound");
    assert_eq!((d["seed"].clone(), d["budget"].clone()), (Value::from(5), Value::from(300)));
    assert!(d["convention"].is_string());

    let s = run(&["qm", "scl-bounds", "--pattern", "a b", "--element", "a b A B", "--defect", "3", "--n", "64", "--cl", "1:1"]);
    assert_eq!((s["lower"].clone(), s["upper"].clone()), (Value::from("61/768"), Value::from("1/1")));

    let h = run(&["qm", "homogenize", "--pattern", "a b", "--element", "a b", "--n", "8", "--defect", "3"]);
    assert_eq!(h["center"], "1/1");
    assert_eq!(h["radius"], "3/8");

    let st = run(&["stabilize", "--group", "sn:7", "--element", "(1 2 3)(4 5)", "--n-max", "10"]);
    assert_eq!((st["upper"].clone(), st["exact_zero"].clone()), (Value::from("0/1"), Value::Bool(true)));

    let c = run(&["cld", "--group", "an:5"]);
    assert_eq!(c["cld"], "1/1");
}
