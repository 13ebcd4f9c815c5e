use std::process::Command;

use serde_json::Value;

fn run_with(args: &[&str], env: &[(&str, &str)]) -> (i32, Vec<Value>, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_diophantus"));
    cmd.args(args).env_remove("DIOPHANTUS_TABLE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let records = stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("not JSON: {l}: {e}")))
        .collect();
    (out.status.code().unwrap(), records, String::from_utf8(out.stderr).unwrap())
}

fn run(args: &[&str]) -> (i32, Vec<Value>) {
    let (code, records, _) = run_with(args, &[]);
    (code, records)
}

fn last(records: &[Value]) -> &Value {
    records.last().expect("at least one record")
}

#[test]
fn decide_d34_examples() {
    let (code, r) = run(&["decide", "--family", "d34", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["status"], "Solvable");
    assert_eq!(r[0]["witness"], serde_json::json!([6, 1]));

    let (code, r) = run(&["decide", "--family", "d34", "--n", "-1"]);
    assert_eq!(code, 1);
    assert_eq!(r[0]["status"], "Unsolvable");
    assert_eq!(r[0]["certificate"], serde_json::json!({"character": "Theta", "value": -1}));
}

#[test]
fn decide_other_families() {
    let (code, r) = run(&["decide", "--family", "negpell", "--d", "34"]);
    assert_eq!((code, &r[0]["status"]), (1, &Value::from("Unsolvable")));

    let (code, r) = run(&["decide", "--family", "negpell", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["witness"], serde_json::json!([1, 1]));

    let (code, r) = run(&["decide", "--family", "gauss64", "--n", "3"]);
    assert_eq!(code, 1);
    assert_eq!(r[0]["status"], serde_json::json!({"LocallyUnsolvable": 2}));
    assert!(r[0]["local_reports"].is_array());

    let (code, r) = run(&["decide", "--family", "gauss64", "--n", "1"]);
    assert_eq!(code, 1);
    assert_eq!(r[0]["certificate"]["character"], "K_L");

    let (code, r) = run(&["decide", "--family", "multinorm534", "--n", "16"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["witness"], serde_json::json!([2, 0, 0, 0]));

    let (code, _) = run(&["decide", "--family", "multinorm534", "--n", "-1"]);
    assert_eq!(code, 1);

    let (code, r) = run(&["decide", "--family", "x2dy2prime", "--d", "64", "--n", "73"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["witness"], serde_json::json!([3, 1]));

    // 12 = 4^2 - 2^2 * 1^2
    let (code, r) = run(&["decide", "--family", "split", "--d", "2", "--n", "12"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["witness"], serde_json::json!([4, 1]));
}

#[test]
fn unsupported_discriminant_is_inapplicable() {
    let (code, r) = run(&["decide", "--family", "x2dy2prime", "--d", "27", "--n", "31"]);
    assert_eq!(code, 2);
    assert_eq!(r[0]["status"], "Inapplicable");
}

#[test]
fn table_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "# Z[sqrt(-27)]\n27 -2 0 0 1\n").unwrap();
    let good = good.to_str().unwrap();
    let missing = dir.path().join("missing.txt");
    let missing = missing.to_str().unwrap();
    let args = ["decide", "--family", "x2dy2prime", "--d", "27", "--n", "31"];

    let (code, r, _) = run_with(&args, &[("DIOPHANTUS_TABLE", good)]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["witness"], serde_json::json!([2, 1]));

    // The flag wins over the environment in both directions.
    let mut with_flag = args.to_vec();
    with_flag.extend(["--table", good]);
    let (code, _, _) = run_with(&with_flag, &[("DIOPHANTUS_TABLE", missing)]);
    assert_eq!(code, 0);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--table", missing]);
    let (code, r, err) = run_with(&with_flag, &[("DIOPHANTUS_TABLE", good)]);
    assert_eq!(code, 3);
    assert_eq!(r[0]["status"], "Error");
    assert!(err.contains("cannot read"));
}

#[test]
fn verify_examples() {
    let (code, r) = run(&["verify", "--family", "d34", "--range", "0:0"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["tested"], 0);

    let (code, r) = run(&["verify", "--family", "d34", "--range", "-300:300", "--workers", "2"]);
    assert_eq!(code, 0);
    assert_eq!((r[0]["tested"].as_u64(), r[0]["mismatches"].as_u64()), (Some(600), Some(0)));

    let (code, r) = run(&["verify", "--family", "gauss64", "--range", "1:2000"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["agreements"], 2000);

    let (code, _) = run(&["verify", "--family", "multinorm534", "--range", "-100:100", "--bound", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn profile_examples() {
    let (code, r) = run(&["profile", "--family", "d34", "--n", "-1"]);
    assert_eq!(code, 1);
    let entries: Vec<_> = r.iter().filter(|v| v["record"] == "entry").collect();
    assert_eq!(entries.len(), 1);
    assert_eq!(
        (&entries[0]["place"], &entries[0]["character"], &entries[0]["value"], &entries[0]["free_sign"]),
        (&Value::from(2), &Value::from("Theta"), &Value::from(-1), &Value::from(false))
    );
    assert_eq!(last(&r)["combinable"], false);

    let (code, r) = run(&["profile", "--family", "d34", "--n", "33"]);
    assert_eq!(code, 0);
    assert_eq!(r.iter().filter(|v| v["free_sign"] == true).count(), 2);
    assert_eq!(last(&r)["combinable"], true);

    let (code, r) = run(&["profile", "--family", "d34", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(r.iter().filter(|v| v["record"] == "entry").all(|v| v["value"] == 1));
    assert_eq!(last(&r)["combinable"], true);

    let (code, r) = run(&["profile", "--family", "d34", "--n", "3"]);
    assert_eq!(code, 1);
    assert_eq!(r.len(), 1);
    assert!(r[0]["status"]["LocallyUnsolvable"].is_number());
}

#[test]
fn local_examples() {
    let places = |r: &[Value]| -> Vec<(Value, bool)> {
        r.iter()
            .filter(|v| v["record"] == "place")
            .map(|v| (v["place"].clone(), v["solvable"].as_bool().unwrap()))
            .collect()
    };
    let (code, r) = run(&["local", "--eq", "1,0,-34,0,0,0", "--n", "-1"]);
    assert_eq!(code, 0);
    assert!(places(&r).iter().all(|(_, ok)| *ok));
    assert_eq!(last(&r)["status"], "LocallySolvable");

    let (code, r) = run(&["local", "--eq", "1,0,16,0,16,4", "--n", "3"]);
    assert_eq!(code, 1);
    assert!(places(&r).contains(&(Value::from(2), false)));

    let (code, r) = run(&["local", "--eq", "1,0,1,0,0,0", "--n", "-1"]);
    assert_eq!(code, 1);
    assert!(places(&r).contains(&(Value::from("inf"), false)));
    assert_eq!(last(&r)["status"], serde_json::json!({"LocallyUnsolvable": "inf"}));
}

#[test]
fn witness_orbit() {
    let (code, r) = run(&["witness", "--d", "34", "--n", "2", "--count", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["orbit"], serde_json::json!([[6, 1], [414, 71], [28974, 4969]]));
    let (code, _) = run(&["witness", "--d", "34", "--n", "-1"]);
    assert_eq!(code, 1);
}

#[test]
fn usage_and_input_errors() {
    for args in [
        vec!["decide", "--family", "bogus", "--n", "1"],
        vec!["decide", "--family", "x2dy2prime", "--n", "5"],
        vec!["decide", "--family", "d34"],
        vec!["verify", "--family", "d34", "--range", "5"],
        vec!["verify", "--family", "d34", "--range", "1:5", "--oracle", "definite"],
        vec!["local", "--eq", "1,2,3", "--n", "1"],
        vec![],
    ] {
        let (code, r, err) = run_with(&args, &[]);
        assert_eq!(code, 64, "{args:?}");
        assert!(r.is_empty());
        assert!(!err.is_empty());
    }
    // Zero discriminant is a domain error, not a usage error.
    let (code, r) = run(&["local", "--eq", "1,2,1,0,0,0", "--n", "1"]);
    assert_eq!(code, 3);
    assert_eq!(r[0]["status"], "Error");
    let (code, _) = run(&["decide", "--family", "d34", "--n", "0"]);
    assert_eq!(code, 3);
}

#[test]
fn records_share_one_schema() {
    let keys = |v: &Value| -> Vec<String> { v.as_object().unwrap().keys().cloned().collect() };
    let a = run(&["decide", "--family", "d34", "--n", "2"]).1;
    let b = run(&["decide", "--family", "gauss64", "--n", "17"]).1;
    let c = run(&["decide", "--family", "negpell", "--d", "13"]).1;
    let d = run(&["local", "--eq", "1,0,1,0,0,0", "--n", "5"]).1;
    let reference = keys(&a[0]);
    for r in [&b[0], &c[0], last(&d)] {
        assert_eq!(keys(r), reference);
    }
}

#[test]
fn records_rerun_from_their_argv() {
    for args in [
        vec!["decide", "--family", "d34", "--n", "-33"],
        vec!["decide", "--family", "gauss64", "--n", "4097"],
        vec!["profile", "--family", "d34", "--n", "33"],
        vec!["witness", "--d", "7", "--n", "2"],
    ] {
        let (code, first) = run(&args);
        let record = last(&first).clone();
        let argv: Vec<String> = record["argv"]
            .as_array()
            .unwrap()
            .iter()
            .skip(1)
            .map(|v| v.as_str().unwrap().to_owned())
            .collect();
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        let (code2, second) = run(&argv);
        assert_eq!(code, code2);
        let strip = |mut v: Value| {
            v.as_object_mut().unwrap().remove("elapsed_ms");
            v
        };
        assert_eq!(strip(record), strip(last(&second).clone()), "{args:?}");
    }
}
