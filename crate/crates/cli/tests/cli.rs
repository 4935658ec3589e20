use detrep_cli::{run, run_args, EXIT_INPUT, EXIT_OK};
use serde_json::{json, Value};

fn call(args: &[&str]) -> (i32, Value) {
    let out = run_args(std::iter::once("detrep").chain(args.iter().copied()));
    let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out.code, v)
}

fn request(body: &Value) -> (i32, Value) {
    let text = body.to_string();
    let out = run(["detrep", "request"], &mut text.as_bytes());
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

#[test]
fn documented_examples() {
    let (code, v) = call(&[
        "check-subscheme",
        "--matrix",
        "[[2,3,5],[1,2,4]]",
        "--degree",
        "5",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["answer"], "no");
    assert_eq!(v["reason"], "SubdiagonalBlockDegree");
    assert_eq!(v["k"], 3);
    assert_eq!(v["blockDegree"], 1);

    let (_, v) = call(&["betti-from-hf", "--h", "[1,2,3,4,5,3,2]"]);
    assert_eq!(v, json!({"gens": [7, 5, 5, 5], "syz": [8, 8, 6]}));

    let (_, v) = call(&[
        "check-representable",
        "--matrix",
        "[[0,1,10,11],[-1,0,9,10],[-5,-4,5,6],[-8,-7,2,3]]",
    ]);
    assert_eq!(v["answer"], "yes");
    assert_eq!(v["degree"], 8);
}

#[test]
fn scan_threshold_and_corollary() {
    let (_, v) = call(&["scan", "--matrix", "[[2,3,5],[1,2,4]]", "--dmax", "9"]);
    let answers: Vec<&str> = v["scan"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["answer"].as_str().unwrap())
        .collect();
    assert_eq!(
        answers,
        ["no", "no", "no", "yes", "no", "yes", "yes", "yes", "yes"]
    );

    let (_, v) = call(&["threshold", "--matrix", "[[2,3,5],[1,2,4]]"]);
    assert_eq!(v["threshold"], 7);

    let (_, v) = call(&[
        "corollary",
        "--matrix",
        "[[2,3,5],[1,2,4]]",
        "--degree",
        "5",
    ]);
    assert_eq!(v["case"], "ii");
    assert_eq!(v["answer"], "no");
}

#[test]
fn verdicts_never_change_the_exit_code() {
    let (code, v) = call(&["check-representable", "--matrix", "[[1,3],[-1,1]]"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["answer"], "no");
}

#[test]
fn input_errors_carry_pointers() {
    let (code, v) = call(&["check-representable", "--matrix", "[[1,2],[3,true]]"]);
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["error"]["path"], "/1/1");
    assert_eq!(v["error"]["source"], "--matrix");

    let (code, v) = call(&["check-representable", "--matrix", "[[1,2,3],[3,4,9]]"]);
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["error"]["path"], "/1/2");

    let (code, v) = request(&json!({"command": "scan", "payload": {"matrix": [[1, 1]], "dmx": 3}}));
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["error"]["path"], "/payload/dmx");

    let (code, v) = request(
        &json!({"command": "scan", "payload": {"matrix": [[1, 1]]}, "options": {"colour": 1}}),
    );
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["error"]["path"], "/options/colour");

    let (code, _) = request(&json!({"command": "frobnicate", "payload": {}}));
    assert_eq!(code, EXIT_INPUT);

    let (code, v) = call(&["check-subscheme", "--matrix", "[[-1,1]]", "--degree", "2"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(v["error"]["message"]
        .as_str()
        .unwrap()
        .contains("not a valid dHB"));

    let (code, _) = call(&["witness", "--matrix", "[[3]]", "--prime", "32001"]);
    assert_eq!(code, EXIT_INPUT);

    let (code, _) = call(&["no-such-command"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn envelopes_match_flags() {
    let (_, a) = call(&[
        "check-subscheme",
        "--matrix",
        "[[2,3,5],[1,2,4]]",
        "--degree",
        "6",
    ]);
    let (_, b) = request(
        &json!({"command": "check-subscheme", "payload": {"matrix": [[2, 3, 5], [1, 2, 4]], "degree": 6}}),
    );
    assert_eq!(a, b);

    let (_, a) = call(&[
        "witness",
        "--matrix",
        "[[1,3],[-1,1]]",
        "--seed",
        "5",
        "--trials",
        "4",
    ]);
    let (_, b) = request(&json!({
        "command": "witness",
        "payload": {"matrix": [[1, 3], [-1, 1]]},
        "options": {"seed": 5, "trials": 4},
    }));
    assert_eq!(a, b);
}

#[test]
fn normalized_matrices_round_trip() {
    let cases: &[(&str, Option<&str>)] = &[
        ("[[2,3,5],[1,2,4]]", Some("5")),
        ("[[2,3,5],[1,2,4]]", Some("4")),
        ("[[1,3,3],[-1,1,1]]", Some("2")),
        ("[[3,4,6],[-2,-1,1],[-3,-2,0]]", None),
        ("[[1,0],[3,-1]]", None),
        ("[[0,1,10,11],[-1,0,9,10],[-5,-4,5,6],[-8,-7,2,3]]", None),
    ];
    for &(m, d) in cases {
        let (_, first) = match d {
            Some(d) => call(&["check-subscheme", "--matrix", m, "--degree", d]),
            None => call(&["check-representable", "--matrix", m]),
        };
        let normalized = first["normalized"].to_string();
        let (_, again) = call(&["check-representable", "--matrix", &normalized]);
        for key in [
            "answer",
            "reason",
            "k",
            "blockDegree",
            "degree",
            "normalized",
        ] {
            assert_eq!(first.get(key), again.get(key), "{m} {d:?}: {key}");
        }
    }
}

#[test]
fn witness_reports() {
    let (code, v) = call(&[
        "witness",
        "--matrix",
        "[[2,3,5],[1,2,4]]",
        "--degree",
        "4",
        "--trials",
        "2",
        "--seed",
        "3",
    ]);
    assert_eq!(code, EXIT_OK);
    for key in [
        "seed",
        "prime",
        "trials",
        "verdictChecked",
        "observedDegrees",
        "hfProfile",
        "mismatches",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["seed"], 3);
    assert_eq!(v["prime"], 32003);
    assert_eq!(v["hfProfile"], json!([1, 3, 6, 10, 14, 18, 21, 22, 22, 22]));

    let (code, v) = call(&[
        "witness",
        "--matrix",
        "[[3,4,6],[-2,-1,1],[-3,-2,0]]",
        "--trials",
        "3",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["reason"], "DiagonalNegative");
    assert_eq!(v["observedDegrees"], json!([null, null, null]));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "witness",
        "--matrix",
        "[[0,1,10,11],[-1,0,9,10],[-5,-4,5,6],[-8,-7,2,3]]",
        "--seed",
        "42",
    ];
    let a = run_args(std::iter::once("detrep").chain(args));
    let b = run_args(std::iter::once("detrep").chain(args));
    assert_eq!(a, b);
}

#[test]
fn hf_and_series() {
    let (_, v) = call(&[
        "hf",
        "--gens",
        "[7,6,4]",
        "--syz",
        "[9,8]",
        "--stratum-dim",
        "21",
        "--tmax",
        "5",
    ]);
    assert_eq!(v["degree"], 22);
    assert_eq!(v["h0Ideal"][4], 1);
    assert_eq!(v["h0Ideal"][5], 3);
    assert_eq!(v["incidence"][4]["dimension"], 21);
    assert_eq!(v["incidence"][5]["dimension"], 23);

    let (_, v) = call(&["hf", "--gens", "[7,7,5,5,5]", "--syz", "[8,8,7,6]"]);
    assert_eq!(v["numericallyMinimal"], false);
    assert_eq!(
        v["minimal"],
        json!({"gens": [7, 5, 5, 5], "syz": [8, 8, 6]})
    );

    let (_, v) = call(&[
        "series",
        "--degree",
        "8",
        "--divisor-degree",
        "20",
        "--dim",
        "2",
        "--property",
        "1:nonspecial",
        "--property",
        "-1:effective",
    ]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["existsOnGeneralCurve"] == true));
}

#[test]
fn table_format() {
    let out = run_args([
        "detrep",
        "--format",
        "table",
        "scan",
        "--matrix",
        "[[2,3,5],[1,2,4]]",
        "--dmax",
        "3",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("scan:\n"), "{}", out.stdout);
    assert!(serde_json::from_str::<Value>(&out.stdout).is_err());
}

#[test]
fn enumerate_census() {
    let (_, v) = call(&["enumerate", "--n", "2", "--degree", "2", "--bound", "3"]);
    let total = v["total"].as_u64().unwrap();
    assert_eq!(
        total,
        v["yes"].as_u64().unwrap() + v["no"].as_u64().unwrap()
    );
    assert!(v["no"].as_u64().unwrap() > 0);
}
