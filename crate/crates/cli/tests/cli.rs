use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_cube-psatz");

const EPS_ONE: &str = r#"{"n":2,"generators":{"label":"cube"},"kind":"qmod","r":4,
 "sigma":{"0":[{"w":"1/1","p":"x1*x2"}],"1":[{"w":"1/1","p":"1"}],"2":[{"w":"1/1","p":"1"}]}}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CUBE_PSATZ_THREADS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cert = write(dir.path(), "eps1.json", EPS_ONE);

    let ok = run(&["verify", &cert, "(1-x1^2)*(1-x2^2)+1"]);
    assert_eq!(code(&ok), 0);
    let r = report(&ok);
    assert_eq!(r["outcome"], "pass");
    assert_eq!(r["result"]["verification"]["max_degree"], 4);

    let fail = run(&["verify", &cert, "(1-x1^2)*(1-x2^2)+2"]);
    assert_eq!(code(&fail), 1);
    let v = &report(&fail)["result"]["verification"];
    assert_eq!(v["residual"], "1");
    assert_eq!(v["expansion_minus_target"], "-1");
    assert!(String::from_utf8_lossy(&fail.stderr).contains("-1"));

    let truncated = write(dir.path(), "trunc.json", &EPS_ONE[..40]);
    let bad = run(&["verify", &truncated, "1"]);
    assert_eq!(code(&bad), 2);
    assert_eq!(report(&bad)["outcome"], "input-error");

    assert_eq!(code(&run(&["verify", &cert, "x3 + 1"])), 2);
    assert_eq!(code(&run(&["verify", "/nonexistent/cert.json", "1"])), 2);
    assert_eq!(code(&run(&["verify", &cert])), 2);
}

#[test]
fn construct_writes_verifying_files() {
    let dir = tempfile::tempdir().unwrap();
    let shift = dir.path().join("shift.json").display().to_string();
    let out = run(&["construct", "univariate-shift", "--q", "3", "-o", &shift]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["artifacts"][0], shift.as_str());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&shift).unwrap()).unwrap();
    assert_eq!(doc["r"], 6);
    assert_eq!(doc["generators"]["label"], "lnorm-ball");
    assert_eq!(code(&run(&["verify", &shift, "1 - x1^2"])), 0);

    let ball = dir.path().join("ball.json").display().to_string();
    assert_eq!(
        code(&run(&[
            "construct",
            "lnorm-in-cube",
            "--n",
            "2",
            "--q",
            "2",
            "-o",
            &ball
        ])),
        0
    );
    let v = run(&["verify", &ball, "2 - x1^4 - x2^4"]);
    assert_eq!(code(&v), 0);
    assert_eq!(report(&v)["result"]["verification"]["claimed_r"], 4);

    let embedded = run(&[
        "construct",
        "box-in-lnorm",
        "--n",
        "2",
        "--q",
        "1",
        "--eta",
        "3/2",
    ]);
    assert_eq!(code(&embedded), 0);
    let r = report(&embedded);
    assert_eq!(r["result"]["target"], "-x1^2 + 9/4");
    assert_eq!(r["result"]["certificate"]["generators"]["q"], 1);

    let low = run(&[
        "construct",
        "box-in-lnorm",
        "--n",
        "2",
        "--q",
        "1",
        "--eta",
        "5/4",
    ]);
    assert_eq!(code(&low), 2);

    for args in [
        &["construct", "pow2", "--m", "4"][..],
        &["construct", "fq", "--q", "5"][..],
        &["construct", "box-in-lnorm", "--n", "3", "--q", "2", "--i", "3"][..],
        &[
            "construct",
            "box-in-lnorm",
            "--n",
            "2",
            "--q",
            "1",
            "--eta-sq",
            "2",
        ][..],
    ] {
        assert_eq!(code(&run(args)), 0, "{args:?}");
    }
    assert_eq!(code(&run(&["construct", "pow2"])), 2);
    assert_eq!(
        code(&run(&[
            "construct",
            "box-in-lnorm",
            "--n",
            "2",
            "--q",
            "1",
            "--i",
            "3"
        ])),
        2
    );
    assert_eq!(code(&run(&["construct", "bogus"])), 2);
}

#[test]
fn lift_examples() {
    let dir = tempfile::tempdir().unwrap();
    let worked = write(
        dir.path(),
        "worked.json",
        r#"{"n":2,"generators":{"label":"scaled-cube","eta_sq":"2/1"},"kind":"preorder","r":4,
            "sigma":{"1,2":[{"w":"1/1","p":"1"}]}}"#,
    );
    let lifted = dir.path().join("lifted.json").display().to_string();
    let out = run(&["lift", &worked, "--q", "1", "-o", &lifted]);
    assert_eq!(code(&out), 0);
    let ledger = &report(&out)["result"]["ledger"];
    assert_eq!(ledger["k"], 4);
    assert_eq!(ledger["claimed_degree"], 4);
    assert!(ledger["final_degree"].as_u64().unwrap() <= 4);
    let stages: Vec<&str> = ledger["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["stage"].as_str().unwrap())
        .collect();
    assert_eq!(stages, ["input", "preorder-to-lnorm", "lnorm-to-cube"]);
    assert_eq!(code(&run(&["verify", &lifted, "(2-x1^2)*(2-x2^2)"])), 0);

    let trivial = write(
        dir.path(),
        "trivial.json",
        r#"{"n":1,"generators":{"label":"scaled-cube","eta":"1"},"kind":"preorder","r":2,"sigma":{"1":[{"w":"1","p":"1"}]}}"#,
    );
    let out = run(&["lift", &trivial, "--q", "1", "--eta", "1"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["ledger"]["claimed_degree"], 2);
    assert_eq!(r["result"]["certificate"]["generators"]["label"], "cube");
    assert_eq!(r["result"]["certificate"]["sigma"]["1"][0]["w"], "1/1");

    let three_halves = write(
        dir.path(),
        "q2.json",
        r#"{"n":2,"generators":{"label":"scaled-cube","eta":"3/2"},"kind":"preorder","r":2,
            "sigma":{"1":[{"w":"1","p":"1"}],"2":[{"w":"1","p":"1"}]}}"#,
    );
    let out = run(&["lift", &three_halves, "--q", "2", "--target", "9/2 - x1^2 - x2^2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["ledger"]["claimed_degree"], 6);

    assert_eq!(code(&run(&["lift", &worked, "--q", "1", "--eta", "3/2"])), 2);
    assert_eq!(code(&run(&["lift", &worked, "--q", "1", "--target", "x1"])), 1);
    let cube = write(dir.path(), "cube.json", EPS_ONE);
    assert_eq!(code(&run(&["lift", &cube, "--q", "1"])), 2);
}

#[test]
fn bounds_examples() {
    let out = run(&[
        "bounds",
        "putinar",
        "--n",
        "1",
        "--d",
        "3",
        "--fmin",
        "1",
        "--fmax",
        "1",
        "--C",
        "1",
        "--illustrative",
    ]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    assert_eq!(r["addend_breakdown"]["log_addend"]["hi"], "0/1");
    assert!(r["certified_enclosures_used"]["pi"].is_object());
    assert_eq!(r["inputs"]["c_nd"], "1/1");

    let out = run(&["bounds", "lower", "--epsilon", "1/4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["result"]["excluded_degree"], 0);

    let out = run(&[
        "bounds", "epsilon", "--n", "2", "--d", "2", "--fmin", "1", "--fmax", "2",
    ]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    assert_eq!(r["result"]["epsilon"], "625000000000/1484131591025767");
    assert!(r["certified_enclosures_used"]["e5"].is_object());

    let out = run(&[
        "bounds",
        "schmudgen",
        "--n",
        "2",
        "--d",
        "4",
        "--fmin",
        "1",
        "--fmax",
        "2",
        "--C",
        "1",
    ]);
    assert_eq!(report(&out)["result"]["result"]["r"], 26);
    let out = run(&[
        "bounds", "q", "--n", "2", "--d", "1", "--fmin", "1", "--fmax", "1", "--c", "1",
    ]);
    assert_eq!(report(&out)["result"]["result"]["q"], 2);

    assert_eq!(
        code(&run(&[
            "bounds",
            "schmudgen",
            "--n",
            "2",
            "--d",
            "2",
            "--fmin",
            "1",
            "--fmax",
            "2"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "bounds", "epsilon", "--n", "2", "--d", "2", "--fmin", "1"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "bounds", "epsilon", "--n", "2", "--fmin", "1", "--fmax", "2"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "bounds", "epsilon", "--n", "2", "--d", "2", "--fmin", "2", "--fmax", "1"
        ])),
        2
    );
    assert_eq!(code(&run(&["bounds", "lower", "--epsilon", "1"])), 2);
    assert_eq!(code(&run(&["bounds", "lower"])), 2);
}

#[test]
fn sampled_extrema_are_seeded_and_flagged() {
    let args = [
        "bounds",
        "q",
        "--n",
        "2",
        "--f",
        "x1^2 + x2^2 + 1",
        "--seed",
        "11",
        "--samples",
        "64",
    ];
    let a = report(&run(&args));
    let b = report(&run(&args));
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["inputs_digest"], b["inputs_digest"]);
    let source = &a["result"]["inputs"]["fmin_fmax_source"];
    assert_eq!(source["certified"], false);
    assert_eq!(source["seed"], 11);
    assert_eq!(a["result"]["inputs"]["fmin"], "1/1");
    assert_eq!(a["result"]["inputs"]["fmax"], "3/1");
    assert_eq!(a["result"]["inputs"]["d"], 2);
}

#[test]
fn diagnose_epsilon_one() {
    let dir = tempfile::tempdir().unwrap();
    let cert = write(dir.path(), "eps1.json", EPS_ONE);
    let out = run(&[
        "diagnose",
        &cert,
        "--epsilon",
        "1",
        "--samples",
        "16",
        "--seed",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    let facts = r["facts"].as_array().unwrap();
    assert_eq!(facts.len(), 4);
    assert!(facts.iter().all(|f| f["holds"] == true));
    assert_eq!(facts[0]["lhs"]["exact"], "1/1");
    assert_eq!(facts[0]["rhs"], "8/1");
    assert!(r["excluded_degree"].is_null());

    assert_eq!(code(&run(&["diagnose", &cert, "--epsilon", "2"])), 1);
    assert_eq!(
        code(&run(&["diagnose", &cert, "--epsilon", "1", "--delta", "3/2"])),
        2
    );
}

#[test]
fn report_file_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.display().to_string();
    let out = run(&["bounds", "lower", "--epsilon", "1/10000", "--out", &p]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r["inputs_digest"].as_str().unwrap().starts_with("sha256:"));
    assert!(r["result"]["result"]["excluded_degree"].as_u64().unwrap() >= 1);

    let threaded = Command::new(BIN)
        .args(["construct", "lnorm-in-cube", "--n", "3", "--q", "2"])
        .env("CUBE_PSATZ_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&threaded), 0);
    let bad = Command::new(BIN)
        .args(["bounds", "lower", "--epsilon", "1/4"])
        .env("CUBE_PSATZ_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}
