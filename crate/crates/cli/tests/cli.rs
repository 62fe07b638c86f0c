use std::process::{Command, Output};

use serde_json::Value;
use strlink::covers::Word;
use strlink::knotforge::{build_family, KnotFamily};
use strlink::lambda::InfectedStringLink;
use strlink::seifert::FormalKnot;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strlink"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap_or(-1)
}

#[test]
fn sig_of_trefoil_matrix() {
    let v = json(&["sig", "--matrix", "[[-1,1],[0,-1]]", "--d", "4", "--s", "1"]);
    assert_eq!(v["sigma"], -2);
    let named = json(&["sig", "--knot", "trefoil", "--d", "4", "--s", "1"]);
    assert_eq!(named["sigma"], -2);
}

#[test]
fn sig_table_as_csv() {
    let o = run(&["sig", "--knot", "trefoil", "--d", "6", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("at_jump,d,s,sigma"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[1], "true,6,1,-1");
    assert_eq!(rows[3], "false,6,3,-2");
}

#[test]
fn tower_build_has_sixteen_vertices() {
    let v = json(&["tower", "build", "--m", "2", "--n", "1", "--q", "4"]);
    assert_eq!(v["levels"][1]["vertices"], 16);
    let v = json(&["tower", "build", "--m", "2", "--n", "2", "--q", "4"]);
    assert_eq!(v["levels"][2]["vertices"], 256);
}

#[test]
fn commutator_lifts_all_have_degree_one() {
    let v = json(&[
        "lambda",
        "--tower",
        "n=1,q=4",
        "--theta",
        "f-mod-4",
        "--word",
        "comm(x0,x1)",
        "--knot",
        "trefoil",
    ]);
    let lifts = v["result"]["per_lift"].as_array().unwrap();
    assert_eq!(lifts.len(), 16);
    assert!(lifts.iter().all(|l| l["r"] == 1));
}

#[test]
fn arf_and_hilbert() {
    assert_eq!(json(&["arf", "--knot", "trefoil"])["arf"], 1);
    assert_eq!(json(&["arf", "--knot", "figure8"])["arf"], 1);
    assert_eq!(json(&["arf", "--knot", "twist(2)"])["arf"], 0);
    assert_eq!(
        json(&["hilbert", "--a", "3", "--b", "-1", "--place", "3"])["symbol"],
        -1
    );
    assert_eq!(
        json(&["hilbert", "--a", "7", "--b", "-1", "--place", "3"])["symbol"],
        1
    );
}

#[test]
fn tower_verify_passes() {
    let v = json(&[
        "tower", "verify", "--m", "2", "--n", "2", "--q", "4", "--d", "4,8",
    ]);
    assert_eq!(v["kind"], "tower-audit");
    assert_eq!(v["verdict"], "PASS");
}

#[test]
fn validation_errors_exit_two() {
    assert_eq!(code(&["sig", "--matrix", "[[1,2],[3]]", "--d", "4"]), 2);
    assert_eq!(code(&["sig", "--matrix", "[[1,2],[2,4]]", "--d", "4"]), 2);
    assert_eq!(code(&["lambda", "--word", "x5", "--knot", "trefoil"]), 2);
    assert_eq!(code(&["reproduce", "family", "--d-seed", "2"]), 2);
    assert_eq!(code(&["reproduce", "z2", "--d", "8"]), 2);
    assert_eq!(code(&["tower", "build", "--q", "6"]), 2);
    let o = run(&["lambda", "--word", "x5", "--knot", "trefoil"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--word"));
}

#[test]
fn resource_cap_exits_three() {
    assert_eq!(
        code(&[
            "--cap-edges",
            "1000",
            "tower",
            "build",
            "--n",
            "3",
            "--q",
            "4"
        ]),
        3
    );
}

#[test]
fn family_edge_cases() {
    let v = json(&["reproduce", "family", "--count", "0"]);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["table"].as_array().unwrap().len(), 0);
    let o = run(&["reproduce", "family", "--n-max", "64", "--r-max", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "FAIL");
    assert!(v["result"]["error"].as_str().unwrap().contains("exhausted"));
}

#[test]
fn independence_fails_for_unknot_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unknot.json");
    std::fs::write(&path, r#"{"p":2,"entries":[{"knot":[],"d":4}]}"#).unwrap();
    let o = run(&[
        "reproduce",
        "independence",
        "--family-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["S"], serde_json::json!([[0]]));
}

#[test]
fn independence_accepts_family_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("family.json");
    assert_eq!(
        code(&["reproduce", "family", "--out", cert.to_str().unwrap()]),
        0
    );
    let a = json(&[
        "reproduce",
        "independence",
        "--family-file",
        cert.to_str().unwrap(),
    ]);
    let b = json(&["reproduce", "independence"]);
    assert_eq!(a["verdict"], "PASS");
    assert_eq!(a["sha256"], b["sha256"]);
}

#[test]
fn z2_examples() {
    let v = json(&[
        "reproduce",
        "z2",
        "--primes",
        "3,7",
        "--forms",
        r#"[["3"],["7"]]"#,
    ]);
    assert_eq!(
        v["result"]["symbols"],
        serde_json::json!([[-1, 1], [1, -1]])
    );
    assert_eq!(v["verdict"], "PASS");
    // 2 = (1+i)(1-i) is a norm
    assert_eq!(
        code(&["reproduce", "z2", "--primes", "3", "--forms", "[[2]]"]),
        1
    );
    assert_eq!(
        json(&["reproduce", "z2", "--primes", ""])["verdict"],
        "PASS"
    );
}

#[test]
fn local_knots_vanish() {
    let v = json(&["reproduce", "local", "--d", "4,8"]);
    assert_eq!(v["kind"], "local-knot-vanishing");
    assert_eq!(v["verdict"], "PASS");
}

#[test]
fn certificates_are_deterministic() {
    let a = json(&["reproduce", "family", "--count", "2"]);
    let b = json(&["reproduce", "family", "--count", "2"]);
    assert_eq!(a["sha256"], b["sha256"]);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timestamp");
        v
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn json_round_trips() {
    let k = FormalKnot::trefoil()
        .cable(3)
        .unwrap()
        .connected_sum(&FormalKnot::twist(-2).mirror());
    let back: FormalKnot = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
    assert_eq!(back, k);

    let fam = build_family(2, 2, 4).unwrap();
    let back: KnotFamily = serde_json::from_str(&serde_json::to_string(&fam).unwrap()).unwrap();
    assert_eq!(back, fam);

    let w: Word = "x0 x1 x0^-1 x1^-1".parse().unwrap();
    let back: Word = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
    assert_eq!(back, w);

    let link = InfectedStringLink::new(2, w, k).unwrap();
    let text = serde_json::to_string(&link).unwrap();
    let back: InfectedStringLink = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn knot_json_accepted_on_command_line() {
    let k = serde_json::to_string(&FormalKnot::trefoil()).unwrap();
    assert_eq!(
        json(&["sig", "--knot", &k, "--d", "4", "--s", "1"])["sigma"],
        -2
    );
}
