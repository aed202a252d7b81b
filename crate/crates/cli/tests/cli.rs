use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn schur(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_schur"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().expect("stdin is piped");
    pipe.write_all(stdin.unwrap_or("").as_bytes())
        .expect("stdin accepts input");
    drop(pipe);
    child.wait_with_output().expect("binary exits")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).expect("json output")
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    path.to_str().expect("utf-8 path").to_string()
}

const RANK2_C4: &str = r#"{"version":1,"group":{"factors":[4]},"classes":[[[0]],[[1],[2],[3]]]}"#;

#[test]
fn witness_p2_is_not_separable() {
    let w = schur(&["witness", "p2"], None);
    assert_eq!(w.status.code(), Some(0));
    let r = schur(&["analyze", "separable", "--self"], Some(&stdout(&w)));
    assert_eq!(r.status.code(), Some(1));
    let report = json(&r);
    assert_eq!(report["verdict"], "NON_SEPARABLE");
    assert_eq!(report["witness"]["alg_map"], json(&w)["alg_map"]);
    assert_eq!(report["targets_mode"], "explicit");
}

#[test]
fn validate_accepts_rank_two_and_canonicalizes() {
    let o = schur(&["sring", "validate"], Some(RANK2_C4));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        r#"{"classes":[[[0]],[[1],[2],[3]]],"group":{"factors":[4]},"version":1}"#
    );
}

#[test]
fn input_errors_exit_two_with_a_diagnostic() {
    let repeated = r#"{"version":1,"group":{"factors":[3]},"classes":[[[0]],[[1],[1]],[[2]]]}"#;
    let o = schur(&["sring", "validate"], Some(repeated));
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "NotAPartition");

    let o = schur(
        &["sring", "validate"],
        Some(&RANK2_C4.replace("\"version\":1", "\"version\":7")),
    );
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(schur(&["sring", "frobnicate"], None).status.code(), Some(2));
}

#[test]
fn bound_exceeded_exits_three() {
    let o = schur(
        &["--bound", "4", "iso", "aut", &fixture("witness_p2.json")],
        None,
    );
    assert_eq!(o.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "BoundExceeded");
}

#[test]
fn fusion_of_witness_is_not_schurian() {
    let fused = schur(&["build", "fusion", &fixture("witness_p2.json")], None);
    assert_eq!(fused.status.code(), Some(0));
    assert_eq!(json(&fused)["classes"].as_array().unwrap().len(), 7);
    let o = schur(&["analyze", "schurian"], Some(&stdout(&fused)));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["schurian"], false);
    assert_eq!(
        schur(&["analyze", "schurian", &fixture("witness_p2.json")], None)
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn cyclotomic_and_orbit_builders_agree_with_the_fixture() {
    let auto = "1,0,0;1,1,2;1,0,1";
    let cyc = schur(
        &["build", "cyc", "--factors", "2,2,4", "--auto", auto],
        None,
    );
    let orbit = schur(
        &["build", "orbit", "--factors", "2,2,4", "--auto", auto],
        None,
    );
    let fixture_ring = json(&schur(
        &["sring", "validate", &fixture("witness_p2.json")],
        None,
    ));
    assert_eq!(json(&cyc), fixture_ring);
    assert_eq!(json(&orbit), fixture_ring);
}

#[test]
fn non_automorphism_is_rejected() {
    let o = schur(
        &["build", "cyc", "--factors", "2,4", "--auto", "0,1;1,0"],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lifted_map_is_not_induced() {
    let o = schur(
        &[
            "build",
            "lift",
            &fixture("witness_p2.json"),
            "--factors",
            "2,2,8",
            "--subgroup",
            "1,0,0",
            "--subgroup",
            "0,1,0",
            "--subgroup",
            "0,0,2",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let lifted = json(&o);
    assert_eq!(lifted["ring"]["classes"].as_array().unwrap().len(), 11);
    let i = schur(&["iso", "induced"], Some(&stdout(&o)));
    assert_eq!(i.status.code(), Some(1));
    assert_eq!(json(&i)["induced"], false);
}

#[test]
fn tensor_wreath_and_induce_round_trip() {
    let dir = std::env::temp_dir().join(format!("schur-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let c2 = dir.join("c2.json");
    std::fs::write(
        &c2,
        r#"{"version":1,"group":{"factors":[2]},"classes":[[[0]],[[1]]]}"#,
    )
    .unwrap();
    let c2 = c2.to_str().unwrap();

    let t = schur(&["build", "tensor", c2, c2], None);
    assert_eq!(json(&t)["classes"].as_array().unwrap().len(), 4);

    let w = schur(
        &["build", "wreath", c2, c2, "--factors", "4", "--lower", "2"],
        None,
    );
    assert_eq!(w.status.code(), Some(0));
    assert_eq!(
        json(&w)["classes"],
        serde_json::json!([[[0]], [[1], [3]], [[2]]])
    );

    let q = schur(&["sring", "induce", "--lower", "2"], Some(&stdout(&w)));
    assert_eq!(json(&q)["classes"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn structure_constants_and_radicals() {
    let c = json(&schur(&["sring", "constants"], Some(RANK2_C4)));
    assert_eq!(
        c["constants"],
        serde_json::json!([[[1, 0], [0, 1]], [[0, 1], [3, 2]]])
    );
    let r = json(&schur(&["sring", "radical"], Some(RANK2_C4)));
    assert_eq!(r[1]["radical"], serde_json::json!([[0]]));
}

#[test]
fn iso_between_counts_combinatorial_isomorphisms() {
    let dir = std::env::temp_dir().join(format!("schur-iso-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    std::fs::write(&a, RANK2_C4).unwrap();
    let a = a.to_str().unwrap();
    let o = json(&schur(&["iso", "between", a, a], None));
    assert_eq!(o["combinatorial_count"], "24");
    let aut = json(&schur(&["iso", "aut", a], None));
    assert_eq!(aut["order"], "24");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn enumeration_streams_json_lines() {
    let o = schur(&["enum", "srings", "--factors", "2,2"], None);
    let lines: Vec<&str> = std::str::from_utf8(&o.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 5);
    let reduced = schur(
        &["enum", "srings", "--factors", "2,2", "--up-to-cayley"],
        None,
    );
    assert_eq!(stdout(&reduced).lines().count(), 3);
}

#[test]
fn output_does_not_depend_on_workers() {
    let one = schur(
        &["--workers", "1", "enum", "srings", "--factors", "2,4"],
        None,
    );
    let three = schur(
        &["--workers", "3", "enum", "srings", "--factors", "2,4"],
        None,
    );
    assert_eq!(one.stdout, three.stdout);
    let a = schur(
        &[
            "--workers",
            "1",
            "analyze",
            "separable",
            "--exhaustive",
            &fixture("rank2_klein.json"),
        ],
        None,
    );
    let b = schur(
        &[
            "--workers",
            "2",
            "analyze",
            "separable",
            "--exhaustive",
            &fixture("rank2_klein.json"),
        ],
        None,
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn shipped_fixtures_revalidate() {
    for name in ["witness_p2.json", "witness_p3.json", "rank2_klein.json"] {
        assert_eq!(
            schur(&["sring", "validate", &fixture(name)], None)
                .status
                .code(),
            Some(0),
            "{name}"
        );
    }
    let text = std::fs::read_to_string(fixture("c3x3x3_up_to_cayley.jsonl")).unwrap();
    for line in text.lines() {
        assert_eq!(
            schur(&["sring", "validate"], Some(line)).status.code(),
            Some(0)
        );
    }
}

#[test]
fn group_info_reports_automorphism_order() {
    let o = json(&schur(&["group", "info", "--factors", "2,2,4"], None));
    assert_eq!(o["aut_order"], "192");
    assert_eq!(o["order"], 16);
    let from_doc = json(&schur(&["group", "info"], Some(r#"{"factors":[3,3]}"#)));
    assert_eq!(from_doc["aut_order"], "48");
}
