use std::path::Path;
use std::process::{Command, Output};

use holonomy::group::GroupDescriptor;
use holonomy::io::{to_json, write_file};
use holonomy::reconstruct::random::{random_pointed, realize};
use holonomy::reconstruct::{gauge_equivalent, Candidates, SearchBounds};
use holonomy::seed::trial_rng;

fn hol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hol")).args(args).env_remove("HOL_FIXTURES").output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn props_on_bundled_fixtures_pass() {
    let o = hol(&["props", "--suite", "prop1", "--trials", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("verdict: pass\n"));
}

#[test]
fn structured_reports_repeat_byte_for_byte() {
    let args = ["props", "--suite", "lemma2", "--trials", "40", "--seed", "11", "--format", "structured"];
    let (a, b) = (hol(&args), hol(&args));
    assert_eq!(a.stdout, b.stdout);
    for line in stdout(&a).lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}

#[test]
fn eval_prints_the_holonomy() {
    let o = hol(&["eval", "--field", "theta-s3", "--loop", "x: a b~", "--base", "x:e"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[2,0,1]\n");
    // moving the fiber point conjugates
    let o = hol(&["eval", "--field", "theta-s3", "--loop", "x: a b~", "--base", "x:[1,0,2]"]);
    assert_eq!(stdout(&o), "[1,2,0]\n");
}

#[test]
fn eval_rejects_a_loop_at_another_vertex() {
    let o = hol(&["eval", "--field", "theta-s3", "--loop", "y: a~ b", "--base", "x:e"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a closed walk at the base vertex"));
}

#[test]
fn q_check_on_the_tree_is_unsuitable() {
    let o = hol(&["q-check", "--graph", "tree", "--group", "c2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unsuitable graph"));
}

#[test]
fn q_check_on_theta_reports_the_cancelling_lift() {
    let o = hol(&["q-check", "--graph", "theta", "--group", "c2", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["hol_composite_is_identity"], true);
    assert_eq!(v["chosen_lift_composite_nonempty"], true);
    assert_eq!(v["every_lift_nonempty"], false);
    assert_eq!(v["non_faithful"]["starred_equal"], false);
}

#[test]
fn iso_find_on_maps_and_iso_apply() {
    let dir = tempfile::tempdir().unwrap();
    let iso = dir.path().join("iso.json");
    let o =
        hol(&["iso-find", "--src", "theta-s3-map", "--dst", "theta-s3-swapped-map", "--out", iso.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for lp in ["x: a b~", "x: c a~ b c~", "x:"] {
        let o = hol(&[
            "iso-apply",
            "--iso",
            iso.to_str().unwrap(),
            "--src",
            "theta-s3-map",
            "--dst",
            "theta-s3-swapped-map",
            "--loop",
            lp,
        ]);
        assert_eq!(o.status.code(), Some(0), "{lp}: {}", stdout(&o));
        assert!(stdout(&o).contains("diagram commutes"));
    }
}

#[test]
fn iso_find_without_an_isomorphism() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = GroupDescriptor::cyclic(6).unwrap();
    // same graph, link orders 2 and 3 on the self-loop
    let f = |k: u32| {
        holonomy::bundle::GaugeField::new(
            std::sync::Arc::new(holonomy::path::fixtures::loop1()),
            c6,
            vec![c6.residue(k).unwrap()],
        )
        .unwrap()
    };
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    write_file(&a, &f(3)).unwrap();
    write_file(&b, &f(2)).unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let o = hol(&["iso-find", "--src-field", a, "--src-base", "x:e", "--dst-field", b, "--dst-base", "x:e"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("loop_witnesses"), "{}", stdout(&o));

    let dir2 = tempfile::tempdir().unwrap();
    let (ma, mb) = (dir2.path().join("a.json"), dir2.path().join("b.json"));
    let map = |k| {
        holonomy::reconstruct::PointedField { basepoint: f(k).identity_point(holonomy::path::VertexId(0)), field: f(k) }
            .holonomy_map()
            .unwrap()
    };
    write_file(&ma, &map(3)).unwrap();
    write_file(&mb, &map(2)).unwrap();
    let o = hol(&["iso-find", "--src", ma.to_str().unwrap(), "--dst", mb.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "none found (within search bounds)\n");
}

#[test]
fn certificates_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = hol(&[
        "iso-find",
        "--src-field",
        "theta-s3",
        "--src-base",
        "x:e",
        "--dst-field",
        "theta-s3-swapped",
        "--dst-base",
        "x:e",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = hol(&["verify", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));

    // an SU2 pair: a one-bit change in a link value breaks the certificate
    let su2 = GroupDescriptor::su2();
    let mut rng = trial_rng(4, 0);
    let src = random_pointed(&mut rng, &su2, 4);
    let h = std::sync::Arc::new(src.holonomy_map().unwrap());
    let a = holonomy::category::random::random_arrow(&mut rng, &h, 3);
    let dst = realize(&mut rng, a.target());
    let v = gauge_equivalent(&src, &dst, &Candidates::default(), &SearchBounds::default());
    let text = to_json(v.certificate().unwrap());
    let genuine = dir.path().join("su2.json");
    std::fs::write(&genuine, &text).unwrap();
    assert_eq!(hol(&["verify", genuine.to_str().unwrap()]).status.code(), Some(0));

    let links = text.find("\"links\"").unwrap();
    let digit = links + text[links..].find(|c: char| c.is_ascii_digit() && c != '0').unwrap();
    let mut bytes = text.into_bytes();
    // third digit after the first nonzero one: still a valid number
    let k = digit + 3;
    assert!(bytes[k].is_ascii_digit());
    bytes[k] ^= 1;
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, bytes).unwrap();
    let o = hol(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn reconstruct_writes_a_field_in_tree_gauge() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("field.json");
    let o = hol(&["reconstruct", "--map", "theta-s3-map", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = hol(&["eval", "--field", out.to_str().unwrap(), "--loop", "x: a b~", "--base", "x:e"]);
    let direct = hol(&["eval", "--field", "theta-s3", "--loop", "x: a b~", "--base", "x:e"]);
    assert_eq!(o.stdout, direct.stdout);
}

#[test]
fn error_classes_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"graph": {"vertices": ["x"], "edges": []}, "group": {"kind": "cyclic", "n": 2}}"#)
        .unwrap();
    let o = hol(&["eval", "--field", bad.to_str().unwrap(), "--loop", "x:", "--base", "x:e"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing field `links`"), "{}", stderr(&o));

    let o = hol(&["eval", "--field", "/nonexistent/field.json", "--loop", "x:", "--base", "x:e"]);
    assert_eq!(o.status.code(), Some(4));

    let o = hol(&["iso-find", "--src", "theta-s3-map", "--dst", "theta-s3-map", "--max-vertices", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = hol(&["smooth", "lattice", "--potential", "uniform", "--res", "5000"]);
    assert_eq!(o.status.code(), Some(3));

    let o = hol(&["props", "--suite", "lemma7"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hol(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fixture_directory_can_be_overridden() {
    let dir = tempfile::tempdir().unwrap();
    write_file(&dir.path().join("theta.json"), &holonomy::path::fixtures::path3()).unwrap();
    write_file(&dir.path().join("c2.json"), &GroupDescriptor::cyclic(2).unwrap()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hol"))
        .args(["q-check", "--graph", "theta", "--group", "c2"])
        .env("HOL_FIXTURES", dir.path())
        .output()
        .unwrap();
    // the override's "theta" is a tree
    assert_eq!(o.status.code(), Some(2));
    assert!(Path::new(&dir.path().join("theta.json")).exists());
}

#[test]
fn smooth_commands() {
    let o = hol(&[
        "smooth",
        "holonomy",
        "--potential",
        "uniform",
        "--curve",
        "unit-square",
        "--steps",
        "64",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    // B = 1 over the unit square: phase -1
    let phase = v["holonomy"].as_f64().unwrap();
    assert!((phase - (2.0 * std::f64::consts::PI - 1.0)).abs() < 1e-12);

    let o = hol(&[
        "smooth",
        "family",
        "--potential",
        "su2-constant",
        "--family",
        "translations",
        "--grid",
        "9",
        "--steps",
        "128",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("grid-stable"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lattice.json");
    let o = hol(&[
        "smooth",
        "lattice",
        "--potential",
        "su2-linear",
        "--box",
        "0,0,1,1",
        "--res",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = hol(&[
        "eval",
        "--field",
        out.to_str().unwrap(),
        "--loop",
        "v_0_0: x_0_0 y_1_0 x_0_1~ y_0_0~",
        "--base",
        "v_0_0:e",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
