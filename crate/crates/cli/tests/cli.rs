use std::path::PathBuf;
use std::process::{Command, Output};

fn skein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skein")).args(args).output().expect("run skein")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn check_prints_invariants() {
    let o = skein(&["check", &fixture("punctured_torus.surf")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("chi=-1 r=3 boundary_punctures=0 interior_punctures=1\n"));
    let o = skein(&["check", &fixture("quadrilateral.surf")]);
    assert!(stdout(&o).starts_with("chi=1 r=9 boundary_punctures=4 interior_punctures=0\n"));
}

#[test]
fn malformed_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.surf");
    std::fs::write(&p, "triangle T a b\n").unwrap();
    let o = skein(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = skein(&["check", dir.path().join("missing.surf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn monogon_pplus_is_two() {
    let o = skein(&["matrices", &fixture("punctured_monogon.surf"), "--which", "Pplus"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let entries: Vec<&str> = out.lines().skip(1).flat_map(|l| l.split_whitespace().skip(1)).collect();
    assert_eq!(entries, ["2"]);
}

#[test]
fn verify_identities_on_quadrilateral() {
    let o = skein(&["matrices", &fixture("quadrilateral.surf"), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["HPplus=2I", "HbarPplusbar=2I", "Pplusbar*sigma=2K", "sigma=HbarK"] {
        assert!(out.contains(&format!("IDENTITY {} PASS\n", name)), "{}", out);
    }
    assert!(!out.contains("FAIL"));
}

#[test]
fn unknown_selector_exits_2() {
    let o = skein(&["matrices", &fixture("quadrilateral.surf"), "--which", "Bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vertex_matrix_without_boundary_exits_2() {
    let o = skein(&["matrices", &fixture("punctured_torus.surf"), "--which", "K"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn peripheral_loop_trace() {
    let o = skein(&["trace", &data("monogon_curves.surf"), "--curve", "loop", "--coords", "extended"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1*q^0 * ev^-1\n1*q^0 * ev^1\n");
}

#[test]
fn torus_curve_trace_with_specialization() {
    let o = skein(&["trace", &data("torus_curves.surf"), "--curve", "horizontal", "--coords", "shear", "--q1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let (quantum, classical) = out.split_once("at q=1:\n").expect("q=1 section");
    assert_eq!(quantum.lines().count(), 3);
    assert_eq!(classical.lines().count(), 3);
}

#[test]
fn length_coordinates() {
    let o = skein(&["trace", &data("quadrilateral_curves.surf"), "--curve", "across", "--coords", "length"]);
    assert_eq!(stdout(&o), "1*q^0 * d^1\n");
    let o = skein(&["trace", &data("torus_curves.surf"), "--curve", "horizontal", "--coords", "length"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_curve_exits_2() {
    let o = skein(&["trace", &data("torus_curves.surf"), "--curve", "nope", "--coords", "shear"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn basis_lists_vectors() {
    let o = skein(&["basis", &fixture("punctured_monogon.surf"), "--bound", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("labels e ev hat(e)\n0 0 0\n"), "{}", out);
    let count: usize = out.lines().last().unwrap().strip_prefix("count=").unwrap().parse().unwrap();
    assert_eq!(count, out.lines().count() - 2);
    let o = skein(&["basis", &fixture("punctured_monogon.surf"), "--bound", "99"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_across_job_counts() {
    let f = fixture("punctured_monogon.surf");
    let a = skein(&["verify", &f, "--bound", "2", "--seed", "7"]);
    let b = skein(&["verify", &f, "--bound", "2", "--seed", "7", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("RESULT PASS\n"));
}

#[test]
fn verify_bound_zero_still_checks_matrices() {
    let o = skein(&["verify", &fixture("quadrilateral.surf"), "--bound", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CHECK matrix_identities PASS items=11"));
}
