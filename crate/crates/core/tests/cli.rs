use std::path::Path;
use std::process::Command;

use mbm::cli::run;
use mbm::format;
use mbm::mcat::MMorphism;
use mbm::morphism::sharp_cases;
use mbm::scalar::FieldSpec;
use mbm::zoo;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn mbm(args: &[&str]) -> (i32, String) {
    let mut v = vec!["mbm"];
    v.extend_from_slice(args);
    run(v)
}

#[test]
fn bimonoid_and_comonoid_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fnalg:Z3", "grpalg:Z2", "qline:5:4"] {
        let d = zoo::example(name, None).unwrap();
        let f = write(dir.path(), "b.txt", &format::write_bimonoid(&d).unwrap());
        let (code, text) = mbm(&["check-bimonoid", &f]);
        assert_eq!(code, 0, "{text}");
        assert!(text.ends_with("RESULT PASS\n"));
        let (code, text) = mbm(&["equivalence", &f]);
        assert_eq!(code, 0);
        assert!(text.contains("VERDICT AGREE_PASS"));
        let c = write(dir.path(), "c.txt", &format::write_comonoid(&d.derived_comonoid().unwrap()).unwrap());
        let (code, text) = mbm(&["check-comonoid", &c]);
        assert_eq!(code, 0, "{text}");
    }
}

#[test]
fn check_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = zoo::group_algebra(2, FieldSpec::Rationals).unwrap();
    let text = format::write_bimonoid(&d).unwrap();
    let broken: String = text.lines().filter(|l| !l.starts_with("e ")).map(|l| format!("{l}\n")).collect();
    let f = write(dir.path(), "b.txt", &broken);
    let (code, out) = mbm(&["equivalence", &f]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("AGREE_FAIL"));
}

#[test]
fn malformed_line_exits_two_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let text = "algebra K dim 2 field q grading trivial\nbasis a deg 0\nbasis b deg 0\nmult a a -> a 1\n";
    let f = write(dir.path(), "bad.txt", text);
    let (code, out) = mbm(&["check-bimonoid", &f]);
    assert_eq!(code, 2);
    assert!(out.contains("line 4"), "{out}");
    let (code, _) = mbm(&["check-bimonoid", &dir.path().join("missing").to_string_lossy()]);
    assert_eq!(code, 2);
}

#[test]
fn morphism_files_resolve_references() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = zoo::function_algebra(3, FieldSpec::Rationals).unwrap();
    write(dir.path(), "k3.txt", &format::write_bimonoid(&k3).unwrap());
    let cases: Vec<_> = sharp_cases().unwrap().into_iter().filter(|c| c.src.name == "fnalg:Z3" && c.dst.name == "fnalg:Z3").collect();
    assert!(cases.iter().any(|c| c.expected) && cases.iter().any(|c| !c.expected));
    for case in cases {
        let f = MMorphism::sharp(&case.map, &case.src.base, &case.dst.base).unwrap();
        // one reference by example name, one by relative path
        let path = write(dir.path(), "f.txt", &format::write_morphism(&f, "fnalg:Z3", "k3.txt"));
        let (code, out) = mbm(&["morphism", &path, "fnalg:Z3", "fnalg:Z3"]);
        assert_eq!(code == 0, case.expected, "{}: {out}", case.name);
    }
}

#[test]
fn compose_identity() {
    let dir = tempfile::tempdir().unwrap();
    let d = zoo::function_algebra(2, FieldSpec::Rationals).unwrap();
    let id = MMorphism::identity(&d.base).unwrap();
    let text = format::write_morphism(&id, "fnalg:Z2", "fnalg:Z2");
    let f = write(dir.path(), "f.txt", &text);
    let g = write(dir.path(), "g.txt", &text);
    let (code, out) = mbm(&["compose", &f, &g]);
    assert_eq!(code, 0);
    let h = format::parse_morphism(&out, &d.base, &d.base).unwrap();
    assert!(h.same_components(&id).unwrap());
}

#[test]
fn multiplier_monoid_command() {
    let (code, out) = mbm(&["multiplier-monoid", "fnalg:Z3"]);
    assert_eq!(code, 0);
    assert!(out.contains("dim M(A) 3") && out.contains("embedding iso true"));
    let (code, out) = mbm(&["multiplier-monoid", "kz", "--window", "8"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("unit outside image true"));
}

#[test]
fn output_file_and_field_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let (code, text) = mbm(&["equivalence", "fnalg:Z2", "--field", "fp:7", "--out", &out.to_string_lossy()]);
    assert_eq!(code, 0);
    assert!(text.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().contains("VERDICT AGREE_PASS"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mbm");
    let ok = Command::new(bin).args(["equivalence", "grpalg:Z2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("AGREE_PASS"));
    let bad = Command::new(bin).args(["equivalence", "grpalg:Zx"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
    let list = Command::new(bin).arg("list-examples").output().unwrap();
    assert_eq!(String::from_utf8_lossy(&list.stdout).lines().count(), 5);
}
