use std::path::{Path, PathBuf};
use std::process::Command;

use ltbq_cli::run;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ltbq(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ltbq").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn binary_reports_metrics_of_identical_files() {
    let ramp = fixture("ramp.pgm");
    let out = Command::new(env!("CARGO_BIN_EXE_ltbq"))
        .args(["metrics", "-a", s(&ramp), "-b", s(&ramp)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "RMSE=0 PSNR=inf MSE=0");
}

#[test]
fn binary_exit_codes() {
    let missing = Command::new(env!("CARGO_BIN_EXE_ltbq"))
        .args(["metrics", "-a", "/nonexistent/a.pgm", "-b", "/nonexistent/b.pgm"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let usage = Command::new(env!("CARGO_BIN_EXE_ltbq")).arg("bogus").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn compress_then_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let ltb = dir.path().join("ramp.ltb");
    let png = dir.path().join("back.pgm");
    let (code, out, err) = ltbq(&[
        "compress", "--block", "2x2", "--code", "2x1", "-i", s(&fixture("ramp.pgm")), "-o", s(&ltb),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.trim(), "RHO=0.5");
    let (code, _, err) = ltbq(&["reconstruct", "-i", s(&ltb), "-o", s(&png)]);
    assert_eq!(code, 0, "{err}");
    // the ramp blocks are already fixed points
    assert_eq!(std::fs::read(&png).unwrap(), std::fs::read(fixture("ramp.pgm")).unwrap());
}

#[test]
fn roundtrip_reports_lossless_second_pass() {
    let (code, out, err) = ltbq(&[
        "roundtrip", "--block", "4x4", "--code", "2x2", "-i", s(&fixture("synthetic64.pgm")),
    ]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines, ["RMSE=66.757 PSNR=11.6409 MSE=4456.5", "LOSSLESS=true"]);
}

#[test]
fn bad_scheme_is_a_validation_error() {
    let (code, _, err) = ltbq(&["roundtrip", "--block", "3x3", "--code", "2x2", "-i", s(&fixture("ramp.pgm"))]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn unsupported_maxval_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("deep.pgm");
    std::fs::write(&p, b"P5\n1 1\n65535\n\0\0").unwrap();
    let (code, _, err) = ltbq(&["metrics", "-a", s(&p), "-b", s(&p)]);
    assert_eq!(code, 1);
    assert!(err.contains("65535"), "{err}");
}

#[test]
fn laws_on_algebras() {
    let (code, out, _) = ltbq(&["laws", "--algebra", s(&fixture("l3.quantale"))]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = ltbq(&["laws", "--algebra", s(&fixture("l3.module"))]);
    assert_eq!(code, 0);
    let (code, _, _) = ltbq(&["laws", "--algebra", s(&fixture("z2.monoid"))]);
    assert_eq!(code, 0);
    let (code, _, _) = ltbq(&["laws", "--tnorm", "nilpotent-minimum", "--grid-den", "20"]);
    assert_eq!(code, 0);
}

#[test]
fn failing_law_suite_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.quantale");
    let good = std::fs::read_to_string(fixture("l3.quantale")).unwrap();
    std::fs::write(&p, good.replacen("0 0 0\n", "0 0 1\n", 1)).unwrap();
    let (code, _, _) = ltbq(&["laws", "--algebra", s(&p)]);
    assert_eq!(code, 1);
}

#[test]
fn classify_tent_kernel() {
    let (code, out, err) = ltbq(&["classify-coder", "--kernel", s(&fixture("tent53.kernel"))]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("CODER=true"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("CLASS=")), "{out}");
}

#[test]
fn morph_dilates_ramp() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("out.pgm");
    let (code, _, err) = ltbq(&[
        "morph", "--op", "dilate", "--se", s(&fixture("cross.se")), "-i", s(&fixture("ramp.pgm")), "-o", s(&o),
    ]);
    assert_eq!(code, 0, "{err}");
    let bytes = std::fs::read(&o).unwrap();
    let bright = [255u8; 4];
    let mixed = [255, 170, 255, 170];
    let want = [bright, mixed, bright, mixed].concat();
    assert_eq!(&bytes[bytes.len() - 16..], &want[..]);
}

#[test]
fn ftransform_prints_both_halves() {
    let (code, out, err) = ltbq(&[
        "ftransform", "--partition", s(&fixture("luk.partition")), "--direction", "up", "--values", "1 2/3 1/3 0",
    ]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("TRANSFORM "));
    assert_eq!(lines[1], "INVERSE 1 2/3 1/3 0");
}
