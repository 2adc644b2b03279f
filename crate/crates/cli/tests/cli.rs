use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tactile::image_io::{save_color_image, ColorImage};

fn tactile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tactile")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn sample(dir: &Path) -> PathBuf {
    let path = dir.join("in.png");
    let img = ColorImage::from_fn(90, 60, |x, y| {
        if (20..70).contains(&x) && (15..45).contains(&y) {
            [0.9, 0.1, 0.1]
        } else {
            [1.0; 3]
        }
    })
    .unwrap();
    save_color_image(&img, &path).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn convert_writes_page_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample(dir.path());
    let out = dir.path().join("out");
    let res = tactile(&["convert", s(&input), "--out", s(&out), "--dpi", "150", "--no-fringe"]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    assert!(out.join("page.png").is_file());
    let manifest = std::fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert!(manifest.contains("config.dpi=150"));
    assert!(manifest.contains("config.fringe_enabled=false"));
}

#[test]
fn edges_round_trip_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample(dir.path());
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(code(&tactile(&["convert", s(&input), "--out", s(&a), "--edges-only"])), 0);
    assert!(!a.join("page.png").exists());
    let edges = a.join("edges.pgm");
    assert_eq!(code(&tactile(&["convert", s(&input), "--out", s(&b), "--edges-in", s(&edges)])), 0);
    assert_eq!(std::fs::read(&edges).unwrap(), std::fs::read(b.join("edges.pgm")).unwrap());
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&tactile(&[])), 1);
    assert_eq!(code(&tactile(&["convert"])), 1);
    assert_eq!(code(&tactile(&["convert", "x.png", "--fringe", "--no-fringe"])), 1);
    assert_eq!(code(&tactile(&["--help"])), 0);
}

#[test]
fn unknown_stage_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample(dir.path());
    let res = tactile(&["convert", s(&input), "--out", s(dir.path()), "--stage", "sharpen"]);
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("sharpen"));
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample(dir.path());
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "gap_width=3\nsparkle=1\n").unwrap();
    let res = tactile(&["convert", s(&input), "--config", s(&cfg), "--out", s(dir.path())]);
    assert_eq!(code(&res), 2);
    assert!(stderr(&res).contains("sparkle"));

    std::fs::write(&cfg, "edge_threshold=0.9\nedge_saturation=0.5\n").unwrap();
    let res = tactile(&["convert", s(&input), "--config", s(&cfg), "--out", s(dir.path())]);
    assert_eq!(code(&res), 2);
}

#[test]
fn missing_files_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let res = tactile(&["convert", s(&dir.path().join("none.png")), "--out", s(dir.path())]);
    assert_eq!(code(&res), 3);
    assert!(stderr(&res).contains("none.png"));

    let res = tactile(&["convert", "--stage", "lines", s(&dir.path().join("none.png")), "--out", s(dir.path())]);
    assert_eq!(code(&res), 3);
    assert!(stderr(&res).contains("edges.pgm"));
}

#[test]
fn single_stage_writes_only_its_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample(dir.path());
    let out = dir.path().join("o");
    let res = tactile(&["convert", s(&input), "--out", s(&out), "--stage", "quantize"]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    assert!(out.join("classes.png").is_file());
    assert!(!out.join("edges.pgm").exists());
}
