//! End-to-end tests running the compiled binary: output text, exit codes,
//! and file emission.

use std::process::{Command, Output};

use tempfile::tempdir;

fn tridyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tridyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

#[test]
fn canon_reduces_an_off_chamber_triple() {
    let o = tridyn(&["canon", "-1/5,3/5,3/5"]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    assert_eq!(stdout(&o), "2/5,2/5,1/5 pointgroup=2\n");
}

#[test]
fn canon_reports_the_equilateral_point_group() {
    let o = tridyn(&["canon", "1/3,1/3,1/3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1/3,1/3,1/3 pointgroup=6\n");
}

#[test]
fn canon_rejects_a_point_off_the_plane() {
    let o = tridyn(&["canon", "1/2,1/2,1/2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not on plane A"), "{}", stderr(&o));
}

#[test]
fn canon_snaps_float_vertices_to_a_rational_shape() {
    let o = tridyn(&["canon", "--vertices", "0,0;1,0;0,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1/2,1/4,1/4 pointgroup=2\n");
}

#[test]
fn canon_rejects_coincident_vertices() {
    let o = tridyn(&["canon", "--vertices", "0,0;1,0;1,0"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn classify_reports_the_doubling_map() {
    let o = tridyn(&["classify", "pedal"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "TypeI c0=-1 c1=1 |det|=4 expansion=-2 witness=id\n"
    );
    // The alias and the explicit entries are the same matrix.
    let explicit = tridyn(&["classify", "-1 1 1 1 -1 1 1 1 -1"]);
    assert_eq!(stdout(&explicit), stdout(&o));
}

#[test]
fn classify_reports_the_identity() {
    let o = tridyn(&["classify", "1 0 0 0 1 0 0 0 1"]);
    assert_eq!(code(&o), 0);
    assert!(
        stdout(&o).starts_with("TypeI c0=1 c1=0 |det|=1"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn classify_names_the_rejection_reason() {
    let o = tridyn(&["classify", "2 0 0 -1 1 0 0 0 1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("NotEquilateral"), "{}", stderr(&o));
}

#[test]
fn classify_rejects_malformed_matrices() {
    let o = tridyn(&["classify", "1 2 3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn matrix_arguments_accept_json_and_file_indirection() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"matrix": [[-1,1,1],[1,-1,1],[1,1,-1]]}"#).unwrap();
    let o = tridyn(&["classify", &format!("@{}", path.display())]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("TypeI c0=-1 c1=1"));
}

#[test]
fn missing_matrix_file_is_an_io_error() {
    let o = tridyn(&["classify", "@/no/such/file.txt"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn orbit_prints_iterates_and_cycle_shape() {
    let o = tridyn(&["orbit", "pedal", "3/7,2/7,2/7"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("0: 3/7,2/7,2/7\n1: 3/7,3/7,1/7\n2: 5/7,1/7,1/7\n3: 3/7,2/7,2/7\n"));
    assert!(out.ends_with("preperiod=0 period=3 flat=false right=false\n"));
}

#[test]
fn orbit_flags_degenerate_visits() {
    let o = tridyn(&["orbit", "pedal", "1/2,1/4,1/4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("2: 1,0,0"), "{out}");
    assert!(out.ends_with("preperiod=2 period=1 flat=true right=true\n"));
}

#[test]
fn orbit_under_the_identity_is_a_fixed_point() {
    let o = tridyn(&["orbit", "identity", "7/13,4/13,2/13"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("preperiod=0 period=1"));
}

#[test]
fn orbit_gives_up_politely_when_the_bound_is_too_small() {
    let o = tridyn(&["orbit", "pedal", "3/7,2/7,2/7", "--max-steps", "2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn partition_prints_cell_count_and_blocks() {
    let o = tridyn(&["partition", "pedal"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "cells=4");
    assert_eq!(lines.len(), 5);
    for (i, line) in lines[1..].iter().enumerate() {
        assert!(line.starts_with(&format!("cell {i} unfold=")), "{line}");
        assert!(line.contains(" vertices "), "{line}");
    }
}

#[test]
fn partition_of_the_identity_is_one_cell() {
    let o = tridyn(&["partition", "identity"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("cells=1\n"));
}

#[test]
fn itinerary_prints_symbols_and_flags_boundary_visits() {
    let interior = tridyn(&["itinerary", "pedal", "5/11,4/11,2/11", "--length", "6"]);
    assert_eq!(code(&interior), 0);
    assert_eq!(stdout(&interior), "0 2 1 1 3 0\n");

    let on_mirror = tridyn(&["itinerary", "pedal", "3/7,2/7,2/7", "--length", "4"]);
    assert_eq!(code(&on_mirror), 0);
    let out = stdout(&on_mirror);
    assert!(out.contains("boundary_steps=0,1,2,3"), "{out}");
}

#[test]
fn decompose_prints_ratios_then_factors() {
    let o = tridyn(&["decompose", "-3 2 2 2 -3 2 2 2 -3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("r=4/5,3/4,2/3 antipedal=true\n"), "{out}");
    assert_eq!(out.lines().count(), 5, "one header plus four factors");
}

#[test]
fn decompose_refuses_maps_without_a_factorization() {
    let o = tridyn(&["decompose", "identity"]);
    assert_eq!(code(&o), 1);
    let o = tridyn(&["decompose", "0 1 -1 -1 0 1 2 0 1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn stats_runs_are_deterministic_for_a_seed() {
    let args = ["stats", "pedal", "--points", "25", "--length", "10", "--seed", "11"];
    let a = tridyn(&args);
    let b = tridyn(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("orbits used="));
}

#[test]
fn render_partition_emits_labeled_cells() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("p.svg");
    let o = tridyn(&["render", "pedal", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 4);
    for i in 0..4 {
        assert!(svg.contains(&format!("id=\"cell-{i}\"")));
    }
    assert!(svg.starts_with("<?xml version=\"1.0\""));
}

#[test]
fn render_image_and_orbit_modes_produce_svg() {
    let dir = tempdir().unwrap();
    let img = dir.path().join("i.svg");
    let o = tridyn(&["render", "identity", "--out", img.to_str().unwrap(), "--mode", "image"]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&img).unwrap().contains("</svg>"));

    let orb = dir.path().join("o.svg");
    let o = tridyn(&[
        "render", "pedal", "--out", orb.to_str().unwrap(), "--mode", "orbit", "--shape",
        "5/11,4/11,2/11",
    ]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&orb).unwrap().contains("<polyline"));
}

#[test]
fn render_orbit_requires_a_shape() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("o.svg");
    let o = tridyn(&["render", "pedal", "--out", path.to_str().unwrap(), "--mode", "orbit"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn render_to_an_unwritable_path_is_an_io_error() {
    let o = tridyn(&["render", "pedal", "--out", "/no-such-dir/x.svg"]);
    assert_eq!(code(&o), 3);
}
