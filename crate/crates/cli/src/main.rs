//! `tridyn` — exact dynamics of triangle shapes from the command line.
//!
//! Shapes are rational triples on the plane x+y+z = 1; maps are integer
//! matrices validated as angle transition matrices. Everything prints in
//! exact rationals; floats appear only inside SVG coordinates.

mod formats;
mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use formats::{parse_matrix_arg, parse_shape_arg, CmdError};
use tridyn_core::angles::shape_from_vertices;
use tridyn_core::atm::{classify, Atm, AtmKind, ClassificationFailure};
use tridyn_core::dynamics::{orbit, step};
use tridyn_core::hofstadter::decompose;
use tridyn_core::markov::{build_partition, itinerary, symbol_statistics};
use tridyn_core::moduli::{canonicalize, point_group_order};

#[derive(Parser)]
#[command(
    name = "tridyn",
    version,
    about = "Exact linear dynamics of triangle shapes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce a shape to its canonical chamber representative
    Canon {
        /// Rational triple "a/b,c/d,e/f" summing to 1
        #[arg(allow_hyphen_values = true)]
        shape: Option<String>,
        /// Three triangle vertices "x1,y1;x2,y2;x3,y3" to snap to a rational shape
        #[arg(long, conflicts_with = "shape")]
        vertices: Option<String>,
        /// Largest denominator tried when snapping vertex angles
        #[arg(long, default_value_t = 1000)]
        denominator_bound: u64,
    },
    /// Classify an integer matrix as an angle transition matrix
    Classify {
        /// Nine integers row-major, an alias (pedal, identity), JSON, or @file
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Iterate a map from a starting shape until the orbit closes
    Orbit {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[arg(allow_hyphen_values = true)]
        shape: String,
        /// Give up if no cycle appears within this many steps
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Print the Markov partition of the chamber induced by a map
    Partition {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Print the symbol sequence of a shape under a map's partition
    Itinerary {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[arg(allow_hyphen_values = true)]
        shape: String,
        /// Number of symbols to emit
        #[arg(long, default_value_t = 20)]
        length: usize,
    },
    /// Factor a map's contracting inverse into one-vertex squeezes
    Decompose {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Sample random orbits and report symbol statistics
    Stats {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        /// Number of random starting shapes
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Symbols recorded per orbit
        #[arg(long, default_value_t = 32)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw the map, its partition, or an orbit as an SVG file
    Render {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        /// Output path for the SVG document
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Partition)]
        mode: Mode,
        /// Starting shape (required for --mode orbit)
        #[arg(long, allow_hyphen_values = true)]
        shape: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    /// Mirror-line tiling with the matrix image of the base triangle shaded
    Image,
    /// The chamber cut into the map's Markov cells
    Partition,
    /// An orbit path drawn over the partition
    Orbit,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: Cmd) -> Result<String, CmdError> {
    match cmd {
        Cmd::Canon {
            shape,
            vertices,
            denominator_bound,
        } => cmd_canon(shape.as_deref(), vertices.as_deref(), denominator_bound),
        Cmd::Classify { matrix } => Ok(classification_report(&classify_arg(&matrix)?)),
        Cmd::Orbit {
            matrix,
            shape,
            max_steps,
        } => cmd_orbit(&matrix, &shape, max_steps),
        Cmd::Partition { matrix } => cmd_partition(&matrix),
        Cmd::Itinerary {
            matrix,
            shape,
            length,
        } => cmd_itinerary(&matrix, &shape, length),
        Cmd::Decompose { matrix } => cmd_decompose(&matrix),
        Cmd::Stats {
            matrix,
            points,
            length,
            seed,
        } => cmd_stats(&matrix, points, length, seed),
        Cmd::Render {
            matrix,
            out,
            mode,
            shape,
            max_steps,
        } => cmd_render(&matrix, &out, mode, shape.as_deref(), max_steps),
    }
}

/// Parses and classifies a matrix argument; rejection is a domain error.
fn classify_arg(arg: &str) -> Result<Atm, CmdError> {
    let m = parse_matrix_arg(arg)?;
    classify(&m).map_err(|f| CmdError::Domain(format!("{}: {f}", failure_name(&f))))
}

fn failure_name(f: &ClassificationFailure) -> &'static str {
    match f {
        ClassificationFailure::NotInteger => "NotInteger",
        ClassificationFailure::ColumnsNotSumOne => "ColumnsNotSumOne",
        ClassificationFailure::Singular => "Singular",
        ClassificationFailure::ColumnsNotInLattice => "ColumnsNotInLattice",
        ClassificationFailure::EdgesNotOnReflectionLines => "EdgesNotOnReflectionLines",
        ClassificationFailure::NotEquilateral => "NotEquilateral",
        ClassificationFailure::RandomizedReexpressionFailure => "RandomizedReexpressionFailure",
    }
}

fn cmd_canon(
    shape: Option<&str>,
    vertices: Option<&str>,
    denominator_bound: u64,
) -> Result<String, CmdError> {
    let canonical = match (shape, vertices) {
        (Some(s), None) => parse_shape_arg(s)?,
        (None, Some(v)) => {
            let [z1, z2, z3] = parse_vertices(v)?;
            let snapped = shape_from_vertices(z1, z2, z3, denominator_bound)
                .map_err(|e| CmdError::Domain(e.to_string()))?;
            canonicalize(&snapped.shape).map_err(|e| CmdError::Domain(e.to_string()))?
        }
        _ => {
            return Err(CmdError::Parse(
                "provide a shape triple or --vertices".into(),
            ))
        }
    };
    let order = point_group_order(&canonical);
    Ok(format!("{canonical} pointgroup={order}"))
}

/// "x1,y1;x2,y2;x3,y3" as three Cartesian points.
fn parse_vertices(text: &str) -> Result<[(f64, f64); 3], CmdError> {
    let bad = || CmdError::Parse(format!("bad vertices `{text}`: want x1,y1;x2,y2;x3,y3"));
    let mut pts = [(0.0, 0.0); 3];
    let mut parts = text.split(';');
    for slot in &mut pts {
        let part = parts.next().ok_or_else(bad)?;
        let (x, y) = part.split_once(',').ok_or_else(bad)?;
        *slot = (
            x.trim().parse::<f64>().map_err(|_| bad())?,
            y.trim().parse::<f64>().map_err(|_| bad())?,
        );
    }
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(pts)
}

fn classification_report(atm: &Atm) -> String {
    let mut line = match atm.kind() {
        AtmKind::TypeI { c0, c1 } => format!("TypeI c0={c0} c1={c1}"),
        AtmKind::TypeII { c0, c1 } => format!("TypeII c0={c0} c1={c1}"),
        AtmKind::TypeIII { k } => format!("TypeIII k={k}"),
    };
    write!(line, " |det|={}", atm.abs_det()).unwrap();
    match atm.expansion() {
        Some(e) => write!(line, " expansion={e}").unwrap(),
        None => line.push_str(" expansion=none"),
    }
    write!(line, " witness={}", atm.witness()).unwrap();
    line
}

fn cmd_orbit(matrix: &str, shape: &str, max_steps: usize) -> Result<String, CmdError> {
    let atm = classify_arg(matrix)?;
    let start = parse_shape_arg(shape)?;
    let rec = orbit(&atm, &start, max_steps).map_err(|e| CmdError::Domain(e.to_string()))?;
    let mut out = String::new();
    let mut cur = start;
    for i in 0..rec.preperiod + rec.period {
        writeln!(out, "{i}: {cur}").unwrap();
        cur = step(&atm, &cur);
    }
    writeln!(out, "{}: {cur}", rec.preperiod + rec.period).unwrap();
    write!(
        out,
        "preperiod={} period={} flat={} right={}",
        rec.preperiod, rec.period, rec.hit_flat, rec.hit_right
    )
    .unwrap();
    Ok(out)
}

fn cmd_partition(matrix: &str) -> Result<String, CmdError> {
    let atm = classify_arg(matrix)?;
    let mp = build_partition(&atm).map_err(|e| CmdError::Domain(e.to_string()))?;
    Ok(format!(
        "cells={}\n{}",
        mp.symbol_count(),
        mp.to_string().trim_end()
    ))
}

fn cmd_itinerary(matrix: &str, shape: &str, length: usize) -> Result<String, CmdError> {
    let atm = classify_arg(matrix)?;
    let start = parse_shape_arg(shape)?;
    let mp = build_partition(&atm).map_err(|e| CmdError::Domain(e.to_string()))?;
    let it = itinerary(&mp, &start, length);
    let mut out = it.to_string();
    if !it.boundary_steps.is_empty() {
        let steps: Vec<String> = it.boundary_steps.iter().map(|s| s.to_string()).collect();
        write!(out, "\nboundary_steps={}", steps.join(",")).unwrap();
    }
    Ok(out)
}

fn cmd_decompose(matrix: &str) -> Result<String, CmdError> {
    let atm = classify_arg(matrix)?;
    match atm.kind() {
        AtmKind::TypeI { c1, .. } if !num::Zero::is_zero(c1) => {}
        kind => {
            return Err(CmdError::Domain(format!(
                "no vertex-squeeze factorization: need TypeI with c1 != 0, got {kind}"
            )))
        }
    }
    let d = decompose(&atm).map_err(|e| CmdError::Domain(e.to_string()))?;
    let mut out = format!(
        "r={},{},{} antipedal={}",
        d.r1, d.r2, d.r3, d.uses_antipedal
    );
    for f in &d.factors {
        write!(out, "\n{f}").unwrap();
    }
    Ok(out)
}

fn cmd_stats(matrix: &str, points: usize, length: usize, seed: u64) -> Result<String, CmdError> {
    let atm = classify_arg(matrix)?;
    let mp = build_partition(&atm).map_err(|e| CmdError::Domain(e.to_string()))?;
    let stats = symbol_statistics(&mp, points, length, seed);
    Ok(stats.to_string())
}

fn cmd_render(
    matrix: &str,
    out: &PathBuf,
    mode: Mode,
    shape: Option<&str>,
    max_steps: usize,
) -> Result<String, CmdError> {
    let atm = classify_arg(matrix)?;
    let start = match shape {
        Some(s) => Some(parse_shape_arg(s)?),
        None => None,
    };
    let doc = svg::render(&atm, mode, start.as_ref(), max_steps)?;
    fs::write(out, doc).map_err(|e| CmdError::Io(format!("cannot write {}: {e}", out.display())))?;
    Ok(format!("wrote {}", out.display()))
}
