//! Argument parsing shared by the subcommands: rational shape triples,
//! integer matrices (inline, named alias, JSON, or `@file` indirection),
//! and the error type that maps failures onto process exit codes.

use std::fmt;
use std::fs;

use serde::Deserialize;
use tridyn_core::moduli::ModuliError;
use tridyn_core::{canonicalize, CanonicalShape, Mat3Q, Vec3Q};

/// Command failure bucketed by exit code: domain errors (valid input, no
/// answer) exit 1, unparseable input exits 2, filesystem trouble exits 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CmdError {
    Domain(String),
    Parse(String),
    Io(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Domain(_) => 1,
            CmdError::Parse(_) => 2,
            CmdError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Domain(m) | CmdError::Parse(m) | CmdError::Io(m) => f.write_str(m),
        }
    }
}

#[derive(Deserialize)]
struct MatrixDoc {
    matrix: [[i64; 3]; 3],
}

/// `@path` arguments are replaced by the file's contents; anything else
/// passes through untouched.
fn resolve(arg: &str) -> Result<String, CmdError> {
    match arg.strip_prefix('@') {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| CmdError::Io(format!("cannot read {path}: {e}")))
        }
        None => Ok(arg.to_owned()),
    }
}

/// Accepts a named alias (`pedal`, `identity`), nine integers row-major
/// separated by spaces and/or commas, or a JSON document
/// `{"matrix": [[..],[..],[..]]}`.
pub fn parse_matrix_arg(arg: &str) -> Result<Mat3Q, CmdError> {
    let text = resolve(arg)?;
    let t = text.trim();
    match t {
        "pedal" => return Ok(Mat3Q::from_ints([[-1, 1, 1], [1, -1, 1], [1, 1, -1]])),
        "identity" => return Ok(Mat3Q::identity()),
        _ => {}
    }
    if t.starts_with('{') {
        let doc: MatrixDoc =
            serde_json::from_str(t).map_err(|e| CmdError::Parse(format!("bad matrix JSON: {e}")))?;
        return Ok(Mat3Q::from_ints(doc.matrix));
    }
    t.parse::<Mat3Q>()
        .map_err(|e| CmdError::Parse(format!("bad matrix `{t}`: {e}")))
}

/// A comma-separated rational triple, e.g. `-1/5,3/5,3/5`. The point may be
/// anywhere on the plane x+y+z = 1; it is not reduced here.
pub fn parse_plane_point(arg: &str) -> Result<Vec3Q, CmdError> {
    let text = resolve(arg)?;
    let t = text.trim();
    t.parse::<Vec3Q>()
        .map_err(|e| CmdError::Parse(format!("bad shape `{t}`: {e}")))
}

/// Parses a triple and reduces it to its chamber representative. A triple
/// off the plane is rejected as malformed input: every shape lives on A.
pub fn parse_shape_arg(arg: &str) -> Result<CanonicalShape, CmdError> {
    let v = parse_plane_point(arg)?;
    canonicalize(&v).map_err(|e| match e {
        ModuliError::NotOnPlaneA => {
            CmdError::Parse(format!("{arg}: not on plane A (x+y+z must be 1)"))
        }
        other => CmdError::Parse(other.to_string()),
    })
}
