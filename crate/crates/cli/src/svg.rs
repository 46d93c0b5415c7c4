//! Deterministic SVG emission. Geometry stays in exact rationals until the
//! final projection onto the drawing plane, and coordinates are printed with
//! a fixed six-decimal format, so identical inputs give identical bytes.
//!
//! The plane x+y+z = 1 is drawn through the isometric chart with origin at
//! the equilateral point and orthonormal axes u1 = (e1-e2)/sqrt(2),
//! u2 = (e1+e2-2*e3)/sqrt(6); screen y points down.

use std::fmt::Write as _;

use num::ToPrimitive;
use tridyn_core::atm::Atm;
use tridyn_core::dynamics::{orbit, step};
use tridyn_core::linalg::Vec3Q;
use tridyn_core::markov::{build_partition, MarkovPartition};
use tridyn_core::moduli::CanonicalShape;
use tridyn_core::num::{rat, rint, Rational};

use crate::formats::CmdError;
use crate::Mode;

const SCALE: f64 = 240.0;
const MARGIN: f64 = 24.0;

/// Fixed categorical palette indexed by symbol, so figures reproduce.
const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

fn proj(v: &Vec3Q) -> (f64, f64) {
    let x = v.x.to_f64().expect("coordinate fits in f64");
    let y = v.y.to_f64().expect("coordinate fits in f64");
    let z = v.z.to_f64().expect("coordinate fits in f64");
    let px = (x - y) / 2.0_f64.sqrt() * SCALE;
    let py = -((x + y - 2.0 * z) / 6.0_f64.sqrt()) * SCALE;
    (px, py)
}

fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    // One spelling of zero.
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

fn pair(p: (f64, f64)) -> String {
    format!("{},{}", fmt6(p.0), fmt6(p.1))
}

/// Bounding box of everything drawn so far, in screen units.
struct Frame {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Frame {
    fn new() -> Frame {
        Frame {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, p: (f64, f64)) {
        self.min_x = self.min_x.min(p.0);
        self.min_y = self.min_y.min(p.1);
        self.max_x = self.max_x.max(p.0);
        self.max_y = self.max_y.max(p.1);
    }

    /// (x, y, width, height) padded by the standard margin.
    fn padded(&self) -> (f64, f64, f64, f64) {
        (
            self.min_x - MARGIN,
            self.min_y - MARGIN,
            (self.max_x - self.min_x) + 2.0 * MARGIN,
            (self.max_y - self.min_y) + 2.0 * MARGIN,
        )
    }
}

fn document(frame: &Frame, defs: &str, body: &str) -> String {
    let (x, y, w, h) = frame.padded();
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" \
         version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"{}\" height=\"{}\">\n{}{}</svg>\n",
        fmt6(x),
        fmt6(y),
        fmt6(w),
        fmt6(h),
        fmt6(w),
        fmt6(h),
        defs,
        body
    )
}

/// One `<polygon id="cell-i">` per partition cell, plus symbol labels.
fn cell_polygons(mp: &MarkovPartition, frame: &mut Frame, opacity: &str) -> String {
    let n = mp.symbol_count();
    let label_size = (34.0 / (n as f64).sqrt()).clamp(6.0, 18.0);
    let mut out = String::new();
    for cell in mp.cells() {
        let pts: Vec<(f64, f64)> = cell.polygon().iter().map(proj).collect();
        for &p in &pts {
            frame.add(p);
        }
        let i = cell.index();
        writeln!(
            out,
            "<polygon id=\"cell-{i}\" points=\"{} {} {}\" fill=\"{}\" fill-opacity=\"{opacity}\" \
             stroke=\"#333333\" stroke-width=\"1\"/>",
            pair(pts[0]),
            pair(pts[1]),
            pair(pts[2]),
            PALETTE[i % PALETTE.len()],
        )
        .unwrap();
        let cx = (pts[0].0 + pts[1].0 + pts[2].0) / 3.0;
        let cy = (pts[0].1 + pts[1].1 + pts[2].1) / 3.0;
        writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{label_size:.1}\" \
             text-anchor=\"middle\" fill=\"#222222\">{i}</text>",
            fmt6(cx),
            fmt6(cy + label_size / 3.0),
        )
        .unwrap();
    }
    out
}

pub fn render(
    atm: &Atm,
    mode: Mode,
    start: Option<&CanonicalShape>,
    max_steps: usize,
) -> Result<String, CmdError> {
    match mode {
        Mode::Partition => render_partition(atm),
        Mode::Image => Ok(render_image(atm)),
        Mode::Orbit => {
            let s = start
                .ok_or_else(|| CmdError::Parse("--shape is required for --mode orbit".into()))?;
            render_orbit(atm, s, max_steps)
        }
    }
}

fn partition_of(atm: &Atm) -> Result<MarkovPartition, CmdError> {
    build_partition(atm).map_err(|e| CmdError::Domain(e.to_string()))
}

fn render_partition(atm: &Atm) -> Result<String, CmdError> {
    let mp = partition_of(atm)?;
    let mut frame = Frame::new();
    let body = cell_polygons(&mp, &mut frame, "0.85");
    Ok(document(&frame, "", &body))
}

fn render_orbit(atm: &Atm, start: &CanonicalShape, max_steps: usize) -> Result<String, CmdError> {
    let mp = partition_of(atm)?;
    let rec = orbit(atm, start, max_steps).map_err(|e| CmdError::Domain(e.to_string()))?;
    let mut frame = Frame::new();
    let mut body = cell_polygons(&mp, &mut frame, "0.30");

    // The walk up to and including the first return to the cycle's start.
    let mut pts = Vec::with_capacity(rec.preperiod + rec.period + 1);
    let mut cur = start.clone();
    pts.push(proj(cur.point()));
    for _ in 0..rec.preperiod + rec.period {
        cur = step(atm, &cur);
        pts.push(proj(cur.point()));
    }
    let path: Vec<String> = pts.iter().map(|&p| pair(p)).collect();
    writeln!(
        body,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f1f1f\" stroke-width=\"1.5\"/>",
        path.join(" ")
    )
    .unwrap();
    for (i, &p) in pts.iter().enumerate() {
        let r = if i == 0 { 4.0 } else { 2.5 };
        writeln!(
            body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{r:.1}\" fill=\"#e15759\" stroke=\"#7a2024\" \
             stroke-width=\"0.7\"/>",
            fmt6(p.0),
            fmt6(p.1),
        )
        .unwrap();
    }
    Ok(document(&frame, "", &body))
}

/// Mirror lines of the tiling group: coordinates or pairwise differences
/// equal to an integer. Each family is (functional, point with value k,
/// direction along the level line).
type Functional = fn(&Vec3Q) -> Rational;
type Anchor = fn(&Rational) -> Vec3Q;

fn fx(v: &Vec3Q) -> Rational {
    v.x.clone()
}
fn fy(v: &Vec3Q) -> Rational {
    v.y.clone()
}
fn fz(v: &Vec3Q) -> Rational {
    v.z.clone()
}
fn fxy(v: &Vec3Q) -> Rational {
    &v.x - &v.y
}
fn fyz(v: &Vec3Q) -> Rational {
    &v.y - &v.z
}
fn fxz(v: &Vec3Q) -> Rational {
    &v.x - &v.z
}

fn ax(k: &Rational) -> Vec3Q {
    let rest = (&rint(1) - k) * rat(1, 2);
    Vec3Q::new(k.clone(), rest.clone(), rest)
}
fn ay(k: &Rational) -> Vec3Q {
    let rest = (&rint(1) - k) * rat(1, 2);
    Vec3Q::new(rest.clone(), k.clone(), rest)
}
fn az(k: &Rational) -> Vec3Q {
    let rest = (&rint(1) - k) * rat(1, 2);
    Vec3Q::new(rest.clone(), rest, k.clone())
}
fn axy(k: &Rational) -> Vec3Q {
    let third = rat(1, 3);
    let half_k = k * &rat(1, 2);
    Vec3Q::new(&third + &half_k, &third - &half_k, third.clone())
}
fn ayz(k: &Rational) -> Vec3Q {
    let third = rat(1, 3);
    let half_k = k * &rat(1, 2);
    Vec3Q::new(third.clone(), &third + &half_k, &third - &half_k)
}
fn axz(k: &Rational) -> Vec3Q {
    let third = rat(1, 3);
    let half_k = k * &rat(1, 2);
    Vec3Q::new(&third + &half_k, third.clone(), &third - &half_k)
}

const FAMILIES: [(Functional, Anchor, [i64; 3]); 6] = [
    (fx, ax, [0, 1, -1]),
    (fy, ay, [1, 0, -1]),
    (fz, az, [1, -1, 0]),
    (fxy, axy, [1, 1, -2]),
    (fyz, ayz, [-2, 1, 1]),
    (fxz, axz, [1, -2, 1]),
];

/// The base chamber's triangle (all of shape space folds into it) drawn as
/// an outline, the matrix image of its corners shaded, and the tiling's
/// mirror lines behind both, clipped to the viewport.
fn render_image(atm: &Atm) -> String {
    let base = [
        Vec3Q::from_ints([1, 0, 0]),
        Vec3Q::from_ints([0, 1, 0]),
        Vec3Q::from_ints([0, 0, 1]),
    ];
    let m = atm.matrix();
    let image: Vec<Vec3Q> = base.iter().map(|v| m.apply(v)).collect();

    let mut frame = Frame::new();
    let base_pts: Vec<(f64, f64)> = base.iter().map(proj).collect();
    let image_pts: Vec<(f64, f64)> = image.iter().map(proj).collect();
    for &p in base_pts.iter().chain(&image_pts) {
        frame.add(p);
    }
    let (vx, vy, vw, vh) = frame.padded();
    let defs = format!(
        "<defs><clipPath id=\"viewport\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\
         </clipPath></defs>\n",
        fmt6(vx),
        fmt6(vy),
        fmt6(vw),
        fmt6(vh)
    );

    // Integer levels of each functional that can meet the viewport, padded
    // by one on each side; segments overshoot and are clipped.
    let corners: Vec<&Vec3Q> = base.iter().chain(&image).collect();
    let mut body = String::from("<g clip-path=\"url(#viewport)\">\n");
    let mut overall_span = 0i64;
    let mut ranges = Vec::new();
    for (eval, _, _) in &FAMILIES {
        let values: Vec<Rational> = corners.iter().map(|v| eval(v)).collect();
        let lo = values.iter().min().unwrap().floor().to_integer().to_i64().unwrap() - 1;
        let hi = values.iter().max().unwrap().ceil().to_integer().to_i64().unwrap() + 1;
        overall_span = overall_span.max(hi - lo);
        ranges.push((lo, hi));
    }
    let reach = rint(overall_span + 4);
    for ((_, anchor, dir), (lo, hi)) in FAMILIES.iter().zip(ranges) {
        let d = Vec3Q::from_ints(*dir);
        for k in lo..=hi {
            let at = anchor(&rint(k));
            let a = proj(&at.sub(&d.scale(&reach)));
            let b = proj(&at.add(&d.scale(&reach)));
            writeln!(
                body,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#cccccc\" \
                 stroke-width=\"0.6\"/>",
                fmt6(a.0),
                fmt6(a.1),
                fmt6(b.0),
                fmt6(b.1),
            )
            .unwrap();
        }
    }
    body.push_str("</g>\n");

    writeln!(
        body,
        "<polygon points=\"{} {} {}\" fill=\"#4e79a7\" fill-opacity=\"0.45\" stroke=\"#2a4a6a\" \
         stroke-width=\"1.2\"/>",
        pair(image_pts[0]),
        pair(image_pts[1]),
        pair(image_pts[2]),
    )
    .unwrap();
    writeln!(
        body,
        "<polygon points=\"{} {} {}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>",
        pair(base_pts[0]),
        pair(base_pts[1]),
        pair(base_pts[2]),
    )
    .unwrap();
    document(&frame, &defs, &body)
}
