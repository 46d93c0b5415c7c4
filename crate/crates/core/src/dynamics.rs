//! Iteration of shape transitions: one exact step, orbits with cycle
//! detection, boundary flags, the classical piecewise doubling rule and its
//! inverse, and exact preimage fans.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use num::Zero;
use thiserror::Error;

use crate::atm::{classify, Atm};
use crate::linalg::{Mat3Q, Vec3Q};
use crate::markov;
use crate::moduli::{canonicalize, CanonicalShape};
use crate::num::{rat, rint};

/// The doubling-map transition matrix, circulant with diagonal -1 and
/// off-diagonal 1, classified once and cached.
pub fn pedal_atm() -> &'static Atm {
    static PEDAL: OnceLock<Atm> = OnceLock::new();
    PEDAL.get_or_init(|| {
        classify(&Mat3Q::circulant(&rint(-1), &rint(1)))
            .expect("the doubling matrix is a valid transition matrix")
    })
}

/// Inverse of the doubling matrix: circulant with diagonal 0, off-diagonal 1/2.
/// Not integer, hence not a transition matrix itself.
pub fn antipedal_matrix() -> Mat3Q {
    Mat3Q::circulant(&rint(0), &rat(1, 2))
}

/// One exact step: apply the transition matrix, then reduce to the chamber.
pub fn step(a: &Atm, p: &CanonicalShape) -> CanonicalShape {
    canonicalize(&a.matrix().apply(p.point())).expect("unit column sums preserve the shape plane")
}

/// Result of the classical doubling rule, which is undefined on right shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PedalStep {
    Shape(CanonicalShape),
    DegenerateRight,
}

fn sorted_desc(v: Vec3Q) -> Vec3Q {
    let mut c = [v.x, v.y, v.z];
    c.sort();
    let [lo, mid, hi] = c;
    Vec3Q::new(hi, mid, lo)
}

/// The piecewise angle-doubling rule: acute shapes map to (1-2a_i) sorted,
/// obtuse ones to (2a_1-1, 2a_2, 2a_3) sorted, right ones are degenerate.
/// Agrees with `step(pedal_atm(), _)` away from the right locus.
pub fn hobson_pedal_step(p: &CanonicalShape) -> PedalStep {
    let v = p.point();
    let half = rat(1, 2);
    if v.x == half {
        return PedalStep::DegenerateRight;
    }
    let one = rint(1);
    let two = rint(2);
    let image = if v.x < half {
        Vec3Q::new(
            &one - &two * &v.x,
            &one - &two * &v.y,
            &one - &two * &v.z,
        )
    } else {
        Vec3Q::new(&two * &v.x - &one, &two * &v.y, &two * &v.z)
    };
    PedalStep::Shape(CanonicalShape::new(sorted_desc(image)))
}

/// Inverse of the doubling rule restricted to its acute branch: every shape
/// has exactly one non-obtuse ancestor, the image of the halving matrix.
pub fn antipedal_step(p: &CanonicalShape) -> CanonicalShape {
    CanonicalShape::new(sorted_desc(antipedal_matrix().apply(p.point())))
}

/// A fully resolved orbit: `cycle` lists the `period` distinct shapes starting
/// at iterate `preperiod`; the flags record whether any iterate (the start
/// included) had a zero coordinate or a coordinate exactly 1/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub start: CanonicalShape,
    pub preperiod: usize,
    pub period: usize,
    pub cycle: Vec<CanonicalShape>,
    pub hit_flat: bool,
    pub hit_right: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("no cycle within {max_steps} steps")]
    NoCycleWithinBound { max_steps: usize },
}

fn touches_flat(p: &CanonicalShape) -> bool {
    let v = p.point();
    v.x.is_zero() || v.y.is_zero() || v.z.is_zero()
}

fn touches_right(p: &CanonicalShape) -> bool {
    let v = p.point();
    let half = rat(1, 2);
    v.x == half || v.y == half || v.z == half
}

/// Iterates `step` until a shape repeats, recording the eventual cycle.
/// Exact arithmetic makes repeat detection a plain equality lookup; rational
/// orbits have bounded denominators, so a repeat always exists for a large
/// enough `max_steps`.
pub fn orbit(
    a: &Atm,
    start: &CanonicalShape,
    max_steps: usize,
) -> Result<OrbitRecord, DynamicsError> {
    let mut seq: Vec<CanonicalShape> = vec![start.clone()];
    let mut first_seen: HashMap<CanonicalShape, usize> = HashMap::new();
    first_seen.insert(start.clone(), 0);
    let mut hit_flat = touches_flat(start);
    let mut hit_right = touches_right(start);
    for _ in 0..max_steps {
        let next = step(a, seq.last().expect("seq is never empty"));
        if let Some(&i) = first_seen.get(&next) {
            return Ok(OrbitRecord {
                start: start.clone(),
                preperiod: i,
                period: seq.len() - i,
                cycle: seq[i..].to_vec(),
                hit_flat,
                hit_right,
            });
        }
        hit_flat |= touches_flat(&next);
        hit_right |= touches_right(&next);
        first_seen.insert(next.clone(), seq.len());
        seq.push(next);
    }
    Err(DynamicsError::NoCycleWithinBound { max_steps })
}

/// All canonical ancestors of `p` in one step: unfold `p` by each cell's
/// group element and pull back through the inverse matrix. Distinct cells can
/// yield the same ancestor only on cell boundaries; the set dedupes them.
pub fn preimages(a: &Atm, p: &CanonicalShape) -> BTreeSet<CanonicalShape> {
    let partition = markov::build_partition(a)
        .expect("valid transition matrices always admit a cell decomposition");
    let minv = a
        .matrix()
        .inverse()
        .expect("transition matrices are nonsingular");
    partition
        .cells()
        .iter()
        .map(|cell| {
            canonicalize(&minv.apply(&cell.unfold().apply(p.point())))
                .expect("pullbacks stay on the shape plane")
        })
        .collect()
}
