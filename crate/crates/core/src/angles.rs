//! Angle extraction: planar triangle vertices -> normalized angle triple.
//!
//! The only place floats enter the library. Angles are measured with `acos`,
//! divided by pi, and snapped to rationals so the exact machinery downstream
//! can take over.

use crate::linalg::Vec3Q;
use crate::num::{best_rational_approx, Rational};
use num::One;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("coincident vertices")]
pub struct CoincidentVertices;

/// Float angle triple plus its rational snap.
#[derive(Debug, Clone)]
pub struct VertexAngles {
    /// Normalized interior angles (angle/pi), one per input vertex, in input
    /// order. Sums to 1 up to float error.
    pub angles: [f64; 3],
    /// Rational snap: first two angles rounded at the denominator bound, the
    /// third derived so the triple sums to exactly 1.
    pub shape: Vec3Q,
    /// True when some angle is within 1e-9 of zero (collinear input).
    pub flat: bool,
}

fn angle_at(apex: (f64, f64), p: (f64, f64), q: (f64, f64)) -> f64 {
    let u = (p.0 - apex.0, p.1 - apex.1);
    let v = (q.0 - apex.0, q.1 - apex.1);
    let dot = u.0 * v.0 + u.1 * v.1;
    let nu = (u.0 * u.0 + u.1 * u.1).sqrt();
    let nv = (v.0 * v.0 + v.1 * v.1).sqrt();
    let c = (dot / (nu * nv)).clamp(-1.0, 1.0);
    c.acos() / std::f64::consts::PI
}

/// Interior angles of the triangle `z1 z2 z3`, normalized by pi, with a
/// rational snap at denominator bound `max_den`.
///
/// Collinear input is legal: the straight vertex gets angle 1, the others 0,
/// and `flat` is set. Two equal vertices are not.
pub fn shape_from_vertices(
    z1: (f64, f64),
    z2: (f64, f64),
    z3: (f64, f64),
    max_den: u64,
) -> Result<VertexAngles, CoincidentVertices> {
    if z1 == z2 || z2 == z3 || z1 == z3 {
        return Err(CoincidentVertices);
    }
    let angles = [
        angle_at(z1, z2, z3),
        angle_at(z2, z3, z1),
        angle_at(z3, z1, z2),
    ];
    let r1 = best_rational_approx(angles[0], max_den);
    let r2 = best_rational_approx(angles[1], max_den);
    let r3 = &(&Rational::one() - &r1) - &r2;
    let flat = angles.iter().any(|a| a.abs() < 1e-9);
    Ok(VertexAngles {
        angles,
        shape: Vec3Q::new(r1, r2, r3),
        flat,
    })
}
