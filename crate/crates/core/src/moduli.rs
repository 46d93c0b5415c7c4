//! The hexagonal symmetry group G acting on the plane A = {x+y+z = 1}, and
//! reduction of shapes to the fundamental chamber D.
//!
//! G is generated by coordinate permutations and four involutions that act on
//! A as reflections / half-turns of a triangular tiling. Every G-orbit meets
//! the chamber D = {a1 >= a2 >= a3 >= 0} in exactly one point; `canonicalize`
//! computes it, optionally with a group element witnessing the reduction.

use crate::linalg::{Mat3Q, Vec3Q};
use crate::num::{frac, rint, Rational};
use num::{BigInt, One, Signed, Zero};
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuliError {
    #[error("point is not on the plane x+y+z=1")]
    NotOnPlaneA,
    #[error("unknown generator label `{0}`")]
    UnknownGenerator(String),
    #[error("word-length limit exceeded (maximum 12)")]
    LimitExceeded,
}

/// Generator labels for G.
///
/// P12/P13/P23 are coordinate transpositions, R reflects across the line
/// a3 = 0, Ra/Rb/Rc are half-turns about the edge midpoints (0,1/2,1/2),
/// (1/2,0,1/2), (1/2,1/2,0), and Tx/Ty translate by e1-e2, e2-e3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    P12,
    P13,
    P23,
    R,
    Ra,
    Rb,
    Rc,
    Tx,
    Ty,
}

impl Gen {
    pub const ALL: [Gen; 9] = [
        Gen::P12,
        Gen::P13,
        Gen::P23,
        Gen::R,
        Gen::Ra,
        Gen::Rb,
        Gen::Rc,
        Gen::Tx,
        Gen::Ty,
    ];

    pub fn matrix(self) -> Mat3Q {
        let m = match self {
            Gen::P12 => [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
            Gen::P13 => [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
            Gen::P23 => [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
            Gen::R => [[1, 0, 1], [0, 1, 1], [0, 0, -1]],
            Gen::Ra => [[-1, 0, 0], [1, 0, 1], [1, 1, 0]],
            Gen::Rb => [[0, 1, 1], [0, -1, 0], [1, 1, 0]],
            Gen::Rc => [[0, 1, 1], [1, 0, 1], [0, 0, -1]],
            // Tx = Rb*Ra, Ty = Rc*Rb; multiplied out once.
            Gen::Tx => [[2, 1, 1], [-1, 0, -1], [0, 0, 1]],
            Gen::Ty => [[1, 0, 0], [1, 2, 1], [-1, -1, 0]],
        };
        Mat3Q::from_ints(m)
    }

    pub fn label(self) -> &'static str {
        match self {
            Gen::P12 => "P12",
            Gen::P13 => "P13",
            Gen::P23 => "P23",
            Gen::R => "R",
            Gen::Ra => "Ra",
            Gen::Rb => "Rb",
            Gen::Rc => "Rc",
            Gen::Tx => "Tx",
            Gen::Ty => "Ty",
        }
    }

    pub fn from_label(s: &str) -> Result<Gen, ModuliError> {
        Gen::ALL
            .into_iter()
            .find(|g| g.label() == s)
            .ok_or_else(|| ModuliError::UnknownGenerator(s.to_string()))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An element of G: an exact integer matrix together with a word in the
/// generators that multiplies out to it.
///
/// Equality, ordering and hashing ignore the word — two elements are equal
/// iff their matrices are.
#[derive(Debug, Clone)]
pub struct GroupElement {
    matrix: Mat3Q,
    word: Vec<(Gen, BigInt)>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}
impl Eq for GroupElement {}
impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

fn push_letter(word: &mut Vec<(Gen, BigInt)>, gen: Gen, exp: BigInt) {
    if exp.is_zero() {
        return;
    }
    if let Some(last) = word.last_mut() {
        if last.0 == gen {
            last.1 += exp;
            if last.1.is_zero() {
                word.pop();
            }
            return;
        }
    }
    word.push((gen, exp));
}

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement {
            matrix: Mat3Q::identity(),
            word: Vec::new(),
        }
    }

    pub fn generator(g: Gen) -> GroupElement {
        GroupElement {
            matrix: g.matrix(),
            word: vec![(g, BigInt::one())],
        }
    }

    /// Translation by a*(e1-e2) + b*(e2-e3), written as Tx^a * Ty^b.
    pub fn lattice_translation(a: BigInt, b: BigInt) -> GroupElement {
        let u = Vec3Q::new(
            Rational::from_integer(a.clone()),
            Rational::from_integer(&b - &a),
            Rational::from_integer(-&b),
        );
        let mut word = Vec::new();
        push_letter(&mut word, Gen::Tx, a);
        push_letter(&mut word, Gen::Ty, b);
        GroupElement {
            matrix: Mat3Q::translation(&u),
            word,
        }
    }

    pub fn matrix(&self) -> &Mat3Q {
        &self.matrix
    }

    pub fn word(&self) -> &[(Gen, BigInt)] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Mat3Q::identity()
    }

    /// g.compose(h) acts as v -> g(h(v)).
    pub fn compose(&self, rhs: &GroupElement) -> GroupElement {
        let mut word = self.word.clone();
        for (g, e) in &rhs.word {
            push_letter(&mut word, *g, e.clone());
        }
        GroupElement {
            matrix: self.matrix.mul(&rhs.matrix),
            word,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let matrix = self
            .matrix
            .inverse()
            .expect("group element matrices are invertible");
        let mut word = Vec::new();
        for (g, e) in self.word.iter().rev() {
            push_letter(&mut word, *g, -e);
        }
        GroupElement { matrix, word }
    }

    pub fn pow(&self, e: i64) -> GroupElement {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupElement::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    pub fn apply(&self, v: &Vec3Q) -> Vec3Q {
        self.matrix.apply(v)
    }

    /// Re-multiplies the word's generator matrices; always equals `matrix()`.
    pub fn matrix_from_word(&self) -> Mat3Q {
        let mut m = Mat3Q::identity();
        for (g, e) in &self.word {
            let base = if e.is_negative() {
                g.matrix().inverse().expect("generators are invertible")
            } else {
                g.matrix()
            };
            let mut n = e.abs();
            while n.is_positive() {
                m = m.mul(&base);
                n -= BigInt::one();
            }
        }
        m
    }
}

impl fmt::Display for GroupElement {
    /// The word: `id`, or letters joined by `*` with `^exp` for exponents
    /// other than 1 (e.g. `Tx^2*Ty^-1*Ra`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("id");
        }
        for (i, (g, e)) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if e.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The six coordinate-permutation elements: identity, the three
/// transpositions, and the two 3-cycles.
pub fn permutation_elements() -> &'static [GroupElement; 6] {
    static PERMS: OnceLock<[GroupElement; 6]> = OnceLock::new();
    PERMS.get_or_init(|| {
        let g = GroupElement::generator;
        [
            GroupElement::identity(),
            g(Gen::P12),
            g(Gen::P13),
            g(Gen::P23),
            g(Gen::P12).compose(&g(Gen::P13)), // (x,y,z) -> (y,z,x)
            g(Gen::P13).compose(&g(Gen::P12)), // (x,y,z) -> (z,x,y)
        ]
    })
}

/// A shape in the fundamental chamber D: coordinates sorted non-increasing,
/// all non-negative, summing to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalShape(Vec3Q);

impl CanonicalShape {
    /// Wraps a point already known to lie in D. Panics otherwise: callers
    /// are responsible for reducing first (see `canonicalize`).
    pub fn new(v: Vec3Q) -> CanonicalShape {
        assert!(
            v.in_plane_a() && v.x >= v.y && v.y >= v.z && !v.z.is_negative(),
            "point {v} is not in the fundamental chamber"
        );
        CanonicalShape(v)
    }

    pub fn point(&self) -> &Vec3Q {
        &self.0
    }

    pub fn into_point(self) -> Vec3Q {
        self.0
    }
}

impl fmt::Display for CanonicalShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A point of the plane A with a lazily cached canonical representative.
#[derive(Debug)]
pub struct RationalShape {
    v: Vec3Q,
    canonical: OnceLock<CanonicalShape>,
}

impl RationalShape {
    pub fn new(v: Vec3Q) -> Result<RationalShape, ModuliError> {
        if !v.in_plane_a() {
            return Err(ModuliError::NotOnPlaneA);
        }
        Ok(RationalShape {
            v,
            canonical: OnceLock::new(),
        })
    }

    pub fn point(&self) -> &Vec3Q {
        &self.v
    }

    pub fn canonical(&self) -> &CanonicalShape {
        self.canonical
            .get_or_init(|| canonicalize(&self.v).expect("validated on plane A"))
    }
}

impl Clone for RationalShape {
    fn clone(&self) -> Self {
        let out = RationalShape {
            v: self.v.clone(),
            canonical: OnceLock::new(),
        };
        if let Some(c) = self.canonical.get() {
            let _ = out.canonical.set(c.clone());
        }
        out
    }
}

impl PartialEq for RationalShape {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}
impl Eq for RationalShape {}

/// Membership in the fundamental chamber D.
pub fn in_d(v: &Vec3Q) -> Result<bool, ModuliError> {
    if !v.in_plane_a() {
        return Err(ModuliError::NotOnPlaneA);
    }
    Ok(v.x >= v.y && v.y >= v.z && !v.z.is_negative())
}

fn sort_descending_with_witness(w: &Vec3Q) -> (Vec3Q, GroupElement) {
    let mut vals = [w.x.clone(), w.y.clone(), w.z.clone()];
    vals.sort_by(|a, b| b.cmp(a));
    let sorted = Vec3Q::new(vals[0].clone(), vals[1].clone(), vals[2].clone());
    for p in permutation_elements() {
        if p.apply(w) == sorted {
            return (sorted, p.clone());
        }
    }
    unreachable!("some permutation sorts any triple");
}

/// The unique representative in D of the G-orbit of `v`, together with a
/// group element carrying `v` onto it.
///
/// Reduction: translate the fractional parts onto the unit cell (their sum
/// is 0, 1 or 2); the sum-2 cell maps onto the sum-1 cell by the half-turn
/// Ra; all-integer points are lattice translates of (1,0,0); finally sort
/// descending by a permutation.
pub fn canonicalize_with_witness(
    v: &Vec3Q,
) -> Result<(CanonicalShape, GroupElement), ModuliError> {
    if !v.in_plane_a() {
        return Err(ModuliError::NotOnPlaneA);
    }
    let k1 = v.x.floor().to_integer();
    let k3 = v.z.floor().to_integer();
    let f = Vec3Q::new(frac(&v.x), frac(&v.y), frac(&v.z));
    let s = f.sum();
    let (w, pre) = if s.is_zero() {
        let a = (Rational::one() - &v.x).to_integer();
        let b = v.z.to_integer();
        (
            Vec3Q::from_ints([1, 0, 0]),
            GroupElement::lattice_translation(a, b),
        )
    } else if s.is_one() {
        (f, GroupElement::lattice_translation(-k1, k3))
    } else {
        debug_assert_eq!(s, rint(2));
        let one = Rational::one();
        let w = Vec3Q::new(&one - &f.x, &one - &f.y, &one - &f.z);
        let t = GroupElement::lattice_translation(k1 + BigInt::one(), -k3);
        (w, t.compose(&GroupElement::generator(Gen::Ra)))
    };
    let (sorted, perm) = sort_descending_with_witness(&w);
    let witness = perm.compose(&pre);
    debug_assert_eq!(witness.apply(v), sorted);
    Ok((CanonicalShape::new(sorted), witness))
}

/// Witness-free canonicalization: same reduction as
/// `canonicalize_with_witness`, skipping all group-element bookkeeping.
/// This is the hot path of orbit iteration and the randomized oracle.
pub fn canonicalize(v: &Vec3Q) -> Result<CanonicalShape, ModuliError> {
    if !v.in_plane_a() {
        return Err(ModuliError::NotOnPlaneA);
    }
    let f = Vec3Q::new(frac(&v.x), frac(&v.y), frac(&v.z));
    let s = f.sum();
    let w = if s.is_zero() {
        Vec3Q::from_ints([1, 0, 0])
    } else if s.is_one() {
        f
    } else {
        debug_assert_eq!(s, rint(2));
        let one = Rational::one();
        Vec3Q::new(&one - &f.x, &one - &f.y, &one - &f.z)
    };
    let mut vals = [w.x, w.y, w.z];
    vals.sort_by(|a, b| b.cmp(a));
    let [a, b, c] = vals;
    Ok(CanonicalShape::new(Vec3Q::new(a, b, c)))
}

pub fn is_equivalent(v: &Vec3Q, w: &Vec3Q) -> Result<bool, ModuliError> {
    Ok(canonicalize(v)? == canonicalize(w)?)
}

/// Order of the stabilizer of `p` in G: 1 inside D, 2 on an edge, and 4, 6,
/// 12 at the vertices (1/2,1/2,0), (1/3,1/3,1/3), (1,0,0) respectively.
pub fn point_group_order(p: &CanonicalShape) -> u32 {
    let v = p.point();
    if *v == Vec3Q::from_ints([1, 0, 0]) {
        return 12;
    }
    if *v == Vec3Q::from_fractions([(1, 3), (1, 3), (1, 3)]) {
        return 6;
    }
    if *v == Vec3Q::from_fractions([(1, 2), (1, 2), (0, 1)]) {
        return 4;
    }
    let on_edge = v.x == v.y || v.y == v.z || v.z.is_zero();
    if on_edge {
        2
    } else {
        1
    }
}

/// True iff `v` lies on some mirror line of G, i.e. has a nontrivial
/// stabilizer: some coordinate or pairwise coordinate difference is an
/// integer. Equivalently, the canonical representative of `v` lies on the
/// boundary of D.
pub fn on_reflection_line(v: &Vec3Q) -> Result<bool, ModuliError> {
    if !v.in_plane_a() {
        return Err(ModuliError::NotOnPlaneA);
    }
    let on = v.x.is_integer()
        || v.y.is_integer()
        || v.z.is_integer()
        || (&v.x - &v.y).is_integer()
        || (&v.y - &v.z).is_integer()
        || (&v.x - &v.z).is_integer();
    Ok(on)
}

/// All distinct group elements expressible as products of at most
/// `max_word_length` generators, in a deterministic breadth-first order.
pub fn enumerate_group_ball(max_word_length: usize) -> Result<Vec<GroupElement>, ModuliError> {
    if max_word_length > 12 {
        return Err(ModuliError::LimitExceeded);
    }
    let mut seen: HashSet<Mat3Q> = HashSet::new();
    let id = GroupElement::identity();
    seen.insert(id.matrix().clone());
    let mut out = vec![id.clone()];
    let mut frontier = vec![id];
    for _ in 0..max_word_length {
        let mut next = Vec::new();
        for g in &frontier {
            for gen in Gen::ALL {
                let h = g.compose(&GroupElement::generator(gen));
                if seen.insert(h.matrix().clone()) {
                    out.push(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Breadth-first word search carrying `v` into D: the slow oracle that
/// `canonicalize` is tested against. Explores products of up to `max_len`
/// moves (the nine generators plus the inverse translations) and stops at
/// the first point of D found — which is the canonical representative,
/// since the orbit meets D exactly once. Returns None if the search depth
/// is exhausted.
pub fn brute_force_reduce(
    v: &Vec3Q,
    max_len: usize,
) -> Result<Option<(CanonicalShape, GroupElement)>, ModuliError> {
    if !v.in_plane_a() {
        return Err(ModuliError::NotOnPlaneA);
    }
    let in_chamber = |p: &Vec3Q| p.x >= p.y && p.y >= p.z && !p.z.is_negative();
    if in_chamber(v) {
        return Ok(Some((
            CanonicalShape::new(v.clone()),
            GroupElement::identity(),
        )));
    }
    let mut moves: Vec<GroupElement> = Gen::ALL
        .into_iter()
        .map(GroupElement::generator)
        .collect();
    moves.push(GroupElement::generator(Gen::Tx).inverse());
    moves.push(GroupElement::generator(Gen::Ty).inverse());

    let mut seen: HashSet<Vec3Q> = HashSet::new();
    seen.insert(v.clone());
    let mut queue: VecDeque<(Vec3Q, GroupElement, usize)> = VecDeque::new();
    queue.push_back((v.clone(), GroupElement::identity(), 0));
    while let Some((p, w, len)) = queue.pop_front() {
        if len == max_len {
            continue;
        }
        for m in &moves {
            let q = m.apply(&p);
            if seen.insert(q.clone()) {
                let wit = m.compose(&w);
                if in_chamber(&q) {
                    debug_assert_eq!(wit.apply(v), q);
                    return Ok(Some((CanonicalShape::new(q), wit)));
                }
                queue.push_back((q, wit, len + 1));
            }
        }
    }
    Ok(None)
}

/// The twelve-element stabilizer of e3 = (0,0,1): six rotations about e3
/// and six reflections through it.
pub fn stabilizer_e3() -> &'static Vec<GroupElement> {
    static H: OnceLock<Vec<GroupElement>> = OnceLock::new();
    H.get_or_init(|| {
        let g = GroupElement::generator;
        // Rotation by 120 degrees about e3: cycle coordinates, then
        // translate back so e3 is fixed.
        let c = g(Gen::P12).compose(&g(Gen::P23)); // (x,y,z) -> (z,x,y)
        let r2 = GroupElement::lattice_translation((-1).into(), (-1).into()).compose(&c);
        let r4 = r2.compose(&r2);
        // Half-turn about e3.
        let r3 = g(Gen::Ra).compose(&g(Gen::Rc)).compose(&g(Gen::Rb));
        let r1 = r3.compose(&r4);
        let r5 = r3.compose(&r2);
        let s0 = g(Gen::P12); // reflection fixing e3
        let rotations = [GroupElement::identity(), r1, r2, r3, r4, r5];
        let mut out = Vec::with_capacity(12);
        for r in &rotations {
            out.push(r.clone());
            out.push(r.compose(&s0));
        }
        out
    })
}

/// The stabilizer of e1 = (1,0,0): the conjugate of `stabilizer_e3` by P13.
pub fn stabilizer_e1() -> &'static Vec<GroupElement> {
    static H: OnceLock<Vec<GroupElement>> = OnceLock::new();
    H.get_or_init(|| {
        let p13 = GroupElement::generator(Gen::P13);
        stabilizer_e3()
            .iter()
            .map(|h| p13.compose(h).compose(&p13))
            .collect()
    })
}

/// Deduplicates a set of candidate stabilizer elements, used in tests.
#[cfg(test)]
fn distinct_matrices(els: &[GroupElement]) -> usize {
    els.iter()
        .map(|e| e.matrix().clone())
        .collect::<HashSet<_>>()
        .len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn b() -> Vec3Q {
        Vec3Q::from_fractions([(1, 3), (1, 3), (1, 3)])
    }

    fn e(i: usize) -> Vec3Q {
        let mut v = [0i64; 3];
        v[i - 1] = 1;
        Vec3Q::from_ints(v)
    }

    #[test]
    fn generator_matrices_match_the_tiling_actions() {
        assert_eq!(
            Gen::Ra.matrix(),
            Mat3Q::from_ints([[-1, 0, 0], [1, 0, 1], [1, 1, 0]])
        );
        assert_eq!(
            Gen::P12.matrix(),
            Mat3Q::from_ints([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        );
        // Each generator preserves A and has determinant +1 or -1.
        for g in Gen::ALL {
            let m = g.matrix();
            assert!(m.columns_sum_to_one(), "{g} does not preserve A");
            assert!(m.det() == rint(1) || m.det() == rint(-1));
        }
    }

    #[test]
    fn involutions_square_to_identity() {
        for g in [Gen::P12, Gen::P13, Gen::P23, Gen::R, Gen::Ra, Gen::Rb, Gen::Rc] {
            assert_eq!(g.matrix().mul(&g.matrix()), Mat3Q::identity(), "{g}");
        }
    }

    #[test]
    fn half_turns_factor_through_the_basic_reflections() {
        let m = |g: Gen| g.matrix();
        let prod = |gs: &[Gen]| {
            gs.iter()
                .fold(Mat3Q::identity(), |acc, g| acc.mul(&g.matrix()))
        };
        assert_eq!(m(Gen::Ra), prod(&[Gen::P23, Gen::P13, Gen::R, Gen::P13]));
        assert_eq!(m(Gen::Rb), prod(&[Gen::P23, Gen::R, Gen::P13, Gen::P12]));
        assert_eq!(m(Gen::Rc), prod(&[Gen::P12, Gen::R]));
        assert_eq!(m(Gen::Tx), prod(&[Gen::Rb, Gen::Ra]));
        assert_eq!(m(Gen::Ty), prod(&[Gen::Rc, Gen::Rb]));
    }

    #[test]
    fn translations_shift_by_lattice_vectors() {
        let tx = GroupElement::generator(Gen::Tx);
        assert_eq!(
            tx.apply(&b()),
            Vec3Q::from_fractions([(4, 3), (-2, 3), (1, 3)])
        );
        let ty = GroupElement::generator(Gen::Ty);
        assert_eq!(ty.apply(&b()), b().add(&e(2)).sub(&e(3)));

        let t = GroupElement::lattice_translation(2.into(), (-1).into());
        let shift = Vec3Q::from_ints([2, -3, 1]);
        assert_eq!(t.apply(&b()), b().add(&shift));
        assert_eq!(t.to_string(), "Tx^2*Ty^-1");
        assert_eq!(t.matrix_from_word(), *t.matrix());
    }

    #[test]
    fn composition_tracks_words_and_matrices() {
        let g = GroupElement::generator(Gen::Ra).compose(&GroupElement::generator(Gen::Tx));
        assert_eq!(g.to_string(), "Ra*Tx");
        assert_eq!(g.matrix_from_word(), *g.matrix());
        assert!(g.compose(&g.inverse()).is_identity());
        let idw = GroupElement::generator(Gen::Tx)
            .compose(&GroupElement::generator(Gen::Tx).inverse());
        assert_eq!(idw.to_string(), "id");
    }

    #[test]
    fn chamber_membership() {
        assert!(in_d(&Vec3Q::from_fractions([(1, 2), (1, 3), (1, 6)])).unwrap());
        assert!(in_d(&b()).unwrap());
        assert!(!in_d(&Vec3Q::from_fractions([(1, 4), (1, 2), (1, 4)])).unwrap());
        assert_eq!(
            in_d(&Vec3Q::from_ints([1, 1, 1])),
            Err(ModuliError::NotOnPlaneA)
        );
    }

    #[test]
    fn canonicalize_flips_the_negative_cell() {
        let v = Vec3Q::from_fractions([(-1, 5), (3, 5), (3, 5)]);
        let (c, w) = canonicalize_with_witness(&v).unwrap();
        assert_eq!(*c.point(), Vec3Q::from_fractions([(2, 5), (2, 5), (1, 5)]));
        assert_eq!(w.apply(&v), *c.point());
    }

    #[test]
    fn canonicalize_fixes_chamber_points() {
        let (c, w) = canonicalize_with_witness(&b()).unwrap();
        assert_eq!(*c.point(), b());
        assert!(w.is_identity());
    }

    #[test]
    fn canonicalize_sends_lattice_points_to_e1() {
        let v = Vec3Q::from_ints([5, -4, 0]);
        let (c, w) = canonicalize_with_witness(&v).unwrap();
        assert_eq!(*c.point(), e(1));
        assert_eq!(w.apply(&v), e(1));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for v in [
            Vec3Q::from_fractions([(-1, 5), (3, 5), (3, 5)]),
            Vec3Q::from_fractions([(17, 7), (-9, 7), (-1, 7)]),
            e(3),
        ] {
            let c = canonicalize(&v).unwrap();
            assert_eq!(canonicalize(c.point()).unwrap(), c);
        }
    }

    #[test]
    fn equivalence_examples() {
        let half = Vec3Q::from_fractions([(1, 2), (1, 4), (1, 4)]);
        let perm = Vec3Q::from_fractions([(1, 4), (1, 2), (1, 4)]);
        assert!(is_equivalent(&half, &perm).unwrap());
        assert!(is_equivalent(
            &Vec3Q::from_fractions([(-1, 5), (3, 5), (3, 5)]),
            &Vec3Q::from_fractions([(2, 5), (2, 5), (1, 5)])
        )
        .unwrap());
        assert!(!is_equivalent(&half, &b()).unwrap());
    }

    #[test]
    fn point_group_orders_at_vertices_edges_and_interior() {
        let order = |v: Vec3Q| point_group_order(&CanonicalShape::new(v));
        assert_eq!(order(e(1)), 12);
        assert_eq!(order(Vec3Q::from_fractions([(1, 2), (1, 2), (0, 1)])), 4);
        assert_eq!(order(b()), 6);
        assert_eq!(order(Vec3Q::from_fractions([(1, 2), (1, 3), (1, 6)])), 1);
        assert_eq!(order(Vec3Q::from_fractions([(1, 2), (1, 4), (1, 4)])), 2);
        assert_eq!(order(Vec3Q::from_fractions([(2, 3), (1, 3), (0, 1)])), 2);
    }

    #[test]
    fn stabilizer_order_is_constant_on_orbits() {
        let ball = enumerate_group_ball(3).unwrap();
        for v in [
            b(),
            Vec3Q::from_fractions([(1, 2), (1, 4), (1, 4)]),
            Vec3Q::from_fractions([(1, 2), (1, 3), (1, 6)]),
        ] {
            let base = point_group_order(&canonicalize(&v).unwrap());
            for g in &ball {
                let moved = canonicalize(&g.apply(&v)).unwrap();
                assert_eq!(point_group_order(&moved), base);
            }
        }
    }

    #[test]
    fn group_balls_grow_from_the_identity() {
        assert_eq!(enumerate_group_ball(0).unwrap().len(), 1);
        assert_eq!(enumerate_group_ball(1).unwrap().len(), 10);
        assert_eq!(enumerate_group_ball(13), Err(ModuliError::LimitExceeded));
    }

    #[test]
    fn ball_elements_preserve_equivalence_classes() {
        let v = Vec3Q::from_fractions([(2, 7), (4, 7), (1, 7)]);
        for g in enumerate_group_ball(2).unwrap() {
            assert!(is_equivalent(&v, &g.apply(&v)).unwrap(), "g = {g}");
            assert_eq!(g.matrix_from_word(), *g.matrix());
        }
    }

    #[test]
    fn brute_force_search_agrees_with_canonicalize() {
        for v in [
            Vec3Q::from_fractions([(-1, 5), (3, 5), (3, 5)]),
            Vec3Q::from_fractions([(9, 7), (-3, 7), (1, 7)]),
            Vec3Q::from_fractions([(1, 6), (1, 6), (2, 3)]),
        ] {
            let (slow, wit) = brute_force_reduce(&v, 8).unwrap().expect("within depth 8");
            assert_eq!(slow, canonicalize(&v).unwrap());
            assert_eq!(wit.apply(&v), *slow.point());
        }
    }

    #[test]
    fn mirror_line_membership() {
        assert!(on_reflection_line(&Vec3Q::from_fractions([(1, 2), (1, 4), (1, 4)])).unwrap());
        assert!(on_reflection_line(&Vec3Q::from_fractions([(2, 5), (1, 5), (2, 5)])).unwrap());
        assert!(!on_reflection_line(&Vec3Q::from_fractions([(1, 2), (1, 3), (1, 6)])).unwrap());
        // Lattice points sit on six mirrors at once.
        assert!(on_reflection_line(&Vec3Q::from_ints([3, -1, -1])).unwrap());
    }

    #[test]
    fn mirror_membership_matches_chamber_boundary() {
        // Being on a mirror is the same as the canonical representative
        // sitting on the boundary of D.
        for (n, d) in [(1i64, 7i64), (2, 7), (3, 7), (1, 6), (5, 6), (1, 2), (0, 1)] {
            for (m, e) in [(1i64, 3i64), (1, 6), (2, 5), (0, 1), (-1, 4)] {
                let x = rat(n, d);
                let y = rat(m, e);
                let z = Rational::one() - &x - &y;
                let v = Vec3Q::new(x, y, z);
                let c = canonicalize(&v).unwrap();
                let p = c.point();
                let boundary = p.x == p.y || p.y == p.z || p.z.is_zero();
                assert_eq!(on_reflection_line(&v).unwrap(), boundary, "v = {v}");
            }
        }
    }

    #[test]
    fn stabilizers_of_lattice_points_have_order_twelve() {
        let h3 = stabilizer_e3();
        assert_eq!(h3.len(), 12);
        assert_eq!(distinct_matrices(h3), 12);
        for h in h3 {
            assert_eq!(h.apply(&e(3)), e(3), "h = {h}");
            assert_eq!(h.matrix_from_word(), *h.matrix());
        }
        // Closure: products stay in the set.
        let mats: HashSet<Mat3Q> = h3.iter().map(|h| h.matrix().clone()).collect();
        for a in h3 {
            for b in h3 {
                assert!(mats.contains(&a.matrix().mul(b.matrix())));
            }
        }

        let h1 = stabilizer_e1();
        assert_eq!(distinct_matrices(h1), 12);
        for h in h1 {
            assert_eq!(h.apply(&e(1)), e(1));
        }
    }

    #[test]
    fn rational_shape_caches_its_canonical_form() {
        let s = RationalShape::new(Vec3Q::from_fractions([(-1, 5), (3, 5), (3, 5)])).unwrap();
        let c1 = s.canonical().clone();
        let s2 = s.clone();
        assert_eq!(*s2.canonical(), c1);
        assert_eq!(*c1.point(), Vec3Q::from_fractions([(2, 5), (2, 5), (1, 5)]));
        assert!(RationalShape::new(Vec3Q::from_ints([1, 1, 0])).is_err());
    }

    #[test]
    fn unknown_generator_labels_are_rejected() {
        assert_eq!(Gen::from_label("Ra").unwrap(), Gen::Ra);
        assert_eq!(
            Gen::from_label("Rx"),
            Err(ModuliError::UnknownGenerator("Rx".into()))
        );
    }
}
