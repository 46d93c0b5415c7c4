//! Angle transition matrices: integer matrices that act on shape space.
//!
//! A matrix M with unit column sums and nonzero determinant descends to a
//! well-defined map of the shape moduli only when it preserves re-expression
//! classes. Such matrices come in three families, each reachable from a
//! normal form by left-multiplying with a symmetry g of the tiling:
//!
//!   Type I    g*M = circulant symmetric, integer entries (diag c0, off c1)
//!   Type II   g*M = T_w^-1 * (circulant symmetric with entries c0/3, c1/3)
//!   Type III  g*M = [[0,k,-k],[-k,0,k],[k+1,1-k,1]]
//!
//! where T_w translates the plane by w = (1/3,1/3,-2/3). `classify` decides
//! membership, recovers the parameters and the witness g, and backs the
//! structural decision with a randomized re-expression check.

use crate::linalg::{Mat3Q, Vec3Q};
use crate::moduli::{
    canonicalize, canonicalize_with_witness, enumerate_group_ball, permutation_elements,
    stabilizer_e3, GroupElement,
};
use crate::num::{rat, Rational};
use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::OnceLock;

/// Trial count used by `classify` for the randomized confirmation layer.
pub const DEFAULT_ORACLE_TRIALS: u32 = 256;
/// Seed used by `classify` for the randomized confirmation layer.
pub const DEFAULT_ORACLE_SEED: u64 = 1;

/// First necessary condition violated by a rejected matrix, in the fixed
/// order the checks run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ClassificationFailure {
    #[error("matrix entries are not all integers")]
    NotInteger,
    #[error("matrix columns do not all sum to 1")]
    ColumnsNotSumOne,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix columns are not lattice points")]
    ColumnsNotInLattice,
    #[error("an image edge direction spans no reflection line")]
    EdgesNotOnReflectionLines,
    #[error("image triangle is not equilateral")]
    NotEquilateral,
    #[error("randomized re-expression check found a counterexample")]
    RandomizedReexpressionFailure,
}

/// Classified family with exact parameters.
///
/// Parameters are canonical: the chamber symmetry that flips the sign of
/// the scale parameter is quotiented out, so Type II carries c0 > c1 and
/// Type III carries k >= 1, while Type I parameters are rigid and keep
/// their sign (c0 + 2*c1 = 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtmKind {
    TypeI { c0: BigInt, c1: BigInt },
    TypeII { c0: BigInt, c1: BigInt },
    TypeIII { k: BigInt },
}

fn template_type3(k: &BigInt) -> Mat3Q {
    let k = Rational::from_integer(k.clone());
    let one = Rational::one();
    let zero = Rational::zero();
    Mat3Q::new([
        [zero.clone(), k.clone(), -&k],
        [-&k, zero, k.clone()],
        [&k + &one, &one - &k, one],
    ])
}

/// The translation of A by w = (1/3,1/3,-2/3), extended linearly. Not a
/// tiling symmetry, but it carries the Type II circulant form onto an
/// integer matrix.
fn t_w() -> &'static Mat3Q {
    static T: OnceLock<Mat3Q> = OnceLock::new();
    T.get_or_init(|| {
        Mat3Q::translation(&Vec3Q::from_fractions([(1, 3), (1, 3), (-2, 3)]))
    })
}

fn t_w_inv() -> &'static Mat3Q {
    static T: OnceLock<Mat3Q> = OnceLock::new();
    T.get_or_init(|| {
        Mat3Q::translation(&Vec3Q::from_fractions([(-1, 3), (-1, 3), (2, 3)]))
    })
}

impl AtmKind {
    /// The exact matrix this kind/parameter pair names.
    pub fn normal_form(&self) -> Mat3Q {
        match self {
            AtmKind::TypeI { c0, c1 } => Mat3Q::circulant(
                &Rational::from_integer(c0.clone()),
                &Rational::from_integer(c1.clone()),
            ),
            AtmKind::TypeII { c0, c1 } => {
                let c = Mat3Q::circulant(
                    &Rational::new(c0.clone(), 3.into()),
                    &Rational::new(c1.clone(), 3.into()),
                );
                t_w_inv().mul(&c)
            }
            AtmKind::TypeIII { k } => template_type3(k),
        }
    }
}

impl fmt::Display for AtmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtmKind::TypeI { c0, c1 } => write!(f, "TypeI(c0={c0}, c1={c1})"),
            AtmKind::TypeII { c0, c1 } => write!(f, "TypeII(c0={c0}, c1={c1})"),
            AtmKind::TypeIII { k } => write!(f, "TypeIII(k={k})"),
        }
    }
}

/// A validated angle transition matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atm {
    matrix: Mat3Q,
    kind: AtmKind,
    witness: GroupElement,
    abs_det: BigInt,
    expansion: Option<Rational>,
}

impl Atm {
    pub fn matrix(&self) -> &Mat3Q {
        &self.matrix
    }

    pub fn kind(&self) -> &AtmKind {
        &self.kind
    }

    /// Group element g with g * matrix = normal_form().
    pub fn witness(&self) -> &GroupElement {
        &self.witness
    }

    pub fn abs_det(&self) -> &BigInt {
        &self.abs_det
    }

    /// Scaling eigenvalue of the action on A, when rational: c0 - c1 for
    /// Type I, (c0 - c1)/3 for Type II. Type III scales by an irrational
    /// factor (sqrt(3)|k|, with a quarter turn), so it carries None.
    pub fn expansion(&self) -> Option<&Rational> {
        self.expansion.as_ref()
    }

    pub fn normal_form(&self) -> Mat3Q {
        self.kind.normal_form()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum MirrorFamily {
    Short,
    Long,
}

/// Writes `d` as an integer multiple of one of the six primitive directions
/// that span reflection lines: e1-e2, e2-e3, e3-e1 (short) and -2e1+e2+e3,
/// e1-2e2+e3, e1+e2-2e3 (long).
fn direction_fit(d: &Vec3Q) -> Option<(MirrorFamily, BigInt)> {
    const PRIMS: [(MirrorFamily, [i64; 3]); 6] = [
        (MirrorFamily::Short, [1, -1, 0]),
        (MirrorFamily::Short, [0, 1, -1]),
        (MirrorFamily::Short, [-1, 0, 1]),
        (MirrorFamily::Long, [-2, 1, 1]),
        (MirrorFamily::Long, [1, -2, 1]),
        (MirrorFamily::Long, [1, 1, -2]),
    ];
    for (family, p) in PRIMS {
        let pv = Vec3Q::from_ints(p);
        let i = (0..3).find(|&i| !pv.get(i).is_zero()).unwrap();
        let m = d.get(i) / pv.get(i);
        if m.is_integer() && !m.is_zero() && *d == pv.scale(&m) {
            return Some((family, m.to_integer()));
        }
    }
    None
}

fn barycenter() -> Vec3Q {
    Vec3Q::from_fractions([(1, 3), (1, 3), (1, 3)])
}

fn e3() -> Vec3Q {
    Vec3Q::from_ints([0, 0, 1])
}

/// Lattice translation carrying the lattice point `from` to e3.
fn translation_to_e3(from: &Vec3Q) -> GroupElement {
    debug_assert!(from.in_lattice());
    let a = -from.x.to_integer();
    let b = from.z.to_integer() - BigInt::one();
    let t = GroupElement::lattice_translation(a, b);
    debug_assert_eq!(t.apply(from), e3());
    t
}

/// Diagonal and off-diagonal of a circulant symmetric matrix, if it is one.
fn circulant_entries(m: &Mat3Q) -> Option<(Rational, Rational)> {
    let d = m.entry(0, 0);
    let o = m.entry(0, 1);
    let diag_ok = m.entry(1, 1) == d && m.entry(2, 2) == d;
    let off_ok = [(0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
        .iter()
        .all(|&(i, j)| m.entry(i, j) == o);
    (diag_ok && off_ok).then(|| (d.clone(), o.clone()))
}

fn type1(m: &Mat3Q, mb: &Vec3Q) -> (AtmKind, GroupElement) {
    let (c, g0) = canonicalize_with_witness(mb).expect("Mb is on A");
    assert_eq!(
        *c.point(),
        barycenter(),
        "short-edged image with non-lattice center must reduce to the barycenter"
    );
    let n = g0.matrix().mul(m);
    for q in permutation_elements() {
        let cand = q.matrix().mul(&n);
        if let Some((c0, c1)) = circulant_entries(&cand) {
            let kind = AtmKind::TypeI {
                c0: c0.to_integer(),
                c1: c1.to_integer(),
            };
            return (kind, q.compose(&g0));
        }
    }
    unreachable!("a chamber permutation always aligns a barycenter-fixing image");
}

fn type2(m: &Mat3Q, mb: &Vec3Q) -> (AtmKind, GroupElement) {
    let t = translation_to_e3(mb);
    let mut found: Option<(AtmKind, GroupElement)> = None;
    let three = Rational::from_integer(3.into());
    for h in stabilizer_e3() {
        let g = h.compose(&t);
        let c = t_w().mul(g.matrix()).mul(m);
        if let Some((d, o)) = circulant_entries(&c) {
            let c0r = &d * &three;
            let c1r = &o * &three;
            if !c0r.is_integer() || !c1r.is_integer() || d.is_integer() {
                continue; // thirds form: entries are strictly fractional thirds
            }
            let (c0, c1) = (c0r.to_integer(), c1r.to_integer());
            if c0 <= c1 {
                continue; // the sign-flipped twin; keep the expanding one
            }
            let kind = AtmKind::TypeII { c0, c1 };
            match &found {
                None => found = Some((kind, g)),
                Some((k0, _)) => assert_eq!(*k0, kind, "ambiguous circulant normalization"),
            }
        }
    }
    found.expect("a vertex symmetry always aligns a lattice-centered short image")
}

fn type3(m: &Mat3Q, mb: &Vec3Q) -> (AtmKind, GroupElement) {
    let t = translation_to_e3(mb);
    for h in stabilizer_e3() {
        let g = h.compose(&t);
        let n = g.matrix().mul(m);
        let k = n.entry(0, 1).clone();
        if !k.is_integer() || !k.is_positive() {
            continue;
        }
        let k = k.to_integer();
        if n == template_type3(&k) {
            return (AtmKind::TypeIII { k }, g);
        }
    }
    unreachable!("a vertex symmetry always aligns a long-edged image")
}

/// Classify with the default confirmation budget.
pub fn classify(m: &Mat3Q) -> Result<Atm, ClassificationFailure> {
    classify_with(m, DEFAULT_ORACLE_TRIALS, DEFAULT_ORACLE_SEED)
}

/// Decide whether `m` is an angle transition matrix.
///
/// Structural checks run first, in a fixed order, and the first violated
/// one is reported: integrality, unit column sums, invertibility, lattice
/// columns, image-edge directions spanning reflection lines, and
/// equilaterality of the image triangle. A surviving matrix is normalized
/// into its family's exact form to read off parameters and witness, then
/// confirmed by `verify_reexpression_randomized` with the given budget.
pub fn classify_with(
    m: &Mat3Q,
    trials: u32,
    seed: u64,
) -> Result<Atm, ClassificationFailure> {
    if !m.is_integer() {
        return Err(ClassificationFailure::NotInteger);
    }
    if !m.columns_sum_to_one() {
        return Err(ClassificationFailure::ColumnsNotSumOne);
    }
    let det = m.det();
    if det.is_zero() {
        return Err(ClassificationFailure::Singular);
    }
    if !(0..3).all(|j| m.col(j).in_lattice()) {
        return Err(ClassificationFailure::ColumnsNotInLattice);
    }
    let cols = [m.col(0), m.col(1), m.col(2)];
    let dirs = [
        cols[0].sub(&cols[1]),
        cols[1].sub(&cols[2]),
        cols[2].sub(&cols[0]),
    ];
    let mut fits = Vec::with_capacity(3);
    for d in &dirs {
        match direction_fit(d) {
            Some(f) => fits.push(f),
            None => return Err(ClassificationFailure::EdgesNotOnReflectionLines),
        }
    }
    let (family, mult) = (fits[0].0, fits[0].1.abs());
    if !fits.iter().all(|(f, m)| *f == family && m.abs() == mult) {
        return Err(ClassificationFailure::NotEquilateral);
    }

    let mb = m.apply(&barycenter());
    let (kind, witness) = match family {
        MirrorFamily::Short => {
            if mb.in_lattice() {
                type2(m, &mb)
            } else {
                type1(m, &mb)
            }
        }
        MirrorFamily::Long => {
            assert!(mb.in_lattice(), "long-edged images are lattice-centered");
            type3(m, &mb)
        }
    };

    if !verify_reexpression_randomized(m, trials, seed) {
        return Err(ClassificationFailure::RandomizedReexpressionFailure);
    }

    let nf = kind.normal_form();
    assert_eq!(witness.matrix().mul(m), nf, "witness must reproduce the normal form");

    let abs_det = det.to_integer().abs();
    let expansion = match &kind {
        AtmKind::TypeI { c0, c1 } => Some(Rational::from_integer(c0 - c1)),
        AtmKind::TypeII { c0, c1 } => Some(Rational::new(c0 - c1, 3.into())),
        AtmKind::TypeIII { .. } => None,
    };
    Ok(Atm {
        matrix: m.clone(),
        kind,
        witness,
        abs_det,
        expansion,
    })
}

fn oracle_ball() -> &'static Vec<GroupElement> {
    static BALL: OnceLock<Vec<GroupElement>> = OnceLock::new();
    BALL.get_or_init(|| enumerate_group_ball(6).expect("6 is within the limit"))
}

/// The oracle ball's matrices as machine integers (every tiling symmetry
/// has an integer matrix), cached for the fast trial path.
fn oracle_ball_ints() -> &'static Vec<[[i128; 3]; 3]> {
    static INTS: OnceLock<Vec<[[i128; 3]; 3]>> = OnceLock::new();
    INTS.get_or_init(|| {
        oracle_ball()
            .iter()
            .map(|g| int_rows(g.matrix()).expect("symmetry matrices are small integers"))
            .collect()
    })
}

fn int_rows(m: &Mat3Q) -> Option<[[i128; 3]; 3]> {
    let mut out = [[0i128; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        let r = m.row(i);
        for (entry, val) in row.iter_mut().zip([&r.x, &r.y, &r.z]) {
            if !val.is_integer() {
                return None;
            }
            *entry = num::ToPrimitive::to_i128(&val.to_integer())?;
        }
    }
    Some(out)
}

fn mat_apply_i128(m: &[[i128; 3]; 3], v: [i128; 3]) -> [i128; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Canonical chamber representative of the point n/den, as numerators over
/// the same denominator. Mirrors `canonicalize` exactly: fractional parts,
/// the half-turn for the sum-2 cell, lattice points to (1,0,0), sort.
fn canon_numerators(n: [i128; 3], den: i128) -> [i128; 3] {
    let f = [
        n[0].rem_euclid(den),
        n[1].rem_euclid(den),
        n[2].rem_euclid(den),
    ];
    let s: i128 = f.iter().sum();
    let mut w = if s == 0 {
        [den, 0, 0]
    } else if s == den {
        f
    } else {
        debug_assert_eq!(s, 2 * den, "fractional parts on A sum to 0, 1 or 2");
        [den - f[0], den - f[1], den - f[2]]
    };
    w.sort_unstable_by(|a, b| b.cmp(a));
    w
}

/// Randomized check that M maps re-expression classes into re-expression
/// classes: draws `trials` pairs of a rational point v on A (denominators
/// up to 100) and a symmetry g from the radius-6 word ball, and compares
/// the canonical forms of M(g v) and M(v). Deterministic for a fixed seed.
///
/// Integer matrices take a machine-integer path (the products stay far
/// inside i128 for these draws); rational or oversized matrices fall back
/// to exact big-rational arithmetic. Both paths compare the same canonical
/// forms and consume the same random draws.
///
/// Requires unit column sums and a nonzero determinant.
pub fn verify_reexpression_randomized(m: &Mat3Q, trials: u32, seed: u64) -> bool {
    assert!(m.columns_sum_to_one(), "column sums must be 1");
    assert!(!m.det().is_zero(), "matrix must be invertible");
    let ball = oracle_ball();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Entries up to ~1e12 keep every product of one trial below i128 range.
    let fast = int_rows(m).filter(|r| {
        r.iter()
            .flatten()
            .all(|e| e.abs() < 1_000_000_000_000i128)
    });
    for _ in 0..trials {
        let q = rng.gen_range(1..=100i64);
        let a = rng.gen_range(-3 * q..=3 * q);
        let b = rng.gen_range(-3 * q..=3 * q);
        let gi = rng.gen_range(0..ball.len());
        if let Some(mi) = &fast {
            let v = [a as i128, b as i128, (q - a - b) as i128];
            let g = &oracle_ball_ints()[gi];
            let moved = canon_numerators(mat_apply_i128(mi, mat_apply_i128(g, v)), q as i128);
            let straight = canon_numerators(mat_apply_i128(mi, v), q as i128);
            if moved != straight {
                return false;
            }
        } else {
            let v = Vec3Q::new(rat(a, q), rat(b, q), rat(q - a - b, q));
            let g = &ball[gi];
            let moved = canonicalize(&m.apply(&g.apply(&v))).expect("image stays on A");
            let straight = canonicalize(&m.apply(&v)).expect("image stays on A");
            if moved != straight {
                return false;
            }
        }
    }
    true
}

/// Instantiates every family over the literal parameter ranges |c1| (or
/// |k|) up to `max_param` and classifies each instance: Type I over all
/// c1 with c0 = 1-2*c1 (c1 = 0 is the identity), Type II over c1 = 1 mod 3,
/// c1 != 1, with c0 = 3-2*c1, and Type III over all k != 0. The stored
/// kinds are the canonical classifications, so sign-flipped twins appear
/// as distinct matrices with equal parameters.
pub fn catalog(max_param: u32) -> Vec<Atm> {
    assert!(max_param >= 1, "catalog needs a positive parameter bound");
    let mp = max_param as i64;
    let mut out = Vec::new();
    for c1 in -mp..=mp {
        let kind = AtmKind::TypeI {
            c0: BigInt::from(1 - 2 * c1),
            c1: BigInt::from(c1),
        };
        out.push(classify(&kind.normal_form()).expect("normal forms classify"));
    }
    for c1 in -mp..=mp {
        if c1.rem_euclid(3) != 1 || c1 == 1 {
            continue;
        }
        let kind = AtmKind::TypeII {
            c0: BigInt::from(3 - 2 * c1),
            c1: BigInt::from(c1),
        };
        out.push(classify(&kind.normal_form()).expect("normal forms classify"));
    }
    for k in -mp..=mp {
        if k == 0 {
            continue;
        }
        let m = template_type3(&BigInt::from(k));
        out.push(classify(&m).expect("normal forms classify"));
    }
    out
}
