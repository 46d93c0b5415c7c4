//! Factorization of contracting homothety inverses into one-vertex squeezes.
//!
//! H_{X,r} fixes the chamber vertex X of the reference triangle and pulls the
//! opposite edge toward it by the ratio r. The inverse of any homothety-type
//! transition matrix with nonzero off-diagonal parameter is an exact product
//! H_A·H_B·H_C, times the halving matrix when the homothety ratio is
//! negative. The three ratios come from matching columns of the product
//! against the target circulant; the closed forms below were checked by
//! symbolic expansion of the full product before being hard-coded.

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::atm::{Atm, AtmKind};
use crate::linalg::Mat3Q;
use crate::num::{rat, rint, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HofstadterError {
    #[error("squeeze ratio 0 does not define an invertible factor")]
    DegenerateFactor,
    #[error("factor ratios ({r1}, {r2}, {r3}) do not all lie in (0,1)")]
    FactorOutOfRange {
        // Boxed to keep Result<_, HofstadterError> small; this path is cold.
        r1: Box<Rational>,
        r2: Box<Rational>,
        r3: Box<Rational>,
    },
    #[error("factor ratio formulas divide by zero for this matrix")]
    ZeroDenominator,
}

/// Which vertex of the reference triangle a squeeze factor fixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    A,
    B,
    C,
}

/// The squeeze toward one vertex: H_{A,r} = [[1,1-r,1-r],[0,r,0],[0,0,r]],
/// and its conjugates by the cyclic permutation for B and C. Accepts any
/// nonzero r so that H(r)⁻¹ = H(1/r) stays expressible.
pub fn h_matrix(vertex: Vertex, r: &Rational) -> Result<Mat3Q, HofstadterError> {
    if r.is_zero() {
        return Err(HofstadterError::DegenerateFactor);
    }
    let one = rint(1);
    let s = &one - r;
    let z = rint(0);
    let rows = match vertex {
        Vertex::A => [
            [one.clone(), s.clone(), s.clone()],
            [z.clone(), r.clone(), z.clone()],
            [z.clone(), z.clone(), r.clone()],
        ],
        Vertex::B => [
            [r.clone(), z.clone(), z.clone()],
            [s.clone(), one.clone(), s.clone()],
            [z.clone(), z.clone(), r.clone()],
        ],
        Vertex::C => [
            [r.clone(), z.clone(), z.clone()],
            [z.clone(), r.clone(), z.clone()],
            [s.clone(), s.clone(), one.clone()],
        ],
    };
    Ok(Mat3Q::new(rows))
}

/// An exact factorization of a homothety inverse. `factors` multiply left to
/// right to the inverse: the squeezes in A, B, C order, then the halving
/// matrix when `uses_antipedal`. The ratios lie in (0,1) except in the
/// self-referential doubling case, where they are reported at the boundary
/// value 1 and the only factor is the halving matrix itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HofstadterDecomposition {
    pub r1: Rational,
    pub r2: Rational,
    pub r3: Rational,
    pub uses_antipedal: bool,
    pub factors: Vec<Mat3Q>,
}

/// Factorizes the inverse of a homothety-type transition matrix.
///
/// The inverse scales the shape plane by 1/(c0-c1); when that is negative,
/// composing with the doubling matrix first makes the scaling positive, so
/// K = M⁻¹ or K = M⁻¹P is a circulant circ(k0;k1) with positive ratio and
/// the squeeze ratios are r1 = 1-k1, r2 = (1-2k1)/(1-k1), r3 = (k0-k1)/k0.
/// The product identity is asserted exactly before returning.
///
/// Panics if the kind is not a homothety or its off-diagonal parameter is 0.
pub fn decompose(a: &Atm) -> Result<HofstadterDecomposition, HofstadterError> {
    let (c0, c1) = match a.kind() {
        AtmKind::TypeI { c0, c1 } if !c1.is_zero() => (c0.clone(), c1.clone()),
        other => panic!("no squeeze factorization for kind {other:?}"),
    };
    let minv = a
        .matrix()
        .inverse()
        .expect("transition matrices are nonsingular");
    let doubling = Mat3Q::circulant(&rint(-1), &rint(1));
    let halving = doubling
        .inverse()
        .expect("the doubling matrix is nonsingular");

    let uses_antipedal = (&c0 - &c1) < BigInt::zero();
    let k = if uses_antipedal {
        minv.mul(&doubling)
    } else {
        minv.clone()
    };
    let k0 = k.entry(0, 0).clone();
    let k1 = k.entry(0, 1).clone();
    assert_eq!(
        k,
        Mat3Q::circulant(&k0, &k1),
        "inverse composed toward positive scaling must be circulant"
    );

    if k1.is_one() {
        // K would be the doubling matrix itself; no integer source reaches here
        return Err(HofstadterError::ZeroDenominator);
    }
    if k1.is_zero() {
        // K is the identity: the source is the doubling matrix and its
        // inverse is the halving matrix alone
        assert!(uses_antipedal && k0.is_one());
        return Ok(HofstadterDecomposition {
            r1: rint(1),
            r2: rint(1),
            r3: rint(1),
            uses_antipedal: true,
            factors: vec![halving],
        });
    }
    if k0.is_zero() {
        return Err(HofstadterError::ZeroDenominator);
    }

    let one = rint(1);
    let r1 = &one - &k1;
    let r2 = (&one - rat(2, 1) * &k1) / &r1;
    let r3 = (&k0 - &k1) / &k0;
    let zero = rint(0);
    let in_range = |r: &Rational| *r > zero && *r < one;
    if !(in_range(&r1) && in_range(&r2) && in_range(&r3)) {
        return Err(HofstadterError::FactorOutOfRange {
            r1: Box::new(r1),
            r2: Box::new(r2),
            r3: Box::new(r3),
        });
    }

    let ha = h_matrix(Vertex::A, &r1).expect("r1 is nonzero");
    let hb = h_matrix(Vertex::B, &r2).expect("r2 is nonzero");
    let hc = h_matrix(Vertex::C, &r3).expect("r3 is nonzero");
    let product = ha.mul(&hb).mul(&hc);
    assert_eq!(product, k, "squeeze product must reproduce the circulant");

    let mut factors = vec![ha, hb, hc];
    if uses_antipedal {
        factors.push(halving);
        assert_eq!(product.mul(factors.last().unwrap()), minv);
    } else {
        assert_eq!(product, minv);
    }
    Ok(HofstadterDecomposition {
        r1,
        r2,
        r3,
        uses_antipedal,
        factors,
    })
}

/// Exact product of the factors; equals the inverse of the source matrix.
pub fn recompose(d: &HofstadterDecomposition) -> Mat3Q {
    d.factors
        .iter()
        .fold(Mat3Q::identity(), |acc, f| acc.mul(f))
}
