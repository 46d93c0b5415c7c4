//! Scalar helpers on top of arbitrary-precision rationals.
//!
//! Everything in this crate computes with exact rationals; floats appear only
//! at the measurement boundary (angle extraction from vertex coordinates and
//! report formatting).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};

/// Exact scalar used throughout the crate: arbitrary precision, always in
/// lowest terms with a positive denominator, usable as a map key.
pub type Rational = BigRational;

/// n/d as an exact rational. Panics when d == 0 (callers pass literals).
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer n as a rational.
pub fn rint(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Fractional part in [0, 1).
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses "a/b" or "a". Unlike the `FromStr` impl of the underlying type this
/// never panics on a zero denominator.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    let err = || ParseRationalError(s.to_string());
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| err())?;
            Ok(BigRational::from_integer(n))
        }
        Some((ns, ds)) => {
            let n: BigInt = ns.trim().parse().map_err(|_| err())?;
            let d: BigInt = ds.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Best rational approximation to `x` among all fractions with denominator at
/// most `max_den`: continued-fraction convergents, with the final
/// semiconvergent considered as the alternative candidate. Exact: `x` is first
/// converted to the rational it denotes as a binary float.
pub fn best_rational_approx(x: f64, max_den: u64) -> Rational {
    assert!(max_den >= 1, "denominator bound must be positive");
    assert!(x.is_finite(), "non-finite input");
    let target = BigRational::from_float(x).expect("finite float");
    let bound = BigInt::from(max_den);

    let mut p0 = BigInt::from(1);
    let mut q0 = BigInt::from(0);
    let mut p1 = target.floor().to_integer();
    let mut q1 = BigInt::from(1);
    let mut rem = &target - target.floor();

    while !rem.is_zero() {
        let t = rem.recip();
        let a = t.floor().to_integer();
        rem = &t - t.floor();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > bound {
            // Largest semiconvergent below the bound vs. the last convergent.
            let k = (&bound - &q0) / &q1;
            let semi = BigRational::new(&k * &p1 + &p0, &k * &q1 + &q0);
            let conv = BigRational::new(p1, q1);
            let ds = (&semi - &target).abs();
            let dc = (&conv - &target).abs();
            return if ds < dc { semi } else { conv };
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    BigRational::new(p1, q1)
}
