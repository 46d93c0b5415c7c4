//! Exact 3-vectors and 3x3 matrices over the rationals.
//!
//! Points of the normalized angle plane A = {x + y + z = 1} are stored as full
//! 3-vectors; affine maps of A that extend linearly to R^3 are plain matrices.
//! Row-major storage, operations allocate fresh values, nothing is mutated in
//! place.

use crate::num::{parse_rational, rat, rint, ParseRationalError, Rational};
use num::{One, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec3Q {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl Vec3Q {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        Vec3Q { x, y, z }
    }

    pub fn from_ints(v: [i64; 3]) -> Self {
        Vec3Q::new(rint(v[0]), rint(v[1]), rint(v[2]))
    }

    pub fn from_fractions(v: [(i64, i64); 3]) -> Self {
        Vec3Q::new(rat(v[0].0, v[0].1), rat(v[1].0, v[1].1), rat(v[2].0, v[2].1))
    }

    pub fn get(&self, i: usize) -> &Rational {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("index out of range"),
        }
    }

    pub fn sum(&self) -> Rational {
        &self.x + &self.y + &self.z
    }

    pub fn add(&self, o: &Vec3Q) -> Vec3Q {
        Vec3Q::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn sub(&self, o: &Vec3Q) -> Vec3Q {
        Vec3Q::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn scale(&self, c: &Rational) -> Vec3Q {
        Vec3Q::new(&self.x * c, &self.y * c, &self.z * c)
    }

    /// Squared Euclidean length. The plane metric on A agrees with the
    /// restriction of the ambient one, so exact congruence tests go through
    /// this.
    pub fn norm2(&self) -> Rational {
        &(&self.x * &self.x) + &(&self.y * &self.y) + &(&self.z * &self.z)
    }

    pub fn is_integer(&self) -> bool {
        self.x.is_integer() && self.y.is_integer() && self.z.is_integer()
    }

    /// Membership in the normalized plane A: coordinates sum to 1.
    pub fn in_plane_a(&self) -> bool {
        self.sum().is_one()
    }

    /// Membership in the lattice of integer triples summing to 1.
    pub fn in_lattice(&self) -> bool {
        self.is_integer() && self.in_plane_a()
    }

    /// Membership in the shifted thirds lattice: (a/3, b/3, c/3) with
    /// a, b, c all congruent to 1 mod 3 and a + b + c = 3.
    pub fn in_thirds_lattice(&self) -> bool {
        let three = rint(3);
        let t = self.scale(&three);
        if !t.is_integer() || !self.in_plane_a() {
            return false;
        }
        let one_mod_3 = |r: &Rational| {
            let n = r.to_integer();
            (n % 3 + 3) % 3 == 1.into()
        };
        one_mod_3(&t.x) && one_mod_3(&t.y) && one_mod_3(&t.z)
    }
}

impl fmt::Display for Vec3Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.z)
    }
}

impl FromStr for Vec3Q {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(ParseRationalError(s.to_string()));
        }
        Ok(Vec3Q::new(
            parse_rational(parts[0])?,
            parse_rational(parts[1])?,
            parse_rational(parts[2])?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("singular matrix")]
pub struct SingularMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat3Q {
    rows: [[Rational; 3]; 3],
}

impl Mat3Q {
    pub fn new(rows: [[Rational; 3]; 3]) -> Self {
        Mat3Q { rows }
    }

    pub fn from_ints(rows: [[i64; 3]; 3]) -> Self {
        Mat3Q::new(rows.map(|r| r.map(rint)))
    }

    pub fn identity() -> Self {
        Mat3Q::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    /// Symmetric circulant: diagonal c0, off-diagonal c1.
    pub fn circulant(c0: &Rational, c1: &Rational) -> Self {
        Mat3Q::new([
            [c0.clone(), c1.clone(), c1.clone()],
            [c1.clone(), c0.clone(), c1.clone()],
            [c1.clone(), c1.clone(), c0.clone()],
        ])
    }

    /// I + u * (1,1,1)^T. For u with coordinate sum 0 this is the linear
    /// extension of the translation of A by u; it has determinant 1.
    pub fn translation(u: &Vec3Q) -> Self {
        let mut rows = Mat3Q::identity().rows;
        for (row, c) in rows.iter_mut().zip([&u.x, &u.y, &u.z]) {
            for cell in row.iter_mut() {
                *cell = &*cell + c;
            }
        }
        Mat3Q::new(rows)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> Vec3Q {
        Vec3Q::new(
            self.rows[i][0].clone(),
            self.rows[i][1].clone(),
            self.rows[i][2].clone(),
        )
    }

    pub fn col(&self, j: usize) -> Vec3Q {
        Vec3Q::new(
            self.rows[0][j].clone(),
            self.rows[1][j].clone(),
            self.rows[2][j].clone(),
        )
    }

    pub fn mul(&self, rhs: &Mat3Q) -> Mat3Q {
        let mut rows: [[Rational; 3]; 3] = Default::default();
        for (out_row, lhs_row) in rows.iter_mut().zip(&self.rows) {
            for (j, cell) in out_row.iter_mut().enumerate() {
                let mut acc = Rational::zero();
                for (l, rhs_row) in lhs_row.iter().zip(&rhs.rows) {
                    acc += l * &rhs_row[j];
                }
                *cell = acc;
            }
        }
        Mat3Q::new(rows)
    }

    pub fn apply(&self, v: &Vec3Q) -> Vec3Q {
        let dot = |r: &[Rational; 3]| &(&r[0] * &v.x) + &(&r[1] * &v.y) + &(&r[2] * &v.z);
        Vec3Q::new(dot(&self.rows[0]), dot(&self.rows[1]), dot(&self.rows[2]))
    }

    pub fn det(&self) -> Rational {
        let r = &self.rows;
        let m = |a: &Rational, b: &Rational, c: &Rational, d: &Rational| &(a * d) - &(b * c);
        let c0 = m(&r[1][1], &r[1][2], &r[2][1], &r[2][2]);
        let c1 = m(&r[1][0], &r[1][2], &r[2][0], &r[2][2]);
        let c2 = m(&r[1][0], &r[1][1], &r[2][0], &r[2][1]);
        &(&(&r[0][0] * &c0) - &(&r[0][1] * &c1)) + &(&r[0][2] * &c2)
    }

    /// Exact inverse via the adjugate.
    pub fn inverse(&self) -> Result<Mat3Q, SingularMatrix> {
        let d = self.det();
        if d.is_zero() {
            return Err(SingularMatrix);
        }
        let r = &self.rows;
        let minor = |i: usize, j: usize| {
            let (a, b): (Vec<usize>, Vec<usize>) = (
                (0..3).filter(|&k| k != i).collect(),
                (0..3).filter(|&k| k != j).collect(),
            );
            &(&r[a[0]][b[0]] * &r[a[1]][b[1]]) - &(&r[a[0]][b[1]] * &r[a[1]][b[0]])
        };
        let mut rows: [[Rational; 3]; 3] = Default::default();
        // Adjugate transposes the cofactor matrix, so the write target is
        // rows[j][i]; plain index loops express that more directly than
        // iterators would.
        #[allow(clippy::needless_range_loop)]
        for i in 0..3 {
            for j in 0..3 {
                let sign = if (i + j) % 2 == 0 { rint(1) } else { rint(-1) };
                rows[j][i] = &(&sign * &minor(i, j)) / &d;
            }
        }
        Ok(Mat3Q::new(rows))
    }

    pub fn is_integer(&self) -> bool {
        self.rows.iter().flatten().all(|e| e.is_integer())
    }

    pub fn columns_sum_to_one(&self) -> bool {
        (0..3).all(|j| self.col(j).in_plane_a())
    }
}

impl fmt::Display for Mat3Q {
    /// Nine entries, row-major, space-separated (the matrix text format).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for row in &self.rows {
            for e in row {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl FromStr for Mat3Q {
    type Err = ParseRationalError;

    /// Nine entries row-major, separated by whitespace and/or commas.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks: Vec<&str> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if toks.len() != 9 {
            return Err(ParseRationalError(s.to_string()));
        }
        let mut vals = toks.iter().map(|t| parse_rational(t));
        let mut next = || vals.next().unwrap();
        let rows = [
            [next()?, next()?, next()?],
            [next()?, next()?, next()?],
            [next()?, next()?, next()?],
        ];
        Ok(Mat3Q::new(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pedal() -> Mat3Q {
        Mat3Q::from_ints([[-1, 1, 1], [1, -1, 1], [1, 1, -1]])
    }

    #[test]
    fn determinant_of_the_pedal_matrix_is_four() {
        assert_eq!(pedal().det(), rint(4));
    }

    #[test]
    fn inverse_of_the_pedal_matrix_is_the_half_circulant() {
        let inv = pedal().inverse().unwrap();
        assert_eq!(inv, Mat3Q::circulant(&rint(0), &rat(1, 2)));
        assert_eq!(inv.mul(&pedal()), Mat3Q::identity());
        assert_eq!(pedal().mul(&inv), Mat3Q::identity());
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = Mat3Q::from_ints([[1, 1, 0], [1, 1, 0], [0, 0, 1]]);
        assert_eq!(m.inverse(), Err(SingularMatrix));
        assert_eq!(m.det(), rint(0));
    }

    #[test]
    fn translation_matrices_compose_additively() {
        let u = Vec3Q::from_ints([1, -1, 0]);
        let v = Vec3Q::from_ints([0, 1, -1]);
        let t = Mat3Q::translation(&u).mul(&Mat3Q::translation(&v));
        assert_eq!(t, Mat3Q::translation(&u.add(&v)));
        assert_eq!(t.det(), rint(1));
        let p = Vec3Q::from_fractions([(1, 3), (1, 3), (1, 3)]);
        assert_eq!(t.apply(&p), p.add(&u).add(&v));
    }

    #[test]
    fn lattice_membership() {
        assert!(Vec3Q::from_ints([2, -1, 0]).in_lattice());
        assert!(!Vec3Q::from_ints([1, 1, 0]).in_lattice());
        assert!(!Vec3Q::from_fractions([(1, 2), (1, 2), (0, 1)]).in_lattice());
    }

    #[test]
    fn thirds_lattice_membership() {
        assert!(Vec3Q::from_fractions([(1, 3), (1, 3), (1, 3)]).in_thirds_lattice());
        assert!(Vec3Q::from_fractions([(7, 3), (-2, 3), (-2, 3)]).in_thirds_lattice());
        assert!(!Vec3Q::from_fractions([(2, 3), (1, 3), (0, 1)]).in_thirds_lattice());
        assert!(!Vec3Q::from_ints([1, 0, 0]).in_thirds_lattice());
    }

    #[test]
    fn plane_membership() {
        assert!(Vec3Q::from_fractions([(2, 5), (2, 5), (1, 5)]).in_plane_a());
        assert!(!Vec3Q::from_fractions([(1, 2), (1, 2), (1, 2)]).in_plane_a());
    }

    #[test]
    fn display_and_parse_round_trip() {
        let v = Vec3Q::from_fractions([(-1, 5), (3, 5), (3, 5)]);
        assert_eq!(v.to_string(), "-1/5,3/5,3/5");
        assert_eq!("-1/5,3/5,3/5".parse::<Vec3Q>().unwrap(), v);
        assert_eq!("1,0,0".parse::<Vec3Q>().unwrap(), Vec3Q::from_ints([1, 0, 0]));

        let m = pedal();
        assert_eq!(m.to_string(), "-1 1 1 1 -1 1 1 1 -1");
        assert_eq!(m.to_string().parse::<Mat3Q>().unwrap(), m);
        assert_eq!("-1,1,1, 1,-1,1, 1,1,-1".parse::<Mat3Q>().unwrap(), m);
        assert!("1 2 3".parse::<Mat3Q>().is_err());
    }

    #[test]
    fn product_and_application_agree() {
        let a = Mat3Q::from_ints([[2, 0, 0], [-1, 1, 0], [0, 0, 1]]);
        let b = pedal();
        let v = Vec3Q::from_fractions([(1, 7), (2, 7), (4, 7)]);
        assert_eq!(a.mul(&b).apply(&v), a.apply(&b.apply(&v)));
    }
}
