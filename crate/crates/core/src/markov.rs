//! Cell decomposition of the fundamental chamber induced by a transition
//! matrix: the mapped chamber M·D is tiled by exactly |det M| group copies of
//! D, and their pullbacks through M⁻¹ cut D into |det M| congruent cells on
//! which the step map is a full branch. Symbolic itineraries over the cells
//! and Bernoulli-style frequency statistics live here too.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num::{BigInt, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::atm::Atm;
use crate::dynamics::step;
use crate::exec;
use crate::linalg::Vec3Q;
use crate::moduli::{canonicalize, stabilizer_e1, CanonicalShape, GroupElement};
use crate::num::{rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarkovError {
    #[error("expected {expected} cells but enumeration found {found}")]
    PartitionCountMismatch { expected: usize, found: usize },
    #[error("an edge of the mapped chamber does not lie on a reflection line")]
    EdgeNotOnReflectionLine,
}

/// One cell of the partition: the pullback `polygon = M⁻¹·(unfold·D)` of a
/// group copy of the chamber inside M·D. Vertices are stored sorted so the
/// cell order (and hence symbol numbering) is reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    index: usize,
    unfold: GroupElement,
    polygon: [Vec3Q; 3],
}

impl Cell {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn unfold(&self) -> &GroupElement {
        &self.unfold
    }

    pub fn polygon(&self) -> &[Vec3Q; 3] {
        &self.polygon
    }
}

#[derive(Debug, Clone)]
pub struct MarkovPartition {
    atm: Atm,
    cells: Vec<Cell>,
}

impl MarkovPartition {
    pub fn atm(&self) -> &Atm {
        &self.atm
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Alphabet size of the induced shift; equals |det M|.
    pub fn symbol_count(&self) -> usize {
        self.cells.len()
    }
}

impl fmt::Display for MarkovPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            writeln!(
                f,
                "cell {} unfold={} vertices {} {} {}",
                c.index, c.unfold, c.polygon[0], c.polygon[1], c.polygon[2]
            )?;
        }
        Ok(())
    }
}

/// Symbol sequence of one orbit. `symbols[i]` is the cell containing iterate
/// i (lowest index on ties); indices of iterates that sat on a cell boundary
/// are collected so statistics can discard ambiguous orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Itinerary {
    pub start: CanonicalShape,
    pub symbols: Vec<usize>,
    pub boundary_steps: BTreeSet<usize>,
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.symbols {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

/// Vertices of the fundamental chamber: equilateral, degenerate needle,
/// right isoceles.
pub fn chamber_vertices() -> [Vec3Q; 3] {
    [
        Vec3Q::from_fractions([(1, 3), (1, 3), (1, 3)]),
        Vec3Q::from_ints([1, 0, 0]),
        Vec3Q::from_fractions([(1, 2), (1, 2), (0, 1)]),
    ]
}

/// Twice the signed area of (a, b, c) in the planar chart (x, y); exact.
fn orient2(a: &Vec3Q, b: &Vec3Q, c: &Vec3Q) -> Rational {
    let abx = &b.x - &a.x;
    let aby = &b.y - &a.y;
    let acx = &c.x - &a.x;
    let acy = &c.y - &a.y;
    abx * acy - aby * acx
}

/// Exact point-in-triangle test by edge orientation signs; `strict` demands
/// the interior.
fn tri_contains(t: &[Vec3Q; 3], p: &Vec3Q, strict: bool) -> bool {
    let d = orient2(&t[0], &t[1], &t[2]);
    let pos = d.is_positive();
    (0..3).all(|i| {
        let s = orient2(&t[i], &t[(i + 1) % 3], p);
        if strict {
            if pos {
                s.is_positive()
            } else {
                s.is_negative()
            }
        } else if pos {
            !s.is_negative()
        } else {
            !s.is_positive()
        }
    })
}

/// A segment lies on a reflection line iff one of the six mirror functionals
/// x, y, z, x-y, y-z, x-z is constant and integer along it.
fn edge_on_mirror(p: &Vec3Q, q: &Vec3Q) -> bool {
    let fp = [
        p.x.clone(),
        p.y.clone(),
        p.z.clone(),
        &p.x - &p.y,
        &p.y - &p.z,
        &p.x - &p.z,
    ];
    let fq = [
        q.x.clone(),
        q.y.clone(),
        q.z.clone(),
        &q.x - &q.y,
        &q.y - &q.z,
        &q.x - &q.z,
    ];
    fp.iter()
        .zip(fq.iter())
        .any(|(a, b)| a == b && a.is_integer())
}

/// Lattice coordinates of a plane point relative to the integer corner:
/// v = e1 + a(e1-e2) + b(e2-e3) gives a = x-1, b = -z.
fn lattice_coords(v: &Vec3Q) -> (Rational, Rational) {
    (&v.x - rat(1, 1), -&v.z)
}

fn floor_i64(r: &Rational) -> i64 {
    r.floor()
        .to_integer()
        .to_i64()
        .expect("window coordinates fit i64")
}

/// Builds the cell decomposition induced by `a`: maps the chamber forward,
/// enumerates every group copy of the chamber inside the image (lattice
/// window around the image, expanded by one step, times the corner point
/// group), checks the count against |det M|, and pulls each copy back.
pub fn build_partition(a: &Atm) -> Result<MarkovPartition, MarkovError> {
    let m = a.matrix();
    let dv = chamber_vertices();
    let md = [m.apply(&dv[0]), m.apply(&dv[1]), m.apply(&dv[2])];
    for i in 0..3 {
        if !edge_on_mirror(&md[i], &md[(i + 1) % 3]) {
            return Err(MarkovError::EdgeNotOnReflectionLine);
        }
    }

    // Any copy g·D ⊆ M·D anchors its integer corner g·e1 inside M·D, so the
    // anchor's lattice coordinates are bounded by the corners' extremes.
    let coords: Vec<(Rational, Rational)> = md.iter().map(lattice_coords).collect();
    let amin = coords.iter().map(|(a, _)| floor_i64(a)).min().unwrap() - 1;
    let amax = coords.iter().map(|(a, _)| floor_i64(a)).max().unwrap() + 1;
    let bmin = coords.iter().map(|(_, b)| floor_i64(b)).min().unwrap() - 1;
    let bmax = coords.iter().map(|(_, b)| floor_i64(b)).max().unwrap() + 1;

    let mut kept: Vec<(GroupElement, [Vec3Q; 3])> = Vec::new();
    for ai in amin..=amax {
        for bi in bmin..=bmax {
            let t = GroupElement::lattice_translation(BigInt::from(ai), BigInt::from(bi));
            for h in stabilizer_e1() {
                let g = t.compose(h);
                let tri = [g.apply(&dv[0]), g.apply(&dv[1]), g.apply(&dv[2])];
                if tri.iter().all(|q| tri_contains(&md, q, false)) {
                    kept.push((g, tri));
                }
            }
        }
    }

    let expected = a
        .abs_det()
        .to_usize()
        .expect("determinants of practical transition matrices fit usize");
    if kept.len() != expected {
        return Err(MarkovError::PartitionCountMismatch {
            expected,
            found: kept.len(),
        });
    }

    let minv = m.inverse().expect("transition matrices are nonsingular");
    let mut cells: Vec<Cell> = kept
        .into_iter()
        .map(|(g, tri)| {
            let mut polygon = [
                minv.apply(&tri[0]),
                minv.apply(&tri[1]),
                minv.apply(&tri[2]),
            ];
            polygon.sort();
            Cell {
                index: 0,
                unfold: g,
                polygon,
            }
        })
        .collect();
    cells.sort_by(|c, d| c.polygon.cmp(&d.polygon));
    for (i, c) in cells.iter_mut().enumerate() {
        c.index = i;
    }
    Ok(MarkovPartition { atm: a.clone(), cells })
}

/// Cell containing `p`: lowest index wins on boundaries; the flag reports
/// whether `p` sits on the located cell's boundary rather than its interior.
pub fn locate(mp: &MarkovPartition, p: &CanonicalShape) -> (usize, bool) {
    for c in &mp.cells {
        if tri_contains(&c.polygon, p.point(), false) {
            let on_boundary = !tri_contains(&c.polygon, p.point(), true);
            return (c.index, on_boundary);
        }
    }
    unreachable!("cells cover the chamber")
}

/// Symbols of the first `n` iterates (the start is iterate 0).
pub fn itinerary(mp: &MarkovPartition, p: &CanonicalShape, n: usize) -> Itinerary {
    let mut symbols = Vec::with_capacity(n);
    let mut boundary_steps = BTreeSet::new();
    let mut cur = p.clone();
    for i in 0..n {
        let (sym, on_boundary) = locate(mp, &cur);
        symbols.push(sym);
        if on_boundary {
            boundary_steps.insert(i);
        }
        if i + 1 < n {
            cur = step(mp.atm(), &cur);
        }
    }
    Itinerary {
        start: p.clone(),
        symbols,
        boundary_steps,
    }
}

/// Exact full-branch checks plus randomized interior spot checks.
///
/// Per cell: (a) the three polygon vertices map through the step exactly onto
/// the chamber's vertex set, so the image of the cell is all of D; (b) the
/// cell's area is exactly area(D)/|det M|; (c) random interior points land in
/// the cell by `locate`, and their step agrees with unfolding by the cell's
/// group element. Returns false (with a report on stderr) on any failure.
pub fn verify_markov(mp: &MarkovPartition, samples_per_cell: usize, seed: u64) -> bool {
    let m = mp.atm.matrix();
    let dv = chamber_vertices();
    let chamber_area2 = orient2(&dv[0], &dv[1], &dv[2]).abs();
    let det = Rational::from_integer(mp.atm.abs_det().clone());
    let corner_set: BTreeSet<Vec3Q> = dv.iter().cloned().collect();

    for c in &mp.cells {
        let image: BTreeSet<Vec3Q> = c
            .polygon
            .iter()
            .map(|v| {
                canonicalize(&m.apply(v))
                    .expect("images stay on the shape plane")
                    .into_point()
            })
            .collect();
        if image != corner_set {
            eprintln!("cell {}: vertex images are not the chamber corners", c.index);
            return false;
        }

        let area2 = orient2(&c.polygon[0], &c.polygon[1], &c.polygon[2]).abs();
        if area2 * &det != chamber_area2 {
            eprintln!("cell {}: area is not area(D)/|det|", c.index);
            return false;
        }

        let unfold_inv = c.unfold.inverse();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c.index as u64).wrapping_mul(0x9E37_79B9));
        for _ in 0..samples_per_cell {
            let w: [i64; 3] = [
                rng.gen_range(1..=1000),
                rng.gen_range(1..=1000),
                rng.gen_range(1..=1000),
            ];
            let total = rat(w[0] + w[1] + w[2], 1);
            let mut s = Vec3Q::from_ints([0, 0, 0]);
            for (wi, vi) in w.iter().zip(c.polygon.iter()) {
                s = s.add(&vi.scale(&rat(*wi, 1)));
            }
            s = s.scale(&(rat(1, 1) / total));
            let sample = CanonicalShape::new(s);
            if locate(mp, &sample) != (c.index, false) {
                eprintln!("cell {}: interior sample located elsewhere", c.index);
                return false;
            }
            let via_step = step(&mp.atm, &sample);
            let via_unfold = unfold_inv.apply(&m.apply(sample.point()));
            if *via_step.point() != via_unfold {
                eprintln!("cell {}: step disagrees with the unfolding element", c.index);
                return false;
            }
        }
    }
    true
}

/// Frequency report for the induced shift: counts of single symbols and of
/// adjacent pairs, aggregated over sampled orbits. Orbits that touched a cell
/// boundary are discarded as ambiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolStatistics {
    pub symbols: usize,
    pub orbit_length: usize,
    pub orbits_used: usize,
    pub orbits_discarded: usize,
    pub symbol_counts: Vec<u64>,
    /// Row-major `symbols x symbols` counts of adjacent pairs.
    pub pair_counts: Vec<u64>,
}

impl SymbolStatistics {
    pub fn total_symbols(&self) -> u64 {
        self.symbol_counts.iter().sum()
    }

    pub fn total_pairs(&self) -> u64 {
        self.pair_counts.iter().sum()
    }

    pub fn symbol_frequency(&self, s: usize) -> f64 {
        self.symbol_counts[s] as f64 / self.total_symbols() as f64
    }

    pub fn pair_frequency(&self, s: usize, t: usize) -> f64 {
        self.pair_counts[s * self.symbols + t] as f64 / self.total_pairs() as f64
    }

    pub fn max_symbol_deviation(&self) -> f64 {
        let p = 1.0 / self.symbols as f64;
        (0..self.symbols)
            .map(|s| (self.symbol_frequency(s) - p).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_pair_deviation(&self) -> f64 {
        let p = 1.0 / (self.symbols * self.symbols) as f64;
        (0..self.symbols)
            .flat_map(|s| (0..self.symbols).map(move |t| (s, t)))
            .map(|(s, t)| (self.pair_frequency(s, t) - p).abs())
            .fold(0.0, f64::max)
    }

    /// True when every single-symbol count lies within `k` binomial standard
    /// deviations of its expectation, and every adjacent-pair count likewise.
    pub fn within_binomial_sigma(&self, k: f64) -> bool {
        let check = |counts: &[u64], total: u64, p: f64| {
            let mean = total as f64 * p;
            let sigma = (total as f64 * p * (1.0 - p)).sqrt();
            counts
                .iter()
                .all(|&c| (c as f64 - mean).abs() <= k * sigma)
        };
        check(&self.symbol_counts, self.total_symbols(), 1.0 / self.symbols as f64)
            && check(
                &self.pair_counts,
                self.total_pairs(),
                1.0 / (self.symbols * self.symbols) as f64,
            )
    }
}

impl fmt::Display for SymbolStatistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "orbits used={} discarded={} length={} symbols={}",
            self.orbits_used, self.orbits_discarded, self.orbit_length, self.symbols
        )?;
        for s in 0..self.symbols {
            writeln!(
                f,
                "symbol {} count={} frequency={:.6} deviation={:+.6}",
                s,
                self.symbol_counts[s],
                self.symbol_frequency(s),
                self.symbol_frequency(s) - 1.0 / self.symbols as f64
            )?;
        }
        write!(
            f,
            "pairs: max deviation from uniform = {:.6}",
            self.max_pair_deviation()
        )
    }
}

/// Primes usable as orbit denominators, sieved once.
fn sample_primes() -> &'static Vec<u64> {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        const LO: usize = 10_000;
        const HI: usize = 100_000;
        let mut sieve = vec![true; HI + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= HI {
            if sieve[i] {
                let mut j = i * i;
                while j <= HI {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (LO..=HI).filter(|&n| sieve[n]).map(|n| n as u64).collect()
    })
}

/// Uniform random shape with the given prime denominator: two distinct cuts
/// of the integer simplex, then reduction to the chamber.
fn sample_shape(rng: &mut ChaCha8Rng, q: u64) -> CanonicalShape {
    let c1 = rng.gen_range(1..q);
    let mut c2 = rng.gen_range(1..q - 1);
    if c2 >= c1 {
        c2 += 1;
    }
    let (lo, hi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
    let v = Vec3Q::from_fractions([
        (lo as i64, q as i64),
        ((hi - lo) as i64, q as i64),
        ((q - hi) as i64, q as i64),
    ]);
    canonicalize(&v).expect("simplex samples lie on the shape plane")
}

/// Samples `num_points` random starts (prime denominators in [10^4, 10^5]),
/// runs length-`n` itineraries in parallel batches with per-point seeds, and
/// tallies symbol and adjacent-pair counts. Deterministic for a given seed
/// regardless of worker count.
pub fn symbol_statistics(
    mp: &MarkovPartition,
    num_points: usize,
    n: usize,
    seed: u64,
) -> SymbolStatistics {
    let indices: Vec<usize> = (0..num_points).collect();
    let per_orbit: Vec<Option<Vec<usize>>> = exec::map_batch(indices, |i| {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let primes = sample_primes();
        let q = primes[rng.gen_range(0..primes.len())];
        let start = sample_shape(&mut rng, q);
        let it = itinerary(mp, &start, n);
        if it.boundary_steps.is_empty() {
            Some(it.symbols)
        } else {
            None
        }
    });

    let k = mp.symbol_count();
    let mut symbol_counts = vec![0u64; k];
    let mut pair_counts = vec![0u64; k * k];
    let mut used = 0usize;
    let mut discarded = 0usize;
    for orbit in per_orbit {
        match orbit {
            Some(symbols) => {
                used += 1;
                for &s in &symbols {
                    symbol_counts[s] += 1;
                }
                for w in symbols.windows(2) {
                    pair_counts[w[0] * k + w[1]] += 1;
                }
            }
            None => discarded += 1,
        }
    }
    SymbolStatistics {
        symbols: k,
        orbit_length: n,
        orbits_used: used,
        orbits_discarded: discarded,
        symbol_counts,
        pair_counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atm::classify;
    use crate::linalg::Mat3Q;
    use crate::num::rint;

    fn cs(v: [(i64, i64); 3]) -> CanonicalShape {
        CanonicalShape::new(Vec3Q::from_fractions(v))
    }

    fn pedal() -> &'static Atm {
        crate::dynamics::pedal_atm()
    }

    #[test]
    fn doubling_map_has_four_cells() {
        let mp = build_partition(pedal()).unwrap();
        assert_eq!(mp.symbol_count(), 4);
    }

    #[test]
    fn identity_partition_is_the_whole_chamber() {
        let id = classify(&Mat3Q::identity()).unwrap();
        let mp = build_partition(&id).unwrap();
        assert_eq!(mp.symbol_count(), 1);
        let cell = &mp.cells()[0];
        assert!(cell.unfold().is_identity());
        let mut corners = chamber_vertices();
        corners.sort();
        assert_eq!(*cell.polygon(), corners);
    }

    #[test]
    fn determinant_twentyfive_example_has_twentyfive_cells() {
        let n = classify(&Mat3Q::circulant(&rint(-3), &rint(2))).unwrap();
        let mp = build_partition(&n).unwrap();
        assert_eq!(mp.symbol_count(), 25);
    }

    #[test]
    fn rotational_example_has_three_cells() {
        let n = classify(&Mat3Q::from_ints([[0, 1, -1], [-1, 0, 1], [2, 0, 1]])).unwrap();
        let mp = build_partition(&n).unwrap();
        assert_eq!(mp.symbol_count(), 3);
    }

    #[test]
    fn cells_are_scaled_copies_of_the_chamber() {
        for a in [
            pedal().clone(),
            classify(&Mat3Q::circulant(&rint(-3), &rint(2))).unwrap(),
            classify(&Mat3Q::from_ints([[0, 1, -1], [-1, 0, 1], [2, 0, 1]])).unwrap(),
        ] {
            let mp = build_partition(&a).unwrap();
            let det = Rational::from_integer(a.abs_det().clone());
            let chamber_sides: BTreeSet<Rational> = {
                let dv = chamber_vertices();
                (0..3)
                    .map(|i| dv[i].sub(&dv[(i + 1) % 3]).norm2() / &det)
                    .collect()
            };
            for c in mp.cells() {
                let sides: BTreeSet<Rational> = (0..3)
                    .map(|i| c.polygon()[i].sub(&c.polygon()[(i + 1) % 3]).norm2())
                    .collect();
                assert_eq!(sides, chamber_sides, "cell {}", c.index());
            }
        }
    }

    #[test]
    fn cell_interiors_are_pairwise_disjoint() {
        let mp = build_partition(&classify(&Mat3Q::circulant(&rint(-3), &rint(2))).unwrap()).unwrap();
        let third = rat(1, 3);
        let centroids: Vec<Vec3Q> = mp
            .cells()
            .iter()
            .map(|c| {
                c.polygon()[0]
                    .add(&c.polygon()[1])
                    .add(&c.polygon()[2])
                    .scale(&third)
            })
            .collect();
        for (i, c) in mp.cells().iter().enumerate() {
            for (j, q) in centroids.iter().enumerate() {
                if i != j {
                    assert!(
                        !tri_contains(c.polygon(), q, true),
                        "centroid of cell {} is interior to cell {}",
                        j,
                        i
                    );
                }
            }
        }
    }

    #[test]
    fn locate_on_the_identity_partition_flags_the_chamber_boundary() {
        let id = classify(&Mat3Q::identity()).unwrap();
        let mp = build_partition(&id).unwrap();
        assert_eq!(locate(&mp, &cs([(5, 11), (4, 11), (2, 11)])), (0, false));
        assert_eq!(locate(&mp, &cs([(1, 3), (1, 3), (1, 3)])), (0, true));
        assert_eq!(locate(&mp, &cs([(3, 7), (2, 7), (2, 7)])), (0, true));
    }

    #[test]
    fn locate_puts_the_equilateral_point_in_the_acute_cell() {
        let mp = build_partition(pedal()).unwrap();
        let (idx, _) = locate(&mp, &cs([(1, 3), (1, 3), (1, 3)]));
        let cell = &mp.cells()[idx];
        let half = rat(1, 2);
        for v in cell.polygon() {
            assert!(v.x <= half, "acute cell has an obtuse vertex {v}");
        }
    }

    #[test]
    fn locate_distinguishes_cell_boundary_from_interior() {
        let mp = build_partition(pedal()).unwrap();
        // two equal coordinates put this shape on the isoceles mirror, which
        // is an edge of whichever cell contains it
        let (idx, on_boundary) = locate(&mp, &cs([(3, 5), (1, 5), (1, 5)]));
        assert!(on_boundary);
        let cell = &mp.cells()[idx];
        let half = rat(1, 2);
        assert!(cell.polygon().iter().any(|v| v.x > half));
        let centroid = cell.polygon()[0]
            .add(&cell.polygon()[1])
            .add(&cell.polygon()[2])
            .scale(&rat(1, 3));
        assert_eq!(locate(&mp, &CanonicalShape::new(centroid)), (idx, false));
    }

    #[test]
    fn identity_itinerary_is_constant_zero() {
        let id = classify(&Mat3Q::identity()).unwrap();
        let mp = build_partition(&id).unwrap();
        let it = itinerary(&mp, &cs([(5, 11), (4, 11), (2, 11)]), 5);
        assert_eq!(it.symbols, vec![0, 0, 0, 0, 0]);
        assert!(it.boundary_steps.is_empty());
    }

    #[test]
    fn equilateral_itinerary_is_constant() {
        let mp = build_partition(pedal()).unwrap();
        let it = itinerary(&mp, &cs([(1, 3), (1, 3), (1, 3)]), 6);
        assert!(it.symbols.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn three_cycle_gives_a_period_three_symbol_pattern() {
        let mp = build_partition(pedal()).unwrap();
        let it = itinerary(&mp, &cs([(3, 7), (2, 7), (2, 7)]), 6);
        assert_eq!(it.symbols[0..3], it.symbols[3..6]);
        // every point of this cycle has two equal coordinates, hence sits on
        // a mirror, hence on a cell boundary
        assert_eq!(it.boundary_steps, (0..6).collect());
    }

    #[test]
    fn dropping_the_first_symbol_shifts_the_itinerary() {
        let mp = build_partition(pedal()).unwrap();
        let p = cs([(5, 11), (4, 11), (2, 11)]);
        let it = itinerary(&mp, &p, 6);
        assert!(it.boundary_steps.is_empty());
        let shifted = itinerary(&mp, &step(pedal(), &p), 5);
        assert_eq!(it.symbols[1..], shifted.symbols[..]);
    }

    #[test]
    fn full_branch_structure_verifies_exactly() {
        let id = classify(&Mat3Q::identity()).unwrap();
        assert!(verify_markov(&build_partition(&id).unwrap(), 3, 11));
        assert!(verify_markov(&build_partition(pedal()).unwrap(), 5, 11));
        let n = classify(&Mat3Q::circulant(&rint(-3), &rint(2))).unwrap();
        assert!(verify_markov(&build_partition(&n).unwrap(), 2, 11));
        let r = classify(&Mat3Q::from_ints([[0, 1, -1], [-1, 0, 1], [2, 0, 1]])).unwrap();
        assert!(verify_markov(&build_partition(&r).unwrap(), 3, 11));
    }

    #[test]
    fn identity_statistics_put_all_mass_on_symbol_zero() {
        let id = classify(&Mat3Q::identity()).unwrap();
        let mp = build_partition(&id).unwrap();
        let stats = symbol_statistics(&mp, 40, 8, 5);
        assert!(stats.orbits_used > 0);
        assert_eq!(stats.symbol_counts[0], (stats.orbits_used * 8) as u64);
        assert_eq!(stats.total_pairs(), (stats.orbits_used * 7) as u64);
        assert!((stats.symbol_frequency(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_statistics_look_bernoulli() {
        let mp = build_partition(pedal()).unwrap();
        let stats = symbol_statistics(&mp, 300, 30, 7);
        assert!(stats.orbits_used > 250);
        assert!(
            stats.within_binomial_sigma(3.0),
            "max symbol dev {} max pair dev {}",
            stats.max_symbol_deviation(),
            stats.max_pair_deviation()
        );
    }
}
