//! Exact linear dynamics of triangle shapes.
//!
//! A triangle's shape is its normalized angle triple (a1,a2,a3), a point of
//! the plane A = {x+y+z = 1}. This crate implements, in exact rational
//! arithmetic: the hexagonal symmetry group identifying re-expressions of
//! the same shape (`moduli`), the integer matrices that induce well-defined
//! maps on shape space and their classification (`atm`), iteration and cycle
//! detection for such maps — the pedal map is the guiding example
//! (`dynamics`), Markov partitions of the fundamental chamber with symbolic
//! itineraries (`markov`), and factorizations of contracting inverses into
//! one-vertex-at-a-time squeezes (`hofstadter`).

pub mod angles;
pub mod atm;
pub mod dynamics;
pub mod exec;
pub mod hofstadter;
pub mod linalg;
pub mod markov;
pub mod moduli;
pub mod num;

pub use angles::{shape_from_vertices, CoincidentVertices, VertexAngles};
pub use atm::{
    catalog, classify, classify_with, verify_reexpression_randomized, Atm, AtmKind,
    ClassificationFailure,
};
pub use dynamics::{
    antipedal_matrix, antipedal_step, hobson_pedal_step, orbit, pedal_atm, preimages, step,
    DynamicsError, OrbitRecord, PedalStep,
};
pub use hofstadter::{decompose, h_matrix, recompose, HofstadterDecomposition, HofstadterError};
pub use linalg::{Mat3Q, SingularMatrix, Vec3Q};
pub use markov::{
    build_partition, itinerary, locate, symbol_statistics, verify_markov, Cell, Itinerary,
    MarkovError, MarkovPartition, SymbolStatistics,
};
pub use moduli::{
    brute_force_reduce, canonicalize, canonicalize_with_witness, enumerate_group_ball, in_d,
    is_equivalent, on_reflection_line, point_group_order, CanonicalShape, Gen, GroupElement,
    ModuliError, RationalShape,
};
pub use num::{parse_rational, rat, rint, Rational};
