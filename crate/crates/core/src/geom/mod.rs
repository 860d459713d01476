//! Lattice points of dilated inside-out polytopes and open simplicial
//! complexes.

pub mod fixtures;
mod interpolate;
pub(crate) mod linalg;
pub mod polytope;
pub mod simplex;

pub use fixtures::{
    builtin_fixture, grid_triangulation, parse_text, to_text, Diagonal, Fixture, FIXTURE_NAMES,
};
pub use interpolate::ehrhart_interpolate;
pub use polytope::{lattice_count_insideout, HPolytope, Hyperplane, Inequality, InsideOutPolytope};
pub use simplex::{
    lattice_count_complex, unimodular_check, verify_triangulation, MismatchKind, OpenSimplex,
    OpenSimplexComplex, TriangulationMismatch, TriangulationReport,
};
