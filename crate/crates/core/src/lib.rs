//! Exact computation of ψ-class intersection numbers on moduli spaces of
//! curves, the integer-valued polynomials `L_d(g)` they assemble into, and
//! lattice-point counts of inside-out polytopes realising those polynomials.

pub mod arith;
pub mod cache;
pub mod dvector;
pub mod error;
pub mod geom;
pub mod intersection;
pub mod lpoly;
pub mod poly;

pub use arith::{double_factorial, multinomial, rational, Rational};
pub use dvector::DVector;
pub use error::{Error, Result};
pub use intersection::{IntersectionEngine, KappaPsiMonomial, PsiKey};
pub use lpoly::{LPolyEngine, LPolyRecord};
pub use poly::{FStarVector, IVPoly};
