//! Locating zeros of independence polynomials of bounded-degree trees.
//!
//! The library works with the family of rational maps `f_d(z) = λ/(1+z)^d`
//! and their compositions indexed by degree words. It finds parameters λ
//! where a composition has a fixed point of prescribed multiplier, certifies
//! such parameters exactly through integer resultants, and refines nearby
//! parameters whose orbit of 0 reaches −1. Each such parameter is a zero of
//! the independence polynomial of an explicit tree, which this crate builds
//! and certifies.
//!
//! Modules follow the pipeline:
//!
//! * [`word`] — degree words naming compositions.
//! * [`mp`] — precision-tagged complex arithmetic (MPFR-backed).
//! * [`dynamics`] — orbits, pole handling, and first/second-order jets.
//! * [`region`] — closed-form constants and membership tests for the
//!   zero-free regions.
//! * [`parabolic`] — Newton solves for prescribed multipliers, multiplier
//!   curves, fixed-point classification.
//! * [`algebraic`] — exact bivariate polynomials and Sylvester resultants.
//! * [`tree`] — tree construction, independence polynomials, zero witnesses.
//! * [`hunt`] — the search for certified zeros near indifferent parameters.

pub mod algebraic;
pub mod dynamics;
pub mod hunt;
pub mod mp;
pub mod parabolic;
pub mod region;
pub mod roots;
pub mod scalar;
pub mod tree;
pub mod word;

pub use dynamics::{ExtendedComplex, Jet2, Orbit};
// pub use hunt::{HuntResult, HuntSettings};
pub use mp::MpComplex;
// pub use parabolic::{FixedPointRecord, ParabolicSolution, SolveSettings};
pub use region::UdeltaWitness;
pub use scalar::ComplexScalar;
// pub use tree::{IndependencePolynomial, TreeSpec, ZeroWitness};
pub use word::DegreeWord;
