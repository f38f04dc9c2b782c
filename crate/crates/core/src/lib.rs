//! Exact tools for p-divisible weight functions on the affine space `F_p^3`.
//!
//! Geometry and weights live in [`geometry`] and [`weight`]; [`poly`] moves
//! between weights and reduced polynomials; [`decompose`] finds explicit
//! `F_p` combinations of planes, lines and parallel differences; [`lift`]
//! builds integer certificates for sets and multisets of size `p^2`;
//! [`structure`] holds cylinder recognition and search experiments.

pub mod cli;
pub mod decompose;
pub mod error;
pub mod field;
pub mod generate;
pub mod geometry;
pub mod lift;
pub mod linalg;
pub mod poly;
pub mod structure;
pub mod weight;

pub use decompose::{
    decompose_p_divisible, solve_in_span, FamilyTag, FpCombination, SpanFamily, SpanSolution,
};
pub use error::{Error, Result};
pub use field::PrimeModulus;
pub use geometry::{Direction, Geometry, Line, Plane, Point};
pub use lift::{lift_multiset, lift_set, verify_certificate, ZCertificate};
pub use weight::{WeightFp, WeightZ};
