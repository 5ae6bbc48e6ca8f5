//! Exact, certificate-producing checks for the combinatorics of
//! k-neighbourly projective equivalences.
//!
//! The crate has two halves that meet in [`certificate`]:
//!
//! * the oriented-matroid side: Lawrence sign matrices ([`matroid`]), their
//!   chessboards ([`chessboard`]), top/bottom/plain travels ([`travel`]) and
//!   the diagonal chessboard families with their small cyclic reorientations
//!   ([`family`]);
//! * the geometric side: exact rational point configurations, Gale diagrams,
//!   hull intersections, k-divisibility, neighbourliness, sign flips and
//!   projective maps ([`geometry`]), plus the index arithmetic tying the
//!   extremal numbers together ([`bounds`]).
//!
//! Nothing here uses floating point. Every geometric predicate is decided by
//! exact pivoting over [`num_rational::BigRational`].

pub mod bounds;
pub mod budget;
pub mod certificate;
pub mod chessboard;
pub mod error;
pub mod exact;
pub mod family;
pub mod geometry;
pub mod matroid;
pub mod travel;

pub use error::{Error, Result};
