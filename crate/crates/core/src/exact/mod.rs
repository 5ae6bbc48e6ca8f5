//! Exact rational arithmetic: parsing, dense linear algebra and LP
//! feasibility with infeasibility certificates.

pub mod linalg;
pub mod lp;
pub mod rational;

pub use rational::{format_rational, parse_rational, Q};
