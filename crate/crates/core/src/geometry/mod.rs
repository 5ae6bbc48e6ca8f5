//! Exact point configurations and the predicates built on them.

pub mod config;
pub mod divisible;
pub mod gale;
pub mod hull;
pub mod neighbourly;
pub mod projective;
pub mod sample;
pub mod signflip;

pub use config::PointConfig;
pub use gale::GaleDiagram;
pub use hull::{Hyperplane, Partition};
