//! Bounded-depth and bounded-diameter spanning and Steiner trees on complete
//! graphs with random edge weights.
//!
//! The level-sequence math is generic over [`scalar::Real`]; graph and tree
//! code works in `f64`. The aliases below fix the scalar to `f64`.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod graph_model;
pub mod levels;
pub mod scalar;
pub mod trees;

pub use error::{Error, Result};
pub use graph_model::{Distribution, EdgeOracle, EdgeWeights, SplitOracle, StreamId};
pub use trees::{RootedTree, Root};

pub type LevelSequence = levels::LevelSequence<f64>;
pub type CostParams = levels::CostParams<f64>;
