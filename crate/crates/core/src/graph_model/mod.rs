//! Random weighted complete-graph model.
//!
//! Edge weights of `K_n` are never stored. An [`EdgeOracle`] computes the
//! weight of `{u, v}` on demand from a keyed counter-based hash of the
//! unordered pair, so builders can scan the full graph in `O(1)` memory and
//! every stream is reproducible from its seed.

mod distribution;
mod oracle;
mod split;

pub use distribution::Distribution;
pub use oracle::{EdgeOracle, EdgeWeights, StreamId};
pub use split::{split_weights, SplitKey, SplitOracle};
pub(crate) use oracle::mix64;
