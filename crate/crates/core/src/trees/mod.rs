//! Tree type, metrics and the constructive builders.

mod greedy;
mod prim;
mod splice;
mod steiner;
mod tree;

pub use greedy::{greedy_tree, RootSpec};
pub use prim::prim_mst;
pub use splice::{
    meta_depth_for, slice, sliced_and_spliced, splice, splice_from_base, unit_base_tree, EpsChoice, Forest, SpliceOutcome, Spliced,
};
pub use steiner::{steiner_reference, SteinerTree, EXACT_MAX_N, EXACT_MAX_TERMINALS};
pub use tree::{Center, Root, RootedTree, TreeNode};
