//! Exhaustive and closed-form ground truth for small cases.

mod enumerate;
mod instance;
mod lower_bound;
mod order_stats;

pub use enumerate::{exact_bounded_depth_tree, exact_bounded_diameter_tree, Census, MAX_ENUM_N};
pub use instance::{DenseInstance, MAX_DENSE_N};
pub use lower_bound::{
    analytic_lower_bound, brute_force_f, cheap_set_check, depth_optimum_with_bound, tree_lower_bound,
    CheapSetCheck, MAX_F_N,
};
pub use order_stats::{
    approx_expected_w, empirical_tail, exact_expected_w, sample_moments, sample_w, sample_w_from,
    tail_bound, variance_w, OrderStatSpec, TailEstimate, MIN_TAIL_TRIALS,
};
