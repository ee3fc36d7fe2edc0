use super::enumerate::Census;
use super::instance::DenseInstance;
use crate::error::{domain, Error, Result};
use crate::levels::{f_cost_truncated, CostParams, LevelSequence};
use crate::trees::RootedTree;

/// Largest instance for [`brute_force_f`].
pub const MAX_F_N: usize = 12;

/// `F(a, b)`: least total cost of joining `b` vertices, each by its cheapest
/// edge, to a disjoint set of `a` vertices. With `restrict_to_terminals` the
/// `b` vertices must be terminals.
///
/// For a fixed `A` the best `B` is the `b` cheapest candidates, so only the
/// `a`-sets are enumerated.
pub fn brute_force_f(inst: &DenseInstance, a: usize, b: usize, restrict_to_terminals: bool) -> Result<f64> {
    let n = inst.n();
    if n > MAX_F_N {
        return Err(Error::Capacity(format!("F(a, b) enumeration handles n <= {MAX_F_N}, got {n}")));
    }
    if a == 0 || a + b > n {
        return domain(format!("need a >= 1 and a + b <= n, got a = {a}, b = {b}, n = {n}"));
    }
    let eligible: Vec<bool> = (0..n)
        .map(|v| !restrict_to_terminals || inst.terminals().binary_search(&v).is_ok())
        .collect();
    let mut best = f64::INFINITY;
    let mut costs = Vec::with_capacity(n);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a {
            continue;
        }
        costs.clear();
        for v in (0..n).filter(|&v| mask >> v & 1 == 0 && eligible[v]) {
            let c = (0..n)
                .filter(|&u| mask >> u & 1 == 1)
                .map(|u| inst.w(u, v))
                .fold(f64::INFINITY, f64::min);
            costs.push(c);
        }
        if costs.len() < b {
            continue;
        }
        costs.sort_by(f64::total_cmp);
        best = best.min(costs[..b].iter().sum());
    }
    if best.is_infinite() {
        return domain(format!("no admissible pair of sets with a = {a}, b = {b}"));
    }
    Ok(best)
}

/// Certified lower bound `sum_i F(l_{i-1}, l_i)` for trees with the level
/// sizes of `tree`. With `restrict_to_terminals` the last term only counts
/// the terminals at the deepest level. A root-edge weight is not counted.
pub fn tree_lower_bound(tree: &RootedTree, inst: &DenseInstance, restrict_to_terminals: bool) -> Result<f64> {
    let sizes = tree.level_sizes();
    let k = sizes.len() - 1;
    let mut total = 0.0;
    for i in 1..=k {
        let (a, mut b) = (sizes[i - 1], sizes[i]);
        let restrict = restrict_to_terminals && i == k;
        if restrict {
            b = tree
                .nodes()
                .iter()
                .filter(|x| x.level == k && inst.terminals().binary_search(&x.vertex).is_ok())
                .count();
            if b == 0 {
                continue;
            }
        }
        total += brute_force_f(inst, a, b, restrict)?;
    }
    Ok(total)
}

/// High-probability lower bound `(1 - delta) f^{(R)}_{n,c}(l)` with
/// `c = 2n/m`, for any tree whose level sizes are `levels`.
pub fn analytic_lower_bound(levels: &[f64], n: f64, m: f64, delta: f64) -> Result<f64> {
    let p = CostParams::steiner(n, m)?.with_delta(delta)?;
    let seq = LevelSequence::new(levels.to_vec())?;
    Ok((1.0 - delta) * f_cost_truncated(&p, &seq))
}

/// Exact optimum and the certified bound for its own level profile.
pub fn depth_optimum_with_bound(census: &Census, inst: &DenseInstance, k: usize, root: usize) -> Result<(RootedTree, f64)> {
    let t = census.depth_optimum(k, root)?;
    let lb = tree_lower_bound(&t, inst, false)?;
    Ok((t, lb))
}

/// Outcome of the no-cheap-sets comparison for one `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheapSetCheck {
    pub a: usize,
    pub b: usize,
    /// `exp(a ln(n e / a) - delta^2 b / 8)`.
    pub bound: f64,
    /// Fraction of instances with `F(a, b) < (1 - delta) b^2 / (2 n a)`.
    pub fraction: f64,
}

impl CheapSetCheck {
    /// The bound says something only when it is below 1.
    pub fn informative(&self) -> bool {
        self.bound < 1.0
    }

    pub fn holds(&self) -> bool {
        !self.informative() || self.fraction <= self.bound
    }
}

/// Empirical frequency of cheap `(a, b)` set pairs over `seeds` random
/// `Exp(1)` instances on `n` vertices.
pub fn cheap_set_check(n: usize, a: usize, b: usize, delta: f64, seeds: std::ops::Range<u64>) -> Result<CheapSetCheck> {
    let nf = n as f64;
    let bound = (a as f64 * (nf * std::f64::consts::E / a as f64).ln() - delta * delta * b as f64 / 8.0).exp();
    let cut = (1.0 - delta) * (b * b) as f64 / (2.0 * nf * a as f64);
    let total = seeds.end.saturating_sub(seeds.start);
    let mut hits = 0u64;
    for seed in seeds {
        let inst = DenseInstance::random_exp1(n, seed, (0..n).collect())?;
        if brute_force_f(&inst, a, b, false)? < cut {
            hits += 1;
        }
    }
    Ok(CheapSetCheck {
        a,
        b,
        bound,
        fraction: hits as f64 / total.max(1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_bounded_depth_tree;
    use crate::levels::optimal_level_sequence;

    fn four() -> DenseInstance {
        DenseInstance::from_upper(4, &[0.1, 0.5, 0.9, 0.2, 0.8, 0.3], (0..4).collect()).unwrap()
    }

    #[test]
    fn f_examples() {
        let inst = four();
        assert!((brute_force_f(&inst, 1, 1, false).unwrap() - 0.1).abs() < 1e-12);
        // star cost: vertex 0 has 1.5, 1 has 1.1, 2 has 1.0, 3 has 2.0
        assert!((brute_force_f(&inst, 1, 3, false).unwrap() - 1.0).abs() < 1e-12);
        assert!(brute_force_f(&inst, 0, 1, false).is_err());
        assert!(brute_force_f(&inst, 2, 3, false).is_err());
    }

    #[test]
    fn f_monotone() {
        let inst = DenseInstance::random_exp1(9, 2, (0..9).collect()).unwrap();
        for a in 1..8 {
            for b in 1..(9 - a) {
                let f = brute_force_f(&inst, a, b, false).unwrap();
                assert!(brute_force_f(&inst, a, b + 1, false).map_or(true, |g| g >= f));
                if a + 1 + b <= 9 {
                    assert!(brute_force_f(&inst, a + 1, b, false).unwrap() <= f);
                }
            }
        }
    }

    #[test]
    fn single_level_bound_is_tight() {
        let inst = DenseInstance::random_exp1(7, 4, (0..7).collect()).unwrap();
        let t = exact_bounded_depth_tree(&inst, 1, 0).unwrap();
        let lb = tree_lower_bound(&t, &inst, false).unwrap();
        let star = (1..7).map(|v| inst.w(0, v)).sum::<f64>();
        assert!(lb <= t.weight() + 1e-12);
        // the star from the best centre is F(1, n-1)
        let best_star = (0..7)
            .map(|c| (0..7).filter(|&v| v != c).map(|v| inst.w(c, v)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!((lb - best_star).abs() < 1e-12);
        assert!(best_star <= star);
    }

    #[test]
    fn analytic_bound_vanishes_at_tenth() {
        let p = CostParams::steiner(1e6, 1e6).unwrap();
        let seq = optimal_level_sequence(&p, 2, 1, 1e6).unwrap();
        let lb = analytic_lower_bound(seq.sizes(), 1e6, 1e6, 0.1).unwrap();
        assert_eq!(lb, 0.0);
    }

    #[test]
    fn cheap_set_bound_is_vacuous_at_twelve() {
        for a in 1..12 {
            for b in 1..=(12 - a) {
                let c = cheap_set_check(12, a, b, 0.5, 0..3).unwrap();
                assert!(!c.informative());
                assert!(c.holds());
            }
        }
    }
}
