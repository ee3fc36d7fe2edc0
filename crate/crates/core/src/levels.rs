//! Level-size sequences and the analytic cost functionals built on them.
//!
//! A level sequence `(l_0, ..., l_k)` prescribes how many vertices sit at
//! each depth of a rooted tree. For `Exp(1)` weights the greedy tree with
//! sizes `l` weighs about
//!
//! ```text
//! f_{n,c}(l) = sum_{i<k} l_i^2 / (2 n l_{i-1}) + c * l_k^2 / (2 n l_{k-1}),
//! ```
//!
//! with `c = 2n/m` for an `m`-terminal Steiner tree. Everything here is pure
//! arithmetic over a generic [`Real`] and stays real-valued until
//! [`integerize`].

use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// Largest depth the closed forms accept (`2^k` must stay exact).
pub const MAX_DEPTH: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct LevelSequence<T> {
    sizes: Vec<T>,
}

impl<T: Real> LevelSequence<T> {
    pub fn new(sizes: Vec<T>) -> Result<Self> {
        if sizes.len() < 2 {
            return domain("a level sequence needs at least two levels");
        }
        let l0 = sizes[0];
        if l0 != T::one() && l0 != T::lit(2.0) {
            return domain(format!("l_0 must be 1 (root vertex) or 2 (root edge), got {l0}"));
        }
        if let Some(bad) = sizes.iter().find(|s| !(**s > T::zero()) || !s.is_finite()) {
            return domain(format!("level sizes must be positive and finite, got {bad}"));
        }
        Ok(LevelSequence { sizes })
    }

    pub fn k(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn sizes(&self) -> &[T] {
        &self.sizes
    }

    pub fn root_size(&self) -> T {
        self.sizes[0]
    }

    pub fn last(&self) -> T {
        self.sizes[self.k()]
    }

    /// `r_i = l_i / l_{i-1}` for `i = 1..=k`.
    pub fn ratios(&self) -> Vec<T> {
        self.sizes.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// `s_i = l_0 + ... + l_i`.
    pub fn partial_sums(&self) -> Vec<T> {
        self.sizes
            .iter()
            .scan(T::zero(), |acc, &s| {
                *acc = *acc + s;
                Some(*acc)
            })
            .collect()
    }

    /// Multiplies every entry by `factor`; the result must still be rooted.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(self.sizes.iter().map(|&s| s * factor).collect())
    }
}

/// Integer level sizes ready for the greedy builder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerLevelSequence {
    sizes: Vec<usize>,
    clipped: bool,
}

impl IntegerLevelSequence {
    /// Sizes as given; zero entries are allowed only after the pool ran out.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return domain("integer level sequence is empty");
        }
        if sizes[0] != 1 && sizes[0] != 2 {
            return domain(format!("root level must hold 1 or 2 vertices, got {}", sizes[0]));
        }
        Ok(IntegerLevelSequence {
            sizes,
            clipped: false,
        })
    }

    pub fn k(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn clipped(&self) -> bool {
        self.clipped
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Parameters of `f_{n,c}` and of its truncated variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostParams<T> {
    pub n: T,
    pub m: T,
    pub c: T,
    pub delta: T,
}

impl<T: Real> CostParams<T> {
    pub fn new(n: T, m: T, c: T) -> Result<Self> {
        let p = CostParams {
            n,
            m,
            c,
            delta: T::one(),
        };
        p.validate()?;
        Ok(p)
    }

    /// The Steiner-tree parameters `c = 2n/m`.
    pub fn steiner(n: T, m: T) -> Result<Self> {
        if !(m > T::zero()) {
            return domain(format!("terminal count must be positive, got {m}"));
        }
        Self::new(n, m, T::lit(2.0) * n / m)
    }

    pub fn with_delta(mut self, delta: T) -> Result<Self> {
        self.delta = delta;
        self.validate()?;
        Ok(self)
    }

    /// `m / n`.
    pub fn alpha(&self) -> T {
        self.m / self.n
    }

    fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.m >= T::one() && self.m <= self.n) {
            bad.push(format!("need 1 <= m <= n, got m = {}, n = {}", self.m, self.n));
        }
        if !(self.c >= T::one()) || !self.c.is_finite() {
            bad.push(format!("need c >= 1, got {}", self.c));
        }
        if !(self.delta > T::zero() && self.delta <= T::one()) {
            bad.push(format!("need 0 < delta <= 1, got {}", self.delta));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(bad.join("; ")))
        }
    }
}

fn pow2<T: Real>(e: usize) -> T {
    T::lit(2.0).powi(e as i32)
}

fn check_depth(k: usize) -> Result<()> {
    if k == 0 || k > MAX_DEPTH {
        return domain(format!("depth k must lie in 1..={MAX_DEPTH}, got {k}"));
    }
    Ok(())
}

/// The stationary sequence of `f_{n,c}` with fixed endpoints.
///
/// Interior sizes follow `l_i = 2^i (l_k sqrt(c) / 2^k)^(1 - (2^(k-i) - 1)/(2^k - 1))`
/// for a unit root; a root edge (`l0 = 2`) solves the unit problem for
/// `l_k / 2` and doubles it.
pub fn optimal_level_sequence<T: Real>(
    p: &CostParams<T>,
    k: usize,
    l0: usize,
    lk: T,
) -> Result<LevelSequence<T>> {
    check_depth(k)?;
    if l0 != 1 && l0 != 2 {
        return domain(format!("l0 must be 1 or 2, got {l0}"));
    }
    let root = T::count(l0);
    if !(lk >= root) {
        return domain(format!("need l_k >= l_0, got l_k = {lk}, l_0 = {l0}"));
    }
    let unit_last = lk / root;
    let base = unit_last * p.c.sqrt() / pow2::<T>(k);
    let denom = pow2::<T>(k) - T::one();
    let mut sizes = Vec::with_capacity(k + 1);
    sizes.push(root);
    for i in 1..k {
        let expo = T::one() - (pow2::<T>(k - i) - T::one()) / denom;
        sizes.push(root * pow2::<T>(i) * base.powf(expo));
    }
    sizes.push(lk);
    LevelSequence::new(sizes)
}

#[inline]
fn jump_cost<T: Real>(n: T, a: T, b: T) -> T {
    b * b / (T::lit(2.0) * n * a)
}

/// `f_{n,c}(l)`.
pub fn f_cost<T: Real>(p: &CostParams<T>, seq: &LevelSequence<T>) -> T {
    let s = seq.sizes();
    let k = seq.k();
    let mut total = T::zero();
    for i in 1..=k {
        let term = jump_cost(p.n, s[i - 1], s[i]);
        total = total + if i == k { p.c * term } else { term };
    }
    total
}

/// Value of `f_{n,c}` on the stationary sequence, in closed form.
pub fn optimal_cost_closed_form<T: Real>(p: &CostParams<T>, k: usize, lk: T) -> T {
    let two = T::lit(2.0);
    let sc = p.c.sqrt();
    let base = lk * sc / pow2::<T>(k);
    two * lk * sc / p.n
        * (T::one() - pow2::<T>(k).recip())
        * base.powf((pow2::<T>(k) - T::one()).recip())
}

fn leading_order<T: Real>(n: T, m: T, k: usize, inner: T) -> T {
    let two_k = pow2::<T>(k);
    (T::one() - two_k.recip())
        * (T::lit(8.0) * m / n).sqrt()
        * (inner / two_k).powf((two_k - T::one()).recip())
}

/// Leading-order weight of the minimum depth-`k` (or diameter-`2k`) Steiner
/// tree on `m` of `n` vertices.
pub fn predicted_weight_depth<T: Real>(n: T, m: T, k: usize) -> T {
    leading_order(n, m, k, (T::lit(2.0) * m * n).sqrt())
}

/// Leading-order weight of the minimum diameter-`2k+1` Steiner tree.
pub fn predicted_weight_diam_odd<T: Real>(n: T, m: T, k: usize) -> T {
    leading_order(n, m, k, (m * n / T::lit(2.0)).sqrt())
}

/// Rounds up, treating values within relative `1e-9` of an integer as that
/// integer so closed-form outputs like `100.00000000000004` stay at 100.
fn ceil_tolerant<T: Real>(x: T) -> T {
    let r = x.round();
    if (x - r).abs() <= T::lit(1e-9) * r.abs().max(T::one()) {
        r
    } else {
        x.ceil()
    }
}

/// Rounds interior levels up, clipping so cumulative sizes never exceed `n`;
/// the last level records the terminals that can remain, `min(m, n - s_{k-1})`.
pub fn integerize<T: Real>(seq: &LevelSequence<T>, n: usize, m: usize) -> Result<IntegerLevelSequence> {
    let s = seq.sizes();
    let k = seq.k();
    let l0 = s[0].to_usize().expect("root size is 1 or 2");
    if n < l0 {
        return domain(format!("n = {n} cannot hold a root level of {l0}"));
    }
    let mut sizes = Vec::with_capacity(k + 1);
    sizes.push(l0);
    let mut used = l0;
    let mut clipped = false;
    for &size in &s[1..k] {
        let want = ceil_tolerant(size).to_usize().unwrap_or(usize::MAX);
        let room = n - used;
        let take = if want > room {
            clipped = true;
            room
        } else {
            want
        };
        sizes.push(take);
        used += take;
    }
    sizes.push(m.min(n - used));
    Ok(IntegerLevelSequence { sizes, clipped })
}

/// Exact mean weight of a greedy level: the `cur` lightest of `pool`
/// independent `Exp(prev)` connection costs,
/// `(1/prev) * sum_{i<cur} (cur - i)/(pool - i)`.
///
/// Generic over any exact or floating number type.
pub fn expected_level_weight<T>(prev: usize, cur: usize, pool: usize) -> Result<T>
where
    T: Num + FromPrimitive + Clone,
{
    if prev == 0 {
        return domain("previous level must be nonempty");
    }
    if cur > pool {
        return domain(format!("cannot pick {cur} of a pool of {pool}"));
    }
    let mut total = T::zero();
    for i in 0..cur {
        let num = T::from_usize(cur - i).expect("count representable");
        let den = T::from_usize(pool - i).expect("count representable");
        total = total + num / den;
    }
    Ok(total / T::from_usize(prev).expect("count representable"))
}

#[inline]
fn r_threshold_raw<T: Real>(delta: T, n: T, a: T) -> T {
    T::lit(16.0) / (delta * delta) * a * (n * T::E() / a).ln()
}

/// Jump-size threshold `R_{delta,n}(a) = (16/delta^2) a ln(n e / a)`.
pub fn r_threshold<T: Real>(delta: T, n: T, a: T) -> Result<T> {
    if !(delta > T::zero() && delta <= T::one()) {
        return domain(format!("delta must lie in (0, 1], got {delta}"));
    }
    if !(a >= T::one() && a <= n) {
        return domain(format!("a must lie in [1, n], got a = {a}, n = {n}"));
    }
    Ok(r_threshold_raw(delta, n, a))
}

/// `true` when the jump `a -> b` is large, `b > R_{delta,n}(a)`.
pub fn is_large_jump<T: Real>(delta: T, n: T, a: T, b: T) -> bool {
    b > r_threshold_raw(delta, n, a)
}

/// `f^{(R)}_{n,c}`: like [`f_cost`] but each jump term counts only if the
/// jump is large.
pub fn f_cost_truncated<T: Real>(p: &CostParams<T>, seq: &LevelSequence<T>) -> T {
    let s = seq.sizes();
    let k = seq.k();
    let mut total = T::zero();
    for i in 1..=k {
        if !is_large_jump(p.delta, p.n, s[i - 1], s[i]) {
            continue;
        }
        let term = jump_cost(p.n, s[i - 1], s[i]);
        total = total + if i == k { p.c * term } else { term };
    }
    total
}

#[derive(Clone, Copy)]
struct FrontEntry<T> {
    cost: T,
    sum: T,
    prev_slot: usize,
    prev_entry: usize,
}

/// Keeps the (cost ascending, sum descending) Pareto front.
fn pareto<T: Real>(mut entries: Vec<FrontEntry<T>>) -> Vec<FrontEntry<T>> {
    entries.sort_by(|a, b| {
        a.cost
            .partial_cmp(&b.cost)
            .unwrap()
            .then(b.sum.partial_cmp(&a.sum).unwrap())
    });
    let mut out: Vec<FrontEntry<T>> = Vec::with_capacity(entries.len());
    for e in entries {
        if out.last().map_or(true, |best| e.sum > best.sum) {
            out.push(e);
        }
    }
    out
}

/// Minimizes `f^{(R)}_{n,c}` over sequences with `l_0 = 1`, interior and
/// last sizes drawn from a log-spaced grid on `[1, n]`, and `sum_i l_i >= m`.
///
/// The grid holds `10^(j/g)` for `g = grid_points_per_decade`, plus `n`,
/// `m`, and the entries of the closed-form optimum so that the analytic
/// sequence is always a candidate. The search is an exact dynamic program
/// over (level, size) states carrying Pareto fronts of (cost, partial sum).
pub fn minimize_truncated_cost<T: Real>(
    p: &CostParams<T>,
    k: usize,
    grid_points_per_decade: usize,
) -> Result<(LevelSequence<T>, T)> {
    if k == 0 || k > 6 {
        return domain(format!("minimizer supports 1 <= k <= 6, got {k}"));
    }
    if grid_points_per_decade < 20 {
        return domain(format!(
            "grid needs at least 20 points per decade, got {grid_points_per_decade}"
        ));
    }
    if p.m > T::count(k) * p.n {
        return domain(format!("m = {} exceeds k*n, constraint infeasible", p.m));
    }
    let grid = candidate_grid(p, k, grid_points_per_decade)?;
    let one = T::one();

    // fronts[i][j]: Pareto front of partial sequences ending with l_i = grid[j]
    let mut fronts: Vec<Vec<Vec<FrontEntry<T>>>> = Vec::with_capacity(k + 1);
    // level 0 is the single root state, stored at slot 0 with grid value 1
    let root_front = vec![FrontEntry {
        cost: T::zero(),
        sum: one.min(p.m),
        prev_slot: usize::MAX,
        prev_entry: usize::MAX,
    }];
    let mut level0 = vec![Vec::new(); grid.len()];
    level0[0] = root_front;
    fronts.push(level0);

    for i in 1..=k {
        let last = i == k;
        let prev = &fronts[i - 1];
        let mut cur = vec![Vec::new(); grid.len()];
        for (j, slot) in cur.iter_mut().enumerate() {
            let b = grid[j];
            let mut cands = Vec::new();
            for (jp, front) in prev.iter().enumerate() {
                if front.is_empty() {
                    continue;
                }
                let a = grid[jp];
                let mut step = T::zero();
                if is_large_jump(p.delta, p.n, a, b) {
                    step = jump_cost(p.n, a, b);
                    if last {
                        step = step * p.c;
                    }
                }
                for (e_idx, e) in front.iter().enumerate() {
                    let sum = (e.sum + b).min(p.m);
                    if last && sum < p.m {
                        continue;
                    }
                    cands.push(FrontEntry {
                        cost: e.cost + step,
                        sum,
                        prev_slot: jp,
                        prev_entry: e_idx,
                    });
                }
            }
            *slot = pareto(cands);
        }
        fronts.push(cur);
    }

    // best terminal state
    let mut best: Option<(T, usize, usize)> = None;
    for (j, front) in fronts[k].iter().enumerate() {
        for (e_idx, e) in front.iter().enumerate() {
            if best.map_or(true, |(c, _, _)| e.cost < c) {
                best = Some((e.cost, j, e_idx));
            }
        }
    }
    let (cost, mut j, mut e_idx) =
        best.ok_or_else(|| Error::Domain("no feasible sequence on the grid".into()))?;
    let mut sizes = vec![T::zero(); k + 1];
    for i in (1..=k).rev() {
        sizes[i] = grid[j];
        let e = fronts[i][j][e_idx];
        j = e.prev_slot;
        e_idx = e.prev_entry;
    }
    sizes[0] = one;
    Ok((LevelSequence::new(sizes)?, cost))
}

fn candidate_grid<T: Real>(p: &CostParams<T>, k: usize, per_decade: usize) -> Result<Vec<T>> {
    let one = T::one();
    let decades = p.n.log10();
    let steps = (decades * T::count(per_decade)).floor().to_usize().unwrap_or(0);
    let mut grid: Vec<T> = (0..=steps)
        .map(|j| T::lit(10.0).powf(T::count(j) / T::count(per_decade)))
        .filter(|&x| x <= p.n)
        .collect();
    grid.push(p.n);
    grid.push(p.m);
    if let Ok(closed) = optimal_level_sequence(p, k, 1, p.m) {
        grid.extend(closed.sizes().iter().copied().filter(|&x| x >= one && x <= p.n));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    // slot 0 must be the root value 1
    debug_assert!(grid[0] == one);
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_rational::Rational64;

    fn steiner(n: f64, m: f64) -> CostParams<f64> {
        CostParams::steiner(n, m).unwrap()
    }

    #[test]
    fn optimal_sequence_k2_thousand() {
        let p = steiner(1000.0, 1000.0);
        let seq = optimal_level_sequence(&p, 2, 1, 1000.0).unwrap();
        // 2 (1000 sqrt2 / 4)^(2/3), evaluated independently
        let expect = 2.0 * (1000.0 * 2f64.sqrt() / 4.0).powf(2.0 / 3.0);
        assert_relative_eq!(seq.sizes()[1], expect, max_relative = 1e-12);
        assert_relative_eq!(seq.sizes()[1], 100.0, max_relative = 1e-9);
        assert_relative_eq!(f_cost(&p, &seq), 15.0, max_relative = 1e-12);
    }

    #[test]
    fn depth_one_has_no_interior() {
        let p = steiner(50.0, 50.0);
        let seq = optimal_level_sequence(&p, 1, 1, 50.0).unwrap();
        assert_eq!(seq.sizes(), &[1.0, 50.0]);
    }

    #[test]
    fn optimal_sequence_domain_errors() {
        let p = steiner(100.0, 100.0);
        assert!(optimal_level_sequence(&p, 0, 1, 100.0).is_err());
        assert!(optimal_level_sequence(&p, 2, 2, 1.5).is_err());
        assert!(optimal_level_sequence(&p, 2, 3, 10.0).is_err());
    }

    #[test]
    fn single_term_cost() {
        let p = CostParams::new(100.0, 100.0, 1.0).unwrap();
        let seq = LevelSequence::new(vec![1.0, 10.0]).unwrap();
        assert_eq!(f_cost(&p, &seq), 0.5);
    }

    #[test]
    fn predictions() {
        assert_relative_eq!(predicted_weight_depth(1000.0, 1000.0, 2), 15.0, max_relative = 1e-12);
        for n in [1e3, 1e4, 1e5, 1e6] {
            assert_relative_eq!(
                predicted_weight_depth(n, n, 2),
                1.5 * f64::cbrt(n),
                max_relative = 1e-12
            );
        }
        assert_relative_eq!(
            predicted_weight_depth(1e5, 1e5, 3),
            10.007556439436874,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            predicted_weight_diam_odd(1000.0, 1000.0, 2),
            11.905507889761497,
            max_relative = 1e-12
        );
        assert_relative_eq!(predicted_weight_diam_odd(800.0, 800.0, 1), 400.0, max_relative = 1e-12);
        assert_relative_eq!(predicted_weight_depth(800.0, 800.0, 1), 800.0, max_relative = 1e-12);
    }

    #[test]
    fn prediction_in_single_precision() {
        let v: f32 = predicted_weight_depth(1000.0f32, 1000.0, 2);
        assert!((v - 15.0).abs() < 1e-4);
    }

    #[test]
    fn integerize_examples() {
        let seq = LevelSequence::new(vec![1.0, 99.99, 1000.0]).unwrap();
        let int = integerize(&seq, 1000, 1000).unwrap();
        assert_eq!(int.sizes(), &[1, 100, 899]);

        let seq = LevelSequence::new(vec![1.0, 100.0, 899.0]).unwrap();
        let int = integerize(&seq, 1000, 1000).unwrap();
        assert_eq!(int.sizes(), &[1, 100, 899]);
        assert!(!int.clipped());

        let seq = LevelSequence::new(vec![1.0, 5000.0, 6000.0]).unwrap();
        let int = integerize(&seq, 1000, 1000).unwrap();
        assert_eq!(int.sizes(), &[1, 999, 0]);
        assert!(int.clipped());

        let seq = LevelSequence::new(vec![2.0, 3.0]).unwrap();
        assert!(integerize(&seq, 1, 1).is_err());
    }

    #[test]
    fn integerize_keeps_closed_form_integers() {
        let p = steiner(1000.0, 1000.0);
        let seq = optimal_level_sequence(&p, 2, 1, 1000.0).unwrap();
        assert_eq!(integerize(&seq, 1000, 1000).unwrap().sizes(), &[1, 100, 899]);
    }

    #[test]
    fn level_weight_exact_values() {
        let v: Rational64 = expected_level_weight(1, 2, 3).unwrap();
        assert_eq!(v, Rational64::new(7, 6));
        let v: Rational64 = expected_level_weight(1, 9, 9).unwrap();
        assert_eq!(v, Rational64::from_integer(9));
        let one: Rational64 = expected_level_weight(1, 4, 11).unwrap();
        let five: Rational64 = expected_level_weight(5, 4, 11).unwrap();
        assert_eq!(five, one / 5);
        assert!(expected_level_weight::<f64>(1, 4, 3).is_err());
    }

    #[test]
    fn r_threshold_examples() {
        assert_relative_eq!(
            r_threshold(1.0, 100.0, 1.0).unwrap(),
            89.68272297580945,
            max_relative = 1e-12
        );
        let full = r_threshold(0.4, 1000.0, 17.0).unwrap();
        let half = r_threshold(0.2, 1000.0, 17.0).unwrap();
        assert_relative_eq!(half, 4.0 * full, max_relative = 1e-12);
        assert!(r_threshold(0.5, 100.0, 0.5).is_err());
        assert!(r_threshold(0.5, 100.0, 101.0).is_err());
        assert!(r_threshold(0.0, 100.0, 5.0).is_err());
    }

    #[test]
    fn truncated_cost_extremes() {
        let p = steiner(1e6, 1e6).with_delta(0.5).unwrap();
        let small = LevelSequence::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(f_cost_truncated(&p, &small), 0.0);

        let p = steiner(1e6, 1e6).with_delta(1.0).unwrap();
        let seq = optimal_level_sequence(&p, 2, 1, 1e6).unwrap();
        // at delta = 1 both jumps of the closed-form optimum are large
        assert_eq!(f_cost_truncated(&p, &seq), f_cost(&p, &seq));
    }

    #[test]
    fn truncated_cost_at_delta_tenth_million() {
        // l_1 ~ 1.0e4 is below R_{0.1,1e6}(1) ~ 2.37e4, and l_2 = 1e6 is
        // below R(l_1) ~ 9.0e7: both jumps are small, the functional vanishes.
        let p = steiner(1e6, 1e6).with_delta(0.1).unwrap();
        let seq = optimal_level_sequence(&p, 2, 1, 1e6).unwrap();
        let r1 = r_threshold(0.1, 1e6, 1.0).unwrap();
        assert_relative_eq!(r1, 23704.816892742834, max_relative = 1e-12);
        assert!(seq.sizes()[1] < r1);
        assert!(seq.sizes()[2] < r_threshold(0.1, 1e6, seq.sizes()[1]).unwrap());
        assert_eq!(f_cost_truncated(&p, &seq), 0.0);
    }

    #[test]
    fn minimizer_depth_one_sits_at_m() {
        let p = steiner(1e4, 1e4).with_delta(1.0).unwrap();
        let (seq, cost) = minimize_truncated_cost(&p, 1, 20).unwrap();
        assert_eq!(seq.sizes(), &[1.0, 1e4]);
        assert_relative_eq!(cost, 2.0 * 1e8 / 2e4, max_relative = 1e-12);
    }

    #[test]
    fn minimizer_uses_one_cheap_small_jump() {
        // even at delta = 1 the last jump can be small: (1, ~1.13e4, ~9.9e5)
        // has continuous optimum 63.5287 against 150 for the closed form
        let p = steiner(1e6, 1e6).with_delta(1.0).unwrap();
        let closed = f_cost(&p, &optimal_level_sequence(&p, 2, 1, 1e6).unwrap());
        let (seq, cost) = minimize_truncated_cost(&p, 2, 40).unwrap();
        assert_relative_eq!(closed, 150.0, max_relative = 1e-12);
        assert_relative_eq!(cost, f_cost_truncated(&p, &seq), max_relative = 1e-12);
        assert!(cost >= 63.5287 && cost <= 1.15 * 63.5287, "{cost}");
        let s = seq.sizes();
        assert!(is_large_jump(1.0, 1e6, s[0], s[1]));
        assert!(!is_large_jump(1.0, 1e6, s[1], s[2]));
    }

    #[test]
    fn minimizer_rejects_bad_arguments() {
        let p = steiner(100.0, 100.0);
        assert!(minimize_truncated_cost(&p, 7, 40).is_err());
        assert!(minimize_truncated_cost(&p, 2, 10).is_err());
    }

    #[test]
    fn refining_grid_never_increases_minimum() {
        for (n, delta, k) in [(1e5, 0.5, 2), (1e6, 1.0, 3), (3e4, 0.8, 2)] {
            let p = steiner(n, n).with_delta(delta).unwrap();
            let (_, coarse) = minimize_truncated_cost(&p, k, 20).unwrap();
            let (_, fine) = minimize_truncated_cost(&p, k, 40).unwrap();
            assert!(fine <= coarse, "{n} {delta} {k}: {fine} > {coarse}");
        }
    }

    #[test]
    fn accessors() {
        let seq = LevelSequence::new(vec![1.0, 4.0, 20.0]).unwrap();
        assert_eq!(seq.ratios(), vec![4.0, 5.0]);
        assert_eq!(seq.partial_sums(), vec![1.0, 5.0, 25.0]);
        assert!(LevelSequence::new(vec![3.0, 4.0]).is_err());
        assert!(LevelSequence::new(vec![1.0, 0.0]).is_err());
        assert!(LevelSequence::<f64>::new(vec![1.0]).is_err());
    }
}
