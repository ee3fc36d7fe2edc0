use std::cmp::Ordering;

use rayon::prelude::*;

use super::tree::{Root, RootedTree};
use crate::error::{domain, Result};
use crate::graph_model::EdgeWeights;
use crate::levels::IntegerLevelSequence;

/// How level 0 of a greedy tree is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSpec {
    Vertex(usize),
    Edge(usize, usize),
    /// The lightest of the `n - 1` edges at the given vertex.
    LightestEdgeAt(usize),
}

impl RootSpec {
    fn size(&self) -> usize {
        match self {
            RootSpec::Vertex(_) => 1,
            _ => 2,
        }
    }
}

pub(crate) fn cmp_keys<K: PartialOrd>(a: &K, b: &K) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Lightest edge from `v` into `targets`; ties go to the earlier target.
#[inline]
fn lightest_into<W: EdgeWeights>(w: &W, v: usize, targets: &[usize]) -> (W::Key, usize) {
    let mut best = w.unbounded();
    let mut arg = usize::MAX;
    for &t in targets {
        if let Some(k) = w.key_if_below(v, t, &best) {
            best = k;
            arg = t;
        }
    }
    (best, arg)
}

pub(crate) fn resolve_root<W: EdgeWeights>(w: &W, spec: RootSpec) -> Result<Root> {
    let n = w.vertex_count();
    let check = |v: usize| -> Result<()> {
        if v >= n {
            return domain(format!("root vertex {v} is outside [0, {n})"));
        }
        Ok(())
    };
    match spec {
        RootSpec::Vertex(v) => {
            check(v)?;
            Ok(Root::Vertex(v))
        }
        RootSpec::Edge(a, b) => {
            check(a)?;
            check(b)?;
            if a == b {
                return domain(format!("root edge {a}-{b} is a self-loop"));
            }
            Ok(Root::Edge { a, b, weight: w.weight(a, b) })
        }
        RootSpec::LightestEdgeAt(a) => {
            check(a)?;
            if n < 2 {
                return domain("a root edge needs at least two vertices");
            }
            let others: Vec<usize> = (0..n).filter(|&v| v != a).collect();
            let (key, b) = lightest_into(w, a, &others);
            Ok(Root::Edge { a, b, weight: w.key_weight(key) })
        }
    }
}

/// Level-by-level greedy tree of depth `levels.k()`.
///
/// Each level `i < k` takes the `levels[i]` unchosen vertices with the
/// lightest edges to level `i - 1`, each joined by that edge. The remaining
/// terminals then hang from level `k - 1` by their own lightest edges.
pub fn greedy_tree<W: EdgeWeights>(
    w: &W,
    terminals: &[usize],
    levels: &IntegerLevelSequence,
    root: RootSpec,
) -> Result<RootedTree> {
    let n = w.vertex_count();
    let sizes = levels.sizes();
    let k = levels.k();
    if sizes[0] != root.size() {
        return domain(format!(
            "level 0 holds {} vertices but the root has {}",
            sizes[0],
            root.size()
        ));
    }
    if let Some(&t) = terminals.iter().find(|&&t| t >= n) {
        return domain(format!("terminal {t} is outside [0, {n})"));
    }
    let interior: usize = sizes[..k].iter().sum();
    if interior > n {
        return domain(format!("levels 0..{k} need {interior} vertices but n = {n}"));
    }
    let root = resolve_root(w, root)?;
    let mut tree = RootedTree::new(root)?;
    let mut in_tree = vec![false; n];
    let mut frontier = root.vertices();
    for &v in &frontier {
        in_tree[v] = true;
    }
    if k == 0 {
        if terminals.iter().any(|&t| !in_tree[t]) {
            return domain("depth 0 cannot reach terminals outside the root");
        }
        return Ok(tree);
    }

    let mut pool: Vec<usize> = (0..n).filter(|&v| !in_tree[v]).collect();
    for &want in &sizes[1..k] {
        if frontier.is_empty() || pool.is_empty() {
            break;
        }
        let mut cands: Vec<(W::Key, usize, usize)> = pool
            .par_iter()
            .map(|&v| {
                let (key, p) = lightest_into(w, v, &frontier);
                (key, v, p)
            })
            .collect();
        let take = want.min(cands.len());
        let order = |a: &(W::Key, usize, usize), b: &(W::Key, usize, usize)| {
            cmp_keys(&a.0, &b.0).then(a.1.cmp(&b.1))
        };
        if take < cands.len() && take > 0 {
            cands.select_nth_unstable_by(take - 1, order);
        }
        cands.truncate(take);
        cands.sort_unstable_by(order);
        frontier.clear();
        for &(key, v, p) in &cands {
            tree.attach(v, p, w.key_weight(key))?;
            in_tree[v] = true;
            frontier.push(v);
        }
        pool.retain(|&v| !in_tree[v]);
    }

    let mut rest: Vec<usize> = terminals.iter().copied().filter(|&t| !in_tree[t]).collect();
    rest.sort_unstable();
    rest.dedup();
    if rest.is_empty() {
        return Ok(tree);
    }
    if frontier.is_empty() {
        return domain("level k - 1 is empty but terminals remain");
    }
    let links: Vec<(W::Key, usize)> = rest.par_iter().map(|&v| lightest_into(w, v, &frontier)).collect();
    for (&v, &(key, p)) in rest.iter().zip(&links) {
        tree.attach(v, p, w.key_weight(key))?;
    }
    Ok(tree)
}
