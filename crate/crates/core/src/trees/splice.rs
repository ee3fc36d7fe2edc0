use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::greedy::cmp_keys;
use super::prim::prim_mst;
use super::steiner::steiner_reference;
use super::tree::{Root, RootedTree};
use crate::error::{domain, Error, Result};
use crate::graph_model::{split_weights, Distribution, EdgeOracle, EdgeWeights, StreamId};
use crate::levels::{integerize, optimal_level_sequence, CostParams};

/// Disjoint subtrees, each with one marked vertex.
#[derive(Clone, Debug)]
pub struct Forest {
    pub subtrees: Vec<RootedTree>,
    /// `marked[i]` lies in `subtrees[i]`.
    pub marked: Vec<usize>,
    /// Edges deleted by slicing.
    pub removed: Vec<(usize, usize, f64)>,
}

impl Forest {
    pub fn total_weight(&self) -> f64 {
        self.subtrees.iter().map(RootedTree::weight).sum()
    }

    pub fn removed_weight(&self) -> f64 {
        self.removed.iter().map(|e| e.2).sum()
    }

    pub fn max_diameter(&self) -> usize {
        self.subtrees.iter().map(RootedTree::diameter).max().unwrap_or(0)
    }
}

/// Array form of a tree for repeated component scans.
struct Csr {
    ids: Vec<usize>,
    start: Vec<usize>,
    adj: Vec<(usize, usize)>,
    edges: Vec<(usize, usize, f64)>,
}

impl Csr {
    fn new(tree: &RootedTree) -> Self {
        let mut ids: Vec<usize> = tree.vertices().collect();
        ids.sort_unstable();
        let local: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize, f64)> = tree
            .undirected_edges()
            .into_iter()
            .map(|(a, b, w)| (local[&a], local[&b], w))
            .collect();
        let mut deg = vec![0; ids.len() + 1];
        for &(a, b, _) in &edges {
            deg[a + 1] += 1;
            deg[b + 1] += 1;
        }
        for i in 1..deg.len() {
            deg[i] += deg[i - 1];
        }
        let mut fill = deg.clone();
        let mut adj = vec![(0, 0); 2 * edges.len()];
        for (e, &(a, b, _)) in edges.iter().enumerate() {
            adj[fill[a]] = (b, e);
            fill[a] += 1;
            adj[fill[b]] = (a, e);
            fill[b] += 1;
        }
        Csr { ids, start: deg, adj, edges }
    }
}

struct Scanner<'a> {
    g: &'a Csr,
    removed: Vec<bool>,
    dist: Vec<usize>,
    prev: Vec<(usize, usize)>,
    stamp: Vec<u32>,
    round: u32,
}

impl Scanner<'_> {
    /// BFS over live edges; returns visited vertices in BFS order.
    fn bfs(&mut self, s: usize) -> Vec<usize> {
        self.round += 1;
        let mut order = vec![s];
        self.stamp[s] = self.round;
        self.dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &(y, e) in &self.g.adj[self.g.start[x]..self.g.start[x + 1]] {
                if !self.removed[e] && self.stamp[y] != self.round {
                    self.stamp[y] = self.round;
                    self.dist[y] = self.dist[x] + 1;
                    self.prev[y] = (x, e);
                    order.push(y);
                    q.push_back(y);
                }
            }
        }
        order
    }

    /// Farthest visited vertex; local ids follow vertex ids, so the
    /// smallest index wins ties.
    fn farthest(&self, order: &[usize]) -> usize {
        let mut best = order[0];
        for &v in order {
            if self.dist[v] > self.dist[best] || (self.dist[v] == self.dist[best] && v < best) {
                best = v;
            }
        }
        best
    }
}

/// Cuts `tree` into pieces of diameter at most `delta`.
///
/// Each cut removes the middle edge of a longest path; for even length `L`
/// the side holding the smaller endpoint keeps `L/2` edges. Pieces come out
/// sorted by their smallest vertex, which is also the marked vertex.
pub fn slice(tree: &RootedTree, delta: usize) -> Result<Forest> {
    if delta < 2 {
        return domain(format!("slice needs delta >= 2, got {delta}"));
    }
    let g = Csr::new(tree);
    let nv = g.ids.len();
    let mut sc = Scanner {
        g: &g,
        removed: vec![false; g.edges.len()],
        dist: vec![0; nv],
        prev: vec![(usize::MAX, usize::MAX); nv],
        stamp: vec![0; nv],
        round: 0,
    };
    let mut work = vec![0usize];
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    while let Some(s) = work.pop() {
        let first = sc.bfs(s);
        let x = sc.farthest(&first);
        let comp = sc.bfs(x);
        let y = sc.farthest(&comp);
        let len = sc.dist[y];
        if len <= delta {
            pieces.push(comp);
            continue;
        }
        // path from y back to x, as edge ids in order y -> x
        let mut path_edges = Vec::with_capacity(len);
        let mut cur = y;
        while cur != x {
            let (p, e) = sc.prev[cur];
            path_edges.push(e);
            cur = p;
        }
        // orient from the smaller endpoint
        if x < y {
            path_edges.reverse();
        }
        let cut = if len % 2 == 0 { len / 2 } else { (len - 1) / 2 };
        let e = path_edges[cut];
        sc.removed[e] = true;
        let (a, b, _) = g.edges[e];
        work.push(a);
        work.push(b);
    }
    let mut piece_of = vec![usize::MAX; nv];
    for p in &mut pieces {
        p.sort_unstable();
    }
    pieces.sort_unstable_by_key(|p| p[0]);
    for (i, p) in pieces.iter().enumerate() {
        for &v in p {
            piece_of[v] = i;
        }
    }
    let mut piece_edges: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); pieces.len()];
    let mut removed = Vec::new();
    for (e, &(a, b, w)) in g.edges.iter().enumerate() {
        let edge = (g.ids[a], g.ids[b], w);
        if sc.removed[e] {
            removed.push(edge);
        } else {
            piece_edges[piece_of[a]].push(edge);
        }
    }
    let mut subtrees = Vec::with_capacity(pieces.len());
    let mut marked = Vec::with_capacity(pieces.len());
    for (p, edges) in pieces.iter().zip(&piece_edges) {
        let m = g.ids[p[0]];
        subtrees.push(RootedTree::from_undirected(Root::Vertex(m), edges)?);
        marked.push(m);
    }
    Ok(Forest { subtrees, marked, removed })
}

#[derive(Clone, Debug)]
pub struct Spliced {
    pub tree: RootedTree,
    /// Total weight of the splice edges.
    pub splice_weight: f64,
    /// Meta-level sizes actually used.
    pub meta_levels: Vec<usize>,
}

/// Joins the pieces of `forest` by a greedy meta-tree of depth `meta_depth`
/// whose edges come from `heavy`.
///
/// The meta-root is the piece holding vertex 0, or the first piece. A meta
/// level links pieces to marked vertices of the level above; the receiving
/// vertex becomes the new marked vertex of its piece.
pub fn splice<W: EdgeWeights>(forest: &Forest, heavy: &W, meta_depth: usize) -> Result<Spliced> {
    let count = forest.subtrees.len();
    if count == 0 {
        return domain("cannot splice an empty forest");
    }
    if meta_depth == 0 {
        return domain("meta depth must be at least 1");
    }
    let root_piece = forest.subtrees.iter().position(|t| t.contains(0)).unwrap_or(0);
    let mut marked = forest.marked.clone();
    let mut meta_levels = vec![1];
    let mut splice_edges: Vec<(usize, usize, f64)> = Vec::new();
    if count > 1 {
        let nm = count as f64;
        let seq = optimal_level_sequence(&CostParams::new(nm, nm, 2.0)?, meta_depth, 1, nm)?;
        let sizes = integerize(&seq, count, count)?;
        let pieces: Vec<Vec<usize>> = forest.subtrees.iter().map(|t| t.vertices().collect()).collect();
        let mut frontier = vec![root_piece];
        let mut pool: Vec<usize> = (0..count).filter(|&i| i != root_piece).collect();
        for (lvl, &want) in sizes.sizes().iter().enumerate().skip(1) {
            if pool.is_empty() {
                break;
            }
            let last = lvl == meta_depth;
            let marks: Vec<usize> = frontier.iter().map(|&i| marked[i]).collect();
            let mut cands: Vec<(W::Key, usize, usize, usize)> = pool
                .par_iter()
                .map(|&j| {
                    let mut best = heavy.unbounded();
                    let (mut bx, mut by) = (usize::MAX, usize::MAX);
                    for &y in &pieces[j] {
                        for &x in &marks {
                            if let Some(k) = heavy.key_if_below(x, y, &best) {
                                best = k;
                                bx = x;
                                by = y;
                            }
                        }
                    }
                    (best, j, bx, by)
                })
                .collect();
            let order = |a: &(W::Key, usize, usize, usize), b: &(W::Key, usize, usize, usize)| {
                cmp_keys(&a.0, &b.0).then(a.1.cmp(&b.1))
            };
            let take = if last { cands.len() } else { want.min(cands.len()) };
            if take > 0 && take < cands.len() {
                cands.select_nth_unstable_by(take - 1, order);
            }
            cands.truncate(take);
            cands.sort_unstable_by(order);
            frontier.clear();
            for &(key, j, x, y) in &cands {
                splice_edges.push((x, y, heavy.key_weight(key)));
                marked[j] = y;
                frontier.push(j);
            }
            meta_levels.push(cands.len());
            pool.retain(|j| !frontier.contains(j));
            if frontier.is_empty() {
                break;
            }
        }
        if !pool.is_empty() {
            return Err(Error::Construction(format!(
                "{} pieces left unattached by the meta-tree",
                pool.len()
            )));
        }
    }
    let mut edges: Vec<(usize, usize, f64)> =
        forest.subtrees.iter().flat_map(|t| t.undirected_edges()).collect();
    let splice_weight = splice_edges.iter().map(|e| e.2).sum();
    edges.extend(splice_edges);
    let tree = RootedTree::from_undirected(Root::Vertex(marked[root_piece]), &edges)?;
    Ok(Spliced {
        tree,
        splice_weight,
        meta_levels,
    })
}

/// `floor(log2(ln n))`, at least 1.
pub fn meta_depth_for(n: usize) -> usize {
    let v = (n as f64).ln().log2().floor();
    if v >= 1.0 {
        v as usize
    } else {
        1
    }
}

/// Choice of the split parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsChoice {
    /// `min(1/2, 1 / sqrt(X * delta))` with `X` the measured base-tree weight.
    Auto,
    Fixed(f64),
}

#[derive(Clone, Debug)]
pub struct SpliceOutcome {
    pub tree: RootedTree,
    pub eps: f64,
    pub meta_depth: usize,
    /// Weight of the light-stream base tree.
    pub base_weight: f64,
    /// Whether the base tree is an exact optimum (always true when spanning).
    pub base_exact: bool,
    pub sliced_off: f64,
    pub splice_weight: f64,
    pub pieces: usize,
    /// False when `k < meta_depth + delta`.
    pub depth_budget_ok: bool,
}

/// Slice-and-splice tree of depth at most `k` over `terminals`.
///
/// The base tree is built on the light stream, cut into pieces of diameter at
/// most `delta`, and rejoined through the heavy stream. Light-stream trees at
/// every `eps` share one shape (the rate only rescales weights), so `eps`
/// can be fixed from the unit-rate tree before splitting.
pub fn sliced_and_spliced(
    seed: u64,
    n: usize,
    terminals: &[usize],
    k: usize,
    delta: usize,
    eps: EpsChoice,
) -> Result<SpliceOutcome> {
    let (base, exact) = unit_base_tree(seed, n, terminals)?;
    splice_from_base(seed, n, &base, exact, k, delta, eps)
}

/// The base tree on the unit-rate light stream, and whether it is exact.
pub fn unit_base_tree(seed: u64, n: usize, terminals: &[usize]) -> Result<(RootedTree, bool)> {
    let unit = EdgeOracle::new(n, seed, StreamId::LIGHT, Distribution::EXP1)?;
    if terminals.len() == n {
        Ok((prim_mst(&unit), true))
    } else {
        let s = steiner_reference(&unit, terminals)?;
        Ok((s.tree, s.exact))
    }
}

/// Second half of [`sliced_and_spliced`], given the unit-rate base tree.
pub fn splice_from_base(
    seed: u64,
    n: usize,
    base: &RootedTree,
    base_exact: bool,
    k: usize,
    delta: usize,
    eps: EpsChoice,
) -> Result<SpliceOutcome> {
    if delta < 2 {
        return domain(format!("delta must be at least 2, got {delta}"));
    }
    let unit_weight = base.weight();
    let eps = match eps {
        EpsChoice::Auto => (1.0 / (unit_weight * delta as f64).sqrt()).min(0.5),
        EpsChoice::Fixed(e) => e,
    };
    let split = split_weights(seed, n, eps)?;
    let light_edges: Vec<(usize, usize, f64)> = base
        .undirected_edges()
        .into_iter()
        .map(|(a, b, _)| (a, b, split.light.weight(a, b)))
        .collect();
    let light = RootedTree::from_undirected(base.root(), &light_edges)?;
    let forest = slice(&light, delta)?;
    let meta_depth = meta_depth_for(n);
    let sp = splice(&forest, &split.heavy, meta_depth)?;
    if sp.tree.depth() > k {
        return Err(Error::Construction(format!(
            "slice-and-splice produced depth {} > k = {k}",
            sp.tree.depth()
        )));
    }
    Ok(SpliceOutcome {
        eps,
        meta_depth,
        base_weight: light.weight(),
        base_exact,
        sliced_off: forest.removed_weight(),
        splice_weight: sp.splice_weight,
        pieces: forest.subtrees.len(),
        depth_budget_ok: k >= meta_depth + delta,
        tree: sp.tree,
    })
}
