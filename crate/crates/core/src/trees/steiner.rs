use std::collections::HashMap;

use super::tree::{Root, RootedTree};
use crate::error::{domain, Result};
use crate::graph_model::EdgeWeights;

/// Terminal-count limit for exhaustive Steiner search.
pub const EXACT_MAX_TERMINALS: usize = 10;
/// Vertex-count limit for exhaustive Steiner search.
pub const EXACT_MAX_N: usize = 14;

#[derive(Clone, Debug)]
pub struct SteinerTree {
    pub tree: RootedTree,
    /// True when the tree is a proven optimum.
    pub exact: bool,
}

/// Minimum spanning tree of the complete graph on `vs` as undirected edges.
pub(crate) fn mst_on<W: EdgeWeights>(w: &W, vs: &[usize]) -> (f64, Vec<(usize, usize, f64)>) {
    let mut edges = Vec::with_capacity(vs.len().saturating_sub(1));
    if vs.len() <= 1 {
        return (0.0, edges);
    }
    let mut rest: Vec<(usize, f64, usize)> = vs[1..].iter().map(|&v| (v, w.weight(v, vs[0]), vs[0])).collect();
    let mut total = 0.0;
    while !rest.is_empty() {
        let mut bi = 0;
        for i in 1..rest.len() {
            if rest[i].1 < rest[bi].1 {
                bi = i;
            }
        }
        let (v, d, p) = rest.remove(bi);
        total += d;
        edges.push((p, v, d));
        for e in rest.iter_mut() {
            let x = w.weight(e.0, v);
            if x < e.1 {
                e.1 = x;
                e.2 = v;
            }
        }
    }
    (total, edges)
}

/// Kruskal over an explicit edge list on vertex ids `< n`.
pub(crate) fn kruskal(n: usize, edges: &[(usize, usize, f64)]) -> Vec<(usize, usize, f64)> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| edges[a].2.total_cmp(&edges[b].2).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut out = Vec::new();
    for i in order {
        let (u, v, w) = edges[i];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            out.push((u, v, w));
        }
    }
    out
}

/// Reference Steiner tree over `terminals`, rooted at the smallest terminal.
///
/// Small cases are solved exactly by trying every set of non-terminals and
/// taking the best spanning tree; larger ones use the metric-closure
/// heuristic with non-terminal leaves pruned.
pub fn steiner_reference<W: EdgeWeights>(w: &W, terminals: &[usize]) -> Result<SteinerTree> {
    let n = w.vertex_count();
    let mut ts = terminals.to_vec();
    ts.sort_unstable();
    ts.dedup();
    if ts.is_empty() {
        return domain("Steiner tree needs at least one terminal");
    }
    if let Some(&t) = ts.iter().find(|&&t| t >= n) {
        return domain(format!("terminal {t} is outside [0, {n})"));
    }
    let root = Root::Vertex(ts[0]);
    if ts.len() <= EXACT_MAX_TERMINALS && n <= EXACT_MAX_N {
        let others: Vec<usize> = (0..n).filter(|v| ts.binary_search(v).is_err()).collect();
        let mut best: Option<(f64, Vec<(usize, usize, f64)>)> = None;
        for mask in 0u32..(1 << others.len()) {
            let mut vs = ts.clone();
            vs.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
            let (cost, edges) = mst_on(w, &vs);
            if best.as_ref().map_or(true, |b| cost < b.0) {
                best = Some((cost, edges));
            }
        }
        let (_, edges) = best.expect("at least the empty subset");
        return Ok(SteinerTree {
            tree: RootedTree::from_undirected(root, &edges)?,
            exact: true,
        });
    }
    if ts.len() == n {
        return Ok(SteinerTree {
            tree: super::prim::prim_mst(w),
            exact: true,
        });
    }

    // shortest paths from every terminal
    let paths: Vec<(Vec<f64>, Vec<usize>)> = ts.iter().map(|&s| dijkstra(w, s)).collect();
    let closure: Vec<(usize, usize, f64)> = (0..ts.len())
        .flat_map(|i| (i + 1..ts.len()).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, paths[i].0[ts[j]]))
        .collect();
    let mut union: HashMap<(usize, usize), f64> = HashMap::new();
    for (i, j, _) in kruskal(ts.len(), &closure) {
        let prev = &paths[i].1;
        let mut x = ts[j];
        while x != ts[i] {
            let p = prev[x];
            union.insert((x.min(p), x.max(p)), w.weight(x, p));
            x = p;
        }
    }
    let mut ids: Vec<usize> = union.keys().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let local = |v: usize| ids.binary_search(&v).expect("vertex in union");
    let mut local_edges: Vec<(usize, usize, f64)> =
        union.iter().map(|(&(a, b), &x)| (local(a), local(b), x)).collect();
    local_edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut edges: Vec<(usize, usize, f64)> = kruskal(ids.len(), &local_edges)
        .into_iter()
        .map(|(a, b, x)| (ids[a], ids[b], x))
        .collect();
    prune_steiner_leaves(&mut edges, &ts);
    Ok(SteinerTree {
        tree: RootedTree::from_undirected(root, &edges)?,
        exact: false,
    })
}

fn prune_steiner_leaves(edges: &mut Vec<(usize, usize, f64)>, ts: &[usize]) {
    loop {
        let mut deg: HashMap<usize, usize> = HashMap::new();
        for &(a, b, _) in edges.iter() {
            *deg.entry(a).or_default() += 1;
            *deg.entry(b).or_default() += 1;
        }
        let leaf = |v: usize| deg[&v] == 1 && ts.binary_search(&v).is_err();
        let before = edges.len();
        edges.retain(|&(a, b, _)| !leaf(a) && !leaf(b));
        if edges.len() == before {
            return;
        }
    }
}

/// Dense Dijkstra from `s`: distances and predecessor array.
fn dijkstra<W: EdgeWeights>(w: &W, s: usize) -> (Vec<f64>, Vec<usize>) {
    let n = w.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[s] = 0.0;
    prev[s] = s;
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !done[v] && (u == usize::MAX || dist[v] < dist[u]) {
                u = v;
            }
        }
        done[u] = true;
        for v in 0..n {
            if !done[v] {
                let d = dist[u] + w.weight(u, v);
                if d < dist[v] {
                    dist[v] = d;
                    prev[v] = u;
                }
            }
        }
    }
    (dist, prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::DenseInstance;
    use crate::graph_model::EdgeOracle;
    use crate::trees::prim_mst;

    #[test]
    fn all_terminals_is_mst() {
        let inst = DenseInstance::random_exp1(9, 4, (0..9).collect()).unwrap();
        let s = steiner_reference(&inst, inst.terminals()).unwrap();
        assert!(s.exact);
        assert!((s.tree.weight() - prim_mst(&inst).weight()).abs() < 1e-12);
        let o = EdgeOracle::exp1(40, 2).unwrap();
        let all: Vec<usize> = (0..40).collect();
        let s = steiner_reference(&o, &all).unwrap();
        assert!((s.tree.weight() - prim_mst(&o).weight()).abs() < 1e-9);
    }

    #[test]
    fn two_terminals_is_shortest_path() {
        let o = EdgeOracle::exp1(30, 8).unwrap();
        let s = steiner_reference(&o, &[3, 17]).unwrap();
        assert!(!s.exact);
        let (d, _) = dijkstra(&o, 3);
        assert!((s.tree.weight() - d[17]).abs() < 1e-12);
        let inst = DenseInstance::random_exp1(8, 8, vec![1, 6]).unwrap();
        let s = steiner_reference(&inst, inst.terminals()).unwrap();
        let (d, _) = dijkstra(&inst, 1);
        assert!((s.tree.weight() - d[6]).abs() < 1e-12);
    }

    #[test]
    fn heuristic_never_beats_exact() {
        for seed in 0..20 {
            let inst = DenseInstance::random_exp1(8, seed, vec![0, 2, 4, 7]).unwrap();
            let exact = steiner_reference(&inst, inst.terminals()).unwrap();
            // heuristic path, forced through a copy that is too large for enumeration
            let (edges, _) = heuristic_only(&inst, inst.terminals());
            assert!(edges + 1e-12 >= exact.tree.weight());
            // brute force: best MST over every superset of the terminals
            let mut best = f64::INFINITY;
            for mask in 0u32..256 {
                if [0, 2, 4, 7].iter().all(|&t| mask >> t & 1 == 1) {
                    let vs: Vec<usize> = (0..8).filter(|v| mask >> v & 1 == 1).collect();
                    best = best.min(mst_on(&inst, &vs).0);
                }
            }
            assert!((best - exact.tree.weight()).abs() < 1e-12);
        }
    }

    struct Padded<'a>(&'a DenseInstance);

    impl EdgeWeights for Padded<'_> {
        type Key = f64;
        fn vertex_count(&self) -> usize {
            EXACT_MAX_N + 1
        }
        fn key(&self, u: usize, v: usize) -> f64 {
            if u < self.0.n() && v < self.0.n() {
                self.0.w(u, v)
            } else {
                1e9
            }
        }
        fn key_weight(&self, k: f64) -> f64 {
            k
        }
        fn unbounded(&self) -> f64 {
            f64::INFINITY
        }
    }

    fn heuristic_only(inst: &DenseInstance, ts: &[usize]) -> (f64, bool) {
        let s = steiner_reference(&Padded(inst), ts).unwrap();
        (s.tree.weight(), s.exact)
    }

    #[test]
    fn empty_terminals_rejected() {
        let o = EdgeOracle::exp1(5, 1).unwrap();
        assert!(steiner_reference(&o, &[]).is_err());
    }
}
