use super::instance::DenseInstance;
use crate::error::{Error, Result};
use crate::trees::{Root, RootedTree};

/// Largest tree size the Prüfer enumeration handles.
pub const MAX_ENUM_N: usize = 9;

/// A candidate optimum: weight, then the sorted edge list for tie-breaking.
#[derive(Clone, Debug, PartialEq)]
struct Best {
    weight: f64,
    edges: Vec<(usize, usize)>,
}

impl Best {
    fn beats(&self, other: Option<&Best>) -> bool {
        match other {
            None => true,
            Some(o) => self.weight < o.weight || (self.weight == o.weight && self.edges < o.edges),
        }
    }
}

fn offer(slot: &mut Option<Best>, cand: &Best) {
    if cand.beats(slot.as_ref()) {
        *slot = Some(cand.clone());
    }
}

/// Every tree over every admissible vertex set of an instance, folded into
/// per-constraint optima.
///
/// Admissible sets are the terminals plus any set of non-terminals. For each
/// vertex `r` and eccentricity `e` the lightest tree with `ecc(r) = e` is kept,
/// and likewise per diameter.
#[derive(Clone, Debug)]
pub struct Census {
    n: usize,
    weights: Vec<f64>,
    terminals: Vec<usize>,
    by_ecc: Vec<Vec<Option<Best>>>,
    by_diam: Vec<Option<Best>>,
    trees: u64,
}

impl Census {
    pub fn new(inst: &DenseInstance) -> Result<Self> {
        let n = inst.n();
        if n > MAX_ENUM_N {
            return Err(Error::Capacity(format!(
                "exhaustive search handles n <= {MAX_ENUM_N}, got {n}"
            )));
        }
        let ts = inst.terminals().to_vec();
        let others: Vec<usize> = (0..n).filter(|v| ts.binary_search(v).is_err()).collect();
        let weights: Vec<f64> = (0..n * n).map(|i| inst.w(i / n, i % n)).collect();
        let mut census = Census {
            n,
            weights,
            terminals: ts.clone(),
            by_ecc: vec![vec![None; n]; n],
            by_diam: vec![None; n],
            trees: 0,
        };
        for mask in 0u32..(1 << others.len()) {
            let mut vs = ts.clone();
            vs.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
            vs.sort_unstable();
            if vs.is_empty() {
                continue;
            }
            census.scan(&vs);
        }
        Ok(census)
    }

    /// Number of trees examined, over all vertex sets.
    pub fn trees_enumerated(&self) -> u64 {
        self.trees
    }

    fn w(&self, u: usize, v: usize) -> f64 {
        self.weights[u * self.n + v]
    }

    fn scan(&mut self, vs: &[usize]) {
        let s = vs.len();
        if s == 1 {
            self.trees += 1;
            let cand = Best { weight: 0.0, edges: Vec::new() };
            offer(&mut self.by_ecc[vs[0]][0], &cand);
            offer(&mut self.by_diam[0], &cand);
            return;
        }
        let mut seq = vec![0usize; s.saturating_sub(2)];
        let mut deg = vec![0usize; s];
        let mut adj = vec![[0usize; MAX_ENUM_N]; s];
        let mut adj_len = vec![0usize; s];
        let mut dist = vec![0usize; s];
        let mut queue = vec![0usize; s];
        loop {
            // Prüfer decode into local edges
            deg.iter_mut().for_each(|d| *d = 1);
            for &x in &seq {
                deg[x] += 1;
            }
            let mut edges: Vec<(usize, usize)> = Vec::with_capacity(s - 1);
            for &x in &seq {
                let leaf = (0..s).find(|&v| deg[v] == 1).expect("a leaf exists");
                edges.push((leaf, x));
                deg[leaf] -= 1;
                deg[x] -= 1;
            }
            let rest: Vec<usize> = (0..s).filter(|&v| deg[v] == 1).collect();
            edges.push((rest[0], rest[1]));

            let mut global: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(a, b)| (vs[a].min(vs[b]), vs[a].max(vs[b])))
                .collect();
            global.sort_unstable();
            let weight: f64 = global.iter().map(|&(a, b)| self.w(a, b)).sum();

            adj_len.iter_mut().for_each(|l| *l = 0);
            for &(a, b) in &edges {
                adj[a][adj_len[a]] = b;
                adj_len[a] += 1;
                adj[b][adj_len[b]] = a;
                adj_len[b] += 1;
            }
            let mut diam = 0;
            let mut eccs = [0usize; MAX_ENUM_N];
            for r in 0..s {
                dist.iter_mut().for_each(|d| *d = usize::MAX);
                dist[r] = 0;
                queue[0] = r;
                let (mut head, mut tail) = (0, 1);
                let mut ecc = 0;
                while head < tail {
                    let x = queue[head];
                    head += 1;
                    ecc = ecc.max(dist[x]);
                    for &y in &adj[x][..adj_len[x]] {
                        if dist[y] == usize::MAX {
                            dist[y] = dist[x] + 1;
                            queue[tail] = y;
                            tail += 1;
                        }
                    }
                }
                eccs[r] = ecc;
                diam = diam.max(ecc);
            }
            self.trees += 1;
            let cand = Best { weight, edges: global };
            for r in 0..s {
                offer(&mut self.by_ecc[vs[r]][eccs[r]], &cand);
            }
            offer(&mut self.by_diam[diam], &cand);

            // odometer over sequences
            let mut i = 0;
            loop {
                if i == seq.len() {
                    return;
                }
                seq[i] += 1;
                if seq[i] < s {
                    break;
                }
                seq[i] = 0;
                i += 1;
            }
        }
    }

    fn to_tree(&self, best: &Best, root: Root) -> Result<RootedTree> {
        let edges: Vec<(usize, usize, f64)> = best.edges.iter().map(|&(a, b)| (a, b, self.w(a, b))).collect();
        let root = match root {
            Root::Edge { a, b, .. } => Root::Edge { a, b, weight: self.w(a, b) },
            r => r,
        };
        RootedTree::from_undirected(root, &edges)
    }

    fn best_depth(&self, k: usize, root: usize) -> Option<&Best> {
        let mut best: Option<&Best> = None;
        for b in self.by_ecc[root].iter().take(k + 1).flatten() {
            if b.beats(best) {
                best = Some(b);
            }
        }
        best
    }

    fn best_diameter(&self, d: usize) -> Option<&Best> {
        let mut best: Option<&Best> = None;
        for b in self.by_diam.iter().take(d + 1).flatten() {
            if b.beats(best) {
                best = Some(b);
            }
        }
        best
    }

    /// Lightest tree spanning the terminals with every vertex within `k`
    /// edges of `root`.
    pub fn depth_optimum(&self, k: usize, root: usize) -> Result<RootedTree> {
        if root >= self.n {
            return Err(Error::Domain(format!("root {root} is outside [0, {})", self.n)));
        }
        let best = self.best_depth(k, root).ok_or_else(|| {
            Error::Infeasible(format!("no tree of depth <= {k} from root {root} reaches all terminals"))
        })?;
        self.to_tree(best, Root::Vertex(root))
    }

    /// Lightest tree spanning the terminals with diameter at most `d`, hung
    /// from its center.
    pub fn diameter_optimum(&self, d: usize) -> Result<RootedTree> {
        let best = self
            .best_diameter(d)
            .ok_or_else(|| Error::Infeasible(format!("no tree of diameter <= {d} reaches all terminals")))?;
        let first = best.edges.first().map_or(self.terminals[0], |e| e.0);
        self.to_tree(best, Root::Vertex(first))?.rerooted_at_center()
    }
}

/// Exact minimum tree over the terminals of depth at most `k` from `root`.
pub fn exact_bounded_depth_tree(inst: &DenseInstance, k: usize, root: usize) -> Result<RootedTree> {
    Census::new(inst)?.depth_optimum(k, root)
}

/// Exact minimum tree over the terminals of diameter at most `d`.
pub fn exact_bounded_diameter_tree(inst: &DenseInstance, d: usize) -> Result<RootedTree> {
    Census::new(inst)?.diameter_optimum(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::prim_mst;

    fn four() -> DenseInstance {
        DenseInstance::from_upper(4, &[0.1, 0.5, 0.9, 0.2, 0.8, 0.3], (0..4).collect()).unwrap()
    }

    fn sorted_edges(t: &RootedTree) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = t.undirected_edges().iter().map(|&(a, b, _)| (a.min(b), a.max(b))).collect();
        e.sort_unstable();
        e
    }

    #[test]
    fn four_vertex_depth_two() {
        let t = exact_bounded_depth_tree(&four(), 2, 0).unwrap();
        assert!((t.weight() - 0.9).abs() < 1e-12);
        assert_eq!(sorted_edges(&t), vec![(0, 1), (0, 2), (2, 3)]);
    }

    #[test]
    fn counts_sixteen_trees() {
        let c = Census::new(&four()).unwrap();
        assert_eq!(c.trees_enumerated(), 16);
        assert!(c.by_diam[2].is_some() && c.by_diam[3].is_some());
        let t = c.diameter_optimum(3).unwrap();
        assert!((t.weight() - prim_mst(&four()).weight()).abs() < 1e-12);
    }

    #[test]
    fn unconstrained_matches_mst() {
        for seed in 0..10 {
            let inst = DenseInstance::random_exp1(7, seed, (0..7).collect()).unwrap();
            let mst = prim_mst(&inst).weight();
            assert!((exact_bounded_depth_tree(&inst, 6, 3).unwrap().weight() - mst).abs() < 1e-12);
            assert!((exact_bounded_diameter_tree(&inst, 6).unwrap().weight() - mst).abs() < 1e-12);
        }
    }

    #[test]
    fn infeasible_and_capacity() {
        let inst = four();
        assert!(matches!(exact_bounded_depth_tree(&inst, 0, 0), Err(Error::Infeasible(_))));
        assert!(matches!(exact_bounded_diameter_tree(&inst, 0), Err(Error::Infeasible(_))));
        let big = DenseInstance::random_exp1(10, 1, vec![0]).unwrap();
        assert!(matches!(Census::new(&big), Err(Error::Capacity(_))));
        let single = DenseInstance::random_exp1(5, 1, vec![2]).unwrap();
        assert_eq!(exact_bounded_depth_tree(&single, 0, 2).unwrap().weight(), 0.0);
    }

    #[test]
    fn steiner_case_matches_reference() {
        for seed in 0..10 {
            let inst = DenseInstance::random_exp1(7, seed, vec![0, 3, 5]).unwrap();
            let s = crate::trees::steiner_reference(&inst, inst.terminals()).unwrap();
            let e = exact_bounded_diameter_tree(&inst, 6).unwrap();
            assert!((s.tree.weight() - e.weight()).abs() < 1e-12);
        }
    }

    #[test]
    fn diameter_tree_is_centered() {
        let inst = DenseInstance::random_exp1(8, 5, (0..8).collect()).unwrap();
        for d in 2..6 {
            let t = exact_bounded_diameter_tree(&inst, d).unwrap();
            assert!(t.diameter() <= d);
            assert_eq!(t.depth(), t.diameter() / 2);
        }
    }
}
