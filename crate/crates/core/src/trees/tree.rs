use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Level-0 anchor of a rooted tree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Root {
    Vertex(usize),
    /// Both endpoints sit at level 0; the edge weight is counted once.
    Edge { a: usize, b: usize, weight: f64 },
}

impl Root {
    pub fn vertices(&self) -> Vec<usize> {
        match *self {
            Root::Vertex(v) => vec![v],
            Root::Edge { a, b, .. } => vec![a, b],
        }
    }
}

/// Central vertex (even diameter) or central edge (odd diameter).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Center {
    Vertex(usize),
    Edge(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeNode {
    pub vertex: usize,
    pub parent: Option<usize>,
    /// Weight of the edge to `parent`; zero for level-0 vertices.
    pub weight: f64,
    pub level: usize,
}

/// A tree over a subset of vertex ids, rooted at a vertex or an edge.
///
/// Nodes are kept in insertion order, which is always parent-before-child.
#[derive(Clone, Debug)]
pub struct RootedTree {
    root: Root,
    nodes: Vec<TreeNode>,
    index: HashMap<usize, usize>,
}

impl RootedTree {
    pub fn new(root: Root) -> Result<Self> {
        let mut t = RootedTree {
            root,
            nodes: Vec::new(),
            index: HashMap::new(),
        };
        if let Root::Edge { a, b, weight } = root {
            if a == b {
                return Err(Error::Domain(format!("root edge is a self-loop at {a}")));
            }
            if !(weight >= 0.0) {
                return Err(Error::Domain(format!("root edge weight {weight} is negative")));
            }
        }
        for v in root.vertices() {
            t.index.insert(v, t.nodes.len());
            t.nodes.push(TreeNode {
                vertex: v,
                parent: None,
                weight: 0.0,
                level: 0,
            });
        }
        Ok(t)
    }

    /// Adds `child` below `parent`, which must already be in the tree.
    pub fn attach(&mut self, child: usize, parent: usize, weight: f64) -> Result<()> {
        if self.index.contains_key(&child) {
            return Err(Error::Domain(format!("vertex {child} is already in the tree")));
        }
        let Some(&p) = self.index.get(&parent) else {
            return Err(Error::Domain(format!("parent {parent} of {child} is not in the tree")));
        };
        let level = self.nodes[p].level + 1;
        self.index.insert(child, self.nodes.len());
        self.nodes.push(TreeNode {
            vertex: child,
            parent: Some(parent),
            weight,
            level,
        });
        Ok(())
    }

    /// Builds a tree from undirected edges, orienting them away from `root`.
    /// Fails unless the edges form a tree containing the root.
    pub fn from_undirected(root: Root, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let root_pair = match root {
            Root::Edge { a, b, .. } => Some((a.min(b), a.max(b))),
            Root::Vertex(_) => None,
        };
        let mut skipped_root_edge = false;
        let mut adj: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
        for &(u, v, w) in edges {
            if u == v {
                return Err(Error::Domain(format!("self-loop at {u}")));
            }
            if !skipped_root_edge && root_pair == Some((u.min(v), u.max(v))) {
                skipped_root_edge = true;
                continue;
            }
            adj.entry(u).or_default().push((v, w));
            adj.entry(v).or_default().push((u, w));
        }
        let mut tree = RootedTree::new(root)?;
        let mut queue: VecDeque<usize> = root.vertices().into();
        while let Some(x) = queue.pop_front() {
            let Some(nbrs) = adj.get(&x) else { continue };
            for &(y, w) in nbrs {
                if tree.parent(x) == Some(y) {
                    continue;
                }
                if tree.contains(y) {
                    return Err(Error::Domain(format!("edges contain a cycle through {x}-{y}")));
                }
                tree.attach(y, x, w)?;
                queue.push_back(y);
            }
        }
        let tree_edges = edges.len() - usize::from(skipped_root_edge);
        if tree.len() != tree_edges + root.vertices().len() {
            return Err(Error::Domain("edges do not form a tree spanning their vertices".into()));
        }
        Ok(tree)
    }

    pub fn root(&self) -> Root {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().map(|n| n.vertex)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.index.contains_key(&v)
    }

    pub fn node(&self, v: usize) -> Option<&TreeNode> {
        self.index.get(&v).map(|&i| &self.nodes[i])
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.node(v).and_then(|n| n.parent)
    }

    pub fn level(&self, v: usize) -> Option<usize> {
        self.node(v).map(|n| n.level)
    }

    /// Parent edges `(child, parent, weight)`, excluding the root edge.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.nodes
            .iter()
            .filter_map(|n| n.parent.map(|p| (n.vertex, p, n.weight)))
    }

    /// Every tree edge as `(u, v, weight)`, including the root edge.
    pub fn undirected_edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out: Vec<_> = self.edges().collect();
        if let Root::Edge { a, b, weight } = self.root {
            out.push((a, b, weight));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn weight(&self) -> f64 {
        let base: f64 = self.nodes.iter().map(|n| n.weight).sum();
        match self.root {
            Root::Edge { weight, .. } => base + weight,
            Root::Vertex(_) => base,
        }
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0)
    }

    /// Number of vertices per level, `l_0..=l_depth`.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.depth() + 1];
        for n in &self.nodes {
            sizes[n.level] += 1;
        }
        sizes
    }

    /// `wt_i`: weight of the edges joining level `i-1` to level `i`. Entry 0
    /// holds the root-edge weight (zero for a vertex root).
    pub fn level_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.depth() + 1];
        for n in &self.nodes {
            w[n.level] += n.weight;
        }
        if let Root::Edge { weight, .. } = self.root {
            w[0] = weight;
        }
        w
    }

    /// Tree edges heavier than `eps`, root edge included.
    pub fn heavy_edge_count(&self, eps: f64) -> usize {
        let mut count = self.edges().filter(|e| e.2 > eps).count();
        if let Root::Edge { weight, .. } = self.root {
            count += usize::from(weight > eps);
        }
        count
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                let j = self.index[&p];
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        if let Root::Edge { a, b, .. } = self.root {
            let (i, j) = (self.index[&a], self.index[&b]);
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// BFS distances (in slots) from `start`; returns (dist, parent slot).
    fn bfs(adj: &[Vec<usize>], start: usize) -> (Vec<usize>, Vec<usize>) {
        let mut dist = vec![usize::MAX; adj.len()];
        let mut prev = vec![usize::MAX; adj.len()];
        dist[start] = 0;
        let mut q = VecDeque::from([start]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    prev[y] = x;
                    q.push_back(y);
                }
            }
        }
        (dist, prev)
    }

    /// Farthest slot from `start`, ties broken toward the smaller vertex id.
    fn farthest(&self, dist: &[usize]) -> usize {
        (0..dist.len())
            .max_by(|&i, &j| {
                dist[i]
                    .cmp(&dist[j])
                    .then(self.nodes[j].vertex.cmp(&self.nodes[i].vertex))
            })
            .expect("nonempty tree")
    }

    /// A longest path as a vertex list, found by double BFS from the
    /// smallest vertex id.
    pub fn diameter_path(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let start = (0..self.nodes.len())
            .min_by_key(|&i| self.nodes[i].vertex)
            .expect("nonempty tree");
        let (d0, _) = Self::bfs(&adj, start);
        let x = self.farthest(&d0);
        let (d1, prev) = Self::bfs(&adj, x);
        let y = self.farthest(&d1);
        let mut path = vec![y];
        let mut cur = y;
        while cur != x {
            cur = prev[cur];
            path.push(cur);
        }
        path.into_iter().map(|i| self.nodes[i].vertex).collect()
    }

    /// Longest path length in edges.
    pub fn diameter(&self) -> usize {
        self.diameter_path().len() - 1
    }

    pub fn find_center(&self) -> Center {
        let path = self.diameter_path();
        let len = path.len() - 1;
        if len % 2 == 0 {
            Center::Vertex(path[len / 2])
        } else {
            let (a, b) = (path[len / 2], path[len / 2 + 1]);
            Center::Edge(a.min(b), a.max(b))
        }
    }

    /// Weight of the tree edge `{u, v}`, if present.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        if let Root::Edge { a, b, weight } = self.root {
            if (a, b) == (u, v) || (a, b) == (v, u) {
                return Some(weight);
            }
        }
        let nu = self.node(u)?;
        let nv = self.node(v)?;
        if nu.parent == Some(v) {
            Some(nu.weight)
        } else if nv.parent == Some(u) {
            Some(nv.weight)
        } else {
            None
        }
    }

    /// The same edge set hung from a different root. An edge root must be a
    /// tree edge; its stored weight is taken from the tree.
    pub fn rerooted(&self, root: Root) -> Result<RootedTree> {
        let root = match root {
            Root::Vertex(v) => {
                if !self.contains(v) {
                    return Err(Error::Domain(format!("new root {v} is not in the tree")));
                }
                Root::Vertex(v)
            }
            Root::Edge { a, b, .. } => {
                let weight = self
                    .edge_weight(a, b)
                    .ok_or_else(|| Error::Domain(format!("{a}-{b} is not a tree edge")))?;
                Root::Edge { a, b, weight }
            }
        };
        RootedTree::from_undirected(root, &self.undirected_edges())
    }

    /// Rerooted at the center: depth `diameter/2` for a central vertex,
    /// `(diameter-1)/2` for a central edge.
    pub fn rerooted_at_center(&self) -> Result<RootedTree> {
        match self.find_center() {
            Center::Vertex(v) => self.rerooted(Root::Vertex(v)),
            Center::Edge(a, b) => self.rerooted(Root::Edge { a, b, weight: 0.0 }),
        }
    }

    /// Plain-text parent array: a `root <v>` or `root-edge <u> <v> <w>`
    /// header, then one `child parent weight` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self.root {
            Root::Vertex(v) => writeln!(s, "root {v}").unwrap(),
            Root::Edge { a, b, weight } => writeln!(s, "root-edge {a} {b} {weight:?}").unwrap(),
        }
        for (c, p, w) in self.edges() {
            writeln!(s, "{c} {p} {w:?}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty tree file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let root = match fields.as_slice() {
            ["root", v] => Root::Vertex(parse_num(v)?),
            ["root-edge", a, b, w] => Root::Edge {
                a: parse_num(a)?,
                b: parse_num(b)?,
                weight: parse_num(w)?,
            },
            _ => return Err(Error::Parse(format!("bad tree header `{header}`"))),
        };
        let mut edges = Vec::new();
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let [c, p, w] = f.as_slice() else {
                return Err(Error::Parse(format!("bad edge line `{line}`")));
            };
            edges.push((parse_num::<usize>(c)?, parse_num::<usize>(p)?, parse_num::<f64>(w)?));
        }
        // parent lines may come in any order
        let mut pending = edges;
        let mut tree = RootedTree::new(root)?;
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for (c, p, w) in pending {
                if tree.contains(p) {
                    tree.attach(c, p, w)?;
                } else {
                    rest.push((c, p, w));
                }
            }
            if rest.len() == before {
                return Err(Error::Parse("edges do not hang from the root".into()));
            }
            pending = rest;
        }
        Ok(tree)
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("cannot parse `{s}`")))
}
