use super::greedy::cmp_keys;
use super::tree::{Root, RootedTree};
use crate::graph_model::EdgeWeights;

/// Exact minimum spanning tree of the complete graph by dense Prim, rooted
/// at vertex 0. `O(n^2)` key evaluations and `O(n)` memory.
pub fn prim_mst<W: EdgeWeights>(w: &W) -> RootedTree {
    let n = w.vertex_count();
    let mut tree = RootedTree::new(Root::Vertex(0)).expect("vertex root");
    if n <= 1 {
        return tree;
    }
    // out-of-tree vertices with their best key and parent, compacted in place
    let mut rest: Vec<(usize, W::Key, usize)> = (1..n).map(|v| (v, w.key(v, 0), 0)).collect();
    while !rest.is_empty() {
        let mut bi = 0;
        for i in 1..rest.len() {
            let c = cmp_keys(&rest[i].1, &rest[bi].1);
            if c.is_lt() || (c.is_eq() && rest[i].0 < rest[bi].0) {
                bi = i;
            }
        }
        let (v, key, p) = rest.swap_remove(bi);
        tree.attach(v, p, w.key_weight(key)).expect("fresh vertex");
        for e in rest.iter_mut() {
            if let Some(k) = w.key_if_below(e.0, v, &e.1) {
                e.1 = k;
                e.2 = v;
            }
        }
    }
    tree
}
