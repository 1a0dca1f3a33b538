//! Memoized deletion–contraction over any multiplicative invariant.
//!
//! An invariant is described by a [`DcAlgebra`]: its value on a bridge, on a
//! loop, how the values of `G - e` and `G / e` combine, and products for
//! disjoint unions and one-point joins. The engine factors out loops and
//! bridges, splits the rest into blocks and recurses on the lowest-index edge
//! of each block, treating that edge's whole parallel class at once.

use std::collections::HashMap;

use crate::graph::{canon, CanonicalKey, Multigraph, UnionFind};

pub(crate) trait DcAlgebra {
    type Value: Clone;

    fn one(&self) -> Self::Value;
    /// Value of a single bridge (two vertices, one edge).
    fn bridge(&self, edge: usize) -> Self::Value;
    /// Value of a single loop on one vertex.
    fn loop_value(&self, edge: usize) -> Self::Value;
    /// Value of `G` from the values of `G - e` and `G / e`.
    fn combine(&self, edge: usize, deleted: Self::Value, contracted: Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// Whether values ignore edge labels, which makes isomorphism memoization sound.
    fn label_free(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct EngineOptions {
    pub memoize: bool,
    pub canon_bound: usize,
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct EngineStats {
    pub blocks_expanded: u64,
    pub cache_hits: u64,
}

pub(crate) struct Engine<'a, A: DcAlgebra> {
    alg: &'a A,
    opts: EngineOptions,
    exact: HashMap<Vec<u32>, A::Value>,
    hashed: HashMap<u64, Vec<(Multigraph, A::Value)>>,
    pub stats: EngineStats,
}

impl<'a, A: DcAlgebra> Engine<'a, A> {
    pub fn new(alg: &'a A, opts: EngineOptions) -> Self {
        Self {
            alg,
            opts: EngineOptions {
                memoize: opts.memoize && alg.label_free(),
                ..opts
            },
            exact: HashMap::new(),
            hashed: HashMap::new(),
            stats: EngineStats::default(),
        }
    }

    /// Edge `i` of `g` carries the label `i`.
    pub fn evaluate(&mut self, g: &Multigraph) -> A::Value {
        let labels: Vec<usize> = (0..g.edge_count()).collect();
        self.eval(g, &labels)
    }

    fn eval(&mut self, g: &Multigraph, labels: &[usize]) -> A::Value {
        let mut acc = self.alg.one();
        let mut kept = Vec::with_capacity(g.edge_count());
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            if a == b {
                acc = self.alg.mul(&acc, &self.alg.loop_value(labels[i]));
            } else {
                kept.push(i);
            }
        }
        let (g, labels) = sub_edges(g, labels, &kept);

        let bridges = g.bridges();
        let mut uf = UnionFind::new(g.vertex_count());
        let mut rest = Vec::with_capacity(g.edge_count());
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            if bridges[i] {
                acc = self.alg.mul(&acc, &self.alg.bridge(labels[i]));
                uf.union(a, b);
            } else {
                rest.push(i);
            }
        }
        if rest.is_empty() {
            return acc;
        }
        // Contract every bridge; this cannot create loops or new parallels.
        let mut id = vec![usize::MAX; g.vertex_count()];
        let mut next = 0;
        for v in 0..g.vertex_count() {
            let r = uf.find(v);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
        }
        let edges = rest
            .iter()
            .map(|&i| {
                let (a, b) = g.edges()[i];
                (id[uf.find(a)], id[uf.find(b)])
            })
            .collect();
        let contracted = Multigraph::new(next, edges).expect("in range");
        let labels: Vec<usize> = rest.iter().map(|&i| labels[i]).collect();

        for block in blocks(&contracted) {
            let (bg, bl) = sub_edges(&contracted, &labels, &block);
            let value = self.eval_block(&bg, &bl);
            acc = self.alg.mul(&acc, &value);
        }
        acc
    }

    /// `g` is 2-connected with at least two edges and no loops.
    fn eval_block(&mut self, g: &Multigraph, labels: &[usize]) -> A::Value {
        let key = self
            .opts
            .memoize
            .then(|| canon::canonical_key_with_bound(g, self.opts.canon_bound));
        if let Some(key) = &key {
            if let Some(v) = self.lookup(key, g) {
                self.stats.cache_hits += 1;
                return v;
            }
        }
        self.stats.blocks_expanded += 1;

        let (u, v) = g.edges()[0];
        let class: Vec<usize> = (0..g.edge_count())
            .filter(|&i| {
                let (a, b) = g.edges()[i];
                (a, b) == (u, v) || (a, b) == (v, u)
            })
            .collect();
        let others: Vec<usize> = (0..g.edge_count()).filter(|i| !class.contains(i)).collect();

        // Keep vertex numbering so that u and v stay valid.
        let deleted = Multigraph::new(
            g.vertex_count(),
            others.iter().map(|&i| g.edges()[i]).collect(),
        )
        .expect("in range");
        let deleted_labels: Vec<usize> = others.iter().map(|&i| labels[i]).collect();
        let merged = merge_vertices(&deleted, u, v);
        let still_joined = {
            let mut uf = UnionFind::new(deleted.vertex_count());
            for &(a, b) in deleted.edges() {
                uf.union(a, b);
            }
            uf.find(u) == uf.find(v)
        };

        let contracted_value = self.eval(&merged, &deleted_labels);
        let first = labels[class[0]];
        let mut value = if still_joined {
            let deleted_value = self.eval(&deleted, &deleted_labels);
            self.alg
                .combine(first, deleted_value, contracted_value.clone())
        } else {
            self.alg.mul(&self.alg.bridge(first), &contracted_value)
        };
        // Adding the j-th parallel edge: contracting it turns the earlier
        // members of the class into loops.
        let mut loops = self.alg.one();
        for w in class.windows(2) {
            loops = self.alg.mul(&loops, &self.alg.loop_value(labels[w[0]]));
            let with_loops = self.alg.mul(&loops, &contracted_value);
            value = self.alg.combine(labels[w[1]], value, with_loops);
        }

        if let Some(key) = key {
            self.store(key, g, value.clone());
        }
        value
    }

    fn lookup(&self, key: &CanonicalKey, g: &Multigraph) -> Option<A::Value> {
        match key {
            CanonicalKey::Exact(cert) => self.exact.get(cert).cloned(),
            CanonicalKey::Invariant(h) => {
                let normal = canon::normal_form(g);
                self.hashed
                    .get(h)?
                    .iter()
                    .find(|(stored, _)| *stored == normal)
                    .map(|(_, v)| v.clone())
            }
        }
    }

    fn store(&mut self, key: CanonicalKey, g: &Multigraph, value: A::Value) {
        match key {
            CanonicalKey::Exact(cert) => {
                self.exact.insert(cert, value);
            }
            CanonicalKey::Invariant(h) => {
                self.hashed
                    .entry(h)
                    .or_default()
                    .push((canon::normal_form(g), value));
            }
        }
    }
}

/// Keeps the listed edges, drops vertices they do not touch, and numbers the
/// survivors by first appearance. Edge order follows `keep`.
fn sub_edges(g: &Multigraph, labels: &[usize], keep: &[usize]) -> (Multigraph, Vec<usize>) {
    let mut id = vec![usize::MAX; g.vertex_count()];
    let mut next = 0;
    let mut map = |x: usize| {
        if id[x] == usize::MAX {
            id[x] = next;
            next += 1;
        }
        id[x]
    };
    let edges: Vec<(usize, usize)> = keep
        .iter()
        .map(|&i| {
            let (a, b) = g.edges()[i];
            (map(a), map(b))
        })
        .collect();
    let out_labels = keep.iter().map(|&i| labels[i]).collect();
    (Multigraph::new(next, edges).expect("in range"), out_labels)
}

/// Identifies `u` and `v` (no edge between them is assumed).
fn merge_vertices(g: &Multigraph, u: usize, v: usize) -> Multigraph {
    let (keep, gone) = (u.min(v), u.max(v));
    let relabel = |x: usize| match x.cmp(&gone) {
        std::cmp::Ordering::Equal => keep,
        std::cmp::Ordering::Greater => x - 1,
        std::cmp::Ordering::Less => x,
    };
    let edges = g
        .edges()
        .iter()
        .map(|&(a, b)| (relabel(a), relabel(b)))
        .collect();
    Multigraph::new(g.vertex_count() - 1, edges).expect("in range")
}

/// Biconnected components as lists of edge indices (loop-free input).
pub(crate) fn blocks(g: &Multigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let adj = g.incidence();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut seen_edge = vec![false; g.edge_count()];
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(frame) = stack.last_mut() {
            let (v, via, pos) = *frame;
            if pos < adj[v].len() {
                frame.2 += 1;
                let (w, e) = adj[v][pos];
                if e == via || seen_edge[e] {
                    continue;
                }
                seen_edge[e] = true;
                edge_stack.push(e);
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == via {
                                break;
                            }
                        }
                        block.sort_unstable();
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;

    #[test]
    fn blocks_of_bowtie_and_bundle() {
        // Two triangles sharing vertex 2, plus a doubled edge hanging off vertex 4.
        let g = Multigraph::new(
            6,
            vec![
                (0, 1),
                (1, 2),
                (2, 0),
                (2, 3),
                (3, 4),
                (4, 2),
                (4, 5),
                (5, 4),
            ],
        )
        .unwrap();
        let mut b = blocks(&g);
        b.sort();
        assert_eq!(b, vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7]]);
        let c = GraphKind::Cycle(5).build().unwrap();
        assert_eq!(blocks(&c), vec![vec![0, 1, 2, 3, 4]]);
    }
}
