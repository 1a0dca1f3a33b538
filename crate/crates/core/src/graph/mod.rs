//! Multigraphs with the exact edge operations that deletion–contraction needs.
//!
//! Vertices are dense indices `0..vertex_count`. Edges are stored as an
//! ordered list of endpoint pairs; loops and parallel edges are kept as-is by
//! every operation, and edge order is stable so that positional edge indices
//! stay meaningful across deletion and contraction.

pub(crate) mod canon;
mod generate;
mod io;

pub use canon::{canonical_key, canonical_key_with_bound, CanonicalKey, DEFAULT_CANON_BOUND};
pub use generate::{Boundary, GraphKind};
pub use io::{parse_edge_list, serialize};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge index {index} out of range for graph with {edge_count} edges")]
    InvalidEdge { index: usize, edge_count: usize },
    #[error("endpoint {endpoint} out of range for graph with {vertex_count} vertices")]
    EndpointOutOfRange {
        endpoint: usize,
        vertex_count: usize,
    },
    #[error("cannot contract loop edge {0}")]
    ContractLoop(usize),
    #[error("invalid generator size: {0}")]
    InvalidSize(String),
    #[error("malformed edge list at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// An undirected multigraph. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for &(u, v) in &edges {
            for endpoint in [u, v] {
                if endpoint >= vertex_count {
                    return Err(GraphError::EndpointOutOfRange {
                        endpoint,
                        vertex_count,
                    });
                }
            }
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn edgeless(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Result<(usize, usize), GraphError> {
        self.edges
            .get(index)
            .copied()
            .ok_or(GraphError::InvalidEdge {
                index,
                edge_count: self.edges.len(),
            })
    }

    /// Number of connected components; isolated vertices count.
    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut count = self.vertex_count;
        for &(u, v) in &self.edges {
            if uf.union(u, v) {
                count -= 1;
            }
        }
        count
    }

    /// Component label per vertex, labels numbered in order of first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        let mut out = Vec::with_capacity(self.vertex_count);
        for v in 0..self.vertex_count {
            let root = uf.find(v);
            if label[root] == usize::MAX {
                label[root] = next;
                next += 1;
            }
            out.push(label[root]);
        }
        out
    }

    /// `|V| - k(G)`
    pub fn rank(&self) -> usize {
        self.vertex_count - self.components()
    }

    /// `|E| - |V| + k(G)`
    pub fn nullity(&self) -> usize {
        self.edges.len() - self.rank()
    }

    pub fn is_loop(&self, e: usize) -> Result<bool, GraphError> {
        let (u, v) = self.edge(e)?;
        Ok(u == v)
    }

    /// True iff deleting edge `e` increases the number of components.
    pub fn is_bridge(&self, e: usize) -> Result<bool, GraphError> {
        let (u, v) = self.edge(e)?;
        if u == v {
            return Ok(false);
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i != e {
                uf.union(a, b);
            }
        }
        Ok(uf.find(u) != uf.find(v))
    }

    /// Flags every bridge in one pass (Tarjan low-link, parallel-edge aware).
    pub fn bridges(&self) -> Vec<bool> {
        let n = self.vertex_count;
        let adj = self.incidence();
        let mut is_bridge = vec![false; self.edges.len()];
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        // (vertex, edge used to enter, next adjacency position)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push((root, usize::MAX, 0));
            while let Some(frame) = stack.last_mut() {
                let (v, via, pos) = *frame;
                if pos < adj[v].len() {
                    frame.2 += 1;
                    let (w, e) = adj[v][pos];
                    if e == via {
                        continue;
                    }
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
                        if low[v] > disc[parent] {
                            is_bridge[via] = true;
                        }
                    }
                }
            }
        }
        is_bridge
    }

    /// Per-vertex list of `(neighbour, edge index)`. A loop appears twice at its vertex.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// `G - e`: the edge is removed, its endpoints stay.
    pub fn delete_edge(&self, e: usize) -> Result<Multigraph, GraphError> {
        self.edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e);
        Ok(Multigraph {
            vertex_count: self.vertex_count,
            edges,
        })
    }

    /// `G / e`: removes `e` and merges its endpoints into the smaller index,
    /// compacting the vertex numbering. Edges parallel to `e` become loops.
    pub fn contract_edge(&self, e: usize) -> Result<Multigraph, GraphError> {
        let (u, v) = self.edge(e)?;
        if u == v {
            return Err(GraphError::ContractLoop(e));
        }
        let (keep, gone) = (u.min(v), u.max(v));
        let relabel = |x: usize| {
            if x == gone {
                keep
            } else if x > gone {
                x - 1
            } else {
                x
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &(a, b))| (relabel(a), relabel(b)))
            .collect();
        Ok(Multigraph {
            vertex_count: self.vertex_count - 1,
            edges,
        })
    }

    /// Disjoint union; vertices of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &Multigraph) -> Multigraph {
        let shift = self.vertex_count;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (a + shift, b + shift)));
        Multigraph {
            vertex_count: self.vertex_count + other.vertex_count,
            edges,
        }
    }

    /// Glues vertex `at_self` of `self` to vertex `at_other` of `other`.
    pub fn one_point_join(
        &self,
        at_self: usize,
        other: &Multigraph,
        at_other: usize,
    ) -> Result<Multigraph, GraphError> {
        for (v, n) in [(at_self, self.vertex_count), (at_other, other.vertex_count)] {
            if v >= n {
                return Err(GraphError::EndpointOutOfRange {
                    endpoint: v,
                    vertex_count: n,
                });
            }
        }
        let shift = self.vertex_count;
        let map = |x: usize| {
            if x == at_other {
                at_self
            } else if x > at_other {
                x - 1 + shift
            } else {
                x + shift
            }
        };
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (map(a), map(b))));
        Ok(Multigraph {
            vertex_count: self.vertex_count + other.vertex_count - 1,
            edges,
        })
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Multigraph {
        assert_eq!(perm.len(), self.vertex_count, "permutation length");
        Multigraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| (perm[a], perm[b]))
                .collect(),
        }
    }

    /// Reorders the edge list; `order[i]` is the old index of the new edge `i`.
    pub fn reorder_edges(&self, order: &[usize]) -> Multigraph {
        assert_eq!(order.len(), self.edges.len(), "edge order length");
        Multigraph {
            vertex_count: self.vertex_count,
            edges: order.iter().map(|&i| self.edges[i]).collect(),
        }
    }

    /// Symmetric multiplicity matrix, loops on the diagonal.
    pub(crate) fn multiplicity_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.vertex_count;
        let mut m = vec![vec![0u32; n]; n];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if two distinct sets were merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
