//! Isomorphism keys for memoization.
//!
//! Up to the vertex bound the key is an exact canonical certificate found by
//! colour refinement plus an exhaustive individualisation search (pruned only
//! by twin vertices, whose transposition is an automorphism). Above the bound
//! the key is an isomorphism-invariant hash of the stable refined colouring,
//! and equal keys must be confirmed by the caller.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use super::Multigraph;

pub const DEFAULT_CANON_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CanonicalKey {
    /// Canonical certificate; equal iff the graphs are isomorphic.
    Exact(Vec<u32>),
    /// Invariant hash; unequal keys imply non-isomorphic graphs, equal keys prove nothing.
    Invariant(u64),
}

impl CanonicalKey {
    pub fn is_exact(&self) -> bool {
        matches!(self, CanonicalKey::Exact(_))
    }
}

pub fn canonical_key(g: &Multigraph) -> CanonicalKey {
    canonical_key_with_bound(g, DEFAULT_CANON_BOUND)
}

pub fn canonical_key_with_bound(g: &Multigraph, bound: usize) -> CanonicalKey {
    let m = g.multiplicity_matrix();
    if g.vertex_count() <= bound {
        CanonicalKey::Exact(certificate(&m))
    } else {
        let mut colors = initial_colors(&m);
        refine(&m, &mut colors);
        let mut h = DefaultHasher::new();
        invariant_signature(&m, &colors).hash(&mut h);
        CanonicalKey::Invariant(h.finish())
    }
}

/// Relabels vertices by stable refined colour (ties by original index) and
/// sorts the edge list. Equal normal forms imply isomorphism.
pub(crate) fn normal_form(g: &Multigraph) -> Multigraph {
    let m = g.multiplicity_matrix();
    let mut colors = initial_colors(&m);
    refine(&m, &mut colors);
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| (colors[v], v));
    let mut perm = vec![0; order.len()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (a, b) = (perm[a], perm[b]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    Multigraph {
        vertex_count: g.vertex_count(),
        edges,
    }
}

fn initial_colors(m: &[Vec<u32>]) -> Vec<u32> {
    let sigs: Vec<(u32, u32)> = (0..m.len())
        .map(|v| (m[v][v], m[v].iter().sum::<u32>()))
        .collect();
    rank_by(&sigs)
}

fn rank_by<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).expect("present") as u32)
        .collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Refines to the coarsest equitable colouring finer than `colors`.
/// New colours are ranks of signatures that lead with the old colour, so the
/// relative order of old cells is preserved.
fn refine(m: &[Vec<u32>], colors: &mut Vec<u32>) {
    let n = m.len();
    let mut cells = distinct(colors);
    loop {
        let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u32)> = (0..n)
                    .filter(|&w| w != v && m[v][w] > 0)
                    .map(|w| (colors[w], m[v][w]))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank_by(&sigs);
        let next_cells = distinct(&next);
        *colors = next;
        if next_cells == cells {
            return;
        }
        cells = next_cells;
    }
}

fn invariant_signature(m: &[Vec<u32>], colors: &[u32]) -> (usize, Vec<u32>, Vec<(u32, u32, u32)>) {
    let n = m.len();
    let mut vertex_colors = colors.to_vec();
    vertex_colors.sort_unstable();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a..n {
            if m[a][b] > 0 {
                let (x, y) = (colors[a].min(colors[b]), colors[a].max(colors[b]));
                edges.push((x, y, m[a][b]));
            }
        }
    }
    edges.sort_unstable();
    (n, vertex_colors, edges)
}

fn certificate(m: &[Vec<u32>]) -> Vec<u32> {
    let mut colors = initial_colors(m);
    let mut best: Option<Vec<u32>> = None;
    search(m, &mut colors, &mut best);
    best.unwrap_or_else(|| vec![0])
}

fn search(m: &[Vec<u32>], colors: &mut Vec<u32>, best: &mut Option<Vec<u32>>) {
    let n = m.len();
    refine(m, colors);
    if distinct(colors) == n {
        let mut at = vec![0usize; n];
        for (v, &c) in colors.iter().enumerate() {
            at[c as usize] = v;
        }
        let mut cert = Vec::with_capacity(1 + n * (n + 1) / 2);
        cert.push(n as u32);
        for i in 0..n {
            for j in i..n {
                cert.push(m[at[i]][at[j]]);
            }
        }
        if best.as_ref().is_none_or(|b| cert < *b) {
            *best = Some(cert);
        }
        return;
    }
    // First non-singleton cell in colour order.
    let mut counts = vec![0usize; n];
    for &c in colors.iter() {
        counts[c as usize] += 1;
    }
    let target = counts.iter().position(|&k| k > 1).expect("non-discrete") as u32;
    let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cell {
        if tried.iter().any(|&u| twins(m, u, v)) {
            continue;
        }
        tried.push(v);
        let mut branch: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(x, &c)| 2 * c + u32::from(c == target && x != v))
            .collect();
        search(m, &mut branch, best);
    }
}

fn twins(m: &[Vec<u32>], u: usize, v: usize) -> bool {
    m[u][u] == m[v][v] && (0..m.len()).all(|w| w == u || w == v || m[u][w] == m[v][w])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, GraphKind};

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
        if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
            return false;
        }
        let mb = b.multiplicity_matrix();
        permutations(a.vertex_count())
            .into_iter()
            .any(|p| a.relabel(&p).multiplicity_matrix() == mb)
    }

    #[test]
    fn relabelled_cycle_has_equal_key() {
        let c4 = GraphKind::Cycle(4).build().unwrap();
        let other = c4.relabel(&[2, 0, 3, 1]);
        assert_eq!(canonical_key(&c4), canonical_key(&other));
        let p4 = GraphKind::Path(4).build().unwrap();
        assert_ne!(canonical_key(&c4), canonical_key(&p4));
    }

    #[test]
    fn grid_labelings_agree_with_brute_force() {
        let g = GraphKind::grid(2, 3, Boundary::Free).build().unwrap();
        let h = g.relabel(&[4, 1, 5, 0, 3, 2]);
        assert!(brute_isomorphic(&g, &h));
        assert_eq!(canonical_key(&g), canonical_key(&h));
        // Same degree sequence as the 2x3 grid but not isomorphic to it.
        let c6_chord = Multigraph::new(
            6,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 2)],
        )
        .unwrap();
        assert!(!brute_isomorphic(&g, &c6_chord));
        assert_ne!(canonical_key(&g), canonical_key(&c6_chord));
    }

    #[test]
    fn key_equality_matches_brute_force_on_small_multigraphs() {
        // Every multigraph on 4 vertices with 4 edges drawn from a fixed pool.
        let pool = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 1), (0, 1)];
        let mut graphs = Vec::new();
        for mask in 0u32..(1 << pool.len()) {
            if mask.count_ones() == 4 {
                let edges = (0..pool.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| pool[i])
                    .collect();
                graphs.push(Multigraph::new(4, edges).unwrap());
            }
        }
        for a in &graphs {
            for b in &graphs {
                assert_eq!(
                    canonical_key(a) == canonical_key(b),
                    brute_isomorphic(a, b),
                    "{a:?} vs {b:?}"
                );
            }
        }
    }

    #[test]
    fn symmetric_graphs_finish_quickly() {
        let k12 = GraphKind::Complete(12).build().unwrap();
        assert!(canonical_key(&k12).is_exact());
        let t = GraphKind::grid(3, 4, Boundary::Torus).build().unwrap();
        let relabeled = t.relabel(&[11, 3, 7, 0, 1, 9, 2, 10, 4, 8, 6, 5]);
        assert_eq!(canonical_key(&t), canonical_key(&relabeled));
    }

    #[test]
    fn above_bound_key_is_invariant_hash() {
        let t = GraphKind::grid(4, 4, Boundary::Torus).build().unwrap();
        let perm: Vec<usize> = (0..16).map(|v| (v * 5 + 3) % 16).collect();
        let k = canonical_key(&t);
        assert!(!k.is_exact());
        assert_eq!(k, canonical_key(&t.relabel(&perm)));
    }
}
