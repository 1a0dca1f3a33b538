//! Spanning-subgraph sums over all `2^|E|` edge subsets. These are the
//! oracles the deletion–contraction routes are checked against.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{xy, TutteConfig, TutteError};
use crate::graph::{Multigraph, UnionFind};
use crate::polynomial::{BivarPoly, Labels};

/// Number of edge subsets `A` with each `(k(A), |A|)`, where `k(A)` counts
/// the components of the spanning subgraph `(V, A)`.
pub fn subset_statistics(
    g: &Multigraph,
    config: &TutteConfig,
) -> Result<BTreeMap<(u32, u32), u64>, TutteError> {
    config.check_subsets(g)?;
    let m = g.edge_count();
    let mut counts = BTreeMap::new();
    for mask in 0u64..(1u64 << m) {
        let mut uf = UnionFind::new(g.vertex_count());
        let mut k = g.vertex_count() as u32;
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            if mask >> i & 1 == 1 && uf.union(a, b) {
                k -= 1;
            }
        }
        *counts.entry((k, mask.count_ones())).or_insert(0u64) += 1;
    }
    Ok(counts)
}

fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for k in 1..=n {
        let next = &row[k as usize - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
        row.push(next);
    }
    row
}

/// `t(G;x,y) = sum_A (x-1)^(k(A)-k(G)) (y-1)^(|A|-|V|+k(A))`.
pub fn tutte_subgraph_expansion(g: &Multigraph) -> Result<BivarPoly, TutteError> {
    tutte_subgraph_expansion_with(g, &TutteConfig::default())
}

pub fn tutte_subgraph_expansion_with(
    g: &Multigraph,
    config: &TutteConfig,
) -> Result<BivarPoly, TutteError> {
    let stats = subset_statistics(g, config)?;
    let k_g = g.components() as u32;
    let n = g.vertex_count() as u32;
    let mut out = xy();
    for (&(k, size), &count) in &stats {
        let a = k - k_g;
        let b = size + k - n;
        let (ra, rb) = (binomial_row(a), binomial_row(b));
        // (x-1)^a (y-1)^b
        for (i, ca) in ra.iter().enumerate() {
            for (j, cb) in rb.iter().enumerate() {
                let sign = if (a as usize - i + b as usize - j).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                out.add_term(
                    i as u32,
                    j as u32,
                    ca * cb * BigInt::from(sign) * BigInt::from(count),
                );
            }
        }
    }
    Ok(out)
}

/// Tutte's dichromatic polynomial straight from its definition,
/// `sum_A u^k(A) v^(|A| - |V| + k(A))`, in variables `(u, v)`.
pub fn dichromatic_subset_sum(g: &Multigraph) -> Result<BivarPoly, TutteError> {
    let stats = subset_statistics(g, &TutteConfig::default())?;
    let n = g.vertex_count() as u32;
    Ok(BivarPoly::from_terms(
        BivarPoly::zero_in("u", "v").vars().clone(),
        stats
            .into_iter()
            .map(|((k, size), c)| ((k, size + k - n), BigInt::from(c))),
    ))
}

/// The Fortuin–Kasteleyn subset sum `sum_A u^k(A) v^|A|` in the given variables.
pub fn fk_subset_sum(g: &Multigraph, labels: Labels) -> Result<BivarPoly, TutteError> {
    let stats = subset_statistics(g, &TutteConfig::default())?;
    Ok(BivarPoly::from_terms(
        labels,
        stats
            .into_iter()
            .map(|((k, size), c)| ((k, size), BigInt::from(c))),
    ))
}
