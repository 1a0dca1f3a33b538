//! Tutte, dichromatic and chromatic polynomials.
//!
//! Two independent routes compute the Tutte polynomial: memoized
//! deletion–contraction ([`tutte`]) and the spanning-subgraph sum
//! ([`tutte_subgraph_expansion`]). The chromatic polynomial likewise has a
//! direct recursion and a Tutte specialization.

mod chromatic;
pub(crate) mod engine;
mod expansion;
mod universal;

pub use chromatic::{chromatic, chromatic_via_tutte, chromatic_with};
pub use expansion::{
    dichromatic_subset_sum, fk_subset_sum, subset_statistics, tutte_subgraph_expansion,
    tutte_subgraph_expansion_with,
};
pub use universal::{dc_invariant_eval, dc_invariant_recursive, DcInvariantSpec};

use num_bigint::BigInt;
use thiserror::Error;

use crate::graph::{Multigraph, DEFAULT_CANON_BOUND};
use crate::polynomial::{BivarPoly, Var};
use engine::{DcAlgebra, Engine, EngineOptions};

pub const DEFAULT_MAX_EDGES: usize = 64;
pub const DEFAULT_MAX_SUBSET_EDGES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TutteError {
    #[error("graph has {edges} edges, above the limit of {limit}")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("subset enumeration over {edges} edges exceeds the bound of {limit}")]
    SubsetBound { edges: usize, limit: usize },
    #[error("invalid invariant spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TutteConfig {
    /// Deletion–contraction refuses graphs with more edges than this.
    pub max_edges: usize,
    /// Subset expansions refuse graphs with more edges than this.
    pub max_subset_edges: usize,
    pub memoize: bool,
    /// Vertex bound for exact canonical memo keys.
    pub canon_bound: usize,
}

impl Default for TutteConfig {
    fn default() -> Self {
        Self {
            max_edges: DEFAULT_MAX_EDGES,
            max_subset_edges: DEFAULT_MAX_SUBSET_EDGES,
            memoize: true,
            canon_bound: DEFAULT_CANON_BOUND,
        }
    }
}

impl TutteConfig {
    pub(crate) fn check_edges(&self, g: &Multigraph) -> Result<(), TutteError> {
        if g.edge_count() > self.max_edges {
            Err(TutteError::TooManyEdges {
                edges: g.edge_count(),
                limit: self.max_edges,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_subsets(&self, g: &Multigraph) -> Result<(), TutteError> {
        if g.edge_count() > self.max_subset_edges {
            Err(TutteError::SubsetBound {
                edges: g.edge_count(),
                limit: self.max_subset_edges,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn engine_options(&self) -> EngineOptions {
        EngineOptions {
            memoize: self.memoize,
            canon_bound: self.canon_bound,
        }
    }
}

pub(crate) fn xy() -> BivarPoly {
    BivarPoly::zero_in("x", "y")
}

struct TutteAlgebra {
    zero: BivarPoly,
}

impl DcAlgebra for TutteAlgebra {
    type Value = BivarPoly;

    fn one(&self) -> BivarPoly {
        BivarPoly::one(self.zero.vars().clone())
    }

    fn bridge(&self, _: usize) -> BivarPoly {
        BivarPoly::variable(self.zero.vars().clone(), Var::First)
    }

    fn loop_value(&self, _: usize) -> BivarPoly {
        BivarPoly::variable(self.zero.vars().clone(), Var::Second)
    }

    fn combine(&self, _: usize, mut deleted: BivarPoly, contracted: BivarPoly) -> BivarPoly {
        deleted.add_assign_unchecked(&contracted);
        deleted
    }

    fn mul(&self, a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
        a.mul_unchecked(b)
    }
}

/// `t(G; x, y)` by memoized deletion–contraction.
pub fn tutte(g: &Multigraph) -> Result<BivarPoly, TutteError> {
    tutte_with(g, &TutteConfig::default())
}

pub fn tutte_with(g: &Multigraph, config: &TutteConfig) -> Result<BivarPoly, TutteError> {
    config.check_edges(g)?;
    let alg = TutteAlgebra { zero: xy() };
    Ok(Engine::new(&alg, config.engine_options()).evaluate(g))
}

/// Plain deletion–contraction with no reductions or caching. At every step
/// the pivot is the surviving edge that comes first in `priority` among those
/// that are neither loops nor bridges; `priority` is a permutation of edge
/// indices.
pub fn tutte_with_edge_order(g: &Multigraph, priority: &[usize]) -> Result<BivarPoly, TutteError> {
    assert_eq!(
        priority.len(),
        g.edge_count(),
        "priority must rank every edge"
    );
    TutteConfig::default().check_edges(g)?;
    let mut rank = vec![0usize; g.edge_count()];
    for (pos, &e) in priority.iter().enumerate() {
        rank[e] = pos;
    }
    Ok(plain_recursion(g, &rank))
}

fn plain_recursion(g: &Multigraph, rank: &[usize]) -> BivarPoly {
    let bridges = g.bridges();
    let pivot = (0..g.edge_count())
        .filter(|&e| !bridges[e] && !g.is_loop(e).expect("valid edge"))
        .min_by_key(|&e| rank[e]);
    match pivot {
        None => {
            let loops = (0..g.edge_count())
                .filter(|&e| g.is_loop(e).expect("valid edge"))
                .count() as u32;
            let isthmuses = g.edge_count() as u32 - loops;
            BivarPoly::monomial(xy().vars().clone(), isthmuses, loops, 1)
        }
        Some(e) => {
            let mut rest = rank.to_vec();
            rest.remove(e);
            let deleted = plain_recursion(&g.delete_edge(e).expect("valid edge"), &rest);
            let contracted = plain_recursion(&g.contract_edge(e).expect("non-loop"), &rest);
            &deleted + &contracted
        }
    }
}

/// Tutte's dichromatic polynomial `Z(G; u, v) = sum_A u^k(A) v^(|A| - |V| + k(A))`,
/// obtained from the Tutte polynomial as `u^k(G) t(G; u + 1, v + 1)`.
pub fn dichromatic(g: &Multigraph) -> Result<BivarPoly, TutteError> {
    let t = tutte(g)?;
    let x_shift = &BivarPoly::variable(xy().vars().clone(), Var::First)
        + &BivarPoly::one(xy().vars().clone());
    let y_shift = &BivarPoly::variable(xy().vars().clone(), Var::Second)
        + &BivarPoly::one(xy().vars().clone());
    let shifted = t
        .substitute(Var::First, &x_shift)
        .and_then(|p| p.substitute(Var::Second, &y_shift))
        .expect("same labels");
    Ok(shifted
        .shift(g.components() as u32, 0)
        .relabel(BivarPoly::zero_in("u", "v").vars().clone()))
}

/// The prefactor conversion `u^k(G) v^(|V| - k(G)) t(G; (u + v)/v, v + 1)`,
/// expanded with denominators cleared. The result is the
/// Fortuin–Kasteleyn sum `sum_A u^k(A) v^|A|`, returned in variables `labels`.
pub fn tutte_to_fk(t: &BivarPoly, g: &Multigraph, labels: crate::polynomial::Labels) -> BivarPoly {
    let k = g.components() as u32;
    let rank = (g.vertex_count() as u32) - k;
    let u_plus_v = BivarPoly::from_terms(
        labels.clone(),
        [((1, 0), BigInt::from(1)), ((0, 1), BigInt::from(1))],
    );
    let v_plus_one = BivarPoly::from_terms(
        labels.clone(),
        [((0, 1), BigInt::from(1)), ((0, 0), BigInt::from(1))],
    );
    let max_i = t.degree(Var::First).unwrap_or(0);
    let max_j = t.degree(Var::Second).unwrap_or(0);
    let u_powers: Vec<BivarPoly> = (0..=max_i).map(|i| u_plus_v.pow(i)).collect();
    let v_powers: Vec<BivarPoly> = (0..=max_j).map(|j| v_plus_one.pow(j)).collect();
    let mut out = BivarPoly::zero(labels);
    for ((i, j), c) in t.terms() {
        assert!(i <= rank, "Tutte x-degree exceeds the rank");
        let term = u_powers[i as usize]
            .mul_unchecked(&v_powers[j as usize])
            .shift(k, rank - i)
            .scale(c);
        out.add_assign_unchecked(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, GraphKind};

    fn poly(terms: &[((u32, u32), i64)]) -> BivarPoly {
        BivarPoly::from_terms(
            xy().vars().clone(),
            terms.iter().map(|&(e, c)| (e, BigInt::from(c))),
        )
    }

    #[test]
    fn cycle_four() {
        let c4 = GraphKind::Cycle(4).build().unwrap();
        let expected = poly(&[((3, 0), 1), ((2, 0), 1), ((1, 0), 1), ((0, 1), 1)]);
        assert_eq!(tutte(&c4).unwrap(), expected);
        assert_eq!(tutte_with_edge_order(&c4, &[2, 0, 3, 1]).unwrap(), expected);
    }

    #[test]
    fn trees_loops_and_bundles() {
        let tree = GraphKind::Path(5).build().unwrap();
        assert_eq!(tutte(&tree).unwrap(), poly(&[((4, 0), 1)]));
        let loops = Multigraph::new(1, vec![(0, 0); 3]).unwrap();
        assert_eq!(tutte(&loops).unwrap(), poly(&[((0, 3), 1)]));
        let doubled = Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(tutte(&doubled).unwrap(), poly(&[((1, 0), 1), ((0, 1), 1)]));
        assert_eq!(
            tutte(&Multigraph::edgeless(4)).unwrap(),
            poly(&[((0, 0), 1)])
        );
    }

    #[test]
    fn memo_and_no_memo_agree() {
        let g = GraphKind::grid(3, 4, Boundary::Free).build().unwrap();
        let off = TutteConfig {
            memoize: false,
            ..TutteConfig::default()
        };
        assert_eq!(tutte(&g).unwrap(), tutte_with(&g, &off).unwrap());
    }

    #[test]
    fn edge_ceiling() {
        let g = GraphKind::Complete(12).build().unwrap();
        assert_eq!(
            tutte(&g).unwrap_err(),
            TutteError::TooManyEdges {
                edges: 66,
                limit: 64
            }
        );
    }

    #[test]
    fn spanning_trees_and_total_subsets() {
        let k4 = GraphKind::Complete(4).build().unwrap();
        let t = tutte(&k4).unwrap();
        assert_eq!(t.eval_real(1.0, 1.0), 16.0);
        assert_eq!(t.eval_real(2.0, 2.0), 64.0);
    }

    #[test]
    fn dichromatic_small_cases() {
        let uv = |terms: &[((u32, u32), i64)]| {
            BivarPoly::from_terms(
                BivarPoly::zero_in("u", "v").vars().clone(),
                terms.iter().map(|&(e, c)| (e, BigInt::from(c))),
            )
        };
        assert_eq!(
            dichromatic(&Multigraph::edgeless(1)).unwrap(),
            uv(&[((1, 0), 1)])
        );
        let k2 = GraphKind::Complete(2).build().unwrap();
        assert_eq!(dichromatic(&k2).unwrap(), uv(&[((2, 0), 1), ((1, 0), 1)]));
    }

    #[test]
    fn fk_conversion_of_cycle_four() {
        let c4 = GraphKind::Cycle(4).build().unwrap();
        let labels = BivarPoly::zero_in("u", "v").vars().clone();
        let converted = tutte_to_fk(&tutte(&c4).unwrap(), &c4, labels.clone());
        assert_eq!(converted, fk_subset_sum(&c4, labels).unwrap());
    }
}
