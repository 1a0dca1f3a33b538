use std::collections::HashMap;

use num_bigint::BigInt;

use super::{tutte_with, xy, TutteConfig, TutteError};
use crate::graph::{canon, CanonicalKey, Multigraph};
use crate::polynomial::{BivarPoly, Var};

/// Chromatic polynomial `C(G; x)` by the direct recursion
/// `C(G) = C(G - e) - C(G / e)` with `C = x^n` on edgeless graphs.
/// Returned in variables `(x, y)` with no `y` terms.
pub fn chromatic(g: &Multigraph) -> Result<BivarPoly, TutteError> {
    chromatic_with(g, &TutteConfig::default())
}

pub fn chromatic_with(g: &Multigraph, config: &TutteConfig) -> Result<BivarPoly, TutteError> {
    config.check_edges(g)?;
    let mut rec = Recursion {
        memoize: config.memoize,
        bound: config.canon_bound,
        exact: HashMap::new(),
        hashed: HashMap::new(),
    };
    Ok(rec.run(g))
}

/// `C(G; x) = (-1)^(|V| - k) x^k t(G; 1 - x, 0)`.
pub fn chromatic_via_tutte(g: &Multigraph) -> Result<BivarPoly, TutteError> {
    chromatic_via_tutte_with(g, &TutteConfig::default())
}

pub(crate) fn chromatic_via_tutte_with(
    g: &Multigraph,
    config: &TutteConfig,
) -> Result<BivarPoly, TutteError> {
    let t = tutte_with(g, config)?;
    let vars = xy().vars().clone();
    let one_minus_x = BivarPoly::from_terms(
        vars.clone(),
        [((0, 0), BigInt::from(1)), ((1, 0), BigInt::from(-1))],
    );
    let specialised = t
        .substitute(Var::Second, &BivarPoly::zero(vars.clone()))
        .and_then(|p| p.substitute(Var::First, &one_minus_x))
        .expect("same labels");
    let sign = if g.rank().is_multiple_of(2) { 1 } else { -1 };
    Ok(specialised
        .shift(g.components() as u32, 0)
        .scale(&BigInt::from(sign)))
}

struct Recursion {
    memoize: bool,
    bound: usize,
    exact: HashMap<Vec<u32>, BivarPoly>,
    hashed: HashMap<u64, Vec<(Multigraph, BivarPoly)>>,
}

impl Recursion {
    fn run(&mut self, g: &Multigraph) -> BivarPoly {
        if g.edges().iter().any(|&(a, b)| a == b) {
            return xy();
        }
        let (core, x_power, leaves) = peel(&simplify(g));
        let factor = BivarPoly::from_terms(
            xy().vars().clone(),
            [((1, 0), BigInt::from(1)), ((0, 0), BigInt::from(-1))],
        )
        .pow(leaves)
        .shift(x_power, 0);
        if core.edge_count() == 0 {
            return factor;
        }
        let key = self
            .memoize
            .then(|| canon::canonical_key_with_bound(&core, self.bound));
        if let Some(hit) = key.as_ref().and_then(|k| self.lookup(k, &core)) {
            return hit.mul_unchecked(&factor);
        }
        let deleted = self.run(&core.delete_edge(0).expect("edge exists"));
        let contracted = self.run(&core.contract_edge(0).expect("no loops"));
        let value = &deleted - &contracted;
        if let Some(key) = key {
            self.store(key, &core, value.clone());
        }
        value.mul_unchecked(&factor)
    }

    fn lookup(&self, key: &CanonicalKey, g: &Multigraph) -> Option<BivarPoly> {
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

    fn store(&mut self, key: CanonicalKey, g: &Multigraph, value: BivarPoly) {
        match key {
            CanonicalKey::Exact(cert) => {
                self.exact.insert(cert, value);
            }
            CanonicalKey::Invariant(h) => self
                .hashed
                .entry(h)
                .or_default()
                .push((canon::normal_form(g), value)),
        }
    }
}

/// Parallel edges do not change proper colourings.
fn simplify(g: &Multigraph) -> Multigraph {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Multigraph::new(g.vertex_count(), edges).expect("in range")
}

/// Strips isolated vertices (factor `x`) and leaves (factor `x - 1`) until
/// every remaining vertex has degree at least two. Returns the core and the
/// two exponents. Input must be simple.
fn peel(g: &Multigraph) -> (Multigraph, u32, u32) {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut edge_alive = vec![true; g.edge_count()];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let adj = g.incidence();
    let (mut isolated, mut leaves) = (0u32, 0u32);
    let mut queue: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] || degree[v] > 1 {
            continue;
        }
        alive[v] = false;
        if degree[v] == 0 {
            isolated += 1;
            continue;
        }
        leaves += 1;
        for &(w, e) in &adj[v] {
            if edge_alive[e] {
                edge_alive[e] = false;
                degree[v] -= 1;
                degree[w] -= 1;
                if degree[w] <= 1 {
                    queue.push(w);
                }
            }
        }
    }
    let mut id = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if alive[v] {
            id[v] = next;
            next += 1;
        }
    }
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(e, _)| edge_alive[e])
        .map(|(_, &(a, b))| (id[a], id[b]))
        .collect();
    (
        Multigraph::new(next, edges).expect("in range"),
        isolated,
        leaves,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, GraphKind};

    fn colorings(g: &Multigraph, q: usize) -> u64 {
        let n = g.vertex_count();
        let mut state = vec![0usize; n];
        let mut count = 0;
        loop {
            if g.edges().iter().all(|&(a, b)| state[a] != state[b]) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return count;
                }
                state[i] += 1;
                if state[i] < q {
                    break;
                }
                state[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn triangle() {
        let k3 = GraphKind::Complete(3).build().unwrap();
        assert_eq!(chromatic(&k3).unwrap().to_string(), "x^3 - 3*x^2 + 2*x");
        assert_eq!(chromatic_via_tutte(&k3).unwrap(), chromatic(&k3).unwrap());
    }

    #[test]
    fn cycle_four_at_three() {
        let c4 = GraphKind::Cycle(4).build().unwrap();
        assert_eq!(colorings(&c4, 3), 18);
        assert_eq!(chromatic(&c4).unwrap().eval_real(3.0, 0.0), 18.0);
    }

    #[test]
    fn loops_forbid_colourings() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 1), (1, 2)]).unwrap();
        assert!(chromatic(&g).unwrap().is_zero());
        assert!(chromatic_via_tutte(&g).unwrap().is_zero());
    }

    #[test]
    fn counts_match_enumeration() {
        let graphs = [
            GraphKind::grid(2, 3, Boundary::Free).build().unwrap(),
            GraphKind::Complete(5).build().unwrap(),
            GraphKind::Path(4)
                .build()
                .unwrap()
                .disjoint_union(&Multigraph::edgeless(2)),
            Multigraph::new(4, vec![(0, 1), (0, 1), (1, 2), (2, 3), (3, 1), (0, 2)]).unwrap(),
        ];
        for g in &graphs {
            let c = chromatic(g).unwrap();
            assert_eq!(c, chromatic_via_tutte(g).unwrap());
            for q in 0..=4 {
                assert_eq!(
                    c.eval_real(q as f64, 0.0),
                    colorings(g, q) as f64,
                    "{g:?} q={q}"
                );
            }
        }
    }
}
