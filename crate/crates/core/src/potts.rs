//! Potts partition functions by three independent routes: brute-force state
//! sums, the `Z(G; q, v)` polynomial from deletion–contraction, and
//! evaluation of the Tutte polynomial. State probabilities and the
//! zero-temperature antiferromagnet (chromatic) limit build on these.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::Multigraph;
use crate::polynomial::{big_ln, BivarPoly};
use crate::tutte::engine::{DcAlgebra, Engine};
use crate::tutte::{self, TutteConfig, TutteError};

/// Boltzmann constant in J/K, for callers working in SI temperatures.
pub const BOLTZMANN_SI: f64 = 1.380649e-23;

/// Default ceiling on the number of states a brute-force sum may visit.
pub const DEFAULT_MAX_STATES: u64 = 1 << 31;

/// Below this `|v|` the factored Tutte form is replaced by `q^|V|`.
const V_ZERO_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PottsError {
    #[error("state has {got} spins but the graph has {expected} vertices")]
    StateLength { expected: usize, got: usize },
    #[error("spin {spin} at vertex {vertex} is not below q = {q}")]
    SpinOutOfRange { vertex: usize, spin: u32, q: u32 },
    #[error("{states} states exceed the brute-force bound of {limit}")]
    TooManyStates { states: f64, limit: u64 },
    #[error("{0} couplings given for a graph with {1} edges")]
    CouplingLength(usize, usize),
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Tutte(#[from] TutteError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Hamiltonian {
    /// `-J * #{edges with equal spins}`
    #[default]
    H1,
    /// `J * #{edges with unequal spins}`
    H2,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    Uniform(f64),
    PerEdge(Vec<f64>),
}

impl Coupling {
    pub fn on_edge(&self, e: usize) -> f64 {
        match self {
            Coupling::Uniform(j) => *j,
            Coupling::PerEdge(js) => js[e],
        }
    }

    fn total(&self, edges: usize) -> f64 {
        match self {
            Coupling::Uniform(j) => j * edges as f64,
            Coupling::PerEdge(js) => js.iter().sum(),
        }
    }
}

/// Model parameters. `beta = 1 / (kappa T)`; `beta = 0` is infinite temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct PottsParams {
    pub q: u32,
    pub coupling: Coupling,
    pub kappa: f64,
    pub beta: f64,
    pub hamiltonian: Hamiltonian,
}

impl PottsParams {
    /// Uniform coupling `j` at temperature `t`, with `kappa = 1`.
    pub fn from_temperature(q: u32, j: f64, t: f64) -> Result<Self, PottsError> {
        if !(t > 0.0) {
            return Err(PottsError::Invalid(format!(
                "temperature must be positive, got {t}"
            )));
        }
        Self::from_beta(q, j, 1.0 / t)
    }

    pub fn from_beta(q: u32, j: f64, beta: f64) -> Result<Self, PottsError> {
        if q < 1 {
            return Err(PottsError::Invalid("q must be at least 1".into()));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(PottsError::Invalid(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        Ok(Self {
            q,
            coupling: Coupling::Uniform(j),
            kappa: 1.0,
            beta,
            hamiltonian: Hamiltonian::H1,
        })
    }

    /// `J = 1` and `beta = K`.
    pub fn from_k(q: u32, k: f64) -> Result<Self, PottsError> {
        Self::from_beta(q, 1.0, k)
    }

    pub fn with_hamiltonian(mut self, h: Hamiltonian) -> Self {
        self.hamiltonian = h;
        self
    }

    /// Keeps the temperature `T` fixed while changing `kappa`.
    pub fn with_kappa(mut self, kappa: f64) -> Self {
        let t = self.temperature();
        self.kappa = kappa;
        self.beta = 1.0 / (kappa * t);
        self
    }

    pub fn with_couplings(mut self, couplings: Vec<f64>) -> Self {
        self.coupling = Coupling::PerEdge(couplings);
        self
    }

    pub fn temperature(&self) -> f64 {
        1.0 / (self.kappa * self.beta)
    }

    /// `K = J beta`, defined for uniform couplings only.
    pub fn k(&self) -> Option<f64> {
        match self.coupling {
            Coupling::Uniform(j) => Some(j * self.beta),
            Coupling::PerEdge(_) => None,
        }
    }

    /// `v = exp(K) - 1` for uniform couplings.
    pub fn v(&self) -> Option<f64> {
        self.k().map(f64::exp_m1)
    }

    /// `v_e = exp(beta J_e) - 1` for every edge.
    pub fn edge_vs(&self, edges: usize) -> Vec<f64> {
        (0..edges)
            .map(|e| (self.beta * self.coupling.on_edge(e)).exp_m1())
            .collect()
    }

    fn check_graph(&self, g: &Multigraph) -> Result<(), PottsError> {
        if let Coupling::PerEdge(js) = &self.coupling {
            if js.len() != g.edge_count() {
                return Err(PottsError::CouplingLength(js.len(), g.edge_count()));
            }
        }
        Ok(())
    }

    /// `ln(P2 / P1) = -beta * sum_e J_e`.
    fn log_hamiltonian_shift(&self, g: &Multigraph) -> f64 {
        match self.hamiltonian {
            Hamiltonian::H1 => 0.0,
            Hamiltonian::H2 => -self.beta * self.coupling.total(g.edge_count()),
        }
    }
}

/// One spin in `0..q` per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinState(pub Vec<u32>);

impl SpinState {
    pub fn uniform(n: usize, spin: u32) -> Self {
        SpinState(vec![spin; n])
    }

    pub fn validate(&self, g: &Multigraph, q: u32) -> Result<(), PottsError> {
        if self.0.len() != g.vertex_count() {
            return Err(PottsError::StateLength {
                expected: g.vertex_count(),
                got: self.0.len(),
            });
        }
        if let Some((vertex, &spin)) = self.0.iter().enumerate().find(|(_, &s)| s >= q) {
            return Err(PottsError::SpinOutOfRange { vertex, spin, q });
        }
        Ok(())
    }
}

/// Energy of a state. Loops always count as satisfied edges.
pub fn hamiltonian(
    g: &Multigraph,
    state: &SpinState,
    params: &PottsParams,
) -> Result<f64, PottsError> {
    params.check_graph(g)?;
    state.validate(g, params.q)?;
    Ok(energy_unchecked(g, &state.0, params))
}

fn energy_unchecked(g: &Multigraph, spins: &[u32], params: &PottsParams) -> f64 {
    let mut h = 0.0;
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let equal = spins[a] == spins[b];
        let j = params.coupling.on_edge(e);
        match (params.hamiltonian, equal) {
            (Hamiltonian::H1, true) => h -= j,
            (Hamiltonian::H2, false) => h += j,
            _ => {}
        }
    }
    h
}

fn state_count(g: &Multigraph, q: u32, limit: u64) -> Result<u64, PottsError> {
    let states = (q as f64).powi(g.vertex_count() as i32);
    if states > limit as f64 {
        return Err(PottsError::TooManyStates { states, limit });
    }
    Ok((q as u64).pow(g.vertex_count() as u32))
}

/// Calls `f` with every state in odometer order (vertex 0 fastest).
fn for_each_state(n: usize, q: u32, mut f: impl FnMut(&[u32])) {
    let mut spins = vec![0u32; n];
    loop {
        f(&spins);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            spins[i] += 1;
            if spins[i] < q {
                break;
            }
            spins[i] = 0;
            i += 1;
        }
    }
}

/// Sums in fixed-size chunks, then reduces the chunk sums pairwise, so the
/// result depends only on the order of the inputs.
struct PairwiseSum {
    chunk: f64,
    filled: usize,
    partials: Vec<f64>,
}

impl PairwiseSum {
    const CHUNK: usize = 256;

    fn new() -> Self {
        Self {
            chunk: 0.0,
            filled: 0,
            partials: Vec::new(),
        }
    }

    fn push(&mut self, x: f64) {
        self.chunk += x;
        self.filled += 1;
        if self.filled == Self::CHUNK {
            self.partials.push(self.chunk);
            self.chunk = 0.0;
            self.filled = 0;
        }
    }

    fn finish(mut self) -> f64 {
        if self.filled > 0 {
            self.partials.push(self.chunk);
        }
        let mut level = self.partials;
        while level.len() > 1 {
            level = level.chunks(2).map(|p| p.iter().sum()).collect();
        }
        level.first().copied().unwrap_or(0.0)
    }
}

/// `sum over states of exp(-beta h(state))`.
pub fn partition_bruteforce(g: &Multigraph, params: &PottsParams) -> Result<f64, PottsError> {
    partition_bruteforce_with(g, params, DEFAULT_MAX_STATES)
}

pub fn partition_bruteforce_with(
    g: &Multigraph,
    params: &PottsParams,
    max_states: u64,
) -> Result<f64, PottsError> {
    params.check_graph(g)?;
    state_count(g, params.q, max_states)?;
    let mut sum = PairwiseSum::new();
    for_each_state(g.vertex_count(), params.q, |s| {
        sum.push((-params.beta * energy_unchecked(g, s, params)).exp())
    });
    Ok(sum.finish())
}

/// `ln Z` by brute force, stable at low temperature.
pub fn log_partition_bruteforce(g: &Multigraph, params: &PottsParams) -> Result<f64, PottsError> {
    params.check_graph(g)?;
    state_count(g, params.q, DEFAULT_MAX_STATES)?;
    let n = g.vertex_count();
    let mut max = f64::NEG_INFINITY;
    for_each_state(n, params.q, |s| {
        max = max.max(-params.beta * energy_unchecked(g, s, params))
    });
    let mut sum = PairwiseSum::new();
    for_each_state(n, params.q, |s| {
        sum.push((-params.beta * energy_unchecked(g, s, params) - max).exp())
    });
    Ok(max + sum.finish().ln())
}

pub(crate) fn qv() -> BivarPoly {
    BivarPoly::zero_in("q", "v")
}

/// `q^(-k(G)) Z(G; q, v)`: multiplicative, with bridge value `q + v`, loop
/// value `1 + v` and `f(G) = f(G - e) + v f(G / e)`.
struct ReducedPartition;

impl DcAlgebra for ReducedPartition {
    type Value = BivarPoly;

    fn one(&self) -> BivarPoly {
        BivarPoly::one(qv().vars().clone())
    }

    fn bridge(&self, _: usize) -> BivarPoly {
        BivarPoly::from_terms(
            qv().vars().clone(),
            [((1, 0), BigInt::one()), ((0, 1), BigInt::one())],
        )
    }

    fn loop_value(&self, _: usize) -> BivarPoly {
        BivarPoly::from_terms(
            qv().vars().clone(),
            [((0, 0), BigInt::one()), ((0, 1), BigInt::one())],
        )
    }

    fn combine(&self, _: usize, mut deleted: BivarPoly, contracted: BivarPoly) -> BivarPoly {
        deleted.add_assign_unchecked(&contracted.shift(0, 1));
        deleted
    }

    fn mul(&self, a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
        a.mul_unchecked(b)
    }
}

/// `Z(G; q, v) = sum_A q^k(A) v^|A|` by deletion–contraction.
pub fn partition_polynomial(g: &Multigraph) -> Result<BivarPoly, PottsError> {
    partition_polynomial_with(g, &TutteConfig::default())
}

pub fn partition_polynomial_with(
    g: &Multigraph,
    config: &TutteConfig,
) -> Result<BivarPoly, PottsError> {
    config.check_edges(g)?;
    let reduced = Engine::new(&ReducedPartition, config.engine_options()).evaluate(g);
    Ok(reduced.shift(g.components() as u32, 0))
}

/// `Z(G; q, v)` from the subset sum; brute-force oracle.
pub fn partition_polynomial_subset_sum(g: &Multigraph) -> Result<BivarPoly, PottsError> {
    Ok(tutte::fk_subset_sum(g, qv().vars().clone())?)
}

/// `P1 = q^k v^(|V|-k) t(G; (q+v)/v, v+1)` at real `q` and `v`.
pub fn p1_via_tutte(t: &BivarPoly, g: &Multigraph, q: f64, v: f64) -> f64 {
    if v.abs() < V_ZERO_CUTOFF {
        return q.powi(g.vertex_count() as i32);
    }
    let k = g.components() as i32;
    let rank = g.vertex_count() as i32 - k;
    q.powi(k) * v.powi(rank) * t.eval_real((q + v) / v, v + 1.0)
}

/// Partition function through the Tutte polynomial, for uniform couplings.
pub fn partition_via_tutte(g: &Multigraph, params: &PottsParams) -> Result<f64, PottsError> {
    let v = params
        .v()
        .ok_or_else(|| PottsError::Invalid("Tutte route needs a uniform coupling".into()))?;
    let t = tutte::tutte(g)?;
    let p1 = p1_via_tutte(&t, g, params.q as f64, v);
    Ok(p1 * params.log_hamiltonian_shift(g).exp())
}

/// Partition function by evaluating `Z(G; q, v)`, for uniform couplings.
pub fn partition_from_polynomial(
    z: &BivarPoly,
    g: &Multigraph,
    params: &PottsParams,
) -> Result<f64, PottsError> {
    let v = params
        .v()
        .ok_or_else(|| PottsError::Invalid("polynomial route needs a uniform coupling".into()))?;
    Ok(z.eval_real(params.q as f64, v) * params.log_hamiltonian_shift(g).exp())
}

/// `ln P` from `Z(G; q, v)` at `v > 0`, where every term is positive; summed
/// in log space so that low temperatures do not overflow.
fn log_partition_polynomial(z: &BivarPoly, q: f64, v: f64) -> f64 {
    if v <= 0.0 {
        return z.eval_real(q, v).ln();
    }
    let logs: Vec<f64> = z
        .terms()
        .map(|((i, j), c)| big_ln(c) + i as f64 * q.ln() + j as f64 * v.ln())
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}

struct WeightedPartition<'w> {
    q: f64,
    v: &'w [f64],
}

impl DcAlgebra for WeightedPartition<'_> {
    type Value = f64;

    fn one(&self) -> f64 {
        1.0
    }

    fn bridge(&self, e: usize) -> f64 {
        self.q + self.v[e]
    }

    fn loop_value(&self, e: usize) -> f64 {
        1.0 + self.v[e]
    }

    fn combine(&self, e: usize, deleted: f64, contracted: f64) -> f64 {
        deleted + self.v[e] * contracted
    }

    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }

    fn label_free(&self) -> bool {
        false
    }
}

/// `Z(G; q, v) = sum_A q^k(A) prod_{e in A} v_e` by deletion–contraction.
pub fn partition_edge_weighted(g: &Multigraph, q: f64, weights: &[f64]) -> Result<f64, PottsError> {
    if weights.len() != g.edge_count() {
        return Err(PottsError::CouplingLength(weights.len(), g.edge_count()));
    }
    let config = TutteConfig::default();
    config.check_edges(g)?;
    let alg = WeightedPartition { q, v: weights };
    let reduced = Engine::new(&alg, config.engine_options()).evaluate(g);
    Ok(reduced * q.powi(g.components() as i32))
}

/// Same sum by enumerating all `2^|E|` subsets.
pub fn partition_edge_weighted_subsets(
    g: &Multigraph,
    q: f64,
    weights: &[f64],
) -> Result<f64, PottsError> {
    if weights.len() != g.edge_count() {
        return Err(PottsError::CouplingLength(weights.len(), g.edge_count()));
    }
    TutteConfig::default().check_subsets(g)?;
    let mut sum = PairwiseSum::new();
    for mask in 0u64..(1u64 << g.edge_count()) {
        let mut uf = crate::graph::UnionFind::new(g.vertex_count());
        let mut k = g.vertex_count() as i32;
        let mut product = 1.0;
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if mask >> e & 1 == 1 {
                product *= weights[e];
                if uf.union(a, b) {
                    k -= 1;
                }
            }
        }
        sum.push(q.powi(k) * product);
    }
    Ok(sum.finish())
}

/// `ln Z` for the given parameters: brute force when within the state
/// bound, otherwise the polynomial route.
pub fn log_partition(g: &Multigraph, params: &PottsParams) -> Result<f64, PottsError> {
    params.check_graph(g)?;
    if state_count(g, params.q, DEFAULT_MAX_STATES).is_ok() {
        return log_partition_bruteforce(g, params);
    }
    let v = params
        .v()
        .ok_or_else(|| PottsError::Invalid("large graphs need a uniform coupling".into()))?;
    let z = partition_polynomial(g)?;
    Ok(log_partition_polynomial(&z, params.q as f64, v) + params.log_hamiltonian_shift(g))
}

/// `Pr(state) = exp(-beta h(state)) / Z`.
pub fn state_probability(
    g: &Multigraph,
    state: &SpinState,
    params: &PottsParams,
) -> Result<f64, PottsError> {
    let h = hamiltonian(g, state, params)?;
    Ok((-params.beta * h - log_partition(g, params)?).exp())
}

/// Probabilities of every state, in odometer order (vertex 0 fastest).
pub fn state_distribution(g: &Multigraph, params: &PottsParams) -> Result<Vec<f64>, PottsError> {
    let log_z = log_partition_bruteforce(g, params)?;
    let mut out = Vec::new();
    for_each_state(g.vertex_count(), params.q, |s| {
        out.push((-params.beta * energy_unchecked(g, s, params) - log_z).exp())
    });
    Ok(out)
}

/// Exact values of the proper-colouring count by three routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChromaticReport {
    pub q: u32,
    /// `Z(G; q, -1)`
    pub partition_at_minus_one: BigInt,
    /// Direct chromatic recursion at `q`.
    pub chromatic: BigInt,
    /// `(-1)^(|V|-k) q^k t(G; 1 - q, 0)`
    pub via_tutte: BigInt,
}

impl ChromaticReport {
    pub fn consistent(&self) -> bool {
        self.partition_at_minus_one == self.chromatic && self.chromatic == self.via_tutte
    }
}

/// Zero-temperature antiferromagnet: `Z(G; q, -1)` counts proper colourings.
pub fn chromatic_consistency(g: &Multigraph, q: u32) -> Result<ChromaticReport, PottsError> {
    let qb = BigInt::from(q);
    let z = partition_polynomial(g)?;
    let partition_at_minus_one = z.eval_big(&qb, &BigInt::from(-1));
    let chromatic = tutte::chromatic(g)?.eval_big(&qb, &BigInt::zero());
    let t = tutte::tutte(g)?;
    let one_minus_q = BigInt::one() - &qb;
    let sign = if g.rank().is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let via_tutte = sign
        * num_traits::pow(qb.clone(), g.components())
        * t.eval_big(&one_minus_q, &BigInt::zero());
    Ok(ChromaticReport {
        q,
        partition_at_minus_one,
        chromatic,
        via_tutte,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, GraphKind};
    use crate::polynomial::Var;

    fn c4() -> Multigraph {
        GraphKind::Cycle(4).build().unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn hamiltonian_examples() {
        let g = c4();
        let p = PottsParams::from_temperature(2, 1.5, 1.0).unwrap();
        let mono = SpinState::uniform(4, 1);
        assert_eq!(hamiltonian(&g, &mono, &p).unwrap(), -1.5 * 4.0);
        let proper = SpinState(vec![0, 1, 0, 1]);
        assert_eq!(hamiltonian(&g, &proper, &p).unwrap(), 0.0);
        let p2 = p.clone().with_hamiltonian(Hamiltonian::H2);
        assert_eq!(hamiltonian(&g, &proper, &p2).unwrap(), 6.0);
    }

    #[test]
    fn hamiltonian_errors() {
        let g = c4();
        let p = PottsParams::from_k(2, 1.0).unwrap();
        assert!(matches!(
            hamiltonian(&g, &SpinState(vec![0; 3]), &p),
            Err(PottsError::StateLength { .. })
        ));
        assert!(matches!(
            hamiltonian(&g, &SpinState(vec![0, 2, 0, 0]), &p),
            Err(PottsError::SpinOutOfRange { vertex: 1, .. })
        ));
    }

    #[test]
    fn shift_between_hamiltonians_on_grid() {
        let g = GraphKind::grid(4, 4, Boundary::Free).build().unwrap();
        let p1 = PottsParams::from_temperature(3, 0.7, 1.0).unwrap();
        let p2 = p1.clone().with_hamiltonian(Hamiltonian::H2);
        let mut seed = 12345u64;
        for _ in 0..50 {
            let spins = (0..16)
                .map(|_| {
                    seed = seed
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    ((seed >> 33) % 3) as u32
                })
                .collect();
            let s = SpinState(spins);
            let diff = hamiltonian(&g, &s, &p2).unwrap() - hamiltonian(&g, &s, &p1).unwrap();
            assert!((diff - 0.7 * 24.0).abs() < 1e-12);
        }
    }

    #[test]
    fn brute_force_examples() {
        let k = 0.8;
        let p = PottsParams::from_k(2, k).unwrap();
        let expected = 12.0 * (2.0 * k).exp() + 2.0 * (4.0 * k).exp() + 2.0;
        assert!(rel(partition_bruteforce(&c4(), &p).unwrap(), expected) < 1e-14);
        let hot = PottsParams::from_k(3, 0.0).unwrap();
        assert_eq!(partition_bruteforce(&c4(), &hot).unwrap(), 81.0);
        let k2 = GraphKind::Complete(2).build().unwrap();
        let p3 = PottsParams::from_k(3, k).unwrap();
        assert!(rel(partition_bruteforce(&k2, &p3).unwrap(), 3.0 * k.exp() + 6.0) < 1e-14);
        assert!(matches!(
            partition_bruteforce_with(&c4(), &p3, 80),
            Err(PottsError::TooManyStates { .. })
        ));
    }

    #[test]
    fn polynomial_examples() {
        let single = partition_polynomial(&Multigraph::edgeless(1)).unwrap();
        assert_eq!(single.to_string(), "q");
        let k2 = GraphKind::Complete(2).build().unwrap();
        assert_eq!(partition_polynomial(&k2).unwrap().to_string(), "q^2 + q*v");
        let z = partition_polynomial(&c4()).unwrap();
        let coeffs: Vec<i64> = z
            .univariate(Var::First, &BigInt::from(2))
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect();
        // 12(v+1)^2 + 2(v+1)^4 + 2 expanded.
        assert_eq!(coeffs, vec![16, 32, 24, 8, 2]);
        assert_eq!(z, partition_polynomial_subset_sum(&c4()).unwrap());
    }

    #[test]
    fn tutte_route_examples() {
        let k: f64 = 0.37;
        let v = k.exp_m1();
        let t = tutte::tutte(&c4()).unwrap();
        let closed = 12.0 * (v + 1.0).powi(2) + 2.0 * (v + 1.0).powi(4) + 2.0;
        assert!(rel(p1_via_tutte(&t, &c4(), 2.0, v), closed) < 1e-13);
        let l = Multigraph::new(1, vec![(0, 0)]).unwrap();
        let tl = tutte::tutte(&l).unwrap();
        assert!(rel(p1_via_tutte(&tl, &l, 5.0, v), 5.0 * k.exp()) < 1e-14);
        let k2 = GraphKind::Complete(2).build().unwrap();
        let tk2 = tutte::tutte(&k2).unwrap();
        assert!(rel(p1_via_tutte(&tk2, &k2, 4.0, v), 4.0 * (k.exp() + 3.0)) < 1e-14);
        assert_eq!(p1_via_tutte(&t, &c4(), 3.0, 0.0), 81.0);
    }

    #[test]
    fn edge_weighted_examples() {
        let k2 = GraphKind::Complete(2).build().unwrap();
        assert_eq!(partition_edge_weighted(&k2, 2.0, &[3.0]).unwrap(), 10.0);
        assert_eq!(
            partition_edge_weighted_subsets(&k2, 2.0, &[3.0]).unwrap(),
            10.0
        );
        let z = partition_polynomial(&c4()).unwrap();
        let w = partition_edge_weighted(&c4(), 3.0, &[0.4; 4]).unwrap();
        assert!(rel(w, z.eval_real(3.0, 0.4)) < 1e-13);
    }

    #[test]
    fn weighted_matches_state_sum_with_edge_couplings() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3), (1, 1)]).unwrap();
        let js = vec![0.3, -0.7, 1.1, 0.5, -0.2];
        let p = PottsParams::from_beta(3, 1.0, 1.3)
            .unwrap()
            .with_couplings(js);
        let brute = partition_bruteforce(&g, &p).unwrap();
        let vs = p.edge_vs(5);
        assert!(rel(partition_edge_weighted(&g, 3.0, &vs).unwrap(), brute) < 1e-12);
        assert!(
            rel(
                partition_edge_weighted_subsets(&g, 3.0, &vs).unwrap(),
                brute
            ) < 1e-12
        );
    }

    #[test]
    fn all_black_probabilities() {
        let pr = |t: f64| {
            let p = PottsParams::from_temperature(2, 1.0, t).unwrap();
            state_probability(&c4(), &SpinState::uniform(4, 1), &p).unwrap()
        };
        assert!((pr(0.01) - 0.5).abs() < 1e-6);
        assert!((pr(1e5) - 0.0625).abs() < 1e-4);
        let k: f64 = 1.0 / 2.29;
        let closed = (4.0 * k).exp() / (12.0 * (2.0 * k).exp() + 2.0 * (4.0 * k).exp() + 2.0);
        assert!(rel(pr(2.29), closed) < 1e-12);
        assert!((closed - 0.136).abs() < 5e-4);
    }

    #[test]
    fn distribution_sums_to_one_and_ignores_hamiltonian_choice() {
        let g = GraphKind::grid(2, 3, Boundary::Free).build().unwrap();
        let p = PottsParams::from_temperature(3, -0.8, 0.9).unwrap();
        let d1 = state_distribution(&g, &p).unwrap();
        let d2 = state_distribution(&g, &p.clone().with_hamiltonian(Hamiltonian::H2)).unwrap();
        assert!((d1.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        for (a, b) in d1.iter().zip(&d2) {
            assert!(rel(*a, *b) < 1e-12);
        }
    }

    #[test]
    fn log_partition_routes_agree_when_large() {
        let g = GraphKind::grid(4, 4, Boundary::Torus).build().unwrap();
        let p = PottsParams::from_k(2, 0.6).unwrap();
        let brute = log_partition_bruteforce(&g, &p).unwrap();
        let z = partition_polynomial(&g).unwrap();
        assert!(rel(log_partition_polynomial(&z, 2.0, 0.6f64.exp_m1()), brute) < 1e-12);
    }

    #[test]
    fn chromatic_limit() {
        let k3 = GraphKind::Complete(3).build().unwrap();
        let r = chromatic_consistency(&k3, 3).unwrap();
        assert!(r.consistent());
        assert_eq!(r.chromatic, BigInt::from(6));
        let r = chromatic_consistency(&c4(), 3).unwrap();
        assert!(r.consistent());
        assert_eq!(r.chromatic, BigInt::from(18));
        let r = chromatic_consistency(&c4(), 1).unwrap();
        assert!(r.consistent());
        assert!(r.chromatic.is_zero());
    }
}
