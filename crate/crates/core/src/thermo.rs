//! Exact thermodynamics of the Potts model on a finite graph.
//!
//! `Z(G; q, v)` at integer `q` is rewritten in `w = v + 1 = e^K` as
//! `sum_m N_m w^m`, where `N_m` counts states with `m` satisfied edges. The
//! derivatives `w^n d^n Z/dw^n` are then exact moments of `m`, and every sum
//! runs over nonnegative terms in log space, so no temperature overflows.
//!
//! With `Z_v = dZ/dv` and `dv/dbeta = J (v + 1)`:
//!
//! * `U = -Z_v J (v + 1) / Z = -J <m>`
//! * `C = -kappa beta^2 dU/dbeta = kappa beta^2 J^2 Var(m)`
//! * `S = kappa beta U + kappa ln Z`, `F = -kappa T ln Z`, `f = ln P1 / |V|`

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{GraphError, Multigraph};
use crate::polynomial::{big_ln, Var};
use crate::potts::{self, Coupling, Hamiltonian, PottsError, PottsParams};
use crate::report::format_g;
use crate::tutte::{self, TutteConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermoError {
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("temperature grid must be ascending")]
    UnsortedGrid,
    #[error("partition function is not positive at the evaluation point")]
    NonPositivePartition,
    #[error("thermodynamics needs a uniform coupling")]
    PerEdgeCoupling,
    #[error("the critical-temperature formula needs J > 0, got {0}")]
    NonFerromagnetic(f64),
    #[error("q must be at least 1, got {0}")]
    InvalidQ(f64),
    #[error(transparent)]
    Potts(#[from] PottsError),
    #[error(transparent)]
    Tutte(#[from] tutte::TutteError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    /// Temperature; infinite when `beta = 0`.
    pub t: f64,
    pub u: f64,
    pub c: f64,
    pub s: f64,
    pub f_free: f64,
    /// `ln P1 / |V|`
    pub f_reduced: f64,
}

/// Number of states with each count of satisfied edges, at a fixed `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergySpectrum {
    q: u32,
    vertices: usize,
    edges: usize,
    /// `counts[m]` states have exactly `m` satisfied edges.
    counts: Vec<BigInt>,
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for k in 1..=n {
        let next = &row[k - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
        row.push(next);
    }
    row
}

impl EnergySpectrum {
    pub fn new(g: &Multigraph, q: u32) -> Result<Self, ThermoError> {
        Self::with_config(g, q, &TutteConfig::default())
    }

    pub fn with_config(g: &Multigraph, q: u32, config: &TutteConfig) -> Result<Self, ThermoError> {
        let z = potts::partition_polynomial_with(g, config)?;
        // Coefficients of Z(q, v) in v, then re-expanded around v = -1.
        let a = z.univariate(Var::First, &BigInt::from(q));
        let mut counts = vec![BigInt::zero(); g.edge_count() + 1];
        for (j, aj) in a.iter().enumerate() {
            for (m, binom) in binomial_row(j).iter().enumerate() {
                let term = aj * binom;
                if (j - m) % 2 == 0 {
                    counts[m] += term;
                } else {
                    counts[m] -= term;
                }
            }
        }
        debug_assert!(counts.iter().all(|c| !c.is_negative()));
        Ok(Self {
            q,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            counts,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    /// `ln P1` and the mean and variance of the satisfied-edge count at `K`.
    fn moments(&self, k: f64) -> Result<(f64, f64, f64), ThermoError> {
        let logs: Vec<(f64, f64)> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_positive())
            .map(|(m, c)| (m as f64, big_ln(c) + k * m as f64))
            .collect();
        if logs.is_empty() {
            return Err(ThermoError::NonPositivePartition);
        }
        let max = logs
            .iter()
            .map(|&(_, l)| l)
            .fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<(f64, f64)> = logs.iter().map(|&(m, l)| (m, (l - max).exp())).collect();
        let total: f64 = weights.iter().map(|&(_, w)| w).sum();
        let mean = weights.iter().map(|&(m, w)| m * w).sum::<f64>() / total;
        let var = weights
            .iter()
            .map(|&(m, w)| (m - mean).powi(2) * w)
            .sum::<f64>()
            / total;
        Ok((max + total.ln(), mean, var))
    }

    /// `ln Z` for the given parameters.
    pub fn log_partition(&self, params: &PottsParams) -> Result<f64, ThermoError> {
        let j = uniform_j(params)?;
        let (log_p1, _, _) = self.moments(j * params.beta)?;
        Ok(log_p1 - self.shift(params, j))
    }

    fn shift(&self, params: &PottsParams, j: f64) -> f64 {
        match params.hamiltonian {
            Hamiltonian::H1 => 0.0,
            Hamiltonian::H2 => params.beta * j * self.edges as f64,
        }
    }

    /// Observables at `params`; `beta = 0` gives the infinite-temperature point.
    pub fn observables(&self, params: &PottsParams) -> Result<ThermoPoint, ThermoError> {
        let j = uniform_j(params)?;
        let beta = params.beta;
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(ThermoError::NonPositiveTemperature(params.temperature()));
        }
        let kappa = params.kappa;
        let (log_p1, mean, var) = self.moments(j * beta)?;
        let mut u = -j * mean;
        if params.hamiltonian == Hamiltonian::H2 {
            u += j * self.edges as f64;
        }
        let log_z = log_p1 - self.shift(params, j);
        let t = params.temperature();
        Ok(ThermoPoint {
            t,
            u,
            c: kappa * beta * beta * j * j * var,
            s: kappa * beta * u + kappa * log_z,
            f_free: -kappa * t * log_z,
            f_reduced: log_p1 / self.vertices as f64,
        })
    }
}

fn uniform_j(params: &PottsParams) -> Result<f64, ThermoError> {
    match params.coupling {
        Coupling::Uniform(j) => Ok(j),
        Coupling::PerEdge(_) => Err(ThermoError::PerEdgeCoupling),
    }
}

pub fn observables(g: &Multigraph, params: &PottsParams) -> Result<ThermoPoint, ThermoError> {
    EnergySpectrum::new(g, params.q)?.observables(params)
}

/// One point per temperature in `grid`, in grid order. `params` supplies
/// everything except the temperature.
pub fn temperature_sweep(
    g: &Multigraph,
    params: &PottsParams,
    grid: &[f64],
) -> Result<Vec<ThermoPoint>, ThermoError> {
    temperature_sweep_with(g, params, grid, &TutteConfig::default())
}

pub fn temperature_sweep_with(
    g: &Multigraph,
    params: &PottsParams,
    grid: &[f64],
    config: &TutteConfig,
) -> Result<Vec<ThermoPoint>, ThermoError> {
    if let Some(&bad) = grid.iter().find(|&&t| !(t > 0.0)) {
        return Err(ThermoError::NonPositiveTemperature(bad));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ThermoError::UnsortedGrid);
    }
    let spectrum = EnergySpectrum::with_config(g, params.q, config)?;
    grid.par_iter()
        .map(|&t| {
            let at = PottsParams {
                beta: 1.0 / (params.kappa * t),
                ..params.clone()
            };
            spectrum.observables(&at)
        })
        .collect()
}

/// `n` evenly spaced temperatures from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub const SWEEP_CSV_HEADER: &str = "T,U,C,S,F,f";

pub fn sweep_csv(points: &[ThermoPoint]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in points {
        let row = [p.t, p.u, p.c, p.s, p.f_free, p.f_reduced].map(format_g);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `T_c = J / (kappa ln(1 + sqrt q))`, the ferromagnetic square-lattice
/// transition temperature.
pub fn critical_temperature_reference(q: f64, j: f64, kappa: f64) -> Result<f64, ThermoError> {
    if !(q >= 1.0) {
        return Err(ThermoError::InvalidQ(q));
    }
    if !(j > 0.0) {
        return Err(ThermoError::NonFerromagnetic(j));
    }
    Ok(j / (kappa * (1.0 + q.sqrt()).ln()))
}

/// `ln W` for three-colourings of the square lattice, `W = (4/3)^(3/2)`.
pub fn square_lattice_three_colour_entropy() -> f64 {
    1.5 * (4.0f64 / 3.0).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyPoint {
    pub size: usize,
    pub vertices: usize,
    /// `C(G_n; q)`
    pub colourings: BigInt,
    /// `ln C / |V|`, or negative infinity when there are no colourings.
    pub entropy_per_vertex: f64,
}

/// `ln C(G_n; q) / |V(G_n)|` for each size in `sizes`.
pub fn ground_state_entropy_sequence<F>(
    family: F,
    q: u32,
    sizes: &[usize],
) -> Result<Vec<EntropyPoint>, ThermoError>
where
    F: Fn(usize) -> Result<Multigraph, GraphError>,
{
    sizes
        .iter()
        .map(|&size| {
            let g = family(size)?;
            let colourings = tutte::chromatic(&g)?.eval_big(&BigInt::from(q), &BigInt::zero());
            let entropy_per_vertex = if colourings.is_positive() {
                big_ln(&colourings) / g.vertex_count() as f64
            } else {
                f64::NEG_INFINITY
            };
            Ok(EntropyPoint {
                size,
                vertices: g.vertex_count(),
                colourings,
                entropy_per_vertex,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, GraphKind};
    use crate::potts::partition_bruteforce;

    fn c4() -> Multigraph {
        GraphKind::Cycle(4).build().unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs())
    }

    #[test]
    fn spectrum_of_cycle_four() {
        let s = EnergySpectrum::new(&c4(), 2).unwrap();
        let counts: Vec<i64> = s.counts().iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(counts, vec![2, 0, 12, 0, 2]);
    }

    #[test]
    fn spectrum_sums_to_all_states() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
        let s = EnergySpectrum::new(&g, 3).unwrap();
        let total: BigInt = s.counts().iter().sum();
        assert_eq!(total, BigInt::from(81));
        // The loop is always satisfied.
        assert!(s.counts()[0].is_zero());
    }

    #[test]
    fn log_partition_matches_state_sum() {
        let g = GraphKind::grid(2, 3, Boundary::Free).build().unwrap();
        for h in [Hamiltonian::H1, Hamiltonian::H2] {
            let p = PottsParams::from_temperature(3, -0.6, 0.8)
                .unwrap()
                .with_hamiltonian(h);
            let s = EnergySpectrum::new(&g, 3).unwrap();
            assert!(
                rel(
                    s.log_partition(&p).unwrap(),
                    partition_bruteforce(&g, &p).unwrap().ln()
                ) < 1e-12
            );
        }
    }

    #[test]
    fn energy_is_minus_derivative_of_log_z() {
        let p = PottsParams::from_temperature(2, 1.0, 1.0).unwrap();
        let s = EnergySpectrum::new(&c4(), 2).unwrap();
        let lnz = |beta: f64| s.log_partition(&PottsParams { beta, ..p.clone() }).unwrap();
        let h = 1e-4;
        let fd = -(lnz(1.0 + h) - lnz(1.0 - h)) / (2.0 * h);
        assert!(rel(s.observables(&p).unwrap().u, fd) < 1e-6);
    }

    #[test]
    fn infinite_temperature() {
        let g = GraphKind::grid(3, 3, Boundary::Free).build().unwrap();
        let p = PottsParams::from_beta(3, 1.0, 0.0).unwrap();
        let pt = observables(&g, &p).unwrap();
        assert!((pt.u + 12.0 / 3.0).abs() < 1e-12);
        assert!((pt.s / 9.0 - 3f64.ln()).abs() < 1e-12);
        assert_eq!(pt.c, 0.0);
        assert!((pt.f_reduced - 3f64.ln()).abs() < 1e-12);
        assert!(pt.t.is_infinite());
    }

    #[test]
    fn free_energy_identity_and_hamiltonian_shift() {
        let g = GraphKind::grid(3, 3, Boundary::Torus).build().unwrap();
        let s = EnergySpectrum::new(&g, 2).unwrap();
        let p1 = PottsParams::from_temperature(2, 1.0, 1.7)
            .unwrap()
            .with_kappa(2.0);
        let p2 = p1.clone().with_hamiltonian(Hamiltonian::H2);
        let a = s.observables(&p1).unwrap();
        let b = s.observables(&p2).unwrap();
        for pt in [a, b] {
            assert!(rel(pt.f_free, pt.u - pt.t * pt.s) < 1e-9);
        }
        assert!((b.u - a.u - 18.0).abs() < 1e-9);
        assert!(rel(a.c, b.c) < 1e-12);
        assert!(rel(a.s, b.s) < 1e-12);
    }

    #[test]
    fn low_temperature_does_not_overflow() {
        let g = GraphKind::grid(4, 4, Boundary::Torus).build().unwrap();
        let p = PottsParams::from_temperature(2, 1.0, 1e-3).unwrap();
        let pt = observables(&g, &p).unwrap();
        assert!((pt.u + 32.0).abs() < 1e-9);
        assert!(pt.c.abs() < 1e-9);
        assert!((pt.s - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn sweep_validation_and_csv() {
        let p = PottsParams::from_k(2, 1.0).unwrap();
        assert_eq!(
            temperature_sweep(&c4(), &p, &[1.0, 0.5]).unwrap_err(),
            ThermoError::UnsortedGrid
        );
        assert!(matches!(
            temperature_sweep(&c4(), &p, &[0.0, 1.0]),
            Err(ThermoError::NonPositiveTemperature(_))
        ));
        let pts = temperature_sweep(&c4(), &p, &[0.5, 1.0, 2.0]).unwrap();
        let csv = sweep_csv(&pts);
        assert!(csv.starts_with("T,U,C,S,F,f\n0.5,"));
        assert_eq!(csv.lines().count(), 4);
        assert!(!csv.contains('\r'));
        assert_eq!(
            csv,
            sweep_csv(&temperature_sweep(&c4(), &p, &[0.5, 1.0, 2.0]).unwrap())
        );
    }

    #[test]
    fn critical_temperatures() {
        let tc = critical_temperature_reference(2.0, 1.0, 1.0).unwrap();
        assert!((tc - 1.1346).abs() < 1e-4);
        let tc4 = critical_temperature_reference(4.0, 1.0, 1.0).unwrap();
        assert!((tc4 - 1.0 / 3f64.ln()).abs() < 1e-15);
        let tc1 = critical_temperature_reference(1.0, 1.0, 1.0).unwrap();
        assert!((tc1 - 1.0 / 2f64.ln()).abs() < 1e-15);
        assert!(critical_temperature_reference(2.0, 0.0, 1.0).is_err());
        assert!(critical_temperature_reference(2.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn entropy_sequence_small_grids() {
        let free = |n| GraphKind::grid(n, n, Boundary::Free).build();
        let seq = ground_state_entropy_sequence(free, 3, &[2]).unwrap();
        assert_eq!(seq[0].colourings, BigInt::from(18));
        assert!((seq[0].entropy_per_vertex - 18f64.ln() / 4.0).abs() < 1e-15);
        let none =
            ground_state_entropy_sequence(|n| GraphKind::Complete(n).build(), 3, &[4]).unwrap();
        assert_eq!(none[0].entropy_per_vertex, f64::NEG_INFINITY);
        assert!((square_lattice_three_colour_entropy() - 0.4315).abs() < 1e-4);
    }
}
