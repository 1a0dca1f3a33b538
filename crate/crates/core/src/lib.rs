//! Exact Tutte, chromatic and Potts partition polynomials on multigraphs,
//! thermodynamics and complex zeros derived from them, and Monte Carlo
//! samplers checked against the exact results.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod graph;
pub mod montecarlo;
pub mod polynomial;
pub mod potts;
pub mod report;
pub mod thermo;
pub mod tutte;
pub mod zeros;
