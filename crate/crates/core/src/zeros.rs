//! Complex zeros of chromatic and partition polynomials.
//!
//! Roots come from Ehrlich–Aberth simultaneous iteration started on a circle
//! whose radius is Cauchy's root bound, followed by guarded Newton polishing.
//! The start is fixed, so the output depends only on the coefficients.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::Multigraph;
use crate::polynomial::{big_to_f64, Var};
use crate::potts::{self, PottsError};
use crate::report::format_g;
use crate::tutte::{self, TutteConfig, TutteError};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 1000;
pub const DEFAULT_POLISH_STEPS: usize = 20;

/// Angular offset of the first starting point, in radians.
const START_ANGLE: f64 = 0.4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZerosError {
    #[error("the zero polynomial has no isolated roots{0}")]
    ZeroPolynomial(&'static str),
    #[error("a constant polynomial has no roots")]
    Constant,
    #[error("leading coefficient is zero")]
    LeadingZero,
    #[error("coefficients must be finite")]
    NonFinite,
    #[error("no convergence after {iterations} iterations; worst residual {worst:e}")]
    NoConvergence {
        iterations: usize,
        worst: f64,
        best: RootSet,
    },
    #[error(transparent)]
    Tutte(#[from] TutteError),
    #[error(transparent)]
    Potts(#[from] PottsError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Bound on `|p(z)| / sum_i |c_i| |z|^i` for every accepted root.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub polish_steps: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            polish_steps: DEFAULT_POLISH_STEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Ascending input coefficients, leading one nonzero.
    pub coefficients: Vec<Complex64>,
    pub roots: Vec<Complex64>,
    /// Scaled residual of each root.
    pub residuals: Vec<f64>,
    pub tolerance: f64,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Ascending coefficients of `c_n prod_i (x - r_i)`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        reconstruct(&self.coefficients, &self.roots)
    }

    /// Largest coefficient error of [`reconstruct`](Self::reconstruct),
    /// relative to the largest input coefficient.
    pub fn reconstruction_error(&self) -> f64 {
        reconstruction_error(&self.coefficients, &self.roots)
    }

    /// `re,im,residual` rows.
    pub fn csv(&self) -> String {
        let mut out = String::from("re,im,residual\n");
        for (r, res) in self.roots.iter().zip(&self.residuals) {
            out.push_str(&format!(
                "{},{},{}\n",
                format_g(r.re),
                format_g(r.im),
                format_g(*res)
            ));
        }
        out
    }
}

fn reconstruct(coeffs: &[Complex64], roots: &[Complex64]) -> Vec<Complex64> {
    let lead = *coeffs.last().expect("nonempty");
    // Descending while building.
    let mut out = vec![lead];
    for &r in roots {
        out.push(Complex64::zero());
        for k in (1..out.len()).rev() {
            let lower = out[k - 1];
            out[k] -= r * lower;
        }
    }
    out.reverse();
    out
}

fn reconstruction_error(coeffs: &[Complex64], roots: &[Complex64]) -> f64 {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    reconstruct(coeffs, roots)
        .iter()
        .zip(coeffs)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    let mut scale = 0.0;
    let r = z.norm();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        scale = scale * r + c.norm();
    }
    (p, dp, scale)
}

fn scaled_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (_, _, scale) = horner(coeffs, z);
    if scale == 0.0 {
        0.0
    } else {
        dd::eval(coeffs, z).norm() / scale
    }
}

/// Unique positive root of `|c_n| x^n = sum_{k<n} |c_k| x^k`; every root
/// of the polynomial lies in the disc of this radius.
fn cauchy_radius(coeffs: &[Complex64]) -> f64 {
    let n = coeffs.len() - 1;
    let mags: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
    let f = |x: f64| {
        let lower: f64 = mags[..n].iter().rev().fold(0.0, |acc, m| acc * x + m);
        mags[n] * x.powi(n as i32) - lower
    };
    // f < 0 below the root and > 0 above it.
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// All complex roots of `sum_i coeffs[i] x^i`.
pub fn find_roots(coeffs: &[Complex64]) -> Result<RootSet, ZerosError> {
    find_roots_with(coeffs, &RootOptions::default())
}

pub fn find_roots_real(coeffs: &[f64]) -> Result<RootSet, ZerosError> {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    find_roots(&c)
}

pub fn find_roots_with(coeffs: &[Complex64], opts: &RootOptions) -> Result<RootSet, ZerosError> {
    if coeffs
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        return Err(ZerosError::NonFinite);
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(ZerosError::ZeroPolynomial(""));
    }
    if coeffs.last().is_some_and(|c| c.is_zero()) {
        return Err(ZerosError::LeadingZero);
    }
    if coeffs.len() < 2 {
        return Err(ZerosError::Constant);
    }
    // Exact zero roots first.
    let zeros_at_origin = coeffs.iter().take_while(|c| c.is_zero()).count();
    let reduced = &coeffs[zeros_at_origin..];
    let mut roots = vec![Complex64::zero(); zeros_at_origin];
    let mut iterations = 0;
    if reduced.len() > 1 {
        // Integer inputs are split into square-free factors first, so that
        // repeated roots come out exactly repeated instead of as a cluster.
        let parts = match integer_coefficients(reduced) {
            Some(ints) => squarefree::decompose(&ints),
            None => vec![(reduced.to_vec(), 1)],
        };
        for (factor, multiplicity) in parts {
            if factor.len() < 2 {
                continue;
            }
            let (mut found, its) = aberth(&factor, opts);
            iterations = iterations.max(its);
            merge_clusters(&factor, &mut found, opts.tolerance);
            for r in found {
                roots.extend(std::iter::repeat_n(r, multiplicity));
            }
        }
    }
    let residuals: Vec<f64> = roots.iter().map(|&z| scaled_residual(coeffs, z)).collect();
    let set = RootSet {
        coefficients: coeffs.to_vec(),
        roots,
        residuals,
        tolerance: opts.tolerance,
    };
    let worst = set.max_residual();
    if worst < opts.tolerance {
        Ok(set)
    } else {
        Err(ZerosError::NoConvergence {
            iterations,
            worst,
            best: set,
        })
    }
}

/// Exact integer coefficients, when every input is a real integer below 2^53.
fn integer_coefficients(coeffs: &[Complex64]) -> Option<Vec<BigInt>> {
    const EXACT: f64 = 9_007_199_254_740_992.0;
    coeffs
        .iter()
        .map(|c| {
            (c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() < EXACT)
                .then(|| BigInt::from(c.re as i64))
        })
        .collect()
}

fn aberth(coeffs: &[Complex64], opts: &RootOptions) -> (Vec<Complex64>, usize) {
    let n = coeffs.len() - 1;
    if n == 1 {
        return (vec![-coeffs[0] / coeffs[1]], 0);
    }
    let radius = cauchy_radius(coeffs);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, START_ANGLE + 2.0 * PI * k as f64 / n as f64))
        .collect();
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < opts.max_iterations && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, scale) = horner(coeffs, z[i]);
            if p.norm() <= 4.0 * f64::EPSILON * scale {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let newton = p / dp;
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // Stationary point: nudge off it.
                let nudge = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += nudge;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 1e-15 * z[i].norm() {
                done[i] = true;
            }
        }
    }
    polish(coeffs, &mut z, opts.polish_steps);
    (z, iterations)
}

/// Relative cluster radii, tried in turn. A k-fold root spreads by about
/// `eps^(1/k)`, so higher multiplicities need the wider radii.
const CLUSTER_RADII: [f64; 6] = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1];

/// A k-fold root of a floating-point polynomial comes back as k points
/// spread by about `eps^(1/k)`, while their centroid is accurate. Each
/// cluster is replaced by copies of its centroid when that lowers the
/// reconstruction error and the centroid's residual stays within
/// `tolerance`; well-separated roots are never touched.
fn merge_clusters(coeffs: &[Complex64], roots: &mut [Complex64], tolerance: f64) {
    for radius in CLUSTER_RADII {
        merge_clusters_within(coeffs, roots, tolerance, radius);
    }
}

fn merge_clusters_within(
    coeffs: &[Complex64],
    roots: &mut [Complex64],
    tolerance: f64,
    radius: f64,
) {
    let n = roots.len();
    let mut cluster: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        c[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0 + roots[i].norm().max(roots[j].norm());
            if (roots[i] - roots[j]).norm() <= radius * scale {
                let (a, b) = (find(&mut cluster, i), find(&mut cluster, j));
                cluster[a.max(b)] = a.min(b);
            }
        }
    }
    let mut error = reconstruction_error(coeffs, roots);
    for head in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| find(&mut cluster, i) == head).collect();
        if members.len() < 2 {
            continue;
        }
        let mut centroid =
            members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
        // A k-fold root is a simple root of the (k-1)th derivative.
        let mut derivative = coeffs.to_vec();
        for _ in 1..members.len() {
            derivative = derivative
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect();
        }
        if derivative.len() >= 2 {
            for _ in 0..8 {
                let (p, dp, _) = horner(&derivative, centroid);
                if p.is_zero() || dp.is_zero() {
                    break;
                }
                let step = p / dp;
                if !(step.norm() < radius * (1.0 + centroid.norm())) {
                    break;
                }
                centroid -= step;
            }
        }
        if scaled_residual(coeffs, centroid) >= tolerance {
            continue;
        }
        let mut trial = roots.to_vec();
        for &i in &members {
            trial[i] = centroid;
        }
        let trial_error = reconstruction_error(coeffs, &trial);
        if trial_error < error {
            roots.copy_from_slice(&trial);
            error = trial_error;
        }
    }
}

/// Newton steps that only land if they lower the residual and stay closer
/// to the current point than half the distance to any other root. The
/// residual is evaluated in double-double precision, which is what lets
/// ill-conditioned roots settle to full `f64` accuracy.
fn polish(coeffs: &[Complex64], z: &mut [Complex64], steps: usize) {
    for i in 0..z.len() {
        let mut p = dd::eval(coeffs, z[i]);
        for _ in 0..steps {
            let (_, dp, _) = horner(coeffs, z[i]);
            if p.is_zero() || dp.is_zero() {
                break;
            }
            let step = p / dp;
            let separation = (0..z.len())
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).norm())
                .fold(f64::INFINITY, f64::min);
            let candidate = z[i] - step;
            let p_next = dd::eval(coeffs, candidate);
            if step.norm() >= 0.5 * separation || p_next.norm() >= p.norm() {
                break;
            }
            z[i] = candidate;
            p = p_next;
        }
    }
}

mod dd {
    //! Polynomial evaluation in double-double arithmetic.

    use num_complex::Complex64;

    #[derive(Clone, Copy)]
    struct Dd(f64, f64);

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    impl Dd {
        fn add(self, o: Dd) -> Dd {
            let (s, e) = two_sum(self.0, o.0);
            let (hi, lo) = two_sum(s, e + self.1 + o.1);
            Dd(hi, lo)
        }

        fn mul_f64(self, b: f64) -> Dd {
            let (p, e) = two_prod(self.0, b);
            let (hi, lo) = two_sum(p, e + self.1 * b);
            Dd(hi, lo)
        }

        fn neg(self) -> Dd {
            Dd(-self.0, -self.1)
        }
    }

    /// `sum_i coeffs[i] z^i`, rounded to `f64` only at the end.
    pub(super) fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
        let (mut re, mut im) = (Dd(0.0, 0.0), Dd(0.0, 0.0));
        for c in coeffs.iter().rev() {
            let new_re = re
                .mul_f64(z.re)
                .add(im.mul_f64(z.im).neg())
                .add(Dd(c.re, 0.0));
            let new_im = re.mul_f64(z.im).add(im.mul_f64(z.re)).add(Dd(c.im, 0.0));
            re = new_re;
            im = new_im;
        }
        Complex64::new(re.0 + re.1, im.0 + im.1)
    }
}

fn big_coeffs(c: &[BigInt]) -> Vec<Complex64> {
    c.iter()
        .map(|x| Complex64::new(big_to_f64(x), 0.0))
        .collect()
}

fn trimmed(mut c: Vec<Complex64>) -> Vec<Complex64> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

/// Zeros of `C(G; x)` in the complex `q`-plane.
pub fn chromatic_zeros(g: &Multigraph) -> Result<RootSet, ZerosError> {
    chromatic_zeros_with(g, &TutteConfig::default())
}

pub fn chromatic_zeros_with(g: &Multigraph, config: &TutteConfig) -> Result<RootSet, ZerosError> {
    let c = tutte::chromatic_with(g, config)?;
    if c.is_zero() {
        return Err(ZerosError::ZeroPolynomial(": the graph has a loop"));
    }
    find_roots(&big_coeffs(&c.univariate(Var::Second, &BigInt::zero())))
}

/// Zeros of `Z(G; q, v)` in `v` at fixed `q`.
pub fn partition_v_zeros(g: &Multigraph, q: Complex64) -> Result<RootSet, ZerosError> {
    partition_v_zeros_with(g, q, &TutteConfig::default())
}

pub fn partition_v_zeros_with(
    g: &Multigraph,
    q: Complex64,
    config: &TutteConfig,
) -> Result<RootSet, ZerosError> {
    let z = potts::partition_polynomial_with(g, config)?;
    find_roots(&trimmed(z.univariate_complex(Var::First, q)))
}

/// Zeros of `Z(G; q, v)` in `q` at fixed `v`.
pub fn partition_q_zeros(g: &Multigraph, v: Complex64) -> Result<RootSet, ZerosError> {
    partition_q_zeros_with(g, v, &TutteConfig::default())
}

pub fn partition_q_zeros_with(
    g: &Multigraph,
    v: Complex64,
    config: &TutteConfig,
) -> Result<RootSet, ZerosError> {
    let z = potts::partition_polynomial_with(g, config)?;
    find_roots(&trimmed(z.univariate_complex(Var::Second, v)))
}

/// Distance from each point to the nearer of the circles `|v| = sqrt 2`
/// and `|v + 2| = sqrt 2`, read in `v = e^K - 1`.
pub fn fisher_circle_distance(roots: &[Complex64]) -> Vec<f64> {
    let two = Complex64::new(2.0, 0.0);
    roots
        .iter()
        .map(|v| {
            (v.norm() - SQRT_2)
                .abs()
                .min(((v + two).norm() - SQRT_2).abs())
        })
        .collect()
}

/// Integers within `1e-8` of some root, each with whether the exact
/// polynomial vanishes there.
pub fn integer_root_check(coeffs: &[BigInt], roots: &RootSet) -> Vec<(i64, bool)> {
    let mut out: Vec<(i64, bool)> = Vec::new();
    for r in &roots.roots {
        let m = r.re.round();
        if (r - Complex64::new(m, 0.0)).norm() < 1e-8 && !out.iter().any(|&(k, _)| k == m as i64) {
            let x = BigInt::from(m as i64);
            let value = coeffs
                .iter()
                .rev()
                .fold(BigInt::zero(), |acc, c| acc * &x + c);
            out.push((m as i64, value.is_zero()));
        }
    }
    out
}


mod squarefree {
    //! Yun's square-free decomposition over the rationals.

    use num_bigint::BigInt;
    use num_complex::Complex64;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use crate::polynomial::big_to_f64;

    type Poly = Vec<BigRational>;

    fn trim(mut p: Poly) -> Poly {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    fn derivative(p: &Poly) -> Poly {
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn sub(a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let zero = BigRational::zero();
        trim(
            (0..n)
                .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    /// Quotient and remainder; `b` must be nonzero.
    fn divide(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let mut rem = a.clone();
        let lead = b.last().expect("nonzero divisor");
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
        for k in (0..quot.len()).rev() {
            let factor = &rem[k + b.len() - 1] / lead;
            if factor.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                rem[k + j] -= &factor * bj;
            }
            quot[k] = factor;
        }
        (trim(quot), trim(rem))
    }

    fn monic(p: Poly) -> Poly {
        match p.last().cloned() {
            Some(lead) => p.into_iter().map(|c| c / &lead).collect(),
            None => p,
        }
    }

    fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let (_, r) = divide(&a, &b);
            a = b;
            b = monic(r);
        }
        monic(a)
    }

    /// Scales to coprime integer coefficients.
    fn to_float(p: &Poly) -> Vec<Complex64> {
        let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.iter()
            .map(|c| Complex64::new(big_to_f64(&(c / &content)), 0.0))
            .collect()
    }

    /// Factors `f = prod_i a_i^i` with each `a_i` square-free, returned as
    /// floating coefficients with their multiplicity `i`.
    pub(super) fn decompose(f: &[BigInt]) -> Vec<(Vec<Complex64>, usize)> {
        let f: Poly = trim(f.iter().cloned().map(BigRational::from_integer).collect());
        let df = derivative(&f);
        let a0 = gcd(&f, &df);
        let mut b = divide(&f, &a0).0;
        let c = divide(&df, &a0).0;
        let mut d = sub(&c, &derivative(&b));
        let mut out = Vec::new();
        let mut i = 1;
        while b.len() > 1 {
            let a = gcd(&b, &d);
            let next_b = divide(&b, &a).0;
            let c = divide(&d, &a).0;
            d = sub(&c, &derivative(&next_b));
            if a.len() > 1 {
                out.push((to_float(&a), i));
            }
            b = next_b;
            i += 1;
        }
        debug_assert!(out
            .iter()
            .all(|(p, _)| p.last().is_some_and(|c| !c.re.is_zero())));
        out
    }
}
