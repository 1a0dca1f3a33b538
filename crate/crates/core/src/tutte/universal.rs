//! Evaluations of multiplicative deletion–contraction invariants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::engine::{DcAlgebra, Engine};
use super::{tutte, TutteConfig, TutteError};
use crate::graph::Multigraph;

/// An invariant with `f(single vertex) = 1`, `f(G) = a f(G-e) + b f(G/e)`
/// on ordinary edges, `f(K2) = x0` and `f(loop) = y0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DcInvariantSpec {
    pub a: BigRational,
    pub b: BigRational,
    pub x0: BigRational,
    pub y0: BigRational,
}

impl DcInvariantSpec {
    pub fn new(
        a: BigRational,
        b: BigRational,
        x0: BigRational,
        y0: BigRational,
    ) -> Result<Self, TutteError> {
        let spec = Self { a, b, x0, y0 };
        spec.validate()?;
        Ok(spec)
    }

    /// All four values as integers.
    pub fn integers(a: i64, b: i64, x0: i64, y0: i64) -> Result<Self, TutteError> {
        let r = |n: i64| BigRational::from_integer(BigInt::from(n));
        Self::new(r(a), r(b), r(x0), r(y0))
    }

    fn validate(&self) -> Result<(), TutteError> {
        if self.a.is_zero() || self.b.is_zero() {
            Err(TutteError::InvalidSpec("a and b must be nonzero".into()))
        } else {
            Ok(())
        }
    }
}

fn rational_pow(base: &BigRational, exp: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// `f(G) = a^n b^r t(G; x0/b, y0/a)` with `n` the nullity and `r` the rank.
pub fn dc_invariant_eval(
    g: &Multigraph,
    spec: &DcInvariantSpec,
) -> Result<BigRational, TutteError> {
    spec.validate()?;
    let t = tutte(g)?;
    let x = &spec.x0 / &spec.b;
    let y = &spec.y0 / &spec.a;
    let mut value = BigRational::zero();
    for ((i, j), c) in t.terms() {
        value += rational_pow(&x, i) * rational_pow(&y, j) * BigRational::from_integer(c.clone());
    }
    Ok(value * rational_pow(&spec.a, g.nullity() as u32) * rational_pow(&spec.b, g.rank() as u32))
}

struct RationalAlgebra<'s>(&'s DcInvariantSpec);

impl DcAlgebra for RationalAlgebra<'_> {
    type Value = BigRational;

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn bridge(&self, _: usize) -> BigRational {
        self.0.x0.clone()
    }

    fn loop_value(&self, _: usize) -> BigRational {
        self.0.y0.clone()
    }

    fn combine(&self, _: usize, deleted: BigRational, contracted: BigRational) -> BigRational {
        &self.0.a * deleted + &self.0.b * contracted
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
}

/// The same invariant computed straight from its defining rules, without
/// going through the Tutte polynomial.
pub fn dc_invariant_recursive(
    g: &Multigraph,
    spec: &DcInvariantSpec,
) -> Result<BigRational, TutteError> {
    spec.validate()?;
    let config = TutteConfig::default();
    config.check_edges(g)?;
    let alg = RationalAlgebra(spec);
    Ok(Engine::new(&alg, config.engine_options()).evaluate(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn cycle_four_evaluations() {
        let c4 = GraphKind::Cycle(4).build().unwrap();
        let all_subsets = DcInvariantSpec::integers(1, 1, 2, 2).unwrap();
        assert_eq!(dc_invariant_eval(&c4, &all_subsets).unwrap(), int(16));
        assert_eq!(dc_invariant_recursive(&c4, &all_subsets).unwrap(), int(16));
        let trees = DcInvariantSpec::integers(1, 1, 1, 1).unwrap();
        assert_eq!(dc_invariant_eval(&c4, &trees).unwrap(), int(4));
        // Partition-function normalization at q = 2, v = 1: q^{-k} P1 = 82 / 2.
        let potts = DcInvariantSpec::integers(1, 1, 3, 2).unwrap();
        assert_eq!(dc_invariant_eval(&c4, &potts).unwrap(), int(41));
        assert_eq!(dc_invariant_recursive(&c4, &potts).unwrap(), int(41));
    }

    #[test]
    fn rational_parameters_agree() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 3), (0, 1)]).unwrap();
        let spec = DcInvariantSpec::new(
            BigRational::new(BigInt::from(2), BigInt::from(3)),
            BigRational::new(BigInt::from(-5), BigInt::from(7)),
            int(3),
            BigRational::new(BigInt::from(1), BigInt::from(2)),
        )
        .unwrap();
        assert_eq!(
            dc_invariant_eval(&g, &spec).unwrap(),
            dc_invariant_recursive(&g, &spec).unwrap()
        );
    }

    #[test]
    fn zero_coefficients_rejected() {
        assert!(DcInvariantSpec::integers(0, 1, 1, 1).is_err());
        assert!(DcInvariantSpec::integers(1, 0, 1, 1).is_err());
    }
}
