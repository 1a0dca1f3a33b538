//! Sparse polynomials in two named variables with exact big-integer
//! coefficients. Zero coefficients are never stored, so structural equality
//! is polynomial equality. Floating point appears only in evaluation.

mod json;

pub use json::PolyJson;

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable labels differ: ({0}, {1}) vs ({2}, {3})")]
    LabelMismatch(String, String, String, String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// Which of the two variable slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    First,
    Second,
}

impl Var {
    fn other(self) -> Var {
        match self {
            Var::First => Var::Second,
            Var::Second => Var::First,
        }
    }
}

pub type Labels = [Cow<'static, str>; 2];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    vars: Labels,
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivarPoly {
    pub fn zero(vars: Labels) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    /// Shorthand for statically named variables.
    pub fn zero_in(first: &'static str, second: &'static str) -> Self {
        Self::zero([Cow::Borrowed(first), Cow::Borrowed(second)])
    }

    pub fn constant(vars: Labels, c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, 0, 0, c)
    }

    pub fn one(vars: Labels) -> Self {
        Self::constant(vars, 1)
    }

    pub fn monomial(vars: Labels, i: u32, j: u32, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(i, j, c.into());
        p
    }

    /// The polynomial consisting of the given variable alone.
    pub fn variable(vars: Labels, var: Var) -> Self {
        match var {
            Var::First => Self::monomial(vars, 1, 0, 1),
            Var::Second => Self::monomial(vars, 0, 1, 1),
        }
    }

    pub fn from_terms(vars: Labels, terms: impl IntoIterator<Item = ((u32, u32), BigInt)>) -> Self {
        let mut p = Self::zero(vars);
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn vars(&self) -> &Labels {
        &self.vars
    }

    pub fn var_named(&self, name: &str) -> Result<Var, PolyError> {
        if self.vars[0] == name {
            Ok(Var::First)
        } else if self.vars[1] == name {
            Ok(Var::Second)
        } else {
            Err(PolyError::UnknownVariable(name.to_string()))
        }
    }

    /// Same terms under new variable names.
    pub fn relabel(mut self, vars: Labels) -> Self {
        self.vars = vars;
        self
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self, var: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match var {
                Var::First => i,
                Var::Second => j,
            })
            .max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub(crate) fn add_term(&mut self, i: u32, j: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_labels(&self, other: &BivarPoly) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::LabelMismatch(
                self.vars[0].to_string(),
                self.vars[1].to_string(),
                other.vars[0].to_string(),
                other.vars[1].to_string(),
            ))
        }
    }

    pub fn try_add(&self, other: &BivarPoly) -> Result<BivarPoly, PolyError> {
        self.check_labels(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &BivarPoly) -> Result<BivarPoly, PolyError> {
        self.check_labels(other)?;
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &BivarPoly) -> Result<BivarPoly, PolyError> {
        self.check_labels(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &BivarPoly) {
        for (&(i, j), c) in &other.terms {
            self.add_term(i, j, c.clone());
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero(self.vars.clone());
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> BivarPoly {
        let mut out = BivarPoly::zero(self.vars.clone());
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(&e, v)| (e, v * c)).collect();
        out
    }

    /// Multiplies by `first^i * second^j`.
    pub fn shift(&self, i: u32, j: u32) -> BivarPoly {
        BivarPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + i, b + j), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> BivarPoly {
        let mut result = BivarPoly::one(self.vars.clone());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Exact composition: every occurrence of `var` is replaced by `s`.
    pub fn substitute(&self, var: Var, s: &BivarPoly) -> Result<BivarPoly, PolyError> {
        self.check_labels(s)?;
        let max = self.degree(var).unwrap_or(0) as usize;
        let mut powers = Vec::with_capacity(max + 1);
        powers.push(BivarPoly::one(self.vars.clone()));
        for k in 1..=max {
            let next = powers[k - 1].mul_unchecked(s);
            powers.push(next);
        }
        let mut out = BivarPoly::zero(self.vars.clone());
        for (&(i, j), c) in &self.terms {
            let (replaced, kept) = match var {
                Var::First => (i, (0, j)),
                Var::Second => (j, (i, 0)),
            };
            let piece = powers[replaced as usize].shift(kept.0, kept.1).scale(c);
            out.add_assign_unchecked(&piece);
        }
        Ok(out)
    }

    /// Exact formal partial derivative.
    pub fn partial(&self, var: Var) -> BivarPoly {
        let mut out = BivarPoly::zero(self.vars.clone());
        for (&(i, j), c) in &self.terms {
            match var {
                Var::First if i > 0 => out.add_term(i - 1, j, c * BigInt::from(i)),
                Var::Second if j > 0 => out.add_term(i, j - 1, c * BigInt::from(j)),
                _ => {}
            }
        }
        out
    }

    /// Fixes `fixed` to an integer value and returns the dense ascending
    /// coefficient list in the other variable.
    pub fn univariate(&self, fixed: Var, value: &BigInt) -> Vec<BigInt> {
        let free = fixed.other();
        let len = self.degree(free).map_or(0, |d| d as usize + 1);
        let mut out = vec![BigInt::zero(); len];
        let fixed_max = self.degree(fixed).unwrap_or(0) as usize;
        let mut powers = Vec::with_capacity(fixed_max + 1);
        powers.push(BigInt::one());
        for k in 1..=fixed_max {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        for (&(i, j), c) in &self.terms {
            let (f, e) = match fixed {
                Var::First => (i, j),
                Var::Second => (j, i),
            };
            out[e as usize] += c * &powers[f as usize];
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Like [`univariate`](Self::univariate) but with a complex fixed value.
    pub fn univariate_complex(&self, fixed: Var, value: Complex64) -> Vec<Complex64> {
        let free = fixed.other();
        let len = self.degree(free).map_or(0, |d| d as usize + 1);
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (&(i, j), c) in &self.terms {
            let (f, e) = match fixed {
                Var::First => (i, j),
                Var::Second => (j, i),
            };
            out[e as usize] += value.powu(f) * big_to_f64(c);
        }
        out
    }

    /// Horner evaluation in both variables. Coefficients too large for `f64`
    /// become infinite; callers check `is_finite`.
    pub fn eval_complex(&self, x: Complex64, y: Complex64) -> Complex64 {
        // Group by the first exponent, Horner in y inside, Horner in x outside.
        let mut rows: BTreeMap<u32, Vec<(u32, f64)>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            rows.entry(i).or_default().push((j, big_to_f64(c)));
        }
        let horner_y = |row: &[(u32, f64)]| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut prev = row.last().map_or(0, |&(j, _)| j);
            for &(j, c) in row.iter().rev() {
                acc = acc * y.powu(prev - j) + c;
                prev = j;
            }
            acc * y.powu(prev)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        let mut prev = rows.keys().next_back().copied().unwrap_or(0);
        for (&i, row) in rows.iter().rev() {
            acc = acc * x.powu(prev - i) + horner_y(row);
            prev = i;
        }
        acc * x.powu(prev)
    }

    /// Exact value at integer arguments.
    pub fn eval_big(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.univariate(Var::First, x)
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * y + c)
    }

    pub fn eval_real(&self, x: f64, y: f64) -> f64 {
        self.eval_complex(Complex64::new(x, 0.0), Complex64::new(y, 0.0))
            .re
    }
}

pub(crate) fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(if c.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Natural log of a positive integer of any size.
pub(crate) fn big_ln(c: &BigInt) -> f64 {
    let f = big_to_f64(c);
    if f.is_finite() {
        return f.ln();
    }
    // Keep the leading 60 bits.
    let shift = c.bits().saturating_sub(60);
    let head: BigInt = c >> shift;
    big_to_f64(&head).ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BivarPoly {
    /// Highest total degree first, e.g. `x^3 + x^2 + x + y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let (ea, eb) = (a.0, b.0);
            (eb.0 + eb.1, eb.0).cmp(&(ea.0 + ea.1, ea.0))
        });
        for (n, (&(i, j), c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mut parts = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                parts.push(mag.to_string());
            }
            for (e, name) in [(i, &self.vars[0]), (j, &self.vars[1])] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        self.scale(&BigInt::from(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> BivarPoly {
        BivarPoly::zero_in("x", "y")
    }

    fn poly(terms: &[((u32, u32), i64)]) -> BivarPoly {
        BivarPoly::from_terms(
            xy().vars().clone(),
            terms.iter().map(|&(e, c)| (e, BigInt::from(c))),
        )
    }

    fn c4_tutte() -> BivarPoly {
        poly(&[((3, 0), 1), ((2, 0), 1), ((1, 0), 1), ((0, 1), 1)])
    }

    #[test]
    fn difference_of_squares() {
        let a = poly(&[((1, 0), 1), ((0, 1), 1)]);
        let b = poly(&[((1, 0), 1), ((0, 1), -1)]);
        assert_eq!(&a * &b, poly(&[((2, 0), 1), ((0, 2), -1)]));
        assert_eq!(&a + &xy(), a);
    }

    #[test]
    fn scaling() {
        let p = c4_tutte().scale(&BigInt::from(2));
        assert_eq!(
            p,
            poly(&[((3, 0), 2), ((2, 0), 2), ((1, 0), 2), ((0, 1), 2)])
        );
        assert!(c4_tutte().scale(&BigInt::zero()).is_zero());
    }

    #[test]
    fn label_mismatch_is_an_error() {
        let qv = BivarPoly::one(BivarPoly::zero_in("q", "v").vars().clone());
        assert!(matches!(
            c4_tutte().try_add(&qv),
            Err(PolyError::LabelMismatch(..))
        ));
        assert!(c4_tutte().substitute(Var::First, &qv).is_err());
    }

    #[test]
    fn substitution_examples() {
        let t = c4_tutte();
        let zero = xy();
        assert_eq!(
            t.substitute(Var::Second, &zero).unwrap(),
            poly(&[((3, 0), 1), ((2, 0), 1), ((1, 0), 1)])
        );
        let one_minus_x = poly(&[((0, 0), 1), ((1, 0), -1)]);
        let s = t.substitute(Var::First, &one_minus_x).unwrap();
        // (1-x)^3 + (1-x)^2 + (1-x) + y = 3 - 6x + 4x^2 - x^3 + y
        assert_eq!(
            s,
            poly(&[
                ((0, 0), 3),
                ((1, 0), -6),
                ((2, 0), 4),
                ((3, 0), -1),
                ((0, 1), 1)
            ])
        );
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(c4_tutte().eval_real(2.0, 2.0), 16.0);
        assert_eq!(c4_tutte().eval_real(1.0, 1.0), 4.0);
        let p = poly(&[((2, 0), 1), ((0, 0), 1)]);
        let z = p.eval_complex(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
        assert!(z.norm() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let qv = BivarPoly::monomial(BivarPoly::zero_in("q", "v").vars().clone(), 2, 3, 1);
        assert_eq!(
            qv.partial(Var::Second),
            BivarPoly::monomial(qv.vars().clone(), 2, 2, 3)
        );
    }

    #[test]
    fn univariate_is_dense_and_trimmed() {
        // 16 + 32v + 24v^2 + 8v^3 + 2v^4 is Z(C4; 2, v).
        let z = BivarPoly::from_terms(
            BivarPoly::zero_in("q", "v").vars().clone(),
            [
                ((4, 0), 1),
                ((3, 1), 4),
                ((2, 2), 6),
                ((1, 3), 4),
                ((1, 4), 1),
            ]
            .map(|(e, c)| (e, BigInt::from(c))),
        );
        let coeffs: Vec<i64> = z
            .univariate(Var::First, &BigInt::from(2))
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect();
        assert_eq!(coeffs, vec![16, 32, 24, 8, 2]);
        assert_eq!(
            poly(&[((1, 0), 1), ((1, 1), -1)]).univariate(Var::Second, &BigInt::one()),
            vec![]
        );
    }

    #[test]
    fn big_ln_handles_huge_values() {
        let c: BigInt = BigInt::from(3) << 2000;
        let expected = 3f64.ln() + 2000.0 * std::f64::consts::LN_2;
        assert!((big_ln(&c) - expected).abs() < 1e-9);
        assert_eq!(big_ln(&BigInt::from(1)), 0.0);
    }

    #[test]
    fn display() {
        assert_eq!(c4_tutte().to_string(), "x^3 + x^2 + x + y");
        assert_eq!(poly(&[((0, 0), -3), ((1, 1), 2)]).to_string(), "2*x*y - 3");
    }

    fn arb_poly() -> impl Strategy<Value = BivarPoly> {
        prop::collection::vec(((0u32..4, 0u32..4), -5i64..6), 0..6).prop_map(|ts| {
            BivarPoly::from_terms(
                BivarPoly::zero_in("x", "y").vars().clone(),
                ts.into_iter().map(|(e, c)| (e, BigInt::from(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn product_rule(a in arb_poly(), b in arb_poly()) {
            for var in [Var::First, Var::Second] {
                let lhs = (&a * &b).partial(var);
                let rhs = &(&a.partial(var) * &b) + &(&a * &b.partial(var));
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn identity_substitution(a in arb_poly()) {
            for var in [Var::First, Var::Second] {
                let v = BivarPoly::variable(a.vars().clone(), var);
                prop_assert_eq!(a.substitute(var, &v).unwrap(), a.clone());
            }
        }

        #[test]
        fn eval_commutes_with_substitution(
            a in arb_poly(), s in arb_poly(), x in -1.5f64..1.5, y in -1.5f64..1.5,
        ) {
            let composed = a.substitute(Var::First, &s).unwrap().eval_real(x, y);
            let direct = a.eval_real(s.eval_real(x, y), y);
            // Relative to the evaluation with all signs made positive.
            let abs = |p: &BivarPoly| BivarPoly::from_terms(
                p.vars().clone(), p.terms().map(|(e, c)| (e, c.abs())));
            let scale = abs(&a).eval_real(abs(&s).eval_real(x.abs(), y.abs()), y.abs()).max(1.0);
            prop_assert!((composed - direct).abs() <= 1e-12 * scale,
                "{composed} vs {direct}");
        }
    }
}
