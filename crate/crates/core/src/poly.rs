//! Multivariate polynomials with real coefficients.
//!
//! Exponents are exact integers; differentiation multiplies a coefficient by an
//! exponent, so derivatives of integer-coefficient polynomials stay exact.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt::{self, Write};
use core::ops::{Add, Mul, Neg, Sub};

use crate::OccupationVector;

/// Polynomial in `vars` variables. Terms are keyed by their exponent vector in
/// graded-lexicographic order; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<OccupationVector, f64>,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        assert!(vars > 0, "a polynomial needs at least one variable");
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: f64) -> Self {
        Self::monomial(OccupationVector::vacuum(vars), c)
    }

    pub fn monomial(exponents: OccupationVector, c: f64) -> Self {
        let mut p = Self::zero(exponents.modes());
        p.add_term(exponents, c);
        p
    }

    /// The variable `x_i`.
    pub fn variable(vars: usize, i: usize) -> Self {
        Self::monomial(OccupationVector::unit(vars, i), 1.0)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponents: &OccupationVector) -> f64 {
        self.terms.get(exponents).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, f64)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.total()).max()
    }

    /// Adds `c x^exponents` in place.
    pub fn add_term(&mut self, exponents: OccupationVector, c: f64) {
        assert_eq!(exponents.modes(), self.vars, "exponent length mismatch");
        if c == 0.0 {
            return;
        }
        match self.terms.entry(exponents) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == 0.0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c * factor);
        }
        out
    }

    /// `x_i * p`.
    pub fn mul_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, &c) in &self.terms {
            out.terms.insert(e.raised(i), c);
        }
        out
    }

    /// `d p / d x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, &c) in &self.terms {
            if let Some(lowered) = e.lowered(i) {
                out.add_term(lowered, c * f64::from(e.get(i)));
            }
        }
        out
    }

    /// `x_i d/dx_i p`: scales each monomial by its `i`-th exponent.
    pub fn euler(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c * f64::from(e.get(i)));
        }
        out
    }

    /// `sum_j x_j d/dx_j p`: scales each monomial by its degree.
    pub fn euler_total(&self) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c * e.total() as f64);
        }
        out
    }

    /// Largest `|p_e - q_e|` over all exponents.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other)
            .terms
            .values()
            .fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest `|p_e - q_e| / max(1, |q_e|)`.
    pub fn max_rel_diff(&self, other: &Self) -> f64 {
        let diff = self - other;
        diff.terms.iter().fold(0.0, |m, (e, c)| {
            m.max(c.abs() / other.coeff(e).abs().max(1.0))
        })
    }

    /// Text rendering with variables `{name}1 ... {name}r`, terms in
    /// graded-lexicographic order, coefficients in shortest round-trip form.
    pub fn render(&self, name: &str) -> String {
        let mut out = String::new();
        if self.terms.is_empty() {
            out.push('0');
            return out;
        }
        for (idx, (e, &c)) in self.terms.iter().enumerate() {
            let negative = c < 0.0;
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = c.abs();
            let is_const = e.total() == 0;
            if is_const || mag != 1.0 {
                let _ = write!(out, "{mag}");
            }
            let mut first_factor = is_const || mag != 1.0;
            for (i, &p) in e.as_slice().iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if first_factor {
                    out.push('*');
                }
                first_factor = true;
                let _ = write!(out, "{name}{}", i + 1);
                if p > 1 {
                    let _ = write!(out, "^{p}");
                }
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scaled(-1.0)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.vars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                let e: alloc::vec::Vec<u32> = a
                    .as_slice()
                    .iter()
                    .zip(b.as_slice())
                    .map(|(x, y)| x + y)
                    .collect();
                out.add_term(OccupationVector::new(e), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn mono(e: &[u32], c: f64) -> MultiPoly {
        MultiPoly::monomial(OccupationVector::from(e), c)
    }

    #[test]
    fn calculus_on_monomials() {
        let p = mono(&[2, 1], 3.0);
        assert_eq!(p.derivative(0), mono(&[1, 1], 6.0));
        assert_eq!(p.derivative(1), mono(&[2, 0], 3.0));
        assert_eq!(p.mul_var(1), mono(&[2, 2], 3.0));
        assert_eq!(p.euler(0), mono(&[2, 1], 6.0));
        assert_eq!(p.euler_total(), mono(&[2, 1], 9.0));
        assert!(MultiPoly::constant(2, 5.0).derivative(0).is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = &mono(&[1, 0], 2.0) + &mono(&[0, 1], 1.0);
        let q = &p - &mono(&[1, 0], 2.0);
        assert_eq!(q, mono(&[0, 1], 1.0));
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn rendering_is_graded_lex() {
        let p = &(&mono(&[2, 0], -1.0) + &mono(&[0, 0], 1.0))
            + &(&mono(&[0, 1], 0.5) + &mono(&[1, 1], 1.0));
        assert_eq!(p.render("w"), "1 + 0.5*w2 + w1*w2 - w1^2");
        assert_eq!(MultiPoly::zero(2).render("z"), "0");
        assert_eq!(mono(&[0, 3], -2.0).to_string(), "-2*x2^3");
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0u32..4, 0u32..4), -5i32..=5), 0..6).prop_map(|terms| {
            let mut p = MultiPoly::zero(2);
            for ((a, b), c) in terms {
                p.add_term(OccupationVector::new(vec![a, b]), f64::from(c));
            }
            p
        })
    }

    proptest! {
        // integer coefficients keep every step exact
        #[test]
        fn product_rule_is_exact(p in small_poly(), q in small_poly(), i in 0usize..2) {
            let lhs = (&p * &q).derivative(i);
            let rhs = &(&p.derivative(i) * &q) + &(&p * &q.derivative(i));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn euler_scales_by_exponent(a in 0u32..7, b in 0u32..7, c in -9i32..9, i in 0usize..2) {
            let p = mono(&[a, b], f64::from(c));
            let e = [a, b][i];
            prop_assert_eq!(p.euler(i), p.scaled(f64::from(e)));
        }

        #[test]
        fn derivative_is_linear(p in small_poly(), q in small_poly(), i in 0usize..2) {
            prop_assert_eq!((&p + &q).derivative(i), &p.derivative(i) + &q.derivative(i));
        }
    }
}
