//! Operator words over coefficients, substitutions and integrators, and the
//! rewrite engine that brings them to volume-integrator normal form.
//!
//! Words act right to left: in `U V`, `V` is applied first. A substitution
//! letter `M` acts by `f ↦ f[M]`, so two adjacent letters `M N` collapse to
//! the single letter for the product `N·M`.

mod measure;
mod normal;
mod rules;

pub use measure::{compare, term_measure, MeasureOrdering, SegmentKey, SigmaLetter, TermMeasure};
pub use normal::{
    is_normal_form, normalize, LineIntegrator, NormalForm, NormalizeOptions, NormalizeStats,
    Strategy, VolumeIntegrator,
};
pub use rules::{all_redexes, apply_rule, find_redex, find_redex_with, redex_at, Redex, RULE_PRIORITY};

use crate::hierarchy::{HierarchyElement, TensorMonomial};
use crate::matrixsubst::SubstMatrix;
use crate::rational::{one, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// Multiplication by a basis tensor monomial (never the unit).
    Coeff(TensorMonomial),
    /// `M*` with `M ≠ I`.
    Subst(SubstMatrix),
    /// The integrator `A_i`.
    Integ(usize),
}

impl Letter {
    pub fn is_integ(&self) -> bool {
        matches!(self, Letter::Integ(_))
    }

    fn max_axis(&self) -> usize {
        match self {
            Letter::Coeff(m) => m.len(),
            Letter::Subst(m) => m.dim(),
            Letter::Integ(i) => *i,
        }
    }
}

/// A word in canonical alternating form: no unit letters, no two adjacent
/// coefficient letters and no two adjacent substitution letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OperatorWord {
    letters: Vec<Letter>,
}

impl OperatorWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Self::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends on the right, merging with the last letter where possible.
    pub fn push(&mut self, letter: Letter) {
        match letter {
            Letter::Coeff(c) => {
                if c.is_unit() {
                    return;
                }
                if let Some(Letter::Coeff(last)) = self.letters.last_mut() {
                    let merged = last.multiply(&c);
                    if merged.is_unit() {
                        self.letters.pop();
                    } else {
                        *last = merged;
                    }
                } else {
                    self.letters.push(Letter::Coeff(c));
                }
            }
            Letter::Subst(n) => {
                if n.is_identity() {
                    return;
                }
                if let Some(Letter::Subst(last)) = self.letters.last_mut() {
                    // M* N* = (N M)*
                    let merged = n.compose(last);
                    if merged.is_identity() {
                        self.letters.pop();
                    } else {
                        *last = merged;
                    }
                } else {
                    self.letters.push(Letter::Subst(n));
                }
            }
            Letter::Integ(i) => {
                assert!(i >= 1, "integrator axes are 1-based");
                self.letters.push(Letter::Integ(i));
            }
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.clone());
        }
        w
    }

    /// Largest axis mentioned by any letter.
    pub fn max_axis(&self) -> usize {
        self.letters.iter().map(Letter::max_axis).max().unwrap_or(0)
    }

    pub fn integrator_count(&self) -> usize {
        self.letters.iter().filter(|l| l.is_integ()).count()
    }
}

/// A finite combination of words with nonzero rational weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<OperatorWord, Rational>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(OperatorWord::empty())
    }

    pub fn word(w: OperatorWord) -> Self {
        Self::term(one(), w)
    }

    pub fn term(c: Rational, w: OperatorWord) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Self::word(OperatorWord::from_letters(letters))
    }

    pub fn integ(i: usize) -> Self {
        Self::letters([Letter::Integ(i)])
    }

    pub fn subst(m: SubstMatrix) -> Self {
        Self::letters([Letter::Subst(m)])
    }

    /// Multiplication by a function, distributed over its monomials.
    pub fn coefficient(f: &HierarchyElement) -> Self {
        let mut e = Self::zero();
        for (m, c) in f.terms() {
            e.add_term(OperatorWord::from_letters([Letter::Coeff(m.clone())]), c.clone());
        }
        e
    }

    pub fn add_term(&mut self, w: OperatorWord, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<OperatorWord, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        for (w, c) in &other.terms {
            e.add_term(w.clone(), c.clone());
        }
        e
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// Bilinear concatenation; no rewriting beyond letter merging.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut e = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                e.add_term(a.concat(b), x * y);
            }
        }
        e
    }

    pub fn max_axis(&self) -> usize {
        self.terms.keys().map(OperatorWord::max_axis).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("step budget of {budget} exhausted")]
    BudgetExhausted { budget: usize, partial: Box<OperatorExpr> },
    #[error("rule {rule} does not match at position {pos} of {word}")]
    MalformedRedex { rule: u8, pos: usize, word: String },
    #[error("rule {rule} did not decrease the term measure: {before} -> {after}")]
    MeasureNotDecreasing { rule: u8, before: String, after: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::BasisFunction;
    use crate::rational::int;

    fn xc(axis: usize) -> Letter {
        Letter::Coeff(TensorMonomial::at(axis, BasisFunction::x()))
    }

    #[test]
    fn coefficient_letters_merge() {
        let w = OperatorWord::from_letters([xc(1), xc(2)]);
        assert_eq!(w.len(), 1);
        let inv = Letter::Coeff(TensorMonomial::at(1, BasisFunction::exp(int(-1))));
        let e = Letter::Coeff(TensorMonomial::at(1, BasisFunction::exp(int(1))));
        assert!(OperatorWord::from_letters([e, inv]).is_empty());
    }

    #[test]
    fn substitution_letters_compose_contravariantly() {
        let m = SubstMatrix::transvection(1, &[int(1)]);
        let n = SubstMatrix::scaling(2, &int(3));
        let w = OperatorWord::from_letters([Letter::Subst(m.clone()), Letter::Subst(n.clone())]);
        assert_eq!(w.letters(), &[Letter::Subst(n.compose(&m))]);
        let inv = SubstMatrix::transvection(1, &[int(-1)]);
        assert!(OperatorWord::from_letters([Letter::Subst(m), Letter::Subst(inv)]).is_empty());
    }

    #[test]
    fn cancellation_exposes_new_merges() {
        let m = SubstMatrix::evaluation(2);
        let e = TensorMonomial::at(1, BasisFunction::exp(int(1)));
        let einv = TensorMonomial::at(1, BasisFunction::exp(int(-1)));
        let a = OperatorWord::from_letters([Letter::Subst(m.clone()), Letter::Coeff(e)]);
        let b = OperatorWord::from_letters([Letter::Coeff(einv), Letter::Subst(m.clone())]);
        assert_eq!(a.concat(&b).letters(), &[Letter::Subst(m.compose(&m))]);
    }

    #[test]
    fn expression_arithmetic() {
        let a = OperatorExpr::integ(1);
        assert_eq!(a.multiply(&OperatorExpr::one()), a);
        assert!(a.sub(&a).is_zero());
        let aa = a.multiply(&a);
        assert_eq!(aa.terms().keys().next().unwrap().len(), 2);
    }
}
