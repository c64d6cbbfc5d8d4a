//! Volume-integrator normal forms and the normalization driver.

use super::measure::{compare, term_measure, MeasureOrdering};
use super::rules::{apply_rule, find_redex, find_redex_with};
use super::{EngineError, Letter, OperatorExpr, OperatorWord};
use crate::bialgebra::BasisFunction;
use crate::hierarchy::TensorMonomial;
use crate::matrixsubst::{EliminantVector, SubstMatrix};
use crate::rational::Rational;
use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Redex selection strategy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// First rule in priority order `1,2,3,4,6,5,9,8,7`, leftmost site.
    Priority,
    /// Leftmost site, ties broken by rule priority.
    Leftmost,
    /// Rightmost site, ties broken by rule priority.
    Rightmost,
    /// Uniform choice among all sites, seeded.
    Random(u64),
}

impl Strategy {
    pub fn name(&self) -> String {
        match self {
            Strategy::Priority => "priority".into(),
            Strategy::Leftmost => "leftmost".into(),
            Strategy::Rightmost => "rightmost".into(),
            Strategy::Random(s) => format!("random:{s}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormalizeOptions {
    pub max_steps: usize,
    pub strategy: Strategy,
    /// Assert that every firing strictly decreases the term measure.
    pub check_measure: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        Self { max_steps: 100_000, strategy: Strategy::Priority, check_measure: true }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizeStats {
    pub steps: usize,
    /// Firings per rule, indexed by rule id minus one.
    pub per_rule: [usize; 9],
}

/// `A_axis b(x_axis) L_axis(v)*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineIntegrator {
    pub axis: usize,
    pub b: Option<BasisFunction>,
    pub v: Option<EliminantVector>,
}

/// `b M* J_1 ... J_r` with strictly ascending line integrators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeIntegrator {
    pub b: Option<TensorMonomial>,
    pub m: Option<SubstMatrix>,
    pub lines: Vec<LineIntegrator>,
}

impl VolumeIntegrator {
    pub fn to_word(&self) -> OperatorWord {
        let mut w = OperatorWord::empty();
        if let Some(b) = &self.b {
            w.push(Letter::Coeff(b.clone()));
        }
        if let Some(m) = &self.m {
            w.push(Letter::Subst(m.clone()));
        }
        for j in &self.lines {
            w.push(Letter::Integ(j.axis));
            if let Some(b) = &j.b {
                w.push(Letter::Coeff(TensorMonomial::at(j.axis, b.clone())));
            }
            if let Some(v) = &j.v {
                w.push(Letter::Subst(v.to_matrix()));
            }
        }
        w
    }
}

/// Parses a word as a volume integrator, if it is one.
pub fn is_normal_form(w: &OperatorWord) -> Option<VolumeIntegrator> {
    let ls = w.letters();
    let mut k = 0;
    let mut vi = VolumeIntegrator { b: None, m: None, lines: Vec::new() };
    if let Some(Letter::Coeff(b)) = ls.get(k) {
        vi.b = Some(b.clone());
        k += 1;
    }
    if let Some(Letter::Subst(m)) = ls.get(k) {
        vi.m = Some(m.clone());
        k += 1;
    }
    while k < ls.len() {
        let Letter::Integ(i) = ls[k] else { return None };
        k += 1;
        let mut line = LineIntegrator { axis: i, b: None, v: None };
        if let Some(Letter::Coeff(c)) = ls.get(k) {
            if c.nonunit().any(|(a, _)| a != i) {
                return None;
            }
            line.b = Some(c.factor(i));
            k += 1;
        }
        if let Some(Letter::Subst(m)) = ls.get(k) {
            let v = m.as_eliminant(i)?;
            line.v = Some(v);
            k += 1;
        }
        if vi.lines.last().is_some_and(|prev| prev.axis >= i) {
            return None;
        }
        vi.lines.push(line);
    }
    if let (Some(m), Some(first)) = (&vi.m, vi.lines.first()) {
        if m.row_is_zero(first.axis) {
            return None;
        }
    }
    Some(vi)
}

/// A fully reduced expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub expr: OperatorExpr,
    pub stats: NormalizeStats,
}

impl NormalForm {
    pub fn volume_integrators(&self) -> Vec<(VolumeIntegrator, Rational)> {
        self.expr
            .terms()
            .iter()
            .map(|(w, c)| (is_normal_form(w).expect("normal form words parse"), c.clone()))
            .collect()
    }
}

/// Rewrites until no redex remains.
pub fn normalize(expr: &OperatorExpr, opts: &NormalizeOptions) -> Result<NormalForm, EngineError> {
    let mut rng = match opts.strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut draw = move || rng.as_mut().map_or(0, |r| r.next_u64());
    let mut pending: BTreeMap<OperatorWord, Rational> = BTreeMap::new();
    let mut done = OperatorExpr::zero();
    let mut stats = NormalizeStats::default();

    let route = |w: OperatorWord, c: Rational, pending: &mut BTreeMap<OperatorWord, Rational>, done: &mut OperatorExpr| {
        if find_redex(&w).is_none() {
            done.add_term(w, c);
            return;
        }
        let slot = pending.entry(w.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            pending.remove(&w);
        }
    };
    for (w, c) in expr.terms() {
        route(w.clone(), c.clone(), &mut pending, &mut done);
    }
    while let Some((w, c)) = pending.pop_first() {
        if stats.steps >= opts.max_steps {
            let mut partial = done.clone();
            partial.add_term(w, c);
            for (w, c) in pending {
                partial.add_term(w, c);
            }
            return Err(EngineError::BudgetExhausted { budget: opts.max_steps, partial: Box::new(partial) });
        }
        let redex = find_redex_with(&w, &opts.strategy, &mut draw).expect("pending words are reducible");
        let rhs = apply_rule(&w, redex)?;
        stats.steps += 1;
        stats.per_rule[redex.rule as usize - 1] += 1;
        if opts.check_measure {
            let before = term_measure(&w);
            for out in rhs.terms().keys() {
                if compare(&term_measure(out), &before) != MeasureOrdering::Less {
                    return Err(EngineError::MeasureNotDecreasing {
                        rule: redex.rule,
                        before: crate::syntax::render::word_text(&w),
                        after: crate::syntax::render::word_text(out),
                    });
                }
            }
        }
        for (out, d) in rhs.terms() {
            route(out.clone(), &c * d, &mut pending, &mut done);
        }
    }
    Ok(NormalForm { expr: done, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn a(i: usize) -> Letter {
        Letter::Integ(i)
    }

    #[test]
    fn shapes() {
        let x1 = Letter::Coeff(TensorMonomial::at(1, BasisFunction::x()));
        let good = OperatorWord::from_letters([
            Letter::Coeff(TensorMonomial::at(2, BasisFunction::x())),
            Letter::Subst(SubstMatrix::transvection(2, &[int(1)])),
            a(1),
            x1.clone(),
            Letter::Subst(SubstMatrix::eliminant(1, &[int(2)])),
            a(3),
        ]);
        let vi = is_normal_form(&good).expect("normal");
        assert_eq!(vi.lines.len(), 2);
        assert_eq!(vi.to_word(), good);
        assert!(is_normal_form(&OperatorWord::from_letters([a(1), a(1)])).is_none());
        let e2a2 = OperatorWord::from_letters([Letter::Subst(SubstMatrix::evaluation(2)), a(2)]);
        assert!(is_normal_form(&e2a2).is_none());
    }

    #[test]
    fn already_normal_is_fixed() {
        let e = OperatorExpr::integ(1);
        assert_eq!(normalize(&e, &NormalizeOptions::default()).unwrap().expr, e);
    }

    #[test]
    fn double_integral() {
        let e = OperatorExpr::letters([a(1), a(1)]);
        let x1 = Letter::Coeff(TensorMonomial::at(1, BasisFunction::x()));
        let want = OperatorExpr::letters([x1.clone(), a(1)]).sub(&OperatorExpr::letters([a(1), x1]));
        assert_eq!(normalize(&e, &NormalizeOptions::default()).unwrap().expr, want);
    }

    #[test]
    fn budget_is_enforced() {
        let e = OperatorExpr::letters([a(2), a(1)]);
        let opts = NormalizeOptions { max_steps: 0, ..Default::default() };
        assert!(matches!(normalize(&e, &opts), Err(EngineError::BudgetExhausted { .. })));
    }
}
