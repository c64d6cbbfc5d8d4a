//! Per-rule soundness: random in-pattern instances, rewritten once, must act
//! identically on random functions.

use super::axioms::compare_on;
use super::gen::{Gen, TrialConfig};
use super::report::{CheckResult, Failure};
use crate::hierarchy::TensorMonomial;
use crate::matrixsubst::SubstMatrix;
use crate::opring::{apply_rule, redex_at, Letter, OperatorExpr, OperatorWord};
use crate::syntax::render::word_text;
use num_traits::Zero;
use rayon::prelude::*;

const SUITE: &str = "rules";
const ATTEMPTS: usize = 200;

/// Functions tried per instance.
pub const FUNCTIONS_PER_TRIAL: usize = 5;

fn univariate(g: &mut Gen, axis: usize) -> Letter {
    Letter::Coeff(TensorMonomial::at(axis, g.nonunit_basis()))
}

/// Optional univariate coefficient; absent models the `g = 1` case.
fn maybe_univariate(g: &mut Gen, axis: usize, out: &mut Vec<Letter>) {
    if g.chance(0.7) {
        out.push(univariate(g, axis));
    }
}

/// Optional eliminant; absent models the `L = I` case.
fn maybe_eliminant(g: &mut Gen, axis: usize, n: usize, out: &mut Vec<Letter>, force: bool) {
    if force || g.chance(0.7) {
        let v = g.eliminant(axis, n);
        if !v.is_zero() {
            out.push(Letter::Subst(v.to_matrix()));
        }
    }
}

fn with_zero_row(m: &SubstMatrix, i: usize, n: usize) -> SubstMatrix {
    let mut rows = m.embed(n.max(i));
    for x in rows[i - 1].iter_mut() {
        *x = Zero::zero();
    }
    SubstMatrix::from_rows(rows).expect("square")
}

/// Letters of a candidate redex for `rule`.
fn window(g: &mut Gen, rule: u8, n: usize) -> Vec<Letter> {
    let mut ls = Vec::new();
    match rule {
        1 => {
            ls.push(Letter::Subst(g.word_matrix(n)));
            let mut m = g.monomial(n);
            if m.is_unit() {
                m.set(g.range(1, n), g.nonunit_basis());
            }
            ls.push(Letter::Coeff(m));
        }
        2 => {
            let i = g.range(1, n);
            let m = if g.chance(0.3) { SubstMatrix::evaluation(i) } else { with_zero_row(&g.matrix(n), i, n) };
            ls.push(Letter::Subst(m));
            ls.push(Letter::Integ(i));
        }
        3 | 4 => {
            let j = if rule == 3 { g.range(2, n.max(2)) } else { g.range(1, n.max(2) - 1) };
            let other = if rule == 3 { g.range(1, j - 1) } else { g.range(j + 1, n.max(2)) };
            let mut m = g.monomial(n);
            m.set(other, g.nonunit_basis());
            ls.push(Letter::Integ(j));
            ls.push(Letter::Coeff(m));
        }
        5 | 6 => {
            let j = g.range(1, n);
            ls.push(Letter::Integ(j));
            maybe_univariate(g, j, &mut ls);
            let mut m = g.matrix(n.max(j));
            if rule == 6 {
                m = m.zero_column(j);
            }
            ls.push(Letter::Subst(m));
        }
        7 | 8 => {
            let (i, j) = if rule == 7 {
                let j = g.range(2, n.max(2));
                (g.range(1, j - 1), j)
            } else {
                let j = g.range(1, n.max(2) - 1);
                (j, j)
            };
            let top = n.max(j + 1);
            ls.push(Letter::Integ(j));
            maybe_univariate(g, j, &mut ls);
            maybe_eliminant(g, j, top, &mut ls, rule == 8);
            ls.push(Letter::Integ(i));
            maybe_univariate(g, i, &mut ls);
            maybe_eliminant(g, i, top, &mut ls, false);
        }
        9 => {
            let j = g.range(1, n);
            ls.push(Letter::Integ(j));
            maybe_univariate(g, j, &mut ls);
            ls.push(Letter::Integ(j));
        }
        _ => {}
    }
    ls
}

/// A word containing a `rule` redex, possibly inside some context.
fn instance(g: &mut Gen, rule: u8) -> Option<(OperatorWord, crate::opring::Redex)> {
    for _ in 0..ATTEMPTS {
        let n = g.range(1, g.max_vars());
        let n = if matches!(rule, 3 | 4 | 7 | 8) { n.max(2) } else { n };
        let mut letters = Vec::new();
        let context = g.chance(0.3);
        if context {
            for _ in 0..g.range(1, 2) {
                letters.push(g.letter(n));
            }
        }
        letters.extend(window(g, rule, n));
        if context && g.chance(0.5) {
            letters.push(Letter::Integ(g.range(1, n)));
            if g.chance(0.5) {
                letters.push(g.letter(n));
            }
        }
        let w = OperatorWord::from_letters(letters);
        if let Some(r) = (0..w.len()).find_map(|p| redex_at(&w, rule, p)) {
            return Some((w, r));
        }
    }
    None
}

/// Checks one rule on `cfg.trials` random instances.
pub fn check_rule(rule: u8, cfg: &TrialConfig) -> CheckResult {
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut g = Gen::new(cfg, 300 + u64::from(rule), t);
            let Some((w, redex)) = instance(&mut g, rule) else {
                return Err(Failure {
                    trial: t,
                    instance: String::new(),
                    function: String::new(),
                    detail: "no instance generated".into(),
                });
            };
            let lhs = OperatorExpr::word(w.clone());
            let rhs = apply_rule(&w, redex).map_err(|e| Failure {
                trial: t,
                instance: word_text(&w),
                function: String::new(),
                detail: e.to_string(),
            })?;
            let n = w.max_axis().max(1);
            for _ in 0..FUNCTIONS_PER_TRIAL {
                let f = g.function(n);
                compare_on(&lhs, &rhs, &f, t)?;
            }
            Ok(())
        })
        .collect();
    CheckResult::from_outcomes(SUITE, format!("rule-{rule}"), outcomes)
}

pub fn check_rules(cfg: &TrialConfig) -> Vec<CheckResult> {
    (1..=9).map(|r| check_rule(r, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_rule_small() {
        let cfg = TrialConfig { trials: 10, ..Default::default() };
        for r in check_rules(&cfg) {
            assert!(r.ok(), "{}: {:#?}", r.name, r.failures.first());
        }
    }
}
