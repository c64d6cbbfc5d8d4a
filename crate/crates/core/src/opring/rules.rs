//! The nine oriented rewrite rules and redex search.
//!
//! Rules 5 to 9 match whole segments: the letters after an integrator up to
//! the next integrator or the end of the word. This keeps every firing
//! strictly decreasing in the term measure.

use super::{EngineError, Letter, OperatorExpr, OperatorWord};
use crate::bialgebra::{BasisFunction, Coefficient};
use crate::hierarchy::{basis_at_linear_form, HierarchyElement, TensorMonomial};
use crate::matrixsubst::{EliminantVector, SubstMatrix};
use crate::rational::{one, Rational};
use std::collections::BTreeMap;

/// Order in which the default strategy tries rules.
pub const RULE_PRIORITY: [u8; 9] = [1, 2, 3, 4, 6, 5, 9, 8, 7];

/// A rule firing site: `len` letters starting at `pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Redex {
    pub rule: u8,
    pub pos: usize,
    pub len: usize,
}

/// End of the segment starting at `start`: the next integrator or the end.
fn segment_end(letters: &[Letter], start: usize) -> usize {
    letters[start..].iter().position(Letter::is_integ).map_or(letters.len(), |k| start + k)
}

/// A coefficient monomial that depends on `x_axis` only.
fn univariate_at(m: &TensorMonomial, axis: usize) -> Option<BasisFunction> {
    if m.nonunit().all(|(a, _)| a == axis) {
        Some(m.factor(axis))
    } else {
        None
    }
}

/// Splits a segment into an optional univariate coefficient at `axis` and an
/// optional trailing substitution. Returns `None` for any other shape.
fn coeff_then_subst(seg: &[Letter], axis: usize) -> Option<(BasisFunction, Option<&SubstMatrix>)> {
    match seg {
        [] => Some((BasisFunction::unit(), None)),
        [Letter::Coeff(c)] => Some((univariate_at(c, axis)?, None)),
        [Letter::Subst(m)] => Some((BasisFunction::unit(), Some(m))),
        [Letter::Coeff(c), Letter::Subst(m)] => Some((univariate_at(c, axis)?, Some(m))),
        _ => None,
    }
}

/// A segment of line-integrator shape `b(x_axis) L_axis(v)`.
fn line_segment(seg: &[Letter], axis: usize) -> Option<(BasisFunction, EliminantVector)> {
    let (b, m) = coeff_then_subst(seg, axis)?;
    let v = match m {
        None => EliminantVector { axis, tail: BTreeMap::new() },
        Some(m) => m.as_eliminant(axis)?,
    };
    Some((b, v))
}

/// Checks whether `rule` matches at `pos`.
pub fn redex_at(word: &OperatorWord, rule: u8, pos: usize) -> Option<Redex> {
    let ls = word.letters();
    let at = |k: usize| ls.get(k);
    let hit = |len| Some(Redex { rule, pos, len });
    match rule {
        1 => match (at(pos)?, at(pos + 1)?) {
            (Letter::Subst(_), Letter::Coeff(_)) => hit(2),
            _ => None,
        },
        2 => match (at(pos)?, at(pos + 1)?) {
            (Letter::Subst(m), Letter::Integ(i)) if m.row_is_zero(*i) => hit(2),
            _ => None,
        },
        3 | 4 => match (at(pos)?, at(pos + 1)?) {
            (Letter::Integ(j), Letter::Coeff(c))
                if c.nonunit().any(|(a, _)| if rule == 3 { a < *j } else { a > *j }) =>
            {
                hit(2)
            }
            _ => None,
        },
        5 | 6 => {
            let Letter::Integ(j) = *at(pos)? else { return None };
            let end = segment_end(ls, pos + 1);
            let (_, m) = coeff_then_subst(&ls[pos + 1..end], j)?;
            let m = m?;
            if m.as_eliminant(j).is_some() {
                return None;
            }
            let zero_col = m.column(j).is_empty();
            if (rule == 6) == zero_col {
                hit(end - pos)
            } else {
                None
            }
        }
        9 => {
            let Letter::Integ(j) = *at(pos)? else { return None };
            match (at(pos + 1)?, at(pos + 2)) {
                (Letter::Integ(i), _) if *i == j => hit(2),
                (Letter::Coeff(c), Some(Letter::Integ(i))) if *i == j && univariate_at(c, j).is_some() => {
                    hit(3)
                }
                _ => None,
            }
        }
        7 | 8 => {
            let Letter::Integ(j) = *at(pos)? else { return None };
            let e1 = segment_end(ls, pos + 1);
            let (_, w) = line_segment(&ls[pos + 1..e1], j)?;
            let Letter::Integ(i) = *at(e1)? else { return None };
            let e2 = segment_end(ls, e1 + 1);
            line_segment(&ls[e1 + 1..e2], i)?;
            let ok = if rule == 7 { i < j } else { i == j && !w.is_zero() };
            if ok {
                hit(e2 - pos)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Every redex in the word, ordered by position and then by rule priority.
pub fn all_redexes(word: &OperatorWord) -> Vec<Redex> {
    (0..word.len())
        .flat_map(|pos| RULE_PRIORITY.iter().filter_map(move |&r| redex_at(word, r, pos)))
        .collect()
}

/// Default strategy: the first rule in priority order, at its leftmost site.
pub fn find_redex(word: &OperatorWord) -> Option<Redex> {
    find_redex_with(word, &super::Strategy::Priority, &mut || 0)
}

/// Redex selection for the given strategy. `pick` supplies random draws.
pub fn find_redex_with(
    word: &OperatorWord,
    strategy: &super::Strategy,
    pick: &mut dyn FnMut() -> u64,
) -> Option<Redex> {
    use super::Strategy::*;
    match strategy {
        Priority => RULE_PRIORITY
            .iter()
            .find_map(|&r| (0..word.len()).find_map(|pos| redex_at(word, r, pos))),
        Leftmost => all_redexes(word).into_iter().next(),
        Rightmost => {
            let all = all_redexes(word);
            let last = all.last()?.pos;
            all.into_iter().find(|r| r.pos == last)
        }
        Random(_) => {
            let all = all_redexes(word);
            if all.is_empty() {
                return None;
            }
            Some(all[(pick() % all.len() as u64) as usize])
        }
    }
}

fn word(letters: impl IntoIterator<Item = Letter>) -> OperatorWord {
    OperatorWord::from_letters(letters)
}

fn coeff_at(axis: usize, b: BasisFunction) -> Letter {
    Letter::Coeff(TensorMonomial::at(axis, b))
}

fn subst(m: SubstMatrix) -> Letter {
    Letter::Subst(m)
}

fn lmat(v: &EliminantVector) -> Letter {
    Letter::Subst(v.to_matrix())
}

/// Rewrites the redex, returning the whole resulting expression.
pub fn apply_rule(w: &OperatorWord, redex: Redex) -> Result<OperatorExpr, EngineError> {
    let malformed = || EngineError::MalformedRedex {
        rule: redex.rule,
        pos: redex.pos,
        word: format!("{w:?}"),
    };
    if redex_at(w, redex.rule, redex.pos) != Some(redex) {
        return Err(malformed());
    }
    let ls = w.letters();
    let window = &ls[redex.pos..redex.pos + redex.len];
    let rhs = match redex.rule {
        1 => rule1(window),
        2 => OperatorExpr::zero(),
        3 | 4 => rule34(window, redex.rule),
        5 => rule5(window),
        6 => rule6(window),
        7 => rule7(window).ok_or_else(malformed)?,
        8 => rule8(window, w.max_axis() + 1).ok_or_else(malformed)?,
        9 => rule9(window),
        _ => return Err(malformed()),
    };
    let prefix = OperatorExpr::word(word(ls[..redex.pos].iter().cloned()));
    let suffix = OperatorExpr::word(word(ls[redex.pos + redex.len..].iter().cloned()));
    Ok(prefix.multiply(&rhs).multiply(&suffix))
}

fn integ_axis(l: &Letter) -> usize {
    match l {
        Letter::Integ(i) => *i,
        _ => unreachable!("window starts with an integrator"),
    }
}

/// `M* g → g[M] M*`.
fn rule1(window: &[Letter]) -> OperatorExpr {
    let (Letter::Subst(m), Letter::Coeff(g)) = (&window[0], &window[1]) else { unreachable!() };
    let image = HierarchyElement::monomial(g.clone()).substitute(m);
    let mut out = OperatorExpr::zero();
    for (t, c) in image.terms() {
        out.add_term(word([Letter::Coeff(t.clone()), subst(m.clone())]), c.clone());
    }
    out
}

/// `A_j c → c_out A_j c_in`, moving factors below (rule 3) or above (rule 4) `j`.
fn rule34(window: &[Letter], rule: u8) -> OperatorExpr {
    let (Letter::Integ(j), Letter::Coeff(c)) = (&window[0], &window[1]) else { unreachable!() };
    let moved = c.nonunit().filter(|(a, _)| if rule == 3 { a < j } else { a > j }).map(|(a, _)| a).collect();
    let (out, stay) = c.split(&moved);
    OperatorExpr::letters([Letter::Coeff(out), Letter::Integ(*j), Letter::Coeff(stay)])
}

/// `A_j g(x_j) M*` with a nonzero column `j` and `M` not an eliminant at `j`.
///
/// With pivot row `i`, `p = M_ij` and `M = L_i(l) M̃`, the substitution
/// `η = (M̃x)_i` turns the integral over `x_j` into one over slot `i`:
/// `Σ_μ p⁻¹ b_μ (1 − E_j*) M̃* A_i a_μ(x_i) L_i(l)*` where
/// `g((x_j − Σ_{k≠j} M_ik x_k)/p) = Σ_μ a_μ(x_j) b_μ`.
fn rule5(window: &[Letter]) -> OperatorExpr {
    let j = integ_axis(&window[0]);
    let (g, m) = coeff_then_subst(&window[1..], j).expect("matched");
    let m = m.expect("matched");
    let pd = m.pivot_decompose(j);
    let i = pd.pivot.expect("rule 5 needs a pivot");
    let p = m.get(i, j);
    let pinv = one() / &p;
    let mut row: BTreeMap<usize, Rational> =
        m.row(i).into_iter().filter(|(k, _)| *k != j).map(|(k, v)| (k, -v * &pinv)).collect();
    row.insert(j, pinv.clone());
    let expansion = basis_at_linear_form(&g, &row);
    let lower = pd.reduced.zero_column(j);
    let mut out = OperatorExpr::zero();
    for (t, c) in expansion.terms() {
        let a = t.factor(j);
        let mut b = t.clone();
        b.set(j, BasisFunction::unit());
        let tail = |front: SubstMatrix| {
            word([
                Letter::Coeff(b.clone()),
                subst(front),
                Letter::Integ(i),
                coeff_at(i, a.clone()),
                lmat(&pd.l),
            ])
        };
        let c = c * &pinv;
        out.add_term(tail(pd.reduced.clone()), c.clone());
        out.add_term(tail(lower.clone()), -c);
    }
    out
}

/// `A_j g(x_j) M*` with column `j` of `M` zero: `(∫g)(x_j) M*`.
fn rule6(window: &[Letter]) -> OperatorExpr {
    let j = integ_axis(&window[0]);
    let (g, m) = coeff_then_subst(&window[1..], j).expect("matched");
    let m = m.expect("matched");
    let mut out = OperatorExpr::zero();
    for (b, c) in Coefficient::basis(g).integrate().terms() {
        out.add_term(word([coeff_at(j, b.clone()), subst(m.clone())]), c.clone());
    }
    out
}

/// Splits a window `A_j S₁ A_i S₂` into its two line integrators.
fn two_lines(window: &[Letter]) -> Option<(usize, BasisFunction, EliminantVector, usize, BasisFunction, EliminantVector)> {
    let j = integ_axis(&window[0]);
    let mid = 1 + window[1..].iter().position(Letter::is_integ)?;
    let i = integ_axis(&window[mid]);
    let (h, w) = line_segment(&window[1..mid], j)?;
    let (g, v) = line_segment(&window[mid + 1..], i)?;
    Some((j, h, w, i, g, v))
}

/// Conjugates `L_i(v)` past `L_k(u)`: the `v'` with `L_i(v) L_k(u) = L_k(u) L_i(v')`.
fn conjugate_tail(v: &EliminantVector, u: &EliminantVector) -> Option<EliminantVector> {
    let m = u.neg().to_matrix().compose(&v.to_matrix()).compose(&u.to_matrix());
    m.as_eliminant(v.axis)
}

/// Reorders `A_j h L_j(w)* A_i g L_i(v)*` with `i < j`:
/// `(1 − E_j*) A_i g η'_μ L_i(v')* A_j η_μ L_j(w)*`, where
/// `h(x_j − v'_j x_i) = Σ_μ η'_μ(x_i) η_μ(x_j)`.
fn rule7(window: &[Letter]) -> Option<OperatorExpr> {
    let (j, h, w, i, g, v) = two_lines(window)?;
    let v2 = conjugate_tail(&v, &w)?;
    let row = BTreeMap::from([(j, one()), (i, -v2.get(j))]);
    let expansion = basis_at_linear_form(&h, &row);
    let mut out = OperatorExpr::zero();
    for (t, c) in expansion.terms() {
        let body = [
            Letter::Integ(i),
            coeff_at(i, g.mul(&t.factor(i))),
            lmat(&v2),
            Letter::Integ(j),
            coeff_at(j, t.factor(j)),
            lmat(&w),
        ];
        out.add_term(word(body.clone()), c.clone());
        let mut evaluated = vec![subst(SubstMatrix::evaluation(j))];
        evaluated.extend(body);
        out.add_term(word(evaluated), -c.clone());
    }
    Some(out)
}

/// Coalesces `A_i h L_i(w)* A_i g L_i(v)*` with `w ≠ 0`. With `k` the first
/// row where `w` is nonzero, the inner integral moves to axis `k`:
/// `L_k(−w')* χ''_μ(x_k) (L_i(w̄)* A_i g χ'_μ L_i(v')* − A_i g χ'_μ L_i(v'+w̄)*) A_k χ_μ L_k(w')*`
/// where `h((x_k − v'_k x_i − s)/w_k)/w_k = Σ_μ χ'_μ(x_i) χ_μ(x_k) χ''_μ(s)`
/// is expanded with the slack axis `s` and `χ''` is then placed on `x_k`.
fn rule8(window: &[Letter], slack: usize) -> Option<OperatorExpr> {
    let (i, h, w, i2, g, v) = two_lines(window)?;
    debug_assert_eq!(i, i2);
    let (&k, wk) = w.tail.iter().next()?;
    let winv = one() / wk;
    let w2 = EliminantVector::from_parts(k, w.tail.range(k + 1..).map(|(&r, x)| (r, x * &winv)).collect());
    let wbar = EliminantVector::from_parts(i, BTreeMap::from([(k, wk.clone())]));
    let v2 = conjugate_tail(&v, &w2)?;
    let slack = slack.max(k + 1);
    let row = BTreeMap::from([(k, winv.clone()), (i, -v2.get(k) * &winv), (slack, -winv.clone())]);
    let expansion = basis_at_linear_form(&h, &row).scale(&winv);
    let front = subst(w2.neg().to_matrix());
    let mut out = OperatorExpr::zero();
    for (t, c) in expansion.terms() {
        let lead = coeff_at(k, t.factor(slack));
        let inner = coeff_at(i, g.mul(&t.factor(i)));
        let last = [Letter::Integ(k), coeff_at(k, t.factor(k)), lmat(&w2)];
        let mut a = vec![front.clone(), lead.clone(), lmat(&wbar), Letter::Integ(i), inner.clone(), lmat(&v2)];
        a.extend(last.clone());
        let mut b = vec![front.clone(), lead, Letter::Integ(i), inner, lmat(&v2.add(&wbar))];
        b.extend(last);
        out.add_term(word(a), c.clone());
        out.add_term(word(b), -c.clone());
    }
    Some(out)
}

/// `A_j g(x_j) A_j → (∫g)(x_j) A_j − A_j (∫g)(x_j)`.
fn rule9(window: &[Letter]) -> OperatorExpr {
    let j = integ_axis(&window[0]);
    let g = match &window[1] {
        Letter::Coeff(c) => c.factor(j),
        _ => BasisFunction::unit(),
    };
    let mut out = OperatorExpr::zero();
    for (b, c) in Coefficient::basis(g).integrate().terms() {
        out.add_term(word([coeff_at(j, b.clone()), Letter::Integ(j)]), c.clone());
        out.add_term(word([Letter::Integ(j), coeff_at(j, b.clone())]), -c.clone());
    }
    out
}
