//! Axiom suites for the coefficient bialgebra and the function hierarchy.
//!
//! Bialgebra laws are checked exhaustively on basis functions. Hierarchy
//! identities are operator equations checked through the oracle on random
//! functions.

use super::gen::{Gen, TrialConfig};
use super::oracle::apply;
use super::report::{CheckResult, Failure};
use crate::bialgebra::{BasisFunction, Coefficient, Tensor};
use crate::hierarchy::{convolve, HierarchyElement};
use crate::matrixsubst::{EliminantVector, SubstMatrix};
use crate::opring::OperatorExpr;
use crate::rational::{factorial, int, rat, Rational};
use crate::syntax::render::{coefficient_text, expr_text, function_text, matrix_text};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

const BIALGEBRA: &str = "bialgebra";
const HIERARCHY: &str = "hierarchy";

/// Frequencies and degree bound of the exhaustive bialgebra checks.
pub fn bialgebra_alphas() -> Vec<Rational> {
    vec![int(-2), int(-1), rat(-1, 2), int(0), rat(1, 2), int(1), int(2)]
}

pub const BIALGEBRA_MAX_K: u32 = 5;

pub fn bialgebra_basis() -> Vec<BasisFunction> {
    bialgebra_alphas()
        .into_iter()
        .flat_map(|a| (0..=BIALGEBRA_MAX_K).map(move |k| BasisFunction::new(k, a.clone())))
        .collect()
}

fn basis_failure(trial: usize, b: &BasisFunction, detail: String) -> Failure {
    Failure {
        trial,
        instance: coefficient_text(&Coefficient::basis(b.clone())),
        function: String::new(),
        detail,
    }
}

fn per_basis(name: &str, check: impl Fn(&BasisFunction) -> Result<(), String> + Sync) -> CheckResult {
    let basis = bialgebra_basis();
    let outcomes = basis
        .par_iter()
        .enumerate()
        .map(|(t, b)| check(b).map_err(|d| basis_failure(t, b, d)))
        .collect();
    CheckResult::from_outcomes(BIALGEBRA, name, outcomes)
}

fn eq_coeff(lhs: &Coefficient, rhs: &Coefficient) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{} != {}", coefficient_text(lhs), coefficient_text(rhs)))
    }
}

fn eq_tensor(lhs: &Tensor, rhs: &Tensor) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{lhs:?} != {rhs:?}"))
    }
}

fn unit(b: &BasisFunction) -> Coefficient {
    Coefficient::basis(b.clone())
}

/// Weight-zero Rota-Baxter axiom on all pairs of basis functions.
fn rota_baxter() -> CheckResult {
    let basis = bialgebra_basis();
    let pairs: Vec<_> = basis.iter().flat_map(|a| basis.iter().map(move |b| (a, b))).collect();
    let outcomes = pairs
        .par_iter()
        .enumerate()
        .map(|(t, (a, b))| {
            let (f, g) = (unit(a), unit(b));
            let (pf, pg) = (f.integrate(), g.integrate());
            let lhs = pf.multiply(&pg);
            let rhs = f.multiply(&pg).integrate().add(&g.multiply(&pf).integrate());
            eq_coeff(&lhs, &rhs).map_err(|d| Failure {
                trial: t,
                instance: format!("{} , {}", coefficient_text(&f), coefficient_text(&g)),
                function: String::new(),
                detail: d,
            })
        })
        .collect();
    CheckResult::from_outcomes(BIALGEBRA, "rota-baxter", outcomes)
}

fn scaling_pairs(name: &str, check: impl Fn(&BasisFunction, &Rational, &Rational) -> Result<(), String> + Sync) -> CheckResult {
    let alphas = bialgebra_alphas();
    let mut cases = Vec::new();
    for b in bialgebra_basis() {
        for l in &alphas {
            for m in &alphas {
                cases.push((b.clone(), l.clone(), m.clone()));
            }
        }
    }
    let outcomes = cases
        .par_iter()
        .enumerate()
        .map(|(t, (b, l, m))| check(b, l, m).map_err(|d| basis_failure(t, b, format!("λ={l} μ={m}: {d}"))))
        .collect();
    CheckResult::from_outcomes(BIALGEBRA, name, outcomes)
}

/// Every bialgebra law on basis functions with `k ≤ 5`.
pub fn check_bialgebra_axioms() -> Vec<CheckResult> {
    let mut out = vec![rota_baxter()];
    out.push(per_basis("coassociativity", |b| {
        let d = unit(b).coproduct();
        eq_tensor(&d.coproduct_slot(0), &d.coproduct_slot(1))?;
        eq_tensor(&unit(b).iterated_coproduct(3), &d.coproduct_slot(1))
    }));
    out.push(per_basis("counit", |b| {
        let d = unit(b).coproduct();
        let id = Tensor::from_coefficient(&unit(b));
        eq_tensor(&d.counit_slot(0), &id)?;
        eq_tensor(&d.counit_slot(1), &id)
    }));
    out.push(per_basis("fundamental-theorem", |b| {
        let f = unit(b);
        eq_coeff(&f.integrate().derivative(), &f)?;
        eq_coeff(&Coefficient::constant(f.integrate().counit()), &Coefficient::zero())?;
        eq_coeff(&f.ev().add(&f.derivative().integrate()), &f)
    }));
    out.push(per_basis("antipode", |b| {
        let f = unit(b);
        let lhs = f.coproduct().map_slot(1, |c| unit(c).antipode()).contract();
        eq_coeff(&lhs, &f.ev())
    }));
    out.push(per_basis("horizontal-substitution", |b| {
        let f = unit(b);
        let pf = f.integrate();
        let lhs = pf.coproduct();
        let rhs = f
            .coproduct()
            .map_slot(0, |c| unit(c).integrate())
            .add(&pf.coproduct().map_slot(0, |c| unit(c).ev()));
        eq_tensor(&lhs, &rhs)
    }));
    out.push(scaling_pairs("scaling-semiring", |b, l, m| {
        let f = unit(b);
        eq_coeff(&f.convolve_scalings(l, m), &f.scale_arg(&(l + m)))?;
        eq_coeff(&f.scale_arg(m).scale_arg(l), &f.scale_arg(&(l * m)))
    }));
    out.push(scaling_pairs("diagonal-substitution", |b, l, _| {
        if l.is_zero() {
            return Ok(());
        }
        let f = unit(b);
        eq_coeff(&f.scale_arg(l).integrate(), &f.integrate().scale_arg(l).scale(&l.recip()))
    }));
    out
}

/// `P(1)^i = i! P^i(1)` for `i ≤ max`.
pub fn check_polynomial_embedding(max: u32) -> CheckResult {
    let p1 = Coefficient::one().integrate();
    let outcomes = (0..=max)
        .map(|i| {
            let lhs = p1.pow(i);
            let mut iter = Coefficient::one();
            for _ in 0..i {
                iter = iter.integrate();
            }
            eq_coeff(&lhs, &iter.scale(&factorial(i))).map_err(|d| Failure {
                trial: i as usize,
                instance: format!("i={i}"),
                function: String::new(),
                detail: d,
            })
        })
        .collect();
    CheckResult::from_outcomes(BIALGEBRA, "polynomial-embedding", outcomes)
}

// ---- hierarchy ----

/// An operator identity instance: both sides and the test function.
pub struct Instance {
    pub lhs: OperatorExpr,
    pub rhs: OperatorExpr,
    pub f: HierarchyElement,
}

pub(crate) fn compare_on(lhs: &OperatorExpr, rhs: &OperatorExpr, f: &HierarchyElement, trial: usize) -> Result<(), Failure> {
    let (l, r) = (apply(lhs, f), apply(rhs, f));
    if l == r {
        Ok(())
    } else {
        Err(Failure {
            trial,
            instance: format!("{}  =  {}", expr_text(lhs), expr_text(rhs)),
            function: function_text(f),
            detail: format!("{} != {}", function_text(&l), function_text(&r)),
        })
    }
}

fn identity_suite(cfg: &TrialConfig, salt: u64, name: &str, build: impl Fn(&mut Gen) -> Instance + Sync) -> CheckResult {
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut g = Gen::new(cfg, salt, t);
            let inst = build(&mut g);
            compare_on(&inst.lhs, &inst.rhs, &inst.f, t)
        })
        .collect();
    CheckResult::from_outcomes(HIERARCHY, name, outcomes)
}

fn property_suite(
    cfg: &TrialConfig,
    salt: u64,
    name: &str,
    check: impl Fn(&mut Gen) -> Result<(), (String, String)> + Sync,
) -> CheckResult {
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut g = Gen::new(cfg, salt, t);
            check(&mut g).map_err(|(instance, detail)| Failure { trial: t, instance, function: String::new(), detail })
        })
        .collect();
    CheckResult::from_outcomes(HIERARCHY, name, outcomes)
}

fn a(i: usize) -> OperatorExpr {
    OperatorExpr::integ(i)
}

fn s(m: SubstMatrix) -> OperatorExpr {
    OperatorExpr::subst(m)
}

fn prod(factors: &[OperatorExpr]) -> OperatorExpr {
    factors.iter().fold(OperatorExpr::one(), |acc, f| acc.multiply(f))
}

fn one_minus_eval(i: usize) -> OperatorExpr {
    OperatorExpr::one().sub(&s(SubstMatrix::evaluation(i)))
}

fn commutator(x: &OperatorExpr, y: &OperatorExpr) -> OperatorExpr {
    x.multiply(y).sub(&y.multiply(x))
}

fn unit_row(axis: usize, row: usize) -> EliminantVector {
    EliminantVector::new(axis, BTreeMap::from([(row, Rational::one())])).expect("row below axis")
}

/// Random tail on rows `> t` up to `n`.
fn tail_below(g: &mut Gen, axis: usize, t: usize, n: usize) -> EliminantVector {
    let mut tail = BTreeMap::new();
    for r in t + 1..=n {
        if g.chance(0.6) {
            tail.insert(r, g.entry());
        }
    }
    EliminantVector::new(axis, tail).expect("rows below axis")
}

/// General vertical rule on axis `j` shearing into row `t > j`, with an
/// optional coefficient `g(x_j)` handled by a slack variable.
fn vertical_instance(g: &mut Gen, j: usize, t: usize, n: usize, coeff: Option<Coefficient>) -> Instance {
    let vp = tail_below(g, t, t, n);
    let mut w = vp.clone();
    w.axis = j;
    let w = w.add(&unit_row(j, t));
    let lj = s(unit_row(j, t).to_matrix());
    let middle = commutator(&lj, &a(j));
    let f = g.function(n);
    match coeff {
        None => Instance {
            lhs: prod(&[a(j), s(w.to_matrix()), a(j)]),
            rhs: prod(&[s(vp.neg().to_matrix()), middle, a(t), s(vp.to_matrix())]),
            f,
        },
        Some(c) => {
            let slack = n + 1;
            let mut j_rows: Vec<Vec<Rational>> = (1..=slack)
                .map(|r| (1..=slack).map(|c| if r == c && r <= n { Rational::one() } else { Rational::zero() }).collect())
                .collect();
            j_rows[slack - 1][t - 1] = Rational::one();
            let jmat = SubstMatrix::from_rows(j_rows).expect("square");
            let mut row = BTreeMap::new();
            row.insert(t, Rational::one());
            row.insert(slack, -Rational::one());
            let gbar = HierarchyElement::from_coefficient(1, &c).substitute(&row_matrix(&row, slack));
            Instance {
                lhs: prod(&[a(j), OperatorExpr::coefficient(&HierarchyElement::from_coefficient(j, &c)), s(w.to_matrix()), a(j)]),
                rhs: prod(&[
                    s(vp.neg().to_matrix()),
                    s(jmat),
                    middle,
                    a(t),
                    OperatorExpr::coefficient(&gbar),
                    s(vp.to_matrix()),
                ]),
                f,
            }
        }
    }
}

/// Matrix whose first row is `row` and which is the identity elsewhere.
fn row_matrix(row: &BTreeMap<usize, Rational>, n: usize) -> SubstMatrix {
    let rows = (1..=n)
        .map(|r| {
            (1..=n)
                .map(|c| {
                    if r == 1 {
                        row.get(&c).cloned().unwrap_or_else(Rational::zero)
                    } else if r == c {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    SubstMatrix::from_rows(rows).expect("square")
}

/// Every hierarchy identity, `cfg.trials` random instances each.
pub fn check_hierarchy_axioms(cfg: &TrialConfig) -> Vec<CheckResult> {
    let n_max = cfg.max_vars.max(2);
    let mut out = Vec::new();
    out.push(identity_suite(cfg, 201, "diagonal-rule", |g| {
        let lambda = g.nonzero();
        let d = s(SubstMatrix::scaling(1, &lambda));
        Instance { lhs: a(1).multiply(&d), rhs: d.multiply(&a(1)).scale(&lambda.recip()), f: g.function_any() }
    }));
    out.push(identity_suite(cfg, 202, "diagonal-rule-general", |g| {
        let i = g.axis();
        let lambda = g.nonzero();
        let d = s(SubstMatrix::scaling(i, &lambda));
        Instance { lhs: a(i).multiply(&d), rhs: d.multiply(&a(i)).scale(&lambda.recip()), f: g.function_any() }
    }));
    out.push(identity_suite(cfg, 203, "horizontal-rule", |g| {
        let t = s(SubstMatrix::transvection(1, &[int(1)]));
        Instance { lhs: a(1).multiply(&t), rhs: prod(&[one_minus_eval(1), t, a(1)]), f: g.function(n_max) }
    }));
    out.push(identity_suite(cfg, 204, "horizontal-rule-general", |g| {
        let j = g.range(1, n_max);
        let i = loop {
            let i = g.range(1, n_max);
            if i != j {
                break i;
            }
        };
        let t = s(SubstMatrix::transvection_sparse(j, &BTreeMap::from([(i, Rational::one())])));
        Instance { lhs: a(j).multiply(&t), rhs: prod(&[one_minus_eval(j), t, a(j)]), f: g.function(n_max) }
    }));
    out.push(identity_suite(cfg, 205, "general-transvection", |g| {
        let i = g.range(1, n_max);
        let v: BTreeMap<usize, Rational> = (1..=n_max).filter(|&c| c != i).map(|c| (c, g.entry())).collect();
        let t = s(SubstMatrix::transvection_sparse(i, &v));
        Instance { lhs: a(i).multiply(&t), rhs: prod(&[one_minus_eval(i), t, a(i)]), f: g.function(n_max) }
    }));
    out.push(identity_suite(cfg, 206, "vertical-rule", |g| {
        let n = g.range(2, n_max);
        vertical_instance(g, 1, 2, n, None)
    }));
    out.push(identity_suite(cfg, 207, "vertical-rule-general", |g| {
        let n = g.range(2, n_max);
        let j = g.range(1, n - 1);
        let t = g.range(j + 1, n);
        vertical_instance(g, j, t, n, None)
    }));
    out.push(identity_suite(cfg, 208, "vertical-rule-slack", |g| {
        let n = g.range(2, n_max);
        let j = g.range(1, n - 1);
        let t = g.range(j + 1, n);
        let c = g.coefficient();
        vertical_instance(g, j, t, n, Some(c))
    }));
    out.push(identity_suite(cfg, 209, "vertical-rule-index-set", |g| {
        // Λ ⊂ {1..n-1}; relative index i means absolute row i + 1.
        let n = g.range(2, n_max);
        let mut lambda_set: BTreeSet<usize> = (1..n).filter(|_| g.chance(0.5)).collect();
        if lambda_set.is_empty() {
            lambda_set.insert(g.range(1, n - 1));
        }
        let lam = *lambda_set.iter().next().expect("nonempty");
        let rows: BTreeMap<usize, Rational> = lambda_set.iter().map(|&i| (i + 1, Rational::one())).collect();
        let rest: BTreeMap<usize, Rational> = lambda_set.iter().skip(1).map(|&i| (i + 1, Rational::one())).collect();
        let w = EliminantVector::new(1, rows).expect("rows below 1");
        let vp = EliminantVector::new(lam + 1, rest).expect("rows below pivot");
        let middle = commutator(&s(unit_row(1, lam + 1).to_matrix()), &a(1));
        Instance {
            lhs: prod(&[a(1), s(w.to_matrix()), a(1)]),
            rhs: prod(&[s(vp.neg().to_matrix()), middle, a(lam + 1), s(vp.to_matrix())]),
            f: g.function(n),
        }
    }));
    out.push(identity_suite(cfg, 210, "block-substitution-commutes", |g| {
        // ∫^{x_k} commutes with (I_m ⊕ M)* for k ≤ m.
        let n = g.range(2, n_max);
        let m = g.range(1, n - 1);
        let k = g.range(1, m);
        let block = g.matrix(n - m);
        let rows = (1..=n)
            .map(|r| {
                (1..=n)
                    .map(|c| match (r <= m, c <= m) {
                        (true, true) if r == c => Rational::one(),
                        (false, false) => block.get(r - m, c - m),
                        _ => Rational::zero(),
                    })
                    .collect()
            })
            .collect();
        let big = s(SubstMatrix::from_rows(rows).expect("square"));
        Instance { lhs: a(k).multiply(&big), rhs: big.multiply(&a(k)), f: g.function(n) }
    }));
    out.push(identity_suite(cfg, 211, "permutation-conjugation", |g| {
        let i = g.range(1, n_max);
        let j = g.range(1, n_max);
        let tau = s(SubstMatrix::transposition(i.min(j), i.max(j)));
        Instance { lhs: tau.multiply(&a(i)), rhs: a(j).multiply(&tau), f: g.function(n_max) }
    }));
    out.push(identity_suite(cfg, 212, "evaluation-commutes", |g| {
        let i = g.range(1, n_max);
        let j = loop {
            let j = g.range(1, n_max);
            if j != i {
                break j;
            }
        };
        let e = s(SubstMatrix::evaluation(j));
        Instance { lhs: e.multiply(&a(i)), rhs: a(i).multiply(&e), f: g.function(n_max) }
    }));
    out.push(identity_suite(cfg, 213, "evaluation-kills-integral", |g| {
        let i = g.range(1, n_max);
        Instance { lhs: s(SubstMatrix::evaluation(i)).multiply(&a(i)), rhs: OperatorExpr::zero(), f: g.function(n_max) }
    }));
    out.push(identity_suite(cfg, 214, "integrators-commute", |g| {
        let (i, j) = (g.range(1, n_max), g.range(1, n_max));
        Instance { lhs: a(i).multiply(&a(j)), rhs: a(j).multiply(&a(i)), f: g.function(n_max) }
    }));
    out.push(property_suite(cfg, 215, "contravariance", |g| {
        let n = g.range(1, n_max);
        let (m1, m2, f) = (g.matrix(n), g.matrix(n), g.function(n));
        let lhs = f.substitute(&m1.compose(&m2));
        let rhs = f.substitute(&m1).substitute(&m2);
        if lhs == rhs {
            Ok(())
        } else {
            Err((format!("M={} N={} f={}", matrix_text(&m1), matrix_text(&m2), function_text(&f)), "(MN)* f != N* M* f".into()))
        }
    }));
    out.push(property_suite(cfg, 216, "straightness", |g| {
        let n = g.range(1, n_max);
        let big = g.matrix(n + 1);
        let f = g.function(n);
        if f.substitute(&big) == f.substitute(&big.cutoff(n)) {
            Ok(())
        } else {
            Err((format!("M={} f={}", matrix_text(&big), function_text(&f)), "cut-off changes the action".into()))
        }
    }));
    out.push(property_suite(cfg, 217, "evaluation-grading", |g| {
        let n = g.range(1, n_max);
        let f = g.function(n);
        let e = f.evaluate_axis(n);
        let ok = e.variable_support().iter().all(|&k| k < n) && e == f.substitute(&SubstMatrix::evaluation(n));
        if ok {
            Ok(())
        } else {
            Err((function_text(&f), format!("E_{n} f = {}", function_text(&e))))
        }
    }));
    out.push(property_suite(cfg, 218, "component-expansion", |g| {
        let n = g.range(1, n_max);
        let f = g.function(n).substitute(&g.matrix(n));
        let split: BTreeSet<usize> = (1..=n).filter(|_| g.chance(0.5)).collect();
        let exp = f.component_expansion(&split);
        let parts_ok = exp.terms.iter().all(|t| {
            t.inner.support().is_subset(&split) && t.outer.support().is_disjoint(&split)
        });
        if parts_ok && exp.recombine() == f {
            Ok(())
        } else {
            Err((function_text(&f), format!("split {split:?} does not recombine")))
        }
    }));
    out.push(property_suite(cfg, 219, "duhamel-convolution", |g| {
        let (f, h) = (g.coefficient(), g.coefficient());
        let fh = convolve(&f, &h);
        let ok = fh == convolve(&h, &f) && convolve(&Coefficient::one(), &h) == h.integrate();
        if ok {
            Ok(())
        } else {
            Err((format!("{} , {}", coefficient_text(&f), coefficient_text(&h)), coefficient_text(&fh)))
        }
    }));
    out
}
