use proptest::prelude::*;
use rbhier::bialgebra::{BasisFunction, Coefficient};
use rbhier::opring::{apply_rule, compare, find_redex, normalize, term_measure, MeasureOrdering, NormalizeOptions, OperatorExpr};
use rbhier::rational::{fmt_rat, parse_rat, Rational};
use rbhier::syntax::json::{expr_from_json, expr_to_json};
use rbhier::syntax::parse_operator;
use rbhier::syntax::render::expr_text;
use rbhier::verify::{apply, Gen, TrialConfig};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn basis() -> impl Strategy<Value = BasisFunction> {
    (0u32..=4, prop::sample::select(vec![-2i64, -1, 0, 0, 1, 2])).prop_map(|(k, a)| BasisFunction::new(k, Rational::from_integer(a.into())))
}

fn coefficient() -> impl Strategy<Value = Coefficient> {
    prop::collection::vec((basis(), small_rat()), 0..4).prop_map(Coefficient::from_terms)
}

fn gen(seed: u64) -> Gen {
    Gen::new(&TrialConfig { seed, ..Default::default() }, 0, 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(r in small_rat()) {
        prop_assert_eq!(parse_rat(&fmt_rat(&r)), Some(r));
    }

    #[test]
    fn integral_is_a_right_inverse_of_the_derivative(f in coefficient()) {
        let p = f.integrate();
        prop_assert_eq!(p.derivative(), f);
        prop_assert_eq!(p.counit(), Rational::from_integer(0.into()));
    }

    #[test]
    fn rota_baxter_on_sums(f in coefficient(), g in coefficient()) {
        let (pf, pg) = (f.integrate(), g.integrate());
        prop_assert_eq!(pf.multiply(&pg), f.multiply(&pg).integrate().add(&g.multiply(&pf).integrate()));
    }

    #[test]
    fn scaling_is_multiplicative(f in coefficient(), l in small_rat(), m in small_rat()) {
        prop_assert_eq!(f.scale_arg(&m).scale_arg(&l), f.scale_arg(&(&l * &m)));
        prop_assert_eq!(f.convolve_scalings(&l, &m), f.scale_arg(&(l + m)));
    }

    #[test]
    fn substitution_is_contravariant(seed in any::<u64>()) {
        let mut g = gen(seed);
        let n = g.range(1, 3);
        let (m, k, f) = (g.matrix(n), g.matrix(n), g.function(n));
        prop_assert_eq!(f.substitute(&m.compose(&k)), f.substitute(&m).substitute(&k));
    }

    #[test]
    fn text_and_json_round_trip(seed in any::<u64>()) {
        let mut g = gen(seed);
        let n = g.range(1, 4);
        let e = OperatorExpr::word(g.word(n, 6)).add(&OperatorExpr::word(g.word(n, 4)).scale(&g.nonzero()));
        prop_assert_eq!(parse_operator(&expr_text(&e)).unwrap(), e.clone());
        prop_assert_eq!(expr_from_json(&expr_to_json(&e)).unwrap(), e);
    }

    #[test]
    fn each_step_lowers_the_measure(seed in any::<u64>()) {
        let mut g = gen(seed);
        let n = g.range(1, 4);
        let w = g.word(n, 6);
        if let Some(r) = find_redex(&w) {
            let before = term_measure(&w);
            for out in apply_rule(&w, r).unwrap().terms().keys() {
                prop_assert_eq!(compare(&term_measure(out), &before), MeasureOrdering::Less);
            }
        }
    }

    #[test]
    fn normal_forms_act_like_the_input(seed in any::<u64>()) {
        let mut g = gen(seed);
        let n = g.range(1, 3);
        let w = OperatorExpr::word(g.word(n, 5));
        let nf = normalize(&w, &NormalizeOptions::default()).unwrap();
        let f = g.function(n);
        prop_assert_eq!(apply(&nf.expr, &f), apply(&w, &f));
    }
}
