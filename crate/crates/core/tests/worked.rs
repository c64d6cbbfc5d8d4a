//! Hand-computed expectations, independent of the engine.

use rbhier::bialgebra::{BasisFunction, Coefficient};
use rbhier::hierarchy::{convolve, HierarchyElement, TensorMonomial};
use rbhier::opring::{normalize, NormalizeOptions, OperatorExpr};
use rbhier::rational::{int, rat};
use rbhier::syntax::render::{expr_latex, expr_text};
use rbhier::syntax::{parse_function, parse_operator};
use rbhier::verify::apply;

fn f(s: &str) -> HierarchyElement {
    parse_function(s).unwrap()
}

fn op(s: &str) -> OperatorExpr {
    parse_operator(s).unwrap()
}

#[test]
fn double_integral_of_one() {
    assert_eq!(apply(&op("A1 A1"), &f("1")), f("1/2*x^2"));
}

#[test]
fn integrators_on_a_product() {
    // ∫₀^x ∫₀^y s t dt ds = x²y²/4
    assert_eq!(apply(&op("A1 A2"), &f("x1*x2")), f("1/4*x1^2*x2^2"));
    assert_eq!(apply(&op("A2 A1 - A1 A2 + E(2)* A1 A2"), &f("x1*x2")), f("0"));
}

#[test]
fn shear_of_a_square() {
    let got = apply(&op("T(1; 1)*"), &f("x^2"));
    let want = HierarchyElement::from_terms([
        (TensorMonomial::at(1, BasisFunction::new(2, int(0))), int(1)),
        (TensorMonomial::from_factors(vec![BasisFunction::x(), BasisFunction::x()]), int(2)),
        (TensorMonomial::at(2, BasisFunction::new(2, int(0))), int(1)),
    ]);
    assert_eq!(got, want);
}

#[test]
fn exponential_integral() {
    // ∫₀^x e^{2t} dt = e^{2x}/2 - 1/2
    let got = Coefficient::basis(BasisFunction::exp(int(2))).integrate();
    let want = Coefficient::from_terms([(BasisFunction::exp(int(2)), rat(1, 2)), (BasisFunction::unit(), rat(-1, 2))]);
    assert_eq!(got, want);
}

#[test]
fn convolution_with_exponential() {
    // ∫₀^x (x - t) e^t dt = e^x - x - 1
    let x = Coefficient::basis(BasisFunction::x());
    let e = Coefficient::basis(BasisFunction::exp(int(1)));
    let want = Coefficient::from_terms([
        (BasisFunction::exp(int(1)), int(1)),
        (BasisFunction::x(), int(-1)),
        (BasisFunction::unit(), int(-1)),
    ]);
    assert_eq!(convolve(&x, &e), want);
}

#[test]
fn double_integral_normal_form() {
    let nf = normalize(&op("A1 A1"), &NormalizeOptions::default()).unwrap();
    assert_eq!(expr_text(&nf.expr), "x1 A1 - A1 x1");
    assert_eq!(expr_latex(&nf.expr), r"x_1\int^{x_1} - \int^{x_1} x_1");
    assert_eq!(nf.stats.per_rule[8], 1);
}

#[test]
fn scaling_inside_an_integral() {
    // ∫₀^x f(2t) dt = (1/2) ∫₀^{2x} f, i.e. A1 D(1;2)* = 1/2 D(1;2)* A1
    let nf = normalize(&op("A1 D(1; 2)*"), &NormalizeOptions::default()).unwrap();
    assert_eq!(nf.expr, op("1/2 D(1; 2)* A1"));
}

#[test]
fn evaluation_after_integration_vanishes() {
    let nf = normalize(&op("E(1)* A1"), &NormalizeOptions::default()).unwrap();
    assert!(nf.expr.is_zero());
}

#[test]
fn library_example() -> Result<(), Box<dyn std::error::Error>> {
    let e = parse_operator("A1 x1 [[1,1],[0,1]]* A2")?;
    let nf = normalize(&e, &NormalizeOptions::default())?;
    let f = parse_function("x1*exp(x2)")?;
    assert_eq!(apply(&nf.expr, &f), apply(&e, &f));
    Ok(())
}
