//! Reference semantics: apply an operator expression to a function by
//! acting letter by letter, rightmost letter first.

use crate::hierarchy::HierarchyElement;
use crate::opring::{Letter, OperatorExpr, OperatorWord};

pub fn apply_letter(letter: &Letter, f: &HierarchyElement) -> HierarchyElement {
    match letter {
        Letter::Coeff(m) => HierarchyElement::monomial(m.clone()).multiply(f),
        Letter::Subst(m) => f.substitute(m),
        Letter::Integ(i) => f.integrate_axis(*i),
    }
}

pub fn apply_word(w: &OperatorWord, f: &HierarchyElement) -> HierarchyElement {
    w.letters().iter().rev().fold(f.clone(), |acc, l| apply_letter(l, &acc))
}

pub fn apply(e: &OperatorExpr, f: &HierarchyElement) -> HierarchyElement {
    let mut out = HierarchyElement::zero();
    for (w, c) in e.terms() {
        out = out.add(&apply_word(w, f).scale(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_function, parse_operator};

    #[test]
    fn integrate_then_multiply() {
        let e = parse_operator("x1 A1").unwrap();
        let f = parse_function("1").unwrap();
        assert_eq!(apply(&e, &f), parse_function("x^2").unwrap());
    }

    #[test]
    fn substitution_swaps() {
        let e = parse_operator("P(1 2)*").unwrap();
        let f = parse_function("x1^2*x2").unwrap();
        assert_eq!(apply(&e, &f), parse_function("x2^2*x1").unwrap());
    }

    #[test]
    fn shear() {
        // x1 -> x1, x2 -> x1 + x2
        let e = parse_operator("[[1,0],[1,1]]*").unwrap();
        let f = parse_function("x2").unwrap();
        assert_eq!(apply(&e, &f), parse_function("x1 + x2").unwrap());
    }
}
