//! Canonical text and LaTeX renderings. Text output parses back to an equal value.

use crate::bialgebra::{BasisFunction, Coefficient};
use crate::hierarchy::{HierarchyElement, TensorMonomial};
use crate::matrixsubst::SubstMatrix;
use crate::opring::{Letter, OperatorExpr, OperatorWord};
use crate::rational::{fmt_rat, Rational};
use num_traits::{One, Signed, Zero};

fn factor_text(axis: usize, b: &BasisFunction) -> String {
    let mut parts = Vec::new();
    match b.k {
        0 => {}
        1 => parts.push(format!("x{axis}")),
        k => parts.push(format!("x{axis}^{k}")),
    }
    if !b.alpha.is_zero() {
        let a = &b.alpha;
        let arg = if a.is_one() {
            format!("x{axis}")
        } else if (-a).is_one() {
            format!("-x{axis}")
        } else {
            format!("{}*x{axis}", fmt_rat(a))
        };
        parts.push(format!("exp({arg})"));
    }
    parts.join("*")
}

pub fn monomial_text(m: &TensorMonomial) -> String {
    if m.is_unit() {
        return "1".into();
    }
    m.nonunit().map(|(a, b)| factor_text(a, b)).collect::<Vec<_>>().join("*")
}

pub fn matrix_text(m: &SubstMatrix) -> String {
    let rows: Vec<String> = m
        .rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(fmt_rat).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

pub fn letter_text(l: &Letter) -> String {
    match l {
        Letter::Coeff(m) => monomial_text(m),
        Letter::Subst(m) => format!("{}*", matrix_text(m)),
        Letter::Integ(i) => format!("A{i}"),
    }
}

pub fn word_text(w: &OperatorWord) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.letters().iter().map(letter_text).collect::<Vec<_>>().join(" ")
}

/// Joins signed terms as `a + b - c`; `body` of `None` means a bare scalar.
fn signed_sum<'a>(terms: impl Iterator<Item = (&'a Rational, Option<String>)>, sep: &str) -> String {
    let mut out = String::new();
    for (k, (c, body)) in terms.enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        match body {
            None => out.push_str(&fmt_rat(&mag)),
            Some(b) if mag.is_one() => out.push_str(&b),
            Some(b) => {
                out.push_str(&fmt_rat(&mag));
                out.push_str(sep);
                out.push_str(&b);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn function_text(f: &HierarchyElement) -> String {
    signed_sum(f.terms().iter().map(|(m, c)| (c, (!m.is_unit()).then(|| monomial_text(m)))), "*")
}

pub fn coefficient_text(f: &Coefficient) -> String {
    function_text(&HierarchyElement::from_coefficient(1, f))
}

pub fn expr_text(e: &OperatorExpr) -> String {
    signed_sum(e.terms().iter().map(|(w, c)| (c, (!w.is_empty()).then(|| word_text(w)))), " ")
}

fn rat_latex(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

fn factor_latex(axis: usize, b: &BasisFunction) -> String {
    let mut s = String::new();
    match b.k {
        0 => {}
        1 => s.push_str(&var_latex(axis)),
        k => s.push_str(&format!("{}^{{{k}}}", var_latex(axis))),
    }
    if !b.alpha.is_zero() {
        let a = &b.alpha;
        let c = if a.is_one() {
            String::new()
        } else if (-a).is_one() {
            "-".into()
        } else {
            rat_latex(a)
        };
        s.push_str(&format!("e^{{{c}{}}}", var_latex(axis)));
    }
    s
}

/// `x_3`, or `x_{12}` for multi-digit indices.
fn var_latex(axis: usize) -> String {
    if axis < 10 {
        format!("x_{axis}")
    } else {
        format!("x_{{{axis}}}")
    }
}

pub fn monomial_latex(m: &TensorMonomial) -> String {
    if m.is_unit() {
        return "1".into();
    }
    m.nonunit().map(|(a, b)| factor_latex(a, b)).collect()
}

pub fn matrix_latex(m: &SubstMatrix) -> String {
    let rows: Vec<String> =
        m.rows().iter().map(|r| r.iter().map(rat_latex).collect::<Vec<_>>().join(" & ")).collect();
    format!("\\left[\\begin{{smallmatrix}}{}\\end{{smallmatrix}}\\right]^*", rows.join(" \\\\ "))
}

pub fn word_latex(w: &OperatorWord) -> String {
    let mut out = String::new();
    for l in w.letters() {
        match l {
            Letter::Coeff(m) => out.push_str(&monomial_latex(m)),
            Letter::Subst(m) => out.push_str(&matrix_latex(m)),
            Letter::Integ(i) => out.push_str(&format!("\\int^{{{}}} ", var_latex(*i))),
        }
    }
    let out = out.trim_end().to_string();
    if out.is_empty() {
        "1".into()
    } else {
        out
    }
}

pub fn expr_latex(e: &OperatorExpr) -> String {
    let terms = e.terms().iter().map(|(w, c)| (c, w));
    let mut out = String::new();
    for (k, (c, w)) in terms.enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        if w.is_empty() {
            out.push_str(&rat_latex(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&rat_latex(&mag));
                out.push(' ');
            }
            out.push_str(&word_latex(w));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn function_latex(f: &HierarchyElement) -> String {
    let mut out = String::new();
    for (k, (m, c)) in f.terms().iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        if m.is_unit() {
            out.push_str(&rat_latex(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&rat_latex(&mag));
            }
            out.push_str(&monomial_latex(m));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
