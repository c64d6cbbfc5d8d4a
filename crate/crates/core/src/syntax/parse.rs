//! Recursive-descent parser for functions, coefficients, matrices and
//! operator expressions.
//!
//! Function grammar:
//!
//! ```text
//! sum     := [+|-] product ((+|-) product)*
//! product := power (* power)*
//! power   := atom [^ nat]
//! atom    := rational | var | exp( sum ) | ( sum )
//! var     := x | y | z | x<nat>
//! ```
//!
//! `x`, `y`, `z` abbreviate `x1`, `x2`, `x3`. The argument of `exp` must be
//! linear without constant term, so every term stays a product of
//! univariate factors.
//!
//! Operator grammar: a signed sum of terms, each term a juxtaposition of
//! items `A<nat>`, `matrix*` and coefficient products. Matrices are
//! literals `[[1,1],[0,1]]` or `T(i; v..)`, `L(i; w..)`, `D(i; λ)`, `E(i)`,
//! `P(i j)`.

use crate::bialgebra::{BasisFunction, Coefficient};
use crate::hierarchy::{HierarchyElement, TensorMonomial};
use crate::matrixsubst::SubstMatrix;
use crate::opring::OperatorExpr;
use crate::rational::{one, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    /// Well-formed but outside the representable class.
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "semantic error",
        };
        write!(f, "{kind} at {}:{}: {}", self.line, self.column, self.message)
    }
}

type PResult<T> = Result<T, ParseError>;

const MAX_POWER: u32 = 64;

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, chars: src.char_indices().collect(), pos: 0 }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let offset = self.chars.get(pos).map_or(self.src.len(), |(o, _)| *o);
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn error_at(&self, pos: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        let (line, column) = self.location(pos);
        ParseError { kind, message: message.into(), line, column }
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, ParseErrorKind::Syntax, message)
    }

    fn skip_ws(&mut self) {
        while self.peek_raw().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).map(|(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{c}'")))
        }
    }

    fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.syntax(format!("unexpected '{c}'"))),
        }
    }

    fn digits(&mut self) -> PResult<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn nat(&mut self) -> PResult<usize> {
        let start = self.pos;
        let n = self.digits()?;
        usize::try_from(n).map_err(|_| self.error_at(start, ParseErrorKind::Syntax, "number too large"))
    }

    fn axis(&mut self) -> PResult<usize> {
        self.skip_ws();
        let start = self.pos;
        let n = self.nat()?;
        if n == 0 {
            return Err(self.error_at(start, ParseErrorKind::Semantic, "axes are 1-based"));
        }
        Ok(n)
    }

    /// Unsigned `p` or `p/q`.
    fn unsigned_rational(&mut self) -> PResult<Rational> {
        let p = self.digits()?;
        let save = self.pos;
        if self.eat('/') {
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos = save;
                return Ok(Rational::from_integer(p));
            }
            let at = self.pos;
            let q = self.digits()?;
            if q.is_zero() {
                return Err(self.error_at(at, ParseErrorKind::Semantic, "zero denominator"));
            }
            return Ok(Rational::new(p, q));
        }
        Ok(Rational::from_integer(p))
    }

    fn signed_rational(&mut self) -> PResult<Rational> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let r = self.unsigned_rational()?;
        Ok(if neg { -r } else { r })
    }

    fn rational_list(&mut self, close: char) -> PResult<Vec<Rational>> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            return Ok(out);
        }
        loop {
            out.push(self.signed_rational()?);
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    // ---- functions ----

    fn sum(&mut self) -> PResult<HierarchyElement> {
        let mut acc = HierarchyElement::zero();
        let mut sign = one();
        if self.eat('-') {
            sign = -one();
        } else {
            self.eat('+');
        }
        loop {
            let t = self.product()?;
            acc = acc.add(&t.scale(&sign));
            if self.eat('+') {
                sign = one();
            } else if self.eat('-') {
                sign = -one();
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '(' => true,
            Some('x' | 'y' | 'z') => true,
            Some('e') => self.peek_at(1) == Some('x') && self.peek_at(2) == Some('p'),
            _ => false,
        }
    }

    fn product(&mut self) -> PResult<HierarchyElement> {
        let mut acc = self.power()?;
        loop {
            let save = self.pos;
            if !self.eat('*') {
                return Ok(acc);
            }
            if !self.starts_atom() {
                self.pos = save;
                return Ok(acc);
            }
            acc = acc.multiply(&self.power()?);
        }
    }

    fn power(&mut self) -> PResult<HierarchyElement> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let at = self.pos;
            let n = self.nat()?;
            if n > MAX_POWER as usize {
                return Err(self.error_at(at, ParseErrorKind::Semantic, format!("exponent above {MAX_POWER}")));
            }
            return Ok(base.pow(n as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<HierarchyElement> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(HierarchyElement::constant(self.unsigned_rational()?)),
            Some('(') => {
                self.pos += 1;
                let s = self.sum()?;
                self.expect(')')?;
                Ok(s)
            }
            Some('e') if self.peek_at(1) == Some('x') && self.peek_at(2) == Some('p') => {
                let start = self.pos;
                self.pos += 3;
                self.expect('(')?;
                let arg = self.sum()?;
                self.expect(')')?;
                self.exponential(&arg, start)
            }
            Some('x') => {
                self.pos += 1;
                let axis = if self.peek_raw().is_some_and(|c| c.is_ascii_digit()) { self.axis()? } else { 1 };
                Ok(HierarchyElement::var(axis))
            }
            Some('y') => {
                self.pos += 1;
                Ok(HierarchyElement::var(2))
            }
            Some('z') => {
                self.pos += 1;
                Ok(HierarchyElement::var(3))
            }
            Some(c) => Err(self.syntax(format!("unexpected '{c}'"))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn exponential(&self, arg: &HierarchyElement, at: usize) -> PResult<HierarchyElement> {
        let mut mono = TensorMonomial::unit();
        for (m, c) in arg.terms() {
            let factors: Vec<_> = m.nonunit().collect();
            match factors.as_slice() {
                [] => {
                    return Err(self.error_at(
                        at,
                        ParseErrorKind::Semantic,
                        "exp of a nonzero constant is not rational",
                    ))
                }
                [(a, b)] if b.k == 1 && b.alpha.is_zero() => mono.set(*a, BasisFunction::exp(c.clone())),
                _ => {
                    return Err(self.error_at(
                        at,
                        ParseErrorKind::Semantic,
                        "non-separated kernel: exp needs a linear argument",
                    ))
                }
            }
        }
        Ok(HierarchyElement::monomial(mono))
    }

    // ---- matrices ----

    fn starts_matrix(&mut self) -> bool {
        match self.peek() {
            Some('[') => true,
            Some('T' | 'L' | 'D' | 'E' | 'P') => self.peek_at(1).is_some_and(|c| c == '(' || c.is_whitespace()),
            _ => false,
        }
    }

    fn matrix(&mut self) -> PResult<SubstMatrix> {
        let start = self.pos;
        let semantic = |p: &Self, e: crate::matrixsubst::MatrixError| p.error_at(start, ParseErrorKind::Semantic, e.to_string());
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let mut rows = Vec::new();
                if !self.eat(']') {
                    loop {
                        self.expect('[')?;
                        rows.push(self.rational_list(']')?);
                        self.expect(']')?;
                        if !self.eat(',') {
                            break;
                        }
                    }
                    self.expect(']')?;
                }
                SubstMatrix::from_rows(rows).map_err(|e| semantic(self, e))
            }
            Some(c @ ('T' | 'L' | 'D' | 'E' | 'P')) => {
                self.pos += 1;
                self.expect('(')?;
                let i = self.axis()?;
                let m = match c {
                    'T' | 'L' | 'D' => {
                        self.expect(';')?;
                        let v = self.rational_list(')')?;
                        match c {
                            'T' => SubstMatrix::transvection(i, &v),
                            'L' => SubstMatrix::eliminant(i, &v),
                            _ => {
                                let [lambda] = v.as_slice() else {
                                    return Err(self.error_at(start, ParseErrorKind::Syntax, "D takes one scalar"));
                                };
                                SubstMatrix::scaling(i, lambda)
                            }
                        }
                    }
                    'E' => SubstMatrix::evaluation(i),
                    _ => {
                        self.eat(',');
                        let j = self.axis()?;
                        SubstMatrix::transposition(i, j)
                    }
                };
                self.expect(')')?;
                Ok(m)
            }
            _ => Err(self.syntax("expected a matrix")),
        }
    }

    // ---- operators ----

    fn operator(&mut self) -> PResult<OperatorExpr> {
        let mut acc = OperatorExpr::zero();
        let mut sign = one();
        if self.eat('-') {
            sign = -one();
        } else {
            self.eat('+');
        }
        loop {
            let t = self.term()?;
            acc = acc.add(&t.scale(&sign));
            if self.eat('+') {
                sign = one();
            } else if self.eat('-') {
                sign = -one();
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<OperatorExpr> {
        let mut acc = OperatorExpr::one();
        let mut items = 0;
        loop {
            let item = match self.peek() {
                Some('A') => {
                    self.pos += 1;
                    OperatorExpr::integ(self.axis()?)
                }
                _ if self.starts_matrix() => {
                    let m = self.matrix()?;
                    self.expect('*')?;
                    OperatorExpr::subst(m)
                }
                _ if self.starts_atom() => OperatorExpr::coefficient(&self.product()?),
                _ => break,
            };
            acc = acc.multiply(&item);
            items += 1;
        }
        if items == 0 {
            return Err(self.syntax("expected an operator term"));
        }
        Ok(acc)
    }
}

/// Parses a multivariate exponential polynomial.
pub fn parse_function(text: &str) -> Result<HierarchyElement, ParseError> {
    let mut p = Parser::new(text);
    let f = p.sum()?;
    p.finish()?;
    Ok(f)
}

/// Parses a univariate exponential polynomial in `x` (or `x1`).
pub fn parse_coefficient(text: &str) -> Result<Coefficient, ParseError> {
    let f = parse_function(text)?;
    f.as_coefficient(1).ok_or_else(|| ParseError {
        kind: ParseErrorKind::Semantic,
        message: "expected a function of x alone".into(),
        line: 1,
        column: 1,
    })
}

pub fn parse_matrix(text: &str) -> Result<SubstMatrix, ParseError> {
    let mut p = Parser::new(text);
    let m = p.matrix()?;
    p.finish()?;
    Ok(m)
}

pub fn parse_operator(text: &str) -> Result<OperatorExpr, ParseError> {
    let mut p = Parser::new(text);
    if p.peek().is_none() {
        return Err(p.syntax("empty input"));
    }
    let e = p.operator()?;
    p.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opring::Letter;
    use crate::rational::{int, rat};

    #[test]
    fn integrator() {
        assert_eq!(parse_operator("A1").unwrap(), OperatorExpr::integ(1));
    }

    #[test]
    fn four_letter_word() {
        let e = parse_operator("A1 x1 [[1,1],[0,1]]* A2").unwrap();
        assert_eq!(e.len(), 1);
        let (w, c) = e.terms().iter().next().unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(c, &int(1));
        assert!(matches!(w.letters()[2], Letter::Subst(_)));
    }

    #[test]
    fn non_separated_kernel_is_semantic() {
        let err = parse_function("exp(x1*x2)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Semantic);
        assert!(parse_function("exp(1)").is_err());
        assert_eq!(parse_function("exp(0)").unwrap(), HierarchyElement::one());
    }

    #[test]
    fn coefficient_grammar() {
        let f = parse_coefficient("3/2*x^2*exp(-1/3*x) + x - 5").unwrap();
        let want = Coefficient::from_terms([
            (BasisFunction::new(2, rat(-1, 3)), rat(3, 2)),
            (BasisFunction::x(), int(1)),
            (BasisFunction::unit(), int(-5)),
        ]);
        assert_eq!(f, want);
        assert!(parse_coefficient("x2").is_err());
    }

    #[test]
    fn separated_exponent_of_sum() {
        let f = parse_function("exp(x1 + 2*x2)").unwrap();
        let g = parse_function("exp(x1)*exp(2*x2)").unwrap();
        assert_eq!(f, g);
        let h = parse_function("(x + y)^2").unwrap();
        assert_eq!(h, parse_function("x^2 + 2*x*y + y^2").unwrap());
    }

    #[test]
    fn named_matrices() {
        assert_eq!(parse_matrix("T(1; 1)").unwrap(), SubstMatrix::transvection(1, &[int(1)]));
        assert_eq!(parse_matrix("L(2; 0, -3)").unwrap(), SubstMatrix::eliminant(2, &[int(0), int(-3)]));
        assert_eq!(parse_matrix("D(2; 1/2)").unwrap(), SubstMatrix::scaling(2, &rat(1, 2)));
        assert_eq!(parse_matrix("E(3)").unwrap(), SubstMatrix::evaluation(3));
        assert_eq!(parse_matrix("P(1 2)").unwrap(), SubstMatrix::transposition(1, 2));
        assert!(parse_matrix("[]").unwrap().is_identity());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_operator("A1 +\n  [[1,2],[3]]*").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Semantic);
        assert_eq!(err.line, 2);
        let err = parse_operator("A1 )").unwrap_err();
        assert_eq!((err.line, err.column), (1, 4));
        assert!(parse_operator("A0").is_err());
        assert!(parse_operator("").is_err());
        assert!(parse_function("1/0").is_err());
    }

    #[test]
    fn scalar_prefixes_and_signs() {
        let e = parse_operator("-3/2 x1 A1 + 2").unwrap();
        let w = crate::opring::OperatorWord::from_letters([
            Letter::Coeff(TensorMonomial::at(1, BasisFunction::x())),
            Letter::Integ(1),
        ]);
        assert_eq!(e.terms().get(&w), Some(&rat(-3, 2)));
        assert_eq!(e.terms().get(&crate::opring::OperatorWord::empty()), Some(&int(2)));
    }
}
