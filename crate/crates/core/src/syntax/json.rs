//! Serde data-transfer types. Rationals travel as strings `"p"` or `"p/q"`
//! so no precision is lost.

use crate::bialgebra::{BasisFunction, Coefficient};
use crate::hierarchy::{HierarchyElement, TensorMonomial};
use crate::matrixsubst::SubstMatrix;
use crate::opring::{Letter, NormalForm, OperatorExpr, OperatorWord};
use crate::rational::{fmt_rat, parse_rat, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const EXPR_SCHEMA: &str = "rbhier/operator-expr/v1";
pub const NORMAL_FORM_SCHEMA: &str = "rbhier/normal-form/v1";

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid json: {0}")]
    Decode(#[from] serde_json::Error),
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("unexpected schema {found:?}, expected {expected:?}")]
    Schema { found: String, expected: &'static str },
    #[error("bad matrix: {0}")]
    Matrix(String),
    #[error("axes are 1-based")]
    ZeroAxis,
}

fn rat_in(s: &str) -> Result<Rational, JsonError> {
    parse_rat(s).ok_or_else(|| JsonError::Rational(s.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDto {
    pub dim: usize,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDto {
    pub k: u32,
    pub alpha: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientTermDto {
    pub k: u32,
    pub alpha: String,
    pub coef: String,
}

/// One monomial: its non-unit factors keyed by axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTermDto {
    pub coef: String,
    pub factors: Vec<FactorDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDto {
    pub axis: usize,
    pub k: u32,
    pub alpha: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LetterDto {
    Coeff(Vec<FactorDto>),
    Subst(MatrixDto),
    Integ(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprTermDto {
    pub coef: String,
    pub word: Vec<LetterDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprDto {
    pub schema: String,
    pub terms: Vec<ExprTermDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineDto {
    pub axis: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<BasisDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tail: Vec<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeDto {
    pub coef: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefix: Vec<FactorDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDto>,
    pub lines: Vec<LineDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormDto {
    pub schema: String,
    pub steps: usize,
    pub per_rule: [usize; 9],
    pub expr: ExprDto,
    pub volume_integrators: Vec<VolumeDto>,
}

pub fn matrix_to_dto(m: &SubstMatrix) -> MatrixDto {
    MatrixDto { dim: m.dim(), rows: m.rows().iter().map(|r| r.iter().map(fmt_rat).collect()).collect() }
}

pub fn matrix_from_dto(d: &MatrixDto) -> Result<SubstMatrix, JsonError> {
    if d.rows.len() != d.dim {
        return Err(JsonError::Matrix(format!("dim {} but {} rows", d.dim, d.rows.len())));
    }
    let rows = d
        .rows
        .iter()
        .map(|r| r.iter().map(|s| rat_in(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    SubstMatrix::from_rows(rows).map_err(|e| JsonError::Matrix(e.to_string()))
}

fn basis_to_dto(b: &BasisFunction) -> BasisDto {
    BasisDto { k: b.k, alpha: fmt_rat(&b.alpha) }
}

fn monomial_to_dto(m: &TensorMonomial) -> Vec<FactorDto> {
    m.nonunit().map(|(axis, b)| FactorDto { axis, k: b.k, alpha: fmt_rat(&b.alpha) }).collect()
}

fn monomial_from_dto(d: &[FactorDto]) -> Result<TensorMonomial, JsonError> {
    let mut m = TensorMonomial::unit();
    for f in d {
        if f.axis == 0 {
            return Err(JsonError::ZeroAxis);
        }
        m = m.multiply(&TensorMonomial::at(f.axis, BasisFunction::new(f.k, rat_in(&f.alpha)?)));
    }
    Ok(m)
}

pub fn coefficient_to_dto(f: &Coefficient) -> Vec<CoefficientTermDto> {
    f.terms()
        .iter()
        .map(|(b, c)| CoefficientTermDto { k: b.k, alpha: fmt_rat(&b.alpha), coef: fmt_rat(c) })
        .collect()
}

pub fn coefficient_from_dto(d: &[CoefficientTermDto]) -> Result<Coefficient, JsonError> {
    let mut out = Coefficient::zero();
    for t in d {
        out.add_term(BasisFunction::new(t.k, rat_in(&t.alpha)?), rat_in(&t.coef)?);
    }
    Ok(out)
}

pub fn function_to_dto(f: &HierarchyElement) -> Vec<FunctionTermDto> {
    f.terms().iter().map(|(m, c)| FunctionTermDto { coef: fmt_rat(c), factors: monomial_to_dto(m) }).collect()
}

pub fn function_from_dto(d: &[FunctionTermDto]) -> Result<HierarchyElement, JsonError> {
    let mut out = HierarchyElement::zero();
    for t in d {
        out.add_term(monomial_from_dto(&t.factors)?, rat_in(&t.coef)?);
    }
    Ok(out)
}

fn letter_to_dto(l: &Letter) -> LetterDto {
    match l {
        Letter::Coeff(m) => LetterDto::Coeff(monomial_to_dto(m)),
        Letter::Subst(m) => LetterDto::Subst(matrix_to_dto(m)),
        Letter::Integ(i) => LetterDto::Integ(*i),
    }
}

fn letter_from_dto(d: &LetterDto) -> Result<Letter, JsonError> {
    Ok(match d {
        LetterDto::Coeff(f) => Letter::Coeff(monomial_from_dto(f)?),
        LetterDto::Subst(m) => Letter::Subst(matrix_from_dto(m)?),
        LetterDto::Integ(0) => return Err(JsonError::ZeroAxis),
        LetterDto::Integ(i) => Letter::Integ(*i),
    })
}

fn word_to_dto(w: &OperatorWord) -> Vec<LetterDto> {
    w.letters().iter().map(letter_to_dto).collect()
}

pub fn expr_to_dto(e: &OperatorExpr) -> ExprDto {
    ExprDto {
        schema: EXPR_SCHEMA.to_string(),
        terms: e.terms().iter().map(|(w, c)| ExprTermDto { coef: fmt_rat(c), word: word_to_dto(w) }).collect(),
    }
}

pub fn expr_from_dto(d: &ExprDto) -> Result<OperatorExpr, JsonError> {
    if d.schema != EXPR_SCHEMA {
        return Err(JsonError::Schema { found: d.schema.clone(), expected: EXPR_SCHEMA });
    }
    let mut out = OperatorExpr::zero();
    for t in &d.terms {
        let letters = t.word.iter().map(letter_from_dto).collect::<Result<Vec<_>, _>>()?;
        out.add_term(OperatorWord::from_letters(letters), rat_in(&t.coef)?);
    }
    Ok(out)
}

pub fn normal_form_to_dto(nf: &NormalForm) -> NormalFormDto {
    let volume_integrators = nf
        .volume_integrators()
        .into_iter()
        .map(|(v, c)| VolumeDto {
            coef: fmt_rat(&c),
            prefix: v.b.as_ref().map(monomial_to_dto).unwrap_or_default(),
            matrix: v.m.as_ref().map(matrix_to_dto),
            lines: v
                .lines
                .iter()
                .map(|l| LineDto {
                    axis: l.axis,
                    factor: l.b.as_ref().map(basis_to_dto),
                    tail: l
                        .v
                        .as_ref()
                        .map(|v| v.tail.iter().map(|(r, x)| (*r, fmt_rat(x))).collect())
                        .unwrap_or_default(),
                })
                .collect(),
        })
        .collect();
    NormalFormDto {
        schema: NORMAL_FORM_SCHEMA.to_string(),
        steps: nf.stats.steps,
        per_rule: nf.stats.per_rule,
        expr: expr_to_dto(&nf.expr),
        volume_integrators,
    }
}

pub fn expr_to_json(e: &OperatorExpr) -> String {
    serde_json::to_string_pretty(&expr_to_dto(e)).expect("dto serializes")
}

pub fn expr_from_json(s: &str) -> Result<OperatorExpr, JsonError> {
    expr_from_dto(&serde_json::from_str(s)?)
}

pub fn normal_form_to_json(nf: &NormalForm) -> String {
    serde_json::to_string_pretty(&normal_form_to_dto(nf)).expect("dto serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_operator;

    #[test]
    fn expr_round_trip() {
        let e = parse_operator("2/3 A1 x1^2*exp(-1/2*x2) [[1,0],[3,1]]* A2 - E(2)*").unwrap();
        let s = expr_to_json(&e);
        assert!(s.contains(EXPR_SCHEMA));
        assert_eq!(expr_from_json(&s).unwrap(), e);
    }

    #[test]
    fn wrong_schema_rejected() {
        let s = r#"{"schema":"other","terms":[]}"#;
        assert!(matches!(expr_from_json(s), Err(JsonError::Schema { .. })));
        assert!(expr_from_json("{").is_err());
    }

    #[test]
    fn matrix_dto_shape() {
        let m = SubstMatrix::from_rows(vec![vec![crate::rational::rat(1, 2), crate::rational::int(0)], vec![crate::rational::int(0), crate::rational::int(1)]]).unwrap();
        let d = matrix_to_dto(&m);
        assert_eq!(d.rows[0][0], "1/2");
        assert_eq!(matrix_from_dto(&d).unwrap(), m);
    }
}
