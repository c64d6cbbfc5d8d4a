//! Multivariate exponential polynomials: the tensor hierarchy `⊕_n B^{⊗n}`.
//!
//! Slot `i` of a tensor monomial is the factor in `x_i`. Monomials are
//! stored without trailing unit factors, so every element lives in all
//! sufficiently large grades at once.

use crate::bialgebra::{integrate_basis, BasisFunction, Coefficient};
use crate::matrixsubst::SubstMatrix;
use crate::rational::{one, zero, Rational};
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// `b_1 ⊗ ... ⊗ b_n`, trailing units trimmed; empty is the scalar 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TensorMonomial {
    factors: Vec<BasisFunction>,
}

impl TensorMonomial {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn from_factors(mut factors: Vec<BasisFunction>) -> Self {
        while factors.last().is_some_and(BasisFunction::is_unit) {
            factors.pop();
        }
        Self { factors }
    }

    /// A single factor `b` in slot `axis` (1-based).
    pub fn at(axis: usize, b: BasisFunction) -> Self {
        let mut m = Self::unit();
        m.set(axis, b);
        m
    }

    pub fn factors(&self) -> &[BasisFunction] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor(&self, axis: usize) -> BasisFunction {
        self.factors.get(axis - 1).cloned().unwrap_or_else(BasisFunction::unit)
    }

    pub fn set(&mut self, axis: usize, b: BasisFunction) {
        if self.factors.len() < axis {
            if b.is_unit() {
                return;
            }
            self.factors.resize(axis, BasisFunction::unit());
        }
        self.factors[axis - 1] = b;
        while self.factors.last().is_some_and(BasisFunction::is_unit) {
            self.factors.pop();
        }
    }

    /// Axes carrying a non-unit factor, paired with that factor.
    pub fn nonunit(&self) -> impl Iterator<Item = (usize, &BasisFunction)> {
        self.factors.iter().enumerate().filter(|(_, b)| !b.is_unit()).map(|(k, b)| (k + 1, b))
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.nonunit().map(|(a, _)| a).collect()
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        let factors = (1..=n).map(|a| self.factor(a).mul(&other.factor(a))).collect();
        Self::from_factors(factors)
    }

    /// Splits into the factors on `axes` and the rest.
    pub fn split(&self, axes: &BTreeSet<usize>) -> (Self, Self) {
        let mut inner = Self::unit();
        let mut outer = Self::unit();
        for (a, b) in self.nonunit() {
            if axes.contains(&a) {
                inner.set(a, b.clone());
            } else {
                outer.set(a, b.clone());
            }
        }
        (inner, outer)
    }
}

/// A finite combination of tensor monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HierarchyElement {
    terms: BTreeMap<TensorMonomial, Rational>,
}

/// `g = Σ_μ c_μ · inner_μ · outer_μ` with `inner_μ` supported on the split axes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentExpansion {
    pub split: BTreeSet<usize>,
    pub terms: Vec<ComponentTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTerm {
    pub coef: Rational,
    pub inner: TensorMonomial,
    pub outer: TensorMonomial,
}

impl ComponentTerm {
    /// Univariate part on `axis`.
    pub fn part(&self, axis: usize) -> BasisFunction {
        self.inner.factor(axis).mul(&self.outer.factor(axis))
    }
}

impl ComponentExpansion {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn recombine(&self) -> HierarchyElement {
        let mut out = HierarchyElement::zero();
        for t in &self.terms {
            out.add_term(t.inner.multiply(&t.outer), t.coef.clone());
        }
        out
    }
}

impl HierarchyElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(TensorMonomial::unit())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, TensorMonomial::unit())
    }

    pub fn monomial(m: TensorMonomial) -> Self {
        Self::term(one(), m)
    }

    pub fn term(c: Rational, m: TensorMonomial) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    /// `x_axis`.
    pub fn var(axis: usize) -> Self {
        Self::monomial(TensorMonomial::at(axis, BasisFunction::x()))
    }

    /// Embeds a univariate coefficient as a function of `x_axis`.
    pub fn from_coefficient(axis: usize, f: &Coefficient) -> Self {
        let mut out = Self::zero();
        for (b, c) in f.terms() {
            out.add_term(TensorMonomial::at(axis, b.clone()), c.clone());
        }
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (TensorMonomial, Rational)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: TensorMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<TensorMonomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The scalar value if the element is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(zero()),
            1 => self.terms.get(&TensorMonomial::unit()).cloned(),
            _ => None,
        }
    }

    /// The univariate coefficient if the element depends on `x_axis` alone.
    pub fn as_coefficient(&self, axis: usize) -> Option<Coefficient> {
        let mut out = Coefficient::zero();
        for (m, c) in &self.terms {
            if m.nonunit().any(|(a, _)| a != axis) {
                return None;
            }
            out.add_term(m.factor(axis), c.clone());
        }
        Some(out)
    }

    /// Largest trimmed monomial length.
    pub fn grade(&self) -> usize {
        self.terms.keys().map(TensorMonomial::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.multiply(b), x * y);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.multiply(self))
    }

    /// Applies a linear map, given on basis functions, to slot `axis`.
    pub fn map_axis(&self, axis: usize, f: impl Fn(&BasisFunction) -> Coefficient) -> Self {
        let mut out = Self::zero();
        let mut cache: BTreeMap<BasisFunction, Coefficient> = BTreeMap::new();
        for (m, c) in &self.terms {
            let b = m.factor(axis);
            let image = cache.entry(b.clone()).or_insert_with(|| f(&b));
            for (b2, d) in image.terms() {
                let mut m2 = m.clone();
                m2.set(axis, b2.clone());
                out.add_term(m2, c * d);
            }
        }
        out
    }

    /// `f[M]`: slot `i` receives the linear form in row `i` of `M`.
    pub fn substitute(&self, m: &SubstMatrix) -> Self {
        if m.is_identity() {
            return self.clone();
        }
        let mut rows: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
        let mut images: BTreeMap<(usize, BasisFunction), Self> = BTreeMap::new();
        let mut out = Self::zero();
        for (mono, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            let mut untouched = TensorMonomial::unit();
            for (axis, b) in mono.nonunit() {
                if axis > m.dim() {
                    untouched.set(axis, b.clone());
                    continue;
                }
                let image = images.entry((axis, b.clone())).or_insert_with(|| {
                    let row = rows.entry(axis).or_insert_with(|| m.row(axis));
                    basis_at_linear_form(b, row)
                });
                acc = acc.multiply(image);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc.multiply(&Self::monomial(untouched)));
        }
        out
    }

    /// `∫^{x_i}`: integration from 0 in slot `i`.
    pub fn integrate_axis(&self, i: usize) -> Self {
        self.map_axis(i, integrate_basis)
    }

    /// `E_i*`: sets `x_i` to zero.
    pub fn evaluate_axis(&self, i: usize) -> Self {
        self.map_axis(i, |b| Coefficient::constant(Coefficient::basis(b.clone()).counit()))
    }

    pub fn component_expansion(&self, split: &BTreeSet<usize>) -> ComponentExpansion {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let (inner, outer) = m.split(split);
                ComponentTerm { coef: c.clone(), inner, outer }
            })
            .collect();
        ComponentExpansion { split: split.clone(), terms }
    }

    pub fn variable_support(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(TensorMonomial::support).collect()
    }

    /// Floating-point value at a point; only a debugging aid.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (a, b) in m.nonunit() {
                    let x = point.get(a - 1).copied().unwrap_or(0.0);
                    v *= x.powi(b.k as i32) * (b.alpha.to_f64().unwrap_or(f64::NAN) * x).exp();
                }
                v
            })
            .sum()
    }
}

/// `b(Σ_m a_m x_m)` expanded into tensor monomials.
pub fn basis_at_linear_form(b: &BasisFunction, row: &BTreeMap<usize, Rational>) -> HierarchyElement {
    let mut linear = HierarchyElement::zero();
    let mut exp_part = TensorMonomial::unit();
    for (&m, a) in row {
        linear.add_term(TensorMonomial::at(m, BasisFunction::x()), a.clone());
        if !b.alpha.is_zero() {
            exp_part.set(m, BasisFunction::exp(&b.alpha * a));
        }
    }
    linear.pow(b.k).multiply(&HierarchyElement::monomial(exp_part))
}

/// Duhamel convolution `∫_0^x f(x - y) g(y) dy`, built from substitutions
/// and one integrator: `(I_1 ⊕ e_x)* ∫^y (e_x - e_y)* f · e_y* g`.
pub fn convolve(f: &Coefficient, g: &Coefficient) -> Coefficient {
    let r = |rows: [[i64; 2]; 2]| {
        SubstMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| crate::rational::int(v)).collect()).collect())
            .expect("2x2 literal")
    };
    let shifted = HierarchyElement::from_coefficient(1, f).substitute(&r([[1, -1], [0, 1]]));
    let moved = HierarchyElement::from_coefficient(1, g).substitute(&r([[0, 1], [0, 1]]));
    let integrated = shifted.multiply(&moved).integrate_axis(2);
    integrated
        .substitute(&r([[1, 0], [1, 0]]))
        .as_coefficient(1)
        .expect("convolution is univariate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn x(axis: usize, k: u32) -> HierarchyElement {
        HierarchyElement::monomial(TensorMonomial::at(axis, BasisFunction::new(k, zero())))
    }

    #[test]
    fn monomial_trimming() {
        let m = TensorMonomial::from_factors(vec![BasisFunction::x(), BasisFunction::unit()]);
        assert_eq!(m.len(), 1);
        let mut m = TensorMonomial::at(3, BasisFunction::x());
        m.set(3, BasisFunction::unit());
        assert!(m.is_unit());
    }

    #[test]
    fn products() {
        assert_eq!(x(1, 1).multiply(&x(2, 1)), x(1, 1).multiply(&x(2, 1)));
        assert_eq!(x(1, 1).multiply(&x(2, 1)).multiply(&x(1, 1)), x(1, 2).multiply(&x(2, 1)));
        let f = x(1, 1).add(&x(2, 3));
        assert_eq!(f.multiply(&HierarchyElement::one()), f);
    }

    #[test]
    fn substitution_examples() {
        let t = SubstMatrix::transvection(1, &[int(1)]);
        assert_eq!(x(1, 1).substitute(&t), x(1, 1).add(&x(2, 1)));
        let want = x(1, 2).add(&x(1, 1).multiply(&x(2, 1)).scale(&int(2))).add(&x(2, 2));
        assert_eq!(x(1, 2).substitute(&t), want);
        let p = SubstMatrix::transposition(1, 2);
        assert_eq!(x(1, 1).multiply(&x(2, 2)).substitute(&p), x(1, 2).multiply(&x(2, 1)));
    }

    #[test]
    fn exponential_substitution() {
        // e^{2 x1} with x1 -> x1 - 3 x2 gives e^{2 x1} e^{-6 x2}
        let e = HierarchyElement::monomial(TensorMonomial::at(1, BasisFunction::exp(int(2))));
        let t = SubstMatrix::transvection(1, &[int(-3)]);
        let want = HierarchyElement::monomial(TensorMonomial::from_factors(vec![
            BasisFunction::exp(int(2)),
            BasisFunction::exp(int(-6)),
        ]));
        assert_eq!(e.substitute(&t), want);
    }

    #[test]
    fn integration_and_evaluation() {
        let xx = x(1, 1).multiply(&x(2, 1));
        assert_eq!(xx.integrate_axis(2), x(1, 1).multiply(&x(2, 2)).scale(&rat(1, 2)));
        assert_eq!(HierarchyElement::one().integrate_axis(1), x(1, 1));
        assert!(xx.evaluate_axis(2).is_zero());
        assert_eq!(x(1, 1).evaluate_axis(2), x(1, 1));
        assert_eq!(xx.evaluate_axis(2), xx.substitute(&SubstMatrix::evaluation(2)));
    }

    #[test]
    fn component_expansion_examples() {
        let xx = x(1, 1).multiply(&x(2, 1));
        let s = BTreeSet::from([1]);
        let ce = xx.component_expansion(&s);
        assert_eq!(ce.len(), 1);
        assert_eq!(ce.terms[0].part(1), BasisFunction::x());
        assert_eq!(ce.terms[0].part(2), BasisFunction::x());
        let g = x(1, 2).substitute(&SubstMatrix::transvection(1, &[int(1)]));
        let ce = g.component_expansion(&s);
        assert_eq!(ce.len(), 3);
        assert_eq!(ce.recombine(), g);
    }

    #[test]
    fn support_examples() {
        assert_eq!(x(2, 1).variable_support(), BTreeSet::from([2]));
        let xx = x(1, 1).multiply(&x(2, 1));
        assert!(xx.substitute(&SubstMatrix::evaluation(2)).variable_support().is_empty());
        assert_eq!(x(1, 1).multiply(&x(3, 1)).variable_support(), BTreeSet::from([1, 3]));
    }

    #[test]
    fn convolution_examples() {
        let xc = Coefficient::basis(BasisFunction::x());
        let want = Coefficient::term(rat(1, 6), BasisFunction::new(3, zero()));
        assert_eq!(convolve(&xc, &xc), want);
        let g = Coefficient::basis(BasisFunction::new(2, int(-1)));
        assert_eq!(convolve(&Coefficient::one(), &g), g.integrate());
    }

    #[test]
    fn float_evaluation() {
        let f = x(1, 2).add(&x(2, 1));
        assert!((f.eval_f64(&[2.0, 3.0]) - 7.0).abs() < 1e-12);
    }
}
