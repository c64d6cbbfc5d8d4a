//! Exponential polynomials `Q[x, e^{Qx}]` as a scaled Rota-Baxter bialgebra.
//!
//! The basis is `x^k e^{αx}`. Multiplication adds degrees and frequencies,
//! the coproduct is binomial in `x` and group-like in `e^{αx}`, and the
//! Rota-Baxter operator is integration from 0.

use crate::rational::{binomial, factorial, falling, one, zero, Rational};
use num_traits::{One, Pow, Zero};
use std::collections::BTreeMap;

/// `x^k e^{αx}`. Ordered lexicographically on `(alpha, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisFunction {
    pub alpha: Rational,
    pub k: u32,
}

impl BasisFunction {
    pub fn new(k: u32, alpha: Rational) -> Self {
        Self { alpha, k }
    }

    pub fn unit() -> Self {
        Self { alpha: zero(), k: 0 }
    }

    pub fn x() -> Self {
        Self::new(1, zero())
    }

    pub fn exp(alpha: Rational) -> Self {
        Self::new(0, alpha)
    }

    pub fn is_unit(&self) -> bool {
        self.k == 0 && self.alpha.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { alpha: &self.alpha + &other.alpha, k: self.k + other.k }
    }
}

/// A finite combination of basis functions with nonzero rational weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coefficient {
    terms: BTreeMap<BasisFunction, Rational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(BasisFunction::unit())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, BasisFunction::unit())
    }

    pub fn basis(b: BasisFunction) -> Self {
        Self::term(one(), b)
    }

    pub fn term(c: Rational, b: BasisFunction) -> Self {
        let mut out = Self::zero();
        out.add_term(b, c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisFunction, Rational)>) -> Self {
        let mut out = Self::zero();
        for (b, c) in terms {
            out.add_term(b, c);
        }
        out
    }

    pub fn add_term(&mut self, b: BasisFunction, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<BasisFunction, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
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
        Self { terms: self.terms.iter().map(|(b, v)| (b.clone(), v * c)).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.multiply(self))
    }

    /// `λ* f(x) = f(λx)`; `λ = 0` is evaluation at zero.
    pub fn scale_arg(&self, lambda: &Rational) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            if lambda.is_zero() {
                if b.k == 0 {
                    out.add_term(BasisFunction::unit(), c.clone());
                }
            } else {
                let w = c * Pow::pow(lambda, b.k);
                out.add_term(BasisFunction::new(b.k, &b.alpha * lambda), w);
            }
        }
        out
    }

    pub fn coproduct(&self) -> Tensor {
        self.iterated_coproduct(2)
    }

    /// `Δ^n`, with `Δ^1 = id`.
    pub fn iterated_coproduct(&self, n: usize) -> Tensor {
        assert!(n >= 1, "iterated coproduct needs rank >= 1");
        let mut t = Tensor::from_coefficient(self);
        for _ in 1..n {
            t = t.coproduct_slot(t.rank() - 1);
        }
        t
    }

    /// Value at zero.
    pub fn counit(&self) -> Rational {
        self.terms.iter().filter(|(b, _)| b.k == 0).map(|(_, c)| c.clone()).sum()
    }

    /// `ev = 1 ∘ ε`.
    pub fn ev(&self) -> Self {
        Self::constant(self.counit())
    }

    /// Integration from 0.
    pub fn integrate(&self) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            out = out.add(&integrate_basis(b).scale(c));
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            if b.k > 0 {
                out.add_term(BasisFunction::new(b.k - 1, b.alpha.clone()), c * Rational::from_integer(b.k.into()));
            }
            out.add_term(b.clone(), c * &b.alpha);
        }
        out
    }

    /// `S = (-1)*`.
    pub fn antipode(&self) -> Self {
        self.scale_arg(&-one())
    }

    /// `∇ (λ* ⊗ μ*) Δ f`.
    pub fn convolve_scalings(&self, lambda: &Rational, mu: &Rational) -> Self {
        self.coproduct()
            .map_slot(0, |b| Self::basis(b.clone()).scale_arg(lambda))
            .map_slot(1, |b| Self::basis(b.clone()).scale_arg(mu))
            .contract()
    }
}

/// `∫ x^k e^{αx}` from 0.
pub fn integrate_basis(b: &BasisFunction) -> Coefficient {
    let k = b.k;
    if b.alpha.is_zero() {
        let c = Rational::new(One::one(), (k + 1).into());
        return Coefficient::term(c, BasisFunction::new(k + 1, zero()));
    }
    let a = &b.alpha;
    let sign = |i: u32| if i.is_multiple_of(2) { one() } else { -one() };
    let mut out = Coefficient::constant(sign(k + 1) * factorial(k) / Pow::pow(a, k + 1));
    for i in 0..=k {
        let c = sign(i) * falling(k, i) / Pow::pow(a, i + 1);
        out.add_term(BasisFunction::new(k - i, a.clone()), c);
    }
    out
}

/// A fixed-rank element of `B^{⊗r}`; rank 2 is the codomain of the coproduct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    rank: usize,
    terms: BTreeMap<Vec<BasisFunction>, Rational>,
}

pub type Tensor2 = Tensor;

impl Tensor {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    pub fn from_coefficient(f: &Coefficient) -> Self {
        let mut t = Self::zero(1);
        for (b, c) in f.terms() {
            t.add_term(vec![b.clone()], c.clone());
        }
        t
    }

    /// `f_1 ⊗ ... ⊗ f_r`.
    pub fn product(factors: &[Coefficient]) -> Self {
        let mut t = Self { rank: 0, terms: BTreeMap::from([(Vec::new(), one())]) };
        for f in factors {
            let mut next = Self::zero(t.rank + 1);
            for (key, c) in &t.terms {
                for (b, d) in f.terms() {
                    let mut k = key.clone();
                    k.push(b.clone());
                    next.add_term(k, c * d);
                }
            }
            t = next;
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Vec<BasisFunction>, Rational> {
        &self.terms
    }

    pub fn add_term(&mut self, key: Vec<BasisFunction>, c: Rational) {
        assert_eq!(key.len(), self.rank, "tensor rank mismatch");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    /// Applies a linear map, given on basis functions, to one slot (0-based).
    pub fn map_slot(&self, slot: usize, f: impl Fn(&BasisFunction) -> Coefficient) -> Self {
        let mut out = Self::zero(self.rank);
        for (key, c) in &self.terms {
            for (b, d) in f(&key[slot]).terms() {
                let mut k = key.clone();
                k[slot] = b.clone();
                out.add_term(k, c * d);
            }
        }
        out
    }

    /// Applies the coproduct to one slot, raising the rank by one.
    pub fn coproduct_slot(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.rank + 1);
        for (key, c) in &self.terms {
            let b = &key[slot];
            for m in 0..=b.k {
                let mut k = key[..slot].to_vec();
                k.push(BasisFunction::new(m, b.alpha.clone()));
                k.push(BasisFunction::new(b.k - m, b.alpha.clone()));
                k.extend_from_slice(&key[slot + 1..]);
                out.add_term(k, c * binomial(b.k, m));
            }
        }
        out
    }

    /// Removes a slot by applying the counit to it.
    pub fn counit_slot(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.rank - 1);
        for (key, c) in &self.terms {
            if key[slot].k == 0 {
                let mut k = key.clone();
                k.remove(slot);
                out.add_term(k, c.clone());
            }
        }
        out
    }

    /// Multiplies all slots together.
    pub fn contract(&self) -> Coefficient {
        let mut out = Coefficient::zero();
        for (key, c) in &self.terms {
            let b = key.iter().fold(BasisFunction::unit(), |acc, b| acc.mul(b));
            out.add_term(b, c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn xk(k: u32) -> Coefficient {
        Coefficient::basis(BasisFunction::new(k, zero()))
    }

    fn xe(k: u32, a: Rational) -> Coefficient {
        Coefficient::basis(BasisFunction::new(k, a))
    }

    #[test]
    fn products() {
        assert_eq!(xk(1).multiply(&xk(1)), xk(2));
        assert_eq!(xe(1, int(1)).multiply(&xe(0, int(-1))), xk(1));
        let g = xe(2, rat(1, 2)).add(&Coefficient::constant(int(3)));
        assert_eq!(Coefficient::one().multiply(&g), g);
    }

    #[test]
    fn argument_scaling() {
        let f = xe(1, int(1));
        assert_eq!(f.scale_arg(&int(1)), f);
        assert_eq!(f.scale_arg(&int(2)), xe(1, int(2)).scale(&int(2)));
        let g = Coefficient::constant(int(3)).add(&xk(1));
        assert_eq!(g.scale_arg(&int(0)), Coefficient::constant(int(3)));
    }

    #[test]
    fn coproducts() {
        let d = xk(2).coproduct();
        let want = Tensor::product(&[xk(2), xk(0)])
            .add(&Tensor::product(&[xk(1), xk(1)]).add(&Tensor::product(&[xk(1), xk(1)])))
            .add(&Tensor::product(&[xk(0), xk(2)]));
        assert_eq!(d, want);
        let e = xe(0, int(3));
        assert_eq!(e.coproduct(), Tensor::product(&[e.clone(), e.clone()]));
        assert_eq!(Coefficient::one().coproduct(), Tensor::product(&[xk(0), xk(0)]));
        let d3 = xk(1).iterated_coproduct(3);
        let want = Tensor::product(&[xk(1), xk(0), xk(0)])
            .add(&Tensor::product(&[xk(0), xk(1), xk(0)]))
            .add(&Tensor::product(&[xk(0), xk(0), xk(1)]));
        assert_eq!(d3, want);
        let a = rat(-1, 2);
        let e = xe(0, a);
        assert_eq!(e.iterated_coproduct(3), Tensor::product(&[e.clone(), e.clone(), e.clone()]));
        assert_eq!(xe(3, int(2)).iterated_coproduct(1), Tensor::from_coefficient(&xe(3, int(2))));
    }

    #[test]
    fn counit_values() {
        assert_eq!(Coefficient::one().counit(), int(1));
        assert_eq!(xe(1, int(5)).counit(), int(0));
    }

    #[test]
    fn integration_examples() {
        assert_eq!(xk(2).integrate(), xk(3).scale(&rat(1, 3)));
        let a = rat(2, 3);
        let want = xe(0, a.clone()).scale(&(one() / &a)).sub(&Coefficient::constant(one() / &a));
        assert_eq!(xe(0, a).integrate(), want);
        // ∫ x e^x = x e^x - e^x + 1
        let want = xe(1, int(1)).sub(&xe(0, int(1))).add(&Coefficient::one());
        assert_eq!(xe(1, int(1)).integrate(), want);
        assert_eq!(want.derivative(), xe(1, int(1)));
    }

    #[test]
    fn derivatives() {
        assert_eq!(xk(3).derivative(), xk(2).scale(&int(3)));
        assert_eq!(xe(0, int(2)).derivative(), xe(0, int(2)).scale(&int(2)));
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(xk(1).antipode(), xk(1).scale(&int(-1)));
        assert_eq!(xe(0, int(1)).antipode(), xe(0, int(-1)));
        let hopf = xk(2).coproduct().map_slot(1, |b| Coefficient::basis(b.clone()).antipode()).contract();
        assert!(hopf.is_zero());
    }

    #[test]
    fn scaling_convolution_examples() {
        assert_eq!(xk(2).convolve_scalings(&int(1), &int(1)), xk(2).scale(&int(4)));
        let f = xe(2, int(1)).add(&xk(1));
        assert_eq!(f.convolve_scalings(&rat(3, 2), &int(0)), f.scale_arg(&rat(3, 2)));
        assert_eq!(xe(0, int(1)).convolve_scalings(&int(1), &int(-1)), Coefficient::one());
    }
}
