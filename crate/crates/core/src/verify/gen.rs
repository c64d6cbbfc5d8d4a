//! Seeded random generation of functions, matrices and operator words.

use crate::bialgebra::{BasisFunction, Coefficient};
use crate::hierarchy::{HierarchyElement, TensorMonomial};
use crate::matrixsubst::{EliminantVector, SubstMatrix};
use crate::opring::{Letter, OperatorWord, Strategy};
use crate::rational::{int, rat, Rational};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_vars: usize,
    pub max_degree: u32,
    /// Exponential frequencies, as `"p/q"` strings.
    pub alpha_pool: Vec<String>,
    pub max_word_len: usize,
    /// Strategy names accepted by [`parse_strategy`].
    pub strategies: Vec<String>,
    pub budget: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            max_vars: 4,
            max_degree: 3,
            alpha_pool: ["-2", "-1", "-1/2", "0", "1/2", "1", "2"].map(String::from).to_vec(),
            max_word_len: 6,
            strategies: ["priority", "leftmost", "random"].map(String::from).to_vec(),
            budget: 100_000,
        }
    }
}

impl TrialConfig {
    pub fn alphas(&self) -> Vec<Rational> {
        self.alpha_pool.iter().filter_map(|s| crate::rational::parse_rat(s)).collect()
    }

    /// Strategies for a given trial; `random` is seeded from the trial.
    pub fn strategies_for(&self, trial: usize) -> Vec<Strategy> {
        self.strategies
            .iter()
            .filter_map(|s| parse_strategy(s, self.seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
            .collect()
    }
}

/// `priority`, `leftmost`, `rightmost`, `random` or `random:<seed>`.
pub fn parse_strategy(name: &str, default_seed: u64) -> Option<Strategy> {
    match name {
        "priority" => Some(Strategy::Priority),
        "leftmost" => Some(Strategy::Leftmost),
        "rightmost" => Some(Strategy::Rightmost),
        "random" => Some(Strategy::Random(default_seed)),
        _ => name.strip_prefix("random:")?.parse().ok().map(Strategy::Random),
    }
}

/// Random source for one trial. Streams keep suites and trials independent.
pub struct Gen {
    rng: ChaCha8Rng,
    max_vars: usize,
    max_degree: u32,
    alphas: Vec<Rational>,
}

impl Gen {
    pub fn new(cfg: &TrialConfig, suite: u64, trial: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ suite.wrapping_mul(0xd1b5_4a32_d192_ed03));
        rng.set_stream(trial as u64);
        let mut alphas = cfg.alphas();
        if alphas.is_empty() {
            alphas.push(Rational::zero());
        }
        Self { rng, max_vars: cfg.max_vars.max(1), max_degree: cfg.max_degree, alphas }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn max_vars(&self) -> usize {
        self.max_vars
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn axis(&mut self) -> usize {
        self.range(1, self.max_vars)
    }

    /// `p/q` with `|p|, q ≤ 4`.
    pub fn rational(&mut self) -> Rational {
        rat(self.rng.gen_range(-4..=4), self.rng.gen_range(1..=4))
    }

    pub fn nonzero(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// Mostly small integers, sometimes a fraction.
    pub fn entry(&mut self) -> Rational {
        if self.chance(0.7) {
            int(self.rng.gen_range(-2..=2))
        } else {
            self.rational()
        }
    }

    pub fn alpha(&mut self) -> Rational {
        if self.chance(0.5) {
            Rational::zero()
        } else {
            self.alphas.choose(&mut self.rng).cloned().unwrap_or_else(Rational::zero)
        }
    }

    pub fn basis(&mut self) -> BasisFunction {
        let k = self.rng.gen_range(0..=self.max_degree);
        BasisFunction::new(k, self.alpha())
    }

    pub fn nonunit_basis(&mut self) -> BasisFunction {
        loop {
            let b = self.basis();
            if !b.is_unit() {
                return b;
            }
        }
    }

    pub fn coefficient(&mut self) -> Coefficient {
        let terms = self.range(1, 2);
        Coefficient::from_terms((0..terms).map(|_| (self.basis(), self.nonzero())))
    }

    pub fn monomial(&mut self, n: usize) -> TensorMonomial {
        let mut m = TensorMonomial::unit();
        for axis in 1..=n {
            if self.chance(0.6) {
                m.set(axis, self.basis());
            }
        }
        m
    }

    /// A random element of `𝓕_n` with one to three terms.
    pub fn function(&mut self, n: usize) -> HierarchyElement {
        let terms = self.range(1, 3);
        let mut f = HierarchyElement::zero();
        for _ in 0..terms {
            let m = self.monomial(n);
            f.add_term(m, self.nonzero());
        }
        if f.is_zero() {
            HierarchyElement::one()
        } else {
            f
        }
    }

    pub fn function_any(&mut self) -> HierarchyElement {
        let n = self.axis();
        self.function(n)
    }

    /// Sparse random `n × n` matrix, identity-like on the diagonal.
    pub fn matrix(&mut self, n: usize) -> SubstMatrix {
        let rows = (1..=n)
            .map(|r| {
                (1..=n)
                    .map(|c| {
                        if r == c {
                            if self.chance(0.6) {
                                int(1)
                            } else {
                                self.entry()
                            }
                        } else if self.chance(0.3) {
                            self.entry()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        SubstMatrix::from_rows(rows).expect("square")
    }

    /// `L_axis(w)` with entries on rows `axis+1 ..= n`.
    pub fn eliminant(&mut self, axis: usize, n: usize) -> EliminantVector {
        let mut tail = BTreeMap::new();
        for r in axis + 1..=n {
            if self.chance(0.5) {
                tail.insert(r, self.entry());
            }
        }
        EliminantVector::new(axis, tail).expect("rows below axis")
    }

    pub fn letter(&mut self, n: usize) -> Letter {
        match self.range(0, 9) {
            0..=3 => Letter::Integ(self.range(1, n)),
            4..=6 => {
                let mut m = TensorMonomial::unit();
                let axis = self.range(1, n);
                m.set(axis, self.nonunit_basis());
                if self.chance(0.2) {
                    let other = self.range(1, n);
                    m = m.multiply(&TensorMonomial::at(other, self.nonunit_basis()));
                }
                Letter::Coeff(m)
            }
            _ => Letter::Subst(self.word_matrix(n)),
        }
    }

    /// Substitutions that commonly appear in operator words.
    pub fn word_matrix(&mut self, n: usize) -> SubstMatrix {
        let i = self.range(1, n);
        match self.range(0, 5) {
            0 => SubstMatrix::evaluation(i),
            1 => self.eliminant(i, n).to_matrix(),
            2 => {
                let j = self.range(1, n);
                let mut v = BTreeMap::new();
                v.insert(j, self.entry());
                SubstMatrix::transvection_sparse(i, &v)
            }
            3 => SubstMatrix::scaling(i, &self.nonzero()),
            4 => SubstMatrix::transposition(i, self.range(1, n)),
            _ => self.matrix(n),
        }
    }

    /// A word of at most `max_len` letters over axes `1..=n`.
    pub fn word(&mut self, n: usize, max_len: usize) -> OperatorWord {
        let len = self.range(1, max_len.max(1));
        OperatorWord::from_letters((0..len).map(|_| self.letter(n)).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let cfg = TrialConfig::default();
        let a: Vec<_> = (0..3).map(|t| Gen::new(&cfg, 1, t).function(3)).collect();
        let b: Vec<_> = (0..3).map(|t| Gen::new(&cfg, 1, t).function(3)).collect();
        assert_eq!(a, b);
        assert_ne!(Gen::new(&cfg, 1, 0).word(3, 6), Gen::new(&cfg, 2, 0).word(3, 6));
    }

    #[test]
    fn strategy_names() {
        assert_eq!(parse_strategy("random:7", 0), Some(Strategy::Random(7)));
        assert_eq!(parse_strategy("rightmost", 0), Some(Strategy::Rightmost));
        assert_eq!(parse_strategy("sideways", 0), None);
    }
}
