//! The substitution monoid: identity matrices with finitely many perturbed
//! entries, acting on functions as linear changes of variables.
//!
//! A matrix is stored densely up to its canonical dimension, the smallest `n`
//! such that every row and column past `n` is the identity. All axes are
//! 1-based. Row `i` of `M` gives the argument that replaces `x_i`.

use crate::rational::{one, zero, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("axes are 1-based, got 0")]
    ZeroAxis,
    #[error("not a permutation of 1..{0}")]
    BadPermutation(usize),
    #[error("eliminant tail index {index} is not below axis {axis}")]
    TailAboveAxis { axis: usize, index: usize },
    #[error("eliminant reordering needs i < j, got i = {i}, j = {j}")]
    Order { i: usize, j: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubstMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

/// Sparse tail of an eliminant `L_axis(w)`; keys are absolute row indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EliminantVector {
    pub axis: usize,
    pub tail: BTreeMap<usize, Rational>,
}

/// Result of one Gaussian sweep on a column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotDecomposition {
    /// First row with a nonzero entry in the column, if any.
    pub pivot: Option<usize>,
    /// Quotients `M_kj / M_ij` for rows `k` below the pivot.
    pub l: EliminantVector,
    /// `L_i(-l) M`, whose column has a single nonzero entry at the pivot.
    pub reduced: SubstMatrix,
}

impl EliminantVector {
    pub fn new(axis: usize, tail: BTreeMap<usize, Rational>) -> Result<Self, MatrixError> {
        if axis == 0 {
            return Err(MatrixError::ZeroAxis);
        }
        if let Some((&index, _)) = tail.iter().find(|(&r, _)| r <= axis) {
            return Err(MatrixError::TailAboveAxis { axis, index });
        }
        Ok(Self::from_parts(axis, tail))
    }

    /// Tail given densely as `(w_{i+1}, ..., w_n)`.
    pub fn dense(axis: usize, w: &[Rational]) -> Self {
        let tail = w.iter().enumerate().map(|(k, v)| (axis + 1 + k, v.clone())).collect();
        Self::from_parts(axis, tail)
    }

    pub(crate) fn from_parts(axis: usize, mut tail: BTreeMap<usize, Rational>) -> Self {
        tail.retain(|_, v| !v.is_zero());
        Self { axis, tail }
    }

    pub fn is_zero(&self) -> bool {
        self.tail.is_empty()
    }

    pub fn get(&self, row: usize) -> Rational {
        self.tail.get(&row).cloned().unwrap_or_else(zero)
    }

    pub fn neg(&self) -> Self {
        Self { axis: self.axis, tail: self.tail.iter().map(|(&r, v)| (r, -v)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.axis, other.axis);
        let mut tail = self.tail.clone();
        for (&r, v) in &other.tail {
            *tail.entry(r).or_insert_with(zero) += v;
        }
        Self::from_parts(self.axis, tail)
    }

    pub fn to_matrix(&self) -> SubstMatrix {
        let n = self.tail.keys().next_back().copied().unwrap_or(0);
        let mut m = SubstMatrix::dense_identity(n);
        for (&r, v) in &self.tail {
            m[(r, self.axis)] = v.clone();
        }
        SubstMatrix::from_dense(n, m.entries)
    }
}

impl SubstMatrix {
    pub fn identity() -> Self {
        Self { dim: 0, entries: Vec::new() }
    }

    fn dense_identity(n: usize) -> Self {
        let mut entries = vec![zero(); n * n];
        for k in 0..n {
            entries[k * n + k] = one();
        }
        Self { dim: n, entries }
    }

    /// Builds from a square row list, trimming to canonical form.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::NotSquare { row: r + 1, len: row.len(), expected: n });
            }
            entries.extend(row);
        }
        Ok(Self::from_dense(n, entries))
    }

    fn from_dense(n: usize, mut entries: Vec<Rational>) -> Self {
        let mut dim = n;
        while dim > 0 {
            let k = dim - 1;
            let clean = (0..dim).all(|c| {
                let want = c == k;
                entries[k * n + c].is_one() == want && (want || entries[k * n + c].is_zero())
            }) && (0..k).all(|r| entries[r * n + k].is_zero());
            if !clean {
                break;
            }
            dim -= 1;
        }
        if dim < n {
            let mut trimmed = Vec::with_capacity(dim * dim);
            for r in 0..dim {
                trimmed.extend_from_slice(&entries[r * n..r * n + dim]);
            }
            entries = trimmed;
        }
        Self { dim, entries }
    }

    /// Canonical dimension; 0 for the identity.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_identity(&self) -> bool {
        self.dim == 0
    }

    /// Entry `(r, c)`, 1-based, with identity entries outside the stored block.
    pub fn get(&self, r: usize, c: usize) -> Rational {
        if r <= self.dim && c <= self.dim {
            self.entries[(r - 1) * self.dim + (c - 1)].clone()
        } else if r == c {
            one()
        } else {
            zero()
        }
    }

    /// Nonzero entries of row `r`, keyed by column.
    pub fn row(&self, r: usize) -> BTreeMap<usize, Rational> {
        if r > self.dim {
            return BTreeMap::from([(r, one())]);
        }
        (1..=self.dim).map(|c| (c, self.get(r, c))).filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Nonzero entries of column `c`, keyed by row.
    pub fn column(&self, c: usize) -> BTreeMap<usize, Rational> {
        if c > self.dim {
            return BTreeMap::from([(c, one())]);
        }
        (1..=self.dim).map(|r| (r, self.get(r, c))).filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        r <= self.dim && self.entries[(r - 1) * self.dim..r * self.dim].iter().all(Zero::is_zero)
    }

    /// Dense rows after embedding into dimension `max(n, dim)`.
    pub fn embed(&self, n: usize) -> Vec<Vec<Rational>> {
        let n = n.max(self.dim);
        (1..=n).map(|r| (1..=n).map(|c| self.get(r, c)).collect()).collect()
    }

    /// Canonical rows (empty for the identity).
    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.embed(0)
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim.max(other.dim);
        if self.dim == 0 {
            return other.clone();
        }
        if other.dim == 0 {
            return self.clone();
        }
        let a = self.embed(n);
        let b = other.embed(n);
        let mut entries = Vec::with_capacity(n * n);
        for row in &a {
            for c in 0..n {
                let mut acc = zero();
                for (k, x) in row.iter().enumerate() {
                    if !x.is_zero() && !b[k][c].is_zero() {
                        acc += x * &b[k][c];
                    }
                }
                entries.push(acc);
            }
        }
        Self::from_dense(n, entries)
    }

    /// `T_i(v)`: row `i` becomes `(v_1, .., 1, .., v_n)` with `v` indexed over `{1..n} \ {i}`.
    pub fn transvection(i: usize, v: &[Rational]) -> Self {
        let row = v
            .iter()
            .enumerate()
            .map(|(k, x)| (if k + 1 < i { k + 1 } else { k + 2 }, x.clone()))
            .collect();
        Self::transvection_sparse(i, &row)
    }

    /// `T_i(v)` with `v` keyed by column; a key equal to `i` is ignored.
    pub fn transvection_sparse(i: usize, v: &BTreeMap<usize, Rational>) -> Self {
        let n = v.keys().next_back().copied().unwrap_or(0).max(i);
        let mut m = Self::dense_identity(n);
        for (&c, x) in v {
            if c != i {
                m[(i, c)] = x.clone();
            }
        }
        Self::from_dense(n, m.entries)
    }

    /// `L_i(w)` with `w = (w_{i+1}, ..., w_n)`.
    pub fn eliminant(i: usize, w: &[Rational]) -> Self {
        EliminantVector::dense(i, w).to_matrix()
    }

    /// `L_i(w)^{-1} = L_i(-w)`.
    pub fn eliminant_inverse(i: usize, w: &[Rational]) -> Self {
        EliminantVector::dense(i, w).neg().to_matrix()
    }

    /// `d_i(λ) = I + (λ - 1) e_ii`; `λ = 0` gives the evaluation `E_i`.
    pub fn scaling(i: usize, lambda: &Rational) -> Self {
        let mut m = Self::dense_identity(i);
        m[(i, i)] = lambda.clone();
        Self::from_dense(i, m.entries)
    }

    /// `E_i = I - e_ii`, setting `x_i` to zero.
    pub fn evaluation(i: usize) -> Self {
        Self::scaling(i, &zero())
    }

    /// Permutation matrix whose column `k` is `e_{π(k)}`, with `π` in one-line notation.
    pub fn permutation(pi: &[usize]) -> Result<Self, MatrixError> {
        let n = pi.len();
        let mut seen = vec![false; n];
        for &p in pi {
            if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
                return Err(MatrixError::BadPermutation(n));
            }
        }
        let mut entries = vec![zero(); n * n];
        for (k, &p) in pi.iter().enumerate() {
            entries[(p - 1) * n + k] = one();
        }
        Ok(Self::from_dense(n, entries))
    }

    /// The transposition `(i j)`.
    pub fn transposition(i: usize, j: usize) -> Self {
        let n = i.max(j);
        let mut pi: Vec<usize> = (1..=n).collect();
        pi.swap(i - 1, j - 1);
        Self::permutation(&pi).expect("transposition is a permutation")
    }

    /// The `n`-th cut-off: first `n` rows kept, identity rows afterwards.
    pub fn cutoff(&self, n: usize) -> Self {
        if n >= self.dim {
            return self.clone();
        }
        let d = self.dim;
        let mut m = Self::dense_identity(d);
        for r in 1..=n {
            for c in 1..=d {
                m[(r, c)] = self.get(r, c);
            }
        }
        Self::from_dense(d, m.entries)
    }

    /// One elimination sweep on column `j`.
    pub fn pivot_decompose(&self, j: usize) -> PivotDecomposition {
        let col = self.column(j);
        let Some((&i, p)) = col.iter().next() else {
            return PivotDecomposition {
                pivot: None,
                l: EliminantVector { axis: j, tail: BTreeMap::new() },
                reduced: self.clone(),
            };
        };
        let tail = col.iter().skip(1).map(|(&k, v)| (k, v / p)).collect();
        let l = EliminantVector::from_parts(i, tail);
        let reduced = l.neg().to_matrix().compose(self);
        PivotDecomposition { pivot: Some(i), l, reduced }
    }

    /// Returns the tail `v` when `self = L_i(v)` (the identity counts, with `v = 0`).
    pub fn as_eliminant(&self, i: usize) -> Option<EliminantVector> {
        if self.dim == 0 {
            return Some(EliminantVector { axis: i, tail: BTreeMap::new() });
        }
        let mut tail = BTreeMap::new();
        for r in 1..=self.dim {
            for c in 1..=self.dim {
                let v = self.get(r, c);
                if r == c {
                    if !v.is_one() {
                        return None;
                    }
                } else if !v.is_zero() {
                    if c != i || r < i {
                        return None;
                    }
                    tail.insert(r, v);
                }
            }
        }
        Some(EliminantVector { axis: i, tail })
    }

    /// `self * E_j`: column `j` set to zero, i.e. `x_j := 0` after substituting.
    pub fn zero_column(&self, j: usize) -> Self {
        self.compose(&Self::evaluation(j))
    }
}

impl std::ops::Index<(usize, usize)> for SubstMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.entries[(r - 1) * self.dim + (c - 1)]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SubstMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.entries[(r - 1) * self.dim + (c - 1)]
    }
}

impl fmt::Debug for SubstMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::render::matrix_text(self))
    }
}

/// Finds `w'` with `L_j(u) L_i(w) = L_i(w') L_j(u)` for `i < j`.
pub fn eliminant_commute(
    u: &EliminantVector,
    w: &EliminantVector,
) -> Result<EliminantVector, MatrixError> {
    let (i, j) = (w.axis, u.axis);
    if i >= j {
        return Err(MatrixError::Order { i, j });
    }
    // w' is column i of L_j(u) L_i(w), which equals L_j(u) applied to e_i + w.
    let mut tail = w.tail.clone();
    let wj = w.get(j);
    if !wj.is_zero() {
        for (&r, ur) in &u.tail {
            *tail.entry(r).or_insert_with(zero) += ur * &wj;
        }
    }
    Ok(EliminantVector::from_parts(i, tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> SubstMatrix {
        SubstMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn trimming_is_canonical() {
        assert!(m(&[&[1, 0], &[0, 1]]).is_identity());
        assert_eq!(m(&[&[2, 0], &[0, 1]]).dim(), 1);
        assert_eq!(m(&[&[1, 1], &[0, 1]]).dim(), 2);
        assert_eq!(m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), SubstMatrix::identity());
        assert!(SubstMatrix::from_rows(vec![vec![int(1)], vec![]]).is_err());
    }

    #[test]
    fn compose_examples() {
        let t = SubstMatrix::transvection(1, &[int(1)]);
        assert_eq!(t.compose(&t), m(&[&[1, 2], &[0, 1]]));
        assert_eq!(SubstMatrix::identity().compose(&t), t);
        let u = EliminantVector::dense(2, &[int(1)]);
        let w = EliminantVector::dense(1, &[int(2), int(3)]);
        let w2 = eliminant_commute(&u, &w).unwrap();
        assert_eq!(w2, EliminantVector::dense(1, &[int(2), int(5)]));
        assert_eq!(
            u.to_matrix().compose(&w.to_matrix()),
            w2.to_matrix().compose(&u.to_matrix())
        );
    }

    #[test]
    fn constructors() {
        assert_eq!(SubstMatrix::transvection(1, &[int(1)]), m(&[&[1, 1], &[0, 1]]));
        assert!(SubstMatrix::transvection(1, &[int(0), int(0)]).is_identity());
        assert_eq!(
            SubstMatrix::transvection(2, &[int(5), int(7)]),
            m(&[&[1, 0, 0], &[5, 1, 7], &[0, 0, 1]])
        );
        assert_eq!(SubstMatrix::eliminant(1, &[int(3)]), m(&[&[1, 0], &[3, 1]]));
        assert!(SubstMatrix::scaling(2, &int(1)).is_identity());
        assert_eq!(SubstMatrix::evaluation(2), m(&[&[1, 0], &[0, 0]]));
        assert_eq!(SubstMatrix::eliminant_inverse(1, &[int(3)]), SubstMatrix::eliminant(1, &[int(-3)]));
        assert!(SubstMatrix::eliminant_inverse(1, &[int(0)]).is_identity());
        let l = SubstMatrix::eliminant(1, &[int(2), int(5)]);
        assert!(l.compose(&SubstMatrix::eliminant_inverse(1, &[int(2), int(5)])).is_identity());
        assert_eq!(SubstMatrix::transposition(1, 2), m(&[&[0, 1], &[1, 0]]));
        assert!(SubstMatrix::permutation(&[1, 1]).is_err());
    }

    #[test]
    fn cutoff_examples() {
        assert!(SubstMatrix::identity().cutoff(5).is_identity());
        assert_eq!(m(&[&[1, 1], &[1, 1]]).cutoff(1), m(&[&[1, 1], &[0, 1]]));
        assert!(SubstMatrix::eliminant(1, &[int(4), rat(1, 2)]).cutoff(1).is_identity());
    }

    #[test]
    fn pivot_examples() {
        let a = m(&[&[0, 2], &[3, 4]]);
        let p = a.pivot_decompose(1);
        assert_eq!(p.pivot, Some(2));
        assert!(p.l.is_zero());
        assert_eq!(p.reduced, a);

        assert_eq!(SubstMatrix::evaluation(2).pivot_decompose(2).pivot, None);

        let p = m(&[&[1, 0], &[2, 1]]).pivot_decompose(1);
        assert_eq!(p.pivot, Some(1));
        assert_eq!(p.l, EliminantVector::dense(1, &[int(2)]));
        assert!(p.reduced.is_identity());
    }

    #[test]
    fn eliminant_recognition() {
        let l = SubstMatrix::eliminant(2, &[int(0), int(3)]);
        assert_eq!(l.as_eliminant(2), Some(EliminantVector::dense(2, &[int(0), int(3)])));
        assert_eq!(l.as_eliminant(1), None);
        assert!(SubstMatrix::identity().as_eliminant(3).unwrap().is_zero());
        assert_eq!(m(&[&[2]]).as_eliminant(1), None);
    }

    #[test]
    fn row_and_column_queries() {
        let a = m(&[&[0, 2], &[0, 0]]);
        assert!(a.row_is_zero(2));
        assert!(!a.row_is_zero(1));
        assert!(!a.row_is_zero(3));
        assert_eq!(a.column(1).len(), 0);
        assert_eq!(a.row(5), BTreeMap::from([(5, int(1))]));
    }
}
