//! Well-founded measure certifying that every rule firing makes progress.
//!
//! A word `w_0 A_{i_1} w_1 ... A_{i_n} w_n` maps to one key per segment.
//! Keys are compared first by the number of segments, then lexicographically
//! from the last segment backwards. A segment key is
//! `(defect, -index, sigma)`:
//!
//! * `defect` counts, for the product `T` of the segment's substitutions,
//!   the nonzero entries `T_{r,i}` with `r < i`, a non-unit diagonal entry
//!   `T_{i,i}`, and one more if `T` is not an eliminant `L_i(v)`.
//! * `sigma` is the letter sequence, compared by length and then letterwise
//!   with coefficients below substitutions; coefficients are ranked by how
//!   many factors they have off the segment's own axis.

use super::{Letter, OperatorWord};
use crate::hierarchy::TensorMonomial;
use crate::matrixsubst::SubstMatrix;
use num_traits::{One, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureOrdering {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl MeasureOrdering {
    fn from_ord(o: Ordering) -> Self {
        match o {
            Ordering::Less => Self::Less,
            Ordering::Equal => Self::Equal,
            Ordering::Greater => Self::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaLetter {
    Coeff { rank: usize, mono: TensorMonomial },
    Subst(SubstMatrix),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentKey {
    pub defect: usize,
    /// Integration axis of the segment; 0 for the leading segment.
    pub index: usize,
    pub sigma: Vec<SigmaLetter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermMeasure {
    pub segments: Vec<SegmentKey>,
}

fn defect(t: &SubstMatrix, i: usize) -> usize {
    if i == 0 {
        return 0;
    }
    let above = t.column(i).keys().filter(|&&r| r < i).count();
    let diag = usize::from(!t.get(i, i).is_one());
    let shape = usize::from(t.as_eliminant(i).is_none());
    above + diag + shape
}

fn segment_key(letters: &[Letter], index: usize) -> SegmentKey {
    let mut total = SubstMatrix::identity();
    let mut sigma = Vec::with_capacity(letters.len());
    for l in letters {
        match l {
            Letter::Coeff(m) => {
                let rank = m.nonunit().filter(|(a, _)| *a != index).count();
                sigma.push(SigmaLetter::Coeff { rank, mono: m.clone() });
            }
            Letter::Subst(m) => {
                total = m.compose(&total);
                sigma.push(SigmaLetter::Subst(m.clone()));
            }
            Letter::Integ(_) => unreachable!("segments exclude integrators"),
        }
    }
    SegmentKey { defect: defect(&total, index), index, sigma }
}

pub fn term_measure(w: &OperatorWord) -> TermMeasure {
    let ls = w.letters();
    let mut segments = Vec::new();
    let mut start = 0;
    let mut index = 0;
    for (k, l) in ls.iter().enumerate() {
        if let Letter::Integ(i) = l {
            segments.push(segment_key(&ls[start..k], index));
            start = k + 1;
            index = *i;
        }
    }
    segments.push(segment_key(&ls[start..], index));
    TermMeasure { segments }
}

fn compare_letters(a: &SigmaLetter, b: &SigmaLetter) -> MeasureOrdering {
    use SigmaLetter::*;
    match (a, b) {
        (Coeff { .. }, Subst(_)) => MeasureOrdering::Less,
        (Subst(_), Coeff { .. }) => MeasureOrdering::Greater,
        (Coeff { rank: r, mono: m }, Coeff { rank: s, mono: n }) => match r.cmp(s) {
            Ordering::Equal if m == n => MeasureOrdering::Equal,
            Ordering::Equal => MeasureOrdering::Incomparable,
            o => MeasureOrdering::from_ord(o),
        },
        (Subst(m), Subst(n)) => {
            if m == n {
                MeasureOrdering::Equal
            } else {
                MeasureOrdering::Incomparable
            }
        }
    }
}

fn compare_segments(a: &SegmentKey, b: &SegmentKey) -> MeasureOrdering {
    let head = a.defect.cmp(&b.defect).then(b.index.cmp(&a.index)).then(a.sigma.len().cmp(&b.sigma.len()));
    if head != Ordering::Equal {
        return MeasureOrdering::from_ord(head);
    }
    for (x, y) in a.sigma.iter().zip(&b.sigma) {
        match compare_letters(x, y) {
            MeasureOrdering::Equal => continue,
            o => return o,
        }
    }
    MeasureOrdering::Equal
}

/// Graded, right-to-left lexicographic comparison.
pub fn compare(a: &TermMeasure, b: &TermMeasure) -> MeasureOrdering {
    match a.segments.len().cmp(&b.segments.len()) {
        Ordering::Equal => {}
        o => return MeasureOrdering::from_ord(o),
    }
    for (x, y) in a.segments.iter().rev().zip(b.segments.iter().rev()) {
        match compare_segments(x, y) {
            MeasureOrdering::Equal => continue,
            o => return o,
        }
    }
    MeasureOrdering::Equal
}

impl TermMeasure {
    pub fn is_zero(&self) -> bool {
        self.segments.len() == 1 && self.segments[0].sigma.is_empty() && self.segments[0].defect.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::BasisFunction;
    use crate::rational::int;

    fn m(w: &[Letter]) -> TermMeasure {
        term_measure(&OperatorWord::from_letters(w.iter().cloned()))
    }

    #[test]
    fn empty_word_is_minimal() {
        let one = m(&[]);
        assert!(one.is_zero());
        for w in [vec![Letter::Integ(1)], vec![Letter::Coeff(TensorMonomial::at(1, BasisFunction::x()))]] {
            assert_eq!(compare(&one, &m(&w)), MeasureOrdering::Less);
        }
    }

    #[test]
    fn fewer_integrators_is_smaller() {
        let xa = Letter::Coeff(TensorMonomial::at(1, BasisFunction::x()));
        let big = m(&[Letter::Integ(1), Letter::Integ(1)]);
        let small = m(&[xa, Letter::Integ(1)]);
        assert_eq!(compare(&small, &big), MeasureOrdering::Less);
    }

    #[test]
    fn higher_last_index_is_smaller() {
        let a21 = m(&[Letter::Integ(2), Letter::Integ(1)]);
        let a12 = m(&[Letter::Integ(1), Letter::Integ(2)]);
        assert_eq!(compare(&a12, &a21), MeasureOrdering::Less);
    }

    #[test]
    fn distinct_substitutions_are_incomparable() {
        let s = |v| Letter::Subst(SubstMatrix::transvection(1, &[int(v)]));
        assert_eq!(compare(&m(&[s(1)]), &m(&[s(2)])), MeasureOrdering::Incomparable);
    }
}
