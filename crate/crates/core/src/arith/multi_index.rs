use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, Field};

/// Exponent vector `m = (m_1, ..., m_N)`.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn zeros(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    /// The unit vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n);
        m.0[i] = 1;
        m
    }

    pub fn from_slice(exps: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|m|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` unless `other <= self` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn incremented(&self, i: usize) -> MultiIndex {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    pub fn decremented(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[i] -= 1;
        Some(m)
    }

    pub fn set(&mut self, i: usize, e: u32) {
        self.0[i] = e;
    }

    /// `m!` = product of the factorials of the entries.
    pub fn factorial<S: Field>(&self) -> S {
        self.0.iter().fold(S::one(), |acc, &e| acc * factorial::<S>(e))
    }

    /// `C(m, k) = prod C(m_i, k_i)`; fails unless `k <= m`.
    pub fn binomial<S: Field>(&self, k: &MultiIndex) -> Result<S> {
        if k.len() != self.len() || !k.divides(self) {
            return Err(Error::NotComponentwiseLe);
        }
        Ok(self
            .0
            .iter()
            .zip(k.0.iter())
            .fold(S::one(), |acc, (&m, &k)| acc * binomial::<S>(m, k)))
    }

    /// All `k` with `k <= self` componentwise, in ascending order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zeros(self.len())];
        for i in 0..self.len() {
            let mut next = Vec::with_capacity(out.len() * (self.0[i] as usize + 1));
            for base in &out {
                for e in 0..=self.0[i] {
                    let mut k = base.clone();
                    k.0[i] = e;
                    next.push(k);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// All multi-indices of length `n` with `lo <= |m| <= hi`, ascending.
    pub fn all_between(n: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in lo..=hi {
            out.extend(Self::of_degree(n, d));
        }
        out.sort();
        out
    }

    /// All multi-indices of length `n` with `|m| = d`.
    pub fn of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, i: usize, left: u32, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
            if i + 1 == n {
                cur.0[i] = left;
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur.0[i] = e;
                rec(n, i + 1, left - e, cur, out);
            }
        }
        if n == 0 {
            return if d == 0 { vec![MultiIndex::zeros(0)] } else { Vec::new() };
        }
        let mut out = Vec::new();
        rec(n, 0, d, &mut MultiIndex::zeros(n), &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex::from_slice(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn combinatorics() {
        let m = MultiIndex::from([2, 1]);
        assert_eq!(m.factorial::<Rational>(), rat(2, 1));
        assert_eq!(m.binomial::<Rational>(&MultiIndex::from([1, 0])).unwrap(), rat(2, 1));
        assert_eq!(m.binomial::<Rational>(&m).unwrap(), rat(1, 1));
        assert!(matches!(
            m.binomial::<Rational>(&MultiIndex::from([0, 2])),
            Err(Error::NotComponentwiseLe)
        ));
        assert!(MultiIndex::from([1, 0]).divides(&m));
        assert!(!MultiIndex::from([3, 0]).divides(&m));
    }

    #[test]
    fn graded_lex_order() {
        let a = MultiIndex::from([0, 2]);
        let b = MultiIndex::from([1, 1]);
        let c = MultiIndex::from([3, 0]);
        assert!(a < b && b < c);
        assert!(MultiIndex::from([5, 0]) > MultiIndex::from([0, 4]));
    }

    #[test]
    fn enumeration() {
        assert_eq!(MultiIndex::all_between(2, 0, 2).len(), 6);
        assert_eq!(MultiIndex::of_degree(3, 2).len(), 6);
        let subs = MultiIndex::from([2, 1]).sub_indices();
        assert_eq!(subs.len(), 6);
        assert_eq!(subs[0], MultiIndex::zeros(2));
    }
}
