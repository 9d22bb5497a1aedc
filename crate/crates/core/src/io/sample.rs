//! Seeded pseudorandom inputs.
//!
//! Every verification case owns a ChaCha stream derived from the run seed and
//! the case id, so a single case can be replayed without running the others.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{MultiIndex, Poly};
use crate::chart::{Chart, RingElem};
use crate::jet::Jet;
use crate::jet_field::JetField;
use crate::lplus::{l_basis, CurrentElem, LBasis, SemiDirectElem};
use crate::scalar::Rational;
use crate::vfield::VectorField;

/// Size limits for sampled polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Maximal total degree of a sampled numerator.
    pub degree: u32,
    /// Coefficients are drawn from `-coeff..=coeff`.
    pub coeff: i64,
    /// Maximal number of terms of a sampled numerator.
    pub terms: usize,
    /// Maximal power of the chart denominator in a sampled element.
    pub denom_power: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { degree: 2, coeff: 3, terms: 3, denom_power: 1 }
    }
}

/// 64-bit FNV-1a, used to turn case ids into stream numbers.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pub bounds: Bounds,
}

impl Sampler {
    pub fn new(seed: u64, stream: &str, bounds: Bounds) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(fnv1a(stream));
        Sampler { rng, bounds }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: u32, hi: u32) -> u32 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("nonempty choice")
    }

    fn nonzero_coeff(&mut self) -> Rational {
        let c = self.bounds.coeff.max(1);
        let mut v = 0;
        while v == 0 {
            v = self.rng.gen_range(-c..=c);
        }
        Rational::from_integer(v.into())
    }

    pub fn multi_index(&mut self, n: usize, lo: u32, hi: u32) -> MultiIndex {
        let d = self.range(lo, hi);
        let mut m = MultiIndex::zeros(n);
        for _ in 0..d {
            let i = self.below(n);
            m.set(i, m.get(i) + 1);
        }
        m
    }

    /// A polynomial in all variables of the chart (parameters and generators).
    pub fn numerator(&mut self, chart: &Arc<Chart>) -> Poly {
        let vars = chart.vars().clone();
        let terms = self.range(1, self.bounds.terms as u32);
        let mut p = Poly::zero(vars.clone());
        for _ in 0..terms {
            let m = self.multi_index(vars.len(), 0, self.bounds.degree);
            let c = self.nonzero_coeff();
            p.add_term(m, c);
        }
        p
    }

    /// An element `P / d^s` of the chart ring.
    pub fn ring_elem(&mut self, chart: &Arc<Chart>) -> RingElem {
        let s = if chart.has_denominator() { self.range(0, self.bounds.denom_power) } else { 0 };
        let num = self.numerator(chart);
        RingElem::from_parts(chart, num, s).expect("sampled element")
    }

    pub fn nonzero_ring_elem(&mut self, chart: &Arc<Chart>) -> RingElem {
        loop {
            let e = self.ring_elem(chart);
            if !e.is_zero() {
                return e;
            }
        }
    }

    pub fn vector_field(&mut self, chart: &Arc<Chart>) -> VectorField {
        let coeffs = (0..chart.n()).map(|_| self.ring_elem(chart)).collect();
        VectorField::new(chart, coeffs).expect("sampled field")
    }

    /// A jet with a few nonzero coefficients at random multi-indices.
    pub fn jet(&mut self, chart: &Arc<Chart>, order: u32) -> Jet {
        let mut coeffs = std::collections::BTreeMap::new();
        for _ in 0..self.range(1, 3) {
            let m = self.multi_index(chart.n(), 0, order);
            coeffs.insert(m, self.ring_elem(chart));
        }
        Jet::from_coeffs(chart, order, coeffs).expect("sampled jet")
    }

    pub fn jet_field(&mut self, chart: &Arc<Chart>, order: u32) -> JetField {
        let comps = (0..chart.n()).map(|_| self.jet(chart, order)).collect();
        JetField::new(chart, order, comps).expect("sampled jet field")
    }

    pub fn l_basis(&mut self, n: usize, r: u32) -> LBasis {
        let m = self.multi_index(n, 1, r);
        LBasis::new(m, self.below(n)).expect("nonzero index")
    }

    /// A PBW word of the given length over `L^{(r)}` in `n` variables.
    pub fn l_word(&mut self, n: usize, r: u32, len: usize) -> Vec<LBasis> {
        let basis = l_basis(n, r);
        (0..len).map(|_| self.pick(&basis).clone()).collect()
    }

    pub fn current(&mut self, chart: &Arc<Chart>, r: u32) -> CurrentElem {
        let mut c = CurrentElem::zero(chart, r);
        for _ in 0..self.range(1, 3) {
            let b = self.l_basis(chart.n(), r);
            let a = self.ring_elem(chart);
            c = c.try_add(&CurrentElem::basis(&a, r, b).expect("sampled term")).expect("same chart");
        }
        c
    }

    pub fn semidirect(&mut self, chart: &Arc<Chart>, r: u32) -> SemiDirectElem {
        let v = self.vector_field(chart);
        let l = self.current(chart, r);
        SemiDirectElem::new(v, l).expect("sampled element")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let c = fixtures::c3();
        let a: Vec<_> = {
            let mut s = Sampler::new(7, "case-a", Bounds::default());
            (0..5).map(|_| s.ring_elem(&c)).collect()
        };
        let mut s = Sampler::new(7, "case-a", Bounds::default());
        let b: Vec<_> = (0..5).map(|_| s.ring_elem(&c)).collect();
        assert_eq!(a, b);
        let mut s = Sampler::new(7, "case-b", Bounds::default());
        let d: Vec<_> = (0..5).map(|_| s.ring_elem(&c)).collect();
        assert_ne!(a, d);
    }
}
