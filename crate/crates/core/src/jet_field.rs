//! Jets of vector fields `J / J_{k+1}`, where `J = (A⊗A) ⊗_A V = A#V` and
//! `J_m = Δ^m ⊗_A V`.
//!
//! A jet field is stored as `N` jets, the `i`-th being the coefficient of
//! `∂/∂x_i`; the element `a#(f ∂_i)` has `i`-th component `a(x) f(x+t)`.

use std::fmt;
use std::sync::Arc;

use crate::arith::MultiIndex;
use crate::chart::{Chart, RingElem};
use crate::error::{Error, Result};
use crate::jet::{delta, jet_of_pair, Jet};
use crate::scalar::{binomial, sign, Field, Rational};
use crate::vfield::VectorField;

#[derive(Clone)]
pub struct JetField<S: Field = Rational> {
    chart: Arc<Chart<S>>,
    order: u32,
    components: Vec<Jet<S>>,
}

/// A representative `a # (f ∂/∂x_dir)`.
#[derive(Clone, Debug)]
pub struct Decomposable<S: Field = Rational> {
    pub a: RingElem<S>,
    pub f: RingElem<S>,
    pub dir: usize,
}

impl<S: Field> JetField<S> {
    pub fn zero(chart: &Arc<Chart<S>>, order: u32) -> Self {
        JetField { chart: chart.clone(), order, components: vec![Jet::zero(chart, order); chart.n()] }
    }

    pub fn new(chart: &Arc<Chart<S>>, order: u32, components: Vec<Jet<S>>) -> Result<Self> {
        if components.len() != chart.n() {
            return Err(Error::DimensionMismatch { expected: chart.n(), found: components.len() });
        }
        let zero = Jet::zero(chart, order);
        for c in &components {
            zero.try_add(c)?;
        }
        Ok(JetField { chart: chart.clone(), order, components })
    }

    /// `a # v`: component `i` is the jet of `a ⊗ v_i`.
    pub fn from_pair(a: &RingElem<S>, v: &VectorField<S>, order: u32) -> Result<Self> {
        let comps = v.coeffs().iter().map(|vi| jet_of_pair(a, vi, order)).collect::<Result<Vec<_>>>()?;
        Self::new(v.chart(), order, comps)
    }

    pub fn chart(&self) -> &Arc<Chart<S>> {
        &self.chart
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn components(&self) -> &[Jet<S>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Jet::is_zero)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Jet<S>, &Jet<S>) -> Result<Jet<S>>) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        let comps = self.components.iter().zip(&other.components).map(|(a, b)| f(a, b)).collect::<Result<Vec<_>>>()?;
        Self::new(&self.chart, self.order, comps)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.try_add(b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.try_sub(b))
    }

    pub fn scale_const(&self, c: &S) -> Self {
        JetField {
            chart: self.chart.clone(),
            order: self.order,
            components: self.components.iter().map(|j| j.scale(c)).collect(),
        }
    }

    /// Left `A`-action on the first tensor factor.
    pub fn scale(&self, a: &RingElem<S>) -> Result<Self> {
        let comps = self.components.iter().map(|j| j.scale_by(a)).collect::<Result<Vec<_>>>()?;
        Self::new(&self.chart, self.order, comps)
    }

    /// Multiplication of every component by an element of `A⊗A / Δ^{k+1}`.
    pub fn mul_jet(&self, j: &Jet<S>) -> Result<Self> {
        let comps = self.components.iter().map(|c| j.try_mul(c)).collect::<Result<Vec<_>>>()?;
        Self::new(&self.chart, self.order, comps)
    }

    /// Filtration degree: the largest `m` with the field in `J_m` (`k+1` for zero).
    pub fn filtration_order(&self) -> u32 {
        self.components.iter().map(Jet::t_order).min().unwrap_or(self.order + 1)
    }

    /// Anchor `f#η ↦ fη`, i.e. setting `t = 0`.
    pub fn anchor(&self) -> VectorField<S> {
        VectorField::new(&self.chart, self.components.iter().map(Jet::eval_diagonal).collect())
            .expect("components share the chart")
    }

    /// Smash-product bracket.
    ///
    /// In `t`-coordinates the `∂_j`-component of `[u, w]` is
    /// `sum_i u_i(x,0) ∂_{x_i} w_j + (u_i - u_i(x,0)) ∂_{t_i} w_j` minus the
    /// same with `u` and `w` exchanged. The first summand is the first-factor
    /// action weighted by the anchor, the second the second-factor action;
    /// grouping them this way keeps the result exact at order `k` because
    /// `u_i - u_i(x,0)` has positive `t`-valuation.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Jet::zero(&self.chart, self.order).try_add(&Jet::zero(&other.chart, other.order))?;
        let n = self.chart.n();
        let mut comps = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = self.half_bracket(other, j)?;
            acc = acc.try_sub(&other.half_bracket(self, j)?)?;
            comps.push(acc);
        }
        Self::new(&self.chart, self.order, comps)
    }

    fn half_bracket(&self, other: &Self, j: usize) -> Result<Jet<S>> {
        let k = self.order;
        let target = &other.components[j];
        let mut acc = Jet::zero(&self.chart, k);
        for (i, ui) in self.components.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let base = ui.eval_diagonal();
            if !base.is_zero() {
                acc = acc.try_add(&target.derive_x(i)?.scale_by(&base)?)?;
            }
            if k > 0 {
                let tail = ui.without_constant();
                if !tail.is_zero() {
                    let dt = target.derive_t(i)?;
                    acc = acc.try_add(&tail.mul_to_order(&dt, k)?)?;
                }
            }
        }
        Ok(acc)
    }

    /// Writes the field as `sum (-1)^{|m|} (u_m ⊗ 1) δ(x)^m ∂_i` and expands
    /// each `δ(x)^m` into `x^{m-k} ⊗ x^k` terms, giving representatives
    /// `a # (f ∂_i)` whose sum is the field.
    pub fn decompose(&self) -> Result<Vec<Decomposable<S>>> {
        let chart = &self.chart;
        let n = chart.n();
        let xs = (0..n).map(|i| RingElem::var(chart, i)).collect::<Result<Vec<_>>>()?;
        let monomial = |m: &MultiIndex| {
            m.iter().enumerate().fold(RingElem::one(chart), |acc, (i, e)| &acc * &xs[i].pow(e))
        };
        let mut out = Vec::new();
        for (dir, comp) in self.components.iter().enumerate() {
            for (m, um) in comp.coeffs() {
                for k in m.sub_indices() {
                    let coeff: S = sign::<S>(m.degree() + k.degree()) * m.binomial::<S>(&k)?;
                    let rest = m.checked_sub(&k).unwrap();
                    out.push(Decomposable { a: (um * &monomial(&rest)).scale(&coeff), f: monomial(&k), dir });
                }
            }
        }
        Ok(out)
    }

    /// Sum of `a # (f ∂_dir)` over the representatives.
    pub fn from_decomposables(chart: &Arc<Chart<S>>, parts: &[Decomposable<S>], order: u32) -> Result<Self> {
        let mut acc = Self::zero(chart, order);
        for p in parts {
            let v = VectorField::coordinate(chart, p.dir, p.f.clone())?;
            acc = acc.try_add(&Self::from_pair(&p.a, &v, order)?)?;
        }
        Ok(acc)
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.try_sub(other)?.is_zero())
    }
}

impl<S: Field> PartialEq for JetField<S> {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

impl<S: Field> fmt::Display for JetField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})*D({})", self.chart.params()[i])?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<S: Field> fmt::Debug for JetField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetField[k={}]({self})", self.order)
    }
}

/// The bracket of two decomposables computed in `A` and `V` first:
/// `[a1#g1, a2#g2] = a1 g1(a2) # g2 - a2 g2(a1) # g1 + a1 a2 # [g1, g2]`.
pub fn smash_bracket_decomposable<S: Field>(
    a1: &RingElem<S>,
    g1: &VectorField<S>,
    a2: &RingElem<S>,
    g2: &VectorField<S>,
    order: u32,
) -> Result<JetField<S>> {
    let t1 = JetField::from_pair(&a1.try_mul(&g1.apply(a2)?)?, g2, order)?;
    let t2 = JetField::from_pair(&a2.try_mul(&g2.apply(a1)?)?, g1, order)?;
    let t3 = JetField::from_pair(&a1.try_mul(a2)?, &g1.bracket(g2)?, order)?;
    t1.try_sub(&t2)?.try_add(&t3)
}

/// `sum_{r=0}^{m} (1/g^{r+1} ⊗ 1) δ(g)^r (1#v)` on a chart where `g` is a unit.
pub fn localization_partial_sum<S: Field>(g: &RingElem<S>, v: &VectorField<S>, terms: u32, order: u32) -> Result<JetField<S>> {
    let inv = g.inverse()?;
    let base = JetField::from_pair(&RingElem::one(g.chart()), v, order)?;
    let dg = delta(g, order)?;
    let mut power = Jet::one(g.chart(), order);
    let mut acc = JetField::zero(g.chart(), order);
    for r in 0..=terms {
        let term = base.mul_jet(&power)?.scale(&inv.pow(r + 1))?;
        acc = acc.try_add(&term)?;
        power = power.try_mul(&dg)?;
    }
    Ok(acc)
}

/// The closed-form tail `sum_{s=0}^{m+1} (-1)^s C(m+1,s) (1/g^s) # g^{s-1} v`,
/// equal to `1 # (1/g) v` minus the partial sum with `m` terms.
pub fn localization_remainder<S: Field>(g: &RingElem<S>, v: &VectorField<S>, terms: u32, order: u32) -> Result<JetField<S>> {
    let inv = g.inverse()?;
    let mut acc = JetField::zero(g.chart(), order);
    for s in 0..=terms + 1 {
        let coeff = sign::<S>(s) * binomial::<S>(terms + 1, s);
        let field_coeff = if s == 0 { inv.clone() } else { g.pow(s - 1) };
        let a = inv.pow(s).scale(&coeff);
        acc = acc.try_add(&JetField::from_pair(&a, &v.scale(&field_coeff)?, order)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    fn d(chart: &Arc<Chart>, i: usize, f: RingElem) -> VectorField {
        VectorField::coordinate(chart, i, f).unwrap()
    }

    #[test]
    fn from_pair_examples() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let u = JetField::from_pair(&x, &d(&c, 0, x.clone()), 1).unwrap();
        let comp = &u.components()[0];
        assert_eq!(comp.coeff(&MultiIndex::from([0])), x.pow(2));
        assert_eq!(comp.coeff(&MultiIndex::from([1])), x);
        assert!(JetField::from_pair(&RingElem::zero(&c), &d(&c, 0, x.clone()), 2).unwrap().is_zero());
        assert_eq!(u.anchor(), d(&c, 0, x.pow(2)));
    }

    #[test]
    fn bracket_examples() {
        let c = fixtures::affine_line();
        let one = RingElem::one(&c);
        let x = RingElem::var(&c, 0).unwrap();
        let k = 3;
        let e = JetField::from_pair(&one, &d(&c, 0, one.clone()), k).unwrap();
        let xe = JetField::from_pair(&x, &d(&c, 0, one.clone()), k).unwrap();
        assert_eq!(e.bracket(&xe).unwrap(), e);
        let one_xd = JetField::from_pair(&one, &d(&c, 0, x.clone()), k).unwrap();
        assert_eq!(one_xd.bracket(&e).unwrap(), e.scale_const(&rat(-1, 1)));
        assert!(xe.bracket(&one_xd).unwrap().is_zero());
    }

    #[test]
    fn bracket_matches_decomposable_oracle() {
        let c = fixtures::c2();
        let x = RingElem::var(&c, 0).unwrap();
        let inv = x.inverse().unwrap();
        let (a1, g1) = (&x.pow(2) + &inv, d(&c, 0, &x + &inv.pow(2)));
        let (a2, g2) = (inv.clone(), d(&c, 0, x.pow(3)));
        for k in 0..4 {
            let u = JetField::from_pair(&a1, &g1, k).unwrap();
            let w = JetField::from_pair(&a2, &g2, k).unwrap();
            let oracle = smash_bracket_decomposable(&a1, &g1, &a2, &g2, k).unwrap();
            assert_eq!(u.bracket(&w).unwrap(), oracle, "k = {k}");
        }
    }

    #[test]
    fn filtration_and_anchor() {
        let c = fixtures::affine_line();
        let one = RingElem::one(&c);
        let x = RingElem::var(&c, 0).unwrap();
        let e = JetField::from_pair(&one, &d(&c, 0, one.clone()), 2).unwrap();
        assert_eq!(e.filtration_order(), 0);
        let shifted = e.mul_jet(&delta(&x, 2).unwrap()).unwrap();
        assert_eq!(shifted.filtration_order(), 1);
        assert!(shifted.anchor().is_zero());
        assert_eq!(JetField::zero(&c, 2).filtration_order(), 3);
        assert_eq!(e.scale(&x).unwrap(), JetField::from_pair(&x, &d(&c, 0, one.clone()), 2).unwrap());
    }

    #[test]
    fn decomposition_round_trip() {
        let c = fixtures::c3();
        let y = RingElem::var(&c, 1).unwrap();
        let x = RingElem::var(&c, 0).unwrap();
        let u = JetField::from_pair(&y, &d(&c, 0, &x.pow(2) + &y.inverse().unwrap()), 3).unwrap();
        let parts = u.decompose().unwrap();
        assert_eq!(JetField::from_decomposables(&c, &parts, 3).unwrap(), u);
    }

    #[test]
    fn localization_examples() {
        let c = fixtures::c2();
        let one = RingElem::one(&c);
        let x = RingElem::var(&c, 0).unwrap();
        let e = d(&c, 0, one.clone());
        let sum = localization_partial_sum(&x, &e, 2, 2).unwrap();
        let inv = x.inverse().unwrap();
        let comp = &sum.components()[0];
        assert_eq!(comp.coeff(&MultiIndex::from([0])), inv);
        assert_eq!(comp.coeff(&MultiIndex::from([1])), -&inv.pow(2));
        assert_eq!(comp.coeff(&MultiIndex::from([2])), inv.pow(3));
        let exact = JetField::from_pair(&one, &e.scale(&inv).unwrap(), 2).unwrap();
        assert_eq!(sum, exact);
        let first = localization_partial_sum(&x, &e, 0, 2).unwrap();
        assert_eq!(first, JetField::from_pair(&inv, &e, 2).unwrap());
        let not_unit = &x + &one;
        assert!(matches!(localization_partial_sum(&not_unit, &e, 1, 2), Err(Error::NotInvertible(_))));
    }
}
