//! Truncated jets: the algebra `A⊗A / Δ^{k+1}` realized through the jet map
//! `g⊗f ↦ g(x) f(x+t)` as `A[t_1..t_N] / (t)^{k+1}`.
//!
//! Sign convention: `δ(f) = f⊗1 - 1⊗f` maps to `f(x) - f(x+t)`, so
//! `δ(x_i) ↦ -t_i` and `δ(x)^m ↦ (-1)^{|m|} t^m`. This is the convention
//! under which both Taylor identities in `A⊗̂A` hold term by term; the
//! unsigned form `δ(x)^m ↦ t^m` does not.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::MultiIndex;
use crate::chart::{Chart, RingElem, RingHom};
use crate::error::{Error, Result};
use crate::scalar::{sign, Field, Rational};

/// Class of an element of `A⊗A` modulo `Δ^{k+1}`.
#[derive(Clone)]
pub struct Jet<S: Field = Rational> {
    chart: Arc<Chart<S>>,
    order: u32,
    coeffs: BTreeMap<MultiIndex, RingElem<S>>,
}

impl<S: Field> Jet<S> {
    pub fn zero(chart: &Arc<Chart<S>>, order: u32) -> Self {
        Jet { chart: chart.clone(), order, coeffs: BTreeMap::new() }
    }

    /// A function of `x` alone, i.e. the image of `a⊗1`.
    pub fn scalar(a: &RingElem<S>, order: u32) -> Self {
        let mut j = Self::zero(a.chart(), order);
        j.insert(MultiIndex::zeros(a.chart().n()), a.clone());
        j
    }

    pub fn one(chart: &Arc<Chart<S>>, order: u32) -> Self {
        Self::scalar(&RingElem::one(chart), order)
    }

    /// `c t^m`; empty when `|m| > order`.
    pub fn monomial(m: MultiIndex, c: RingElem<S>, order: u32) -> Result<Self> {
        let n = c.chart().n();
        if m.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.len() });
        }
        let mut j = Self::zero(c.chart(), order);
        j.insert(m, c);
        Ok(j)
    }

    /// Builds a jet from explicit coefficients (terms above the order are dropped).
    pub fn from_coeffs<I>(chart: &Arc<Chart<S>>, order: u32, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, RingElem<S>)>,
    {
        let mut j = Self::zero(chart, order);
        for (m, c) in coeffs {
            if m.len() != chart.n() {
                return Err(Error::DimensionMismatch { expected: chart.n(), found: m.len() });
            }
            c.try_add(&RingElem::zero(chart))?;
            j.insert(m, c);
        }
        Ok(j)
    }

    fn insert(&mut self, m: MultiIndex, c: RingElem<S>) {
        if m.degree() > self.order || c.is_zero() {
            return;
        }
        let v = match self.coeffs.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.coeffs.insert(m, v);
        }
    }

    pub fn chart(&self) -> &Arc<Chart<S>> {
        &self.chart
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients in ascending graded-lex order of `m`.
    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &RingElem<S>)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> RingElem<S> {
        self.coeffs.get(m).cloned().unwrap_or_else(|| RingElem::zero(&self.chart))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        RingElem::one(&self.chart).try_add(&RingElem::one(&other.chart)).map(|_| ())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.chart, self.order);
        for (m, v) in &self.coeffs {
            out.insert(m.clone(), v.scale(c));
        }
        out
    }

    /// Multiplication by `a⊗1` (a function of `x` only).
    pub fn scale_by(&self, a: &RingElem<S>) -> Result<Self> {
        let mut out = Self::zero(&self.chart, self.order);
        for (m, v) in &self.coeffs {
            out.insert(m.clone(), a.try_mul(v)?);
        }
        Ok(out)
    }

    /// Truncated product with output at `order`; callers guarantee the
    /// inputs carry enough terms for the product to be exact there.
    pub(crate) fn mul_to_order(&self, other: &Self, order: u32) -> Result<Self> {
        let mut out = Self::zero(&self.chart, order);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if a.degree() + b.degree() > order {
                    continue;
                }
                out.insert(a.add(b), ca.try_mul(cb)?);
            }
        }
        Ok(out)
    }

    /// Truncated convolution; the jet map is an algebra homomorphism.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.mul_to_order(other, self.order)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.chart, self.order);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Drops terms above `order` (which must not exceed the current order).
    pub fn truncate(&self, order: u32) -> Result<Self> {
        if order > self.order {
            return Err(Error::OrderMismatch(self.order, order));
        }
        let mut out = Self::zero(&self.chart, order);
        for (m, c) in &self.coeffs {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Δ-adic order: least `|m|` with a nonzero coefficient, `k+1` for zero.
    pub fn t_order(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::degree).min().unwrap_or(self.order + 1)
    }

    /// Image under the multiplication map `A⊗A → A` (set `t = 0`).
    pub fn eval_diagonal(&self) -> RingElem<S> {
        self.coeff(&MultiIndex::zeros(self.chart.n()))
    }

    /// The part of positive `t`-degree, `u - u(x, 0)`.
    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(&MultiIndex::zeros(self.chart.n()));
        out
    }

    /// `∂/∂x_i` applied to every coefficient (same order).
    pub fn derive_x(&self, i: usize) -> Result<Self> {
        let mut out = Self::zero(&self.chart, self.order);
        for (m, c) in &self.coeffs {
            out.insert(m.clone(), c.derive(i)?);
        }
        Ok(out)
    }

    /// Formal `∂/∂t_i`; exact only up to order `k - 1`.
    pub fn derive_t(&self, i: usize) -> Result<Self> {
        let n = self.chart.n();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let order = self.order.checked_sub(1).ok_or(Error::OrderUnderflow)?;
        let mut out = Self::zero(&self.chart, order);
        for (m, c) in &self.coeffs {
            if let Some(d) = m.decremented(i) {
                out.insert(d, c.scale(&S::int(m.get(i) as i64)));
            }
        }
        Ok(out)
    }

    /// Action of `∂/∂x_i` on the first tensor factor: `∂_x - ∂_t`, at order `k - 1`.
    pub fn act_first_factor(&self, i: usize) -> Result<Self> {
        let dt = self.derive_t(i)?;
        self.derive_x(i)?.truncate(dt.order)?.try_sub(&dt)
    }

    /// Action of `∂/∂x_i` on the second tensor factor: `∂_t`, at order `k - 1`.
    pub fn act_second_factor(&self, i: usize) -> Result<Self> {
        self.derive_t(i)
    }

    /// Applies a ring map to every coefficient; the result lives on the
    /// target chart, which must have the same number of parameters.
    pub fn map_coeffs(&self, hom: &RingHom<S>) -> Result<Self> {
        let target = hom.target();
        if target.n() != self.chart.n() {
            return Err(Error::DimensionMismatch { expected: self.chart.n(), found: target.n() });
        }
        let mut out = Self::zero(target, self.order);
        for (m, c) in &self.coeffs {
            out.insert(m.clone(), hom.apply(c)?);
        }
        Ok(out)
    }

    /// Series substitution `t_i ↦ subs[i]`, where every `subs[i]` has zero
    /// constant term, so the truncated result is exact at the common order.
    pub fn substitute(&self, subs: &[Jet<S>]) -> Result<Self> {
        let n = self.chart.n();
        if subs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: subs.len() });
        }
        let k = self.order;
        for s in subs {
            self.check(s)?;
            if s.t_order() == 0 {
                return Err(Error::InvalidHomomorphism("substituted series must have zero constant term".into()));
            }
        }
        let mut powers: BTreeMap<MultiIndex, Jet<S>> = BTreeMap::new();
        powers.insert(MultiIndex::zeros(n), Self::one(&self.chart, k));
        let mut out = Self::zero(&self.chart, k);
        for (m, c) in &self.coeffs {
            let p = subs_power(&mut powers, subs, m)?;
            out = out.try_add(&p.scale_by(c)?)?;
        }
        Ok(out)
    }

    /// Semantic equality (same order, coefficientwise ring equality).
    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.try_sub(other)?.is_zero())
    }
}

/// `subs^m`, memoised along the chain obtained by peeling off the first
/// nonzero exponent.
fn subs_power<S: Field>(
    cache: &mut BTreeMap<MultiIndex, Jet<S>>,
    subs: &[Jet<S>],
    m: &MultiIndex,
) -> Result<Jet<S>> {
    if let Some(p) = cache.get(m) {
        return Ok(p.clone());
    }
    let i = (0..m.len()).find(|&i| m.get(i) > 0).expect("zero exponent is always cached");
    let prev = subs_power(cache, subs, &m.decremented(i).unwrap())?;
    let p = prev.try_mul(&subs[i])?;
    cache.insert(m.clone(), p.clone());
    Ok(p)
}

impl<S: Field> PartialEq for Jet<S> {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

/// Writes `c t^m` terms using `t1..tN` (or `t` when `N = 1`).
pub(crate) fn fmt_series<'a, S: Field>(
    f: &mut fmt::Formatter<'_>,
    var: &str,
    n: usize,
    terms: impl Iterator<Item = (&'a MultiIndex, &'a RingElem<S>)>,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        if m.is_zero() {
            write!(f, "({c})")?;
            continue;
        }
        write!(f, "({c})")?;
        for (i, e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if n == 1 {
                write!(f, "*{var}")?;
            } else {
                write!(f, "*{var}{}", i + 1)?;
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<S: Field> fmt::Display for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_series(f, "t", self.chart.n(), self.coeffs.iter())
    }
}

impl<S: Field> fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet[k={}]({self})", self.order)
    }
}

/// All derivatives `∂^m f` for `|m| <= k`, each obtained from a neighbour.
pub(crate) fn derivative_table<S: Field>(f: &RingElem<S>, k: u32) -> Result<BTreeMap<MultiIndex, RingElem<S>>> {
    let n = f.chart().n();
    let mut table: BTreeMap<MultiIndex, RingElem<S>> = BTreeMap::new();
    for m in MultiIndex::all_between(n, 0, k) {
        let d = match (0..n).find(|&i| m.get(i) > 0) {
            None => f.clone(),
            Some(i) => table[&m.decremented(i).unwrap()].derive(i)?,
        };
        table.insert(m, d);
    }
    Ok(table)
}

/// The jet `f(x+t) = sum_{|m|<=k} (1/m!) ∂^m f t^m`, image of `1⊗f`.
pub fn jet_of<S: Field>(f: &RingElem<S>, k: u32) -> Result<Jet<S>> {
    let table = derivative_table(f, k)?;
    let mut j = Jet::zero(f.chart(), k);
    for (m, d) in table {
        let inv = S::one() / m.factorial::<S>();
        j.insert(m, d.scale(&inv));
    }
    Ok(j)
}

/// Image of `g⊗f`, namely `g(x) f(x+t)`.
pub fn jet_of_pair<S: Field>(g: &RingElem<S>, f: &RingElem<S>, k: u32) -> Result<Jet<S>> {
    jet_of(f, k)?.scale_by(g)
}

/// `δ(f) = f⊗1 - 1⊗f`.
pub fn delta<S: Field>(f: &RingElem<S>, k: u32) -> Result<Jet<S>> {
    Jet::scalar(f, k).try_sub(&jet_of(f, k)?)
}

/// `δ(x)^m = prod_i δ(x_i)^{m_i}`, computed through products of δ's.
pub fn delta_x_power<S: Field>(chart: &Arc<Chart<S>>, m: &MultiIndex, k: u32) -> Result<Jet<S>> {
    let mut acc = Jet::one(chart, k);
    for (i, e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let d = delta(&RingElem::var(chart, i)?, k)?;
        acc = acc.try_mul(&d.pow(e)?)?;
    }
    Ok(acc)
}

/// Both Taylor identities in `A⊗̂A`, truncated at order `k`:
///
/// * `1⊗f = sum_m ((-1)^{|m|}/m!) (∂^m f ⊗ 1) δ(x)^m`
/// * `f⊗1 = sum_m (1/m!) (1 ⊗ ∂^m f) δ(x)^m`
pub fn taylor_identity_check<S: Field>(f: &RingElem<S>, k: u32) -> Result<bool> {
    let chart = f.chart();
    let table = derivative_table(f, k)?;
    let mut first = Jet::zero(chart, k);
    let mut second = Jet::zero(chart, k);
    for (m, d) in &table {
        let dx = delta_x_power(chart, m, k)?;
        let inv = S::one() / m.factorial::<S>();
        first = first.try_add(&dx.scale_by(d)?.scale(&(sign::<S>(m.degree()) * inv.clone())))?;
        second = second.try_add(&jet_of(d, k)?.try_mul(&dx)?.scale(&inv))?;
    }
    Ok(jet_of(f, k)?.try_eq(&first)? && Jet::scalar(f, k).try_eq(&second)?)
}

/// Recovers the Taylor coefficients the way the existence argument does:
/// writing `f⊗1 = 1⊗f + sum (1⊗h_m) δ(x)^m`, applying `∂^m` on the first
/// factor and then the multiplication map must give `∂^m f` on the left and
/// `m! h_m` on the right. Returns true iff both sides agree for all
/// `1 <= |m| <= k` with `h_m = ∂^m f / m!`.
pub fn taylor_coefficient_recovery<S: Field>(f: &RingElem<S>, k: u32) -> Result<bool> {
    let chart = f.chart();
    let table = derivative_table(f, k)?;
    let mut rhs = Jet::zero(chart, k);
    for (m, d) in &table {
        let h = d.scale(&(S::one() / m.factorial::<S>()));
        rhs = rhs.try_add(&jet_of(&h, k)?.try_mul(&delta_x_power(chart, m, k)?)?)?;
    }
    let lhs = Jet::scalar(f, k);
    for (m, d) in &table {
        if m.is_zero() {
            continue;
        }
        let (mut l, mut r) = (lhs.clone(), rhs.clone());
        for (i, e) in m.iter().enumerate() {
            for _ in 0..e {
                l = l.act_first_factor(i)?;
                r = r.act_first_factor(i)?;
            }
        }
        if !l.eval_diagonal().try_eq(d)? || !r.eval_diagonal().try_eq(d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    #[test]
    fn jet_of_examples() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let t = |e: u32| MultiIndex::from([e]);
        let j = jet_of(&x.pow(2), 2).unwrap();
        assert_eq!(j.coeff(&t(0)), x.pow(2));
        assert_eq!(j.coeff(&t(1)), x.scale(&rat(2, 1)));
        assert_eq!(j.coeff(&t(2)), RingElem::one(&c));

        let c2 = fixtures::c2();
        let x = RingElem::var(&c2, 0).unwrap();
        let inv = x.inverse().unwrap();
        let j = jet_of(&inv, 2).unwrap();
        assert_eq!(j.coeff(&t(1)), -&inv.pow(2));
        assert_eq!(j.coeff(&t(2)), inv.pow(3));
        assert_eq!(j.to_string(), "(1/x) + (-1/x^2)*t + (1/x^3)*t^2");
    }

    #[test]
    fn elliptic_jet() {
        // Oracle: y(x+t) = y + y' t with 2 y y' = 3x^2 - 1.
        let c = fixtures::c3();
        let x = RingElem::var(&c, 0).unwrap();
        let y = RingElem::var(&c, 1).unwrap();
        let j = jet_of(&y, 1).unwrap();
        let slope = j.coeff(&MultiIndex::from([1]));
        assert_eq!(&slope * &y.scale(&rat(2, 1)), &x.pow(2).scale(&rat(3, 1)) - &RingElem::one(&c));
    }

    #[test]
    fn delta_examples() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let dx = delta(&x, 2).unwrap();
        let minus_t = Jet::monomial(MultiIndex::from([1]), -&RingElem::one(&c), 2).unwrap();
        assert_eq!(dx, minus_t);
        let t2 = Jet::monomial(MultiIndex::from([2]), RingElem::one(&c), 2).unwrap();
        assert_eq!(dx.try_mul(&dx).unwrap(), t2);
        let d2 = delta(&x.pow(2), 2).unwrap();
        assert_eq!(d2.coeff(&MultiIndex::from([1])), x.scale(&rat(-2, 1)));
        assert_eq!(d2.coeff(&MultiIndex::from([2])), -&RingElem::one(&c));
        assert!(delta(&RingElem::constant(&c, rat(5, 1)), 2).unwrap().is_zero());
        assert_eq!(dx.try_mul(&d2).unwrap().t_order(), 2);
        assert_eq!(Jet::zero(&c, 3).t_order(), 4);
        assert_eq!(Jet::one(&c, 3).t_order(), 0);
    }

    #[test]
    fn factor_actions() {
        let c = fixtures::c2();
        let x = RingElem::var(&c, 0).unwrap();
        let f = &x.pow(3) + &x.inverse().unwrap();
        assert!(jet_of(&f, 3).unwrap().act_first_factor(0).unwrap().is_zero());
        let a = delta(&x, 3).unwrap().act_first_factor(0).unwrap();
        assert_eq!(a, Jet::one(&c, 2));
        let line = fixtures::affine_line();
        let x = RingElem::var(&line, 0).unwrap();
        let s = jet_of(&x.pow(2), 2).unwrap().act_second_factor(0).unwrap();
        assert_eq!(s.order(), 1);
        assert_eq!(s.coeff(&MultiIndex::from([0])), x.scale(&rat(2, 1)));
        assert_eq!(s.coeff(&MultiIndex::from([1])), RingElem::constant(&line, rat(2, 1)));
        assert_eq!(Jet::one(&line, 0).act_first_factor(0).unwrap_err(), Error::OrderUnderflow);
    }

    #[test]
    fn taylor_examples() {
        let line = fixtures::affine_line();
        let x = RingElem::var(&line, 0).unwrap();
        assert!(taylor_identity_check(&x.pow(3), 3).unwrap());
        let c2 = fixtures::c2();
        assert!(taylor_identity_check(&RingElem::var(&c2, 0).unwrap().inverse().unwrap(), 3).unwrap());
        let c3 = fixtures::c3();
        let y = RingElem::var(&c3, 1).unwrap();
        assert!(taylor_identity_check(&y, 2).unwrap());
        assert!(taylor_coefficient_recovery(&y, 2).unwrap());
    }

    #[test]
    fn unsigned_convention_fails() {
        // With δ(x) ↦ +t the first identity breaks already for f = x.
        let line = fixtures::affine_line();
        let x = RingElem::var(&line, 0).unwrap();
        let plus_t = Jet::monomial(MultiIndex::from([1]), RingElem::one(&line), 1).unwrap();
        let rhs = Jet::scalar(&x, 1).try_sub(&plus_t).unwrap();
        assert_ne!(jet_of(&x, 1).unwrap(), rhs);
    }

    #[test]
    fn mismatches() {
        let c = fixtures::c2();
        let a = Jet::one(&c, 2);
        let b = Jet::one(&c, 3);
        assert_eq!(a.try_mul(&b).unwrap_err(), Error::OrderMismatch(2, 3));
        let other = Jet::one(&fixtures::c3(), 2);
        assert!(matches!(a.try_add(&other), Err(Error::ChartMismatch(..))));
    }
}
