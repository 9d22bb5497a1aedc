//! The positively graded part `L₊` of `Der K[X_1..X_N]`, truncated, together
//! with the current algebra `A⊗L₊`, the semidirect product `V ⋉ (A⊗L₊)` and
//! the mutually inverse maps φ (jet fields to pairs) and ψ (back).
//!
//! Truncation at `r` keeps the basis vectors `X^m ∂/∂X_i` with `1 ≤ |m| ≤ r`,
//! i.e. degrees `0..r-1`, which is the quotient of `L₊` by the ideal of
//! degrees `≥ r`. Jet order `k` corresponds to `r = k`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::MultiIndex;
use crate::chart::{Chart, RingElem};
use crate::error::{Error, Result};
use crate::jet::{delta_x_power, Jet};
use crate::jet_field::JetField;
use crate::scalar::{sign, Field, Rational};
use crate::vfield::VectorField;

/// Basis vector `X^m ∂/∂X_dir` of `L₊`.
///
/// The derived order compares `m` first (graded-lex, so by degree first)
/// and then the direction; this is the PBW order used by the enveloping
/// algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LBasis {
    pub m: MultiIndex,
    pub dir: usize,
}

impl LBasis {
    pub fn new(m: MultiIndex, dir: usize) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::ZeroMultiIndex);
        }
        if dir >= m.len() {
            return Err(Error::IndexOutOfRange { index: dir, len: m.len() });
        }
        Ok(LBasis { m, dir })
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// Grading degree `|m| - 1`.
    pub fn degree(&self) -> u32 {
        self.m.degree() - 1
    }

    /// Lie bracket of two basis vectors, as a sparse combination with
    /// integer coefficients. Nothing is truncated here.
    pub fn bracket<S: Field>(&self, other: &LBasis) -> Vec<(LBasis, S)> {
        let (a, i) = (&self.m, self.dir);
        let (b, j) = (&other.m, other.dir);
        let mut out: Vec<(LBasis, S)> = Vec::with_capacity(2);
        let sum = a.add(b);
        let bi = b.get(i);
        if bi > 0 {
            out.push((LBasis { m: sum.decremented(i).unwrap(), dir: j }, S::int(bi as i64)));
        }
        let aj = a.get(j);
        if aj > 0 {
            let key = LBasis { m: sum.decremented(j).unwrap(), dir: i };
            match out.iter_mut().find(|(k, _)| *k == key) {
                Some(entry) => entry.1 = entry.1.clone() - S::int(aj as i64),
                None => out.push((key, -S::int(aj as i64))),
            }
        }
        out.retain(|(k, c)| !c.is_zero() && !k.m.is_zero());
        out
    }

    pub(crate) fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = l_var_names(self.n());
        let mut first = true;
        for (v, e) in self.m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", names[v])?;
            } else {
                write!(f, "{}^{e}", names[v])?;
            }
        }
        write!(f, "*D({})", names[self.dir])
    }
}

impl fmt::Display for LBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f)
    }
}

/// Names of the fibre coordinates: `X` for one variable, `X1..XN` otherwise.
pub fn l_var_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["X".to_string()]
    } else {
        (1..=n).map(|i| format!("X{i}")).collect()
    }
}

/// All basis vectors of `L^{(r)}` in PBW order.
pub fn l_basis(n: usize, r: u32) -> Vec<LBasis> {
    let mut out = Vec::new();
    for d in 1..=r {
        for m in MultiIndex::of_degree(n, d) {
            for dir in 0..n {
                out.push(LBasis { m: m.clone(), dir });
            }
        }
    }
    out.sort();
    out
}

/// Element of `L^{(r)} = L₊ / ⊕_{d ≥ r} L_d` with scalar coefficients.
#[derive(Clone, PartialEq)]
pub struct LElem<S: Field = Rational> {
    n: usize,
    max_degree: u32,
    terms: BTreeMap<LBasis, S>,
}

impl<S: Field> LElem<S> {
    pub fn zero(n: usize, max_degree: u32) -> Self {
        LElem { n, max_degree, terms: BTreeMap::new() }
    }

    /// `c X^m ∂/∂X_dir`; fails if the term lies outside the truncation.
    pub fn basis(n: usize, max_degree: u32, b: LBasis, c: S) -> Result<Self> {
        let mut e = Self::zero(n, max_degree);
        e.add_term(b, c)?;
        Ok(e)
    }

    pub fn from_terms<I>(n: usize, max_degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LBasis, S)>,
    {
        let mut e = Self::zero(n, max_degree);
        for (b, c) in terms {
            e.add_term(b, c)?;
        }
        Ok(e)
    }

    pub fn add_term(&mut self, b: LBasis, c: S) -> Result<()> {
        if b.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: b.n() });
        }
        if b.m.degree() > self.max_degree {
            return Err(Error::DegreeTooLarge { degree: b.m.degree(), max: self.max_degree });
        }
        self.add_unchecked(b, c);
        Ok(())
    }

    fn add_unchecked(&mut self, b: LBasis, c: S) {
        if c.is_zero() || b.m.degree() > self.max_degree {
            return;
        }
        let v = match self.terms.remove(&b) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(b, v);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LBasis, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &LBasis) -> S {
        self.terms.get(b).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Component of grading degree `d` (that is, `|m| = d + 1`).
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n, self.max_degree);
        for (b, c) in &self.terms {
            if b.degree() == d {
                out.add_unchecked(b.clone(), c.clone());
            }
        }
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.max_degree != other.max_degree {
            return Err(Error::OrderMismatch(self.max_degree, other.max_degree));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_unchecked(b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n, self.max_degree);
        for (b, v) in &self.terms {
            out.add_unchecked(b.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Bracket in the truncated algebra; terms of degree `≥ r` are dropped.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.n, self.max_degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                for (key, c) in a.bracket::<S>(b) {
                    out.add_unchecked(key, c * ca.clone() * cb.clone());
                }
            }
        }
        Ok(out)
    }
}

fn fmt_terms<'a, C: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a LBasis, C)>,
) -> fmt::Result {
    let mut first = true;
    for (b, c) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        write!(f, "({c})*")?;
        b.fmt_with(f)?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<S: Field> fmt::Display for LElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter())
    }
}

impl<S: Field> fmt::Debug for LElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LElem[r={}]({self})", self.max_degree)
    }
}

/// Element of the current algebra `A⊗L^{(r)}`.
#[derive(Clone)]
pub struct CurrentElem<S: Field = Rational> {
    chart: Arc<Chart<S>>,
    max_degree: u32,
    terms: BTreeMap<LBasis, RingElem<S>>,
}

impl<S: Field> CurrentElem<S> {
    pub fn zero(chart: &Arc<Chart<S>>, max_degree: u32) -> Self {
        CurrentElem { chart: chart.clone(), max_degree, terms: BTreeMap::new() }
    }

    /// `1⊗ℓ`.
    pub fn constant(chart: &Arc<Chart<S>>, l: &LElem<S>) -> Result<Self> {
        if l.n() != chart.n() {
            return Err(Error::DimensionMismatch { expected: chart.n(), found: l.n() });
        }
        let mut out = Self::zero(chart, l.max_degree());
        for (b, c) in l.terms() {
            out.add_unchecked(b.clone(), RingElem::constant(chart, c.clone()));
        }
        Ok(out)
    }

    /// `a⊗X^m ∂/∂X_dir`.
    pub fn basis(a: &RingElem<S>, max_degree: u32, b: LBasis) -> Result<Self> {
        let mut out = Self::zero(a.chart(), max_degree);
        out.add_term(b, a.clone())?;
        Ok(out)
    }

    pub fn from_terms<I>(chart: &Arc<Chart<S>>, max_degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LBasis, RingElem<S>)>,
    {
        let mut out = Self::zero(chart, max_degree);
        for (b, c) in terms {
            out.add_term(b, c)?;
        }
        Ok(out)
    }

    pub fn add_term(&mut self, b: LBasis, c: RingElem<S>) -> Result<()> {
        let n = self.chart.n();
        if b.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.n() });
        }
        if b.m.degree() > self.max_degree {
            return Err(Error::DegreeTooLarge { degree: b.m.degree(), max: self.max_degree });
        }
        RingElem::zero(&self.chart).try_add(&c)?;
        self.add_unchecked(b, c);
        Ok(())
    }

    fn add_unchecked(&mut self, b: LBasis, c: RingElem<S>) {
        if c.is_zero() || b.m.degree() > self.max_degree {
            return;
        }
        let v = match self.terms.remove(&b) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(b, v);
        }
    }

    pub fn chart(&self) -> &Arc<Chart<S>> {
        &self.chart
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LBasis, &RingElem<S>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &LBasis) -> RingElem<S> {
        self.terms.get(b).cloned().unwrap_or_else(|| RingElem::zero(&self.chart))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.max_degree != other.max_degree {
            return Err(Error::OrderMismatch(self.max_degree, other.max_degree));
        }
        RingElem::zero(&self.chart).try_add(&RingElem::zero(&other.chart)).map(|_| ())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_unchecked(b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_unchecked(b.clone(), -c);
        }
        Ok(out)
    }

    /// Left multiplication of every coefficient by `a`.
    pub fn scale(&self, a: &RingElem<S>) -> Result<Self> {
        let mut out = Self::zero(&self.chart, self.max_degree);
        for (b, c) in &self.terms {
            out.add_unchecked(b.clone(), a.try_mul(c)?);
        }
        Ok(out)
    }

    /// Pointwise bracket `(a⊗ℓ₁, b⊗ℓ₂) ↦ ab⊗[ℓ₁,ℓ₂]`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.chart, self.max_degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let prod = ca.try_mul(cb)?;
                for (key, c) in a.bracket::<S>(b) {
                    out.add_unchecked(key, prod.scale(&c));
                }
            }
        }
        Ok(out)
    }

    /// Action of a vector field on the `A`-coefficients.
    pub fn apply_field(&self, v: &VectorField<S>) -> Result<Self> {
        let mut out = Self::zero(&self.chart, self.max_degree);
        for (b, c) in &self.terms {
            out.add_unchecked(b.clone(), v.apply(c)?);
        }
        Ok(out)
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.try_sub(other)?.is_zero())
    }
}

impl<S: Field> PartialEq for CurrentElem<S> {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

impl<S: Field> fmt::Display for CurrentElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter())
    }
}

impl<S: Field> fmt::Debug for CurrentElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurrentElem[r={}]({self})", self.max_degree)
    }
}

/// Element `(v, ℓ)` of `V ⋉ (A⊗L^{(r)})`.
#[derive(Clone, PartialEq)]
pub struct SemiDirectElem<S: Field = Rational> {
    pub v_part: VectorField<S>,
    pub l_part: CurrentElem<S>,
}

impl<S: Field> SemiDirectElem<S> {
    pub fn new(v_part: VectorField<S>, l_part: CurrentElem<S>) -> Result<Self> {
        RingElem::zero(v_part.chart()).try_add(&RingElem::zero(l_part.chart()))?;
        Ok(SemiDirectElem { v_part, l_part })
    }

    pub fn zero(chart: &Arc<Chart<S>>, max_degree: u32) -> Self {
        SemiDirectElem { v_part: VectorField::zero(chart), l_part: CurrentElem::zero(chart, max_degree) }
    }

    pub fn chart(&self) -> &Arc<Chart<S>> {
        self.v_part.chart()
    }

    pub fn max_degree(&self) -> u32 {
        self.l_part.max_degree()
    }

    pub fn is_zero(&self) -> bool {
        self.v_part.is_zero() && self.l_part.is_zero()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Self::new(self.v_part.try_add(&other.v_part)?, self.l_part.try_add(&other.l_part)?)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Self::new(self.v_part.try_sub(&other.v_part)?, self.l_part.try_sub(&other.l_part)?)
    }

    /// Left `A`-module structure.
    pub fn scale(&self, a: &RingElem<S>) -> Result<Self> {
        Self::new(self.v_part.scale(a)?, self.l_part.scale(a)?)
    }

    /// `[(v₁,ℓ₁),(v₂,ℓ₂)] = ([v₁,v₂], [ℓ₁,ℓ₂] + v₁·ℓ₂ − v₂·ℓ₁)`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let v = self.v_part.bracket(&other.v_part)?;
        let l = self
            .l_part
            .bracket(&other.l_part)?
            .try_add(&other.l_part.apply_field(&self.v_part)?)?
            .try_sub(&self.l_part.apply_field(&other.v_part)?)?;
        Self::new(v, l)
    }
}

impl<S: Field> fmt::Display for SemiDirectElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.v_part.is_zero(), self.l_part.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.v_part),
            (true, false) => write!(f, "{}", self.l_part),
            (false, false) => write!(f, "{} + {}", self.v_part, self.l_part),
        }
    }
}

impl<S: Field> fmt::Debug for SemiDirectElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SemiDirectElem[r={}]{self}", self.max_degree())
    }
}

/// φ: the anchor gives the vector-field part, and the `t^m` coefficient of
/// the `i`-th component (for `|m| ≥ 1`) becomes the coefficient of
/// `X^m ∂/∂X_i`. The truncation of the result equals the jet order.
pub fn phi<S: Field>(u: &JetField<S>) -> Result<SemiDirectElem<S>> {
    let chart = u.chart();
    let mut l = CurrentElem::zero(chart, u.order());
    for (dir, comp) in u.components().iter().enumerate() {
        for (m, c) in comp.coeffs() {
            if !m.is_zero() {
                l.add_term(LBasis { m: m.clone(), dir }, c.clone())?;
            }
        }
    }
    SemiDirectElem::new(u.anchor(), l)
}

/// ψ: `g ∂_i ↦ g⊗∂_i` and `g⊗X^m ∂/∂X_i ↦ (-1)^{|m|} (g⊗1) δ(x)^m ∂_i`,
/// landing in jet fields of order `k ≥ r`.
pub fn psi<S: Field>(p: &SemiDirectElem<S>, k: u32) -> Result<JetField<S>> {
    let r = p.max_degree();
    if r > k {
        return Err(Error::OrderMismatch(r, k));
    }
    let chart = p.chart();
    let n = chart.n();
    let mut comps: Vec<Jet<S>> = p.v_part.coeffs().iter().map(|g| Jet::scalar(g, k)).collect();
    let mut powers: BTreeMap<MultiIndex, Jet<S>> = BTreeMap::new();
    for (b, g) in p.l_part.terms() {
        if !powers.contains_key(&b.m) {
            powers.insert(b.m.clone(), delta_x_power(chart, &b.m, k)?);
        }
        let term = powers[&b.m].scale_by(g)?.scale(&sign::<S>(b.m.degree()));
        comps[b.dir] = comps[b.dir].try_add(&term)?;
    }
    debug_assert_eq!(comps.len(), n);
    JetField::new(chart, k, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    fn b(m: &[u32], dir: usize) -> LBasis {
        LBasis::new(MultiIndex::from_slice(m), dir).unwrap()
    }

    #[test]
    fn witt_and_gl_relations() {
        let e = LElem::basis(1, 3, b(&[1], 0), rat(1, 1)).unwrap();
        let f = LElem::basis(1, 3, b(&[2], 0), rat(1, 1)).unwrap();
        assert_eq!(e.bracket(&f).unwrap(), f);
        assert!(f.bracket(&f).unwrap().is_zero());

        let a = LElem::basis(2, 2, b(&[1, 0], 1), rat(1, 1)).unwrap();
        let c = LElem::basis(2, 2, b(&[0, 1], 0), rat(1, 1)).unwrap();
        let expect = LElem::from_terms(2, 2, [(b(&[1, 0], 0), rat(1, 1)), (b(&[0, 1], 1), rat(-1, 1))]).unwrap();
        assert_eq!(a.bracket(&c).unwrap(), expect);
    }

    #[test]
    fn truncation_drops_high_degrees() {
        let f = LElem::basis(1, 2, b(&[2], 0), rat(1, 1)).unwrap();
        let g = LElem::basis(1, 2, b(&[2], 0), rat(1, 1)).unwrap();
        assert!(f.bracket(&g).unwrap().is_zero());
        let x2 = LElem::basis(1, 3, b(&[2], 0), rat(1, 1)).unwrap();
        let x3 = LElem::basis(1, 3, b(&[3], 0), rat(1, 1)).unwrap();
        // [X^2 d, X^3 d] = X^4 d has degree 3, outside r = 3.
        assert!(x2.bracket(&x3).unwrap().is_zero());
        assert!(matches!(LElem::basis(1, 2, b(&[3], 0), rat(1, 1)), Err(Error::DegreeTooLarge { .. })));
        assert!(matches!(LBasis::new(MultiIndex::zeros(1), 0), Err(Error::ZeroMultiIndex)));
        assert!(matches!(x2.bracket(&f), Err(Error::OrderMismatch(3, 2))));
    }

    #[test]
    fn basis_order_is_degree_first() {
        let basis = l_basis(2, 2);
        assert_eq!(basis.len(), 2 * 2 + 3 * 2);
        assert!(basis.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(basis[0].degree(), 0);
        assert_eq!(basis.last().unwrap().degree(), 1);
        assert_eq!(b(&[1, 2], 1).to_string(), "X1*X2^2*D(X2)");
    }

    #[test]
    fn semidirect_examples() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let one = RingElem::one(&c);
        let d = VectorField::coordinate(&c, 0, one.clone()).unwrap();
        let p = SemiDirectElem::new(d.clone(), CurrentElem::zero(&c, 2)).unwrap();
        let q = SemiDirectElem::new(VectorField::zero(&c), CurrentElem::basis(&x, 2, b(&[1], 0)).unwrap()).unwrap();
        let expect = SemiDirectElem::new(VectorField::zero(&c), CurrentElem::basis(&one, 2, b(&[1], 0)).unwrap()).unwrap();
        assert_eq!(p.bracket(&q).unwrap(), expect);

        let e = SemiDirectElem::new(VectorField::zero(&c), CurrentElem::basis(&one, 2, b(&[1], 0)).unwrap()).unwrap();
        let f = SemiDirectElem::new(VectorField::zero(&c), CurrentElem::basis(&one, 2, b(&[2], 0)).unwrap()).unwrap();
        assert_eq!(e.bracket(&f).unwrap(), f);
    }

    #[test]
    fn phi_of_x_squared_d() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let v = VectorField::coordinate(&c, 0, x.pow(2)).unwrap();
        let u = JetField::from_pair(&RingElem::one(&c), &v, 2).unwrap();
        let p = phi(&u).unwrap();
        assert_eq!(p.v_part, v);
        let l = CurrentElem::from_terms(
            &c,
            2,
            [(b(&[1], 0), x.scale(&rat(2, 1))), (b(&[2], 0), RingElem::one(&c))],
        )
        .unwrap();
        assert_eq!(p.l_part, l);
        assert_eq!(psi(&p, 2).unwrap(), u);
    }

    #[test]
    fn psi_examples() {
        let c = fixtures::c2();
        let x = RingElem::var(&c, 0).unwrap();
        let g = x.inverse().unwrap();
        let p = SemiDirectElem::new(VectorField::zero(&c), CurrentElem::basis(&g, 1, b(&[1], 0)).unwrap()).unwrap();
        let u = psi(&p, 1).unwrap();
        let expect = Jet::monomial(MultiIndex::from([1]), g.clone(), 1).unwrap();
        assert_eq!(u.components()[0], expect);
        assert!(psi(&SemiDirectElem::zero(&c, 2), 3).unwrap().is_zero());
        assert!(matches!(psi(&SemiDirectElem::zero(&c, 3), 2), Err(Error::OrderMismatch(3, 2))));
    }

    #[test]
    fn phi_preserves_brackets() {
        for c in [fixtures::c1(), fixtures::c2(), fixtures::c3()] {
            let n = c.n();
            let x = RingElem::var(&c, 0).unwrap();
            let last = RingElem::var(&c, c.vars().len() - 1).unwrap();
            let a1 = &x + &RingElem::one(&c);
            let f1 = &x * &last;
            let a2 = last.pow(2);
            let f2 = &x.pow(3) - &last;
            for k in 0..=3 {
                let u = JetField::from_pair(&a1, &VectorField::coordinate(&c, 0, f1.clone()).unwrap(), k).unwrap();
                let w = JetField::from_pair(&a2, &VectorField::coordinate(&c, n - 1, f2.clone()).unwrap(), k).unwrap();
                let lhs = phi(&u.bracket(&w).unwrap()).unwrap();
                let rhs = phi(&u).unwrap().bracket(&phi(&w).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "chart {} order {k}", c.name());
                assert_eq!(psi(&phi(&u).unwrap(), k).unwrap(), u);
            }
        }
    }
}
