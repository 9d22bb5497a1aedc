//! Differential operators `D`, the truncated enveloping algebra
//! `U(L^{(r)})` in PBW normal form, their tensor product, and the algebra
//! map from words in `AV = A#U(V)` to `D ⊗ U(L^{(r)})`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::arith::MultiIndex;
use crate::chart::{Chart, RingElem};
use crate::error::{Error, Result};
use crate::lplus::{LBasis, LElem};
use crate::scalar::{Field, Rational};
use crate::vfield::VectorField;

fn fmt_partials(f: &mut fmt::Formatter<'_>, params: &[String], k: &MultiIndex) -> fmt::Result {
    for (i, e) in k.iter().enumerate() {
        match e {
            0 => {}
            1 => write!(f, "*D({})", params[i])?,
            _ => write!(f, "*D({})^{e}", params[i])?,
        }
    }
    Ok(())
}

/// Differential operator `Σ a_k ∂^k`, coefficients to the left.
#[derive(Clone)]
pub struct DiffOp<S: Field = Rational> {
    chart: Arc<Chart<S>>,
    terms: BTreeMap<MultiIndex, RingElem<S>>,
}

impl<S: Field> DiffOp<S> {
    pub fn zero(chart: &Arc<Chart<S>>) -> Self {
        DiffOp { chart: chart.clone(), terms: BTreeMap::new() }
    }

    pub fn one(chart: &Arc<Chart<S>>) -> Self {
        Self::multiplication(&RingElem::one(chart))
    }

    /// The operator of multiplication by `a`.
    pub fn multiplication(a: &RingElem<S>) -> Self {
        let mut d = Self::zero(a.chart());
        d.add_unchecked(MultiIndex::zeros(a.chart().n()), a.clone());
        d
    }

    /// `a ∂^k`.
    pub fn monomial(a: &RingElem<S>, k: MultiIndex) -> Result<Self> {
        let mut d = Self::zero(a.chart());
        d.add_term(k, a.clone())?;
        Ok(d)
    }

    pub fn partial(chart: &Arc<Chart<S>>, i: usize) -> Result<Self> {
        if i >= chart.n() {
            return Err(Error::IndexOutOfRange { index: i, len: chart.n() });
        }
        Self::monomial(&RingElem::one(chart), MultiIndex::unit(chart.n(), i))
    }

    pub fn from_vector_field(v: &VectorField<S>) -> Self {
        let n = v.chart().n();
        let mut d = Self::zero(v.chart());
        for (i, c) in v.coeffs().iter().enumerate() {
            d.add_unchecked(MultiIndex::unit(n, i), c.clone());
        }
        d
    }

    pub fn from_terms<I>(chart: &Arc<Chart<S>>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, RingElem<S>)>,
    {
        let mut d = Self::zero(chart);
        for (k, a) in terms {
            d.add_term(k, a)?;
        }
        Ok(d)
    }

    pub fn add_term(&mut self, k: MultiIndex, a: RingElem<S>) -> Result<()> {
        if k.len() != self.chart.n() {
            return Err(Error::DimensionMismatch { expected: self.chart.n(), found: k.len() });
        }
        RingElem::zero(&self.chart).try_add(&a)?;
        self.add_unchecked(k, a);
        Ok(())
    }

    fn add_unchecked(&mut self, k: MultiIndex, a: RingElem<S>) {
        if a.is_zero() {
            return;
        }
        let v = match self.terms.remove(&k) {
            Some(old) => &old + &a,
            None => a,
        };
        if !v.is_zero() {
            self.terms.insert(k, v);
        }
    }

    pub fn chart(&self) -> &Arc<Chart<S>> {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RingElem<S>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &MultiIndex) -> RingElem<S> {
        self.terms.get(k).cloned().unwrap_or_else(|| RingElem::zero(&self.chart))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total order of a derivative present.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        RingElem::zero(&self.chart).try_add(&RingElem::zero(&other.chart)).map(|_| ())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, a) in &other.terms {
            out.add_unchecked(k.clone(), a.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, a) in &other.terms {
            out.add_unchecked(k.clone(), -a);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, a) in &self.terms {
            out.add_unchecked(k.clone(), a.scale(c));
        }
        out
    }

    /// Composition `self ∘ other`, brought to normal order with
    /// `∂^k ∘ b = Σ_{j ≤ k} C(k, j) ∂^j(b) ∂^{k-j}`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.chart);
        for (l, b) in &other.terms {
            let mut derivs: HashMap<MultiIndex, RingElem<S>> = HashMap::new();
            for (k, a) in &self.terms {
                for j in k.sub_indices() {
                    let dj = match derivs.get(&j) {
                        Some(d) => d.clone(),
                        None => {
                            let d = b.derive_multi(&j)?;
                            derivs.insert(j.clone(), d.clone());
                            d
                        }
                    };
                    if dj.is_zero() {
                        continue;
                    }
                    let c: S = k.binomial(&j)?;
                    let key = k.checked_sub(&j).unwrap().add(l);
                    out.add_unchecked(key, a.try_mul(&dj)?.scale(&c));
                }
            }
        }
        Ok(out)
    }

    /// `Σ a_k ∂^k f`.
    pub fn apply(&self, f: &RingElem<S>) -> Result<RingElem<S>> {
        let mut acc = RingElem::zero(&self.chart);
        for (k, a) in &self.terms {
            acc = acc.try_add(&a.try_mul(&f.derive_multi(k)?)?)?;
        }
        Ok(acc)
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.try_sub(other)?.is_zero())
    }
}

impl<S: Field> PartialEq for DiffOp<S> {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

impl<S: Field> fmt::Display for DiffOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, a)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({a})")?;
            fmt_partials(f, self.chart.params(), k)?;
        }
        Ok(())
    }
}

impl<S: Field> fmt::Debug for DiffOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}

/// Sorted product of `L₊` basis vectors; the empty product is the unit.
///
/// Monomials compare by length first, then factor by factor.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PBWMonomial(Vec<LBasis>);

impl PBWMonomial {
    pub fn unit() -> Self {
        PBWMonomial(Vec::new())
    }

    /// Wraps a factor list, which must already be non-decreasing.
    pub fn from_sorted(factors: Vec<LBasis>) -> Option<Self> {
        if factors.windows(2).all(|w| w[0] <= w[1]) {
            Some(PBWMonomial(factors))
        } else {
            None
        }
    }

    pub fn factors(&self) -> &[LBasis] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Exponent form: distinct factors with multiplicities.
    pub fn powers(&self) -> Vec<(&LBasis, u32)> {
        let mut out: Vec<(&LBasis, u32)> = Vec::new();
        for b in &self.0 {
            match out.last_mut() {
                Some((last, e)) if *last == b => *e += 1,
                _ => out.push((b, 1)),
            }
        }
        out
    }
}

impl Ord for PBWMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PBWMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, (b, e)) in self.powers().into_iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            write!(f, "[{b}]")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Rewrites words in `U(L^{(r)})` into PBW normal form.
///
/// The first adjacent descent `b a` (with `a < b`) is replaced by
/// `a b + [b, a]`. Each swap strictly lowers the number of inversions at
/// fixed length and the bracket terms are one factor shorter, so the
/// recursion terminates by induction on (length, inversions). Brackets of
/// degree `≥ r` vanish in the quotient and are simply not generated.
/// Results are memoised per word for the lifetime of the straightener.
pub struct Straightener<S: Field = Rational> {
    r: u32,
    memo: HashMap<Vec<LBasis>, Vec<(PBWMonomial, S)>>,
}

impl<S: Field> Straightener<S> {
    pub fn new(r: u32) -> Self {
        Straightener { r, memo: HashMap::new() }
    }

    pub fn truncation(&self) -> u32 {
        self.r
    }

    pub fn normalize(&mut self, word: &[LBasis]) -> Result<Vec<(PBWMonomial, S)>> {
        if let Some(b) = word.iter().find(|b| b.m.degree() > self.r) {
            return Err(Error::DegreeTooLarge { degree: b.m.degree(), max: self.r });
        }
        Ok(self.normalize_inner(word))
    }

    fn normalize_inner(&mut self, word: &[LBasis]) -> Vec<(PBWMonomial, S)> {
        let Some(i) = (0..word.len().saturating_sub(1)).find(|&i| word[i] > word[i + 1]) else {
            return vec![(PBWMonomial(word.to_vec()), S::one())];
        };
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }
        let mut acc: BTreeMap<PBWMonomial, S> = BTreeMap::new();
        let mut swapped = word.to_vec();
        swapped.swap(i, i + 1);
        for (m, c) in self.normalize_inner(&swapped) {
            add_coeff(&mut acc, m, c);
        }
        for (key, c) in word[i].bracket::<S>(&word[i + 1]) {
            if key.m.degree() > self.r {
                continue;
            }
            let mut shorter = Vec::with_capacity(word.len() - 1);
            shorter.extend_from_slice(&word[..i]);
            shorter.push(key);
            shorter.extend_from_slice(&word[i + 2..]);
            for (m, d) in self.normalize_inner(&shorter) {
                add_coeff(&mut acc, m, d * c.clone());
            }
        }
        let out: Vec<_> = acc.into_iter().collect();
        self.memo.insert(word.to_vec(), out.clone());
        out
    }
}

fn add_coeff<K: Ord, S: Field>(map: &mut BTreeMap<K, S>, k: K, c: S) {
    if c.is_zero() {
        return;
    }
    let v = match map.remove(&k) {
        Some(old) => old + c,
        None => c,
    };
    if !v.is_zero() {
        map.insert(k, v);
    }
}

/// Straightens a single word over `L^{(r)}`.
pub fn pbw_normalize<S: Field>(n: usize, word: &[LBasis], r: u32) -> Result<UElem<S>> {
    if let Some(b) = word.iter().find(|b| b.n() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: b.n() });
    }
    let mut st = Straightener::new(r);
    let terms = st.normalize(word)?;
    Ok(UElem { n, r, terms: terms.into_iter().collect() })
}

/// Element of `U(L^{(r)})` in PBW normal form.
#[derive(Clone, PartialEq)]
pub struct UElem<S: Field = Rational> {
    n: usize,
    r: u32,
    terms: BTreeMap<PBWMonomial, S>,
}

impl<S: Field> UElem<S> {
    pub fn zero(n: usize, r: u32) -> Self {
        UElem { n, r, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, r: u32) -> Self {
        let mut u = Self::zero(n, r);
        u.terms.insert(PBWMonomial::unit(), S::one());
        u
    }

    /// Image of a Lie algebra element under `L → U(L)`.
    pub fn from_lie(l: &LElem<S>) -> Self {
        let mut u = Self::zero(l.n(), l.max_degree());
        for (b, c) in l.terms() {
            add_coeff(&mut u.terms, PBWMonomial(vec![b.clone()]), c.clone());
        }
        u
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn truncation(&self) -> u32 {
        self.r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PBWMonomial, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.r != other.r {
            return Err(Error::OrderMismatch(self.r, other.r));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_coeff(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n, self.r);
        for (m, v) in &self.terms {
            add_coeff(&mut out.terms, m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut st = Straightener::<S>::new(self.r);
        let mut out = Self::zero(self.n, self.r);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let word: Vec<LBasis> = a.0.iter().chain(&b.0).cloned().collect();
                for (m, c) in st.normalize(&word)? {
                    add_coeff(&mut out.terms, m, c * ca.clone() * cb.clone());
                }
            }
        }
        Ok(out)
    }
}

impl<S: Field> fmt::Display for UElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

impl<S: Field> fmt::Debug for UElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UElem[r={}]({self})", self.r)
    }
}

/// Element of `D ⊗ U(L^{(r)})`: terms `a ∂^k ⊗ u` keyed by `(k, u)` with
/// the function coefficient `a` kept on the `D` side.
#[derive(Clone)]
pub struct TensorElem<S: Field = Rational> {
    chart: Arc<Chart<S>>,
    r: u32,
    terms: BTreeMap<(MultiIndex, PBWMonomial), RingElem<S>>,
}

impl<S: Field> TensorElem<S> {
    pub fn zero(chart: &Arc<Chart<S>>, r: u32) -> Self {
        TensorElem { chart: chart.clone(), r, terms: BTreeMap::new() }
    }

    pub fn one(chart: &Arc<Chart<S>>, r: u32) -> Self {
        Self::from_dop(&DiffOp::one(chart), r)
    }

    /// `d ⊗ 1`.
    pub fn from_dop(d: &DiffOp<S>, r: u32) -> Self {
        let mut out = Self::zero(d.chart(), r);
        for (k, a) in d.terms() {
            out.add_unchecked(k.clone(), PBWMonomial::unit(), a.clone());
        }
        out
    }

    /// `1 ⊗ u`.
    pub fn from_u(chart: &Arc<Chart<S>>, u: &UElem<S>) -> Result<Self> {
        if u.n() != chart.n() {
            return Err(Error::DimensionMismatch { expected: chart.n(), found: u.n() });
        }
        let mut out = Self::zero(chart, u.truncation());
        let zero = MultiIndex::zeros(chart.n());
        for (m, c) in u.terms() {
            out.add_unchecked(zero.clone(), m.clone(), RingElem::constant(chart, c.clone()));
        }
        Ok(out)
    }

    /// `a ∂^k ⊗ u` for a PBW monomial `u`.
    pub fn term(a: &RingElem<S>, k: MultiIndex, u: PBWMonomial, r: u32) -> Result<Self> {
        let mut out = Self::zero(a.chart(), r);
        out.add_term(k, u, a.clone())?;
        Ok(out)
    }

    pub fn add_term(&mut self, k: MultiIndex, u: PBWMonomial, a: RingElem<S>) -> Result<()> {
        let n = self.chart.n();
        if k.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: k.len() });
        }
        if let Some(b) = u.factors().iter().find(|b| b.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: b.n() });
        }
        if let Some(b) = u.factors().iter().find(|b| b.m.degree() > self.r) {
            return Err(Error::DegreeTooLarge { degree: b.m.degree(), max: self.r });
        }
        RingElem::zero(&self.chart).try_add(&a)?;
        self.add_unchecked(k, u, a);
        Ok(())
    }

    fn add_unchecked(&mut self, k: MultiIndex, u: PBWMonomial, a: RingElem<S>) {
        if a.is_zero() {
            return;
        }
        let key = (k, u);
        let v = match self.terms.remove(&key) {
            Some(old) => &old + &a,
            None => a,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn chart(&self) -> &Arc<Chart<S>> {
        &self.chart
    }

    pub fn truncation(&self) -> u32 {
        self.r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, PBWMonomial), &RingElem<S>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The `D`-component paired with the PBW monomial `u`.
    pub fn d_part(&self, u: &PBWMonomial) -> DiffOp<S> {
        let mut d = DiffOp::zero(&self.chart);
        for ((k, m), a) in &self.terms {
            if m == u {
                d.add_unchecked(k.clone(), a.clone());
            }
        }
        d
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.r != other.r {
            return Err(Error::OrderMismatch(self.r, other.r));
        }
        RingElem::zero(&self.chart).try_add(&RingElem::zero(&other.chart)).map(|_| ())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for ((k, u), a) in &other.terms {
            out.add_unchecked(k.clone(), u.clone(), a.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for ((k, u), a) in &other.terms {
            out.add_unchecked(k.clone(), u.clone(), -a);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.chart, self.r);
        for ((k, u), a) in &self.terms {
            out.add_unchecked(k.clone(), u.clone(), a.scale(c));
        }
        out
    }

    /// `(d₁⊗u₁)(d₂⊗u₂) = d₁d₂ ⊗ u₁u₂`; the two factors commute.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut st = Straightener::new(self.r);
        let mut out = Self::zero(&self.chart, self.r);
        for ((k1, u1), a1) in &self.terms {
            let left = DiffOp::monomial(a1, k1.clone())?;
            for ((k2, u2), a2) in &other.terms {
                let prod = left.try_mul(&DiffOp::monomial(a2, k2.clone())?)?;
                let word: Vec<LBasis> = u1.factors().iter().chain(u2.factors()).cloned().collect();
                let us = st.normalize(&word)?;
                for (k, a) in prod.terms() {
                    for (u, c) in &us {
                        out.add_unchecked(k.clone(), u.clone(), a.scale(c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `st - ts`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.try_sub(other)?.is_zero())
    }
}

impl<S: Field> PartialEq for TensorElem<S> {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

impl<S: Field> fmt::Display for TensorElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((k, u), a)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({a})")?;
            fmt_partials(f, self.chart.params(), k)?;
            if !u.is_empty() {
                write!(f, "*{u}")?;
            }
        }
        Ok(())
    }
}

impl<S: Field> fmt::Debug for TensorElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElem[r={}]({self})", self.r)
    }
}

/// A generator of `AV`: a function or a vector field.
#[derive(Clone, Debug)]
pub enum AVFactor<S: Field = Rational> {
    Fun(RingElem<S>),
    Vf(VectorField<S>),
}

/// A word `w_1 w_2 ... w_n` in `AV`.
#[derive(Clone, Debug)]
pub struct AVWord<S: Field = Rational> {
    pub factors: Vec<AVFactor<S>>,
}

impl<S: Field> AVWord<S> {
    pub fn new(factors: Vec<AVFactor<S>>) -> Self {
        AVWord { factors }
    }
}

/// Image of a single generator.
///
/// `f ↦ f⊗1`, and `Σ f_i ∂_i ↦ Σ_i f_i∂_i⊗1 + Σ_{1≤|m|≤r} (∂^m f_i / m!) ⊗ X^m ∂/∂X_i`.
pub fn av_factor_image<S: Field>(factor: &AVFactor<S>, r: u32) -> Result<TensorElem<S>> {
    match factor {
        AVFactor::Fun(f) => Ok(TensorElem::from_dop(&DiffOp::multiplication(f), r)),
        AVFactor::Vf(v) => {
            let chart = v.chart();
            let n = chart.n();
            let mut out = TensorElem::from_dop(&DiffOp::from_vector_field(v), r);
            let zero = MultiIndex::zeros(n);
            for (i, fi) in v.coeffs().iter().enumerate() {
                if fi.is_zero() {
                    continue;
                }
                for d in 1..=r {
                    for m in MultiIndex::of_degree(n, d) {
                        let c = fi.derive_multi(&m)?;
                        if c.is_zero() {
                            continue;
                        }
                        let inv_fact = S::one() / m.factorial::<S>();
                        let u = PBWMonomial(vec![LBasis { m, dir: i }]);
                        out.add_unchecked(zero.clone(), u, c.scale(&inv_fact));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Image of a word: the product of the factor images in order.
pub fn av_to_tensor<S: Field>(chart: &Arc<Chart<S>>, word: &AVWord<S>, r: u32) -> Result<TensorElem<S>> {
    let mut acc = TensorElem::one(chart, r);
    for f in &word.factors {
        acc = acc.try_mul(&av_factor_image(f, r)?)?;
    }
    Ok(acc)
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
    fn weyl_relations() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let d = DiffOp::partial(&c, 0).unwrap();
        let xo = DiffOp::multiplication(&x);
        let expect = DiffOp::monomial(&x, MultiIndex::from([1])).unwrap().try_add(&DiffOp::one(&c)).unwrap();
        assert_eq!(d.try_mul(&xo).unwrap(), expect);
        let d2 = d.try_mul(&d).unwrap();
        let expect2 = DiffOp::monomial(&x, MultiIndex::from([2]))
            .unwrap()
            .try_add(&DiffOp::monomial(&RingElem::constant(&c, rat(2, 1)), MultiIndex::from([1])).unwrap())
            .unwrap();
        assert_eq!(d2.try_mul(&xo).unwrap(), expect2);
        assert_eq!(expect2.to_string(), "(2)*D(x) + (x)*D(x)^2");

        let c2 = fixtures::c2();
        let x = RingElem::var(&c2, 0).unwrap();
        let inv = x.inverse().unwrap();
        let d = DiffOp::partial(&c2, 0).unwrap();
        let got = d.try_mul(&DiffOp::multiplication(&inv)).unwrap();
        let expect = DiffOp::monomial(&inv, MultiIndex::from([1]))
            .unwrap()
            .try_sub(&DiffOp::multiplication(&inv.pow(2)))
            .unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn apply_examples() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let xd = DiffOp::monomial(&x, MultiIndex::from([1])).unwrap();
        assert_eq!(xd.apply(&x.pow(2)).unwrap(), x.pow(2).scale(&rat(2, 1)));
        let d2 = DiffOp::monomial(&RingElem::one(&c), MultiIndex::from([2])).unwrap();
        assert_eq!(d2.apply(&x.pow(3)).unwrap(), x.scale(&rat(6, 1)));
        assert_eq!(DiffOp::one(&c).apply(&x).unwrap(), x);
    }

    #[test]
    fn straightening() {
        let e = b(&[1], 0);
        let f = b(&[2], 0);
        let single = pbw_normalize::<Rational>(1, std::slice::from_ref(&e), 2).unwrap();
        assert_eq!(single.to_string(), "(1)*[X*D(X)]");
        let got = pbw_normalize::<Rational>(1, &[f.clone(), e.clone()], 2).unwrap();
        let ef = pbw_normalize::<Rational>(1, &[e.clone(), f.clone()], 2).unwrap();
        let fe = ef.try_sub(&UElem::from_lie(&LElem::basis(1, 2, f.clone(), rat(1, 1)).unwrap())).unwrap();
        assert_eq!(got, fe);
        let ee = pbw_normalize::<Rational>(1, &[e.clone(), e.clone()], 2).unwrap();
        assert_eq!(ee.to_string(), "(1)*[X*D(X)]^2");
        assert!(matches!(pbw_normalize::<Rational>(1, &[b(&[3], 0)], 2), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn tensor_examples() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let r = 2;
        let d = TensorElem::from_dop(&DiffOp::partial(&c, 0).unwrap(), r);
        let xo = TensorElem::from_dop(&DiffOp::multiplication(&x), r);
        let expect = TensorElem::from_dop(&DiffOp::monomial(&x, MultiIndex::from([1])).unwrap(), r)
            .try_add(&TensorElem::one(&c, r))
            .unwrap();
        assert_eq!(d.try_mul(&xo).unwrap(), expect);

        let e = TensorElem::from_u(&c, &pbw_normalize(1, &[b(&[1], 0)], r).unwrap()).unwrap();
        let de = TensorElem::term(&RingElem::one(&c), MultiIndex::from([1]), PBWMonomial(vec![b(&[1], 0)]), r).unwrap();
        assert_eq!(e.try_mul(&d).unwrap(), de);
        assert_eq!(d.try_mul(&e).unwrap(), de);
        assert_eq!(TensorElem::one(&c, r).try_mul(&de).unwrap(), de);
        assert_eq!(de.to_string(), "(1)*D(x)*[X*D(X)]");
    }

    #[test]
    fn av_map_examples() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let one = RingElem::one(&c);
        let d = VectorField::coordinate(&c, 0, one.clone()).unwrap();
        let xd = VectorField::coordinate(&c, 0, x.clone()).unwrap();
        let img = av_to_tensor(&c, &AVWord::new(vec![AVFactor::Vf(d.clone())]), 3).unwrap();
        assert_eq!(img, TensorElem::from_dop(&DiffOp::partial(&c, 0).unwrap(), 3));

        let img = av_to_tensor(&c, &AVWord::new(vec![AVFactor::Vf(xd)]), 2).unwrap();
        let expect = TensorElem::from_dop(&DiffOp::monomial(&x, MultiIndex::from([1])).unwrap(), 2)
            .try_add(&TensorElem::term(&one, MultiIndex::from([0]), PBWMonomial(vec![b(&[1], 0)]), 2).unwrap())
            .unwrap();
        assert_eq!(img, expect);

        let lhs = av_to_tensor(&c, &AVWord::new(vec![AVFactor::Vf(d.clone()), AVFactor::Fun(x.clone())]), 2).unwrap();
        let rhs = av_to_tensor(&c, &AVWord::new(vec![AVFactor::Fun(x.clone()), AVFactor::Vf(d.clone())]), 2).unwrap();
        assert_eq!(lhs.try_sub(&rhs).unwrap(), TensorElem::one(&c, 2));
    }

    #[test]
    fn av_map_respects_vector_field_brackets() {
        let c = fixtures::c3();
        let x = RingElem::var(&c, 0).unwrap();
        let y = RingElem::var(&c, 1).unwrap();
        let eta = VectorField::coordinate(&c, 0, &x * &y).unwrap();
        let mu = VectorField::coordinate(&c, 0, y.pow(2)).unwrap();
        for r in 1..=3 {
            let a = av_factor_image(&AVFactor::Vf(eta.clone()), r).unwrap();
            let m = av_factor_image(&AVFactor::Vf(mu.clone()), r).unwrap();
            let br = av_factor_image(&AVFactor::Vf(eta.bracket(&mu).unwrap()), r).unwrap();
            assert_eq!(a.commutator(&m).unwrap(), br, "r = {r}");
        }
    }
}
