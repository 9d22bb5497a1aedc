use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::arith::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

/// Ordered variable names shared between polynomials.
pub type Vars = Arc<[String]>;

pub fn vars<I, T>(names: I) -> Vars
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    names.into_iter().map(Into::into).collect::<Vec<_>>().into()
}

fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Sparse multivariate polynomial over a field.
///
/// Terms live in a `BTreeMap` keyed by graded-lex exponent vectors, so
/// iteration order (and therefore printing) is canonical. Zero
/// coefficients are never stored.
#[derive(Clone)]
pub struct Poly<S: Field = Rational> {
    vars: Vars,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Field> Poly<S> {
    pub fn zero(vars: Vars) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, S::one())
    }

    pub fn constant(vars: Vars, c: S) -> Self {
        let n = vars.len();
        Self::monomial(vars, MultiIndex::zeros(n), c)
    }

    pub fn monomial(vars: Vars, m: MultiIndex, c: S) -> Self {
        assert_eq!(m.len(), vars.len(), "multi-index length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { vars, terms }
    }

    /// The variable with index `i`.
    pub fn var(vars: Vars, i: usize) -> Result<Self> {
        if i >= vars.len() {
            return Err(Error::IndexOutOfRange { index: i, len: vars.len() });
        }
        let n = vars.len();
        Ok(Self::monomial(vars, MultiIndex::unit(n, i), S::one()))
    }

    /// Builds a polynomial from terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(vars: Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    pub fn constant_term(&self) -> S {
        self.terms.get(&MultiIndex::zeros(self.nvars())).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Leading (graded-lex largest) term.
    pub fn leading(&self) -> Option<(&MultiIndex, &S)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.get(i)).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: MultiIndex, c: S) {
        debug_assert_eq!(m.len(), self.nvars());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.vars.clone());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// Multiplies by the monomial `c * x^m`.
    pub fn mul_monomial(&self, m: &MultiIndex, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.add(m), v.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.vars.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.nvars() {
            return Err(Error::IndexOutOfRange { index: i, len: self.nvars() });
        }
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            if let Some(d) = m.decremented(i) {
                out.add_term(d, c.clone() * S::int(m.get(i) as i64));
            }
        }
        Ok(out)
    }

    /// Division with remainder by a single polynomial in graded-lex order.
    ///
    /// Since `{d}` is a Groebner basis of `(d)`, the remainder vanishes
    /// exactly when `d` divides `self`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        self.check(d)?;
        let (lm, lc) = match d.leading() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut p = self.clone();
        let mut q = Self::zero(self.vars.clone());
        let mut r = Self::zero(self.vars.clone());
        while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match m.checked_sub(&lm) {
                Some(shift) => {
                    let t = c / lc.clone();
                    p = &p - &d.mul_monomial(&shift, &t);
                    q.add_term(shift, t);
                }
                None => {
                    p.terms.remove(&m);
                    r.add_term(m, c);
                }
            }
        }
        Ok((q, r))
    }

    /// Exact quotient `self / d`, if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        match self.div_rem(d) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Evaluates the polynomial in any commutative ring, given the images of
    /// the variables and of the field constants.
    pub fn eval_with<T, FC, FM, FA>(&self, images: &[T], zero: T, constant: FC, mul: FM, add: FA) -> T
    where
        T: Clone,
        FC: Fn(&S) -> T,
        FM: Fn(&T, &T) -> T,
        FA: Fn(&T, &T) -> T,
    {
        assert_eq!(images.len(), self.nvars());
        // Cache powers per variable to avoid recomputing them per term.
        let mut powers: Vec<Vec<T>> = vec![Vec::new(); self.nvars()];
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut term = constant(c);
            for (i, e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() < e as usize {
                    let next = match cache.last() {
                        Some(p) => mul(p, &images[i]),
                        None => images[i].clone(),
                    };
                    cache.push(next);
                }
                term = mul(&term, &cache[e as usize - 1]);
            }
            acc = add(&acc, &term);
        }
        acc
    }

    /// Re-expresses the polynomial over a different variable list,
    /// mapping variable `i` to variable `map[i]` of `target`.
    pub fn rename(&self, target: Vars, map: &[usize]) -> Self {
        let n = target.len();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut k = MultiIndex::zeros(n);
            for (i, e) in m.iter().enumerate() {
                k.set(map[i], k.get(map[i]) + e);
            }
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn map_coeffs<T: Field>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_terms(self.vars.clone(), self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl<S: Field> PartialEq for Poly<S> {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl<'a, S: Field> Add<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &'a Poly<S>) -> Poly<S> {
        self.try_add(rhs).expect("polynomial variable lists differ")
    }
}

impl<'a, S: Field> Sub<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &'a Poly<S>) -> Poly<S> {
        self.try_sub(rhs).expect("polynomial variable lists differ")
    }
}

impl<'a, S: Field> Mul<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &'a Poly<S>) -> Poly<S> {
        self.try_mul(rhs).expect("polynomial variable lists differ")
    }
}

impl<S: Field> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        self.scale(&-S::one())
    }
}

/// Writes a coefficient/monomial product such as `3/2*x^2*y`.
fn fmt_term<S: Field>(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &S,
    m: &MultiIndex,
    names: &[String],
) -> fmt::Result {
    let neg = !c.is_nonnegative();
    let abs = if neg { -c.clone() } else { c.clone() };
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if neg { " - " } else { " + " })?;
    }
    let mut wrote = false;
    if !abs.is_one() || m.is_zero() {
        write!(f, "{abs}")?;
        wrote = true;
    }
    for (i, e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if wrote {
            write!(f, "*")?;
        }
        write!(f, "{}", names[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
        wrote = true;
    }
    Ok(())
}

impl<S: Field> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            fmt_term(f, idx == 0, c, m, &self.vars)?;
        }
        Ok(())
    }
}

impl<S: Field> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn xy() -> (Vars, Poly, Poly) {
        let v = vars(["x", "y"]);
        let x = Poly::var(v.clone(), 0).unwrap();
        let y = Poly::var(v.clone(), 1).unwrap();
        (v, x, y)
    }

    #[test]
    fn ring_arithmetic() {
        let (v, x, y) = xy();
        let one = Poly::one(v.clone());
        assert_eq!(&(&x + &one) * &(&x - &one), &x.pow(2) - &one);
        assert!((&x + &(-&x)).is_zero());
        let s = (&x + &y).pow(2);
        let expect = &(&x.pow(2) + &(&x * &y).scale(&rat(2, 1))) + &y.pow(2);
        assert_eq!(s, expect);
        assert_eq!(s.to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn partials() {
        let (_, x, y) = xy();
        assert_eq!(x.pow(3).partial(0).unwrap(), x.pow(2).scale(&rat(3, 1)));
        assert!(x.partial(1).unwrap().is_zero());
        assert_eq!((&x.pow(2) * &y).partial(0).unwrap(), (&x * &y).scale(&rat(2, 1)));
        assert!(matches!(x.partial(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn mismatched_variables() {
        let (_, x, _) = xy();
        let z = Poly::<Rational>::var(vars(["z"]), 0).unwrap();
        assert!(matches!(x.try_add(&z), Err(Error::VariableMismatch)));
    }

    #[test]
    fn exact_division() {
        let (v, x, y) = xy();
        let one = Poly::one(v);
        let a = &(&x + &y) * &(&x - &one);
        assert_eq!(a.div_exact(&(&x - &one)).unwrap(), &x + &y);
        assert!(a.div_exact(&(&x + &one)).is_none());
    }

    #[test]
    fn generic_over_f64() {
        let v = vars(["x"]);
        let x = Poly::<f64>::var(v, 0).unwrap();
        let p = x.pow(3).scale(&0.5);
        assert_eq!(p.partial(0).unwrap().coeff(&MultiIndex::from([2])), 1.5);
    }

    #[test]
    fn display_signs() {
        let (v, x, y) = xy();
        let p = &(&x.scale(&rat(-3, 2)) + &y) - &Poly::one(v);
        assert_eq!(p.to_string(), "-3/2*x + y - 1");
    }
}
