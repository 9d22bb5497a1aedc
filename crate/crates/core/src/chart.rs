//! Coordinate rings of étale charts.
//!
//! A chart ring is `Q[x_1..x_N][y_1..y_M] / (y_j^{d_j} - q_j)` localized at
//! the powers of one element `g`. Three flavours are covered by the same
//! type: polynomial rings (`M = 0`, `g = 1`), single-element localizations
//! (`M = 0`), and monic-triangular algebraic extensions localized at a `g`
//! divisible by every algebraic generator.
//!
//! Elements are `num / g^s` with `num` reduced modulo the relations. Equality
//! is decided by cross-multiplication, which is sound because chart rings
//! are assumed to be domains (irreducibility of the relations is the chart
//! author's responsibility and is not checked).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use crate::arith::{MultiIndex, Poly, Vars};
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

/// An algebraic generator `y^degree = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgGen<S: Field = Rational> {
    pub name: String,
    pub degree: u32,
    /// Right-hand side over the chart's full variable list.
    pub rhs: Poly<S>,
}

/// Unvalidated chart description.
///
/// All polynomials (`rhs` of every generator and `denominator`) are over the
/// variable list `params ++ generator names`, see [`ChartSpec::variables`].
#[derive(Clone, Debug, PartialEq)]
pub struct ChartSpec<S: Field = Rational> {
    pub name: String,
    pub params: Vec<String>,
    pub alg_gens: Vec<AlgGen<S>>,
    pub denominator: Poly<S>,
}

impl<S: Field> ChartSpec<S> {
    pub fn variables(params: &[String], gens: &[String]) -> Vars {
        params.iter().chain(gens.iter()).cloned().collect::<Vec<_>>().into()
    }

    /// `Q[params]` with no denominator.
    pub fn polynomial(name: &str, params: &[&str]) -> Self {
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let vars = Self::variables(&params, &[]);
        ChartSpec { name: name.into(), params, alg_gens: Vec::new(), denominator: Poly::one(vars) }
    }
}

/// Internal fraction `num / g^s`, chart implied.
#[derive(Clone, Debug)]
struct Frac<S: Field> {
    num: Poly<S>,
    s: u32,
}

/// A validated chart with precomputed derivative tables.
pub struct Chart<S: Field = Rational> {
    spec: ChartSpec<S>,
    vars: Vars,
    /// `d g / d x_i` as fractions.
    denom_partials: Vec<Frac<S>>,
    /// `d y_j / d x_i`, indexed `[j][i]`.
    gen_partials: Vec<Vec<Frac<S>>>,
    denom_is_one: bool,
    denom_powers: RwLock<Vec<Poly<S>>>,
}

impl<S: Field> fmt::Debug for Chart<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart").field("name", &self.spec.name).finish()
    }
}

/// Checks the chart conditions and builds the chart.
pub fn validate_chart<S: Field>(spec: ChartSpec<S>) -> Result<Arc<Chart<S>>> {
    Chart::new(spec)
}

impl<S: Field> Chart<S> {
    pub fn new(spec: ChartSpec<S>) -> Result<Arc<Self>> {
        let gen_names: Vec<String> = spec.alg_gens.iter().map(|g| g.name.clone()).collect();
        let vars = ChartSpec::<S>::variables(&spec.params, &gen_names);
        let n = spec.params.len();
        {
            let mut seen = std::collections::BTreeSet::new();
            for v in vars.iter() {
                if !seen.insert(v.clone()) {
                    return Err(Error::InvalidChart(format!("duplicate variable `{v}`")));
                }
            }
        }
        if spec.denominator.vars() != &vars {
            return Err(Error::InvalidChart("denominator is over the wrong variables".into()));
        }
        for (j, gen) in spec.alg_gens.iter().enumerate() {
            if gen.rhs.vars() != &vars {
                return Err(Error::InvalidChart(format!("relation for `{}` is over the wrong variables", gen.name)));
            }
            if gen.degree < 2 {
                return Err(Error::NonMonicRelation(gen.name.clone()));
            }
            // q_j may only involve x and y_1..y_{j-1}.
            let later_gen_used = (j..gen_names.len()).any(|l| gen.rhs.degree_in(n + l) > 0);
            if later_gen_used {
                return Err(Error::NonMonicRelation(gen.name.clone()));
            }
        }
        let mut chart = Chart {
            spec,
            vars,
            denom_partials: Vec::new(),
            gen_partials: Vec::new(),
            denom_is_one: false,
            denom_powers: RwLock::new(Vec::new()),
        };
        let g = chart.reduce(chart.spec.denominator.clone());
        if g.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        chart.denom_is_one = g.is_constant() && g.constant_term().is_one();
        chart.spec.denominator = g.clone();
        for (j, gen) in chart.spec.alg_gens.iter().enumerate() {
            let y = Poly::var(chart.vars.clone(), n + j)?;
            if g.div_exact(&y).is_none() {
                return Err(Error::MissingInvertibleGenerator(gen.name.clone()));
            }
        }
        chart.gen_partials = chart.compute_gen_partials()?;
        chart.denom_partials = (0..n).map(|i| chart.derive_poly(&g, i)).collect();
        Ok(Arc::new(chart))
    }

    pub fn spec(&self) -> &ChartSpec<S> {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// Number of uniformizing parameters `N`.
    pub fn n(&self) -> usize {
        self.spec.params.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn params(&self) -> &[String] {
        &self.spec.params
    }

    pub fn denominator(&self) -> &Poly<S> {
        &self.spec.denominator
    }

    pub fn has_denominator(&self) -> bool {
        !self.denom_is_one
    }

    /// Index of a parameter or generator name in the variable list.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn same(&self, other: &Chart<S>) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }

    /// Reduces modulo the relations, innermost generator first.
    fn reduce(&self, p: Poly<S>) -> Poly<S> {
        let n = self.n();
        let mut p = p;
        for (j, gen) in self.spec.alg_gens.iter().enumerate().rev() {
            let idx = n + j;
            let d = gen.degree;
            if p.degree_in(idx) < d {
                continue;
            }
            let mut out = Poly::zero(self.vars.clone());
            let mut rhs_powers: Vec<Poly<S>> = vec![Poly::one(self.vars.clone())];
            for (m, c) in p.terms() {
                let e = m.get(idx);
                let (a, b) = (e / d, e % d);
                let mut rest = m.clone();
                rest.set(idx, b);
                while rhs_powers.len() <= a as usize {
                    let next = rhs_powers.last().unwrap() * &gen.rhs;
                    rhs_powers.push(next);
                }
                out = &out + &rhs_powers[a as usize].mul_monomial(&rest, c);
            }
            p = out;
        }
        p
    }

    fn denom_pow(&self, s: u32) -> Poly<S> {
        if self.denom_is_one || s == 0 {
            return Poly::one(self.vars.clone());
        }
        if let Some(p) = self.denom_powers.read().unwrap().get(s as usize - 1) {
            return p.clone();
        }
        let mut cache = self.denom_powers.write().unwrap();
        while cache.len() < s as usize {
            let next = match cache.last() {
                Some(p) => self.reduce(p * &self.spec.denominator),
                None => self.spec.denominator.clone(),
            };
            cache.push(next);
        }
        cache[s as usize - 1].clone()
    }

    /// Cancels factors of `g` from the numerator where they divide exactly.
    fn normalize(&self, f: Frac<S>) -> Frac<S> {
        if self.denom_is_one {
            return Frac { num: f.num, s: 0 };
        }
        let mut f = f;
        if f.num.is_zero() {
            f.s = 0;
            return f;
        }
        while f.s > 0 {
            match f.num.div_exact(&self.spec.denominator) {
                Some(q) => {
                    f.num = self.reduce(q);
                    f.s -= 1;
                }
                None => break,
            }
        }
        f
    }

    fn frac_add(&self, a: &Frac<S>, b: &Frac<S>) -> Frac<S> {
        let s = a.s.max(b.s);
        let lhs = if a.s < s { &a.num * &self.denom_pow(s - a.s) } else { a.num.clone() };
        let rhs = if b.s < s { &b.num * &self.denom_pow(s - b.s) } else { b.num.clone() };
        self.normalize(Frac { num: self.reduce(&lhs + &rhs), s })
    }

    fn frac_mul(&self, a: &Frac<S>, b: &Frac<S>) -> Frac<S> {
        if a.num.is_zero() || b.num.is_zero() {
            return Frac { num: Poly::zero(self.vars.clone()), s: 0 };
        }
        self.normalize(Frac { num: self.reduce(&a.num * &b.num), s: a.s + b.s })
    }

    fn frac_poly(&self, p: Poly<S>) -> Frac<S> {
        Frac { num: p, s: 0 }
    }

    /// `d/dx_i` of a (reduced) polynomial in `x, y`, as a fraction.
    fn derive_poly(&self, p: &Poly<S>, i: usize) -> Frac<S> {
        let n = self.n();
        let mut acc = self.frac_poly(self.reduce(p.partial(i).expect("parameter index")));
        for (j, row) in self.gen_partials.iter().enumerate() {
            if p.degree_in(n + j) == 0 {
                continue;
            }
            let dp = self.frac_poly(self.reduce(p.partial(n + j).expect("generator index")));
            acc = self.frac_add(&acc, &self.frac_mul(&dp, &row[i]));
        }
        acc
    }

    /// Implicit differentiation of `y_j^{d_j} = q_j`:
    /// `dy_j/dx_i = (dq_j/dx_i + sum_{l<j} dq_j/dy_l * dy_l/dx_i) / (d_j y_j^{d_j - 1})`,
    /// where `1/y_j = (g/y_j)/g` because `y_j | g`.
    fn compute_gen_partials(&self) -> Result<Vec<Vec<Frac<S>>>> {
        let n = self.n();
        let g = &self.spec.denominator;
        let mut table: Vec<Vec<Frac<S>>> = Vec::new();
        for (j, gen) in self.spec.alg_gens.iter().enumerate() {
            let y = Poly::var(self.vars.clone(), n + j)?;
            let g_over_y = g.div_exact(&y).ok_or_else(|| Error::MissingInvertibleGenerator(gen.name.clone()))?;
            let inv_factor = Frac {
                num: self.reduce(g_over_y.pow(gen.degree - 1).scale(&(S::one() / S::int(gen.degree as i64)))),
                s: gen.degree - 1,
            };
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                let mut num = self.frac_poly(self.reduce(gen.rhs.partial(i)?));
                for (l, prev) in table.iter().enumerate() {
                    let dq = gen.rhs.partial(n + l)?;
                    if dq.is_zero() {
                        continue;
                    }
                    num = self.frac_add(&num, &self.frac_mul(&self.frac_poly(self.reduce(dq)), &prev[i]));
                }
                row.push(self.frac_mul(&num, &inv_factor));
            }
            table.push(row);
        }
        Ok(table)
    }
}

/// Element `num / g^s` of a chart ring.
#[derive(Clone)]
pub struct RingElem<S: Field = Rational> {
    chart: Arc<Chart<S>>,
    num: Poly<S>,
    s: u32,
}

impl<S: Field> RingElem<S> {
    fn from_frac(chart: &Arc<Chart<S>>, f: Frac<S>) -> Self {
        RingElem { chart: chart.clone(), num: f.num, s: f.s }
    }

    fn frac(&self) -> Frac<S> {
        Frac { num: self.num.clone(), s: self.s }
    }

    pub fn zero(chart: &Arc<Chart<S>>) -> Self {
        RingElem { chart: chart.clone(), num: Poly::zero(chart.vars.clone()), s: 0 }
    }

    pub fn one(chart: &Arc<Chart<S>>) -> Self {
        Self::constant(chart, S::one())
    }

    pub fn constant(chart: &Arc<Chart<S>>, c: S) -> Self {
        RingElem { chart: chart.clone(), num: Poly::constant(chart.vars.clone(), c), s: 0 }
    }

    /// The variable with index `i` (parameters first, then generators).
    pub fn var(chart: &Arc<Chart<S>>, i: usize) -> Result<Self> {
        Ok(Self::from_poly(chart, Poly::var(chart.vars.clone(), i)?))
    }

    /// `num / g^s`, reducing `num` modulo the relations.
    pub fn from_parts(chart: &Arc<Chart<S>>, num: Poly<S>, s: u32) -> Result<Self> {
        if num.vars() != chart.vars() {
            return Err(Error::VariableMismatch);
        }
        let f = chart.normalize(Frac { num: chart.reduce(num), s });
        Ok(Self::from_frac(chart, f))
    }

    pub fn from_poly(chart: &Arc<Chart<S>>, num: Poly<S>) -> Self {
        Self::from_parts(chart, num, 0).expect("polynomial over chart variables")
    }

    /// `1 / g^s`.
    pub fn denominator_power_inverse(chart: &Arc<Chart<S>>, s: u32) -> Self {
        Self::from_frac(chart, chart.normalize(Frac { num: Poly::one(chart.vars.clone()), s }))
    }

    pub fn chart(&self) -> &Arc<Chart<S>> {
        &self.chart
    }

    pub fn numerator(&self) -> &Poly<S> {
        &self.num
    }

    pub fn denom_power(&self) -> u32 {
        self.s
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the element is a field constant.
    pub fn as_constant(&self) -> Option<S> {
        if self.num.is_constant() && self.s == 0 {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.chart.same(&other.chart) {
            Ok(())
        } else {
            Err(Error::ChartMismatch(self.chart.name().into(), other.chart.name().into()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_frac(&self.chart, self.chart.frac_add(&self.frac(), &other.frac())))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_frac(&self.chart, self.chart.frac_mul(&self.frac(), &other.frac())))
    }

    /// Semantic equality: `num(a) g^{s(b)} - num(b) g^{s(a)}` reduces to zero.
    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        let s = self.s.max(other.s);
        let lhs = self.chart.reduce(&self.num * &self.chart.denom_pow(s - self.s));
        let rhs = self.chart.reduce(&other.num * &self.chart.denom_pow(s - other.s));
        Ok(lhs == rhs)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        RingElem { chart: self.chart.clone(), num: self.num.scale(c), s: self.s }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.chart);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The unique extension of `d/dx_i` to the chart ring.
    pub fn derive(&self, i: usize) -> Result<Self> {
        let n = self.chart.n();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let chart = &self.chart;
        let dn = chart.derive_poly(&self.num, i);
        if self.s == 0 {
            return Ok(Self::from_frac(chart, dn));
        }
        // d(n/g^s) = dn/g^s - s n dg / g^{s+1}
        let first = Frac { num: dn.num, s: dn.s + self.s };
        let corr = chart.frac_mul(
            &Frac { num: self.num.scale(&-S::int(self.s as i64)), s: self.s + 1 },
            &chart.denom_partials[i],
        );
        Ok(Self::from_frac(chart, chart.frac_add(&chart.normalize(first), &corr)))
    }

    /// `d^m / dx^m`.
    pub fn derive_multi(&self, m: &MultiIndex) -> Result<Self> {
        if m.len() != self.chart.n() {
            return Err(Error::DimensionMismatch { expected: self.chart.n(), found: m.len() });
        }
        let mut acc = self.clone();
        for (i, e) in m.iter().enumerate() {
            for _ in 0..e {
                acc = acc.derive(i)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse, when the numerator divides a power of `g`.
    ///
    /// Only divisors of `g^j` (taken as reduced polynomials) are detected, which
    /// covers every unit of a polynomial chart and the usual units of the
    /// algebraic ones.
    pub fn inverse(&self) -> Result<Self> {
        let chart = &self.chart;
        let not_inv = || Error::NotInvertible(chart.name().into());
        if self.num.is_zero() {
            return Err(not_inv());
        }
        if self.num.is_constant() {
            let c = S::one() / self.num.constant_term();
            return Ok(Self::from_frac(
                chart,
                chart.normalize(Frac { num: chart.reduce(chart.denom_pow(self.s).scale(&c)), s: 0 }),
            ));
        }
        if chart.denom_is_one {
            return Err(not_inv());
        }
        let bound = self.num.total_degree() + 2;
        for j in 1..=bound {
            let gj = chart.denom_pow(j);
            if let Some(q) = gj.div_exact(&self.num) {
                // 1/num = q / g^j, so 1/(num/g^s) = q g^s / g^j.
                let num = chart.reduce(&q * &chart.denom_pow(self.s));
                return Ok(Self::from_frac(chart, chart.normalize(Frac { num, s: j })));
            }
        }
        Err(not_inv())
    }
}

impl<S: Field> PartialEq for RingElem<S> {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

impl<S: Field> fmt::Display for RingElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s == 0 {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() == 1 && self.num.is_constant() {
            format!("{}", self.num)
        } else {
            format!("({})", self.num)
        };
        let g = self.chart.denominator();
        let single_var = g.len() == 1
            && g.leading().map(|(m, c)| m.degree() == 1 && c.is_one()).unwrap_or(false);
        let den = if single_var { format!("{g}") } else { format!("({g})") };
        if self.s == 1 {
            write!(f, "{num}/{den}")
        } else {
            write!(f, "{num}/{den}^{}", self.s)
        }
    }
}

impl<S: Field> fmt::Debug for RingElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem[{}]({self})", self.chart.name())
    }
}

impl<'a, S: Field> Add<&'a RingElem<S>> for &'a RingElem<S> {
    type Output = RingElem<S>;
    fn add(self, rhs: &'a RingElem<S>) -> RingElem<S> {
        self.try_add(rhs).expect("chart mismatch")
    }
}

impl<'a, S: Field> Sub<&'a RingElem<S>> for &'a RingElem<S> {
    type Output = RingElem<S>;
    fn sub(self, rhs: &'a RingElem<S>) -> RingElem<S> {
        self.try_sub(rhs).expect("chart mismatch")
    }
}

impl<'a, S: Field> Mul<&'a RingElem<S>> for &'a RingElem<S> {
    type Output = RingElem<S>;
    fn mul(self, rhs: &'a RingElem<S>) -> RingElem<S> {
        self.try_mul(rhs).expect("chart mismatch")
    }
}

impl<S: Field> Neg for &RingElem<S> {
    type Output = RingElem<S>;
    fn neg(self) -> RingElem<S> {
        self.scale(&-S::one())
    }
}

/// Homomorphism of chart rings given by the images of all variables.
///
/// The image of `1/g` is the inverse of the image of `g`; it is either
/// supplied or found with [`RingElem::inverse`].
#[derive(Clone, Debug)]
pub struct RingHom<S: Field = Rational> {
    source: Arc<Chart<S>>,
    target: Arc<Chart<S>>,
    images: Vec<RingElem<S>>,
    denom_inverse: RingElem<S>,
}

impl<S: Field> RingHom<S> {
    pub fn new(
        source: &Arc<Chart<S>>,
        target: &Arc<Chart<S>>,
        images: Vec<RingElem<S>>,
        denom_inverse: Option<RingElem<S>>,
    ) -> Result<Self> {
        if images.len() != source.vars().len() {
            return Err(Error::DimensionMismatch { expected: source.vars().len(), found: images.len() });
        }
        for im in &images {
            if !im.chart.same(target) {
                return Err(Error::ChartMismatch(im.chart.name().into(), target.name().into()));
            }
        }
        let mut hom = RingHom {
            source: source.clone(),
            target: target.clone(),
            denom_inverse: RingElem::one(target),
            images,
        };
        let g_image = hom.eval_poly(source.denominator());
        let inv = match denom_inverse {
            Some(inv) => inv,
            None => g_image.inverse().map_err(|_| {
                Error::InvalidHomomorphism(format!(
                    "image of the denominator of `{}` is not invertible on `{}`",
                    source.name(),
                    target.name()
                ))
            })?,
        };
        if !(&g_image * &inv).try_eq(&RingElem::one(target))? {
            return Err(Error::InvalidHomomorphism("supplied denominator inverse is wrong".into()));
        }
        hom.denom_inverse = inv;
        let n = source.n();
        for (j, gen) in source.spec().alg_gens.iter().enumerate() {
            let lhs = hom.images[n + j].pow(gen.degree);
            let rhs = hom.eval_poly(&gen.rhs);
            if !lhs.try_eq(&rhs)? {
                return Err(Error::InvalidHomomorphism(format!("relation for `{}` is not preserved", gen.name)));
            }
        }
        Ok(hom)
    }

    /// Inclusion between two charts with the same variables and relations,
    /// where the source denominator becomes invertible on the target.
    pub fn restriction(source: &Arc<Chart<S>>, target: &Arc<Chart<S>>) -> Result<Self> {
        if source.vars() != target.vars() {
            return Err(Error::InvalidHomomorphism(format!(
                "`{}` and `{}` have different variables",
                source.name(),
                target.name()
            )));
        }
        let images = (0..target.vars().len()).map(|i| RingElem::var(target, i)).collect::<Result<Vec<_>>>()?;
        Self::new(source, target, images, None)
    }

    pub fn source(&self) -> &Arc<Chart<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart<S>> {
        &self.target
    }

    pub fn images(&self) -> &[RingElem<S>] {
        &self.images
    }

    fn eval_poly(&self, p: &Poly<S>) -> RingElem<S> {
        let target = &self.target;
        p.eval_with(
            &self.images,
            RingElem::zero(target),
            |c| RingElem::constant(target, c.clone()),
            |a, b| a * b,
            |a, b| a + b,
        )
    }

    pub fn apply(&self, e: &RingElem<S>) -> Result<RingElem<S>> {
        if !e.chart.same(&self.source) {
            return Err(Error::ChartMismatch(e.chart.name().into(), self.source.name().into()));
        }
        let num = self.eval_poly(&e.num);
        Ok(&num * &self.denom_inverse.pow(e.s))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &RingHom<S>) -> Result<RingHom<S>> {
        let images = self.images.iter().map(|im| next.apply(im)).collect::<Result<Vec<_>>>()?;
        let inv = next.apply(&self.denom_inverse)?;
        RingHom::new(&self.source, &next.target, images, Some(inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::vars;
    use crate::scalar::rat;

    fn localized_line() -> Arc<Chart> {
        let v = vars(["x"]);
        let spec = ChartSpec {
            name: "Qx_x".into(),
            params: vec!["x".into()],
            alg_gens: vec![],
            denominator: Poly::var(v, 0).unwrap(),
        };
        validate_chart(spec).unwrap()
    }

    fn elliptic() -> Arc<Chart> {
        let v = vars(["x", "y"]);
        let x = Poly::var(v.clone(), 0).unwrap();
        let y = Poly::var(v.clone(), 1).unwrap();
        let rhs = &(&x.pow(3) - &x) + &Poly::one(v.clone());
        let spec = ChartSpec {
            name: "elliptic".into(),
            params: vec!["x".into()],
            alg_gens: vec![AlgGen { name: "y".into(), degree: 2, rhs }],
            denominator: y,
        };
        validate_chart(spec).unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(validate_chart(ChartSpec::<Rational>::polynomial("line", &["x"])).is_ok());
        let v = vars(["x", "y"]);
        let x = Poly::<Rational>::var(v.clone(), 0).unwrap();
        let cusp = ChartSpec {
            name: "cusp".into(),
            params: vec!["x".into()],
            alg_gens: vec![AlgGen { name: "y".into(), degree: 2, rhs: x.pow(3) }],
            denominator: Poly::one(v.clone()),
        };
        assert_eq!(validate_chart(cusp).unwrap_err(), Error::MissingInvertibleGenerator("y".into()));
        let zero = ChartSpec::<Rational> {
            name: "z".into(),
            params: vec!["x".into()],
            alg_gens: vec![],
            denominator: Poly::zero(vars(["x"])),
        };
        assert_eq!(validate_chart(zero).unwrap_err(), Error::ZeroDenominator);
        let y = Poly::var(v.clone(), 1).unwrap();
        let selfref = ChartSpec {
            name: "s".into(),
            params: vec!["x".into()],
            alg_gens: vec![AlgGen { name: "y".into(), degree: 2, rhs: &x + &y }],
            denominator: y,
        };
        assert_eq!(validate_chart(selfref).unwrap_err(), Error::NonMonicRelation("y".into()));
    }

    #[test]
    fn relation_reduction_and_equality() {
        let c = elliptic();
        let y = RingElem::var(&c, 1).unwrap();
        let x = RingElem::var(&c, 0).unwrap();
        let rhs = &(&x.pow(3) - &x) + &RingElem::one(&c);
        assert_eq!(&y * &y, rhs);
        assert_eq!((&y * &y).numerator(), rhs.numerator());
        assert_ne!(x, &x + &RingElem::one(&c));
        let a = &x * &RingElem::zero(&c);
        assert!(a.is_zero());
    }

    #[test]
    fn localized_arithmetic() {
        let c = localized_line();
        let x = RingElem::var(&c, 0).unwrap();
        let inv = x.inverse().unwrap();
        assert_eq!(&inv * &x, RingElem::one(&c));
        assert_eq!(inv.to_string(), "1/x");
        assert_eq!(inv.derive(0).unwrap(), -&inv.pow(2));
        assert_eq!(inv.derive(0).unwrap().derive(0).unwrap(), inv.pow(3).scale(&rat(2, 1)));
        let bad = &x + &RingElem::one(&c);
        assert!(bad.inverse().is_err());
    }

    #[test]
    fn implicit_differentiation() {
        // Oracle: 2 y y' = 3x^2 - 1, hence y' * 2y == 3x^2 - 1.
        let c = elliptic();
        let x = RingElem::var(&c, 0).unwrap();
        let y = RingElem::var(&c, 1).unwrap();
        let dy = y.derive(0).unwrap();
        let lhs = &(&dy * &y).scale(&rat(2, 1)) + &RingElem::zero(&c);
        let rhs = &x.pow(2).scale(&rat(3, 1)) - &RingElem::one(&c);
        assert_eq!(lhs, rhs);
        // derivative of the relation vanishes
        let rel = &(&y * &y) - &(&(&x.pow(3) - &x) + &RingElem::one(&c));
        assert!(rel.derive(0).unwrap().is_zero());
        assert_eq!(y.inverse().unwrap().to_string(), "1/y");
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let a = RingElem::one(&localized_line());
        let b = RingElem::one(&elliptic());
        assert!(matches!(a.try_add(&b), Err(Error::ChartMismatch(..))));
    }

    #[test]
    fn restriction_hom() {
        let v = vars(["x"]);
        let x = Poly::var(v.clone(), 0).unwrap();
        let g = &x * &(&x - &Poly::one(v.clone()));
        let big = validate_chart(ChartSpec {
            name: "triple".into(),
            params: vec!["x".into()],
            alg_gens: vec![],
            denominator: g,
        })
        .unwrap();
        let small = localized_line();
        let hom = RingHom::restriction(&small, &big).unwrap();
        let inv_x = RingElem::var(&small, 0).unwrap().inverse().unwrap();
        let image = hom.apply(&inv_x).unwrap();
        assert_eq!(&image * &RingElem::var(&big, 0).unwrap(), RingElem::one(&big));
        assert!(RingHom::restriction(&big, &small).is_err());
    }
}
