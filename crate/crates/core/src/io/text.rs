//! Reading values from text.
//!
//! Ring elements are parsed directly. Structured values (jets, jet fields,
//! `A⊗L` elements, operators, tensors) are parsed on the chart extended by
//! extra free parameters standing for the structural symbols (`t`, `X`,
//! `D(x)`, `[X^m*D(X)]`, ...), and the result is split by the exponents of
//! those symbols. The printed forms of all these types are accepted back.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;

use super::error::{IoError, IoResult};
use super::expr::{parse, Expr, ExprOps};
use crate::arith::{MultiIndex, Poly, Vars};
use crate::chart::{validate_chart, AlgGen, Chart, ChartSpec, RingElem};
use crate::envalg::{AVFactor, AVWord, DiffOp, PBWMonomial, TensorElem};
use crate::jet::Jet;
use crate::jet_field::JetField;
use crate::lplus::{l_var_names, CurrentElem, LBasis, SemiDirectElem};
use crate::scalar::Rational;
use crate::vfield::VectorField;

struct RingOps<'a> {
    chart: &'a Arc<Chart>,
}

impl ExprOps<RingElem> for RingOps<'_> {
    fn num(&mut self, n: &BigInt) -> IoResult<RingElem> {
        Ok(RingElem::constant(self.chart, Rational::from_integer(n.clone())))
    }

    fn sym(&mut self, name: &str, _pos: usize) -> IoResult<RingElem> {
        let i = self.chart.var_index(name).ok_or_else(|| IoError::UnknownSymbol(name.into()))?;
        Ok(RingElem::var(self.chart, i)?)
    }

    fn neg(&mut self, a: RingElem) -> RingElem {
        -&a
    }

    fn add(&mut self, a: RingElem, b: RingElem) -> IoResult<RingElem> {
        Ok(a.try_add(&b)?)
    }

    fn sub(&mut self, a: RingElem, b: RingElem) -> IoResult<RingElem> {
        Ok(a.try_sub(&b)?)
    }

    fn mul(&mut self, a: RingElem, b: RingElem) -> IoResult<RingElem> {
        Ok(a.try_mul(&b)?)
    }

    fn pow(&mut self, a: RingElem, e: u32) -> IoResult<RingElem> {
        Ok(a.pow(e))
    }

    fn inv(&mut self, a: RingElem, src: &str, _pos: usize) -> IoResult<RingElem> {
        a.inverse().map_err(|_| IoError::IllegalDenominator(src.into()))
    }
}

struct PolyOps<'a> {
    vars: &'a Vars,
}

impl ExprOps<Poly> for PolyOps<'_> {
    fn num(&mut self, n: &BigInt) -> IoResult<Poly> {
        Ok(Poly::constant(self.vars.clone(), Rational::from_integer(n.clone())))
    }

    fn sym(&mut self, name: &str, _pos: usize) -> IoResult<Poly> {
        let i = self.vars.iter().position(|v| v == name).ok_or_else(|| IoError::UnknownSymbol(name.into()))?;
        Ok(Poly::var(self.vars.clone(), i)?)
    }

    fn neg(&mut self, a: Poly) -> Poly {
        -&a
    }

    fn add(&mut self, a: Poly, b: Poly) -> IoResult<Poly> {
        Ok(a.try_add(&b)?)
    }

    fn sub(&mut self, a: Poly, b: Poly) -> IoResult<Poly> {
        Ok(a.try_sub(&b)?)
    }

    fn mul(&mut self, a: Poly, b: Poly) -> IoResult<Poly> {
        Ok(a.try_mul(&b)?)
    }

    fn pow(&mut self, a: Poly, e: u32) -> IoResult<Poly> {
        Ok(a.pow(e))
    }

    fn inv(&mut self, a: Poly, src: &str, _pos: usize) -> IoResult<Poly> {
        match (a.is_constant(), a.is_zero()) {
            (true, false) => {
                let c = a.constant_term();
                Ok(Poly::constant(self.vars.clone(), num_traits::Inv::inv(c)))
            }
            _ => Err(IoError::IllegalDenominator(src.into())),
        }
    }
}

/// A polynomial in the given variables; only nonzero constants may divide.
pub fn parse_poly(src: &str, vars: &Vars) -> IoResult<Poly> {
    parse(src)?.eval(&mut PolyOps { vars })
}

/// An element of the chart ring; division is allowed by anything that is
/// invertible there (a divisor of a power of the chart denominator).
pub fn parse_ring_elem(src: &str, chart: &Arc<Chart>) -> IoResult<RingElem> {
    parse(src)?.eval(&mut RingOps { chart })
}

/// The chart with `extras` inserted as additional free parameters.
fn extended(base: &Arc<Chart>, extras: &[String]) -> IoResult<Arc<Chart>> {
    let spec = base.spec();
    let n = spec.params.len();
    for e in extras {
        if base.var_index(e).is_some() {
            return Err(IoError::malformed("input", format!("symbol `{e}` clashes with a chart variable")));
        }
    }
    let mut params = spec.params.clone();
    params.extend(extras.iter().cloned());
    let gens: Vec<String> = spec.alg_gens.iter().map(|g| g.name.clone()).collect();
    let vars = ChartSpec::<Rational>::variables(&params, &gens);
    let map: Vec<usize> = (0..base.vars().len()).map(|i| if i < n { i } else { i + extras.len() }).collect();
    let alg_gens = spec
        .alg_gens
        .iter()
        .map(|g| AlgGen { name: g.name.clone(), degree: g.degree, rhs: g.rhs.rename(vars.clone(), &map) })
        .collect();
    let ext = ChartSpec {
        name: format!("{}+", spec.name),
        params,
        alg_gens,
        denominator: spec.denominator.rename(vars.clone(), &map),
    };
    Ok(validate_chart(ext)?)
}

fn rewrite_symbols(e: &Expr, f: &dyn Fn(&str) -> IoResult<String>) -> IoResult<Expr> {
    let b = |x: &Expr| rewrite_symbols(x, f).map(Box::new);
    Ok(match e {
        Expr::Num(n) => Expr::Num(n.clone()),
        Expr::Sym { name, pos } => Expr::Sym { name: f(name)?, pos: *pos },
        Expr::Neg(a) => Expr::Neg(b(a)?),
        Expr::Add(x, y) => Expr::Add(b(x)?, b(y)?),
        Expr::Sub(x, y) => Expr::Sub(b(x)?, b(y)?),
        Expr::Mul(x, y) => Expr::Mul(b(x)?, b(y)?),
        Expr::Div { lhs, rhs, pos } => Expr::Div { lhs: b(lhs)?, rhs: b(rhs)?, pos: *pos },
        Expr::Pow(a, k) => Expr::Pow(b(a)?, *k),
        Expr::Inv { arg, pos } => Expr::Inv { arg: b(arg)?, pos: *pos },
    })
}

/// Evaluates `expr` on `base` extended by `extras` and returns the
/// coefficients of each monomial in the extra symbols.
fn split_expr(expr: &Expr, base: &Arc<Chart>, extras: &[String]) -> IoResult<BTreeMap<MultiIndex, RingElem>> {
    let mut out = BTreeMap::new();
    if extras.is_empty() {
        let v = expr.eval(&mut RingOps { chart: base })?;
        out.insert(MultiIndex::zeros(0), v);
        return Ok(out);
    }
    let ext = extended(base, extras)?;
    let v = expr.eval(&mut RingOps { chart: &ext })?;
    let n = base.n();
    let e = extras.len();
    let mut groups: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
    for (m, c) in v.numerator().terms() {
        let extra = MultiIndex::from_slice(&m.as_slice()[n..n + e]);
        let rest: Vec<u32> = m.as_slice()[..n].iter().chain(&m.as_slice()[n + e..]).copied().collect();
        groups
            .entry(extra)
            .or_insert_with(|| Poly::zero(base.vars().clone()))
            .add_term(MultiIndex::from_slice(&rest), c.clone());
    }
    for (k, p) in groups {
        out.insert(k, RingElem::from_parts(base, p, v.denom_power())?);
    }
    Ok(out)
}

fn split(src: &str, base: &Arc<Chart>, extras: &[String]) -> IoResult<BTreeMap<MultiIndex, RingElem>> {
    split_expr(&parse(src)?, base, extras)
}

fn t_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["t".into()]
    } else {
        (1..=n).map(|i| format!("t{i}")).collect()
    }
}

fn d_names(params: &[String]) -> Vec<String> {
    params.iter().map(|p| format!("D({p})")).collect()
}

/// Index of the single unit entry of `m[range]`, or `None` if that slice is zero.
fn unit_position(m: &MultiIndex, lo: usize, hi: usize, what: &'static str) -> IoResult<Option<usize>> {
    let slice = &m.as_slice()[lo..hi];
    match slice.iter().sum::<u32>() {
        0 => Ok(None),
        1 => Ok(Some(slice.iter().position(|&e| e == 1).unwrap())),
        _ => Err(IoError::malformed(what, "each term must contain exactly one derivation symbol")),
    }
}

pub fn parse_vector_field(src: &str, chart: &Arc<Chart>) -> IoResult<VectorField> {
    let n = chart.n();
    let mut coeffs = vec![RingElem::zero(chart); n];
    for (m, c) in split(src, chart, &d_names(chart.params()))? {
        let i = unit_position(&m, 0, n, "vector field")?
            .ok_or_else(|| IoError::malformed("vector field", "term without a derivation symbol"))?;
        coeffs[i] = &coeffs[i] + &c;
    }
    Ok(VectorField::new(chart, coeffs)?)
}

pub fn parse_jet(src: &str, chart: &Arc<Chart>, order: u32) -> IoResult<Jet> {
    let terms = split(src, chart, &t_names(chart.n()))?;
    jet_from_terms(chart, order, terms)
}

fn jet_from_terms(chart: &Arc<Chart>, order: u32, terms: BTreeMap<MultiIndex, RingElem>) -> IoResult<Jet> {
    if let Some(m) = terms.keys().find(|m| m.degree() > order) {
        return Err(IoError::malformed("jet", format!("term of degree {} exceeds order {order}", m.degree())));
    }
    Ok(Jet::from_coeffs(chart, order, terms)?)
}

pub fn parse_jet_field(src: &str, chart: &Arc<Chart>, order: u32) -> IoResult<JetField> {
    let n = chart.n();
    let mut extras = t_names(n);
    extras.extend(d_names(chart.params()));
    let mut comps: Vec<BTreeMap<MultiIndex, RingElem>> = vec![BTreeMap::new(); n];
    for (m, c) in split(src, chart, &extras)? {
        let i = unit_position(&m, n, 2 * n, "jet field")?
            .ok_or_else(|| IoError::malformed("jet field", "term without a derivation symbol"))?;
        comps[i].insert(MultiIndex::from_slice(&m.as_slice()[..n]), c);
    }
    let jets = comps.into_iter().map(|t| jet_from_terms(chart, order, t)).collect::<IoResult<Vec<_>>>()?;
    Ok(JetField::new(chart, order, jets)?)
}

fn x_and_dx(n: usize) -> Vec<String> {
    let xs = l_var_names(n);
    let mut out = xs.clone();
    out.extend(xs.iter().map(|x| format!("D({x})")));
    out
}

/// L-basis terms, and the remaining terms by exponent of the extra symbols.
type SplitTerms = (Vec<(LBasis, RingElem)>, Vec<(MultiIndex, RingElem)>);

fn current_terms(
    terms: BTreeMap<MultiIndex, RingElem>,
    n: usize,
    offset: usize,
) -> IoResult<SplitTerms> {
    let mut l = Vec::new();
    let mut rest = Vec::new();
    for (m, c) in terms {
        let xm = MultiIndex::from_slice(&m.as_slice()[offset..offset + n]);
        match unit_position(&m, offset + n, offset + 2 * n, "element of A⊗L")? {
            Some(dir) => {
                if xm.is_zero() {
                    return Err(IoError::malformed("element of A⊗L", "basis vectors need |m| >= 1"));
                }
                l.push((LBasis { m: xm, dir }, c));
            }
            None => {
                if !xm.is_zero() {
                    return Err(IoError::malformed("element of A⊗L", "monomial in X without a derivation"));
                }
                rest.push((m, c));
            }
        }
    }
    Ok((l, rest))
}

pub fn parse_current(src: &str, chart: &Arc<Chart>, max_degree: u32) -> IoResult<CurrentElem> {
    let n = chart.n();
    let (l, rest) = current_terms(split(src, chart, &x_and_dx(n))?, n, 0)?;
    if !rest.is_empty() {
        return Err(IoError::malformed("element of A⊗L", "term without X^m*D(X_i)"));
    }
    Ok(CurrentElem::from_terms(chart, max_degree, l)?)
}

pub fn parse_semidirect(src: &str, chart: &Arc<Chart>, max_degree: u32) -> IoResult<SemiDirectElem> {
    let n = chart.n();
    let mut extras = d_names(chart.params());
    extras.extend(x_and_dx(n));
    let (l, rest) = current_terms(split(src, chart, &extras)?, n, n)?;
    let mut v = vec![RingElem::zero(chart); n];
    for (m, c) in rest {
        let i = unit_position(&m, 0, n, "semidirect element")?
            .ok_or_else(|| IoError::malformed("semidirect element", "constant term"))?;
        v[i] = &v[i] + &c;
    }
    let l = CurrentElem::from_terms(chart, max_degree, l)?;
    Ok(SemiDirectElem::new(VectorField::new(chart, v)?, l)?)
}

pub fn parse_diffop(src: &str, chart: &Arc<Chart>) -> IoResult<DiffOp> {
    Ok(DiffOp::from_terms(chart, split(src, chart, &d_names(chart.params()))?)?)
}

/// `X1^2*X2*D(X1)`, with or without surrounding brackets.
pub fn parse_lbasis(src: &str, n: usize) -> IoResult<LBasis> {
    let inner = src.trim().trim_start_matches('[').trim_end_matches(']');
    let names = l_var_names(n);
    let mut m = MultiIndex::zeros(n);
    let mut dir = None;
    fn factors<'a>(e: &'a Expr, out: &mut Vec<(&'a Expr, u32)>) {
        match e {
            Expr::Mul(a, b) => {
                factors(a, out);
                factors(b, out);
            }
            Expr::Pow(a, k) => out.push((a, *k)),
            other => out.push((other, 1)),
        }
    }
    let expr = parse(inner)?;
    let mut fs = Vec::new();
    factors(&expr, &mut fs);
    for (f, k) in fs {
        let Expr::Sym { name, .. } = f else {
            return Err(IoError::malformed("L basis vector", format!("unexpected factor in `{inner}`")));
        };
        if let Some(i) = names.iter().position(|x| x == name) {
            m.set(i, m.get(i) + k);
        } else if let Some(i) = names.iter().position(|x| format!("D({x})") == *name) {
            if dir.is_some() || k != 1 {
                return Err(IoError::malformed("L basis vector", "exactly one derivation expected"));
            }
            dir = Some(i);
        } else {
            return Err(IoError::UnknownSymbol(name.clone()));
        }
    }
    let dir = dir.ok_or_else(|| IoError::malformed("L basis vector", "missing derivation"))?;
    Ok(LBasis::new(m, dir)?)
}

pub fn parse_tensor(src: &str, chart: &Arc<Chart>, r: u32) -> IoResult<TensorElem> {
    let n = chart.n();
    let expr = parse(src)?;
    let mut basis: Vec<LBasis> = Vec::new();
    let mut canon: HashMap<String, String> = HashMap::new();
    for s in expr.symbols() {
        if s.starts_with('[') {
            let b = parse_lbasis(&s, n)?;
            canon.insert(s.clone(), format!("[{b}]"));
            if !basis.contains(&b) {
                basis.push(b);
            }
        }
    }
    basis.sort();
    let expr = rewrite_symbols(&expr, &|s| Ok(canon.get(s).cloned().unwrap_or_else(|| s.to_string())))?;
    let mut extras = d_names(chart.params());
    extras.extend(basis.iter().map(|b| format!("[{b}]")));
    let mut out = TensorElem::zero(chart, r);
    for (m, c) in split_expr(&expr, chart, &extras)? {
        let k = MultiIndex::from_slice(&m.as_slice()[..n]);
        let mut factors = Vec::new();
        for (idx, b) in basis.iter().enumerate() {
            for _ in 0..m.get(n + idx) {
                factors.push(b.clone());
            }
        }
        let u = PBWMonomial::from_sorted(factors).expect("basis is sorted");
        out.add_term(k, u, c)?;
    }
    Ok(out)
}

/// Words such as `vf: (x)*D(x); fun: x^2; vf: (1)*D(x)`.
pub fn parse_av_word(src: &str, chart: &Arc<Chart>) -> IoResult<AVWord> {
    let mut factors = Vec::new();
    for part in src.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (kind, body) = part
            .split_once(':')
            .ok_or_else(|| IoError::malformed("AV word", format!("factor `{part}` lacks `fun:` or `vf:`")))?;
        factors.push(match kind.trim() {
            "fun" => AVFactor::Fun(parse_ring_elem(body, chart)?),
            "vf" => AVFactor::Vf(parse_vector_field(body, chart)?),
            other => return Err(IoError::malformed("AV word", format!("unknown factor kind `{other}`"))),
        });
    }
    Ok(AVWord::new(factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    #[test]
    fn ring_elements() {
        let a1 = fixtures::affine_line();
        let x = RingElem::var(&a1, 0).unwrap();
        assert_eq!(parse_ring_elem("x^2 + 1", &a1).unwrap(), &x.pow(2) + &RingElem::one(&a1));
        assert_eq!(parse_ring_elem("3/6*x", &a1).unwrap(), x.scale(&rat(1, 2)));

        let c3 = fixtures::c3();
        let x = RingElem::var(&c3, 0).unwrap();
        let cubic = &(&x.pow(3) - &x) + &RingElem::one(&c3);
        assert_eq!(parse_ring_elem("y*y", &c3).unwrap(), cubic);
        assert!(parse_ring_elem("1/y + inv(y^2)", &c3).is_ok());

        let c2 = fixtures::c2();
        assert_eq!(parse_ring_elem("1/(x+1)", &c2), Err(IoError::IllegalDenominator("x + 1".into())));
        assert_eq!(parse_ring_elem("z", &c2), Err(IoError::UnknownSymbol("z".into())));
        assert!(matches!(parse_ring_elem("x +", &c2), Err(IoError::Syntax { pos: 3, .. })));
    }

    #[test]
    fn printed_forms_parse_back() {
        let c3 = fixtures::c3();
        let x = RingElem::var(&c3, 0).unwrap();
        let y = RingElem::var(&c3, 1).unwrap();
        let f = &(&x * &y.inverse().unwrap()) + &x.pow(2).scale(&rat(-3, 2));
        assert_eq!(parse_ring_elem(&f.to_string(), &c3).unwrap(), f);

        let v = VectorField::coordinate(&c3, 0, f.clone()).unwrap();
        assert_eq!(parse_vector_field(&v.to_string(), &c3).unwrap(), v);

        let u = JetField::from_pair(&y, &v, 3).unwrap();
        assert_eq!(parse_jet_field(&u.to_string(), &c3, 3).unwrap(), u);
        assert_eq!(parse_jet(&u.components()[0].to_string(), &c3, 3).unwrap(), u.components()[0]);

        let p = crate::lplus::phi(&u).unwrap();
        assert_eq!(parse_current(&p.l_part.to_string(), &c3, 3).unwrap(), p.l_part);
        let sd = p.to_string();
        assert_eq!(parse_semidirect(&sd, &c3, 3).unwrap(), p);
    }

    #[test]
    fn tensors_parse_back() {
        let c1 = fixtures::c1();
        let x1 = RingElem::var(&c1, 0).unwrap();
        let x2 = RingElem::var(&c1, 1).unwrap();
        let eta = VectorField::new(&c1, vec![x1.pow(2), &x1 * &x2]).unwrap();
        let mu = VectorField::coordinate(&c1, 1, x2.pow(3)).unwrap();
        let word = AVWord::new(vec![AVFactor::Vf(eta), AVFactor::Fun(x2.clone()), AVFactor::Vf(mu)]);
        let t = crate::envalg::av_to_tensor(&c1, &word, 3).unwrap();
        assert_eq!(parse_tensor(&t.to_string(), &c1, 3).unwrap(), t);
        let d = DiffOp::monomial(&x1, MultiIndex::from([2, 1])).unwrap();
        assert_eq!(parse_diffop(&d.to_string(), &c1).unwrap(), d);
        // Unsorted input is accepted since the symbols commute in the encoding.
        let a = parse_tensor("[X1^2*D(X2)]*[X1*D(X1)]", &c1, 3).unwrap();
        let b = parse_tensor("[X1*D(X1)]*[X1^2*D(X2)]", &c1, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn words() {
        let c = fixtures::affine_line();
        let w = parse_av_word("vf: (1)*D(x); fun: x", &c).unwrap();
        assert_eq!(w.factors.len(), 2);
        assert!(parse_av_word("x", &c).is_err());
    }
}
