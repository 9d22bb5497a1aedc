//! The verification suites behind `avjet verify`.
//!
//! A suite is a list of cases. Each case has a stable id, owns a sampler
//! stream derived from the run seed and that id, and evaluates to pass or
//! fail. Cases run in parallel and are collected in declaration order.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::error::{IoError, IoResult};
use super::report::{CheckRecord, Report, Status, Witness};
use super::sample::{Bounds, Sampler};
use super::text::parse_current;
use crate::arith::{MultiIndex, Poly};
use crate::atlas::{
    cocycle_check, filtration_check, jacobian_quotient_check, transition_l, transition_via_iso, AtlasSpec,
    TransitionPair,
};
use crate::chart::{Chart, RingElem};
use crate::envalg::{av_to_tensor, pbw_normalize, AVFactor, AVWord, Straightener, UElem};
use crate::error::Result;
use crate::fixtures;
use crate::jet::{delta, jet_of, taylor_coefficient_recovery, taylor_identity_check, Jet};
use crate::jet_field::{localization_partial_sum, localization_remainder, smash_bracket_decomposable, JetField};
use crate::lplus::{phi, psi, CurrentElem, LBasis, SemiDirectElem};
use crate::vfield::VectorField;

/// Every suite id accepted by [`run_suite`] except `all`.
pub const SUITES: &[&str] = &[
    "derivations",
    "taylor",
    "jet-hom",
    "smash-bracket",
    "iso-roundtrip",
    "iso-hom",
    "localization",
    "pbw",
    "av-tensor",
    "transition",
    "cocycle",
];

/// Inputs of a suite run.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub charts: Vec<Arc<Chart>>,
    pub atlas: AtlasSpec,
    pub bounds: Bounds,
    /// Jet orders `lo..=hi` exercised by order-dependent checks.
    pub orders: (u32, u32),
    /// Replaces every per-group sample count when set.
    pub samples: Option<usize>,
    /// Extra CLI arguments appended to reproduce commands (chart files etc.).
    pub rerun_args: String,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            charts: fixtures::standard_charts(),
            atlas: fixtures::projective_line_atlas(),
            bounds: Bounds::default(),
            orders: (1, 4),
            samples: None,
            rerun_args: String::new(),
        }
    }
}

/// Printed forms of the inputs of one case.
#[derive(Default)]
pub struct Inputs(BTreeMap<String, String>);

impl Inputs {
    pub fn put(&mut self, name: &str, v: &impl Display) {
        self.0.insert(name.to_string(), v.to_string());
    }
}

type CheckFn = dyn Fn(&mut Sampler, &mut Inputs) -> Result<bool> + Send + Sync;

pub struct Case {
    pub id: String,
    pub suite: &'static str,
    pub reference: &'static str,
    pub params: BTreeMap<String, Value>,
    check: Arc<CheckFn>,
}

struct Builder<'a> {
    suite: &'static str,
    cfg: &'a SuiteConfig,
    cases: Vec<Case>,
}

impl<'a> Builder<'a> {
    fn new(suite: &'static str, cfg: &'a SuiteConfig) -> Self {
        Builder { suite, cfg, cases: Vec::new() }
    }

    fn count(&self, default: usize) -> usize {
        self.cfg.samples.unwrap_or(default)
    }

    fn orders(&self) -> std::ops::RangeInclusive<u32> {
        self.cfg.orders.0..=self.cfg.orders.1
    }

    /// Adds a single case.
    fn one<F>(&mut self, id: String, reference: &'static str, params: Vec<(&str, Value)>, f: F)
    where
        F: Fn(&mut Sampler, &mut Inputs) -> Result<bool> + Send + Sync + 'static,
    {
        let params = params.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        self.cases.push(Case { id, suite: self.suite, reference, params, check: Arc::new(f) });
    }

    /// Adds `count` sampled cases `group#0 .. group#(count-1)`; `f` gets the sample index.
    fn sampled<F>(&mut self, group: String, reference: &'static str, params: Vec<(&str, Value)>, count: usize, f: F)
    where
        F: Fn(usize, &mut Sampler, &mut Inputs) -> Result<bool> + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        for i in 0..count {
            let f = f.clone();
            let mut p = params.clone();
            p.push(("sample", json!(i)));
            self.one(format!("{group}#{i}"), reference, p, move |s, inp| f(i, s, inp));
        }
    }
}

/// One order per sample, cycling through `lo..=hi`.
fn cycled((lo, hi): (u32, u32), i: usize) -> u32 {
    lo + (i as u32) % (hi - lo + 1)
}

fn sym_chart(c: &Arc<Chart>) -> Value {
    json!(c.name())
}

fn derivations(b: &mut Builder) {
    const LEIBNIZ: &str = "partial derivatives of the chart are derivations: d(fg) = d(f) g + f d(g)";
    const COMMUTE: &str = "partial derivatives of the chart commute";
    const RELATION: &str =
        "derivations are well defined on the quotient: the chain rule through the algebraic generators agrees \
         with differentiating the reduced element, and kills the defining relations";
    for c in b.cfg.charts.clone() {
        let name = c.name().to_string();
        let n = c.n();
        let cc = c.clone();
        b.sampled(format!("derivations/leibniz/{name}"), LEIBNIZ, vec![("chart", sym_chart(&c))], b.count(200), move |_, s, inp| {
            let (f, g, i) = (s.ring_elem(&cc), s.ring_elem(&cc), s.below(n));
            inp.put("f", &f);
            inp.put("g", &g);
            inp.put("i", &i);
            let lhs = f.try_mul(&g)?.derive(i)?;
            let rhs = f.derive(i)?.try_mul(&g)?.try_add(&f.try_mul(&g.derive(i)?)?)?;
            lhs.try_eq(&rhs)
        });
        let cc = c.clone();
        b.sampled(format!("derivations/commute/{name}"), COMMUTE, vec![("chart", sym_chart(&c))], b.count(200), move |_, s, inp| {
            let (f, i, j) = (s.ring_elem(&cc), s.below(n), s.below(n));
            inp.put("f", &f);
            inp.put("i", &i);
            inp.put("j", &j);
            f.derive(i)?.derive(j)?.try_eq(&f.derive(j)?.derive(i)?)
        });
        if c.spec().alg_gens.is_empty() {
            continue;
        }
        let cc = c.clone();
        b.sampled(format!("derivations/relation/{name}"), RELATION, vec![("chart", sym_chart(&c))], b.count(200), move |_, s, inp| {
            // P = Q + h * (y^d - rhs): unreduced, so the relation part must differentiate to zero.
            let vars = cc.vars().clone();
            let mut p = s.numerator(&cc);
            for (gi, g) in cc.spec().alg_gens.iter().enumerate() {
                let y = Poly::var(vars.clone(), n + gi)?;
                let rel = y.pow(g.degree).try_sub(&g.rhs)?;
                p = p.try_add(&s.numerator(&cc).try_mul(&rel)?)?;
            }
            let i = s.below(n);
            inp.put("P", &p);
            inp.put("i", &i);
            let f = RingElem::from_poly(&cc, p.clone());
            let mut chain = RingElem::from_poly(&cc, p.partial(i)?);
            for gi in 0..cc.spec().alg_gens.len() {
                let dy = RingElem::var(&cc, n + gi)?.derive(i)?;
                chain = chain.try_add(&RingElem::from_poly(&cc, p.partial(n + gi)?).try_mul(&dy)?)?;
            }
            f.derive(i)?.try_eq(&chain)
        });
    }
}

/// Special inputs: inverse of the denominator and every algebraic generator.
fn special_elements(c: &Arc<Chart>) -> Vec<(String, RingElem)> {
    let mut out = Vec::new();
    if c.has_denominator() {
        let d = RingElem::from_poly(c, c.denominator().clone());
        if let Ok(inv) = d.inverse() {
            out.push((format!("1/({})", c.denominator()), inv));
        }
    }
    for gi in 0..c.spec().alg_gens.len() {
        let y = RingElem::var(c, c.n() + gi).expect("generator");
        out.push((y.to_string(), y));
    }
    out
}

fn taylor(b: &mut Builder) {
    const TAYLOR: &str = "Taylor identities expressing 1⊗f and f⊗1 through δ(x)^m in the completed tensor square, \
                          with the coefficients recovered by first-factor derivatives and multiplication";
    for c in b.cfg.charts.clone() {
        let name = c.name().to_string();
        for k in b.orders() {
            let cc = c.clone();
            let params = vec![("chart", sym_chart(&c)), ("k", json!(k))];
            b.sampled(format!("taylor/identity/{name}/k={k}"), TAYLOR, params, b.count(100), move |_, s, inp| {
                let f = s.ring_elem(&cc);
                inp.put("f", &f);
                Ok(taylor_identity_check(&f, k)? && taylor_coefficient_recovery(&f, k)?)
            });
        }
        for (idx, (label, f)) in special_elements(&c).into_iter().enumerate() {
            for k in b.orders() {
                let f = f.clone();
                let params = vec![("chart", sym_chart(&c)), ("k", json!(k)), ("f", json!(label))];
                b.one(format!("taylor/special/{name}/f{idx}/k={k}"), TAYLOR, params, move |_, inp| {
                    inp.put("f", &f);
                    Ok(taylor_identity_check(&f, k)? && taylor_coefficient_recovery(&f, k)?)
                });
            }
        }
    }
}

fn jet_hom(b: &mut Builder) {
    const HOM: &str = "the jet map f ↦ f(x+t) is a ring homomorphism";
    const DELTA: &str = "δ satisfies δ(fg) = (f⊗1)δ(g) + δ(f)(1⊗g)";
    for c in b.cfg.charts.clone() {
        let name = c.name().to_string();
        for k in b.orders() {
            let cc = c.clone();
            let params = vec![("chart", sym_chart(&c)), ("k", json!(k))];
            b.sampled(format!("jet-hom/multiplicative/{name}/k={k}"), HOM, params, b.count(200), move |_, s, inp| {
                let (f, g) = (s.ring_elem(&cc), s.ring_elem(&cc));
                inp.put("f", &f);
                inp.put("g", &g);
                jet_of(&f.try_mul(&g)?, k)?.try_eq(&jet_of(&f, k)?.try_mul(&jet_of(&g, k)?)?)
            });
        }
        let cc = c.clone();
        let cfg_orders = b.cfg.orders;
        b.sampled(format!("jet-hom/delta-leibniz/{name}"), DELTA, vec![("chart", sym_chart(&c))], b.count(200), move |i, s, inp| {
            let k = cycled(cfg_orders, i);
            let (f, g) = (s.ring_elem(&cc), s.ring_elem(&cc));
            inp.put("f", &f);
            inp.put("g", &g);
            inp.put("k", &k);
            let lhs = delta(&f.try_mul(&g)?, k)?;
            let rhs = Jet::scalar(&f, k).try_mul(&delta(&g, k)?)?.try_add(&delta(&f, k)?.try_mul(&jet_of(&g, k)?)?)?;
            lhs.try_eq(&rhs)
        });
    }
}

fn smash_bracket(b: &mut Builder) {
    const ORACLE: &str = "the jet-field bracket of decomposables a1#g1, a2#g2 equals a1 g1(a2)#g2 - a2 g2(a1)#g1 + a1a2#[g1,g2]";
    const ANTI: &str = "the jet-field bracket is antisymmetric";
    const JACOBI: &str = "the jet-field bracket satisfies the Jacobi identity";
    const IDEAL: &str = "the jet-order filtration consists of ideals: [u, w] has order at least that of w";
    const ANCHOR: &str = "the anchor is a Lie algebra map to vector fields";
    for c in b.cfg.charts.clone() {
        let name = c.name().to_string();
        let params = vec![("chart", sym_chart(&c))];
        let orders = b.cfg.orders;
        let k_of = move |i: usize| cycled(orders, i);

        let cc = c.clone();
        b.sampled(format!("smash-bracket/oracle/{name}"), ORACLE, params.clone(), b.count(200), move |i, s, inp| {
            let k = k_of(i);
            let (a1, g1, a2, g2) = (s.ring_elem(&cc), s.vector_field(&cc), s.ring_elem(&cc), s.vector_field(&cc));
            inp.put("a1", &a1);
            inp.put("g1", &g1);
            inp.put("a2", &a2);
            inp.put("g2", &g2);
            inp.put("k", &k);
            let direct = JetField::from_pair(&a1, &g1, k)?.bracket(&JetField::from_pair(&a2, &g2, k)?)?;
            direct.try_eq(&smash_bracket_decomposable(&a1, &g1, &a2, &g2, k)?)
        });
        let cc = c.clone();
        b.sampled(format!("smash-bracket/antisymmetry/{name}"), ANTI, params.clone(), b.count(100), move |i, s, inp| {
            let k = k_of(i);
            let (u, w) = (s.jet_field(&cc, k), s.jet_field(&cc, k));
            inp.put("u", &u);
            inp.put("w", &w);
            Ok(u.bracket(&w)?.try_add(&w.bracket(&u)?)?.is_zero())
        });
        let cc = c.clone();
        b.sampled(format!("smash-bracket/jacobi/{name}"), JACOBI, params.clone(), b.count(100), move |i, s, inp| {
            let k = k_of(i);
            let (u, v, w) = (s.jet_field(&cc, k), s.jet_field(&cc, k), s.jet_field(&cc, k));
            inp.put("u", &u);
            inp.put("v", &v);
            inp.put("w", &w);
            let a = u.bracket(&v.bracket(&w)?)?;
            let b2 = v.bracket(&w.bracket(&u)?)?;
            let c2 = w.bracket(&u.bracket(&v)?)?;
            Ok(a.try_add(&b2)?.try_add(&c2)?.is_zero())
        });
        let cc = c.clone();
        b.sampled(format!("smash-bracket/ideal/{name}"), IDEAL, params.clone(), b.count(200), move |i, s, inp| {
            let k = k_of(i);
            let u = s.jet_field(&cc, k);
            // w = (random field) * δ(x)^m has order at least |m|.
            let m = s.multi_index(cc.n(), 0, k);
            let w = s.jet_field(&cc, k).mul_jet(&crate::jet::delta_x_power(&cc, &m, k)?)?;
            inp.put("u", &u);
            inp.put("w", &w);
            Ok(u.bracket(&w)?.filtration_order() >= w.filtration_order())
        });
        let cc = c.clone();
        b.sampled(format!("smash-bracket/anchor/{name}"), ANCHOR, params.clone(), b.count(200), move |i, s, inp| {
            let k = k_of(i);
            let (u, w) = (s.jet_field(&cc, k), s.jet_field(&cc, k));
            inp.put("u", &u);
            inp.put("w", &w);
            Ok(u.bracket(&w)?.anchor() == u.anchor().bracket(&w.anchor())?)
        });
    }
}

fn is_polynomial_chart(c: &Chart) -> bool {
    !c.has_denominator() && c.spec().alg_gens.is_empty()
}

fn iso_roundtrip(b: &mut Builder) {
    const PSI_PHI: &str = "ψ∘φ is the identity on jet fields";
    const PHI_PSI: &str = "φ∘ψ is the identity on the semidirect product V ⋉ A⊗L";
    const AFFINE: &str = "on a polynomial ring both composites are the identity on polynomial inputs without completion";
    for c in b.cfg.charts.clone() {
        let name = c.name().to_string();
        for k in b.orders() {
            let params = vec![("chart", sym_chart(&c)), ("k", json!(k))];
            let cc = c.clone();
            b.sampled(format!("iso-roundtrip/psi-phi/{name}/k={k}"), PSI_PHI, params.clone(), b.count(200), move |_, s, inp| {
                let u = s.jet_field(&cc, k);
                inp.put("u", &u);
                psi(&phi(&u)?, k)?.try_eq(&u)
            });
            let cc = c.clone();
            b.sampled(format!("iso-roundtrip/phi-psi/{name}/k={k}"), PHI_PSI, params, b.count(200), move |_, s, inp| {
                let p = s.semidirect(&cc, k);
                inp.put("p", &p);
                let back = phi(&psi(&p, k)?)?;
                Ok(back.v_part == p.v_part && back.l_part.try_eq(&p.l_part)?)
            });
        }
        if !is_polynomial_chart(&c) {
            continue;
        }
        let cc = c.clone();
        let k = 6;
        let params = vec![("chart", sym_chart(&c)), ("k", json!(k)), ("degree", json!(3))];
        b.sampled(format!("iso-roundtrip/affine/{name}/k={k}"), AFFINE, params, b.count(50), move |_, s, inp| {
            let saved = s.bounds;
            s.bounds.degree = 3;
            let (a, v) = (s.ring_elem(&cc), s.vector_field(&cc));
            let p = s.semidirect(&cc, k);
            s.bounds = saved;
            inp.put("a", &a);
            inp.put("v", &v);
            inp.put("p", &p);
            let u = JetField::from_pair(&a, &v, k)?;
            let back = phi(&psi(&p, k)?)?;
            Ok(psi(&phi(&u)?, k)?.try_eq(&u)? && back.v_part == p.v_part && back.l_part.try_eq(&p.l_part)?)
        });
    }
}

fn semidirect_eq(a: &SemiDirectElem, b: &SemiDirectElem) -> Result<bool> {
    Ok(a.v_part == b.v_part && a.l_part.try_eq(&b.l_part)?)
}

fn iso_hom(b: &mut Builder) {
    const BRACKET: &str = "φ is a Lie algebra homomorphism from jet fields to V ⋉ A⊗L";
    const LINEAR_PHI: &str = "φ is left A-linear";
    const LINEAR_PSI: &str = "ψ is left A-linear";
    for c in b.cfg.charts.clone() {
        let name = c.name().to_string();
        let params = vec![("chart", sym_chart(&c))];
        let orders = b.cfg.orders;
        let k_of = move |i: usize| cycled(orders, i);
        let cc = c.clone();
        b.sampled(format!("iso-hom/bracket/{name}"), BRACKET, params.clone(), b.count(100), move |i, s, inp| {
            let k = k_of(i);
            let (u, w) = (s.jet_field(&cc, k), s.jet_field(&cc, k));
            inp.put("u", &u);
            inp.put("w", &w);
            semidirect_eq(&phi(&u.bracket(&w)?)?, &phi(&u)?.bracket(&phi(&w)?)?)
        });
        let cc = c.clone();
        b.sampled(format!("iso-hom/linear-phi/{name}"), LINEAR_PHI, params.clone(), b.count(100), move |i, s, inp| {
            let k = k_of(i);
            let (a, u) = (s.ring_elem(&cc), s.jet_field(&cc, k));
            inp.put("a", &a);
            inp.put("u", &u);
            semidirect_eq(&phi(&u.scale(&a)?)?, &phi(&u)?.scale(&a)?)
        });
        let cc = c.clone();
        b.sampled(format!("iso-hom/linear-psi/{name}"), LINEAR_PSI, params, b.count(100), move |i, s, inp| {
            let k = k_of(i);
            let (a, p) = (s.ring_elem(&cc), s.semidirect(&cc, k));
            inp.put("a", &a);
            inp.put("p", &p);
            psi(&p.scale(&a)?, k)?.try_eq(&psi(&p, k)?.scale(&a)?)
        });
    }
}

/// Five fixed test fields `η` on a chart with coefficients built from its variables.
fn eta_sample(c: &Arc<Chart>) -> Vec<VectorField> {
    let v0 = RingElem::var(c, 0).expect("parameter");
    let last = RingElem::var(c, c.vars().len() - 1).expect("variable");
    let one = RingElem::one(c);
    let coeffs = [
        one.clone(),
        v0.clone(),
        last.pow(2),
        &(&v0 * &last) + &one,
        &v0.pow(3) - &last,
    ];
    coeffs
        .iter()
        .enumerate()
        .map(|(i, f)| VectorField::coordinate(c, i % c.n(), f.clone()).expect("field"))
        .collect()
}

fn localization(b: &mut Builder) {
    const LOC: &str = "1#(1/g)η equals the partial sum of (1/g^{r+1}⊗1)δ(g)^r(1#η) up to a defect of jet order ≥ m+1, \
                       and the defect equals the closed-form remainder";
    for c in b.cfg.charts.clone() {
        if !c.has_denominator() {
            continue;
        }
        let name = c.name().to_string();
        let g = RingElem::from_poly(&c, c.denominator().clone());
        for (e, eta) in eta_sample(&c).into_iter().enumerate() {
            for k in 0..=b.cfg.orders.1 {
                for m in 0..=k {
                    let (g, eta) = (g.clone(), eta.clone());
                    let params = vec![
                        ("chart", sym_chart(&c)),
                        ("g", json!(g.to_string())),
                        ("eta", json!(eta.to_string())),
                        ("k", json!(k)),
                        ("m", json!(m)),
                    ];
                    b.one(format!("localization/{name}/eta{e}/k={k}/m={m}"), LOC, params, move |_, inp| {
                        inp.put("g", &g);
                        inp.put("eta", &eta);
                        let exact = JetField::from_pair(&RingElem::one(g.chart()), &eta.scale(&g.inverse()?)?, k)?;
                        let defect = exact.try_sub(&localization_partial_sum(&g, &eta, m, k)?)?;
                        Ok(defect.filtration_order() > m && defect.try_eq(&localization_remainder(&g, &eta, m, k)?)?)
                    });
                }
            }
        }
    }
}

fn word_string(w: &[LBasis]) -> String {
    w.iter().map(|b| format!("[{b}]")).collect::<Vec<_>>().join("*")
}

fn pbw(b: &mut Builder) {
    const IDEMPOTENT: &str = "PBW straightening returns sorted monomials and fixes them";
    const ASSOC: &str = "PBW straightening is compatible with associativity of the enveloping algebra";
    let r = 3;
    for n in [1usize, 2] {
        let params = vec![("N", json!(n)), ("r", json!(r))];
        b.sampled(format!("pbw/idempotent/N={n}"), IDEMPOTENT, params.clone(), b.count(200), move |_, s, inp| {
            let len = s.range(1, 4) as usize;
            let w = s.l_word(n, r, len);
            inp.put("word", &word_string(&w));
            let mut st = Straightener::<crate::scalar::Rational>::new(r);
            for (mono, _) in st.normalize(&w)? {
                if mono.factors().windows(2).any(|p| p[0] > p[1]) {
                    return Ok(false);
                }
                let again = st.normalize(mono.factors())?;
                if again.len() != 1 || again[0].0 != mono || again[0].1 != num_traits::One::one() {
                    return Ok(false);
                }
            }
            Ok(true)
        });
        b.sampled(format!("pbw/associativity/N={n}"), ASSOC, params, b.count(200), move |_, s, inp| {
            let ws: Vec<Vec<LBasis>> = (0..3).map(|_| {
                let len = s.range(1, 2) as usize;
                s.l_word(n, r, len)
            }).collect();
            for (i, w) in ws.iter().enumerate() {
                inp.put(&format!("w{}", i + 1), &word_string(w));
            }
            let u: Vec<UElem> = ws.iter().map(|w| pbw_normalize(n, w, r)).collect::<Result<_>>()?;
            let whole = pbw_normalize(n, &ws.concat(), r)?;
            let left = u[0].try_mul(&u[1])?.try_mul(&u[2])?;
            let right = u[0].try_mul(&u[1].try_mul(&u[2])?)?;
            Ok(whole == left && whole == right)
        });
    }
}

fn av_factor(s: &mut Sampler, c: &Arc<Chart>) -> AVFactor {
    if s.below(2) == 0 {
        AVFactor::Fun(s.ring_elem(c))
    } else {
        AVFactor::Vf(s.vector_field(c))
    }
}

fn av_word_string(w: &AVWord) -> String {
    w.factors
        .iter()
        .map(|f| match f {
            AVFactor::Fun(a) => format!("fun: {a}"),
            AVFactor::Vf(v) => format!("vf: {v}"),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn av_tensor(b: &mut Builder) {
    const LEIBNIZ: &str = "the map AV → D⊗U(L) sends the Leibniz relation v·f - f·v - v(f) to zero";
    const MULT: &str = "the map AV → D⊗U(L) is multiplicative on three-factor words";
    const BRACKET: &str = "the map AV → D⊗U(L) sends the bracket of vector fields to the commutator of images";
    for c in b.cfg.charts.clone() {
        let name = c.name().to_string();
        for r in 1..=3u32 {
            let params = vec![("chart", sym_chart(&c)), ("r", json!(r))];
            let cc = c.clone();
            b.sampled(format!("av-tensor/leibniz/{name}/r={r}"), LEIBNIZ, params.clone(), b.count(100), move |_, s, inp| {
                let (v, f) = (s.vector_field(&cc), s.ring_elem(&cc));
                inp.put("v", &v);
                inp.put("f", &f);
                let vf = av_to_tensor(&cc, &AVWord::new(vec![AVFactor::Vf(v.clone()), AVFactor::Fun(f.clone())]), r)?;
                let fv = av_to_tensor(&cc, &AVWord::new(vec![AVFactor::Fun(f.clone()), AVFactor::Vf(v.clone())]), r)?;
                let vf_of_f = av_to_tensor(&cc, &AVWord::new(vec![AVFactor::Fun(v.apply(&f)?)]), r)?;
                Ok(vf.try_sub(&fv)?.try_sub(&vf_of_f)?.is_zero())
            });
            let cc = c.clone();
            b.sampled(format!("av-tensor/multiplicative/{name}/r={r}"), MULT, params.clone(), b.count(100), move |_, s, inp| {
                let fs: Vec<AVFactor> = (0..3).map(|_| av_factor(s, &cc)).collect();
                let word = AVWord::new(fs.clone());
                inp.put("word", &av_word_string(&word));
                let whole = av_to_tensor(&cc, &word, r)?;
                let imgs: Vec<_> =
                    fs.iter().map(|f| av_to_tensor(&cc, &AVWord::new(vec![f.clone()]), r)).collect::<Result<_>>()?;
                let right = imgs[0].try_mul(&imgs[1].try_mul(&imgs[2])?)?;
                let split = av_to_tensor(&cc, &AVWord::new(fs[..2].to_vec()), r)?.try_mul(&imgs[2])?;
                Ok(whole.try_eq(&right)? && whole.try_eq(&split)?)
            });
            let cc = c.clone();
            b.sampled(format!("av-tensor/bracket/{name}/r={r}"), BRACKET, params, b.count(100), move |_, s, inp| {
                let (v, w) = (s.vector_field(&cc), s.vector_field(&cc));
                inp.put("v", &v);
                inp.put("w", &w);
                let img = |x: &VectorField| av_to_tensor(&cc, &AVWord::new(vec![AVFactor::Vf(x.clone())]), r);
                img(&v.bracket(&w)?)?.try_eq(&img(&v)?.commutator(&img(&w)?)?)
            });
        }
    }
}

/// Every ordered pair of distinct charts with a transition, declared or reversed.
fn transition_pairs(atlas: &AtlasSpec) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for t in &atlas.transitions {
        out.push((t.from().to_string(), t.to().to_string()));
        out.push((t.to().to_string(), t.from().to_string()));
    }
    out
}

fn transition(b: &mut Builder) {
    const FORMULA: &str = "the explicit change-of-chart formula on X^m∂/∂X_p agrees with transport through ψ and φ";
    const VALUES: &str = "closed-form values of the transition on the projective line";
    const IDENTITY: &str = "the transition of a chart to itself is the identity";
    const FILTRATION: &str = "transition terms with Y^s, |s| < |m|, vanish";
    const QUOTIENT: &str = "on the degree-one quotient the transition acts as the Jacobian on (1,1)-tensors";
    let r = 4;
    let atlas = Arc::new(b.cfg.atlas.clone());
    for (from, to) in transition_pairs(&atlas) {
        let tp = match atlas.transition(&from, &to) {
            Ok(tp) => Arc::new(tp),
            Err(e) => {
                let msg = e.to_string();
                b.one(format!("transition/setup/{from}->{to}"), FORMULA, vec![], move |_, _| {
                    Err(crate::error::Error::InvalidHomomorphism(msg.clone()))
                });
                continue;
            }
        };
        let n = tp.n();
        let mut filtration = Vec::new();
        for m in MultiIndex::all_between(n, 1, 3) {
            for p in 0..n {
                let params = vec![("from", json!(from)), ("to", json!(to)), ("m", json!(m.as_slice())), ("p", json!(p)), ("r", json!(r))];
                let label = format!("{from}->{to}/m={:?}/p={p}", m.as_slice());
                let (tp1, m1) = (tp.clone(), m.clone());
                b.one(format!("transition/formula/{label}"), FORMULA, params.clone(), move |_, _| {
                    transition_l(&m1, p, &tp1, r)?.try_eq(&transition_via_iso(&m1, p, &tp1, r)?)
                });
                let (tp1, m1) = (tp.clone(), m.clone());
                filtration.push((format!("transition/filtration/{label}"), params, move |_: &mut Sampler, _: &mut Inputs| {
                    filtration_check(&tp1, &m1, p, r)
                }));
            }
        }
        for (id, params, f) in filtration {
            b.one(id, FILTRATION, params, f);
        }
        for a in 0..n {
            for p in 0..n {
                let tp1 = tp.clone();
                let params = vec![("from", json!(from)), ("to", json!(to)), ("a", json!(a)), ("p", json!(p)), ("r", json!(r))];
                b.one(format!("transition/quotient/{from}->{to}/a={a}/p={p}"), QUOTIENT, params, move |_, _| {
                    jacobian_quotient_check(&tp1, &MultiIndex::unit(n, a), p, r)
                });
            }
        }
    }
    for chart in atlas.charts.clone() {
        let name = chart.name().to_string();
        let n = chart.n();
        for m in MultiIndex::all_between(n, 1, 3) {
            for p in 0..n {
                let c1 = chart.clone();
                let m1 = m.clone();
                let params = vec![("chart", json!(name)), ("m", json!(m.as_slice())), ("p", json!(p)), ("r", json!(r))];
                b.one(format!("transition/identity/{name}/m={:?}/p={p}", m.as_slice()), IDENTITY, params, move |_, _| {
                    let tp = TransitionPair::identity(c1.name(), &c1)?;
                    let expect = CurrentElem::basis(&RingElem::one(&c1), r, LBasis::new(m1.clone(), p)?)?;
                    Ok(transition_l(&m1, p, &tp, r)?.try_eq(&expect)? && transition_via_iso(&m1, p, &tp, r)?.try_eq(&expect)?)
                });
            }
        }
    }
    // The two closed forms are stated for the inversion chart u = 1/x.
    if let Ok(tp) = atlas.transition("U0", "U1") {
        if tp.n() == 1 && tp.target().params() == ["u"] {
            let tp = Arc::new(tp);
            for (e, expect) in [(1u32, "(1)*X*D(X) + (1/u)*X^2*D(X)"), (2, "(-1/u^2)*X^2*D(X)")] {
                let tp1 = tp.clone();
                let params = vec![("from", json!("U0")), ("to", json!("U1")), ("m", json!([e])), ("expected", json!(expect))];
                b.one(format!("transition/values/U0->U1/m=[{e}]"), VALUES, params, move |_, inp| {
                    let want = parse_current(expect, tp1.target(), r)
                        .map_err(|e| crate::error::Error::InvalidHomomorphism(e.to_string()))?;
                    let m = MultiIndex::from([e]);
                    let got = transition_l(&m, 0, &tp1, r)?;
                    inp.put("got", &got);
                    Ok(got.try_eq(&want)? && transition_via_iso(&m, 0, &tp1, r)?.try_eq(&want)?)
                });
            }
        }
    }
}

fn permutations(t: &[String; 3]) -> Vec<[String; 3]> {
    let idx = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    idx.iter().map(|p| [t[p[0]].clone(), t[p[1]].clone(), t[p[2]].clone()]).collect()
}

fn cocycle(b: &mut Builder) {
    const COCYCLE: &str = "transitions satisfy the cocycle condition T_jl ∘ T_ij = T_il on triple overlaps";
    let r = 4;
    let atlas = Arc::new(b.cfg.atlas.clone());
    for t in &atlas.triples {
        for [i, j, l] in permutations(&t.charts) {
            let n = t.rings[0].n();
            for m in MultiIndex::all_between(n, 1, 3) {
                for p in 0..n {
                    let a = atlas.clone();
                    let (i1, j1, l1, m1) = (i.clone(), j.clone(), l.clone(), m.clone());
                    let params = vec![("triple", json!([i, j, l])), ("m", json!(m.as_slice())), ("p", json!(p)), ("r", json!(r))];
                    b.one(format!("cocycle/{i}->{j}->{l}/m={:?}/p={p}", m.as_slice()), COCYCLE, params, move |_, _| {
                        cocycle_check(&a, [&i1, &j1, &l1], &m1, p, r)
                    });
                }
            }
        }
    }
}

/// Builds the cases of a suite (`all` concatenates every suite).
pub fn suite_cases(suite: &str, cfg: &SuiteConfig) -> IoResult<Vec<Case>> {
    if suite == "all" {
        let mut out = Vec::new();
        for s in SUITES {
            out.extend(suite_cases(s, cfg)?);
        }
        return Ok(out);
    }
    let name = *SUITES.iter().find(|s| **s == suite).ok_or_else(|| IoError::UnknownSuite(suite.into()))?;
    let mut b = Builder::new(name, cfg);
    match name {
        "derivations" => derivations(&mut b),
        "taylor" => taylor(&mut b),
        "jet-hom" => jet_hom(&mut b),
        "smash-bracket" => smash_bracket(&mut b),
        "iso-roundtrip" => iso_roundtrip(&mut b),
        "iso-hom" => iso_hom(&mut b),
        "localization" => localization(&mut b),
        "pbw" => pbw(&mut b),
        "av-tensor" => av_tensor(&mut b),
        "transition" => transition(&mut b),
        "cocycle" => cocycle(&mut b),
        _ => unreachable!("listed suite"),
    }
    Ok(b.cases)
}

fn run_case(case: &Case, seed: u64, cfg: &SuiteConfig) -> CheckRecord {
    let mut sampler = Sampler::new(seed, &case.id, cfg.bounds);
    let mut inputs = Inputs::default();
    let outcome = (case.check)(&mut sampler, &mut inputs);
    let (status, error) = match outcome {
        Ok(true) => (Status::Pass, None),
        Ok(false) => (Status::Fail, None),
        Err(e) => (Status::Fail, Some(e.to_string())),
    };
    let witness = (status == Status::Fail).then(|| Witness {
        inputs: inputs.0,
        error,
        reproduce: format!("avjet verify {} --seed {seed} --case '{}'{}", case.suite, case.id, cfg.rerun_args),
    });
    CheckRecord { id: case.id.clone(), reference: case.reference.into(), params: case.params.clone(), status, witness }
}

fn chart_names(cfg: &SuiteConfig) -> Vec<String> {
    let mut names: Vec<String> = cfg.charts.iter().map(|c| c.name().to_string()).collect();
    names.push(format!("atlas:{}", cfg.atlas.name));
    names
}

/// Runs every case of a suite.
pub fn run_suite(suite: &str, seed: u64, cfg: &SuiteConfig) -> IoResult<Report> {
    let cases = suite_cases(suite, cfg)?;
    let checks: Vec<CheckRecord> = cases.par_iter().map(|c| run_case(c, seed, cfg)).collect();
    Ok(Report::new(suite, seed, chart_names(cfg), checks))
}

/// Runs the single case `id` of a suite.
pub fn run_single(suite: &str, seed: u64, id: &str, cfg: &SuiteConfig) -> IoResult<Report> {
    let cases = suite_cases(suite, cfg)?;
    let case = cases.iter().find(|c| c.id == id).ok_or_else(|| IoError::UnknownCase(id.into()))?;
    Ok(Report::new(suite, seed, chart_names(cfg), vec![run_case(case, seed, cfg)]))
}
