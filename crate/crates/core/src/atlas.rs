//! Atlases of étale charts and the transition functions of the bundle with
//! fibre `L₊`.
//!
//! A transition between charts `U₁` (parameters `x`) and `U₂` (parameters
//! `y`) is described on the overlap twice: once as a ring in the `x`
//! variables (`source`) carrying `H`, with `y_j = H_j(x)`, and once as a ring
//! in the `y` variables (`target`) carrying `G`, with `x_i = G_i(y)`. The
//! substitutions `σ_G : source → target` and `σ_H : target → source` are
//! mutually inverse ring isomorphisms once the transition is validated.
//!
//! Transition functions are computed two ways: by the closed formula
//! ([`transition_l`]) and by passing through jets of vector fields
//! ([`transition_via_iso`]).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::MultiIndex;
use crate::chart::{Chart, RingElem, RingHom};
use crate::error::{Error, Result};
use crate::jet::jet_of;
use crate::jet_field::JetField;
use crate::lplus::{phi, psi, CurrentElem, LBasis, SemiDirectElem};
use crate::scalar::{sign, Field, Rational};
use crate::vfield::VectorField;

/// A validated change of coordinates between two charts.
#[derive(Clone, Debug)]
pub struct TransitionPair<S: Field = Rational> {
    from: String,
    to: String,
    source: Arc<Chart<S>>,
    target: Arc<Chart<S>>,
    g: Vec<RingElem<S>>,
    h: Vec<RingElem<S>>,
    sigma_g: RingHom<S>,
    sigma_h: RingHom<S>,
    /// `∂G_i/∂y_j` on the target ring.
    jac_g: Vec<Vec<RingElem<S>>>,
    /// `σ_G(∂H_q/∂x_p)` on the target ring, indexed `[q][p]`.
    jac_h: Vec<Vec<RingElem<S>>>,
}

/// Builds the substitution hom `chart → target` sending the parameters to
/// `params` and the algebraic generators to `gens`.
fn substitution<S: Field>(
    chart: &Arc<Chart<S>>,
    target: &Arc<Chart<S>>,
    params: &[RingElem<S>],
    gens: &[RingElem<S>],
) -> Result<RingHom<S>> {
    let images: Vec<_> = params.iter().chain(gens).cloned().collect();
    RingHom::new(chart, target, images, None)
}

impl<S: Field> TransitionPair<S> {
    /// Validates and assembles a transition.
    ///
    /// `g` lives on `target` and `h` on `source`; `g_gens` and `h_gens` give
    /// the images of the algebraic generators of `source` and `target`
    /// respectively (empty for rings without generators).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        from: &str,
        to: &str,
        source: &Arc<Chart<S>>,
        target: &Arc<Chart<S>>,
        g: Vec<RingElem<S>>,
        h: Vec<RingElem<S>>,
        g_gens: Vec<RingElem<S>>,
        h_gens: Vec<RingElem<S>>,
    ) -> Result<Self> {
        let n = source.n();
        if target.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: target.n() });
        }
        if g.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.len() });
        }
        if h.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: h.len() });
        }
        for e in &g {
            RingElem::zero(target).try_add(e)?;
        }
        for e in &h {
            RingElem::zero(source).try_add(e)?;
        }
        let sigma_g = substitution(source, target, &g, &g_gens)?;
        let sigma_h = substitution(target, source, &h, &h_gens)?;
        let jac_g = g.iter().map(|gi| (0..n).map(|j| gi.derive(j)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        let jac_h = h
            .iter()
            .map(|hq| (0..n).map(|p| sigma_g.apply(&hq.derive(p)?)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let tp = TransitionPair {
            from: from.into(),
            to: to.into(),
            source: source.clone(),
            target: target.clone(),
            g,
            h,
            sigma_g,
            sigma_h,
            jac_g,
            jac_h,
        };
        validate_transition(&tp)?;
        Ok(tp)
    }

    /// The identity change of coordinates on a chart.
    pub fn identity(name: &str, chart: &Arc<Chart<S>>) -> Result<Self> {
        let n = chart.n();
        let params = (0..n).map(|i| RingElem::var(chart, i)).collect::<Result<Vec<_>>>()?;
        let gens = (n..chart.vars().len()).map(|i| RingElem::var(chart, i)).collect::<Result<Vec<_>>>()?;
        Self::new(name, name, chart, chart, params.clone(), params, gens.clone(), gens)
    }

    pub fn from(&self) -> &str {
        &self.from
    }

    pub fn to(&self) -> &str {
        &self.to
    }

    pub fn source(&self) -> &Arc<Chart<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart<S>> {
        &self.target
    }

    pub fn g(&self) -> &[RingElem<S>] {
        &self.g
    }

    pub fn h(&self) -> &[RingElem<S>] {
        &self.h
    }

    pub fn sigma_g(&self) -> &RingHom<S> {
        &self.sigma_g
    }

    pub fn sigma_h(&self) -> &RingHom<S> {
        &self.sigma_h
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    fn gens_images(hom: &RingHom<S>, n: usize) -> Vec<RingElem<S>> {
        hom.images()[n..].to_vec()
    }

    /// The same change of coordinates in the opposite direction.
    pub fn reverse(&self) -> Result<Self> {
        let n = self.n();
        Self::new(
            &self.to,
            &self.from,
            &self.target,
            &self.source,
            self.h.clone(),
            self.g.clone(),
            Self::gens_images(&self.sigma_h, n),
            Self::gens_images(&self.sigma_g, n),
        )
    }

    /// Restricts both sides to smaller rings with the same variables (for
    /// example triple overlaps).
    pub fn restrict(&self, source: &Arc<Chart<S>>, target: &Arc<Chart<S>>) -> Result<Self> {
        let rs = RingHom::restriction(&self.source, source)?;
        let rt = RingHom::restriction(&self.target, target)?;
        let n = self.n();
        let g = self.g.iter().map(|e| rt.apply(e)).collect::<Result<Vec<_>>>()?;
        let h = self.h.iter().map(|e| rs.apply(e)).collect::<Result<Vec<_>>>()?;
        let g_gens = Self::gens_images(&self.sigma_g, n).iter().map(|e| rt.apply(e)).collect::<Result<Vec<_>>>()?;
        let h_gens = Self::gens_images(&self.sigma_h, n).iter().map(|e| rs.apply(e)).collect::<Result<Vec<_>>>()?;
        Self::new(&self.from, &self.to, source, target, g, h, g_gens, h_gens)
    }
}

/// Checks `H(G(y)) = y`, `G(H(x)) = x` and that the Jacobians are inverse.
pub fn validate_transition<S: Field>(tp: &TransitionPair<S>) -> Result<()> {
    let n = tp.n();
    for j in 0..n {
        if !tp.sigma_g.apply(&tp.h[j])?.try_eq(&RingElem::var(&tp.target, j)?)? {
            return Err(Error::InverseCheckFailed(format!(
                "H_{} composed with G is not the parameter `{}`",
                j + 1,
                tp.target.params()[j]
            )));
        }
    }
    for i in 0..n {
        if !tp.sigma_h.apply(&tp.g[i])?.try_eq(&RingElem::var(&tp.source, i)?)? {
            return Err(Error::InverseCheckFailed(format!(
                "G_{} composed with H is not the parameter `{}`",
                i + 1,
                tp.source.params()[i]
            )));
        }
    }
    // (σ_G(∂H/∂x) · ∂G/∂y)[q][j] = δ_qj
    for q in 0..n {
        for j in 0..n {
            let mut acc = RingElem::zero(&tp.target);
            for p in 0..n {
                acc = acc.try_add(&tp.jac_h[q][p].try_mul(&tp.jac_g[p][j])?)?;
            }
            let expect = if q == j { RingElem::one(&tp.target) } else { RingElem::zero(&tp.target) };
            if !acc.try_eq(&expect)? {
                return Err(Error::JacobianNotInvertible);
            }
        }
    }
    Ok(())
}

fn check_basis(tp_n: usize, m: &MultiIndex, p: usize) -> Result<()> {
    if m.len() != tp_n {
        return Err(Error::DimensionMismatch { expected: tp_n, found: m.len() });
    }
    if m.is_zero() {
        return Err(Error::ZeroMultiIndex);
    }
    if p >= tp_n {
        return Err(Error::IndexOutOfRange { index: p, len: tp_n });
    }
    Ok(())
}

fn monomial_of<S: Field>(xs: &[RingElem<S>], m: &MultiIndex, one: RingElem<S>) -> RingElem<S> {
    m.iter().enumerate().fold(one, |acc, (i, e)| &acc * &xs[i].pow(e))
}

/// Image of `X^m ∂/∂X_p` under the transition, by the closed formula
///
/// `Σ_q Σ_{k ≤ m} (-1)^{|m-k|} C(m,k) G(y)^{m-k} [F_{kq}(y+Y) - F_{kq}(y)] ∂/∂Y_q`
///
/// with `F_{kq} = x^k ∂H_q/∂x_p` evaluated at `x = G`. The shifted value
/// `F(y+Y)` is obtained from the jet of `F` in the source parameters by
/// substituting `t_i ↦ G_i(y+Y) - G_i(y)`.
pub fn transition_l<S: Field>(m: &MultiIndex, p: usize, tp: &TransitionPair<S>, r: u32) -> Result<CurrentElem<S>> {
    let n = tp.n();
    check_basis(n, m, p)?;
    let source = &tp.source;
    let target = &tp.target;
    let xs = (0..n).map(|i| RingElem::var(source, i)).collect::<Result<Vec<_>>>()?;
    let shifts = tp
        .g
        .iter()
        .map(|gi| Ok(jet_of(gi, r)?.without_constant()))
        .collect::<Result<Vec<_>>>()?;
    let mut out = CurrentElem::zero(target, r);
    for k in m.sub_indices() {
        let rest = m.checked_sub(&k).unwrap();
        let coeff: S = sign::<S>(rest.degree()) * m.binomial::<S>(&k)?;
        let g_rest = monomial_of(&tp.g, &rest, RingElem::one(target)).scale(&coeff);
        let xk = monomial_of(&xs, &k, RingElem::one(source));
        for (q, hq) in tp.h.iter().enumerate() {
            let f = xk.try_mul(&hq.derive(p)?)?;
            if f.is_zero() {
                continue;
            }
            let shifted = jet_of(&f, r)?.map_coeffs(&tp.sigma_g)?.substitute(&shifts)?;
            for (s, c) in shifted.without_constant().coeffs() {
                out.add_term(LBasis { m: s.clone(), dir: q }, g_rest.try_mul(c)?)?;
            }
        }
    }
    Ok(out)
}

/// Image of `X^m ∂/∂X_p` computed through jets of vector fields: ψ on the
/// source, the coordinate change applied to each representative `a#(f∂_i)`
/// (with `∂/∂x_i = Σ_q ∂H_q/∂x_i ∂/∂y_q`), then φ on the target.
pub fn transition_via_iso<S: Field>(
    m: &MultiIndex,
    p: usize,
    tp: &TransitionPair<S>,
    r: u32,
) -> Result<CurrentElem<S>> {
    let n = tp.n();
    check_basis(n, m, p)?;
    let one = RingElem::one(&tp.source);
    let l = CurrentElem::basis(&one, r, LBasis { m: m.clone(), dir: p })?;
    let lifted = psi(&SemiDirectElem::new(VectorField::zero(&tp.source), l)?, r)?;
    let mut image = JetField::zero(&tp.target, r);
    for part in lifted.decompose()? {
        let a = tp.sigma_g.apply(&part.a)?;
        let f = tp.sigma_g.apply(&part.f)?;
        let coeffs = (0..n).map(|q| f.try_mul(&tp.jac_h[q][part.dir])).collect::<Result<Vec<_>>>()?;
        let v = VectorField::new(&tp.target, coeffs)?;
        image = image.try_add(&JetField::from_pair(&a, &v, r)?)?;
    }
    let back = phi(&image)?;
    if !back.v_part.is_zero() {
        return Err(Error::InvalidHomomorphism("transition produced a nonzero vector-field part".into()));
    }
    Ok(back.l_part)
}

/// Applies the transition to an arbitrary element of `A(source)⊗L^{(r)}`:
/// coefficients are carried over by `σ_G`, basis vectors by [`transition_l`].
pub fn apply_transition<S: Field>(tp: &TransitionPair<S>, c: &CurrentElem<S>) -> Result<CurrentElem<S>> {
    let r = c.max_degree();
    let mut out = CurrentElem::zero(&tp.target, r);
    let mut cache: BTreeMap<LBasis, CurrentElem<S>> = BTreeMap::new();
    for (b, a) in c.terms() {
        if !cache.contains_key(b) {
            cache.insert(b.clone(), transition_l(&b.m, b.dir, tp, r)?);
        }
        out = out.try_add(&cache[b].scale(&tp.sigma_g.apply(a)?)?)?;
    }
    Ok(out)
}

/// All coefficients of Y-degree below `|m|` vanish.
pub fn filtration_check<S: Field>(tp: &TransitionPair<S>, m: &MultiIndex, p: usize, r: u32) -> Result<bool> {
    let t = transition_l(m, p, tp, r)?;
    let ok = t.terms().all(|(b, _)| b.m.degree() >= m.degree());
    Ok(ok)
}

/// The Jacobian pair acting on the elementary `(1,1)`-tensor
/// `X_a ∂/∂X_p`: `Σ_{j,q} (∂G_a/∂y_j) σ_G(∂H_q/∂x_p) Y_j ∂/∂Y_q`.
pub fn jacobian_action<S: Field>(tp: &TransitionPair<S>, a: usize, p: usize, r: u32) -> Result<CurrentElem<S>> {
    let n = tp.n();
    let mut out = CurrentElem::zero(&tp.target, r);
    for j in 0..n {
        for q in 0..n {
            let c = tp.jac_g[a][j].try_mul(&tp.jac_h[q][p])?;
            out.add_term(LBasis { m: MultiIndex::unit(n, j), dir: q }, c)?;
        }
    }
    Ok(out)
}

/// For `|a| = 1`, the degree-0 part (linear in `Y`) of the transition of
/// `X^a ∂/∂X_p` equals [`jacobian_action`].
pub fn jacobian_quotient_check<S: Field>(tp: &TransitionPair<S>, a: &MultiIndex, p: usize, r: u32) -> Result<bool> {
    if a.degree() != 1 {
        return Err(Error::DegreeTooLarge { degree: a.degree(), max: 1 });
    }
    let i = (0..a.len()).find(|&i| a.get(i) == 1).unwrap();
    let t = transition_l(a, p, tp, r)?;
    let linear = CurrentElem::from_terms(
        &tp.target,
        r,
        t.terms().filter(|(b, _)| b.m.degree() == 1).map(|(b, c)| (b.clone(), c.clone())),
    )?;
    linear.try_eq(&jacobian_action(tp, i, p, r)?)
}

/// Three charts together with the rings of their common overlap, one in
/// each chart's parameters.
#[derive(Clone, Debug)]
pub struct TripleOverlap<S: Field = Rational> {
    pub charts: [String; 3],
    pub rings: [Arc<Chart<S>>; 3],
}

/// Charts, overlap rings and transitions.
#[derive(Clone, Debug)]
pub struct AtlasSpec<S: Field = Rational> {
    pub name: String,
    pub charts: Vec<Arc<Chart<S>>>,
    pub transitions: Vec<TransitionPair<S>>,
    pub triples: Vec<TripleOverlap<S>>,
}

impl<S: Field> AtlasSpec<S> {
    pub fn chart(&self, name: &str) -> Result<&Arc<Chart<S>>> {
        self.charts.iter().find(|c| c.name() == name).ok_or_else(|| Error::UnknownChart(name.into()))
    }

    /// The transition `from → to`, reversing a declared `to → from` if needed.
    /// From a chart to itself this is the identity.
    pub fn transition(&self, from: &str, to: &str) -> Result<TransitionPair<S>> {
        if from == to {
            return TransitionPair::identity(from, self.chart(from)?);
        }
        if let Some(tp) = self.transitions.iter().find(|t| t.from == from && t.to == to) {
            return Ok(tp.clone());
        }
        if let Some(tp) = self.transitions.iter().find(|t| t.from == to && t.to == from) {
            return tp.reverse();
        }
        Err(Error::MissingTransition(from.into(), to.into()))
    }

    /// The ring of the triple overlap of `charts`, in the parameters of `which`.
    pub fn triple_ring(&self, charts: [&str; 3], which: &str) -> Result<Arc<Chart<S>>> {
        let distinct: Vec<&str> = {
            let mut v = charts.to_vec();
            v.sort();
            v.dedup();
            v
        };
        if distinct.len() == 1 {
            return Ok(self.chart(which)?.clone());
        }
        for t in &self.triples {
            if distinct.iter().all(|c| t.charts.iter().any(|d| d == c)) {
                let idx = t.charts.iter().position(|d| d == which).unwrap();
                return Ok(t.rings[idx].clone());
            }
        }
        Err(Error::MissingTripleOverlap(charts[0].into(), charts[1].into(), charts[2].into()))
    }

    /// The three transitions `i→j`, `j→l`, `i→l` restricted to the triple overlap.
    pub fn triple_transitions(&self, triple: [&str; 3]) -> Result<[TransitionPair<S>; 3]> {
        let [i, j, l] = triple;
        let ri = self.triple_ring(triple, i)?;
        let rj = self.triple_ring(triple, j)?;
        let rl = self.triple_ring(triple, l)?;
        Ok([
            self.transition(i, j)?.restrict(&ri, &rj)?,
            self.transition(j, l)?.restrict(&rj, &rl)?,
            self.transition(i, l)?.restrict(&ri, &rl)?,
        ])
    }
}

/// Checks `T_{jl} ∘ T_{ij} = T_{il}` on `X^m ∂/∂X_p` for explicitly given
/// transitions, which must chain on the same rings.
pub fn cocycle_check_pairs<S: Field>(
    ij: &TransitionPair<S>,
    jl: &TransitionPair<S>,
    il: &TransitionPair<S>,
    m: &MultiIndex,
    p: usize,
    r: u32,
) -> Result<bool> {
    let first = transition_l(m, p, ij, r)?;
    let lhs = apply_transition(jl, &first)?;
    let rhs = transition_l(m, p, il, r)?;
    lhs.try_eq(&rhs)
}

/// Cocycle identity for the triple `(i, j, l)` of chart names.
pub fn cocycle_check<S: Field>(atlas: &AtlasSpec<S>, triple: [&str; 3], m: &MultiIndex, p: usize, r: u32) -> Result<bool> {
    let [ij, jl, il] = atlas.triple_transitions(triple)?;
    cocycle_check_pairs(&ij, &jl, &il, m, p, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    fn single(c: &Arc<Chart>, r: u32, terms: Vec<(u32, RingElem)>) -> CurrentElem {
        CurrentElem::from_terms(c, r, terms.into_iter().map(|(e, a)| (LBasis { m: MultiIndex::from([e]), dir: 0 }, a)))
            .unwrap()
    }

    #[test]
    fn projective_pair_values() {
        let atlas = fixtures::projective_line_atlas();
        let tp = atlas.transition("U0", "U1").unwrap();
        let u = RingElem::var(tp.target(), 0).unwrap();
        let inv = u.inverse().unwrap();
        for r in 2..=4 {
            let t1 = transition_l(&MultiIndex::from([1]), 0, &tp, r).unwrap();
            let expect1 = single(tp.target(), r, vec![(1, RingElem::one(tp.target())), (2, inv.clone())]);
            assert_eq!(t1, expect1);
            assert_eq!(transition_via_iso(&MultiIndex::from([1]), 0, &tp, r).unwrap(), expect1);
            let t2 = transition_l(&MultiIndex::from([2]), 0, &tp, r).unwrap();
            let expect2 = single(tp.target(), r, vec![(2, -&inv.pow(2))]);
            assert_eq!(t2, expect2);
            assert_eq!(transition_via_iso(&MultiIndex::from([2]), 0, &tp, r).unwrap(), expect2);
        }
    }

    #[test]
    fn formula_matches_direct_taylor_shift() {
        // Independent evaluation of F(y+Y): expand σ_G(F) directly in y.
        let atlas = fixtures::projective_line_atlas();
        for (a, b) in [("U0", "U1"), ("U0", "U2"), ("U1", "U2"), ("U2", "U0")] {
            let tp = atlas.transition(a, b).unwrap();
            let r = 4;
            let src = tp.source();
            let x = RingElem::var(src, 0).unwrap();
            for e in 1..=3u32 {
                let mut direct = CurrentElem::zero(tp.target(), r);
                for k in 0..=e {
                    let c = sign::<Rational>(e - k) * crate::scalar::binomial::<Rational>(e, k);
                    let gpow = tp.g()[0].pow(e - k).scale(&c);
                    let f = tp.sigma_g().apply(&x.pow(k).try_mul(&tp.h()[0].derive(0).unwrap()).unwrap()).unwrap();
                    for (s, coeff) in jet_of(&f, r).unwrap().without_constant().coeffs() {
                        direct.add_term(LBasis { m: s.clone(), dir: 0 }, gpow.try_mul(coeff).unwrap()).unwrap();
                    }
                }
                assert_eq!(transition_l(&MultiIndex::from([e]), 0, &tp, r).unwrap(), direct, "{a}->{b} m={e}");
            }
        }
    }

    #[test]
    fn validation_errors() {
        let c = fixtures::affine_line();
        let y = fixtures::affine_line();
        let yv = RingElem::var(&y, 0).unwrap();
        let xv = RingElem::var(&c, 0).unwrap();
        let err = TransitionPair::new("a", "b", &c, &y, vec![yv.pow(2)], vec![xv.clone()], vec![], vec![]).unwrap_err();
        assert!(matches!(err, Error::InverseCheckFailed(_)));
        assert!(TransitionPair::identity("a", &c).is_ok());
        let tp = TransitionPair::identity("a", &c).unwrap();
        assert!(matches!(transition_l(&MultiIndex::from([0]), 0, &tp, 2), Err(Error::ZeroMultiIndex)));
    }

    #[test]
    fn identity_acts_trivially() {
        let c = fixtures::c1();
        let tp = TransitionPair::identity("C1", &c).unwrap();
        for m in MultiIndex::all_between(2, 1, 3) {
            for p in 0..2 {
                let t = transition_l(&m, p, &tp, 3).unwrap();
                let expect = CurrentElem::basis(&RingElem::one(&c), 3, LBasis { m: m.clone(), dir: p }).unwrap();
                assert_eq!(t, expect);
                assert_eq!(transition_via_iso(&m, p, &tp, 3).unwrap(), expect);
            }
        }
    }

    #[test]
    fn filtration_and_quotient() {
        let atlas = fixtures::projective_line_atlas();
        let tp = atlas.transition("U0", "U1").unwrap();
        assert!(filtration_check(&tp, &MultiIndex::from([2]), 0, 4).unwrap());
        assert!(jacobian_quotient_check(&tp, &MultiIndex::from([1]), 0, 4).unwrap());
        let expect = single(tp.target(), 3, vec![(1, RingElem::one(tp.target()))]);
        assert_eq!(jacobian_action(&tp, 0, 0, 3).unwrap(), expect);
    }

    #[test]
    fn cocycle_on_projective_line() {
        let atlas = fixtures::projective_line_atlas();
        for m in 1..=3 {
            assert!(cocycle_check(&atlas, ["U0", "U1", "U2"], &MultiIndex::from([m]), 0, 4).unwrap());
        }
        assert!(cocycle_check(&atlas, ["U1", "U1", "U1"], &MultiIndex::from([2]), 0, 3).unwrap());

        // Replacing U0 -> U1 by the naive identification x = u must break it.
        let [_, jl, il] = atlas.triple_transitions(["U0", "U1", "U2"]).unwrap();
        let r0 = atlas.triple_ring(["U0", "U1", "U2"], "U0").unwrap();
        let r1 = atlas.triple_ring(["U0", "U1", "U2"], "U1").unwrap();
        let fake = TransitionPair::new(
            "U0",
            "U1",
            &r0,
            &r1,
            vec![RingElem::var(&r1, 0).unwrap()],
            vec![RingElem::var(&r0, 0).unwrap()],
            vec![],
            vec![],
        )
        .unwrap();
        assert!(!cocycle_check_pairs(&fake, &jl, &il, &MultiIndex::from([1]), 0, 4).unwrap());
    }

    #[test]
    fn two_dimensional_shear() {
        // x1 = y1, x2 = y2 + y1^2 and back.
        let src = fixtures::c1();
        let tgt = crate::chart::validate_chart(crate::chart::ChartSpec::polynomial("C1y", &["y1", "y2"])).unwrap();
        let (x1, x2) = (RingElem::var(&src, 0).unwrap(), RingElem::var(&src, 1).unwrap());
        let (y1, y2) = (RingElem::var(&tgt, 0).unwrap(), RingElem::var(&tgt, 1).unwrap());
        let tp = TransitionPair::new(
            "C1",
            "C1y",
            &src,
            &tgt,
            vec![y1.clone(), &y2 + &y1.pow(2)],
            vec![x1.clone(), &x2 - &x1.pow(2)],
            vec![],
            vec![],
        )
        .unwrap();
        let r = 3;
        for m in MultiIndex::all_between(2, 1, 2) {
            for p in 0..2 {
                let a = transition_l(&m, p, &tp, r).unwrap();
                let b = transition_via_iso(&m, p, &tp, r).unwrap();
                assert_eq!(a, b, "m={m:?} p={p}");
                assert!(filtration_check(&tp, &m, p, r).unwrap());
                if m.degree() == 1 {
                    assert!(jacobian_quotient_check(&tp, &m, p, r).unwrap());
                }
            }
        }
        let back = tp.reverse().unwrap();
        let m = MultiIndex::from([1, 1]);
        let there = transition_l(&m, 0, &tp, r).unwrap();
        let round = apply_transition(&back, &there).unwrap();
        assert_eq!(round, CurrentElem::basis(&RingElem::one(&src), r, LBasis { m, dir: 0 }).unwrap());
    }
}
