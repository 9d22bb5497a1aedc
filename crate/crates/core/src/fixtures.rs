//! The standard charts used throughout the tests and verification suites.

use std::sync::Arc;

use crate::arith::{vars, MultiIndex, Poly};
use crate::atlas::{AtlasSpec, TransitionPair, TripleOverlap};
use crate::chart::{validate_chart, AlgGen, Chart, ChartSpec, RingElem};
use crate::scalar::Rational;

/// `Q[x]`.
pub fn affine_line() -> Arc<Chart> {
    validate_chart(ChartSpec::polynomial("A1", &["x"])).expect("affine line")
}

/// `C1 = Q[x1, x2]`.
pub fn c1() -> Arc<Chart> {
    validate_chart(ChartSpec::polynomial("C1", &["x1", "x2"])).expect("C1")
}

/// `C2 = Q[x, 1/x]`.
pub fn c2() -> Arc<Chart> {
    let v = vars(["x"]);
    validate_chart(ChartSpec {
        name: "C2".into(),
        params: vec!["x".into()],
        alg_gens: vec![],
        denominator: Poly::var(v, 0).unwrap(),
    })
    .expect("C2")
}

/// `C3`: the curve `y^2 = x^3 - x + 1`, localized at `y`.
pub fn c3() -> Arc<Chart> {
    let v = vars(["x", "y"]);
    let x = Poly::<Rational>::var(v.clone(), 0).unwrap();
    let rhs = &(&x.pow(3) - &x) + &Poly::one(v.clone());
    validate_chart(ChartSpec {
        name: "C3".into(),
        params: vec!["x".into()],
        alg_gens: vec![AlgGen { name: "y".into(), degree: 2, rhs }],
        denominator: Poly::var(v, 1).unwrap(),
    })
    .expect("C3")
}

/// The three standard charts `C1`, `C2`, `C3`.
pub fn standard_charts() -> Vec<Arc<Chart>> {
    vec![c1(), c2(), c3()]
}

/// One-parameter chart `Q[v, 1/d(v)]` with `d` given by its coefficients in
/// ascending powers (`[1]` for no denominator).
pub fn line_chart(name: &str, var: &str, denominator: &[i64]) -> Arc<Chart> {
    let v = vars([var]);
    let d = Poly::from_terms(
        v,
        denominator.iter().enumerate().map(|(e, &c)| (MultiIndex::from([e as u32]), Rational::from_integer(c.into()))),
    );
    validate_chart(ChartSpec { name: name.into(), params: vec![var.into()], alg_gens: vec![], denominator: d })
        .expect("line chart")
}

/// The projective line covered by `U0 = Spec Q[x]`, `U1 = Spec Q[u]` with
/// `u = 1/x`, and `U2 = Spec Q[w]` with `w = 1/(x-1)`.
pub fn projective_line_atlas() -> AtlasSpec {
    let u0 = line_chart("U0", "x", &[1]);
    let u1 = line_chart("U1", "u", &[1]);
    let u2 = line_chart("U2", "w", &[1]);

    let var = |c: &Arc<Chart>| RingElem::var(c, 0).unwrap();
    let one = |c: &Arc<Chart>| RingElem::one(c);
    let inv = |e: RingElem| e.inverse().unwrap();

    let s01 = line_chart("U0|U1:x", "x", &[0, 1]);
    let t01 = line_chart("U0|U1:u", "u", &[0, 1]);
    let tp01 = TransitionPair::new("U0", "U1", &s01, &t01, vec![inv(var(&t01))], vec![inv(var(&s01))], vec![], vec![])
        .expect("U0 -> U1");

    let s02 = line_chart("U0|U2:x", "x", &[-1, 1]);
    let t02 = line_chart("U0|U2:w", "w", &[0, 1]);
    let g02 = &one(&t02) + &inv(var(&t02));
    let h02 = inv(&var(&s02) - &one(&s02));
    let tp02 = TransitionPair::new("U0", "U2", &s02, &t02, vec![g02], vec![h02], vec![], vec![]).expect("U0 -> U2");

    let s12 = line_chart("U1|U2:u", "u", &[-1, 1]);
    let t12 = line_chart("U1|U2:w", "w", &[1, 1]);
    let g12 = &var(&t12) * &inv(&var(&t12) + &one(&t12));
    let h12 = -&(&var(&s12) * &inv(&var(&s12) - &one(&s12)));
    let tp12 = TransitionPair::new("U1", "U2", &s12, &t12, vec![g12], vec![h12], vec![], vec![]).expect("U1 -> U2");

    let triple = TripleOverlap {
        charts: ["U0".into(), "U1".into(), "U2".into()],
        rings: [
            line_chart("U0|U1|U2:x", "x", &[0, -1, 1]),
            line_chart("U0|U1|U2:u", "u", &[0, -1, 1]),
            line_chart("U0|U1|U2:w", "w", &[0, 1, 1]),
        ],
    };
    AtlasSpec {
        name: "P1".into(),
        charts: vec![u0, u1, u2],
        transitions: vec![tp01, tp02, tp12],
        triples: vec![triple],
    }
}
