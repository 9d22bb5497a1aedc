//! Vector fields `V = ⊕ A ∂/∂x_i` on a chart, in the coordinate frame.

use std::fmt;
use std::sync::Arc;

use crate::chart::{Chart, RingElem};
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

#[derive(Clone)]
pub struct VectorField<S: Field = Rational> {
    chart: Arc<Chart<S>>,
    coeffs: Vec<RingElem<S>>,
}

impl<S: Field> VectorField<S> {
    pub fn new(chart: &Arc<Chart<S>>, coeffs: Vec<RingElem<S>>) -> Result<Self> {
        if coeffs.len() != chart.n() {
            return Err(Error::DimensionMismatch { expected: chart.n(), found: coeffs.len() });
        }
        for c in &coeffs {
            // Mismatch surfaces as an error from the ring layer.
            c.try_add(&RingElem::zero(chart))?;
        }
        Ok(VectorField { chart: chart.clone(), coeffs })
    }

    pub fn zero(chart: &Arc<Chart<S>>) -> Self {
        VectorField { chart: chart.clone(), coeffs: vec![RingElem::zero(chart); chart.n()] }
    }

    /// `f ∂/∂x_i`.
    pub fn coordinate(chart: &Arc<Chart<S>>, i: usize, f: RingElem<S>) -> Result<Self> {
        if i >= chart.n() {
            return Err(Error::IndexOutOfRange { index: i, len: chart.n() });
        }
        let mut v = Self::zero(chart);
        v.coeffs[i] = f;
        Self::new(chart, v.coeffs)
    }

    pub fn chart(&self) -> &Arc<Chart<S>> {
        &self.chart
    }

    pub fn coeffs(&self) -> &[RingElem<S>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingElem::is_zero)
    }

    /// `v(f) = sum_i v_i ∂f/∂x_i`.
    pub fn apply(&self, f: &RingElem<S>) -> Result<RingElem<S>> {
        let mut acc = RingElem::zero(&self.chart);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.try_add(&c.try_mul(&f.derive(i)?)?)?;
        }
        Ok(acc)
    }

    /// `[v, w]_j = v(w_j) - w(v_j)`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let coeffs = (0..self.chart.n())
            .map(|j| Ok(&self.apply(&other.coeffs[j])? - &other.apply(&self.coeffs[j])?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.chart, coeffs)
    }

    /// Left multiplication by a function.
    pub fn scale(&self, a: &RingElem<S>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| a.try_mul(c)).collect::<Result<Vec<_>>>()?;
        Self::new(&self.chart, coeffs)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.try_add(b)).collect::<Result<Vec<_>>>()?;
        Self::new(&self.chart, coeffs)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.try_sub(b)).collect::<Result<Vec<_>>>()?;
        Self::new(&self.chart, coeffs)
    }
}

impl<S: Field> PartialEq for VectorField<S> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

impl<S: Field> fmt::Display for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
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

impl<S: Field> fmt::Debug for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    #[test]
    fn bracket_examples() {
        let c = fixtures::affine_line();
        let x = RingElem::var(&c, 0).unwrap();
        let d = VectorField::coordinate(&c, 0, RingElem::one(&c)).unwrap();
        let xd = VectorField::coordinate(&c, 0, x.clone()).unwrap();
        assert_eq!(d.bracket(&xd).unwrap(), d);
        assert_eq!(xd.apply(&x.pow(2)).unwrap(), x.pow(2).scale(&rat(2, 1)));
        assert!(d.apply(&RingElem::one(&c)).unwrap().is_zero());

        let c2 = fixtures::c1();
        let x1 = RingElem::var(&c2, 0).unwrap();
        let x2 = RingElem::var(&c2, 1).unwrap();
        let a = VectorField::coordinate(&c2, 1, x1.clone()).unwrap();
        let b = VectorField::coordinate(&c2, 0, x2.clone()).unwrap();
        let expect = VectorField::new(&c2, vec![x1, -&x2]).unwrap();
        assert_eq!(a.bracket(&b).unwrap(), expect);
    }

    #[test]
    fn elliptic_bracket() {
        // Oracle: [d, y d] = d(y) d, with 2 y d(y) = 3x^2 - 1.
        let c = fixtures::c3();
        let x = RingElem::var(&c, 0).unwrap();
        let y = RingElem::var(&c, 1).unwrap();
        let d = VectorField::coordinate(&c, 0, RingElem::one(&c)).unwrap();
        let yd = VectorField::coordinate(&c, 0, y.clone()).unwrap();
        let br = d.bracket(&yd).unwrap();
        let lhs = &br.coeffs()[0] * &y.scale(&rat(2, 1));
        assert_eq!(lhs, &x.pow(2).scale(&rat(3, 1)) - &RingElem::one(&c));
    }
}
