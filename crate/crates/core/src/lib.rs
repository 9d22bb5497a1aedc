//! Exact computations with jets of functions and vector fields on étale
//! charts.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: multi-indices and sparse polynomials over a [`Field`];
//! * [`chart`]: chart rings `A` (polynomial, localized, algebraic) and ring maps;
//! * [`vfield`]: the Lie algebra `V = ⊕ A ∂/∂x_i`;
//! * [`jet`]: truncated jets `A⊗A / Δ^{k+1}`, `δ(f)` and the Taylor identities;
//! * [`jet_field`]: jets of vector fields with the smash-product bracket;
//! * [`lplus`]: the truncated Lie algebra `L₊`, `V ⋉ (A⊗L₊)` and the maps φ, ψ;
//! * [`envalg`]: differential operators, PBW straightening in `U(L₊)` and
//!   the map from `AV` to `D ⊗ U(L₊)`;
//! * [`atlas`]: chart transitions of the `L₊`-bundle, computed two ways;
//! * [`io`]: expression parsing, chart/atlas files, reports and suites.
//!
//! Every algebraic type is generic over the coefficient field with
//! [`Rational`] as the default; the aliases below fix it to `Q`.

pub mod arith;
pub mod atlas;
pub mod chart;
pub mod envalg;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod jet;
pub mod jet_field;
pub mod lplus;
pub mod scalar;
pub mod vfield;

pub use arith::{MultiIndex, Vars};
pub use error::{Error, Result};
pub use scalar::{Field, Rational};

/// Polynomials over `Q`.
pub type QPoly = arith::Poly<Rational>;
/// Polynomials over `f64`.
pub type FPoly = arith::Poly<f64>;
pub type QChart = chart::Chart<Rational>;
pub type QRingElem = chart::RingElem<Rational>;
pub type QVectorField = vfield::VectorField<Rational>;
pub type QJet = jet::Jet<Rational>;
