//! Exact arithmetic substrate: multi-indices and sparse polynomials.

mod multi_index;
mod poly;

pub use multi_index::MultiIndex;
pub use poly::{vars, Poly, Vars};
