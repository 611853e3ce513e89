//! Carlitz rank and complete mappings over small finite fields.
//!
//! * [`gf`]: arithmetic in GF(p^r) with the inversion map `x^{q-2}`, the
//!   quadratic character and the absolute trace.
//! * [`permpoly`]: polynomials and value tables of self-maps, permutation
//!   tests, interpolation, value sets and linearity.
//! * [`carlitz`]: Carlitz representations, convergents, poles and the
//!   Carlitz rank search.
//! * [`analysis`]: complete-mapping detection, value-set bounds and
//!   formulas, proof censuses and exhaustive searches.
//! * [`repro`]: the end-to-end reproduction matrix used by the CLI and the
//!   acceptance tests.

pub mod analysis;
pub mod carlitz;
pub mod error;
pub mod gf;
pub mod permpoly;
pub mod repro;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement};
pub use permpoly::{Poly, ValueTable};
