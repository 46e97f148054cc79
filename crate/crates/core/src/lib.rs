//! Exact ultrametric seminorms over explicit valued fields.
//!
//! Norms are carried in base-2 log scale as [`LogValue`]s; every inequality
//! is decided exactly. The crate covers coefficient fields, polynomials and
//! rational functions with Newton polygons, Gauss valuations and norm
//! profiles over radius intervals, three Banach-ring models, and the forge:
//! lazily evaluated counterexample sequences with exact certificates.

pub mod cli;
pub mod error;
pub mod fields;
pub mod forge;
pub mod gauss;
pub mod logval;
pub mod models;
pub mod ratfun;
pub mod text;

use num_rational::{BigRational, Rational64};

pub use error::{Error, Result};
pub use fields::{FieldDescriptor, FieldElement, Residue, ResidueKind};
pub use gauss::{GaussPoint, NormProfile, RadiusInterval};
pub use logval::{LogValueOf, ValueGroup};
pub use ratfun::{Poly, RatFun};

/// Log values with arbitrary-precision rational parts.
pub type LogValue = LogValueOf<BigRational>;

/// Log values with machine-word rational parts, for small fixed-size tables.
pub type LogValue64 = LogValueOf<Rational64>;
