//! Discrete complex analysis on lattice strips and slit-strips.
//!
//! The lattice side covers the propagation operator and its explicit
//! eigenbasis, pole functions with prescribed singular parts, and the
//! `Im ∫ F²` machinery. The [`continuum`] module evaluates the matching
//! scaling limits, and [`harness`] compares the two.

pub mod analysis;
pub mod continuum;
pub mod error;
pub mod field;
pub mod geometry;
pub mod harmonic;
pub mod harness;
pub mod index;
pub mod linalg;
pub mod output;
pub mod slit;
pub mod space;
pub mod strip;

pub use error::{Error, Result};
pub use field::EdgeField;
pub use geometry::{EdgeId, StripKind, StripSpec, Window};
pub use index::ModeIndex;
pub use space::{inner_product, reflect, CrossSectionFn};
pub use strip::{SpectralBasis, SpectralMode};
