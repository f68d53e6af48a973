//! Exact computer algebra for D0-branes presented as matrix-tuple representations
//! of coordinate algebras: image ideals, fuzzy-point decompositions, Chan–Paton
//! modules, deformations, and classical and quantum spectral curves.
//!
//! Everything exact runs over the Gaussian rationals `Q(i)`; only support
//! coordinates that are not in `Q(i)` go through a double-precision layer.

pub mod deform;
pub mod error;
pub mod linalg;
pub mod morphism;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod spectral;
pub mod targets;

pub use error::{Error, ParseError, Result};
pub use linalg::ExactMatrix;
pub use scalar::{ApproxComplex, GaussianRational};

/// Engine version recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
