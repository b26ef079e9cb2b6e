//! Desk-scale numerical experiments in linear dynamics: orbit and coverage
//! diagnostics, torus subgroup closures, winding-number calculus,
//! supercyclicity-criterion residuals, direct-sum cyclicity, and
//! overflow-free asymptotics.
//!
//! Everything operates on finite truncations of the operators in question;
//! wherever a truncation cannot witness the infinite-dimensional property
//! (supercyclicity above real dimension two, spectra of shifts), the API
//! says so explicitly through assumption flags, certainty tags, and
//! capacity errors rather than silently extrapolating.

pub mod asymptotics;
pub mod criteria;
pub mod cyclicity;
pub mod error;
pub mod linalg;
pub mod logvalue;
pub mod operators;
pub mod orbit;
pub mod torus;
pub mod vector;
pub mod winding;

pub use error::{Error, Result};

// The guide chapters double as doc-tests, so every snippet in the book is
// compiled and run against the current API.
#[doc = include_str!("../../../book/src/overview.md")]
mod guide_overview {}
#[doc = include_str!("../../../book/src/operators.md")]
mod guide_operators {}
#[doc = include_str!("../../../book/src/orbits.md")]
mod guide_orbits {}
#[doc = include_str!("../../../book/src/torus.md")]
mod guide_torus {}
#[doc = include_str!("../../../book/src/winding.md")]
mod guide_winding {}
#[doc = include_str!("../../../book/src/criteria.md")]
mod guide_criteria {}
#[doc = include_str!("../../../book/src/cyclicity.md")]
mod guide_cyclicity {}
#[doc = include_str!("../../../book/src/asymptotics.md")]
mod guide_asymptotics {}
