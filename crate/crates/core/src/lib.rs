//! Exact Batalin-Vilkovisky calculus in finite dimensions.
//!
//! * [`algebra`]: graded superfunctions with exact Gaussian-rational,
//!   Laurent-in-ħ coefficients.
//! * [`operators`]: the BV Laplacian, the Schouten-Nijenhuis bracket, the
//!   twisted Laplacian and randomized identity checks.
//! * [`gauge`]: BV actions of linear gauge models and master-equation checks.
//! * [`geom`]: differential forms and polyvector fields on boxes in ℝᴺ,
//!   the geometric Laplacian and numeric BV integrals over parametrized
//!   surfaces.

pub mod algebra;
pub mod error;
pub mod gauge;
pub mod geom;
pub mod operators;

pub use error::{Error, Result};
