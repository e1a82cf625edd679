//! Magnitude of metric spaces.
//!
//! The crate computes the magnitude of finite (generalized) metric spaces
//! exactly, through the similarity matrix `ζ = e^{-d}`, and of compact
//! subsets of ℝ, ℓ₁ᴺ and ℓ₂ᴺ approximately, through nested finite grids
//! whose magnitudes increase toward the magnitude of the region.
//!
//! - [`metric`]: building, validating and combining finite spaces.
//! - [`engine`]: weightings, magnitude, Möbius matrices, positive
//!   definiteness and the closed forms for structured spaces.
//! - [`function`]: magnitude functions `t ↦ |tA|`, their singularities,
//!   limits and growth.
//! - [`compact`]: intervals, cuboids, balls and polygons.
//! - [`commands`]: the command layer behind the `magnitude` binary.
//!
//! ```
//! use metric_magnitude::{engine, spaces};
//!
//! let two = spaces::uniform(2, 1.0);
//! let m = engine::magnitude(&two).magnitude.unwrap();
//! assert!((m - (1.0 + 0.5f64.tanh())).abs() < 1e-12);
//! ```

pub mod commands;
pub mod compact;
pub mod engine;
mod error;
pub mod function;
pub mod io;
mod isometry;
pub mod linalg;
pub mod metric;
pub mod quadrature;
pub mod region;
pub mod spaces;
pub mod verify;

pub use engine::{magnitude, MagnitudeResult, SimilaritySystem, SolverOptions, Status};
pub use error::{Error, Result};
pub use metric::{FiniteMetricSpace, Norm, ProductMetric};
pub use region::RegionSpec;
