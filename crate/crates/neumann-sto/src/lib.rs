//! Neumann-expansion building blocks for two-centre electron-repulsion
//! integrals over Slater-type orbitals.
//!
//! The crate evaluates the ξ-side basic integrals `L_μ(α)` and
//! `W_μ(p; α₁, α₂)` through large-order expansions in `1/(μ + ½)`, together
//! with the special functions they are assembled from, the η-side integrals
//! needed to sum the full Neumann series, and an MPFR-backed quadrature
//! oracle used to certify every double-precision path.
//!
//! ```
//! use neumann_sto::{lmu_engine, ExpansionSettings};
//!
//! let out = lmu_engine::l_large_order(30, 0.1, &ExpansionSettings::default()).unwrap();
//! assert!(out.converged);
//! assert!((out.value - 9.72733864877071e-4).abs() < 1e-17);
//! ```

pub mod cli;
pub mod error;
pub mod hp_oracle;
pub mod legendre;
pub mod lmu_engine;
pub mod neumann_driver;
pub mod quadrature;
pub mod series;
pub mod special_fn;
pub mod wmu_engine;

pub use error::{Error, Result};
pub use series::{ExpansionSettings, SeriesOutcome};
