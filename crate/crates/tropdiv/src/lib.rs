//! Exact-arithmetic divisor theory on metric graphs: chip-firing and reduced
//! divisors, divisor rank, tropical Jacobians, free double covers, and
//! tropical Prym varieties.
//!
//! Everything is computed over exact rationals. The crate is organized around
//! the objects of the theory:
//!
//! - [`graph`]: metric multigraphs, models and refinements, genus,
//!   spanning trees, complement components.
//! - [`divisor`]: divisors, piecewise linear functions, `div`, the canonical
//!   divisor, and set-firing.
//! - [`reduce`]: Dhar's burning algorithm, q-reduced representatives,
//!   equivalence and effectivity tests.
//! - [`rank`]: divisor rank and the Riemann-Roch residual.
//! - [`jacobian`]: homology bases, period matrices, Abel-Jacobi coordinates,
//!   torus equality, and the Kirchhoff identity.
//! - [`cover`]: free double covers, their enumeration, norm and pullback.
//! - [`prym`]: Prym kernel and parity, relative connectivity, weights, and
//!   the Abel-Prym fiber computation.
//! - [`io`] and [`fixtures`]: the JSON file formats and the built-in graphs.
//! - [`checks`]: seeded verification suites used by the CLI and the
//!   acceptance tests.
//!
//! See the `examples/` directory for one runnable walk-through per
//! capability, and the `tropdiv` binary for the command-line interface.

pub mod checks;
pub mod cli;
pub mod cover;
pub mod divisor;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod jacobian;
pub mod linalg;
pub mod prym;
pub mod rank;
pub mod rational;
pub mod reduce;

pub use error::{Error, Result};
pub use rational::Rational;
