//! Laguerre spectral approximation on the half-line.
//!
//! The crate covers generalized Laguerre polynomials and functions
//! ([`basis`]), Gauss-Laguerre and Gauss-Laguerre-Radau rules
//! ([`quadrature`]), truncated expansions ([`projection`]), barycentric
//! interpolation at Laguerre points ([`interpolation`]), coefficient-space
//! differentiation ([`differentiation`]) and the Weeks method for numerical
//! Laplace inversion ([`weeks`]).
//!
//! The [`verify`] module turns the parabolic-region convergence theory into
//! executable checks: contour-integral coefficient oracles, the weighted
//! Cauchy transform of the basis, prefactor constants and root-exponential
//! rate fitting. [`registry`] holds the test functions and Laplace pairs with
//! their singularity metadata, and [`sweep`] produces the error-vs-degree
//! curves consumed by the CLI and the acceptance suite.

pub mod basis;
pub mod differentiation;
pub mod error;
pub mod interpolation;
pub mod projection;
pub mod quadrature;
pub mod registry;
pub mod special;
pub mod sweep;
pub mod verify;
pub mod weeks;

pub use basis::{BasisParams, EvalPoint, Form};
pub use error::{Error, Result};
pub use interpolation::{Interpolant, PointKind};
pub use projection::{Expansion, Weight};
pub use quadrature::{QuadRule, RuleKind};
pub use verify::{FunctionSpec, GrowthClass, Parabola, RateFit};
pub use weeks::{LaplacePair, WeeksParams};
