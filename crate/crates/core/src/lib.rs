//! Two-dimensional Gaussian Q-function Q(x, y; rho) = P(U > x, V > y) for a
//! standard bivariate normal pair with correlation rho.
//!
//! Four independent evaluation routes are provided:
//!
//! * [`oracle`]: quadrature references (reduced single integral, direct
//!   double integral, Craig forms) and the exact product at rho = 0,
//! * [`series`]: the exact double series in incomplete gamma functions,
//! * [`approx`]: two closed-form approximations built from exponential
//!   models of the one-dimensional Q function,
//!
//! and [`analysis`] measures the approximations against the oracles.

pub mod analysis;
pub mod approx;
pub mod cli;
mod error;
pub mod oracle;
pub mod quad;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use oracle::{EvalPoint, QuadratureSpec};
pub use series::{SeriesResult, SeriesSpec};
