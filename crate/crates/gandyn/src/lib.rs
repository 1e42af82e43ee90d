//! Numerical laboratory for two-player GAN gradient dynamics.
//!
//! The crate is organized around five subsystems:
//!
//! - [`numkit`] — self-contained dense linear algebra and probability
//!   kernels sized for small systems (Kronecker/vectorization calculus,
//!   symmetric and general eigenproblems, Lyapunov solves, Gaussian
//!   moment formulas, Gauss quadrature).
//! - [`losses`] — the concave outer function `f` of the GAN objective
//!   with exact derivatives.
//! - [`systems`] — concrete two-player dynamical systems (linear-quadratic
//!   Gaussian GANs, the 2-D uniform toy system, Dirac/linear and
//!   feature-linear counterexamples, redundant reparametrizations).
//! - [`dynamics`] — adaptive and fixed-step integration, discrete
//!   simultaneous-gradient stepping, event detection, field transforms
//!   (gradient regularizer, 1-unrolled lookahead), rate fitting.
//! - [`stability`] — equilibrium Jacobians, Hurwitz classification,
//!   equilibrium-subspace projection, eigenvalue bounds, and Lyapunov
//!   certificates.
//!
//! The [`acceptance`] module packages the end-to-end verification suite
//! that the `gandyn acceptance` subcommand and the `acceptance`
//! integration test both run.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod losses;
pub mod numkit;
pub mod stability;
pub mod systems;

pub use error::{Error, Result};

/// Artifact version stamped into output-file headers.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
