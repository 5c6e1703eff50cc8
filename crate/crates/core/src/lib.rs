//! Symmetry verification and closed-form cross-checks for the axially
//! loaded Euler–Bernoulli beam with spatially varying stiffness, mass and
//! tension.
//!
//! - [`jets`]: exact truncated derivative arithmetic.
//! - [`beam_model`]: coefficients, configs, closed-form solutions and the
//!   PDE residual.
//! - [`symmetry`]: determining-equation residuals for candidate generators.
//! - [`catalog`]: the known closed-form families.
//! - [`reduction`]: invariant profiles, separation constants, temporal ODE.
//! - [`fdsolver`]: method-of-lines solver for clamped-free beams.

pub mod beam_model;
pub mod catalog;
pub mod fdsolver;
pub mod jets;
pub mod quadrature;
pub mod reduction;
pub mod symmetry;
