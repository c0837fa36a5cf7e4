//! Exact counting and numerical verification for integer and rational
//! points on the cone `x0*y0 + x1*y1 + x2*y2 = 0`.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] sieves totient/Möbius tables and the divisor-pair table `r(n)`.
//! * [`closed_forms`] evaluates the harmonic-number identities exactly.
//! * [`counts`] counts box solutions `M(X, Y)`, height-bounded counts and
//!   the coordinate-hyperplane contributions, each with a naive oracle.
//! * [`asymptotics`] evaluates main terms and constants and compares them
//!   with exact counts.
//! * [`circle`] evaluates the exponential sums behind the major/minor arc
//!   dissection.
//! * [`special`] covers the integral sine and the triple-sine integrals.
//! * [`hyperbola`] assembles the quadratic-sample hyperbola bounds.

pub mod arith;
pub mod asymptotics;
pub mod calibration;
pub mod circle;
pub mod closed_forms;
pub mod counts;
mod error;
pub mod hyperbola;
pub mod quadrature;
pub mod special;

pub use calibration::Calibration;
pub use error::{Error, Result};
