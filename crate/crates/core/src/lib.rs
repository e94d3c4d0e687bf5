//! Exact engine for set-valued risk measures on finite scenario spaces.
//!
//! Values of risk measures are finite unions of closed polyhedra in the
//! coordinates of the eligible subspace `M`, computed with arbitrary-precision
//! rationals. There is no floating point anywhere in the kernel, so every
//! axiom check is an exact set comparison.

pub mod cones;
pub mod demo;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod laws;
pub mod linalg;
pub mod measures;
pub mod par;
pub mod rational;
pub mod represent;
pub mod scenario;

pub use error::{Error, Result};
pub use rational::Q;
