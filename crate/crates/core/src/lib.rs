//! Combinatorics, symmetric functions and stochastic processes around the
//! Z-measure diffusion on the Thoma simplex.
//!
//! The crate is organised bottom-up:
//!
//! - [`partition`]: integer partitions, Young-diagram geometry, enumeration.
//! - [`graph`]: Kingman and Jack branching graphs, dimensions, down chains.
//! - [`symfunc`]: graded symmetric functions, Schur and Jack bases, the
//!   specialization Φ_ω onto the Thoma simplex.
//! - [`zmeasure`]: the Z-partition structure, up and up-down chains.
//! - [`coalescent`]: death-process coefficients d_mn, d_n and their oracle.
//! - [`dual`]: the diffusion pre-generator on φ-polynomials, the duality
//!   identity at ϑ = 1 and the partition-valued dual jump process.
//! - [`density`]: the kernels K_n and the two series for the transition density.
//!
//! Exact work uses [`rational::Rational`] (arbitrary-precision rationals);
//! everything touching exponentials or real Thoma points is `f64`.

pub mod coalescent;
pub mod density;
pub mod dual;
pub mod error;
pub mod graph;
pub mod partition;
pub mod rational;
pub mod stats;
pub mod symfunc;
pub mod thoma;
pub mod zmeasure;

pub use error::{Error, Result};
pub use graph::{BranchingGraph, GraphKind};
pub use partition::{Cell, Partition};
pub use rational::Rational;
pub use thoma::ThomaPoint;
pub use zmeasure::ZParams;
