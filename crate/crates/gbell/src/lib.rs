//! Geometrical Bell inequalities for N qudit GHZ subsystems.
//!
//! The quantum correlations of a GHZ state, arranged over a finite grid of
//! measurement settings, form a vector whose squared norm exceeds its
//! overlap with every local-hidden-variable (LHV) assignment; the ratio of
//! the two is the violation ratio studied throughout this crate. The
//! pipeline is:
//!
//! 1. [`scenario`] fixes N, d, L, the GHZ family, and the outcome strategy;
//! 2. [`oracle`] computes correlations densely from matrix definitions;
//! 3. [`kernels`] provides the closed-form correlation functions of the
//!    settings-angle sum, validated against the oracle;
//! 4. [`grid`] materializes correlation tensors over the settings grid;
//! 5. [`lhv`] builds deterministic local models and optimizes the overlap,
//!    yielding violation ratios;
//! 6. [`asymptotics`] evaluates the closed-form L -> infinity limits;
//! 7. [`tables`] and [`verify`] reproduce the reference tables and run the
//!    self-check suite used by the command-line tool.
//!
//! See the `examples/` directory for end-to-end walkthroughs of each
//! capability.

pub mod asymptotics;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod lhv;
pub mod oracle;
pub mod scenario;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
pub use lhv::search::{violation_ratio, Method};
pub use lhv::{LhvModel, ViolationReport};
pub use scenario::{OffsetConvention, Scenario, StateKind, Strategy};
