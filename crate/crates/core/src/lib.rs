//! Exact verification toolkit for the Artin–Mumford curve
//! `(x^p - x)(y^p - y) = c` over small prime fields: field and polynomial
//! arithmetic, its automorphism group, Artin–Schreier cover invariants,
//! point counting with zeta functions, and an end-to-end check pipeline.

pub mod ascover;
pub mod curve;
pub mod gf;
pub mod grp;
pub mod pipeline;
pub mod poly;
pub mod zeta;

/// Default cap on field-element iterations for exhaustive work.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
