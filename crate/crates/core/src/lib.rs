//! Divisor complexes of the integers.
//!
//! The simplicial complex Δ_n has one face per squarefree k ≤ n (the set of
//! primes dividing k); the cell complex Δ̃_n has one cell per integer k ≤ n,
//! of dimension Ω(k) − 1. Their reduced Euler characteristics are −M(n) and
//! −L(n). This crate computes their Betti numbers in closed form and by
//! exact integer homology, and checks the surrounding identities and
//! inequalities numerically.

pub mod asymptotics;
pub mod betti;
pub mod complex;
pub mod error;
pub mod number;
pub mod shadow;
pub mod tables;
pub mod verify;

pub use betti::{BettiVector, FVector, Method};
pub use error::{Error, Result};
pub use tables::Tables;
