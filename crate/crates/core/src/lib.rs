//! Sunada-style isospectral magnetic line bundles on graph covers.
//!
//! The crate builds Gassmann pairs of subgroups of finite permutation
//! groups, quotients of voltage-graph covers by them, U(1) connections
//! descended from the cover, and checks that every tensor-power magnetic
//! Schrödinger spectrum (and the quantum Hamiltonian built from it) agrees
//! between the two quotients, both numerically and through an exact
//! transplantation operator.

pub mod cover;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod magnetic;
pub mod perm;
pub mod quantum;
pub mod scenario;

pub use error::{Error, Result};
pub use perm::Permutation;
