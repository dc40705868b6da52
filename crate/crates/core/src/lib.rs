//! Exact dyadic nets over a countable basis, certified rounding onto them,
//! bounded block-sequence games with a discrete-to-continuous strategy
//! adapter, and mod-k disjointification of index sets.
//!
//! All arithmetic is exact: coefficients are arbitrary-precision rationals
//! and every bound that a construction promises is checked before a result
//! is returned.

pub mod cli;
pub mod combinatorics;
pub mod config;
pub mod error;
pub mod game;
pub mod net;
pub mod norm;
pub mod scalar;
pub mod tolerance;
pub mod transfer;
pub mod vector;
pub mod verify;

pub use error::{Error, Player, Result};
pub use net::NetConfig;
pub use norm::{NormKind, NormPlugin, NormValue};
pub use scalar::{Dyadic, Rational};
pub use tolerance::ToleranceSequence;
pub use vector::{BlockVector, FiniteBlockSequence};
