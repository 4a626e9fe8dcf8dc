//! Exact and asymptotic character ratios of the symmetric group at cycles, and
//! the mixing behaviour of the random `k`-cycle walk they control.
//!
//! * [`partitions`]: partitions, Frobenius coordinates, cycle types.
//! * [`characters`]: exact characters, dimensions and character tables.
//! * [`asymptotics`]: main terms and bound regimes for ratios at `k`-cycles.
//! * [`mixing`]: exact walk distributions, total variation and its bounds.
//! * [`walk`]: Monte Carlo simulation of the walk.
//! * [`verify`]: named invariant suites.

pub mod arith;
pub mod asymptotics;
pub mod characters;
pub mod error;
pub mod mixing;
pub mod partitions;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
