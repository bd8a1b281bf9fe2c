//! Exact integer linear algebra over finite group actions: Galois lattices,
//! flasque/coflasque resolutions, group cohomology, and the arithmetic
//! invariants of reductive group data (algebraic fundamental group, Picard
//! group, unramified Brauer group, Sha-omega groups).
//!
//! All arithmetic is arbitrary precision; every value is immutable after
//! construction and safe to share across threads.

pub mod zlinalg;
pub mod groups;
pub mod gmod;
pub mod cohom;
pub mod resolve;
pub mod complexes;
pub mod reductive;
pub mod cli;

mod error;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
