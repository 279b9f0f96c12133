//! Quasispin pairing models and their quantum invariants.
//!
//! The crate builds seniority-zero pairing Hamiltonians in the quasispin
//! representation, assembles the commuting invariant families of the two
//! integrable limits (rational Gaudin magnets for reduced pairing, the
//! level-resolved invariants of the degenerate limit), solves the associated
//! Bethe ansatz equations numerically, and verifies every closed-form
//! eigenvalue against a dense exact-diagonalization oracle at desk scale.

pub mod bethe;
pub mod error;
pub mod hilbert;
pub mod operators;
pub mod oracle;
pub mod poly;
pub mod sparse;
pub mod spectrum;

pub use error::{Error, Result};
