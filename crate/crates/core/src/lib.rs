//! Analysis of vectorial Boolean functions over GF(2^n).
//!
//! The crate is organized around an exhaustive value-table representation of
//! (n,n)-functions ([`vbf::Vbf`]) and provides:
//!
//! * exact field arithmetic with discrete-log acceleration ([`gf2n`]),
//! * exact Walsh spectra and their plain/twisted moments ([`spectral`]),
//! * difference distribution tables, APN and partial-APN verdicts
//!   ([`differential`]),
//! * executable checks for the moment identities relating a function to its
//!   single-point modifications ([`identities`]),
//! * family-level 0-APN criteria for monomials, trace classes and binomials
//!   ([`families`]),
//! * exhaustive reproduction searches over power maps and polynomial spaces
//!   ([`search`]).
//!
//! All spectral and counting arithmetic is exact integer arithmetic; no
//! floating point is used anywhere.

pub mod differential;
mod error;
pub mod families;
pub mod gf2n;
pub mod identities;
pub mod search;
pub mod spectral;
pub mod vbf;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
