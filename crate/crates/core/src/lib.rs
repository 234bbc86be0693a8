//! Finite-instance models of indexed posets of predicates over a base
//! category ("doctrines"), together with the free constructions that add
//! quotients, comprehensions and diagonals to them, and brute-force oracles
//! that check the relevant universal properties on declared finite fragments.
//!
//! Everything in this crate is deterministic: structure is chosen, not
//! searched (except inside oracles), morphism equality is canonical payload
//! equality, and all enumerations run in a fixed order under explicit
//! budgets. The crate is `no_std`-compatible (with `alloc`); IO, file
//! formats and the command line live in the companion `eqcat-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod completions;
pub mod constructions;
pub mod corpus;
pub mod doctrine;
pub mod error;
pub mod kernel;
pub mod lattice;
pub mod oracle;
pub mod topology;

pub use error::{Error, Result};
