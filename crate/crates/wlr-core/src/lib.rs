//! Wigner-type local-realist (WLR) inequalities for N-qubit systems.
//!
//! The crate has four layers:
//!
//! * [`qcore`] — pure and mixed N-qubit states, real-plane measurement
//!   bases, and Born-rule behavior tables.
//! * [`inequalities`] — every inequality family as an explicit signed list
//!   of probability terms, plus Svetlichny correlator functionals.
//! * [`lhv`] — the exact classical side: deterministic bipartition-local
//!   strategies, exact vertex maxima, and linear-programming membership in
//!   the bipartition-local polytope.
//! * [`search`] — seeded multi-start angle optimization, certification of
//!   nonlocality across every bipartition, visibility thresholds, and
//!   parameter scans.
//!
//! # Bit conventions
//!
//! Party 1 occupies the most significant of the N low bits of a basis
//! index, matching left-to-right ket notation: for N = 3 the index
//! `0b100` is |100⟩, party 1 in state |1⟩. Setting vectors and outcome
//! vectors use the same layout; outcome bit 0 means `+` and bit 1 means
//! `-`. [`inequalities::Bipartition`] masks use the same party-to-bit
//! map.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything here is safe to share across threads.
//!
//! The crate is `no_std`-compatible (with `alloc`) when built without the
//! default `std` feature; float transcendentals then come from `libm`.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod inequalities;
pub mod lhv;
mod math;
pub mod qcore;
pub mod search;

pub use error::Error;

/// Largest supported party count (dense state vectors of dimension 2^10).
pub const MAX_PARTIES: usize = 10;

/// A `Result` specialized to this crate's [`Error`].
pub type Result<T> = core::result::Result<T, Error>;
