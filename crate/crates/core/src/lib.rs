//! Common randomness from correlated binary sources over power-constrained
//! Gaussian channels.
//!
//! The crate computes how many nats of shared randomness per source symbol two
//! terminals can agree on when one of them may talk to the other over a noisy
//! channel with a rate budget. It ships:
//!
//! * [`prob`]: discrete information measures and the correlated binary source,
//! * [`channel`]: Gaussian capacities, waterfilling over MIMO eigenmodes, and
//!   the saturation power of the binary source,
//! * [`optimizer`]: a projected primal-dual solver for the constrained
//!   auxiliary-variable program, with a computable equilibrium certificate,
//! * [`oracle`]: slow but trustworthy references (exhaustive grid search,
//!   a one-parameter lower bound family, finite-difference and identity checks),
//! * [`sim`]: a Monte-Carlo simulator of the one-shot agreement protocol,
//! * [`secureid`]: the secure identification rate built on top of the
//!   common-randomness bound over a wiretapped Gaussian channel.
//!
//! `no_std` + `alloc` is supported (disable the default `std` feature); all
//! transcendental math goes through `libm` so results are identical in both
//! configurations.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod channel;
pub mod error;
pub(crate) mod math;
pub mod optimizer;
pub mod oracle;
pub mod prob;
pub mod secureid;
pub mod sim;

pub use error::{CrError, Result};
