//! User scheduling for a wireless-powered decode-and-forward relay.
//!
//! `M` source–destination pairs share one relay that harvests energy from the
//! source signals (power splitting) and spends it forwarding to the
//! destinations. The crate provides
//!
//! * the channel and harvesting model ([`model`]),
//! * the scheduling policies ([`schedule`]),
//! * closed-form outage probabilities ([`analytic`]) built on
//!   [`special`] functions and adaptive [`quad`]rature,
//! * a reproducible, sharded Monte Carlo engine ([`montecarlo`]),
//! * figure configurations ([`figures`]), the acceptance checks
//!   ([`validation`]) and the `swipt` command line ([`cli`]).

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analytic;
pub mod cli;
pub mod error;
pub mod figures;
pub mod model;
pub mod montecarlo;
pub mod quad;
pub mod rng;
pub mod schedule;
pub mod special;
pub mod validation;

pub use error::{Error, Result};
