//! Numerical core for functional market modeling.
//!
//! The crate is `no_std` and only needs `alloc`. Every routine is a pure
//! function of its inputs; nothing here touches the filesystem or the clock.
//!
//! Modules follow the life of an exchange:
//!
//! * [`exchange`]: price curves from a frame of reference, capital and the
//!   (maturity-adjusted) growth condition.
//! * [`valuation`]: payoff, capacity-weighted prospect values, organizational
//!   capacity and project value.
//! * [`bid`]: doubly stochastic expectation matrices, their Birkhoff
//!   decomposition and the budgets, bounds and thresholds built on it.
//! * [`industrial`]: block expansion of a chosen solution, block-preserving
//!   decomposition, split operators and the externality metric.
//! * [`dynamics`]: speculative, equilibrium and out-of-equilibrium market
//!   dynamics, including the four canonical curves.
//! * [`behavior`]: the probability weighting operator, its fixed points and
//!   iterated-map regimes.
#![cfg_attr(not(any(feature = "std", test)), no_std)]
// `!(x > 0.0)` is how NaN gets rejected along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod behavior;
pub mod bid;
pub mod dynamics;
pub mod exchange;
pub mod industrial;
pub mod valuation;

mod error;
mod golden;

pub use error::{Error, Result};
pub use golden::{PHI, PHI_INV};
