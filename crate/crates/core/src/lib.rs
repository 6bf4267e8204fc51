//! Core engine for receding-horizon taxi-fleet dispatch.
//!
//! The crate is organized around the dispatch pipeline:
//!
//! * [`geo`] — city grid, region assignment, Manhattan distances, station tables.
//! * [`trace`] — GPS/occupancy trace parsing, pickup/dropoff events, slot counts,
//!   trajectory transitions, and trace mileage.
//! * [`demand`] — bootstrap estimation of per-slot demand means/variances,
//!   demand intervals, drop-off probabilities, and mobility matrices.
//! * [`lp`] — dense two-phase bounded-variable simplex, the numerical core.
//! * [`dispatch`] — nominal and robust dispatch LP builders, rounding recovery,
//!   objective evaluation, and a brute-force oracle for small instances.
//! * [`rhc`] — the per-period receding-horizon engine: demand scheduling,
//!   occupied-taxi service deduction, solve, and order emission.
//! * [`sim`] — synthetic and trace-replay simulation with idle-mileage and
//!   supply-demand mismatch metrics against a no-dispatch baseline.
//!
//! Everything here is deterministic: all randomness flows through [`rng::Rng64`]
//! seeded from caller-provided values, so identical inputs produce identical
//! outputs bit for bit.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature and enable `libm` for embedded or sandboxed targets.

#![cfg_attr(not(feature = "std"), no_std)]
// Validation uses `!(x > 0.0)`-style guards on purpose: unlike `x <= 0.0`
// they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod demand;
pub mod dispatch;
pub mod geo;
pub mod lp;
mod math;
pub mod matrix;
pub mod rhc;
pub mod rng;
pub mod sim;
pub mod trace;

pub use matrix::Mat;
