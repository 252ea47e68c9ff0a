//! Effective decay rates of repeatedly measured spins coupled to a bosonic bath.
//!
//! The crate covers two regimes:
//!
//! * strong system-bath coupling, treated in the polaron frame where the
//!   tunnelling amplitude `Δ` is the small parameter ([`strong_rates`]);
//! * weak coupling, where the rate is an overlap of the spectral density with
//!   a filter function ([`weak_rates`]).
//!
//! Both are built on the bath functions in [`bath`] and the adaptive
//! integrators in [`quad`]. [`regimes`] turns rate curves into Zeno /
//! anti-Zeno labels and transition points, and [`oracle`] simulates the
//! lab-frame model exactly on a truncated Fock space so the polaron-frame
//! formulas can be checked against brute force.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod quad;
pub mod regimes;
pub mod strong_rates;
pub mod weak_rates;

pub use error::{Error, Result};
