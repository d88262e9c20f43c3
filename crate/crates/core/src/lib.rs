//! Simulation and analysis of a recurrence purification protocol for mixed
//! tripartite W states written in a basis of GHZ- and W-type states.
//!
//! Layers, bottom up:
//! - [`qmat`]: dense density matrices, operators, partial trace, measurement.
//! - [`basis`]: the 3- and 4-qubit genuine bases and total-spin checks.
//! - [`wstates`]: basis-diagonal mixed states, the concise family, W fraction.
//! - [`engine`]: brute-force two-copy round with post-selection.
//! - [`analysis`]: closed forms, fixed points, recurrence, witnesses, sweeps.
//! - [`cli`]: the `gbpurify` command.

pub mod analysis;
pub mod basis;
pub mod cli;
pub mod engine;
pub mod error;
pub mod numfmt;
pub mod qmat;
pub mod wstates;

pub use error::{Error, Result};
