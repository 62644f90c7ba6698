// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation and calibration of Control-Not gates in a two-spin Ising chain
//! driven by resonant π-pulses.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibrate;
pub mod cli;
pub mod config;
pub mod csv;
pub mod error;
pub mod gate;
pub mod optim;
pub mod propagator;
pub mod spin;

pub use error::{Error, Result};

/// The guide's chapters, compiled and run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/propagation.md")]
    mod propagation {}
    #[doc = include_str!("../../../book/src/gates.md")]
    mod gates {}
    #[doc = include_str!("../../../book/src/calibration.md")]
    mod calibration {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
