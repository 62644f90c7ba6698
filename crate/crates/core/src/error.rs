// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid basis label `{0}`; expected one of 00, 01, 10, 11")]
    InvalidLabel(String),

    #[error("state has squared norm {norm_sq:.3e}, outside 1 ± {tolerance:.1e}")]
    NotNormalized { norm_sq: f64, tolerance: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroState,

    #[error(
        "carrier {carrier} is off resonance: the constant-coefficient rotating-frame \
         equations require carrier = omega2 - J = {resonant}"
    )]
    OffResonance { carrier: f64, resonant: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid step: {0}")]
    InvalidStep(String),

    #[error("gate is not unitary: max |U^dag U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error(
        "gate is outside the GCN pattern: entry ({row}, {col}) has modulus {modulus:.3e} \
         (leak tolerance {leak_tol:.1e}); the pulse does not implement a conditional NOT"
    )]
    PatternViolation {
        row: usize,
        col: usize,
        modulus: f64,
        leak_tol: f64,
    },

    #[error(
        "no interior maximum of the transfer curve in [{lo}, {hi}] \
         (|c10|^2 = {value_lo:.6} at lo, {value_hi:.6} at hi)"
    )]
    NoInteriorMaximum {
        lo: f64,
        hi: f64,
        value_lo: f64,
        value_hi: f64,
    },

    #[error("invalid search specification: {0}")]
    InvalidSearch(String),

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV at line {line}: {message}")]
    Csv { line: usize, message: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
