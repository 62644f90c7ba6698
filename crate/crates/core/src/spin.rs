// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! Domain types shared by every other module.
//!
//! The two-qubit basis is always ordered `|00⟩, |01⟩, |10⟩, |11⟩`, where the
//! first digit is the control spin (spin 1) and the second the target spin
//! (spin 2). State vectors, gate matrices and CSV columns all use this order.
//!
//! All frequencies are dimensionless angular frequencies (ħ = 1); times are in
//! the reciprocal unit.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|‖ψ‖² − 1|` for states accepted as physical input.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Relative tolerance used when checking that a carrier sits on `ω₂ − J`.
pub const RESONANCE_TOLERANCE: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// The static two-spin system: Larmor frequencies of both spins and the Ising
/// coupling `J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega1: f64,
    pub omega2: f64,
    pub coupling_j: f64,
}

impl SystemParams {
    pub fn new(omega1: f64, omega2: f64, coupling_j: f64) -> Result<Self> {
        let params = Self {
            omega1,
            omega2,
            coupling_j,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega1", self.omega1)?;
        positive("omega2", self.omega2)?;
        if !self.coupling_j.is_finite() {
            return Err(Error::InvalidParameter {
                name: "coupling_j",
                value: self.coupling_j,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Gate scenarios need the conditional transition `ω₂ − J` to be
    /// spectrally distinct from `ω₂ + J`.
    pub fn ensure_coupled(&self) -> Result<()> {
        if self.coupling_j == 0.0 {
            return Err(Error::InvalidParameter {
                name: "coupling_j",
                value: 0.0,
                reason: "must be nonzero for a conditional gate",
            });
        }
        Ok(())
    }

    /// The carrier that drives `|10⟩ ↔ |11⟩` resonantly: `ω₂ − J`.
    pub fn resonant_carrier(&self) -> f64 {
        self.omega2 - self.coupling_j
    }

    /// Rotating-frame detuning of `|00⟩`, `ω₂ − ω₁ − 2J`.
    pub fn detuning00(&self) -> f64 {
        self.omega2 - self.omega1 - 2.0 * self.coupling_j
    }

    /// Rotating-frame detuning of `|01⟩`, `ω₂ − ω₁`.
    pub fn detuning01(&self) -> f64 {
        self.omega2 - self.omega1
    }
}

/// Pulse envelope. Only rectangular pulses are supported: full amplitude on
/// `[0, τ]`, nothing outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Envelope {
    #[default]
    Rectangular,
}

/// One circularly polarized rectangular pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub carrier: f64,
    /// Rabi amplitude on spin 1.
    pub a1: f64,
    /// Rabi amplitude on spin 2.
    pub a2: f64,
    pub duration: f64,
    pub envelope: Envelope,
}

impl PulseSpec {
    pub fn new(carrier: f64, a1: f64, a2: f64, duration: f64) -> Result<Self> {
        let pulse = Self {
            carrier,
            a1,
            a2,
            duration,
            envelope: Envelope::Rectangular,
        };
        pulse.validate()?;
        Ok(pulse)
    }

    /// A pulse on the conditional resonance `ω₂ − J` of `params`.
    pub fn resonant(params: &SystemParams, a1: f64, a2: f64, duration: f64) -> Result<Self> {
        Self::new(params.resonant_carrier(), a1, a2, duration)
    }

    pub fn validate(&self) -> Result<()> {
        positive("carrier", self.carrier)?;
        non_negative("a1", self.a1)?;
        non_negative("a2", self.a2)?;
        non_negative("duration", self.duration)?;
        Ok(())
    }

    pub fn with_duration(mut self, duration: f64) -> Self {
        self.duration = duration;
        self
    }

    /// Checks `carrier == ω₂ − J` to [`RESONANCE_TOLERANCE`] (relative).
    pub fn ensure_resonant(&self, params: &SystemParams) -> Result<()> {
        let resonant = params.resonant_carrier();
        let scale = resonant
            .abs()
            .max(self.carrier.abs())
            .max(f64::MIN_POSITIVE);
        if (self.carrier - resonant).abs() > RESONANCE_TOLERANCE * scale {
            return Err(Error::OffResonance {
                carrier: self.carrier,
                resonant,
            });
        }
        Ok(())
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

/// A computational basis label. The discriminant is the vector index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    Ket00 = 0,
    Ket01 = 1,
    Ket10 = 2,
    Ket11 = 3,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 4] = [
        BasisLabel::Ket00,
        BasisLabel::Ket01,
        BasisLabel::Ket10,
        BasisLabel::Ket11,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BasisLabel::Ket00 => "00",
            BasisLabel::Ket01 => "01",
            BasisLabel::Ket10 => "10",
            BasisLabel::Ket11 => "11",
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "00" => Ok(BasisLabel::Ket00),
            "01" => Ok(BasisLabel::Ket01),
            "10" => Ok(BasisLabel::Ket10),
            "11" => Ok(BasisLabel::Ket11),
            other => Err(Error::InvalidLabel(other.to_string())),
        }
    }
}

/// Pure state of the two spins: the amplitudes `c₀₀, c₀₁, c₁₀, c₁₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QState(Vector4<Complex64>);

impl QState {
    /// The digital basis state `|label⟩`.
    pub fn digital(label: BasisLabel) -> Self {
        let mut v = Vector4::from_element(ZERO);
        v[label.index()] = ONE;
        QState(v)
    }

    /// Validates `amps` as a physical state. With `normalize`, any nonzero
    /// vector is rescaled to unit norm instead of being rejected.
    pub fn superposition(amps: [Complex64; 4], normalize: bool) -> Result<Self> {
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let v = Vector4::from(amps);
        let norm_sq = norm_sqr(&v);
        if norm_sq == 0.0 {
            return Err(Error::ZeroState);
        }
        if normalize {
            let scale = 1.0 / norm_sq.sqrt();
            return Ok(QState(v.map(|c| c * scale)));
        }
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm_sq,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(QState(v))
    }

    /// Wraps a vector without checking its norm. Used for propagated states,
    /// which are unitary images of validated input.
    pub(crate) fn from_vector(v: Vector4<Complex64>) -> Self {
        QState(v)
    }

    pub fn vector(&self) -> &Vector4<Complex64> {
        &self.0
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn amplitude(&self, label: BasisLabel) -> Complex64 {
        self.0[label.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.0)
    }

    /// Re-runs the input validation on this state.
    pub fn validate(&self) -> Result<()> {
        Self::superposition(self.amplitudes(), false).map(|_| ())
    }

    /// Largest componentwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &QState) -> f64 {
        (self.0 - other.0)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn norm_sqr(v: &Vector4<Complex64>) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// A 4×4 complex gate in the fixed basis order. Column `j` is the image of
/// basis state `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateMatrix(Matrix4<Complex64>);

impl GateMatrix {
    pub fn new(entries: Matrix4<Complex64>) -> Self {
        GateMatrix(entries)
    }

    pub fn identity() -> Self {
        GateMatrix(Matrix4::identity())
    }

    pub fn from_columns(columns: &[QState; 4]) -> Self {
        GateMatrix(Matrix4::from_columns(&[
            *columns[0].vector(),
            *columns[1].vector(),
            *columns[2].vector(),
            *columns[3].vector(),
        ]))
    }

    pub fn entries(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        GateMatrix(self.0 * factor)
    }

    pub fn adjoint(&self) -> Self {
        GateMatrix(self.0.adjoint())
    }

    pub fn mul(&self, rhs: &GateMatrix) -> Self {
        GateMatrix(self.0 * rhs.0)
    }

    pub fn apply(&self, state: &QState) -> QState {
        QState(self.0 * state.0)
    }

    /// Max-norm of `U†U − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let product = self.0.adjoint() * self.0 - Matrix4::identity();
        product.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of `self − other`.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        (self.0 - other.0)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Phase shifts of a generalized CN gate, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcnPhases {
    pub dphi00: f64,
    pub dphi01: f64,
    pub dphi10: f64,
    pub dphi11: f64,
}

impl GcnPhases {
    pub fn new(dphi00: f64, dphi01: f64, dphi10: f64, dphi11: f64) -> Self {
        Self {
            dphi00,
            dphi01,
            dphi10,
            dphi11,
        }
    }

    /// Removes the common phase so that `dphi00 == 0`, then wraps every
    /// phase into `(−π, π]`.
    pub fn normalized(&self) -> Self {
        let base = self.dphi00;
        Self {
            dphi00: 0.0,
            dphi01: wrap_phase(self.dphi01 - base),
            dphi10: wrap_phase(self.dphi10 - base),
            dphi11: wrap_phase(self.dphi11 - base),
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.dphi00, self.dphi01, self.dphi10, self.dphi11]
    }
}

/// Reduces an angle to `(−π, π]`.
pub fn wrap_phase(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Which amplitudes a trajectory or gate is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    /// Rotating-frame amplitudes, including the free-evolution phases of
    /// `|00⟩` and `|01⟩`.
    #[default]
    Raw,
    /// Rotating-frame amplitudes with the free-evolution phases removed.
    Primed,
}

impl Frame {
    pub fn as_str(self) -> &'static str {
        match self {
            Frame::Raw => "raw",
            Frame::Primed => "primed",
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Frame {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "raw" => Ok(Frame::Raw),
            "primed" => Ok(Frame::Primed),
            other => Err(format!("unknown frame `{other}`; expected raw or primed")),
        }
    }
}

/// One sample of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub amplitudes: [Complex64; 4],
    pub norm: f64,
}

impl Sample {
    pub fn new(t: f64, state: &QState) -> Self {
        Self {
            t,
            amplitudes: state.amplitudes(),
            norm: state.norm_sqr(),
        }
    }

    pub fn amplitude(&self, label: BasisLabel) -> Complex64 {
        self.amplitudes[label.index()]
    }
}

/// Maximum disagreement allowed between a row's `norm` column and the
/// recomputed squared norm.
pub const ROW_NORM_TOLERANCE: f64 = 1e-12;

/// A sampled trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub frame: Frame,
    pub rows: Vec<Sample>,
}

impl TimeSeries {
    /// Checks row ordering and the norm column.
    ///
    /// Times must be strictly increasing. The one exception is a
    /// zero-duration pulse, whose series is the two endpoint rows, both at
    /// `t = 0`.
    pub fn validate(&self) -> Result<()> {
        let degenerate = self.rows.len() == 2 && self.rows[0].t == 0.0 && self.rows[1].t == 0.0;
        for (i, pair) in self.rows.windows(2).enumerate() {
            if !(pair[1].t > pair[0].t) && !degenerate {
                return Err(Error::Csv {
                    line: i + 2,
                    message: format!("time {} does not follow {}", pair[1].t, pair[0].t),
                });
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            let recomputed: f64 = row.amplitudes.iter().map(|c| c.norm_sqr()).sum();
            if (recomputed - row.norm).abs() > ROW_NORM_TOLERANCE {
                return Err(Error::Csv {
                    line: i + 1,
                    message: format!(
                        "norm column {} but amplitudes give {}",
                        row.norm, recomputed
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn last(&self) -> Option<&Sample> {
        self.rows.last()
    }
}
