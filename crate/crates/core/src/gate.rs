// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate reconstruction and analysis.
//!
//! A generalized Control-Not (GCN) gate flips the target when the control is
//! `|1⟩` and attaches a phase to each basis state:
//!
//! ```text
//! GCN(Δφ) = e^{iΔφ₀₀}|00⟩⟨00| + e^{iΔφ₀₁}|01⟩⟨01| + e^{iΔφ₁₁}|10⟩⟨11| + e^{iΔφ₁₀}|11⟩⟨10|
//! ```
//!
//! Note the crossing: `Δφ₁₁` sits on `|10⟩⟨11|`, i.e. it is the phase picked
//! up by the amplitude that starts in `|11⟩`.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::propagator::{build_generator, in_frame};
use crate::spin::{
    BasisLabel, Frame, GateMatrix, GcnPhases, PulseSpec, QState, SystemParams, I, ONE,
};

/// Default leak tolerance for [`extract_gcn_phases`].
pub const DEFAULT_LEAK_TOL: f64 = 1e-2;

/// Unitarity required of a gate before its phases are read off.
pub const EXTRACT_UNITARITY_TOL: f64 = 1e-6;

/// `(row, col)` of the four nonzero entries of a GCN gate, in the order
/// `Δφ₀₀, Δφ₀₁, Δφ₁₀, Δφ₁₁`.
const PATTERN: [(usize, usize); 4] = [(0, 0), (1, 1), (3, 2), (2, 3)];

fn in_pattern(row: usize, col: usize) -> bool {
    PATTERN.contains(&(row, col))
}

/// The Control-Not permutation: `|10⟩ ↔ |11⟩`.
pub fn cn_matrix() -> GateMatrix {
    gcn_matrix(&GcnPhases::new(0.0, 0.0, 0.0, 0.0))
}

pub fn gcn_matrix(phases: &GcnPhases) -> GateMatrix {
    let mut m = Matrix4::zeros();
    for (&(row, col), phase) in PATTERN.iter().zip(phases.as_array()) {
        m[(row, col)] = Complex64::from_polar(1.0, phase);
    }
    GateMatrix::new(m)
}

/// `i·CN`, the gate a pure-CN pulse realizes in the raw frame.
pub fn i_cn_matrix() -> GateMatrix {
    cn_matrix().scaled(I)
}

/// Propagates each digital basis state through the pulse and collects the
/// results at `t = τ` (in `frame`) as the columns of a matrix.
pub fn tomography(params: &SystemParams, pulse: &PulseSpec, frame: Frame) -> Result<GateMatrix> {
    let propagator = build_generator(params, pulse)?.propagator()?;
    let tau = pulse.duration;
    let column = |label: BasisLabel| -> Result<QState> {
        let out = propagator.evolve(&QState::digital(label), tau);
        in_frame(&out, tau, params, frame)
    };
    Ok(GateMatrix::from_columns(&[
        column(BasisLabel::Ket00)?,
        column(BasisLabel::Ket01)?,
        column(BasisLabel::Ket10)?,
        column(BasisLabel::Ket11)?,
    ]))
}

/// Reads the GCN phases off `gate`, normalized so that `dphi00 == 0`.
///
/// Fails if the gate is not unitary, if any entry outside the GCN pattern
/// exceeds `leak_tol` in modulus, or if a pattern entry falls below
/// `1 − leak_tol`.
pub fn extract_gcn_phases(gate: &GateMatrix, leak_tol: f64) -> Result<GcnPhases> {
    let deviation = gate.unitarity_deviation();
    if !(deviation <= EXTRACT_UNITARITY_TOL) {
        return Err(Error::NotUnitary { deviation });
    }

    let mut worst_leak: Option<(usize, usize, f64)> = None;
    for row in 0..4 {
        for col in 0..4 {
            if in_pattern(row, col) {
                continue;
            }
            let m = gate.get(row, col).norm();
            if worst_leak.is_none_or(|(_, _, w)| m > w) {
                worst_leak = Some((row, col, m));
            }
        }
    }
    if let Some((row, col, modulus)) = worst_leak {
        if modulus > leak_tol {
            return Err(Error::PatternViolation {
                row,
                col,
                modulus,
                leak_tol,
            });
        }
    }
    for &(row, col) in &PATTERN {
        let modulus = gate.get(row, col).norm();
        if modulus < 1.0 - leak_tol {
            return Err(Error::PatternViolation {
                row,
                col,
                modulus,
                leak_tol,
            });
        }
    }

    let [p00, p01, p10, p11] = PATTERN.map(|(r, c)| gate.get(r, c).arg());
    Ok(GcnPhases::new(p00, p01, p10, p11).normalized())
}

/// Global-phase-invariant overlap `|tr(target† · gate)| / 4`.
pub fn gate_fidelity(gate: &GateMatrix, target: &GateMatrix) -> f64 {
    let overlap: Complex64 = (target.entries().adjoint() * gate.entries()).trace();
    (overlap.norm() / 4.0).min(1.0)
}

/// `1 − fidelity`.
pub fn infidelity(gate: &GateMatrix, target: &GateMatrix) -> f64 {
    1.0 - gate_fidelity(gate, target)
}

/// Diagonal primed-frame phase matrix at time `t`; left-multiplying a
/// raw-frame gate by it gives the primed-frame gate.
pub fn primed_phase_matrix(params: &SystemParams, t: f64) -> GateMatrix {
    let d = nalgebra::Vector4::new(
        Complex64::from_polar(1.0, params.detuning00() * t),
        Complex64::from_polar(1.0, params.detuning01() * t),
        ONE,
        ONE,
    );
    GateMatrix::new(Matrix4::from_diagonal(&d))
}
