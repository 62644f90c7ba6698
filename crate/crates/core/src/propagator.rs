// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! Rotating-frame dynamics of the driven two-spin system.
//!
//! With the carrier on the conditional resonance `ω = ω₂ − J`, the amplitude
//! equations in the rotating frame have constant coefficients:
//!
//! ```text
//! −2i ċ = B c,   B = | −2(ω₂−ω₁−2J)   a₂          a₁   0  |
//!                    |  a₂           −2(ω₂−ω₁)    0    a₁ |
//!                    |  a₁            0           0    a₂ |
//!                    |  0             a₁          a₂   0  |
//! ```
//!
//! so `ċ = (i/2) B c` and `c(t) = exp(iBt/2) c(0)`. `B` is real symmetric;
//! [`Propagator`] diagonalizes it once and evaluates the exponential exactly
//! for any `t`. [`evolve_rk4`] integrates the same equation by classical
//! Runge–Kutta and exists only as an independent check.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{Frame, PulseSpec, QState, Sample, SystemParams, TimeSeries};

/// Largest `dt · ρ(B/2)` accepted by [`evolve_rk4`].
pub const RK4_STABILITY_LIMIT: f64 = 0.1;

/// The constant coefficient matrix `B` of the rotating-frame equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    matrix: Matrix4<f64>,
}

/// Builds `B` for a resonant pulse.
pub fn build_generator(params: &SystemParams, pulse: &PulseSpec) -> Result<Generator> {
    params.validate()?;
    pulse.validate()?;
    pulse.ensure_resonant(params)?;

    let mut b = Matrix4::zeros();
    b[(0, 0)] = -2.0 * params.detuning00();
    b[(1, 1)] = -2.0 * params.detuning01();
    let mut couple = |i: usize, j: usize, v: f64| {
        b[(i, j)] = v;
        b[(j, i)] = v;
    };
    // spin 2 flips: 00<->01, 10<->11; spin 1 flips: 00<->10, 01<->11
    couple(0, 1, pulse.a2);
    couple(2, 3, pulse.a2);
    couple(0, 2, pulse.a1);
    couple(1, 3, pulse.a1);
    Ok(Generator { matrix: b })
}

impl Generator {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    fn ensure_finite(&self) -> Result<()> {
        if self.matrix.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("generator"))
        }
    }

    /// Spectral radius of `B/2`, the fastest angular frequency in the
    /// rotating-frame dynamics.
    pub fn half_spectral_radius(&self) -> Result<f64> {
        self.ensure_finite()?;
        let eig = self.matrix.symmetric_eigenvalues();
        Ok(eig.iter().fold(0.0f64, |m, x| m.max(x.abs())) / 2.0)
    }

    /// Diagonalizes `B`.
    pub fn propagator(&self) -> Result<Propagator> {
        self.ensure_finite()?;
        let SymmetricEigen {
            eigenvectors,
            eigenvalues,
        } = SymmetricEigen::new(self.matrix);
        if !eigenvectors
            .iter()
            .chain(eigenvalues.iter())
            .all(|x| x.is_finite())
        {
            return Err(Error::NonFinite("eigendecomposition of the generator"));
        }
        Ok(Propagator {
            vectors: eigenvectors,
            half_eigenvalues: eigenvalues / 2.0,
        })
    }
}

/// `exp(iBt/2)` for arbitrary `t`, from the eigendecomposition `B = V Λ Vᵀ`.
#[derive(Debug, Clone, Copy)]
pub struct Propagator {
    vectors: Matrix4<f64>,
    half_eigenvalues: Vector4<f64>,
}

impl Propagator {
    fn phases(&self, t: f64) -> Vector4<Complex64> {
        self.half_eigenvalues
            .map(|w| Complex64::from_polar(1.0, w * t))
    }

    pub fn evolve(&self, state: &QState, t: f64) -> QState {
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        let in_eigenbasis = v.transpose() * state.vector();
        let rotated = in_eigenbasis.component_mul(&self.phases(t));
        QState::from_vector(v * rotated)
    }

    /// The full unitary `exp(iBt/2)`.
    pub fn unitary(&self, t: f64) -> Matrix4<Complex64> {
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        v * Matrix4::from_diagonal(&self.phases(t)) * v.transpose()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidStep(format!(
            "time must be finite and >= 0, got {t}"
        )))
    }
}

/// Exact solution `exp(iBt/2) c(0)`.
pub fn evolve_exact(state: &QState, gen: &Generator, t: f64) -> Result<QState> {
    check_time(t)?;
    Ok(gen.propagator()?.evolve(state, t))
}

/// Classical RK4 for `ċ = (i/2) B c`.
///
/// `dt` is an upper bound on the step: the interval is split into
/// `⌈t/dt⌉` equal steps. Steps with `dt · ρ(B/2) ≥ 0.1` are rejected, since
/// RK4 is then neither accurate nor norm-preserving for this oscillatory
/// system.
pub fn evolve_rk4(state: &QState, gen: &Generator, t: f64, dt: f64) -> Result<QState> {
    check_time(t)?;
    if !(dt > 0.0) || dt > t {
        return Err(Error::InvalidStep(format!(
            "need 0 < dt <= t, got dt = {dt}, t = {t}"
        )));
    }
    let rho = gen.half_spectral_radius()?;
    if dt * rho >= RK4_STABILITY_LIMIT {
        return Err(Error::InvalidStep(format!(
            "dt * rho(B/2) = {:.3} exceeds {RK4_STABILITY_LIMIT}; use dt < {:.3e}",
            dt * rho,
            RK4_STABILITY_LIMIT / rho
        )));
    }
    let steps = (t / dt).ceil().max(1.0) as usize;
    Ok(rk4_integrate(state, gen, t, steps))
}

/// `steps` RK4 steps of size `t / steps`, with no step-size checks.
pub fn rk4_integrate(state: &QState, gen: &Generator, t: f64, steps: usize) -> QState {
    let a = gen.matrix().map(|x| Complex64::new(0.0, 0.5 * x));
    let h = t / steps as f64;
    let half = Complex64::new(h / 2.0, 0.0);
    let full = Complex64::new(h, 0.0);
    let sixth = Complex64::new(h / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let mut c = *state.vector();
    for _ in 0..steps {
        let k1 = a * c;
        let k2 = a * (c + k1 * half);
        let k3 = a * (c + k2 * half);
        let k4 = a * (c + k3 * full);
        c += (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    QState::from_vector(c)
}

fn phase_strip(state: &QState, t: f64, params: &SystemParams, sign: f64) -> QState {
    let mut v = *state.vector();
    v[0] *= Complex64::from_polar(1.0, sign * params.detuning00() * t);
    v[1] *= Complex64::from_polar(1.0, sign * params.detuning01() * t);
    QState::from_vector(v)
}

/// Undriven evolution in the rotating frame: `c₀₀` and `c₀₁` precess at
/// `ω₂−ω₁−2J` and `ω₂−ω₁`, `c₁₀` and `c₁₁` stay put.
pub fn free_evolve(state: &QState, t: f64, params: &SystemParams) -> Result<QState> {
    check_time(t)?;
    Ok(phase_strip(state, t, params, -1.0))
}

/// Removes the free-evolution phases, giving the primed amplitudes.
pub fn to_primed(state: &QState, t: f64, params: &SystemParams) -> Result<QState> {
    check_time(t)?;
    Ok(phase_strip(state, t, params, 1.0))
}

/// Expresses a rotating-frame state at time `t` in `frame`.
pub fn in_frame(state: &QState, t: f64, params: &SystemParams, frame: Frame) -> Result<QState> {
    match frame {
        Frame::Raw => Ok(*state),
        Frame::Primed => to_primed(state, t, params),
    }
}

/// Sampling grid `0, dt, 2dt, …` strictly below `τ`, then `τ` itself.
pub fn sample_times(duration: f64, sample_dt: f64) -> Result<Vec<f64>> {
    check_time(duration)?;
    if !(sample_dt > 0.0) || !sample_dt.is_finite() {
        return Err(Error::InvalidStep(format!(
            "sample_dt must be finite and > 0, got {sample_dt}"
        )));
    }
    let mut times = vec![0.0];
    let cutoff = duration * (1.0 - 1e-12);
    let mut k = 1u64;
    loop {
        let t = k as f64 * sample_dt;
        if t >= cutoff {
            break;
        }
        times.push(t);
        k += 1;
    }
    times.push(duration);
    Ok(times)
}

/// Samples the trajectory of `initial` under `pulse`. Every row is computed
/// directly from `t = 0`, so errors do not accumulate along the series.
pub fn run_timeseries(
    params: &SystemParams,
    pulse: &PulseSpec,
    initial: &QState,
    sample_dt: f64,
    frame: Frame,
) -> Result<TimeSeries> {
    let propagator = build_generator(params, pulse)?.propagator()?;
    let rows = sample_times(pulse.duration, sample_dt)?
        .into_iter()
        .map(|t| {
            let state = in_frame(&propagator.evolve(initial, t), t, params, frame)?;
            Ok(Sample::new(t, &state))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries { frame, rows })
}
