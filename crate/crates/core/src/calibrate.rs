// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! π-pulse duration calibration and the search for a pure CN gate.
//!
//! The π-pulse duration is defined operationally: the `τ` that maximizes the
//! population moved from `|11⟩` to `|10⟩`. Because the first spin is weakly
//! driven off resonance, this differs slightly from `π/a₂`.
//!
//! A "pure" CN gate is one whose raw-frame tomography equals `i·CN` up to a
//! global phase. The nonresonant amplitudes `c₀₀`, `c₀₁` rotate quickly in
//! the raw frame, so this requires tuning the system and pulse together;
//! [`tune_pure_cn`] does so with a bounded Nelder–Mead search.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gate::{gate_fidelity, i_cn_matrix, tomography};
use crate::optim::{bisect_root, golden_section_max, nelder_mead, NelderMeadOptions, Termination};
use crate::propagator::{build_generator, Propagator};
use crate::spin::{BasisLabel, Frame, GateMatrix, PulseSpec, QState, SystemParams, I};

/// Search bracket for the π-pulse duration, as fractions of `π/a₂`.
pub const PI_BRACKET: (f64, f64) = (0.8, 1.2);

/// Golden-section tolerance, relative to `π/a₂`.
pub const PI_SEARCH_TOL: f64 = 1e-6;

/// Population of `|10⟩` at time `t` starting from `|11⟩`.
pub fn transfer_probability(propagator: &Propagator, t: f64) -> f64 {
    propagator
        .evolve(&QState::digital(BasisLabel::Ket11), t)
        .amplitude(BasisLabel::Ket10)
        .norm_sqr()
}

/// `d|c₁₀|²/dt` from `|11⟩`, using `ċ = (i/2) B c`.
fn transfer_slope(propagator: &Propagator, b: &nalgebra::Matrix4<f64>, t: f64) -> f64 {
    let c = *propagator
        .evolve(&QState::digital(BasisLabel::Ket11), t)
        .vector();
    let dc10: num_complex::Complex64 = (0..4)
        .map(|j| c[j] * b[(2, j)])
        .sum::<num_complex::Complex64>()
        * I
        * 0.5;
    2.0 * (c[2].conj() * dc10).re
}

/// Duration of a π-pulse: the maximizer of [`transfer_probability`] in
/// `[0.8, 1.2]·π/a₂`.
pub fn calibrate_pi_duration(params: &SystemParams, template: &PulseSpec) -> Result<f64> {
    if !(template.a2 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "a2",
            value: template.a2,
            reason: "must be > 0 to define a pi-pulse",
        });
    }
    let nominal = PI / template.a2;
    calibrate_pi_duration_in(
        params,
        template,
        PI_BRACKET.0 * nominal,
        PI_BRACKET.1 * nominal,
    )
}

/// As [`calibrate_pi_duration`] with an explicit bracket.
///
/// Golden-section search narrows the bracket to `10⁻⁶·π/a₂`; the maximum is
/// then polished to machine precision by bisecting the sign change of the
/// analytic slope `d|c₁₀|²/dt`.
pub fn calibrate_pi_duration_in(
    params: &SystemParams,
    template: &PulseSpec,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidSearch(format!(
            "bad duration bracket [{lo}, {hi}]"
        )));
    }
    let gen = build_generator(params, template)?;
    let prop = gen.propagator()?;
    let nominal = if template.a2 > 0.0 {
        PI / template.a2
    } else {
        hi
    };
    let tol = PI_SEARCH_TOL * nominal;

    let (coarse, _) = golden_section_max(|t| transfer_probability(&prop, t), lo, hi, tol);
    if coarse - lo <= 2.0 * tol || hi - coarse <= 2.0 * tol {
        return Err(Error::NoInteriorMaximum {
            lo,
            hi,
            value_lo: transfer_probability(&prop, lo),
            value_hi: transfer_probability(&prop, hi),
        });
    }
    let slope = |t: f64| transfer_slope(&prop, gen.matrix(), t);
    let refined = bisect_root(slope, coarse - 2.0 * tol, coarse + 2.0 * tol)
        .filter(|t| transfer_probability(&prop, *t) >= transfer_probability(&prop, coarse));
    Ok(refined.unwrap_or(coarse))
}

/// Infidelity of the raw-frame gate against `i·CN`.
pub fn pure_cn_objective(params: &SystemParams, pulse: &PulseSpec) -> Result<f64> {
    objective_against(params, pulse, &i_cn_matrix())
}

fn objective_against(params: &SystemParams, pulse: &PulseSpec, target: &GateMatrix) -> Result<f64> {
    let gate = tomography(params, pulse, Frame::Raw)?;
    Ok(1.0 - gate_fidelity(&gate, target))
}

/// Pure-CN duration search over `center·(1 ± window)` with everything else
/// held fixed.
///
/// The raw-frame objective oscillates in `τ` at the nonresonant precession
/// frequencies, so a local search from `center` would stop in the nearest
/// ripple. Instead the window is scanned at 1/16 of the fastest period and
/// the best grid point is refined by golden section. Returns
/// `(duration, objective)`.
pub fn calibrate_cn_duration(
    params: &SystemParams,
    pulse: &PulseSpec,
    center: f64,
    window: f64,
) -> Result<(f64, f64)> {
    if !(center > 0.0 && window > 0.0 && window < 1.0) {
        return Err(Error::InvalidSearch(format!(
            "duration window needs center > 0 and 0 < window < 1, got {center}, {window}"
        )));
    }
    let gen = build_generator(params, pulse)?;
    let prop = gen.propagator()?;
    let rho = gen.half_spectral_radius()?.max(f64::MIN_POSITIVE);
    let target = i_cn_matrix();
    let objective = |t: f64| 1.0 - gate_fidelity(&GateMatrix::new(prop.unitary(t)), &target);

    let (lo, hi) = (center * (1.0 - window), center * (1.0 + window));
    let step = (TAU / rho / 16.0).min((hi - lo) / 16.0);
    let n = ((hi - lo) / step).ceil() as usize;
    let grid: Vec<(f64, f64)> = (0..=n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .map(|t| (t, objective(t)))
        .collect();
    // Minima are narrower than a grid cell, so refine around every local
    // grid minimum rather than only the lowest grid value.
    let mut best = (center, f64::INFINITY);
    for k in 0..=n {
        let f = grid[k].1;
        let left = if k > 0 { grid[k - 1].1 } else { f64::INFINITY };
        let right = if k < n { grid[k + 1].1 } else { f64::INFINITY };
        if f > left || f > right {
            continue;
        }
        let (t, neg) = golden_section_max(
            |t| -objective(t),
            (grid[k].0 - step).max(lo),
            (grid[k].0 + step).min(hi),
            1e-12 * center,
        );
        if -neg < best.1 {
            best = (t, -neg);
        }
    }
    Ok(best)
}

/// A coordinate [`tune_pure_cn`] may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FreeParam {
    Omega1,
    A2,
    Duration,
}

impl FreeParam {
    pub fn as_str(self) -> &'static str {
        match self {
            FreeParam::Omega1 => "omega1",
            FreeParam::A2 => "a2",
            FreeParam::Duration => "duration",
        }
    }
}

impl fmt::Display for FreeParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FreeParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "omega1" => Ok(FreeParam::Omega1),
            "a2" => Ok(FreeParam::A2),
            "duration" => Ok(FreeParam::Duration),
            other => Err(Error::InvalidSearch(format!(
                "unknown free parameter `{other}`; expected omega1, a2 or duration"
            ))),
        }
    }
}

/// Configuration of a pure-CN search.
#[derive(Debug, Clone)]
pub struct SearchSpec {
    /// Coordinates to vary, in search order. When `Duration` is absent the
    /// π-pulse duration is recalibrated at every evaluation.
    pub free: Vec<FreeParam>,
    /// Half-width of the search box, relative to each starting value.
    pub window: f64,
    /// Initial simplex offset, relative to each starting value.
    pub initial_step: f64,
    /// Keep `a₁ = a₂·ω₁/ω₂` while searching.
    pub tie_a1: bool,
    pub target: GateMatrix,
    pub max_evals: usize,
    /// Search succeeds once the objective is at or below this value.
    pub tolerance: f64,
}

impl Default for SearchSpec {
    fn default() -> Self {
        Self {
            free: vec![FreeParam::Omega1, FreeParam::A2, FreeParam::Duration],
            window: 5e-3,
            initial_step: 2.5e-3,
            tie_a1: false,
            target: i_cn_matrix(),
            max_evals: 2000,
            tolerance: 1e-6,
        }
    }
}

impl SearchSpec {
    pub fn with_free(free: &[FreeParam]) -> Self {
        Self {
            free: free.to_vec(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.free.is_empty() {
            return Err(Error::InvalidSearch("no free parameters".into()));
        }
        let mut seen = self.free.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.free.len() {
            return Err(Error::InvalidSearch("free parameter listed twice".into()));
        }
        if !(self.window > 0.0 && self.window < 1.0) {
            return Err(Error::InvalidSearch(format!(
                "window must be in (0, 1), got {}",
                self.window
            )));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidSearch(format!(
                "initial step must be > 0, got {}",
                self.initial_step
            )));
        }
        if self.max_evals == 0 {
            return Err(Error::InvalidSearch("max_evals must be positive".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::InvalidSearch("tolerance must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Converged,
    /// The simplex collapsed onto a local minimum above tolerance.
    Stalled,
    /// The evaluation budget ran out.
    Exhausted,
}

impl SearchStatus {
    pub fn is_converged(self) -> bool {
        self == SearchStatus::Converged
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Converged => "converged",
            SearchStatus::Stalled => "stalled",
            SearchStatus::Exhausted => "exhausted",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TuneResult {
    pub params: SystemParams,
    pub pulse: PulseSpec,
    pub objective: f64,
    pub evaluations: usize,
    pub status: SearchStatus,
}

/// Applies the search coordinates `x` to the starting point.
fn realize(
    start: (&SystemParams, &PulseSpec),
    spec: &SearchSpec,
    x: &[f64],
) -> Result<(SystemParams, PulseSpec)> {
    let (mut params, mut pulse) = (*start.0, *start.1);
    for (p, &v) in spec.free.iter().zip(x) {
        match p {
            FreeParam::Omega1 => params.omega1 = v,
            FreeParam::A2 => pulse.a2 = v,
            FreeParam::Duration => pulse.duration = v,
        }
    }
    if spec.tie_a1 {
        pulse.a1 = pulse.a2 * params.omega1 / params.omega2;
    }
    if !spec.free.contains(&FreeParam::Duration) {
        pulse.duration = calibrate_pi_duration(&params, &pulse)?;
    }
    Ok((params, pulse))
}

/// Searches the free coordinates of `spec` for a raw-frame gate matching
/// `spec.target`.
///
/// The search box is `start·(1 ± window)` per coordinate; the initial
/// simplex is the start plus one vertex per coordinate displaced by
/// `initial_step·start`. Non-convergence is reported in the result status,
/// not as an error.
pub fn tune_pure_cn(
    params: &SystemParams,
    pulse: &PulseSpec,
    spec: &SearchSpec,
) -> Result<TuneResult> {
    spec.validate()?;
    params.validate()?;
    params.ensure_coupled()?;
    pulse.validate()?;
    pulse.ensure_resonant(params)?;

    let start: Vec<f64> = spec
        .free
        .iter()
        .map(|p| match p {
            FreeParam::Omega1 => params.omega1,
            FreeParam::A2 => pulse.a2,
            FreeParam::Duration => pulse.duration,
        })
        .collect();
    if let Some((p, v)) = spec.free.iter().zip(&start).find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::InvalidSearch(format!(
            "cannot build a relative window around {p} = {v}"
        )));
    }
    let opts = NelderMeadOptions {
        lower: start.iter().map(|v| v * (1.0 - spec.window)).collect(),
        upper: start.iter().map(|v| v * (1.0 + spec.window)).collect(),
        initial_steps: start.iter().map(|v| v * spec.initial_step).collect(),
        max_evals: spec.max_evals,
        f_tol: spec.tolerance,
        x_tol: 1e-10,
    };

    let objective = |x: &[f64]| -> f64 {
        realize((params, pulse), spec, x)
            .and_then(|(p, q)| objective_against(&p, &q, &spec.target))
            .unwrap_or(f64::INFINITY)
    };
    let found = nelder_mead(objective, &start, &opts);
    let (params, pulse) = realize((params, pulse), spec, &found.x)?;
    Ok(TuneResult {
        params,
        pulse,
        objective: found.value,
        evaluations: found.evaluations,
        status: match found.termination {
            Termination::Converged => SearchStatus::Converged,
            Termination::Stalled => SearchStatus::Stalled,
            Termination::Exhausted => SearchStatus::Exhausted,
        },
    })
}
