// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! The command-line scenarios, independent of argument parsing.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::calibrate::{
    calibrate_cn_duration, calibrate_pi_duration, pure_cn_objective, transfer_probability,
    tune_pure_cn, SearchSpec, TuneResult,
};
use crate::config::{RunConfig, Setting};
use crate::csv::{write_gate, write_timeseries};
use crate::error::{Error, Result};
use crate::gate::{
    cn_matrix, extract_gcn_phases, gate_fidelity, gcn_matrix, i_cn_matrix, tomography,
    DEFAULT_LEAK_TOL,
};
use crate::propagator::{build_generator, run_timeseries};
use crate::spin::{Frame, GateMatrix, GcnPhases, PulseSpec, TimeSeries};

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_to(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub pulse: PulseSpec,
    pub series: TimeSeries,
}

impl SimulateOutput {
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        write_timeseries(&self.series, w)
    }
}

/// Samples the configured trajectory and, when `out` is set, writes it as
/// CSV.
pub fn cmd_simulate(config: &RunConfig) -> Result<SimulateOutput> {
    config.validate()?;
    let pulse = config.resolve_pulse()?;
    let initial = config.initial.state()?;
    let dt = config.resolve_sample_dt(pulse.duration);
    let series = run_timeseries(&config.system, &pulse, &initial, dt, config.frame)?;
    let output = SimulateOutput { pulse, series };
    if let Some(path) = &config.out {
        write_to(path, |w| output.write_csv(w))?;
    }
    Ok(output)
}

#[derive(Debug)]
pub struct TomographyReport {
    pub pulse: PulseSpec,
    pub frame: Frame,
    pub gate: GateMatrix,
    /// `Err` holds the leakage diagnostic when the gate is not a GCN.
    pub phases: std::result::Result<GcnPhases, Error>,
    pub fidelity_cn: f64,
    pub fidelity_i_cn: f64,
    /// Fidelity against `GCN(0, 0, π/2, π/2)`.
    pub fidelity_gcn_quarter: f64,
}

impl TomographyReport {
    pub fn is_success(&self) -> bool {
        self.phases.is_ok()
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("frame = {}", self.frame),
            format!("duration = {}", self.pulse.duration),
            format!(
                "unitarity_deviation = {:.3e}",
                self.gate.unitarity_deviation()
            ),
        ];
        match &self.phases {
            Ok(p) => lines.push(format!(
                "gcn_phases = {}, {}, {}, {}",
                p.dphi00, p.dphi01, p.dphi10, p.dphi11
            )),
            Err(e) => lines.push(format!("gcn_phases = none ({e})")),
        }
        lines.push(format!("fidelity_cn = {}", self.fidelity_cn));
        lines.push(format!("fidelity_i_cn = {}", self.fidelity_i_cn));
        lines.push(format!(
            "fidelity_gcn_0_0_pi2_pi2 = {}",
            self.fidelity_gcn_quarter
        ));
        lines
    }

    /// Summary as `#` comment lines followed by the gate CSV.
    pub fn write_report<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for line in self.summary_lines() {
            writeln!(w, "# {line}")?;
        }
        write_gate(&self.gate, w)
    }
}

pub fn cmd_tomography(config: &RunConfig) -> Result<TomographyReport> {
    config.validate()?;
    config.system.ensure_coupled()?;
    let pulse = config.resolve_pulse()?;
    let gate = tomography(&config.system, &pulse, config.frame)?;
    let report = TomographyReport {
        pulse,
        frame: config.frame,
        phases: extract_gcn_phases(&gate, DEFAULT_LEAK_TOL),
        fidelity_cn: gate_fidelity(&gate, &cn_matrix()),
        fidelity_i_cn: gate_fidelity(&gate, &i_cn_matrix()),
        fidelity_gcn_quarter: gate_fidelity(
            &gate,
            &gcn_matrix(&GcnPhases::new(0.0, 0.0, FRAC_PI_2, FRAC_PI_2)),
        ),
        gate,
    };
    if let Some(path) = &config.out {
        write_to(path, |w| report.write_report(w))?;
    }
    Ok(report)
}

/// What `calibrate` should do. Steps run in the order π-duration, pure-CN
/// duration scan, pure-CN search, each starting from the previous result.
#[derive(Debug, Clone, Default)]
pub struct CalibrateFlags {
    pub pi_duration: bool,
    pub cn_duration: bool,
    pub pure_cn: bool,
    pub search: SearchSpec,
}

#[derive(Debug, Clone)]
pub struct CalibrationReport {
    pub pi_duration: Option<f64>,
    /// `(duration, objective)` from the duration-only scan.
    pub cn_duration: Option<(f64, f64)>,
    pub tune: Option<TuneResult>,
    pub tuned: RunConfig,
    /// Pure-CN objective of `tuned`.
    pub objective: f64,
    pub converged: bool,
}

impl CalibrationReport {
    /// The tuned configuration, reloadable by `parse_config`, with the
    /// results as trailing comments.
    pub fn to_report_string(&self) -> String {
        let mut s = self.tuned.to_config_string();
        if let Some(tau) = self.pi_duration {
            let _ = writeln!(s, "# pi_duration = {tau}");
        }
        if let Some((tau, obj)) = self.cn_duration {
            let _ = writeln!(s, "# cn_duration = {tau} (objective {obj:.6e})");
        }
        if let Some(t) = &self.tune {
            let _ = writeln!(
                s,
                "# search = {} after {} evaluations",
                t.status.as_str(),
                t.evaluations
            );
        }
        let _ = writeln!(s, "# objective = {:.6e}", self.objective);
        let _ = writeln!(
            s,
            "# status = {}",
            if self.converged {
                "converged"
            } else {
                "not converged"
            }
        );
        s
    }
}

pub fn cmd_calibrate(config: &RunConfig, flags: &CalibrateFlags) -> Result<CalibrationReport> {
    config.validate()?;
    config.system.ensure_coupled()?;
    let mut flags = flags.clone();
    if !(flags.pi_duration || flags.cn_duration || flags.pure_cn) {
        flags.pi_duration = true;
    }
    flags.search.validate()?;

    let mut tuned = config.clone();
    let mut converged = true;
    let mut report = CalibrationReport {
        pi_duration: None,
        cn_duration: None,
        tune: None,
        tuned: config.clone(),
        objective: f64::NAN,
        converged: true,
    };

    if flags.pi_duration {
        let tau = calibrate_pi_duration(&tuned.system, &tuned.pulse_template()?)?;
        tuned.duration = Setting::Value(tau);
        report.pi_duration = Some(tau);
    }
    if flags.cn_duration {
        let pulse = tuned.resolve_pulse()?;
        let (tau, obj) =
            calibrate_cn_duration(&tuned.system, &pulse, pulse.duration, flags.search.window)?;
        tuned.duration = Setting::Value(tau);
        report.cn_duration = Some((tau, obj));
        converged &= obj <= flags.search.tolerance;
    }
    if flags.pure_cn {
        let pulse = tuned.resolve_pulse()?;
        let result = tune_pure_cn(&tuned.system, &pulse, &flags.search)?;
        tuned.system = result.params;
        tuned.carrier = result.pulse.carrier;
        tuned.a1 = result.pulse.a1;
        tuned.a2 = result.pulse.a2;
        tuned.duration = Setting::Value(result.pulse.duration);
        converged &= result.status.is_converged();
        report.tune = Some(result);
    }

    report.objective = pure_cn_objective(&tuned.system, &tuned.resolve_pulse()?)?;
    report.tuned = tuned;
    report.converged = converged;
    if let Some(path) = &config.out {
        let text = report.to_report_string();
        write_to(path, |w| w.write_all(text.as_bytes()))?;
    }
    Ok(report)
}

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Omega1,
    Omega2,
    CouplingJ,
    A1,
    A2,
    Duration,
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.trim() {
            "omega1" => SweepParam::Omega1,
            "omega2" => SweepParam::Omega2,
            "coupling_j" => SweepParam::CouplingJ,
            "a1" => SweepParam::A1,
            "a2" => SweepParam::A2,
            "duration" => SweepParam::Duration,
            other => return Err(format!("cannot sweep `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub duration: f64,
    /// `|c₁₀(τ)|²` starting from `|11⟩`.
    pub transfer: f64,
    pub fidelity_raw_i_cn: f64,
    /// Primed-frame fidelity against `GCN(0, 0, π/2, π/2)`.
    pub fidelity_primed_gcn: f64,
}

pub const SWEEP_HEADER: &str =
    "index,value,duration,transfer,fidelity_raw_i_cn,fidelity_primed_gcn";

fn sweep_point(config: &RunConfig, spec: &SweepSpec, index: usize) -> Result<SweepRow> {
    let value = if spec.points == 1 {
        spec.from
    } else {
        spec.from + (spec.to - spec.from) * index as f64 / (spec.points - 1) as f64
    };
    let mut c = config.clone();
    match spec.param {
        SweepParam::Omega1 => c.system.omega1 = value,
        SweepParam::Omega2 => c.system.omega2 = value,
        SweepParam::CouplingJ => c.system.coupling_j = value,
        SweepParam::A1 => c.a1 = value,
        SweepParam::A2 => c.a2 = value,
        SweepParam::Duration => c.duration = Setting::Value(value),
    }
    c.carrier = c.system.resonant_carrier();
    c.validate()?;
    let pulse = c.resolve_pulse()?;
    let prop = build_generator(&c.system, &pulse)?.propagator()?;
    let quarter = gcn_matrix(&GcnPhases::new(0.0, 0.0, FRAC_PI_2, FRAC_PI_2));
    Ok(SweepRow {
        index,
        value,
        duration: pulse.duration,
        transfer: transfer_probability(&prop, pulse.duration),
        fidelity_raw_i_cn: gate_fidelity(
            &tomography(&c.system, &pulse, Frame::Raw)?,
            &i_cn_matrix(),
        ),
        fidelity_primed_gcn: gate_fidelity(
            &tomography(&c.system, &pulse, Frame::Primed)?,
            &quarter,
        ),
    })
}

/// Evaluates a one-parameter grid in parallel. Rows come back in grid
/// order.
pub fn cmd_sweep(config: &RunConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.points == 0 || !spec.from.is_finite() || !spec.to.is_finite() {
        return Err(Error::InvalidSearch(format!(
            "sweep needs finite bounds and at least one point, got {spec:?}"
        )));
    }
    let rows = (0..spec.points)
        .into_par_iter()
        .map(|i| sweep_point(config, spec, i))
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = &config.out {
        write_to(path, |w| write_sweep(&rows, w))?;
    }
    Ok(rows)
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.index, r.value, r.duration, r.transfer, r.fidelity_raw_i_cn, r.fidelity_primed_gcn
        )?;
    }
    Ok(())
}
