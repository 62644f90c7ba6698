// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: a flat, line-based `key = value` document.
//!
//! ```text
//! # reference pulse, duration found by calibration
//! preset = params12
//! duration = auto
//! initial = digital:11
//! frame = primed
//! ```
//!
//! Recognized keys: `preset`, `omega1`, `omega2`, `coupling_j`, `carrier`,
//! `a1`, `a2`, `duration`, `initial`, `frame`, `sample_dt`, `out`. A preset
//! is expanded first, wherever it appears; every other key overrides it.
//! `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::calibrate::calibrate_pi_duration;
use crate::error::{Error, Result};
use crate::spin::{BasisLabel, Frame, PulseSpec, QState, SystemParams};

/// Default number of samples across the pulse when `sample_dt` is omitted.
pub const DEFAULT_SAMPLES: f64 = 1000.0;

const KEYS: [&str; 12] = [
    "preset",
    "omega1",
    "omega2",
    "coupling_j",
    "carrier",
    "a1",
    "a2",
    "duration",
    "initial",
    "frame",
    "sample_dt",
    "out",
];

/// Named parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `ω₁ = 500, ω₂ = 100, J = 5, a₁ = 0.5, a₂ = 0.1`: the reference
    /// π-pulse that realizes `GCN(0, 0, π/2, π/2)` in primed amplitudes.
    Params12,
    /// `ω₁ = 500.06, ω₂ = 100, J = 5, a₂ = 0.10016, a₁ = a₂ω₁/ω₂`: the
    /// slightly detuned set that realizes a pure CN in raw amplitudes.
    Params24,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Params12 => "params12",
            Preset::Params24 => "params24",
        }
    }

    pub fn system(self) -> SystemParams {
        match self {
            Preset::Params12 => SystemParams {
                omega1: 500.0,
                omega2: 100.0,
                coupling_j: 5.0,
            },
            Preset::Params24 => SystemParams {
                omega1: 500.06,
                omega2: 100.0,
                coupling_j: 5.0,
            },
        }
    }

    /// `(a₁, a₂)`.
    pub fn amplitudes(self) -> (f64, f64) {
        match self {
            Preset::Params12 => (0.5, 0.1),
            Preset::Params24 => {
                let a2 = 0.10016;
                let sys = self.system();
                (a2 * sys.omega1 / sys.omega2, a2)
            }
        }
    }

    /// The preset's pulse with the given duration, on resonance.
    pub fn pulse(self, duration: f64) -> PulseSpec {
        let (a1, a2) = self.amplitudes();
        PulseSpec {
            carrier: self.system().resonant_carrier(),
            a1,
            a2,
            duration,
            envelope: Default::default(),
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "params12" => Ok(Preset::Params12),
            "params24" => Ok(Preset::Params24),
            other => Err(format!(
                "unknown preset `{other}`; expected params12 or params24"
            )),
        }
    }
}

/// Amplitudes of the `superposition` initial state:
/// `(√(3/10), 1/√5, 1/√3, 1/√6)`.
pub fn superposition_amplitudes() -> [Complex64; 4] {
    [
        (3.0f64 / 10.0).sqrt(),
        1.0 / 5.0f64.sqrt(),
        1.0 / 3.0f64.sqrt(),
        1.0 / 6.0f64.sqrt(),
    ]
    .map(|x| Complex64::new(x, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialSpec {
    Digital(BasisLabel),
    /// The four-way real superposition of [`superposition_amplitudes`].
    Superposition,
    Custom([Complex64; 4]),
}

impl InitialSpec {
    pub fn state(&self) -> Result<QState> {
        match self {
            InitialSpec::Digital(label) => Ok(QState::digital(*label)),
            InitialSpec::Superposition => QState::superposition(superposition_amplitudes(), false),
            InitialSpec::Custom(amps) => QState::superposition(*amps, false),
        }
    }
}

impl FromStr for InitialSpec {
    type Err = String;

    /// `digital:11`, `superposition`, or `custom:re,im;re,im;re,im;re,im`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s == "superposition" {
            return Ok(InitialSpec::Superposition);
        }
        if let Some(label) = s.strip_prefix("digital:") {
            return label
                .parse::<BasisLabel>()
                .map(InitialSpec::Digital)
                .map_err(|e| e.to_string());
        }
        if let Some(body) = s.strip_prefix("custom:") {
            let pairs: Vec<&str> = body.split(';').collect();
            if pairs.len() != 4 {
                return Err(format!(
                    "custom state needs 4 `re,im` pairs, got {}",
                    pairs.len()
                ));
            }
            let mut amps = [Complex64::new(0.0, 0.0); 4];
            for (slot, pair) in amps.iter_mut().zip(pairs) {
                let (re, im) = pair
                    .split_once(',')
                    .ok_or_else(|| format!("expected `re,im`, got `{}`", pair.trim()))?;
                *slot = Complex64::new(parse_number(re)?, parse_number(im)?);
            }
            return Ok(InitialSpec::Custom(amps));
        }
        Err(format!(
            "unknown initial state `{s}`; expected digital:<00|01|10|11>, superposition or custom:re,im;..."
        ))
    }
}

impl std::fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitialSpec::Digital(label) => write!(f, "digital:{label}"),
            InitialSpec::Superposition => f.write_str("superposition"),
            InitialSpec::Custom(amps) => {
                f.write_str("custom:")?;
                for (i, c) in amps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{},{}", c.re, c.im)?;
                }
                Ok(())
            }
        }
    }
}

fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

/// Either a fixed value or `auto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Setting {
    Auto,
    Value(f64),
}

impl Setting {
    fn parse(s: &str) -> std::result::Result<Self, String> {
        if s.trim() == "auto" {
            Ok(Setting::Auto)
        } else {
            parse_number(s).map(Setting::Value)
        }
    }
}

impl std::fmt::Display for Setting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Setting::Auto => f.write_str("auto"),
            Setting::Value(v) => write!(f, "{v}"),
        }
    }
}

/// A fully validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemParams,
    /// Always resolved; `carrier = auto` becomes `ω₂ − J` at parse time.
    pub carrier: f64,
    pub a1: f64,
    pub a2: f64,
    /// `auto` calibrates the π-pulse duration.
    pub duration: Setting,
    pub initial: InitialSpec,
    pub frame: Frame,
    /// `auto` samples the pulse at [`DEFAULT_SAMPLES`] intervals.
    pub sample_dt: Setting,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_preset(preset: Preset) -> Self {
        let system = preset.system();
        let (a1, a2) = preset.amplitudes();
        RunConfig {
            system,
            carrier: system.resonant_carrier(),
            a1,
            a2,
            duration: Setting::Auto,
            initial: InitialSpec::Digital(BasisLabel::Ket11),
            frame: Frame::Primed,
            sample_dt: Setting::Auto,
            out: None,
        }
    }

    /// The pulse with a placeholder zero duration when `duration = auto`.
    pub fn pulse_template(&self) -> Result<PulseSpec> {
        let duration = match self.duration {
            Setting::Value(v) => v,
            Setting::Auto => 0.0,
        };
        PulseSpec::new(self.carrier, self.a1, self.a2, duration)
    }

    /// The pulse with its duration resolved, calibrating if needed.
    pub fn resolve_pulse(&self) -> Result<PulseSpec> {
        let template = self.pulse_template()?;
        match self.duration {
            Setting::Value(_) => Ok(template),
            Setting::Auto => {
                let tau = calibrate_pi_duration(&self.system, &template)?;
                Ok(template.with_duration(tau))
            }
        }
    }

    pub fn resolve_sample_dt(&self, duration: f64) -> f64 {
        match self.sample_dt {
            Setting::Value(v) => v,
            Setting::Auto if duration > 0.0 => duration / DEFAULT_SAMPLES,
            Setting::Auto => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.pulse_template()?.ensure_resonant(&self.system)?;
        self.initial.state()?;
        if let Setting::Value(v) = self.sample_dt {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "sample_dt",
                    value: v,
                    reason: "must be > 0",
                });
            }
        }
        Ok(())
    }

    /// Serializes to the config format. Parsing the output reproduces `self`
    /// exactly.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "omega1 = {}", self.system.omega1);
        let _ = writeln!(s, "omega2 = {}", self.system.omega2);
        let _ = writeln!(s, "coupling_j = {}", self.system.coupling_j);
        let _ = writeln!(s, "carrier = {}", self.carrier);
        let _ = writeln!(s, "a1 = {}", self.a1);
        let _ = writeln!(s, "a2 = {}", self.a2);
        let _ = writeln!(s, "duration = {}", self.duration);
        let _ = writeln!(s, "initial = {}", self.initial);
        let _ = writeln!(s, "frame = {}", self.frame);
        let _ = writeln!(s, "sample_dt = {}", self.sample_dt);
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        s
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

/// Parses a config document. Errors carry the 1-based line number of the
/// offending entry (line 0 for keys that are missing altogether).
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: BTreeMap<&'static str, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(line_no, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let known = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| config_err(line_no, format!("unknown key `{key}`")))?;
        if entries
            .insert(known, (line_no, value.trim().to_string()))
            .is_some()
        {
            return Err(config_err(line_no, format!("duplicate key `{key}`")));
        }
    }

    let preset = match entries.get("preset") {
        Some((line, v)) => Some(v.parse::<Preset>().map_err(|e| config_err(*line, e))?),
        None => None,
    };
    let base = preset.map(RunConfig::from_preset);

    let number = |key: &str, fallback: Option<f64>| -> Result<f64> {
        match entries.get(key) {
            Some((line, v)) => {
                parse_number(v).map_err(|e| config_err(*line, format!("{key}: {e}")))
            }
            None => fallback.ok_or_else(|| config_err(0, format!("missing required key `{key}`"))),
        }
    };
    let setting = |key: &str, fallback: Setting| -> Result<Setting> {
        match entries.get(key) {
            Some((line, v)) => {
                Setting::parse(v).map_err(|e| config_err(*line, format!("{key}: {e}")))
            }
            None => Ok(fallback),
        }
    };
    let line_of = |key: &str| entries.get(key).map_or(0, |(l, _)| *l);

    let system = SystemParams {
        omega1: number("omega1", base.as_ref().map(|b| b.system.omega1))?,
        omega2: number("omega2", base.as_ref().map(|b| b.system.omega2))?,
        coupling_j: number("coupling_j", base.as_ref().map(|b| b.system.coupling_j))?,
    };
    system.validate().map_err(|e| {
        let line = ["omega1", "omega2", "coupling_j"]
            .iter()
            .map(|k| line_of(k))
            .max()
            .unwrap_or(0);
        config_err(line, e.to_string())
    })?;

    let carrier = match setting("carrier", Setting::Auto)? {
        Setting::Auto => system.resonant_carrier(),
        Setting::Value(v) => v,
    };
    let a1 = number("a1", base.as_ref().map(|b| b.a1))?;
    let a2 = number("a2", base.as_ref().map(|b| b.a2))?;
    let duration = setting("duration", Setting::Auto)?;
    let sample_dt = setting("sample_dt", Setting::Auto)?;

    let initial = match entries.get("initial") {
        Some((line, v)) => v.parse::<InitialSpec>().map_err(|e| config_err(*line, e))?,
        None => InitialSpec::Digital(BasisLabel::Ket11),
    };
    initial
        .state()
        .map_err(|e| config_err(line_of("initial"), e.to_string()))?;
    let frame = match entries.get("frame") {
        Some((line, v)) => v.parse::<Frame>().map_err(|e| config_err(*line, e))?,
        None => Frame::Primed,
    };
    let out = entries.get("out").map(|(_, v)| PathBuf::from(v));

    let config = RunConfig {
        system,
        carrier,
        a1,
        a2,
        duration,
        initial,
        frame,
        sample_dt,
        out,
    };
    config.pulse_template().map_err(|e| {
        let line = ["carrier", "a1", "a2", "duration"]
            .iter()
            .map(|k| line_of(k))
            .max()
            .unwrap_or(0);
        config_err(line, e.to_string())
    })?;
    config
        .pulse_template()?
        .ensure_resonant(&system)
        .map_err(|e| config_err(line_of("carrier"), e.to_string()))?;
    if let Setting::Value(v) = sample_dt {
        if !(v > 0.0) {
            return Err(config_err(line_of("sample_dt"), "sample_dt must be > 0"));
        }
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_preset_expansion() {
        let c = parse_config("preset = params12\n").unwrap();
        assert_eq!(c.system, SystemParams::new(500.0, 100.0, 5.0).unwrap());
        assert_eq!(c.carrier, 95.0);
        assert_eq!((c.a1, c.a2), (0.5, 0.1));
        assert_eq!(c.duration, Setting::Auto);
    }

    #[test]
    fn pure_cn_preset_expansion() {
        let c = parse_config("preset = params24").unwrap();
        assert_eq!(c.system.omega1, 500.06);
        assert_eq!(c.system.omega2, 100.0);
        assert_eq!(c.system.coupling_j, 5.0);
        assert_eq!(c.a2, 0.10016);
        assert!((c.a1 - 0.10016 * 500.06 / 100.0).abs() < 1e-16);
        assert_eq!(c.carrier, 95.0);
    }

    #[test]
    fn explicit_keys_override_preset() {
        let c = parse_config("a2 = 0.2 # stronger\npreset = params12\nduration = 3.5").unwrap();
        assert_eq!(c.a2, 0.2);
        assert_eq!(c.duration, Setting::Value(3.5));
    }

    #[test]
    fn initial_state_forms() {
        let c = parse_config("preset = params12\ninitial = digital:11").unwrap();
        assert_eq!(
            c.initial.state().unwrap(),
            QState::digital(BasisLabel::Ket11)
        );
        let c = parse_config("preset = params12\ninitial = superposition").unwrap();
        assert!((c.initial.state().unwrap().norm_sqr() - 1.0).abs() < 1e-15);
        let c =
            parse_config("preset = params12\ninitial = custom: 0.6,0; 0,0.8; 0,0; 0,0").unwrap();
        assert_eq!(
            c.initial.state().unwrap().amplitude(BasisLabel::Ket01),
            Complex64::new(0.0, 0.8)
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_config("preset = params12\n\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }), "{err}");

        let err = parse_config("preset = params12\na2 = abc\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }), "{err}");

        let err =
            parse_config("omega1 = 500\nomega2 = 100\ncoupling_j = 5\na1 = 0.5\n").unwrap_err();
        assert!(
            err.to_string().contains("missing required key `a2`"),
            "{err}"
        );

        let err = parse_config("preset = params12\n# comment\ninitial = custom:1,0;1,0;0,0;0,0\n")
            .unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }), "{err}");
        assert!(err.to_string().contains("norm"), "{err}");

        let err = parse_config("preset = params12\ncarrier = 105\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }), "{err}");

        let err = parse_config("preset = params12\nfrmae = raw\n").unwrap_err();
        assert!(err.to_string().contains("unknown key `frmae`"), "{err}");

        let err = parse_config("preset = params12\npreset = params24\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
    }

    #[test]
    fn serialization_round_trip() {
        let mut c = RunConfig::from_preset(Preset::Params24);
        c.duration = Setting::Value(31.415126695096042);
        c.initial = InitialSpec::Custom([
            Complex64::new(0.1, -0.2),
            Complex64::new(0.3, 0.4),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, (1.0f64 - 0.55).sqrt()),
        ]);
        c.out = Some("run.csv".into());
        let text = c.to_config_string();
        assert_eq!(parse_config(&text).unwrap(), c);
    }
}
