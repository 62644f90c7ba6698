// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ising_cn::calibrate::{FreeParam, SearchSpec};
use ising_cn::cli::{
    cmd_calibrate, cmd_simulate, cmd_sweep, cmd_tomography, write_sweep, CalibrateFlags,
    SweepParam, SweepSpec,
};
use ising_cn::config::{parse_config, InitialSpec, Preset, RunConfig, Setting};
use ising_cn::spin::Frame;
use ising_cn::Error;

/// Resonant pi-pulse gates in a two-spin Ising chain.
#[derive(Parser, Debug)]
#[command(name = "ising-cn", version)]
struct Cli {
    /// Config file (`key = value` lines).
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named parameter set: params12 or params24.
    #[arg(long, global = true)]
    preset: Option<Preset>,
    /// digital:<00|01|10|11>, superposition, or custom:re,im;re,im;re,im;re,im
    #[arg(long, global = true)]
    initial: Option<InitialSpec>,
    #[arg(long, global = true)]
    frame: Option<Frame>,
    /// Pulse duration, or `auto` to calibrate a pi-pulse.
    #[arg(long, global = true)]
    duration: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the amplitudes across the pulse and emit CSV.
    Simulate {
        #[arg(long)]
        sample_dt: Option<f64>,
    },
    /// Reconstruct the gate from the four digital inputs.
    Tomography,
    /// Calibrate the pi-pulse duration and/or search for a pure CN gate.
    Calibrate(CalibrateArgs),
    /// Evaluate gate figures of merit over a one-parameter grid.
    Sweep {
        /// omega1, omega2, coupling_j, a1, a2 or duration
        #[arg(long)]
        param: SweepParam,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    /// Maximize |10> population from |11> over the duration.
    #[arg(long)]
    pi_duration: bool,
    /// Scan the duration alone for the best raw-frame match to i*CN.
    #[arg(long)]
    cn_duration: bool,
    /// Nelder-Mead search for a raw-frame i*CN gate.
    #[arg(long)]
    pure_cn: bool,
    /// Comma-separated free coordinates: omega1, a2, duration.
    #[arg(long, value_delimiter = ',', default_value = "omega1,a2,duration")]
    free: Vec<FreeParam>,
    /// Keep a1 = a2 * omega1 / omega2 during the search.
    #[arg(long)]
    tie_a1: bool,
    /// Relative half-width of the search box.
    #[arg(long, default_value_t = 5e-3)]
    window: f64,
    #[arg(long, default_value_t = 2000)]
    max_evals: usize,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

fn load(cli: &Cli) -> Result<RunConfig, Error> {
    let mut config = match (&cli.config, cli.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_config(&text)?
        }
        (None, Some(preset)) => RunConfig::from_preset(preset),
        (None, None) => RunConfig::from_preset(Preset::Params12),
    };
    if let Some(initial) = cli.initial {
        config.initial = initial;
    }
    if let Some(frame) = cli.frame {
        config.frame = frame;
    }
    if let Some(d) = &cli.duration {
        config.duration = if d == "auto" {
            Setting::Auto
        } else {
            let v = d.parse::<f64>().map_err(|_| Error::InvalidParameter {
                name: "duration",
                value: f64::NAN,
                reason: "must be a number or `auto`",
            })?;
            Setting::Value(v)
        };
    }
    if let Some(out) = &cli.out {
        config.out = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<bool, Error> {
    let mut config = load(&cli)?;
    match cli.command {
        Command::Simulate { sample_dt } => {
            if let Some(dt) = sample_dt {
                config.sample_dt = Setting::Value(dt);
            }
            let output = cmd_simulate(&config)?;
            if config.out.is_none() {
                output
                    .write_csv(std::io::stdout().lock())
                    .map_err(|e| Error::io("<stdout>", e))?;
            } else {
                eprintln!(
                    "wrote {} rows, duration = {}",
                    output.series.rows.len(),
                    output.pulse.duration
                );
            }
            Ok(true)
        }
        Command::Tomography => {
            let report = cmd_tomography(&config)?;
            for line in report.summary_lines() {
                println!("{line}");
            }
            if config.out.is_none() {
                ising_cn::csv::write_gate(&report.gate, std::io::stdout().lock())
                    .map_err(|e| Error::io("<stdout>", e))?;
            }
            Ok(report.is_success())
        }
        Command::Calibrate(args) => {
            let flags = CalibrateFlags {
                pi_duration: args.pi_duration,
                cn_duration: args.cn_duration,
                pure_cn: args.pure_cn,
                search: SearchSpec {
                    free: args.free,
                    window: args.window,
                    tie_a1: args.tie_a1,
                    max_evals: args.max_evals,
                    tolerance: args.tolerance,
                    ..SearchSpec::default()
                },
            };
            let report = cmd_calibrate(&config, &flags)?;
            print!("{}", report.to_report_string());
            Ok(report.converged)
        }
        Command::Sweep {
            param,
            from,
            to,
            points,
        } => {
            let rows = cmd_sweep(
                &config,
                &SweepSpec {
                    param,
                    from,
                    to,
                    points,
                },
            )?;
            if config.out.is_none() {
                write_sweep(&rows, std::io::stdout().lock())
                    .map_err(|e| Error::io("<stdout>", e))?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        // a closed pipe (`| head`) is not a failure
        Err(Error::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
