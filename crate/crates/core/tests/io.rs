// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use proptest::prelude::*;

use ising_cn::config::{parse_config, InitialSpec, Preset, RunConfig, Setting};
use ising_cn::csv::{read_timeseries, write_timeseries};
use ising_cn::propagator::run_timeseries;
use ising_cn::spin::{BasisLabel, Frame, PulseSpec, QState, SystemParams};
use ising_cn::Error;

fn arb_frame() -> impl Strategy<Value = Frame> {
    prop_oneof![Just(Frame::Raw), Just(Frame::Primed)]
}

fn arb_initial() -> impl Strategy<Value = InitialSpec> {
    prop_oneof![
        (0usize..4).prop_map(|k| InitialSpec::Digital(BasisLabel::from_index(k).unwrap())),
        Just(InitialSpec::Superposition),
        prop::array::uniform8(-1.0f64..1.0)
            .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|v| {
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                InitialSpec::Custom(
                    [0, 1, 2, 3].map(|k| Complex64::new(v[2 * k] / n, v[2 * k + 1] / n)),
                )
            }),
    ]
}

fn arb_setting(lo: f64, hi: f64) -> impl Strategy<Value = Setting> {
    prop_oneof![Just(Setting::Auto), (lo..hi).prop_map(Setting::Value)]
}

prop_compose! {
    fn arb_config()(
        w1 in 300.0f64..700.0,
        w2 in 50.0f64..150.0,
        j in 1.0f64..10.0,
        a1 in 0.0f64..1.0,
        a2 in 0.01f64..0.3,
        duration in arb_setting(1.0, 50.0),
        initial in arb_initial(),
        frame in arb_frame(),
        sample_dt in arb_setting(1e-3, 1.0),
    ) -> RunConfig {
        let system = SystemParams::new(w1, w2, j).unwrap();
        RunConfig {
            system,
            carrier: system.resonant_carrier(),
            a1,
            a2,
            duration,
            initial,
            frame,
            sample_dt,
            out: None,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trip(config in arb_config()) {
        let back = parse_config(&config.to_config_string()).unwrap();
        prop_assert_eq!(back, config);
    }

    #[test]
    fn timeseries_csv_round_trip(
        a2 in 0.01f64..0.3,
        duration in 0.5f64..40.0,
        initial in arb_initial(),
        frame in arb_frame(),
    ) {
        let sys = Preset::Params12.system();
        let pulse = PulseSpec::resonant(&sys, 0.5, a2, duration).unwrap();
        let series = run_timeseries(&sys, &pulse, &initial.state().unwrap(), duration / 37.0, frame).unwrap();
        let mut buf = Vec::new();
        write_timeseries(&series, &mut buf).unwrap();
        let back = read_timeseries(buf.as_slice(), frame).unwrap();
        prop_assert_eq!(back, series);
    }
}

#[test]
fn config_errors_carry_line_numbers() {
    let err = parse_config("preset = params12\n\nomega1 = fast\n").unwrap_err();
    assert!(matches!(err, Error::Config { line: 3, .. }), "{err}");
    let err = parse_config("preset = params12\ninitial = digital:2\n").unwrap_err();
    assert!(err.to_string().contains("00, 01, 10, 11"), "{err}");
    let err = parse_config("preset = params12\nfoo = 1\n").unwrap_err();
    assert!(matches!(err, Error::Config { line: 2, .. }));
}

#[test]
fn off_resonant_carrier_is_rejected_with_the_resonant_value() {
    let err = parse_config("preset = params12\ncarrier = 96\n")
        .and_then(|c| c.resolve_pulse())
        .unwrap_err();
    assert!(err.to_string().contains("omega2 - J"), "{err}");
}

#[test]
fn timeseries_ends_exactly_at_duration() {
    let sys = Preset::Params12.system();
    let pulse = Preset::Params12.pulse(31.4);
    let series = run_timeseries(
        &sys,
        &pulse,
        &QState::digital(BasisLabel::Ket11),
        0.3,
        Frame::Primed,
    )
    .unwrap();
    assert_eq!(series.rows.first().unwrap().t, 0.0);
    assert_eq!(series.last().unwrap().t, 31.4);
    for row in &series.rows {
        assert!((row.norm - 1.0).abs() < 1e-12);
    }
}
