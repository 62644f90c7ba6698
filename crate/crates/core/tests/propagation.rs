// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! Propagator properties, checked against independent oracles.

use nalgebra::Matrix4;
use num_complex::Complex64;
use proptest::prelude::*;

use ising_cn::calibrate::{calibrate_pi_duration, transfer_probability};
use ising_cn::config::Preset;
use ising_cn::propagator::{
    build_generator, evolve_exact, evolve_rk4, free_evolve, rk4_integrate, to_primed,
};
use ising_cn::spin::{BasisLabel, PulseSpec, QState, SystemParams};

/// Durations that maximize the `|11⟩ → |10⟩` transfer, from a 40-digit
/// reference computation.
const TAU_STAR_12: f64 = 31.41593408085229;
const TAU_STAR_24: f64 = 31.36581194861925;

/// `exp(i t B / 2)` by scaling and squaring a Taylor series.
fn taylor_propagator(b: &Matrix4<f64>, t: f64) -> Matrix4<Complex64> {
    let a: Matrix4<Complex64> = b.map(|x| Complex64::new(0.0, 0.5 * t * x));
    let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * 4.0;
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let scaled = a.unscale(2f64.powi(squarings));
    let mut sum = Matrix4::identity();
    let mut term = Matrix4::identity();
    for k in 1..30 {
        term = term * scaled / Complex64::new(k as f64, 0.0);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

fn max_entry(m: &Matrix4<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn arb_state() -> impl Strategy<Value = QState> {
    prop::array::uniform8(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let amps = [0, 1, 2, 3].map(|k| Complex64::new(v[2 * k], v[2 * k + 1]));
            QState::superposition(amps, true).unwrap()
        })
}

fn arb_setup() -> impl Strategy<Value = (SystemParams, PulseSpec)> {
    (
        300.0f64..700.0,
        50.0f64..150.0,
        1.0f64..10.0,
        0.0f64..1.0,
        0.0f64..0.3,
    )
        .prop_map(|(w1, w2, j, a1, a2)| {
            let sys = SystemParams::new(w1, w2, j).unwrap();
            (sys, PulseSpec::resonant(&sys, a1, a2, 1.0).unwrap())
        })
}

#[test]
fn eigen_propagator_matches_taylor_oracle() {
    let p = Preset::Params12;
    let gen = build_generator(&p.system(), &p.pulse(TAU_STAR_12)).unwrap();
    let prop = gen.propagator().unwrap();
    for t in [0.0, 0.01, 1.0, TAU_STAR_12, 100.0] {
        // each squaring doubles the oracle's own rounding error
        let d = max_entry(&(prop.unitary(t) - taylor_propagator(gen.matrix(), t)));
        assert!(d < 1e-9, "t = {t}: {d:e}");
    }
}

#[test]
fn calibrated_durations_match_reference() {
    for (preset, frozen) in [
        (Preset::Params12, TAU_STAR_12),
        (Preset::Params24, TAU_STAR_24),
    ] {
        let tau = calibrate_pi_duration(&preset.system(), &preset.pulse(0.0)).unwrap();
        assert!(
            (tau - frozen).abs() < 1e-9,
            "{}: {tau} vs {frozen}",
            preset.name()
        );
    }
}

#[test]
fn transfer_peaks_just_above_half_period() {
    let p = Preset::Params12;
    let prop = build_generator(&p.system(), &p.pulse(TAU_STAR_12))
        .unwrap()
        .propagator()
        .unwrap();
    let peak = transfer_probability(&prop, TAU_STAR_12);
    assert!((peak - 0.99999923618068).abs() < 1e-12, "{peak}");
    for dt in [-1e-3, 1e-3] {
        assert!(transfer_probability(&prop, TAU_STAR_12 + dt) < peak);
    }
}

#[test]
fn decoupled_limit_is_exact_half_period() {
    let sys = Preset::Params12.system();
    let tau =
        calibrate_pi_duration(&sys, &PulseSpec::resonant(&sys, 0.0, 0.1, 0.0).unwrap()).unwrap();
    assert!((tau - std::f64::consts::PI / 0.1).abs() < 1e-9, "{tau}");
}

#[test]
fn rk4_converges_at_fourth_order() {
    let p = Preset::Params12;
    let gen = build_generator(&p.system(), &p.pulse(TAU_STAR_12)).unwrap();
    let initial = QState::digital(BasisLabel::Ket11);
    let t = 2.0;
    let exact = evolve_exact(&initial, &gen, t).unwrap();
    let coarse = rk4_integrate(&initial, &gen, t, 4000).max_abs_diff(&exact);
    let fine = rk4_integrate(&initial, &gen, t, 8000).max_abs_diff(&exact);
    let ratio = coarse / fine;
    assert!((12.0..20.0).contains(&ratio), "error ratio {ratio}");
    let dt = t / 40_000.0;
    let checked = evolve_rk4(&initial, &gen, t, dt).unwrap();
    assert!(checked.max_abs_diff(&exact) < 1e-8);
}

#[test]
fn rk4_rejects_unstable_steps() {
    let p = Preset::Params12;
    let gen = build_generator(&p.system(), &p.pulse(TAU_STAR_12)).unwrap();
    let s = QState::digital(BasisLabel::Ket00);
    assert!(evolve_rk4(&s, &gen, TAU_STAR_12, TAU_STAR_12 / 1e4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unitary((sys, pulse) in arb_setup(), t in 0.0f64..60.0) {
        let u = build_generator(&sys, &pulse).unwrap().propagator().unwrap().unitary(t);
        let dev = max_entry(&(u.adjoint() * u - Matrix4::identity()));
        prop_assert!(dev < 1e-12, "{dev:e}");
    }

    #[test]
    fn norm_is_conserved((sys, pulse) in arb_setup(), s in arb_state(), t in 0.0f64..60.0) {
        let out = build_generator(&sys, &pulse).unwrap().propagator().unwrap().evolve(&s, t);
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn group_property((sys, pulse) in arb_setup(), s in 0.0f64..40.0, t in 0.0f64..40.0) {
        let prop = build_generator(&sys, &pulse).unwrap().propagator().unwrap();
        let d = max_entry(&(prop.unitary(s) * prop.unitary(t) - prop.unitary(s + t)));
        prop_assert!(d < 1e-10, "{d:e}");
    }

    #[test]
    fn primed_frame_only_changes_phases((sys, _) in arb_setup(), s in arb_state(), t in 0.0f64..50.0) {
        let p = to_primed(&s, t, &sys).unwrap();
        for (a, b) in p.amplitudes().iter().zip(s.amplitudes()) {
            prop_assert!((a.norm() - b.norm()).abs() < 1e-14);
        }
        let back = free_evolve(&p, t, &sys).unwrap();
        prop_assert!(back.max_abs_diff(&s) < 1e-12);
    }

    #[test]
    fn undriven_evolution_is_pure_phase(s in arb_state(), t in 0.0f64..50.0) {
        let sys = Preset::Params12.system();
        let pulse = PulseSpec::resonant(&sys, 0.0, 0.0, t).unwrap();
        let gen = build_generator(&sys, &pulse).unwrap();
        let raw = evolve_exact(&s, &gen, t).unwrap();
        // with no drive the primed frame undoes the evolution exactly
        prop_assert!(to_primed(&raw, t, &sys).unwrap().max_abs_diff(&s) < 1e-12);
    }
}
