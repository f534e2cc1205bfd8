//! Landauer current against closed forms and a brute-force Simpson integral
//! of the full integrand Σᵢ Tᵢ(E) [f_s - f_d].

use num_complex::Complex;
use proptest::prelude::*;
use spinfano::config::Mode;
use spinfano::landauer::{current, current_parts, fermi, linear_conductance, BiasPoint};
use spinfano::spectrum::ResonanceSpec;
use spinfano::transport::{total_transmission, SpinOrientation, TransmissionModel};
use spinfano::PhysicalConstants;

const G0: f64 = PhysicalConstants::G0_SPIN_POLARIZED;

fn model(center: f64, gamma: f64, weight: f64, modes: Vec<Mode<f64>>) -> TransmissionModel<f64> {
    TransmissionModel::with_weight(
        ResonanceSpec { energy: center, gamma, q: Complex::new(0.0, 0.0) },
        weight,
        modes,
    )
    .unwrap()
}

fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
    let n = if n % 2 == 1 { n + 1 } else { n };
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + h * i as f64);
    }
    s * h / 3.0
}

/// Piecewise Simpson; each piece stops just short of the next threshold so a
/// mode opening is never sampled from the wrong side.
fn brute_force_current(bias: &BiasPoint<f64>, m: &TransmissionModel<f64>, cuts: &[f64]) -> f64 {
    let integrand = |e: f64| {
        total_transmission(e, m)
            * (fermi(e, bias.mu_source, bias.temperature) - fermi(e, bias.mu_drain, bias.temperature))
    };
    let pieces: f64 = cuts.windows(2).map(|w| simpson(integrand, w[0], w[1] - 1e-12, 200_000)).sum();
    G0 * 1e-3 * pieces
}

#[test]
fn zero_temperature_matches_arctan_primitive() {
    // ∫_{mu_d}^{mu_s} (1 - w Γ²/((E-E0)²+Γ²)) dE
    for &(center, gamma, w, mu, v) in &[
        (0.0, 1.0, 1.0, 0.0, 1.0),
        (0.3, 0.2, 0.5, 0.0, 2.0),
        (5.0, 1.0, 1.0, 0.0, 3.0),
        (-1.0, 2.5, 1.0, 0.7, 0.4),
    ] {
        let m = model(center, gamma, w, vec![Mode::coupled(-1e3)]);
        let b = BiasPoint::symmetric(mu, v, 0.0).unwrap();
        let (md, ms) = (mu - v / 2.0, mu + v / 2.0);
        let dip = gamma * (((ms - center) / gamma).atan() - ((md - center) / gamma).atan());
        let want = G0 * 1e-3 * (v - w * dip);
        let got = current(&b, &m).unwrap();
        assert!((got / want - 1.0).abs() <= 1e-8, "{got} vs {want}");
    }
}

#[test]
fn finite_temperature_matches_brute_force() {
    let modes = vec![Mode::coupled(-30.0), Mode::ballistic(2.0)];
    for &(t, v, center) in &[(4.2, 1.0, 0.0), (11.6, 2.0, 0.5), (30.0, 0.5, -1.0), (1.0, 3.0, 1.0)] {
        let m = model(center, 1.0, 1.0, modes.clone());
        let b = BiasPoint::symmetric(0.0, v, t).unwrap();
        let got = current(&b, &m).unwrap();
        let kt = PhysicalConstants::K_B * t;
        let want = brute_force_current(&b, &m, &[-30.0, 2.0, 60.0 * kt + 10.0 + v]);
        assert!((got / want - 1.0).abs() <= 1e-6, "T={t}: {got} vs {want}");
    }
}

#[test]
fn linear_conductance_matches_thermal_average() {
    // G = G0 ∫ T(E) (-∂f/∂E) dE
    let m = model(0.0, 1.0, 1.0, vec![Mode::coupled(-1e4)]);
    for t in [1.0, 10.0, 100.0] {
        let kt = PhysicalConstants::K_B * t;
        let minus_df = |e: f64| {
            let x = e / kt;
            1.0 / (kt * (2.0 + x.exp() + (-x).exp()))
        };
        let want = G0 * simpson(|e| total_transmission(e, &m) * minus_df(e), -50.0 * kt, 50.0 * kt, 400_000);
        let got = linear_conductance(&m, t, 0.0).unwrap();
        assert!((got / want - 1.0).abs() <= 1e-5, "T={t}: {got} vs {want}");
    }
}

#[test]
fn dip_washes_out_with_temperature() {
    let m = model(0.0, 1.0, 1.0, vec![Mode::coupled(-1e5)]);
    let mut prev = -1.0;
    for t in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 500.0] {
        let g = linear_conductance(&m, t, 0.0).unwrap();
        assert!(g >= prev, "T={t}");
        assert!(g <= G0 * (1.0 + 1e-9));
        prev = g;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn deficit_linear_in_channel_weight(
        gamma in 0.1..3.0f64,
        v in -4.0..4.0f64,
        t in 0.0..40.0f64,
        center in -5.0..5.0f64,
    ) {
        let modes = vec![Mode::coupled(-200.0)];
        let r = ResonanceSpec { energy: center, gamma, q: Complex::new(0.0, 0.0) };
        let par = TransmissionModel::new(r, SpinOrientation::Parallel, modes.clone()).unwrap();
        let anti = par.oriented(SpinOrientation::Antiparallel);
        let ball = par.reweighted(0.0);
        let b = BiasPoint::symmetric(0.0, v, t).unwrap();
        let i0 = current(&b, &ball).unwrap();
        let d_par = i0 - current(&b, &par).unwrap();
        let d_anti = i0 - current(&b, &anti).unwrap();
        if d_par != 0.0 {
            prop_assert!((d_anti / d_par - 0.5).abs() <= 1e-9, "{} {}", d_par, d_anti);
        }
        let parts = current_parts(&b, &par).unwrap();
        prop_assert_eq!(parts.ballistic, i0);
    }

    #[test]
    fn current_odd_and_bounded(
        v in 0.0..5.0f64,
        t in 0.0..40.0f64,
        center in -5.0..5.0f64,
        second in proptest::option::of(-3.0..3.0f64),
    ) {
        let mut modes = vec![Mode::coupled(-100.0)];
        if let Some(b) = second {
            modes.push(Mode::ballistic(b));
        }
        let n_modes = modes.len() as f64;
        let m = model(center, 1.0, 1.0, modes);
        let fwd = current(&BiasPoint::symmetric(0.3, v, t).unwrap(), &m).unwrap();
        let rev = current(&BiasPoint::symmetric(0.3, -v, t).unwrap(), &m).unwrap();
        prop_assert!((fwd + rev).abs() <= 1e-9 * fwd.abs());
        prop_assert!(fwd.abs() <= n_modes * G0 * 1e-3 * v * (1.0 + 1e-12));
    }
}

#[test]
fn f32_current_tracks_f64() {
    let m64 = model(0.0, 1.0, 1.0, vec![Mode::coupled(-50.0)]);
    let m32 = TransmissionModel::<f32>::with_weight(
        ResonanceSpec { energy: 0.0, gamma: 1.0, q: Complex::new(0.0, 0.0) },
        1.0,
        vec![Mode::coupled(-50.0)],
    )
    .unwrap();
    let i64_ = current(&BiasPoint::symmetric(0.0, 1.0, 4.2).unwrap(), &m64).unwrap();
    let i32_ = current(&BiasPoint::<f32>::symmetric(0.0, 1.0, 4.2).unwrap(), &m32).unwrap();
    assert!((f64::from(i32_) / i64_ - 1.0).abs() < 1e-4);
}
