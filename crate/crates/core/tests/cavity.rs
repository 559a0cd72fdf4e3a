use cqed_core::cavity::{bare_s_params, resonances, s_denominator_norm, small_gap_estimate, ResonatorGeometry};
use proptest::prelude::*;

fn geometry(ratio: f64) -> ResonatorGeometry {
    ResonatorGeometry::from_ratio(0.012, 1.44e-10, 1.3e8, ratio)
}

fn width_error(ratio: f64, n: u32) -> f64 {
    let g = geometry(ratio);
    let exact = resonances(&g, n).unwrap()[n as usize - 1];
    (small_gap_estimate(&g, n).1 / exact.gamma - 1.0).abs()
}

#[test]
fn vanishing_gap_recovers_bare_harmonics() {
    let g = geometry(1e-9);
    for mode in resonances(&g, 6).unwrap() {
        assert!((mode.omega / g.bare_harmonic(mode.n) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn small_gap_shift_matches_exact_pole() {
    for ratio in [0.001, 0.005, 0.01] {
        let g = geometry(ratio);
        for mode in resonances(&g, 4).unwrap() {
            let w0 = g.bare_harmonic(mode.n);
            let exact_shift = mode.omega - w0;
            let estimate = small_gap_estimate(&g, mode.n).0 - w0;
            assert!((estimate / exact_shift - 1.0).abs() < 0.05, "ratio {ratio}, n {}", mode.n);
        }
    }
}

#[test]
fn small_gap_width_error_is_first_order_in_gap() {
    for n in 1..=4 {
        let coarse = width_error(0.005, n);
        let fine = width_error(0.0025, n);
        assert!(coarse < 0.05, "n {n}: {coarse}");
        assert!((1.7..2.5).contains(&(coarse / fine)), "n {n}: {coarse} / {fine}");
        assert!(width_error(1e-5, n) < 1e-3);
    }
}

#[test]
fn quality_factor_is_frequency_over_full_width() {
    let g = geometry(0.002);
    let mode = resonances(&g, 1).unwrap()[0];
    assert_eq!(mode.q_factor, mode.omega / mode.gamma);
    let w0 = g.bare_harmonic(1);
    let z = 1.0 / (g.velocity * g.line_capacitance);
    let full_width_q = g.line_capacitance * g.length / (4.0 * w0 * z * g.gap_capacitance.powi(2));
    assert!((mode.q_factor / full_width_q - 1.0).abs() < 0.05);
}

#[test]
fn lossless_unitarity_on_three_resonances() {
    for ratio in [0.005, 0.04, 20.0] {
        let g = geometry(ratio);
        let top = resonances(&g, 3).unwrap()[2];
        let hi = top.omega + 3.0 * top.gamma;
        for i in 1..=1000 {
            let (s21, s11) = bare_s_params(&g, hi * i as f64 / 1000.0);
            assert!((s21.norm_sqr() + s11.norm_sqr() - 1.0).abs() < 1e-12, "ratio {ratio}");
        }
    }
}

#[test]
fn dc_gap_reflects_and_resonance_transmits() {
    let g = geometry(0.005);
    let (s21, s11) = bare_s_params(&g, 1e-3);
    assert!(s21.norm() < 1e-12 && (s11.norm() - 1.0).abs() < 1e-12);
    let mode = resonances(&g, 1).unwrap()[0];
    assert!(bare_s_params(&g, mode.omega).0.norm() > 0.99);
}

#[test]
fn denominator_is_minimal_at_each_pole() {
    for ratio in [0.001, 0.005, 0.04] {
        let g = geometry(ratio);
        for mode in resonances(&g, 4).unwrap() {
            let best = (-200..=200)
                .map(|i| mode.omega + mode.gamma * i as f64 / 200.0)
                .min_by(|a, b| s_denominator_norm(&g, *a).total_cmp(&s_denominator_norm(&g, *b)))
                .unwrap();
            assert!((best - mode.omega).abs() <= 0.5 * mode.gamma, "ratio {ratio}, n {}", mode.n);
        }
    }
}

#[test]
fn large_gap_capacitance_gives_low_q_modes() {
    let modes = resonances(&geometry(20.0), 3).unwrap();
    assert!(modes.iter().all(|m| m.gamma > 0.0 && m.q_factor < 1.0 && m.q_factor > 0.0));
    assert!(modes.windows(2).all(|w| w[1].omega > w[0].omega));
}

#[test]
fn geometry_is_validated() {
    let mut g = geometry(0.01);
    g.velocity = f64::NAN;
    assert!(resonances(&g, 1).is_err());
    assert!(resonances(&geometry(0.01), 0).is_err());
}

proptest! {
    #[test]
    fn unitarity_and_conjugation(ratio in 1e-4..30.0f64, omega in 1e6..1e12f64) {
        let g = geometry(ratio);
        let (s21, s11) = bare_s_params(&g, omega);
        prop_assert!((s21.norm_sqr() + s11.norm_sqr() - 1.0).abs() < 1e-12);
        let (m21, m11) = bare_s_params(&g, -omega);
        prop_assert!((m21 - s21.conj()).norm() < 1e-15);
        prop_assert!((m11 - s11.conj()).norm() < 1e-15);
    }

    #[test]
    fn poles_decay_and_lie_below_bare_harmonics(ratio in 1e-6..50.0f64) {
        let g = geometry(ratio);
        for mode in resonances(&g, 5).unwrap() {
            prop_assert!(mode.gamma > 0.0);
            prop_assert!(mode.omega < g.bare_harmonic(mode.n));
            prop_assert!(mode.omega > g.bare_harmonic(mode.n) - std::f64::consts::PI * g.velocity / g.length);
        }
    }
}
