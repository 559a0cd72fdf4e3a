use cqed_core::constants::TWO_PI;
use cqed_core::detector::{
    cavity_photon_number, comb_spectrum, comb_weights, default_grid, detuning_error, figure_of_merit, fit_pole,
    linspace, qubit_response_coherent, qubit_response_coherent_hypergeometric, qubit_response_incoherent,
    qubit_response_thermal, s21_probe, s21_probe_components, s21_signal, sweep, two_branch_components,
    vacuum_response, CavityDrive, CavityParams, PhotonAmount, QubitParams, SignalField, SignalState, SystemParams,
};
use cqed_core::specfun::expint_en;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;

fn system(chi_hz: f64, gamma_c_hz: f64) -> SystemParams {
    SystemParams {
        cavity: CavityParams {
            omega_c: TWO_PI * 9e9,
            gamma_c: TWO_PI * gamma_c_hz,
        },
        qubits: vec![QubitParams {
            omega_q: TWO_PI * 10e9,
            chi: TWO_PI * chi_hz,
            gamma: TWO_PI * 250e3,
            gamma_phi: 0.0,
        }],
    }
}

fn fig1() -> SystemParams {
    system(10e6, 100e3)
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Gauss-Laguerre nodes and weights for `∫₀^∞ e^{−x} f(x) dx` from the
/// eigen-decomposition of the Jacobi matrix.
fn gauss_laguerre(n: usize) -> Vec<(f64, f64)> {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jacobi[(i, i)] = 2.0 * i as f64 + 1.0;
        if i + 1 < n {
            jacobi[(i, i + 1)] = i as f64 + 1.0;
            jacobi[(i + 1, i)] = i as f64 + 1.0;
        }
    }
    let eigen = SymmetricEigen::new(jacobi);
    (0..n)
        .map(|k| (eigen.eigenvalues[k], eigen.eigenvectors[(0, k)].powi(2)))
        .collect()
}

#[test]
fn vacuum_field_gives_single_lorentzian() {
    let sys = fig1();
    let q = sys.qubits[0];
    let sig = SignalState::vacuum();
    let fit = fit_pole(|wp| Ok(s21_probe_components(wp, &sys, &sig)?.qubits[0]), q.omega_q, q.gamma_prime()).unwrap();
    assert!((fit.position() - q.omega_q).abs() < 1e-6 * q.gamma_prime());
    assert!((fit.half_width() / (TWO_PI * 125e3) - 1.0).abs() < 1e-6);
}

#[test]
fn far_detuned_probe_sees_cavity_tail() {
    let sys = fig1();
    let wp = TWO_PI * 12e9;
    let s = s21_probe(wp, &sys, &SignalState::coherent(1.0)).unwrap();
    let tail = Complex64::new(0.0, -sys.cavity.gamma_c) / (2.0 * (wp - sys.cavity.omega_c));
    assert!(s.norm() < 1e-4);
    assert!(relative(s, tail) < 0.2);
}

#[test]
fn probe_frequency_must_be_positive() {
    let sys = fig1();
    assert!(s21_probe(0.0, &sys, &SignalState::vacuum()).is_err());
    assert!(s21_probe(-1.0, &sys, &SignalState::vacuum()).is_err());
}

#[test]
fn signal_transmission_limits() {
    let sys = fig1();
    let w = sys.omega_c_star();
    let gc = sys.cavity.gamma_c;
    assert!((s21_signal(w, &sys) + 1.0).norm() < 1e-4);
    let excess = s21_signal(w + 0.5 * gc, &sys).norm_sqr() - 0.5;
    let counter_rotating = gc / (4.0 * w);
    assert!(excess.abs() < 1e-5);
    assert!((excess - counter_rotating).abs() < 1e-3 * counter_rotating);
    assert!(s21_signal(w + 1e4 * gc, &sys).norm() < 1e-3);
}

#[test]
fn photon_number_examples() {
    let sys = fig1();
    let gc = sys.cavity.gamma_c;
    let coherent = |flux: f64, detuning: f64| SignalState {
        field: SignalField::Coherent {
            amount: PhotonAmount::Flux(flux),
        },
        signal_omega: None,
    }
    .with_detuning(&sys, detuning);
    assert!((cavity_photon_number(&coherent(gc / 2.0, 0.0), &sys).0 - 1.0).abs() < 1e-12);
    let j = 3.0e6;
    assert!((cavity_photon_number(&coherent(j, gc / 2.0), &sys).0 / (j / gc) - 1.0).abs() < 1e-9);
    let thermal = SignalState::thermal(TWO_PI * 1e9, 1e-9 / TWO_PI);
    assert!((cavity_photon_number(&thermal, &sys).0 - 1.0).abs() < 1e-12);
}

#[test]
fn incoherent_response_is_p_average_of_coherent_response() {
    let sys = system(1e6, 1e6);
    let q = sys.qubits[0];
    let nbar = 0.7;
    let drive = CavityDrive::new(&sys, &SignalState::incoherent(nbar));
    let rule = |nodes: usize, wp: f64| -> Complex64 {
        gauss_laguerre(nodes)
            .into_iter()
            .map(|(x, w)| w * qubit_response_coherent(wp, &q, &drive, Complex64::new((nbar * x).sqrt(), 0.0)).unwrap())
            .sum()
    };
    for offset in [-1.0, 0.0, 0.9, 2.3, 4.0] {
        let wp = q.omega_q + offset * q.chi;
        let analytic = qubit_response_incoherent(wp, &q, &drive, nbar).unwrap();
        let errors: Vec<f64> = [20, 40, 80].iter().map(|&n| relative(rule(n, wp), analytic)).collect();
        assert!(errors[2] < 1e-6, "{offset}: {errors:?}");
    }
}

#[test]
fn incoherent_high_q_limit_is_geometric_comb() {
    let sys = system(10e6, 1e3);
    let q = sys.qubits[0];
    let nbar = 1.0;
    let gc = sys.cavity.gamma_c;
    let drive = CavityDrive::new(&sys, &SignalState::incoherent(nbar));
    let comb = |wp: f64| -> Complex64 {
        (0..200)
            .map(|n| {
                let nf = n as f64;
                let p = nbar.powf(nf) / (nbar + 1.0).powf(nf + 1.0);
                q.chi * p / Complex64::new(wp - q.omega_q - 2.0 * q.chi * nf, nf * gc / 2.0 + q.gamma_prime())
            })
            .sum()
    };
    for n in 0..3 {
        let centre = q.omega_q + 2.0 * q.chi * n as f64;
        for wp in linspace(centre - 2.0 * q.gamma_prime(), centre + 2.0 * q.gamma_prime(), 41) {
            let exact = qubit_response_incoherent(wp, &q, &drive, nbar).unwrap();
            assert!(relative(exact, comb(wp)) < 0.01, "peak {n}: {}", relative(exact, comb(wp)));
        }
    }
}

#[test]
fn incoherent_low_q_limit_is_exponential_integral() {
    let sys = system(100e3, 500e6);
    let q = sys.qubits[0];
    let nbar = 1.5;
    let drive = CavityDrive::new(&sys, &SignalState::incoherent(nbar));
    for offset in [-3.0, -0.5, 0.0, 1.0, 4.0] {
        let wp = q.omega_q + offset * q.chi * nbar;
        let y = Complex64::new(wp - q.omega_q, q.gamma_prime()) / (2.0 * nbar * q.chi);
        let limit = -(-y).exp() * expint_en(1, -y).unwrap() / (2.0 * nbar);
        let exact = qubit_response_incoherent(wp, &q, &drive, nbar).unwrap();
        assert!(relative(exact, limit) < 1e-3, "{offset}: {exact} vs {limit}");
    }
}

#[test]
fn thermal_high_q_comb_widths() {
    let sys = fig1();
    let q = sys.qubits[0];
    let gc = sys.cavity.gamma_c;
    let nbar = 1.0;
    let sig = SignalState::thermal_with_nbar(nbar, 1e-12 / TWO_PI);
    for n in 0..3 {
        let nf = n as f64;
        let expected = ((2.0 * nbar + 1.0) * nf + nbar) * gc + q.gamma_prime();
        let centre = q.omega_q + 2.0 * q.chi * nf;
        let fit = fit_pole(|wp| qubit_response(&sys, &sig, wp), centre, expected).unwrap();
        assert!((fit.half_width() / expected - 1.0).abs() < 0.01, "n = {n}: {} vs {expected}", fit.half_width());
        assert!((fit.position() - centre).abs() < 0.05 * expected);
    }
}

fn qubit_response(sys: &SystemParams, sig: &SignalState, wp: f64) -> cqed_core::Result<Complex64> {
    cqed_core::detector::qubit_response(wp, &sys.qubits[0], sys, sig)
}

#[test]
fn thermal_without_flux_is_vacuum() {
    let sys = fig1();
    let q = sys.qubits[0];
    let drive = CavityDrive::new(&sys, &SignalState::thermal(0.0, 1e-12));
    let wp = q.omega_q + 0.3 * q.chi;
    assert_eq!(qubit_response_thermal(wp, &q, &drive, 0.0, 1e-12).unwrap(), vacuum_response(wp, &q));
}

#[test]
fn low_q_thermal_matches_coherent() {
    let sys = system(100e3, 500e6);
    let q = sys.qubits[0];
    let coherent = SignalState::coherent(1.0);
    let thermal = SignalState::thermal_with_nbar(1.0, 1e-13 / TWO_PI);
    let grid = linspace(q.omega_q - 20.0 * q.chi, q.omega_q + 20.0 * q.chi, 401);
    let worst = grid
        .iter()
        .map(|&wp| relative(s21_probe(wp, &sys, &thermal).unwrap(), s21_probe(wp, &sys, &coherent).unwrap()))
        .fold(0.0, f64::max);
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn comb_matches_full_model_near_first_peaks() {
    let sys = fig1();
    let q = sys.qubits[0];
    let sig = SignalState::coherent(1.0);
    for n in 0..3 {
        let centre = q.omega_q + 2.0 * q.chi * n as f64;
        let width = (n as f64 + 1.0) * sys.cavity.gamma_c / 2.0 + q.gamma_prime();
        let frozen = 2.0 * q.chi * n as f64 / (q.omega_q - sys.cavity.omega_c);
        for wp in linspace(centre - width, centre + width, 21) {
            let full = s21_probe_components(wp, &sys, &sig).unwrap();
            let comb = comb_spectrum(wp, &sys, &sig).unwrap();
            assert!(relative(comb, full.total()) < 0.02 + 1.5 * frozen, "peak {n}: {}", relative(comb, full.total()));
            let tail = Complex64::new(0.0, -sys.cavity.gamma_c) / (2.0 * (wp - sys.cavity.omega_c));
            let coupling = (q.omega_q - sys.cavity.omega_c) / Complex64::new(wp - sys.cavity.omega_c, 0.5 * sys.cavity.gamma_c);
            let comb_qubit = (comb - tail) * coupling;
            assert!(relative(comb_qubit, full.qubits[0]) < 0.02, "peak {n}: {}", relative(comb_qubit, full.qubits[0]));
        }
    }
}

#[test]
fn comb_weight_examples() {
    let coherent = SignalField::Coherent {
        amount: PhotonAmount::MeanNumber(1.0),
    };
    let w = comb_weights(&coherent, 1.0, 1.0);
    for (got, want) in w.iter().zip([0.3679, 0.3679, 0.1839]) {
        assert!((got.0 - want).abs() < 1e-4);
    }
    let incoherent = SignalField::Incoherent {
        amount: PhotonAmount::MeanNumber(1.0),
    };
    for (n, (p, _)) in comb_weights(&incoherent, 1.0, 1.0).iter().enumerate() {
        assert!((p - 0.5f64.powi(n as i32 + 1)).abs() < 1e-15);
    }
}

#[test]
fn figure_of_merit_extrema() {
    let sys = fig1();
    let q = sys.qubits[0];
    let grid = linspace(q.omega_q - 4.0 * q.chi, q.omega_q + 10.0 * q.chi, 2801);
    let vacuum = sweep(&grid, &sys, &SignalState::vacuum(), false).unwrap();
    let coherent = sweep(&grid, &sys, &SignalState::coherent(1.0), false).unwrap();
    assert!(figure_of_merit(&vacuum, &vacuum).unwrap().iter().all(|&r| r == 1.0));
    let ratio = figure_of_merit(&coherent, &vacuum).unwrap();
    let step = grid[1] - grid[0];
    let at = |w: f64| ((w - grid[0]) / step).round() as usize;
    let window = |centre: f64| {
        let half = (0.5 * q.chi / step) as usize;
        at(centre) - half..=at(centre) + half
    };
    let local = {
        let half = (3.0 * q.gamma_prime() / step) as usize;
        at(q.omega_q) - half..=at(q.omega_q) + half
    };
    let lowest = local.min_by(|&a, &b| ratio[a].total_cmp(&ratio[b])).unwrap();
    assert!((grid[lowest] - q.omega_q).abs() < 2.0 * step);
    assert!(ratio[lowest] < 1.0);
    for n in 1..=3 {
        let centre = q.omega_q + 2.0 * q.chi * n as f64;
        let best = window(centre).max_by(|&a, &b| ratio[a].total_cmp(&ratio[b])).unwrap();
        let linewidth = (n as f64 + 1.0) * sys.cavity.gamma_c / 2.0 + q.gamma_prime();
        assert!((grid[best] - centre).abs() < linewidth, "n = {n}");
        assert!(ratio[best] > 1.0);
    }
    let far = [TWO_PI * 5e9];
    let far_ratio = figure_of_merit(
        &sweep(&far, &sys, &SignalState::coherent(1.0), false).unwrap(),
        &sweep(&far, &sys, &SignalState::vacuum(), false).unwrap(),
    )
    .unwrap();
    assert!((far_ratio[0] - 1.0).abs() < 1e-3);
    let shifted = sweep(&grid[1..], &sys, &SignalState::vacuum(), false).unwrap();
    assert!(figure_of_merit(&coherent, &shifted).is_err());
}

#[test]
fn detuning_error_shape() {
    let sys = system(1e6, 100e3);
    let q = sys.qubits[0];
    let gc = sys.cavity.gamma_c;
    let grid = linspace(q.omega_q - 2.0 * q.chi, q.omega_q + 8.0 * q.chi, 1001);
    let sig = SignalState::coherent(1.0);
    let errors = detuning_error(&sys, &sig, &[0.0, gc / 3.0, -gc / 3.0], &grid).unwrap();
    assert!(errors[0].iter().all(|&e| e == 0.0));
    assert!(errors[1] != errors[2]);
    let peak_error = |curve: &[f64], n: usize| {
        let centre = q.omega_q + 2.0 * q.chi * n as f64;
        grid.iter()
            .zip(curve)
            .filter(|(w, _)| (*w - centre).abs() < 0.5 * q.chi)
            .map(|(_, e)| *e)
            .fold(0.0, f64::max)
    };
    let between = grid
        .iter()
        .zip(&errors[1])
        .filter(|(w, _)| (*w - (q.omega_q + 3.0 * q.chi)).abs() < 0.1 * q.chi)
        .map(|(_, e)| *e)
        .fold(0.0, f64::max);
    assert!(peak_error(&errors[1], 1) > between);
    assert!(peak_error(&errors[1], 2) > peak_error(&errors[1], 0));
}

#[test]
fn sweep_is_ordered_and_deterministic() {
    let sys = fig1();
    let grid = default_grid(&sys);
    assert_eq!(grid.len(), 2001);
    let a = sweep(&grid, &sys, &SignalState::incoherent(1.0), true).unwrap();
    let b = sweep(&grid, &sys, &SignalState::incoherent(1.0), true).unwrap();
    assert_eq!(a, b);
    for (i, &wp) in grid.iter().enumerate().step_by(97) {
        assert_eq!(a.s21[i], s21_probe(wp, &sys, &SignalState::incoherent(1.0)).unwrap());
    }
    assert!(a.meta.get("system").is_some() && a.meta.get("signal").is_some());
}

#[test]
fn empty_qubit_list_gives_cavity_double_lorentzian() {
    let sys = SystemParams {
        cavity: fig1().cavity,
        qubits: vec![],
    };
    for wp in default_grid(&sys).into_iter().step_by(50) {
        let s = s21_probe(wp, &sys, &SignalState::coherent(1.0)).unwrap();
        assert!(relative(s, s21_signal(wp, &sys)) < 1e-14);
    }
}

#[test]
fn identical_qubits_add_independently() {
    let mut sys = system(1e6, 1e6);
    sys.qubits = vec![sys.qubits[0]; 5];
    assert!((sys.omega_c_star() - (sys.cavity.omega_c - 5.0 * sys.qubits[0].chi)).abs() < 1e-3);
    let wp = sys.qubits[0].omega_q + 0.2e6;
    let parts = s21_probe_components(wp, &sys, &SignalState::coherent(1.0)).unwrap();
    assert_eq!(parts.qubits.len(), 5);
    assert!(parts.qubits.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn thermal_warning_above_validity_limit() {
    let sys = fig1();
    let long = SignalState::thermal(1e6, 1.0 / sys.cavity.gamma_c);
    assert_eq!(long.validate(&sys).unwrap().len(), 1);
    assert!(SignalState::thermal(1e6, 1e-12).validate(&sys).unwrap().is_empty());
}

fn regime() -> impl Strategy<Value = (SystemParams, f64, f64)> {
    (
        prop::sample::select(vec![(10e6, 100e3), (10e6, 1e6), (1e6, 100e3), (1e6, 1e6)]),
        0.2..1.0f64,
        0.0..3.0f64,
        -4.0..10.0f64,
        -0.3..0.3f64,
    )
        .prop_map(|((chi, gc), chi_scale, nbar, offset, detuning)| {
            let mut sys = system(chi * chi_scale, gc);
            sys.cavity.omega_c += detuning * sys.cavity.gamma_c;
            let q = sys.qubits[0];
            (sys, nbar, q.omega_q + offset * q.chi)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coherent_series_matches_hypergeometric((sys, nbar, wp) in regime()) {
        let sig = SignalState::coherent(nbar);
        let drive = CavityDrive::new(&sys, &sig);
        let beta = Complex64::new(nbar.sqrt(), 0.0);
        let q = sys.qubits[0];
        let series = qubit_response_coherent(wp, &q, &drive, beta).unwrap();
        let closed = qubit_response_coherent_hypergeometric(wp, &q, &drive, beta).unwrap();
        prop_assert!(relative(series, closed) < 1e-10, "{series} vs {closed}");
    }

    #[test]
    fn coherent_amplitude_phase_is_unobservable((sys, nbar, wp) in regime(), phase in 0.0..std::f64::consts::TAU) {
        let drive = CavityDrive::new(&sys, &SignalState::coherent(nbar));
        let q = sys.qubits[0];
        let beta = Complex64::new(nbar.sqrt(), 0.0);
        let base = qubit_response_coherent(wp, &q, &drive, beta).unwrap();
        let rotated = qubit_response_coherent(wp, &q, &drive, beta * Complex64::from_polar(1.0, phase)).unwrap();
        prop_assert!(relative(rotated, base) < 1e-12);
    }

    #[test]
    fn vacuum_coincidence(offset in -5.0..10.0f64) {
        let sys = fig1();
        let q = sys.qubits[0];
        let wp = q.omega_q + offset * q.chi;
        let nbar = 1e-6;
        let states = [
            SignalState::coherent(nbar),
            SignalState::incoherent(nbar),
            SignalState::thermal_with_nbar(nbar, 1e-12 / TWO_PI),
        ];
        let values: Vec<Complex64> = states.iter().map(|s| qubit_response(&sys, s, wp).unwrap()).collect();
        let sideband = (1..=3)
            .map(|n| (wp - q.omega_q - 2.0 * q.chi * n as f64).abs())
            .fold(f64::INFINITY, f64::min);
        let enhancement = nbar * q.chi / (sideband + q.gamma_prime());
        for i in 0..3 {
            prop_assert!(relative(values[i], vacuum_response(wp, &q)) < 1e-4 + 2.0 * enhancement);
            for j in 0..i {
                prop_assert!(relative(values[i], values[j]) < 1e-4);
            }
        }
    }

    #[test]
    fn two_branch_conjugation((sys, nbar, wp) in regime(), state in 0..4usize) {
        let sig = match state {
            0 => SignalState::vacuum(),
            1 => SignalState::coherent(nbar),
            2 => SignalState::incoherent(nbar),
            _ => SignalState::thermal_with_nbar(nbar, 1e-12 / TWO_PI),
        };
        let plus = two_branch_components(wp, &sys, &sig).unwrap().total();
        let minus = two_branch_components(-wp, &sys, &sig).unwrap().total();
        prop_assert_eq!(minus, plus.conj());
        prop_assert_eq!(s21_probe(wp, &sys, &sig).unwrap(), plus);
    }

    #[test]
    fn comb_distributions_are_normalized(nbar in 0.0..20.0f64, incoherent in any::<bool>()) {
        let field = if incoherent {
            SignalField::Incoherent { amount: PhotonAmount::MeanNumber(nbar) }
        } else {
            SignalField::Coherent { amount: PhotonAmount::MeanNumber(nbar) }
        };
        let total: f64 = comb_weights(&field, nbar, 1.0).iter().map(|w| w.0).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }
}
