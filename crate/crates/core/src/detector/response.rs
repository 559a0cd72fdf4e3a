//! Linear probe response of a single qubit for each signal-field state.
//!
//! Every function returns `gⱼ⟨σ⁻⟩′/(Ω_p/2)`, the qubit coherence normalized
//! by the probe amplitude, which reduces to `χⱼ/(ω_p − ωⱼ + iΓ′ⱼ)` without
//! signal photons.

use super::{cavity_photon_number, thermal_occupation, QubitParams, SignalField, SignalState, SystemParams};
use crate::specfun::{expint_en_scaled, hyp1f1, ComplexScalar};
use crate::{Error, Result};
use num_complex::Complex64;

/// Relative size below which a series term counts as negligible.
const TRUNCATION_EPS: f64 = 1e-12;
/// Number of consecutive negligible terms that ends a series.
const TRUNCATION_RUN: usize = 3;
/// Upper bound on the number of photon-number terms.
pub(crate) const SERIES_TERM_CAP: usize = 5_000;

/// Cavity quantities shared by the responses of all qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityDrive {
    /// Renormalized cavity frequency ω_c*, rad/s.
    pub omega_c_star: f64,
    /// Cavity damping γ_c, rad/s.
    pub gamma_c: f64,
    /// Signal frequency ω, rad/s.
    pub signal_omega: f64,
}

impl CavityDrive {
    pub fn new(sys: &SystemParams, sig: &SignalState) -> Self {
        CavityDrive {
            omega_c_star: sys.omega_c_star(),
            gamma_c: sys.cavity.gamma_c,
            signal_omega: sig.omega(sys),
        }
    }

    /// `w = ω_c* + 2χ − ω − iγ_c/2`, the spacing of the photon-number
    /// ladder seen by a qubit with shift `chi`.
    fn ladder_step(&self, chi: f64) -> Complex64 {
        Complex64::new(self.omega_c_star + 2.0 * chi - self.signal_omega, -0.5 * self.gamma_c)
    }
}

/// Sums `term(0) + term(1) + …` until `TRUNCATION_RUN` consecutive terms
/// beyond `min_terms` are each below `TRUNCATION_EPS` of the running sum.
fn sum_series(
    function: &'static str,
    min_terms: usize,
    describe: impl Fn() -> String,
    mut term: impl FnMut(usize) -> Result<Complex64>,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut run = 0;
    for n in 0..SERIES_TERM_CAP {
        let t = term(n)?;
        sum += t;
        if t.norm() < TRUNCATION_EPS * sum.norm() || t == Complex64::new(0.0, 0.0) {
            run += 1;
            if run >= TRUNCATION_RUN && n >= min_terms {
                return finite(function, sum);
            }
        } else {
            run = 0;
        }
    }
    Err(Error::Domain {
        function,
        detail: format!("photon-number series exceeded {SERIES_TERM_CAP} terms ({})", describe()),
    })
}

fn finite(function: &'static str, z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain {
            function,
            detail: format!("non-finite response {z}"),
        })
    }
}

/// Response without signal photons, `χ/(ω_p − ωⱼ + iΓ′)`.
pub fn vacuum_response(omega_p: f64, q: &QubitParams) -> ComplexScalar {
    q.chi / Complex64::new(omega_p - q.omega_q, q.gamma_prime())
}

/// Coherent signal with cavity amplitude `beta`, summed over the Poisson
/// sidebands `χe^{−W}ΣWⁿ/n!·(A − nw)⁻¹` with `W = (2χβ)²/w²` and
/// `A = ω_p − ωⱼ − 2χ|β|² + iΓ′ + (2χ|β|)²/w`.
pub fn qubit_response_coherent(
    omega_p: f64,
    q: &QubitParams,
    drive: &CavityDrive,
    beta: ComplexScalar,
) -> Result<ComplexScalar> {
    let (a, w, big_w) = coherent_terms(omega_p, q, drive, beta);
    if big_w == Complex64::new(0.0, 0.0) {
        return finite("qubit_response_coherent", q.chi / a);
    }
    let mut weight = (-big_w).exp();
    let min_terms = big_w.norm().ceil() as usize + 1;
    let nbar = beta.norm_sqr();
    let sum = sum_series(
        "qubit_response_coherent",
        min_terms,
        || format!("nbar = {nbar}, |W| = {}", big_w.norm()),
        |n| {
            if n > 0 {
                weight *= big_w / n as f64;
            }
            Ok(weight / (a - n as f64 * w))
        },
    )?;
    Ok(q.chi * sum)
}

/// Closed form of the coherent response, `χ·₁F₁(1; c+1; −W)/A` with `c = −A/w`.
pub fn qubit_response_coherent_hypergeometric(
    omega_p: f64,
    q: &QubitParams,
    drive: &CavityDrive,
    beta: ComplexScalar,
) -> Result<ComplexScalar> {
    let (a, w, big_w) = coherent_terms(omega_p, q, drive, beta);
    let c = -a / w;
    let one = Complex64::new(1.0, 0.0);
    let m = hyp1f1(one, c + 1.0, -big_w)?;
    finite("qubit_response_coherent_hypergeometric", q.chi * m / a)
}

fn coherent_terms(
    omega_p: f64,
    q: &QubitParams,
    drive: &CavityDrive,
    beta: ComplexScalar,
) -> (Complex64, Complex64, Complex64) {
    let w = drive.ladder_step(q.chi);
    let nbar = beta.norm_sqr();
    let b2 = 4.0 * q.chi * q.chi * nbar;
    let a = Complex64::new(omega_p - q.omega_q - 2.0 * q.chi * nbar, q.gamma_prime()) + b2 / w;
    (a, w, b2 / (w * w))
}

/// Incoherent signal with mean cavity photon number `nbar`, obtained by
/// averaging the coherent response over the Glauber P-distribution:
/// `χ Σₙ (q/c)ⁿ e^{xₙ}E_{n+1}(xₙ)/(n̄·b)` with `q = 4χ²/w²`,
/// `b = −2χ + 4χ²/w`, `c = 1/n̄ + q` and `xₙ = (ω_p − ωⱼ + iΓ′ − nw)·c/b`.
pub fn qubit_response_incoherent(
    omega_p: f64,
    q: &QubitParams,
    drive: &CavityDrive,
    nbar: f64,
) -> Result<ComplexScalar> {
    if !(nbar >= 0.0) {
        return Err(Error::Parameter(format!("nbar must be non-negative, got {nbar}")));
    }
    if nbar == 0.0 {
        return Ok(vacuum_response(omega_p, q));
    }
    let chi = q.chi;
    let w = drive.ladder_step(chi);
    let q_ratio = 4.0 * chi * chi / (w * w);
    let b = -2.0 * chi + 4.0 * chi * chi / w;
    let c = 1.0 / nbar + q_ratio;
    let ratio = q_ratio / c;
    let a0 = Complex64::new(omega_p - q.omega_q, q.gamma_prime());
    let mut power = Complex64::new(1.0, 0.0);
    let sum = sum_series(
        "qubit_response_incoherent",
        1,
        || format!("nbar = {nbar}, ratio = {}", ratio.norm()),
        |n| {
            if n > 0 {
                power *= ratio;
            }
            let x = (a0 - n as f64 * w) * c / b;
            Ok(power * expint_en_scaled(n as u32 + 1, x)?)
        },
    )?;
    finite("qubit_response_incoherent", chi * sum / (nbar * b))
}

/// Thermal signal of flux `flux` and coherence time `tau_c`, as the sum
/// over the poles `ωⱼ − iΓ′ − i(2n+1)S − χ + iγ_c/2`.
pub fn qubit_response_thermal(
    omega_p: f64,
    q: &QubitParams,
    drive: &CavityDrive,
    flux: f64,
    tau_c: f64,
) -> Result<ComplexScalar> {
    if !(flux >= 0.0) || !(tau_c > 0.0) {
        return Err(Error::Parameter(format!(
            "thermal field needs flux >= 0 and tau_c > 0, got {flux} and {tau_c}"
        )));
    }
    if flux == 0.0 {
        return Ok(vacuum_response(omega_p, q));
    }
    let i = Complex64::i();
    let chi = q.chi;
    let gc = drive.gamma_c;
    let detuning = drive.signal_omega - drive.omega_c_star;
    let nbar = thermal_occupation(flux, Complex64::new(tau_c, 0.0), detuning);
    let tau_p = tau_c / Complex64::new(1.0, tau_c * (omega_p - drive.signal_omega));
    let nbar_p = thermal_occupation(flux, tau_p, detuning);

    let mut s = (0.25 * gc * gc + i * gc * (2.0 * nbar_p + 1.0) * chi - chi * chi).sqrt();
    if s.re < 0.0 {
        s = -s;
    }
    let enhancement = (1.0 + nbar_p) / (1.0 + nbar);
    let y = gc * enhancement + i * chi - 0.5 * gc - s;
    let lower = 0.5 * gc + s - i * chi;
    let r = (0.5 * gc - s - i * chi) / lower * y / (y + 2.0 * s);
    if !(r.norm() < 1.0) {
        return Err(Error::Domain {
            function: "qubit_response_thermal",
            detail: format!("pole series ratio |r| = {} does not converge", r.norm()),
        });
    }
    let prefactor = 2.0 * s * gc / (lower * (y + 2.0 * s)) * enhancement;
    let base_pole = Complex64::new(q.omega_q - chi, -q.gamma_prime() + 0.5 * gc);
    let mut power = Complex64::new(1.0, 0.0);
    let sum = sum_series(
        "qubit_response_thermal",
        1,
        || format!("nbar = {}, |r| = {}", nbar.re, r.norm()),
        |n| {
            if n > 0 {
                power *= r;
            }
            let pole = base_pole - i * (2.0 * n as f64 + 1.0) * s;
            Ok(power / (omega_p - pole))
        },
    )?;
    finite("qubit_response_thermal", chi * prefactor * sum)
}

/// Response of qubit `q` to the signal `sig`, dispatched on the field state.
pub fn qubit_response(
    omega_p: f64,
    q: &QubitParams,
    sys: &SystemParams,
    sig: &SignalState,
) -> Result<ComplexScalar> {
    let drive = CavityDrive::new(sys, sig);
    match sig.field {
        SignalField::Vacuum => Ok(vacuum_response(omega_p, q)),
        SignalField::Coherent { .. } => {
            let (_, beta) = cavity_photon_number(sig, sys);
            qubit_response_coherent(omega_p, q, &drive, beta.unwrap_or_default())
        }
        SignalField::Incoherent { .. } => {
            let (nbar, _) = cavity_photon_number(sig, sys);
            qubit_response_incoherent(omega_p, q, &drive, nbar)
        }
        SignalField::Thermal { flux, tau_c } => qubit_response_thermal(omega_p, q, &drive, flux, tau_c),
    }
}
