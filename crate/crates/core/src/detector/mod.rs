//! Probe transmission of a qubit array in a cavity driven by a signal field.
//!
//! The probe response of each qubit is computed in linear response for a
//! vacuum, coherent, incoherent or thermal signal field and assembled into
//! the two-branch S21 expression. A high-Q comb approximation, peak fitting
//! and the parameter chain from circuit quantities are provided alongside.

mod derive;
mod fit;
mod response;
mod spectrum;

pub use derive::{derive_qubit, DerivedQubit, PhysicalQubit};
pub use fit::{fit_pole, PoleFit};
pub use response::{
    qubit_response, qubit_response_coherent, qubit_response_coherent_hypergeometric,
    qubit_response_incoherent, qubit_response_thermal, vacuum_response, CavityDrive,
};
pub use spectrum::{
    comb_spectrum, comb_weights, default_grid, detuning_error, figure_of_merit, linspace, s21_probe,
    s21_probe_components, s21_signal, sweep, two_branch_components, ProbeComponents, Spectrum,
};

use crate::specfun::ComplexScalar;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Dispersive parameters of one qubit, all rates angular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    /// Qubit frequency ωⱼ, rad/s.
    pub omega_q: f64,
    /// Dispersive shift χⱼ = gⱼ²/(ωⱼ − ω_c), rad/s.
    pub chi: f64,
    /// Energy relaxation rate Γⱼ, rad/s.
    pub gamma: f64,
    /// Pure dephasing rate Γ_φ,ⱼ, rad/s.
    pub gamma_phi: f64,
}

impl QubitParams {
    /// Transverse linewidth Γⱼ/2 + Γ_φ,ⱼ.
    pub fn gamma_prime(&self) -> f64 {
        0.5 * self.gamma + self.gamma_phi
    }

    fn validate(&self) -> Result<()> {
        if !(self.chi != 0.0 && self.chi.is_finite()) {
            return Err(Error::Parameter(format!("chi must be finite and non-zero, got {}", self.chi)));
        }
        if !(self.gamma >= 0.0 && self.gamma_phi >= 0.0) {
            return Err(Error::Parameter("qubit decay and dephasing rates must be non-negative".into()));
        }
        if !self.omega_q.is_finite() {
            return Err(Error::Parameter(format!("qubit frequency {} is not finite", self.omega_q)));
        }
        Ok(())
    }
}

/// Bare cavity mode coupled to the qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    /// Cavity frequency ω_c, rad/s.
    pub omega_c: f64,
    /// Cavity damping γ_c, rad/s.
    pub gamma_c: f64,
}

/// Cavity plus qubit array; the single source of every spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub cavity: CavityParams,
    pub qubits: Vec<QubitParams>,
}

impl SystemParams {
    /// Renormalized cavity frequency ω_c* = ω_c − Σⱼχⱼ.
    pub fn omega_c_star(&self) -> f64 {
        self.cavity.omega_c - self.qubits.iter().map(|q| q.chi).sum::<f64>()
    }

    /// Checks every invariant of the cavity and the qubits.
    pub fn validate(&self) -> Result<()> {
        if !(self.cavity.gamma_c > 0.0 && self.cavity.gamma_c.is_finite()) {
            return Err(Error::Parameter(format!(
                "gamma_c must be positive, got {}",
                self.cavity.gamma_c
            )));
        }
        if !(self.cavity.omega_c > 0.0 && self.cavity.omega_c.is_finite()) {
            return Err(Error::Parameter(format!(
                "omega_c must be positive, got {}",
                self.cavity.omega_c
            )));
        }
        self.qubits.iter().try_for_each(QubitParams::validate)
    }
}

/// Amount of signal light, either as a photon flux in the line or directly
/// as the mean cavity photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhotonAmount {
    /// Photon flux 𝒥, photons/s.
    Flux(f64),
    /// Mean photon number n̄ inside the cavity.
    MeanNumber(f64),
}

/// Statistics of the signal field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum SignalField {
    Vacuum,
    Coherent { amount: PhotonAmount },
    Incoherent { amount: PhotonAmount },
    /// Broadband field with coherence time `tau_c` (s) and flux `flux` (1/s).
    Thermal { flux: f64, tau_c: f64 },
}

/// Signal field together with its carrier frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalState {
    pub field: SignalField,
    /// Signal frequency ω, rad/s; `None` tunes it to ω_c*.
    pub signal_omega: Option<f64>,
}

/// Above this value of γ_c·τ_c the thermal model leaves its validity range.
pub const THERMAL_VALIDITY_LIMIT: f64 = 0.1;

impl SignalState {
    pub fn vacuum() -> Self {
        SignalState {
            field: SignalField::Vacuum,
            signal_omega: None,
        }
    }

    pub fn coherent(nbar: f64) -> Self {
        SignalState {
            field: SignalField::Coherent {
                amount: PhotonAmount::MeanNumber(nbar),
            },
            signal_omega: None,
        }
    }

    pub fn incoherent(nbar: f64) -> Self {
        SignalState {
            field: SignalField::Incoherent {
                amount: PhotonAmount::MeanNumber(nbar),
            },
            signal_omega: None,
        }
    }

    pub fn thermal(flux: f64, tau_c: f64) -> Self {
        SignalState {
            field: SignalField::Thermal { flux, tau_c },
            signal_omega: None,
        }
    }

    /// Thermal field whose flux gives `nbar` photons on resonance.
    pub fn thermal_with_nbar(nbar: f64, tau_c: f64) -> Self {
        Self::thermal(nbar / tau_c, tau_c)
    }

    /// Same state with the signal detuned by `detuning` from ω_c*.
    pub fn with_detuning(self, sys: &SystemParams, detuning: f64) -> Self {
        SignalState {
            signal_omega: Some(sys.omega_c_star() + detuning),
            ..self
        }
    }

    /// Resolved signal frequency.
    pub fn omega(&self, sys: &SystemParams) -> f64 {
        self.signal_omega.unwrap_or_else(|| sys.omega_c_star())
    }

    /// Checks the field invariants and returns advisory warnings for
    /// parameters outside the validity range of the analytic model.
    pub fn validate(&self, sys: &SystemParams) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        let non_negative = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be non-negative, got {v}")))
            }
        };
        match self.field {
            SignalField::Vacuum => {}
            SignalField::Coherent { amount } | SignalField::Incoherent { amount } => match amount {
                PhotonAmount::Flux(j) => non_negative("photon flux", j)?,
                PhotonAmount::MeanNumber(n) => non_negative("mean photon number", n)?,
            },
            SignalField::Thermal { flux, tau_c } => {
                non_negative("photon flux", flux)?;
                if !(tau_c > 0.0 && tau_c.is_finite()) {
                    return Err(Error::Parameter(format!("tau_c must be positive, got {tau_c}")));
                }
                let product = sys.cavity.gamma_c * tau_c;
                if product > THERMAL_VALIDITY_LIMIT {
                    warnings.push(format!(
                        "gamma_c*tau_c = {product:.3} exceeds {THERMAL_VALIDITY_LIMIT}; the thermal model assumes a short coherence time"
                    ));
                }
            }
        }
        if let Some(w) = self.signal_omega {
            if !w.is_finite() {
                return Err(Error::Parameter(format!("signal frequency {w} is not finite")));
            }
        }
        Ok(warnings)
    }
}

/// Mean cavity photon number and, for a coherent field, the cavity
/// amplitude β (real and positive when the signal is on resonance).
pub fn cavity_photon_number(sig: &SignalState, sys: &SystemParams) -> (f64, Option<ComplexScalar>) {
    let gamma_c = sys.cavity.gamma_c;
    let detuning = sig.omega(sys) - sys.omega_c_star();
    let driven = |amount: PhotonAmount| match amount {
        PhotonAmount::Flux(j) => 0.5 * gamma_c * j / (detuning * detuning + 0.25 * gamma_c * gamma_c),
        PhotonAmount::MeanNumber(n) => n,
    };
    match sig.field {
        SignalField::Vacuum => (0.0, None),
        SignalField::Coherent { amount } => {
            let nbar = driven(amount);
            let response = Complex64::new(0.0, 0.5 * gamma_c) / Complex64::new(detuning, 0.5 * gamma_c);
            let phase = response / response.norm();
            (nbar, Some(nbar.sqrt() * phase))
        }
        SignalField::Incoherent { amount } => (driven(amount), None),
        SignalField::Thermal { flux, tau_c } => (thermal_occupation(flux, Complex64::new(tau_c, 0.0), detuning).re, None),
    }
}

/// `n̄(τ) = (𝒥/τ)/((ω − ω_c*)² + 1/τ²)` for a possibly complex coherence time.
pub(crate) fn thermal_occupation(flux: f64, tau: Complex64, detuning: f64) -> Complex64 {
    (flux / tau) / (detuning * detuning + 1.0 / (tau * tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::TWO_PI;

    fn system() -> SystemParams {
        SystemParams {
            cavity: CavityParams {
                omega_c: TWO_PI * 9e9,
                gamma_c: TWO_PI * 100e3,
            },
            qubits: vec![QubitParams {
                omega_q: TWO_PI * 10e9,
                chi: TWO_PI * 10e6,
                gamma: TWO_PI * 250e3,
                gamma_phi: 0.0,
            }],
        }
    }

    #[test]
    fn photon_number_from_flux() {
        let sys = system();
        let gc = sys.cavity.gamma_c;
        let coh = SignalState {
            field: SignalField::Coherent {
                amount: PhotonAmount::Flux(gc / 2.0),
            },
            signal_omega: None,
        };
        let (n, beta) = cavity_photon_number(&coh, &sys);
        assert!((n - 1.0).abs() < 1e-14);
        let beta = beta.unwrap();
        assert!(beta.im.abs() < 1e-15 && beta.re > 0.0);
        let detuned = coh.with_detuning(&sys, gc / 2.0);
        let (n, beta) = cavity_photon_number(&detuned, &sys);
        assert!((n - 1.0 / 2.0).abs() < 1e-9);
        assert!((beta.unwrap().norm_sqr() - n).abs() < 1e-9);
        let th = SignalState::thermal(TWO_PI * 1e9, 1e-9 / TWO_PI);
        assert!((cavity_photon_number(&th, &sys).0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let sys = system();
        assert!(SignalState::coherent(-1.0).validate(&sys).is_err());
        assert!(SignalState::thermal(1.0, 0.0).validate(&sys).is_err());
        let w = SignalState::thermal(1e6, 1.0 / sys.cavity.gamma_c).validate(&sys).unwrap();
        assert_eq!(w.len(), 1);
        let mut bad = sys.clone();
        bad.qubits[0].chi = 0.0;
        assert!(bad.validate().is_err());
    }
}
