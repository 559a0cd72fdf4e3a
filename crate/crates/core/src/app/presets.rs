//! Parameter sets of the published transmission figures.
//!
//! Every figure shares ω_j = 2π·10 GHz, ω_c = 2π·9 GHz and the linewidth
//! combination Γ_j + 2Γ_φ,j = 2π·250 kHz, taken as Γ_j = 2π·250 kHz and
//! Γ_φ,j = 0 since only Γ_j/2 + Γ_φ,j enters the response.

use super::config::{StateKind, DEFAULT_TAU_C};
use crate::constants::TWO_PI;
use crate::detector::{CavityParams, QubitParams, SignalState, SystemParams};
use serde::Serialize;

/// Identifiers of all presets.
pub const PRESET_IDS: [&str; 10] = [
    "fig1", "fig2", "fig2bis", "fig3", "fig35q", "fig4", "fig5", "fig6", "fig7", "fig10",
];

/// Figure parameters together with the signal settings drawn in its panels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigurePreset {
    pub id: &'static str,
    pub description: &'static str,
    pub system: SystemParams,
    /// Mean signal photon number.
    pub nbar: f64,
    /// Thermal coherence times, s; one thermal panel per entry.
    pub tau_c: Vec<f64>,
    /// Signal detunings from ω_c*, rad/s; non-empty only for the
    /// detuning-error figure.
    pub detunings: Vec<f64>,
}

impl FigurePreset {
    /// Signal field of kind `state` with coherence time `tau_c` for the
    /// thermal case.
    pub fn signal(&self, state: StateKind, tau_c: f64) -> SignalState {
        match state {
            StateKind::Vacuum => SignalState::vacuum(),
            StateKind::Coherent => SignalState::coherent(self.nbar),
            StateKind::Incoherent => SignalState::incoherent(self.nbar),
            StateKind::Thermal => SignalState::thermal_with_nbar(self.nbar, tau_c),
        }
    }
}

fn system(chi_hz: f64, gamma_c_hz: f64, qubits: usize) -> SystemParams {
    SystemParams {
        cavity: CavityParams {
            omega_c: TWO_PI * 9e9,
            gamma_c: TWO_PI * gamma_c_hz,
        },
        qubits: vec![
            QubitParams {
                omega_q: TWO_PI * 10e9,
                chi: TWO_PI * chi_hz,
                gamma: TWO_PI * 250e3,
                gamma_phi: 0.0,
            };
            qubits
        ],
    }
}

/// Looks up a preset by identifier.
pub fn preset(id: &str) -> Option<FigurePreset> {
    let base = |id, description, chi, gamma_c, nbar| FigurePreset {
        id,
        description,
        system: system(chi, gamma_c, 1),
        nbar,
        tau_c: vec![DEFAULT_TAU_C],
        detunings: Vec::new(),
    };
    Some(match id {
        "fig1" => base("fig1", "one qubit, n = 1, chi 10 MHz, gamma_c 100 kHz", 10e6, 100e3, 1.0),
        "fig2" => base("fig2", "lower cavity quality factor, gamma_c 1 MHz", 10e6, 1e6, 1.0),
        "fig2bis" => base("fig2bis", "lower Stark shift, chi 1 MHz", 1e6, 100e3, 1.0),
        "fig3" => base("fig3", "lower Stark shift and quality factor", 1e6, 1e6, 1.0),
        "fig35q" => FigurePreset {
            system: system(1e6, 1e6, 5),
            ..base("fig35q", "five identical qubits, chi 1 MHz, gamma_c 1 MHz", 1e6, 1e6, 1.0)
        },
        "fig4" => FigurePreset {
            tau_c: vec![1e-13 / TWO_PI],
            ..base("fig4", "very low quality factor, gamma_c 500 MHz", 100e3, 500e6, 1.0)
        },
        "fig5" => base("fig5", "n = 2, chi 1 MHz, gamma_c 1 MHz", 1e6, 1e6, 2.0),
        "fig6" => base("fig6", "n = 2, chi 1 MHz, gamma_c 100 kHz", 1e6, 100e3, 2.0),
        "fig7" => FigurePreset {
            tau_c: vec![1e-12 / TWO_PI, 1e-9 / TWO_PI, 1e-8 / TWO_PI],
            ..base("fig7", "thermal coherence time scan", 1e6, 100e3, 1.0)
        },
        "fig10" => FigurePreset {
            detunings: vec![-TWO_PI * 100e3 / 3.0, TWO_PI * 100e3 / 3.0],
            ..base("fig10", "signal detuning of -gamma_c/3 and +gamma_c/3", 1e6, 100e3, 1.0)
        },
        _ => return None,
    })
}
