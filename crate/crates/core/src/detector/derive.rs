//! Dispersive qubit parameters from circuit quantities.

use super::QubitParams;
use crate::cavity::{resonances, ResonatorGeometry};
use crate::constants::{E_CHARGE, HBAR};
use crate::waveguide::WaveguideParams;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Above this ratio `E_C/E_J` the transmon approximation is questionable.
const TRANSMON_RATIO_LIMIT: f64 = 0.1;

/// Circuit description of one transmon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalQubit {
    /// Josephson energy E_J, J.
    pub e_j: f64,
    /// Shunt capacitance C_j, F.
    pub c_j: f64,
    /// Dimensionless coupling geometry factor f_j.
    pub f_j: f64,
    /// Position l_j along the resonator, m.
    pub l_j: f64,
}

/// Qubit parameters with the intermediate couplings that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedQubit {
    pub qubit: QubitParams,
    /// Bare line coupling κⱼ, rad/s.
    pub kappa: f64,
    /// Cavity coupling gⱼ = κⱼcos(πlⱼ/L)/√π, rad/s.
    pub g: f64,
    /// First cavity mode frequency, rad/s.
    pub omega_c: f64,
    /// First cavity mode damping, rad/s.
    pub gamma_c: f64,
    /// Advisory notes about the validity of the approximations.
    pub warnings: Vec<String>,
}

/// Transmon frequency, couplings and dispersive shift:
/// `ωⱼ = √(4e²E_J/C_j)/ħ − e²/(2ħC_j)`,
/// `κⱼ = (2e/ħ)fⱼ√(E_Jωⱼ/(2cC′))`, `gⱼ = κⱼcos(πlⱼ/L)/√π`,
/// `χⱼ = gⱼ²/(ωⱼ − ω_c)` and the radiative rate `Γⱼ = κⱼ²/ωⱼ`.
pub fn derive_qubit(
    phys: &PhysicalQubit,
    line: &WaveguideParams,
    cav: &ResonatorGeometry,
) -> Result<DerivedQubit> {
    let PhysicalQubit { e_j, c_j, f_j, l_j } = *phys;
    if !(e_j > 0.0 && c_j > 0.0) {
        return Err(Error::Parameter(format!(
            "Josephson energy and capacitance must be positive, got {e_j} and {c_j}"
        )));
    }
    let mut warnings = Vec::new();
    let e_c = E_CHARGE * E_CHARGE / (2.0 * c_j);
    if e_c / e_j > TRANSMON_RATIO_LIMIT {
        warnings.push(format!(
            "E_C/E_J = {:.3} exceeds {TRANSMON_RATIO_LIMIT}; outside the transmon regime",
            e_c / e_j
        ));
    }
    let omega_q = (4.0 * E_CHARGE * E_CHARGE * e_j / c_j).sqrt() / HBAR - e_c / HBAR;
    let kappa = 2.0 * E_CHARGE / HBAR * f_j * (e_j * omega_q / (2.0 * cav.velocity * line.c_line)).sqrt();
    let g = kappa * (PI * l_j / cav.length).cos() / PI.sqrt();
    let mode = resonances(cav, 1)?[0];
    let detuning = omega_q - mode.omega;
    if detuning == 0.0 {
        return Err(Error::Parameter("qubit is resonant with the cavity; the dispersive shift diverges".into()));
    }
    if detuning.abs() < 10.0 * g.abs() {
        warnings.push(format!(
            "|omega_q - omega_c| = {:.3e} rad/s is below 10 g = {:.3e} rad/s; outside the dispersive regime",
            detuning.abs(),
            10.0 * g.abs()
        ));
    }
    let chi = g * g / detuning;
    if chi == 0.0 {
        return Err(Error::Parameter("qubit is uncoupled (g = 0), so chi vanishes".into()));
    }
    Ok(DerivedQubit {
        qubit: QubitParams {
            omega_q,
            chi,
            gamma: kappa * kappa / omega_q,
            gamma_phi: 0.0,
        },
        kappa,
        g,
        omega_c: mode.omega,
        gamma_c: mode.gamma,
        warnings,
    })
}
