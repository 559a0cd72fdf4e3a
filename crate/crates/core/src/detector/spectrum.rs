//! Assembly of the probe transmission, the high-Q comb approximation and
//! derived figures of merit.

use super::response::{qubit_response, SERIES_TERM_CAP};
use super::{cavity_photon_number, SignalField, SignalState, SystemParams};
use crate::specfun::ComplexScalar;
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Probe transmission split into the cavity background and the
/// contribution of each qubit; both frequency branches are included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeComponents {
    pub cavity: ComplexScalar,
    pub qubits: Vec<ComplexScalar>,
}

impl ProbeComponents {
    pub fn total(&self) -> ComplexScalar {
        self.cavity + self.qubits.iter().sum::<Complex64>()
    }
}

/// Transmission samples on a probe-frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Probe frequencies ω_p, rad/s, strictly increasing.
    pub omega_p: Vec<f64>,
    pub s21: Vec<ComplexScalar>,
    /// Per-term breakdown at each grid point, when requested.
    pub components: Option<Vec<ProbeComponents>>,
    /// Echo of the inputs that produced the spectrum.
    pub meta: serde_json::Value,
}

impl Spectrum {
    /// Checks that the grid is strictly increasing and the arrays agree in length.
    pub fn validate(&self) -> Result<()> {
        if self.omega_p.len() != self.s21.len() {
            return Err(Error::Parameter(format!(
                "grid has {} points but S21 has {}",
                self.omega_p.len(),
                self.s21.len()
            )));
        }
        if let Some(c) = &self.components {
            if c.len() != self.omega_p.len() {
                return Err(Error::Parameter("component array length differs from grid".into()));
            }
        }
        if self.omega_p.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter("probe grid is not strictly increasing".into()));
        }
        Ok(())
    }
}

/// Single-branch transmission `F(ω_p)`: cavity Lorentzian at ω_c* plus the
/// qubit terms `iγ_c Rⱼ(ω_p)/(2(ω_p − ω_c + iγ_c/2))`.
fn branch(omega_p: f64, sys: &SystemParams, sig: &SignalState) -> Result<ProbeComponents> {
    let half = 0.5 * sys.cavity.gamma_c;
    let cavity = Complex64::new(0.0, -half) / Complex64::new(omega_p - sys.omega_c_star(), half);
    let coupling = Complex64::new(0.0, half) / Complex64::new(omega_p - sys.cavity.omega_c, half);
    let qubits = sys
        .qubits
        .iter()
        .map(|q| Ok(coupling * qubit_response(omega_p, q, sys, sig)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbeComponents { cavity, qubits })
}

/// Probe transmission with its per-term breakdown,
/// `S21(ω_p) = F(ω_p) + F(−ω_p)*`.
pub fn s21_probe_components(
    omega_p: f64,
    sys: &SystemParams,
    sig: &SignalState,
) -> Result<ProbeComponents> {
    if !(omega_p > 0.0 && omega_p.is_finite()) {
        return Err(Error::Parameter(format!("probe frequency must be positive, got {omega_p}")));
    }
    two_branch_components(omega_p, sys, sig)
}

/// `F(ω) + F(−ω)*` at any finite frequency of either sign, so that the
/// value at `−ω` is the complex conjugate of the value at `ω`.
pub fn two_branch_components(omega_p: f64, sys: &SystemParams, sig: &SignalState) -> Result<ProbeComponents> {
    if !omega_p.is_finite() {
        return Err(Error::Parameter(format!("probe frequency {omega_p} is not finite")));
    }
    let plus = branch(omega_p, sys, sig)?;
    let minus = branch(-omega_p, sys, sig)?;
    Ok(ProbeComponents {
        cavity: plus.cavity + minus.cavity.conj(),
        qubits: plus
            .qubits
            .iter()
            .zip(&minus.qubits)
            .map(|(p, m)| p + m.conj())
            .collect(),
    })
}

/// Probe transmission S21 at probe frequency `omega_p`.
pub fn s21_probe(omega_p: f64, sys: &SystemParams, sig: &SignalState) -> Result<ComplexScalar> {
    Ok(s21_probe_components(omega_p, sys, sig)?.total())
}

/// Signal transmission `Σ± −iγ_c/2/(ω ∓ ω_c* + iγ_c/2)`.
pub fn s21_signal(omega: f64, sys: &SystemParams) -> ComplexScalar {
    let half = 0.5 * sys.cavity.gamma_c;
    let w = sys.omega_c_star();
    [w, -w]
        .iter()
        .map(|&pole| Complex64::new(0.0, -half) / Complex64::new(omega - pole, half))
        .sum()
}

/// Cumulative probability at which the comb stops adding peaks.
const COMB_PROBABILITY_TARGET: f64 = 1.0 - 1e-10;

/// Photon-number distribution and cavity-induced half-width `(Pₙ, Γₙ)` of
/// each comb peak, truncated once the cumulative probability reaches
/// `1 − 1e-10`.
pub fn comb_weights(field: &SignalField, nbar: f64, gamma_c: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut cumulative = 0.0;
    let mut p = match field {
        SignalField::Vacuum => return vec![(1.0, 0.0)],
        SignalField::Coherent { .. } => (-nbar).exp(),
        SignalField::Incoherent { .. } | SignalField::Thermal { .. } => 1.0 / (nbar + 1.0),
    };
    for n in 0..SERIES_TERM_CAP {
        let nf = n as f64;
        let width = match field {
            SignalField::Coherent { .. } => (nf + nbar) * gamma_c / 2.0,
            SignalField::Incoherent { .. } => nf * gamma_c / 2.0,
            _ => ((2.0 * nbar + 1.0) * nf + nbar) * gamma_c,
        };
        out.push((p, width));
        cumulative += p;
        if cumulative >= COMB_PROBABILITY_TARGET || p == 0.0 && nf > nbar {
            break;
        }
        p *= match field {
            SignalField::Coherent { .. } => nbar / (nf + 1.0),
            _ => nbar / (nbar + 1.0),
        };
    }
    out
}

/// High-Q comb approximation of the probe transmission:
/// `−iγ_c/(2(ω_p − ω_c)) + Σⱼ Σₙ iPₙγ_cχⱼ/(2(ωⱼ − ω_c)) / (ω_p − ωⱼ − 2χⱼn + i(Γₙ + Γ′ⱼ))`.
pub fn comb_spectrum(omega_p: f64, sys: &SystemParams, sig: &SignalState) -> Result<ComplexScalar> {
    let gc = sys.cavity.gamma_c;
    let wc = sys.cavity.omega_c;
    let (nbar, _) = cavity_photon_number(sig, sys);
    let weights = comb_weights(&sig.field, nbar, gc);
    let mut total = Complex64::new(0.0, -gc) / (2.0 * (omega_p - wc));
    for q in &sys.qubits {
        let amplitude = Complex64::new(0.0, gc * q.chi / (2.0 * (q.omega_q - wc)));
        for (n, &(p, width)) in weights.iter().enumerate() {
            let pole = Complex64::new(q.omega_q + 2.0 * q.chi * n as f64, -(width + q.gamma_prime()));
            total += amplitude * p / (omega_p - pole);
        }
    }
    Ok(total)
}

/// Number of points of the default probe grid.
pub const DEFAULT_GRID_POINTS: usize = 2001;
/// Half-span of the default grid in units of `max(χ, Γ′)`.
pub const DEFAULT_GRID_HALF_SPAN: f64 = 50.0;

/// Default probe grid: `2001` points covering every qubit frequency
/// `± 50·max(χⱼ, Γ′ⱼ)`, or the cavity `± 50γ_c` without qubits.
pub fn default_grid(sys: &SystemParams) -> Vec<f64> {
    let (lo, hi) = if sys.qubits.is_empty() {
        let w = sys.omega_c_star();
        let half = DEFAULT_GRID_HALF_SPAN * sys.cavity.gamma_c;
        (w - half, w + half)
    } else {
        sys.qubits.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), q| {
            let half = DEFAULT_GRID_HALF_SPAN * q.chi.abs().max(q.gamma_prime());
            (lo.min(q.omega_q - half), hi.max(q.omega_q + half))
        })
    };
    linspace(lo, hi, DEFAULT_GRID_POINTS)
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n.max(2) - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + i as f64 * step }).collect()
}

/// Evaluates S21 over `grid` in parallel, keeping grid order.
pub fn sweep(
    grid: &[f64],
    sys: &SystemParams,
    sig: &SignalState,
    with_components: bool,
) -> Result<Spectrum> {
    sys.validate()?;
    sig.validate(sys)?;
    let samples = grid
        .par_iter()
        .map(|&wp| s21_probe_components(wp, sys, sig))
        .collect::<Result<Vec<_>>>()?;
    let s21 = samples.iter().map(ProbeComponents::total).collect();
    let spectrum = Spectrum {
        omega_p: grid.to_vec(),
        s21,
        components: with_components.then_some(samples),
        meta: serde_json::json!({ "system": sys, "signal": sig }),
    };
    spectrum.validate()?;
    Ok(spectrum)
}

/// Pointwise ratio `|S21^ν|/|S21^0|` of a signal spectrum to the vacuum one.
pub fn figure_of_merit(signal: &Spectrum, vacuum: &Spectrum) -> Result<Vec<f64>> {
    if signal.omega_p != vacuum.omega_p {
        return Err(Error::Parameter("spectra are sampled on different grids".into()));
    }
    Ok(signal
        .s21
        .iter()
        .zip(&vacuum.s21)
        .map(|(s, v)| s.norm() / v.norm())
        .collect())
}

/// Relative magnitude error `||S21(δ)| − |S21(0)||/|S21(0)|` on `grid` for
/// each signal detuning δ from ω_c*.
pub fn detuning_error(
    sys: &SystemParams,
    sig: &SignalState,
    detunings: &[f64],
    grid: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let reference = sweep(grid, sys, &sig.with_detuning(sys, 0.0), false)?;
    detunings
        .iter()
        .map(|&delta| {
            let detuned = sweep(grid, sys, &sig.with_detuning(sys, delta), false)?;
            Ok(detuned
                .s21
                .iter()
                .zip(&reference.s21)
                .map(|(d, r)| (d.norm() - r.norm()).abs() / r.norm())
                .collect())
        })
        .collect()
}
