//! Comparison of the analytic qubit response with the brute-force oracle.

use super::{AppError, AppResult};
use crate::detector::{qubit_response, qubit_response_thermal, CavityDrive, SignalField, SignalState, SystemParams};
use crate::oracle::{thermal_fock_response, LindbladOracle};
use crate::specfun::ComplexScalar;
use rayon::prelude::*;
use serde::Serialize;

/// Largest pointwise relative deviation accepted by `--oracle-check`.
pub const ORACLE_CHECK_TOLERANCE: f64 = 1e-6;
/// Most probe points an oracle comparison evaluates.
pub const ORACLE_CHECK_POINTS: usize = 200;

/// Analytic and oracle responses of the single qubit on a probe grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub omega_p: Vec<f64>,
    pub analytic: Vec<ComplexScalar>,
    pub oracle: Vec<ComplexScalar>,
    /// `|oracle − analytic|/|analytic|` at each point.
    pub deviation: Vec<f64>,
    pub n_fock: usize,
}

impl OracleComparison {
    pub fn max_deviation(&self) -> f64 {
        self.deviation.iter().copied().fold(0.0, f64::max)
    }
}

/// At most `limit` points of `grid`, evenly spaced in index and always
/// including both ends.
pub fn subsample(grid: &[f64], limit: usize) -> Vec<f64> {
    if grid.len() <= limit || limit < 2 {
        return grid.to_vec();
    }
    (0..limit)
        .map(|i| grid[i * (grid.len() - 1) / (limit - 1)])
        .collect()
}

/// Evaluates both responses on `grid`. The master-equation oracle covers
/// vacuum and coherent signals; thermal signals use the photon-number
/// recurrence. Incoherent signals have no oracle.
pub fn compare_with_oracle(
    sys: &SystemParams,
    sig: &SignalState,
    grid: &[f64],
    n_fock: usize,
) -> AppResult<OracleComparison> {
    let [q] = sys.qubits.as_slice() else {
        return Err(AppError::Config(format!(
            "the oracle handles exactly one qubit, the system has {}",
            sys.qubits.len()
        )));
    };
    let pairs: Vec<(ComplexScalar, ComplexScalar)> = match sig.field {
        SignalField::Vacuum | SignalField::Coherent { .. } => {
            let oracle = LindbladOracle::new(sys, sig, n_fock)?;
            grid.par_iter()
                .map(|&wp| Ok((qubit_response(wp, q, sys, sig)?, oracle.respond(wp)?.sigma_minus)))
                .collect::<crate::Result<_>>()?
        }
        SignalField::Thermal { flux, tau_c } => {
            sys.validate()?;
            sig.validate(sys)?;
            let drive = CavityDrive::new(sys, sig);
            grid.par_iter()
                .map(|&wp| {
                    Ok((
                        qubit_response_thermal(wp, q, &drive, flux, tau_c)?,
                        thermal_fock_response(wp, q, &drive, flux, tau_c, n_fock)?,
                    ))
                })
                .collect::<crate::Result<_>>()?
        }
        SignalField::Incoherent { .. } => {
            return Err(AppError::Config(
                "no oracle exists for the incoherent state; use vacuum, coherent or thermal".into(),
            ))
        }
    };
    let (analytic, oracle): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let deviation = analytic
        .iter()
        .zip(&oracle)
        .map(|(a, o)| (o - a).norm() / a.norm())
        .collect();
    Ok(OracleComparison {
        omega_p: grid.to_vec(),
        analytic,
        oracle,
        deviation,
        n_fock,
    })
}
