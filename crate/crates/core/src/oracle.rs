//! Brute-force validation of the analytic responses in a truncated Fock space.
//!
//! The coherent and vacuum cases are checked against a Lindblad master
//! equation built from generic operator algebra: the first-order probe
//! perturbation of the stationary state `|0,g⟩⟨0,g|` is found by a direct
//! linear solve at the probe sideband. The thermal case is checked against
//! the photon-number recurrence of its populations.

use crate::detector::{cavity_photon_number, CavityDrive, QubitParams, SignalField, SignalState, SystemParams};
use crate::specfun::ComplexScalar;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Smallest supported Fock truncation.
pub const MIN_FOCK: usize = 4;
/// Largest Fock truncation handled with dense matrices.
pub const MAX_FOCK: usize = 512;

type CMatrix = DMatrix<Complex64>;
type CVector = DVector<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Cavity Fock space truncated to `n_fock` levels, tensored with a qubit.
///
/// Basis states are ordered `|n, s⟩ ↦ 2n + s` with `s = 0` for the ground
/// and `s = 1` for the excited qubit state.
#[derive(Debug, Clone)]
pub struct FockOperatorSpace {
    pub n_fock: usize,
    /// Cavity annihilation operator on the Fock factor alone.
    pub a_fock: CMatrix,
    /// `a ⊗ 1`.
    pub a: CMatrix,
    /// `a† ⊗ 1`.
    pub a_dag: CMatrix,
    /// `1 ⊗ σ⁻` with `σ⁻ = |g⟩⟨e|`.
    pub sigma_minus: CMatrix,
    /// `1 ⊗ σ⁺`.
    pub sigma_plus: CMatrix,
    /// `1 ⊗ σᶻ` with `σᶻ|e⟩ = |e⟩`.
    pub sigma_z: CMatrix,
    pub identity: CMatrix,
}

impl FockOperatorSpace {
    pub fn new(n_fock: usize) -> Result<Self> {
        if !(MIN_FOCK..=MAX_FOCK).contains(&n_fock) {
            return Err(Error::Parameter(format!(
                "n_fock must lie in {MIN_FOCK}..={MAX_FOCK}, got {n_fock}"
            )));
        }
        let mut a_fock = CMatrix::zeros(n_fock, n_fock);
        for n in 1..n_fock {
            a_fock[(n - 1, n)] = c((n as f64).sqrt());
        }
        let id_fock = CMatrix::identity(n_fock, n_fock);
        let id_qubit = CMatrix::identity(2, 2);
        let mut lower = CMatrix::zeros(2, 2);
        lower[(0, 1)] = c(1.0);
        let z = CMatrix::from_diagonal(&CVector::from_vec(vec![c(-1.0), c(1.0)]));
        let a = a_fock.kronecker(&id_qubit);
        let sigma_minus = id_fock.kronecker(&lower);
        Ok(FockOperatorSpace {
            n_fock,
            a_dag: a.adjoint(),
            sigma_plus: sigma_minus.adjoint(),
            sigma_z: id_fock.kronecker(&z),
            identity: CMatrix::identity(2 * n_fock, 2 * n_fock),
            a_fock,
            a,
            sigma_minus,
        })
    }

    /// Dimension of the joint space.
    pub fn dim(&self) -> usize {
        2 * self.n_fock
    }

    /// Index of `|n, s⟩`.
    pub fn index(n: usize, excited: bool) -> usize {
        2 * n + usize::from(excited)
    }

    /// Number operator `a†a` on the Fock factor alone.
    pub fn number_fock(&self) -> CMatrix {
        self.a_fock.adjoint() * &self.a_fock
    }
}

/// `⟨0|(w₀ − w·a†a − b·a† − b*·a)⁻¹|0⟩` by a dense solve on the Fock factor.
pub fn propagator_vacuum_element(
    space: &FockOperatorSpace,
    w0: ComplexScalar,
    w: ComplexScalar,
    b: ComplexScalar,
) -> Result<ComplexScalar> {
    let n = space.n_fock;
    let a = &space.a_fock;
    let matrix = CMatrix::identity(n, n) * w0 - space.number_fock() * w - a.adjoint() * b - a * b.conj();
    let mut rhs = CVector::zeros(n);
    rhs[0] = c(1.0);
    let x = matrix
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("propagator matrix is singular at this probe frequency".into()))?;
    Ok(x[0])
}

/// Linear response of the qubit and the cavity to a weak probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyResponse {
    /// Probe frequency, rad/s.
    pub omega_p: f64,
    /// `g⟨σ⁻⟩′/(Ω_p/2)`, comparable with the analytic qubit responses.
    pub sigma_minus: ComplexScalar,
    /// `⟨a⟩′/(Ω_p/2)`, the probe-driven cavity amplitude.
    pub a_expect: ComplexScalar,
    /// Largest of the relative solve residual and the relative leakage of
    /// the Liouvillian out of the response subspace.
    pub residual: f64,
}

/// Solver tolerance that every returned residual must meet.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Largest relative amplitude allowed in the highest retained Fock level.
pub const TRUNCATION_TAIL: f64 = 1e-10;

/// Liouvillian of the displaced dispersive model restricted to operators
/// `|ψ⟩⟨0,g|`, built once and reused for every probe frequency.
#[derive(Debug, Clone)]
pub struct LindbladOracle {
    space: FockOperatorSpace,
    /// Restricted Liouvillian in the rotating frame of the signal.
    restricted: CMatrix,
    leakage: f64,
    signal_omega: f64,
    /// Source `(a† + ε σ⁺)|0,g⟩` of the probe.
    source: CVector,
    coupling: f64,
    stationarity: f64,
}

impl LindbladOracle {
    /// Builds the oracle for a single-qubit system with a vacuum or
    /// coherent signal.
    pub fn new(sys: &SystemParams, sig: &SignalState, n_fock: usize) -> Result<Self> {
        sys.validate()?;
        sig.validate(sys)?;
        let [q] = sys.qubits.as_slice() else {
            return Err(Error::Parameter(format!(
                "the master-equation oracle handles exactly one qubit, got {}",
                sys.qubits.len()
            )));
        };
        let beta = match sig.field {
            SignalField::Vacuum => Complex64::new(0.0, 0.0),
            SignalField::Coherent { .. } => cavity_photon_number(sig, sys).1.unwrap_or_default(),
            _ => {
                return Err(Error::Parameter(
                    "the master-equation oracle supports vacuum and coherent signals only".into(),
                ))
            }
        };
        let space = FockOperatorSpace::new(n_fock)?;
        let omega = sig.omega(sys);
        let generator = Generator::new(
            dispersive_hamiltonian(&space, sys, q, omega, beta),
            collapse_operators(&space, sys.cavity.gamma_c, q),
        );

        let dim = space.dim();
        let anchor = FockOperatorSpace::index(0, false);
        let mut ground = CVector::zeros(dim);
        ground[anchor] = c(1.0);
        let mut restricted = CMatrix::zeros(dim, dim);
        let mut leak_sq = 0.0;
        let mut norm_sq = 0.0;
        for l in 0..dim {
            let mut basis = CVector::zeros(dim);
            basis[l] = c(1.0);
            let image = apply_liouvillian(&generator, &basis, &ground);
            for r in 0..dim {
                for m in 0..dim {
                    let v = image[(r, m)];
                    norm_sq += v.norm_sqr();
                    if m == anchor {
                        restricted[(r, l)] = v;
                    } else {
                        leak_sq += v.norm_sqr();
                    }
                }
            }
        }
        let stationary = apply_liouvillian(&generator, &ground, &ground);

        let detuning = q.omega_q - sys.cavity.omega_c;
        let eps = (q.chi / detuning).abs().sqrt();
        let coupling = q.chi / eps;
        let source = &space.a_dag * &ground + (&space.sigma_plus * &ground) * c(eps);
        Ok(LindbladOracle {
            restricted,
            leakage: (leak_sq / norm_sq.max(f64::MIN_POSITIVE)).sqrt(),
            signal_omega: omega,
            source,
            coupling,
            stationarity: stationary.norm(),
            space,
        })
    }

    /// Norm of `𝓛(|0,g⟩⟨0,g|)`, which vanishes for a stationary state.
    pub fn stationarity_residual(&self) -> f64 {
        self.stationarity
    }

    /// Relative weight of the Liouvillian image outside the response subspace.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    /// Zeroth-order stationary state `|0,g⟩⟨0,g|`.
    pub fn ground_state(&self) -> CMatrix {
        let dim = self.space.dim();
        let mut rho = CMatrix::zeros(dim, dim);
        rho[(0, 0)] = c(1.0);
        rho
    }

    /// Response at probe frequency `omega_p` for probe amplitude `probe`.
    ///
    /// The sideband component `X` of the first-order density matrix solves
    /// `(𝓛 + iΔ)X = i(Ω_p/2)(a† + εσ⁺)ρ₀` with `Δ = ω_p − ω`.
    pub fn respond_with_amplitude(&self, omega_p: f64, probe: f64) -> Result<SteadyResponse> {
        let dim = self.space.dim();
        let delta = omega_p - self.signal_omega;
        let matrix = &self.restricted + CMatrix::identity(dim, dim) * Complex64::new(0.0, delta);
        let rhs = &self.source * Complex64::new(0.0, 0.5 * probe);
        let psi = matrix
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Singular(format!("Liouvillian is singular at omega_p = {omega_p}")))?;
        let solve_residual = (&matrix * &psi - &rhs).norm() / rhs.norm();
        let residual = solve_residual.max(self.leakage);
        if !(residual <= ORACLE_TOLERANCE) {
            return Err(Error::NonConvergence {
                function: "lindblad_steady_response",
                iterations: 1,
                residual,
            });
        }
        let tail = (psi[FockOperatorSpace::index(self.space.n_fock - 1, false)].norm()
            + psi[FockOperatorSpace::index(self.space.n_fock - 1, true)].norm())
            / psi.norm();
        if tail > TRUNCATION_TAIL {
            return Err(Error::NonConvergence {
                function: "lindblad_steady_response",
                iterations: self.space.n_fock,
                residual: tail,
            });
        }
        let half = 0.5 * probe;
        let sigma = psi[FockOperatorSpace::index(0, true)];
        let a = psi[FockOperatorSpace::index(1, false)];
        Ok(SteadyResponse {
            omega_p,
            sigma_minus: sigma * self.coupling / half,
            a_expect: a / half,
            residual,
        })
    }

    /// Response at `omega_p` for a unit probe amplitude.
    pub fn respond(&self, omega_p: f64) -> Result<SteadyResponse> {
        self.respond_with_amplitude(omega_p, 1.0)
    }
}

/// Hamiltonian `H⁽²⁾` in the frame rotating with the signal, without the
/// probe: `(ωⱼ−ω)σᶻ/2 + χ(a†+β*)(a+β)(σᶻ+1) + (ω_c*−ω)a†a`.
fn dispersive_hamiltonian(
    space: &FockOperatorSpace,
    sys: &SystemParams,
    q: &QubitParams,
    omega: f64,
    beta: Complex64,
) -> CMatrix {
    let id = &space.identity;
    let shifted = &space.a + id * beta;
    let shifted_dag = shifted.adjoint();
    let photon = &shifted_dag * &shifted;
    &space.sigma_z * c(0.5 * (q.omega_q - omega))
        + photon * (&space.sigma_z + id) * c(q.chi)
        + &space.a_dag * &space.a * c(sys.omega_c_star() - omega)
}

/// Collapse operators for cavity decay, qubit relaxation and pure
/// dephasing, normalized so that the coherence decays at `Γ/2 + Γ_φ`.
fn collapse_operators(space: &FockOperatorSpace, gamma_c: f64, q: &QubitParams) -> Vec<CMatrix> {
    let projector = &space.sigma_plus * &space.sigma_minus;
    vec![
        &space.a * c(gamma_c.sqrt()),
        &space.sigma_minus * c(q.gamma.sqrt()),
        projector * c((2.0 * q.gamma_phi).sqrt()),
    ]
}

/// `𝓛(|u⟩⟨v|) = −i[H, ρ] + Σₖ (LₖρLₖ† − ½{Lₖ†Lₖ, ρ})` for a rank-one `ρ`.
fn apply_liouvillian(generator: &Generator, u: &CVector, v: &CVector) -> CMatrix {
    let minus_i = Complex64::new(0.0, -1.0);
    let vt = v.adjoint();
    let mut out = (&generator.hamiltonian * u) * &vt * minus_i
        - u * (&generator.hamiltonian_adjoint * v).adjoint() * minus_i;
    for (l, ldl) in generator.jumps.iter().zip(&generator.jump_products) {
        out += (l * u) * (l * v).adjoint();
        out -= (ldl * u) * &vt * c(0.5);
        out -= u * (ldl * v).adjoint() * c(0.5);
    }
    out
}

/// Hamiltonian and collapse operators with their products precomputed.
struct Generator {
    hamiltonian: CMatrix,
    hamiltonian_adjoint: CMatrix,
    jumps: Vec<CMatrix>,
    jump_products: Vec<CMatrix>,
}

impl Generator {
    fn new(hamiltonian: CMatrix, jumps: Vec<CMatrix>) -> Self {
        Generator {
            hamiltonian_adjoint: hamiltonian.adjoint(),
            hamiltonian,
            jump_products: jumps.iter().map(|l| l.adjoint() * l).collect(),
            jumps,
        }
    }
}

/// Single-qubit master-equation response at one probe frequency.
pub fn lindblad_steady_response(
    sys: &SystemParams,
    sig: &SignalState,
    omega_p: f64,
    n_fock: usize,
) -> Result<SteadyResponse> {
    LindbladOracle::new(sys, sig, n_fock)?.respond(omega_p)
}

/// Thermal-field response from the population recurrence
/// `[i(ω_p−ωⱼ+iΓ′−2nχ) − γ_c(1+n̄_p)n − γ_c n̄_p(n+1)]fₙ + γ_c(1+n̄_p)(n+1)fₙ₊₁
/// + γ_c n̄_p n fₙ₋₁ = i pₙ` with thermal weights `pₙ`, truncated at `n_fock`
/// photons; returns `χΣfₙ`.
pub fn thermal_fock_response(
    omega_p: f64,
    q: &QubitParams,
    drive: &CavityDrive,
    flux: f64,
    tau_c: f64,
    n_fock: usize,
) -> Result<ComplexScalar> {
    if !(MIN_FOCK..=MAX_FOCK).contains(&n_fock) {
        return Err(Error::Parameter(format!(
            "n_fock must lie in {MIN_FOCK}..={MAX_FOCK}, got {n_fock}"
        )));
    }
    let i = Complex64::i();
    let gc = drive.gamma_c;
    let detuning = drive.signal_omega - drive.omega_c_star;
    let occupation = |tau: Complex64| (flux / tau) / (detuning * detuning + 1.0 / (tau * tau));
    let nbar = occupation(c(tau_c)).re;
    let tau_p = tau_c / Complex64::new(1.0, tau_c * (omega_p - drive.signal_omega));
    let nbar_p = occupation(tau_p);
    let mut m = CMatrix::zeros(n_fock, n_fock);
    let mut rhs = CVector::zeros(n_fock);
    let ratio = nbar / (1.0 + nbar);
    let mut weight = 1.0 / (1.0 + nbar);
    for n in 0..n_fock {
        let nf = n as f64;
        m[(n, n)] = i * Complex64::new(omega_p - q.omega_q - 2.0 * nf * q.chi, q.gamma_prime())
            - gc * (1.0 + nbar_p) * nf
            - gc * nbar_p * (nf + 1.0);
        if n + 1 < n_fock {
            m[(n, n + 1)] = gc * (1.0 + nbar_p) * (nf + 1.0);
        }
        if n >= 1 {
            m[(n, n - 1)] = gc * nbar_p * nf;
        }
        rhs[n] = i * weight;
        weight *= ratio;
    }
    let f = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("thermal recurrence matrix is singular".into()))?;
    Ok(q.chi * f.sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::TWO_PI;
    use crate::detector::CavityParams;

    fn system(chi: f64) -> SystemParams {
        SystemParams {
            cavity: CavityParams {
                omega_c: TWO_PI * 9e9,
                gamma_c: TWO_PI * 100e3,
            },
            qubits: vec![QubitParams {
                omega_q: TWO_PI * 10e9,
                chi,
                gamma: TWO_PI * 250e3,
                gamma_phi: TWO_PI * 30e3,
            }],
        }
    }

    #[test]
    fn operator_algebra() {
        let s = FockOperatorSpace::new(6).unwrap();
        let comm = &s.a * &s.a_dag - &s.a_dag * &s.a;
        for k in 0..2 * (s.n_fock - 1) {
            assert!((comm[(k, k)] - c(1.0)).norm() < 1e-14);
        }
        let n = s.number_fock();
        for k in 0..6 {
            assert!((n[(k, k)] - c(k as f64)).norm() < 1e-14);
        }
        assert!(FockOperatorSpace::new(2).is_err());
    }

    #[test]
    fn propagator_without_coupling_is_diagonal() {
        let s = FockOperatorSpace::new(8).unwrap();
        let w0 = Complex64::new(0.3, 0.1);
        let v = propagator_vacuum_element(&s, w0, Complex64::new(2.0, -0.1), c(0.0)).unwrap();
        assert!((v - 1.0 / w0).norm() < 1e-15);
    }

    #[test]
    fn vacuum_cavity_amplitude() {
        let sys = system(TWO_PI * 10e6);
        let oracle = LindbladOracle::new(&sys, &SignalState::vacuum(), 8).unwrap();
        assert!(oracle.leakage() < 1e-14);
        assert!(oracle.stationarity_residual() < 1e-6);
        let wp = TWO_PI * 9.0001e9;
        let r = oracle.respond(wp).unwrap();
        let expect = 1.0 / Complex64::new(wp - sys.omega_c_star(), 0.5 * sys.cavity.gamma_c);
        assert!((r.a_expect - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn rejects_unsupported_inputs() {
        let mut sys = system(TWO_PI * 1e6);
        assert!(LindbladOracle::new(&sys, &SignalState::incoherent(1.0), 8).is_err());
        sys.qubits.push(sys.qubits[0]);
        assert!(LindbladOracle::new(&sys, &SignalState::vacuum(), 8).is_err());
    }
}
