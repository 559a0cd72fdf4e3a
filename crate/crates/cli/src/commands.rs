//! Subcommand execution and file emission.

use crate::{Command, Format, Output, SignalFlags, Source, State, WaveguideModel};
use cqed_core::app::check::{compare_with_oracle, subsample, OracleComparison, ORACLE_CHECK_POINTS, ORACLE_CHECK_TOLERANCE};
use cqed_core::app::config::{GapCoupling, ResonatorConfig, RunConfig, SignalConfig, StateKind, DEFAULT_N_FOCK};
use cqed_core::app::output::{
    format_float, spectrum_sidecar, spectrum_svg, svg_plot, to_json_bytes, write_spectrum_csv, write_table, Channel,
};
use cqed_core::app::presets::{preset, FigurePreset};
use cqed_core::app::{AppError, AppResult};
use cqed_core::atom::{atom_s_params, atom_steady_state, AtomParams};
use cqed_core::cavity::{bare_s_params, resonances, small_gap_estimate};
use cqed_core::constants::{C0, TWO_PI};
use cqed_core::detector::{
    comb_spectrum, default_grid, detuning_error, figure_of_merit, linspace, sweep, SignalState, Spectrum,
    SystemParams,
};
use cqed_core::specfun::ComplexScalar;
use cqed_core::waveguide::{line_params, reference_cpw, WaveguideGeometry};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fs;
use std::path::PathBuf;

/// Points of the cavity and atom sweeps when no grid is configured.
const SWEEP_POINTS: usize = 2001;
/// Half-span of the default atom sweep in units of Γ′.
const ATOM_HALF_SPAN: f64 = 20.0;
/// Fundamental frequency of the default resonator, Hz.
const DEFAULT_FUNDAMENTAL_HZ: f64 = 9e9;
/// Gap ratio C/(C′L) of the default resonator.
const DEFAULT_GAP_RATIO: f64 = 0.005;

pub fn run(command: Command) -> AppResult<()> {
    match command {
        Command::Waveguide { source, model, output } => waveguide(&source, model, &output),
        Command::Cavity { source, output } => cavity(&source, &output),
        Command::Atom { source, output } => atom(&source, &output),
        Command::Detect {
            source,
            signal,
            components,
            oracle_check,
            output,
        } => detect(&source, &signal, components, oracle_check, &output),
        Command::Comb { source, signal, output } => comb(&source, &signal, &output),
        Command::Oracle {
            source,
            signal,
            n_fock,
            output,
        } => oracle(&source, &signal, n_fock, &output),
        Command::Figure {
            source,
            signal,
            oracle_check,
            output,
        } => figure(&source, &signal, oracle_check, &output),
    }
}

struct Writer {
    dir: PathBuf,
    format: Format,
}

impl Writer {
    fn new(output: &Output) -> AppResult<Self> {
        fs::create_dir_all(&output.out)
            .map_err(|e| AppError::Io(format!("cannot create {}: {e}", output.out.display())))?;
        Ok(Writer {
            dir: output.out.clone(),
            format: output.format,
        })
    }

    fn csv(&self) -> bool {
        matches!(self.format, Format::Csv | Format::All)
    }

    fn svg(&self) -> bool {
        matches!(self.format, Format::Svg | Format::All)
    }

    fn write(&self, name: &str, bytes: &[u8]) -> AppResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok(())
    }

    fn spectrum(&self, stem: &str, spec: &Spectrum, subcommand: &str, warnings: &[String]) -> AppResult<()> {
        if self.csv() {
            let mut bytes = Vec::new();
            write_spectrum_csv(&mut bytes, spec)?;
            self.write(&format!("{stem}.csv"), &bytes)?;
        }
        self.write(&format!("{stem}.json"), &to_json_bytes(&spectrum_sidecar(spec, subcommand, warnings)))?;
        if self.svg() {
            self.write(&format!("{stem}.svg"), spectrum_svg(spec, stem).as_bytes())?;
        }
        Ok(())
    }

    fn table(&self, stem: &str, header: &[&str], rows: Vec<Vec<f64>>, sidecar: Value, svg: Option<String>) -> AppResult<()> {
        if self.csv() {
            let header: Vec<String> = header.iter().map(|s| s.to_string()).collect();
            let mut bytes = Vec::new();
            write_table(&mut bytes, &header, rows)?;
            self.write(&format!("{stem}.csv"), &bytes)?;
        }
        self.write(&format!("{stem}.json"), &to_json_bytes(&sidecar))?;
        if let (true, Some(svg)) = (self.svg(), svg) {
            self.write(&format!("{stem}.svg"), svg.as_bytes())?;
        }
        Ok(())
    }
}

fn load_config(source: &Source) -> AppResult<RunConfig> {
    match &source.config {
        None => Ok(RunConfig::default()),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| AppError::Io(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text).map_err(|e| match e {
                AppError::Config(m) => AppError::Config(format!("{}: {m}", path.display())),
                other => other,
            })
        }
    }
}

fn load_preset(source: &Source) -> AppResult<Option<FigurePreset>> {
    source
        .preset
        .as_deref()
        .map(|id| preset(id).ok_or_else(|| AppError::Config(format!("unknown preset '{id}'"))))
        .transpose()
}

fn resolve_system(config: &RunConfig, preset: Option<&FigurePreset>) -> AppResult<SystemParams> {
    match (&config.system, preset) {
        (Some(_), Some(_)) => Err(AppError::Config(
            "give either --preset or a [cavity] configuration, not both".into(),
        )),
        (Some(sys), None) => Ok(sys.clone()),
        (None, Some(p)) => Ok(p.system.clone()),
        (None, None) => Err(AppError::Config(
            "a system is required: pass --preset or a configuration with [cavity] and [qubit]".into(),
        )),
    }
}

fn state_kind(state: State) -> StateKind {
    match state {
        State::Vacuum => StateKind::Vacuum,
        State::Coherent => StateKind::Coherent,
        State::Incoherent => StateKind::Incoherent,
        State::Thermal => StateKind::Thermal,
    }
}

/// Layers the preset defaults, the configuration and the flags.
fn resolve_signal(config: &RunConfig, preset: Option<&FigurePreset>, flags: &SignalFlags) -> SignalConfig {
    let mut s = config.signal.unwrap_or_default();
    if let Some(p) = preset {
        if s.nbar.is_none() && s.flux.is_none() {
            s.nbar = Some(p.nbar);
        }
        s.tau_c = s.tau_c.or(p.tau_c.first().copied());
    }
    if let Some(state) = flags.state {
        s.state = state_kind(state);
    }
    if let Some(n) = flags.nbar {
        s.nbar = Some(n);
        s.flux = None;
    }
    if let Some(j) = flags.flux {
        s.flux = Some(j);
        s.nbar = None;
    }
    if let Some(t) = flags.tau_c {
        s.tau_c = Some(t);
    }
    if let Some(d) = flags.detuning {
        s.detuning = TWO_PI * d;
    }
    s
}

fn probe_grid(config: &RunConfig, sys: &SystemParams) -> Vec<f64> {
    config.grid.map(|g| g.points()).unwrap_or_else(|| default_grid(sys))
}

fn report_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("cqed: warning: {w}");
    }
}

fn checked_signal(sys: &SystemParams, signal: &SignalConfig) -> AppResult<(SignalState, Vec<String>)> {
    let sig = signal.to_state(sys)?;
    let warnings = sig.validate(sys)?;
    report_warnings(&warnings);
    Ok((sig, warnings))
}

fn waveguide(source: &Source, model: WaveguideModel, output: &Output) -> AppResult<()> {
    let config = load_config(source)?;
    let geometry = config.waveguide.unwrap_or_else(|| {
        let WaveguideGeometry::Cpw { w, s, h1, h2, eps1_rel, .. } = reference_cpw() else {
            unreachable!("the reference line is coplanar")
        };
        match model {
            WaveguideModel::Full => reference_cpw(),
            WaveguideModel::EqualLayers => WaveguideGeometry::Cpw { w, s, h1, h2, eps1_rel, eps2_rel: eps1_rel },
            WaveguideModel::TwoHalfPlanes => WaveguideGeometry::CpwTwoHalfPlanes { w, s, eps1_rel },
        }
    });
    let p = line_params(&geometry)?;
    println!(
        "C' = {:.4e} F/m, v/c = {:.4}, eps_eff = {:.4}, L' = {:.4e} H/m, C_eff = {:.4e} F/m, Z = {:.4} ohm, Z_static = {:.4} ohm",
        p.c_line, p.v / C0, p.eps_eff, p.l_line, p.c_eff, p.z, p.z_static
    );
    let writer = Writer::new(output)?;
    writer.table(
        "waveguide",
        &["c_line_f_per_m", "v_over_c", "eps_eff", "l_line_h_per_m", "c_eff_f_per_m", "z_ohm", "z_static_ohm"],
        vec![vec![p.c_line, p.v / C0, p.eps_eff, p.l_line, p.c_eff, p.z, p.z_static]],
        json!({ "subcommand": "waveguide", "geometry": geometry, "parameters": p }),
        None,
    )
}

fn cavity(source: &Source, output: &Output) -> AppResult<()> {
    let config = load_config(source)?;
    let line = line_params(&config.waveguide.unwrap_or_else(reference_cpw))?;
    let resonator = config.resonator.unwrap_or(ResonatorConfig {
        length: line.v / (2.0 * DEFAULT_FUNDAMENTAL_HZ),
        gap: GapCoupling::Ratio(DEFAULT_GAP_RATIO),
        line_capacitance: None,
        velocity: None,
        modes: 3,
    });
    let geometry = resonator.geometry(&line);
    let modes = resonances(&geometry, resonator.modes)?;
    let top = modes.last().expect("at least one mode is requested");
    let grid = config.grid.map(|g| g.points()).unwrap_or_else(|| {
        let hi = top.omega + 3.0 * top.gamma;
        linspace(hi / SWEEP_POINTS as f64, hi, SWEEP_POINTS)
    });
    for m in &modes {
        println!(
            "mode {}: f = {:.9e} Hz, full width = {:.6e} Hz, Q = {:.6e}",
            m.n,
            m.omega / TWO_PI,
            m.gamma / TWO_PI,
            m.q_factor
        );
    }
    let writer = Writer::new(output)?;
    let mode_rows = modes
        .iter()
        .map(|m| {
            let (w_est, g_est) = small_gap_estimate(&geometry, m.n);
            vec![m.n as f64, m.omega / TWO_PI, m.omega, m.gamma, m.q_factor, w_est, g_est]
        })
        .collect();
    writer.table(
        "cavity_modes",
        &["n", "omega_hz", "omega_rad_s", "gamma_rad_s", "q_factor", "small_gap_omega_rad_s", "small_gap_gamma_rad_s"],
        mode_rows,
        json!({ "subcommand": "cavity", "geometry": geometry, "ratio": geometry.ratio(), "line": line, "modes": modes }),
        None,
    )?;
    let s: Vec<(ComplexScalar, ComplexScalar)> = grid.iter().map(|&w| bare_s_params(&geometry, w)).collect();
    let rows = grid
        .iter()
        .zip(&s)
        .map(|(&w, (s21, s11))| vec![w / TWO_PI, w, s21.re, s21.im, s11.re, s11.im])
        .collect();
    let x: Vec<f64> = grid.iter().map(|w| w / TWO_PI).collect();
    let svg = svg_plot(
        "bare cavity",
        "frequency (Hz)",
        &x,
        &[
            Channel {
                name: "|S21|",
                values: s.iter().map(|p| p.0.norm()).collect(),
            },
            Channel {
                name: "|S11|",
                values: s.iter().map(|p| p.1.norm()).collect(),
            },
        ],
    );
    writer.table(
        "cavity_sparams",
        &["omega_hz", "omega_rad_s", "re_s21", "im_s21", "re_s11", "im_s11"],
        rows,
        json!({ "subcommand": "cavity", "geometry": geometry, "points": grid.len() }),
        Some(svg),
    )
}

fn atom(source: &Source, output: &Output) -> AppResult<()> {
    let config = load_config(source)?;
    let a = config
        .atom
        .ok_or_else(|| AppError::Config("the atom subcommand needs a configuration with an [atom] section".into()))?;
    let params = |delta: f64| AtomParams {
        delta_omega: delta,
        gamma1: a.gamma1,
        gamma_phi: a.gamma_phi,
        rabi: ComplexScalar::new(a.rabi, 0.0),
    };
    let gp = params(0.0).gamma_prime();
    let grid = config
        .grid
        .map(|g| g.points())
        .unwrap_or_else(|| linspace(-ATOM_HALF_SPAN * gp, ATOM_HALF_SPAN * gp, SWEEP_POINTS));
    let rows = grid
        .iter()
        .map(|&d| {
            let (s11, s21) = atom_s_params(&params(d))?;
            let (sz, sm) = atom_steady_state(&params(d))?;
            Ok(vec![d / TWO_PI, d, s11.re, s11.im, s21.re, s21.im, sz, sm.re, sm.im])
        })
        .collect::<cqed_core::Result<Vec<_>>>()?;
    let x: Vec<f64> = grid.iter().map(|d| d / TWO_PI).collect();
    let channel = |name, col: usize, col2: usize| Channel {
        name,
        values: rows.iter().map(|r| r[col].hypot(r[col2])).collect(),
    };
    let svg = svg_plot(
        "artificial atom",
        "detuning (Hz)",
        &x,
        &[channel("|S11|", 2, 3), channel("|S21|", 4, 5)],
    );
    Writer::new(output)?.table(
        "atom",
        &["delta_hz", "delta_rad_s", "re_s11", "im_s11", "re_s21", "im_s21", "sigma_z", "re_sigma_minus", "im_sigma_minus"],
        rows,
        json!({ "subcommand": "atom", "parameters": a, "points": grid.len() }),
        Some(svg),
    )
}

fn run_oracle_check(writer: &Writer, stem: &str, config: &RunConfig, sys: &SystemParams, sig: &SignalState, grid: &[f64]) -> AppResult<()> {
    let n_fock = config.oracle.map_or(DEFAULT_N_FOCK, |o| o.n_fock);
    let cmp = compare_with_oracle(sys, sig, &subsample(grid, ORACLE_CHECK_POINTS), n_fock)?;
    emit_comparison(writer, stem, &cmp, sys, sig)
}

fn emit_comparison(writer: &Writer, stem: &str, cmp: &OracleComparison, sys: &SystemParams, sig: &SignalState) -> AppResult<()> {
    let worst = cmp.max_deviation();
    println!(
        "oracle: max relative deviation {} over {} points (n_fock = {})",
        format_float(worst),
        cmp.omega_p.len(),
        cmp.n_fock
    );
    let rows = (0..cmp.omega_p.len())
        .map(|i| {
            let (a, o) = (cmp.analytic[i], cmp.oracle[i]);
            vec![cmp.omega_p[i] / TWO_PI, cmp.omega_p[i], a.re, a.im, o.re, o.im, cmp.deviation[i]]
        })
        .collect();
    writer.table(
        stem,
        &["omega_p_hz", "omega_p_rad_s", "re_analytic", "im_analytic", "re_oracle", "im_oracle", "relative_deviation"],
        rows,
        json!({
            "subcommand": "oracle",
            "n_fock": cmp.n_fock,
            "max_relative_deviation": worst,
            "tolerance": ORACLE_CHECK_TOLERANCE,
            "parameters": { "system": sys, "signal": sig },
        }),
        None,
    )?;
    if worst > ORACLE_CHECK_TOLERANCE {
        return Err(AppError::Check(format!(
            "oracle deviation {worst:e} exceeds {ORACLE_CHECK_TOLERANCE:e}"
        )));
    }
    Ok(())
}

fn detect(source: &Source, flags: &SignalFlags, components: bool, oracle_check: bool, output: &Output) -> AppResult<()> {
    let config = load_config(source)?;
    let preset = load_preset(source)?;
    let sys = resolve_system(&config, preset.as_ref())?;
    let (sig, warnings) = checked_signal(&sys, &resolve_signal(&config, preset.as_ref(), flags))?;
    let grid = probe_grid(&config, &sys);
    let spec = sweep(&grid, &sys, &sig, components)?;
    let writer = Writer::new(output)?;
    writer.spectrum("detect", &spec, "detect", &warnings)?;
    if oracle_check {
        run_oracle_check(&writer, "detect_oracle", &config, &sys, &sig, &grid)?;
    }
    Ok(())
}

fn comb(source: &Source, flags: &SignalFlags, output: &Output) -> AppResult<()> {
    let config = load_config(source)?;
    let preset = load_preset(source)?;
    let sys = resolve_system(&config, preset.as_ref())?;
    sys.validate()?;
    let (sig, warnings) = checked_signal(&sys, &resolve_signal(&config, preset.as_ref(), flags))?;
    let grid = probe_grid(&config, &sys);
    let s21 = grid
        .par_iter()
        .map(|&wp| comb_spectrum(wp, &sys, &sig))
        .collect::<cqed_core::Result<Vec<_>>>()?;
    let spec = Spectrum {
        omega_p: grid,
        s21,
        components: None,
        meta: json!({ "system": sys, "signal": sig, "approximation": "comb" }),
    };
    Writer::new(output)?.spectrum("comb", &spec, "comb", &warnings)
}

fn oracle(source: &Source, flags: &SignalFlags, n_fock: Option<usize>, output: &Output) -> AppResult<()> {
    let config = load_config(source)?;
    let preset = load_preset(source)?;
    let sys = resolve_system(&config, preset.as_ref())?;
    let (sig, _) = checked_signal(&sys, &resolve_signal(&config, preset.as_ref(), flags))?;
    let grid = subsample(&probe_grid(&config, &sys), ORACLE_CHECK_POINTS);
    let n_fock = n_fock.or(config.oracle.map(|o| o.n_fock)).unwrap_or(DEFAULT_N_FOCK);
    let cmp = compare_with_oracle(&sys, &sig, &grid, n_fock)?;
    emit_comparison(&Writer::new(output)?, "oracle", &cmp, &sys, &sig)
}

fn figure(source: &Source, flags: &SignalFlags, oracle_check: bool, output: &Output) -> AppResult<()> {
    let config = load_config(source)?;
    let preset = load_preset(source)?.ok_or_else(|| AppError::Config("figure needs --preset".into()))?;
    let sys = resolve_system(&config, Some(&preset))?;
    let grid = probe_grid(&config, &sys);
    let writer = Writer::new(output)?;
    let states: Vec<StateKind> = match (flags.state, preset.detunings.is_empty()) {
        (Some(s), _) => vec![state_kind(s)],
        (None, true) => StateKind::ALL.to_vec(),
        (None, false) => vec![StateKind::Coherent, StateKind::Incoherent],
    };
    let taus: Vec<Option<f64>> = match flags.tau_c {
        Some(t) => vec![Some(t)],
        None => preset.tau_c.iter().copied().map(Some).collect(),
    };
    let mut spectra: Vec<(String, Spectrum)> = Vec::new();
    for state in states {
        let variants: Vec<Option<f64>> = if state == StateKind::Thermal { taus.clone() } else { vec![None] };
        for (k, tau) in variants.iter().enumerate() {
            let mut signal = resolve_signal(&config, Some(&preset), &SignalFlags { tau_c: *tau, ..flags.clone() });
            signal.state = state;
            let (sig, warnings) = checked_signal(&sys, &signal)?;
            let mut stem = format!("{}_{}", preset.id, state.name());
            if variants.len() > 1 {
                stem.push_str(&format!("_{}", k + 1));
            }
            if !preset.detunings.is_empty() {
                let errors = detuning_error(&sys, &sig, &preset.detunings, &grid)?;
                let rows = (0..grid.len())
                    .map(|i| {
                        let mut row = vec![grid[i] / TWO_PI, grid[i]];
                        row.extend(errors.iter().map(|e| e[i]));
                        row
                    })
                    .collect();
                let mut header = vec!["omega_p_hz".to_string(), "omega_p_rad_s".to_string()];
                header.extend((1..=errors.len()).map(|k| format!("error_{k}")));
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                writer.table(
                    &format!("{stem}_detuning_error"),
                    &header,
                    rows,
                    json!({
                        "subcommand": "figure",
                        "preset": preset,
                        "detunings_rad_s": preset.detunings,
                        "parameters": { "system": sys, "signal": sig },
                    }),
                    None,
                )?;
                continue;
            }
            let spec = sweep(&grid, &sys, &sig, false)?;
            writer.spectrum(&stem, &spec, "figure", &warnings)?;
            if oracle_check && state != StateKind::Incoherent {
                run_oracle_check(&writer, &format!("{stem}_oracle"), &config, &sys, &sig, &grid)?;
            }
            spectra.push((stem, spec));
        }
    }
    if let Some((_, vacuum)) = spectra.iter().find(|(stem, _)| stem.ends_with("_vacuum")) {
        let others: Vec<&(String, Spectrum)> = spectra.iter().filter(|(stem, _)| !stem.ends_with("_vacuum")).collect();
        if !others.is_empty() {
            let columns = others
                .iter()
                .map(|(_, s)| figure_of_merit(s, vacuum))
                .collect::<cqed_core::Result<Vec<_>>>()?;
            let rows = (0..grid.len())
                .map(|i| {
                    let mut row = vec![grid[i] / TWO_PI, grid[i]];
                    row.extend(columns.iter().map(|c| c[i]));
                    row
                })
                .collect();
            let mut header = vec!["omega_p_hz".to_string(), "omega_p_rad_s".to_string()];
            header.extend(others.iter().map(|(stem, _)| format!("fom_{}", &stem[preset.id.len() + 1..])));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            writer.table(
                &format!("{}_figure_of_merit", preset.id),
                &header,
                rows,
                json!({ "subcommand": "figure", "preset": preset }),
                None,
            )?;
        }
    }
    Ok(())
}
