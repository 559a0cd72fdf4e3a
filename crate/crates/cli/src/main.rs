//! `cqed`: spectra, line parameters and oracle reports from the command line.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "cqed", version, about = "Probe-transmission spectra of qubits in a waveguide cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-length parameters of a waveguide cross-section.
    Waveguide {
        #[command(flatten)]
        source: Source,
        /// Built-in geometry used when no configuration is given.
        #[arg(long, value_enum, default_value_t = WaveguideModel::Full)]
        model: WaveguideModel,
        #[command(flatten)]
        output: Output,
    },
    /// Resonances and S-parameters of the bare two-gap cavity.
    Cavity {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Detuning sweep of a driven artificial atom in an open line.
    Atom {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Probe transmission of the qubit array for a signal field.
    Detect {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        signal: SignalFlags,
        /// Also write the cavity and per-qubit terms.
        #[arg(long)]
        components: bool,
        /// Compare against the brute-force oracle on up to 200 grid points.
        #[arg(long)]
        oracle_check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// High-Q comb approximation of the probe transmission.
    Comb {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        signal: SignalFlags,
        #[command(flatten)]
        output: Output,
    },
    /// Analytic-versus-oracle deviation table for a single qubit.
    Oracle {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        signal: SignalFlags,
        /// Fock-space truncation.
        #[arg(long)]
        n_fock: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Spectra of a published figure for each signal state.
    Figure {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        signal: SignalFlags,
        /// Compare every oracle-capable panel against the brute-force oracle.
        #[arg(long)]
        oracle_check: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Configuration file, sectioned text or JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Figure preset: fig1, fig2, fig2bis, fig3, fig35q, fig4, fig5, fig6, fig7 or fig10.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
struct SignalFlags {
    /// Signal field statistics.
    #[arg(long, value_enum)]
    state: Option<State>,
    /// Mean cavity photon number.
    #[arg(long, conflicts_with = "flux")]
    nbar: Option<f64>,
    /// Photon flux in photons per second.
    #[arg(long)]
    flux: Option<f64>,
    /// Thermal coherence time in seconds.
    #[arg(long = "tau-c")]
    tau_c: Option<f64>,
    /// Signal detuning from the renormalized cavity frequency, Hz.
    #[arg(long, allow_hyphen_values = true)]
    detuning: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Files to write next to the JSON sidecar.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Svg,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Vacuum,
    Coherent,
    Incoherent,
    Thermal,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum WaveguideModel {
    /// Reference coplanar line with a thin cover layer.
    Full,
    /// Reference line with the cover permittivity equal to the substrate.
    EqualLayers,
    /// Strip between a vacuum and a dielectric half-plane.
    TwoHalfPlanes,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cqed: {}", e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
