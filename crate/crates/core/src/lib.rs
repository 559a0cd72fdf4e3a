//! Probe-transmission spectra of superconducting qubits in a waveguide
//! cavity under vacuum, coherent, incoherent and thermal signal fields.

pub mod app;
pub mod atom;
pub mod cavity;
pub mod constants;
pub mod detector;
pub mod error;
pub mod oracle;
pub mod specfun;
pub mod waveguide;

pub use error::{Error, Result};
