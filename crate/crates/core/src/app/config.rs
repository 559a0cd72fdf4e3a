//! Run configuration in a sectioned `key = value` text format with explicit
//! unit suffixes, or the equivalent JSON document.
//!
//! ```text
//! [cavity]
//! omega_c = 9 GHz
//! gamma_c = 100 kHz
//!
//! [qubit]
//! omega_q = 10 GHz
//! chi = 10 MHz
//! gamma = 250 kHz
//!
//! [signal]
//! state = coherent
//! nbar = 1
//! ```
//!
//! Frequencies given in Hz, kHz, MHz or GHz are cyclic and multiplied by 2π;
//! `rad/s` is taken as angular. Every physical quantity needs a unit and
//! dimensionless quantities must not carry one. `[qubit]` may repeat.

use super::{AppError, AppResult};
use crate::cavity::ResonatorGeometry;
use crate::constants::TWO_PI;
use crate::detector::{CavityParams, PhotonAmount, QubitParams, SignalField, SignalState, SystemParams};
use crate::waveguide::{WaveguideGeometry, WaveguideParams};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Physical dimension of a configured quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Angular frequency, stored in rad/s.
    Frequency,
    /// Event rate such as a photon flux, stored in 1/s.
    Rate,
    Time,
    Length,
    Capacitance,
    CapacitancePerLength,
    Velocity,
    Energy,
    Dimensionless,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dimension::Frequency => "a frequency (Hz, kHz, MHz, GHz or rad/s)",
            Dimension::Rate => "a rate (1/s)",
            Dimension::Time => "a time (s, ms, us, ns, ps or fs)",
            Dimension::Length => "a length (m, mm, um or nm)",
            Dimension::Capacitance => "a capacitance (F, pF, fF or aF)",
            Dimension::CapacitancePerLength => "a capacitance per length (F/m or pF/m)",
            Dimension::Velocity => "a velocity (m/s)",
            Dimension::Energy => "an energy (J)",
            Dimension::Dimensionless => "a plain number without unit",
        };
        f.write_str(name)
    }
}

/// Unit symbol, dimension and decimal exponent of the SI prefix. Cyclic
/// frequency units are additionally multiplied by 2π after the prefix.
const UNITS: &[(&str, Dimension, i32)] = &[
    ("Hz", Dimension::Frequency, 0),
    ("kHz", Dimension::Frequency, 3),
    ("MHz", Dimension::Frequency, 6),
    ("GHz", Dimension::Frequency, 9),
    ("rad/s", Dimension::Frequency, 0),
    ("1/s", Dimension::Rate, 0),
    ("s", Dimension::Time, 0),
    ("ms", Dimension::Time, -3),
    ("us", Dimension::Time, -6),
    ("ns", Dimension::Time, -9),
    ("ps", Dimension::Time, -12),
    ("fs", Dimension::Time, -15),
    ("m", Dimension::Length, 0),
    ("mm", Dimension::Length, -3),
    ("um", Dimension::Length, -6),
    ("nm", Dimension::Length, -9),
    ("F", Dimension::Capacitance, 0),
    ("pF", Dimension::Capacitance, -12),
    ("fF", Dimension::Capacitance, -15),
    ("aF", Dimension::Capacitance, -18),
    ("F/m", Dimension::CapacitancePerLength, 0),
    ("pF/m", Dimension::CapacitancePerLength, -12),
    ("m/s", Dimension::Velocity, 0),
    ("J", Dimension::Energy, 0),
];

/// The decimal `literal` scaled by `10^exponent` with a single rounding,
/// so that `6.6 um` equals the literal `6.6e-6`.
fn apply_prefix(literal: &str, exponent: i32) -> Option<f64> {
    let (mantissa, own) = match literal.find(['e', 'E']) {
        Some(i) => (&literal[..i], literal[i + 1..].parse::<i32>().ok()?),
        None => (literal, 0),
    };
    format!("{mantissa}e{}", own.checked_add(exponent)?).parse().ok()
}

/// Right-hand side of an entry before unit resolution.
#[derive(Debug, Clone, PartialEq)]
pub enum RawValue {
    /// A number as written, with its optional unit symbol.
    Quantity { literal: String, unit: Option<String> },
    Word(String),
}

impl RawValue {
    fn parse(text: &str) -> RawValue {
        let text = text.trim();
        if is_number(text) {
            return RawValue::Quantity {
                literal: text.to_string(),
                unit: None,
            };
        }
        if let Some((number, unit)) = text.split_once(char::is_whitespace) {
            if is_number(number) {
                return RawValue::Quantity {
                    literal: number.to_string(),
                    unit: Some(unit.trim().to_string()),
                };
            }
        }
        RawValue::Word(text.to_string())
    }
}

fn is_number(text: &str) -> bool {
    text.parse::<f64>().is_ok() && text.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b))
}

/// One `key = value` line.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: RawValue,
    /// 1-based source line, 0 for JSON input.
    pub line: usize,
}

/// A `[name]` block; entries ahead of the first header land in a section
/// with an empty name.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

/// Parsed configuration before typing and unit conversion.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub sections: Vec<Section>,
}

fn at(line: usize, message: impl fmt::Display) -> AppError {
    if line == 0 {
        AppError::Config(message.to_string())
    } else {
        AppError::Config(format!("line {line}: {message}"))
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Document {
    /// Parses the sectioned text format; `#` starts a comment.
    pub fn parse_text(text: &str) -> AppResult<Document> {
        let mut sections = vec![Section {
            name: String::new(),
            line: 0,
            entries: Vec::new(),
        }];
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| at(line, "section header is missing its closing ']'"))?
                    .trim();
                if !is_identifier(name) {
                    return Err(at(line, format!("invalid section name '{name}'")));
                }
                sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| at(line, "expected 'key = value' or '[section]'"))?;
            let key = key.trim();
            if !is_identifier(key) {
                return Err(at(line, format!("invalid key '{key}'")));
            }
            if value.trim().is_empty() {
                return Err(at(line, format!("key '{key}' has no value")));
            }
            let section = sections.last_mut().expect("root section always exists");
            section.entries.push(Entry {
                key: key.to_string(),
                value: RawValue::parse(value),
                line,
            });
        }
        if sections[0].entries.is_empty() {
            sections.remove(0);
        }
        Ok(Document { sections })
    }

    /// Parses the JSON form: an object of sections, each an object of
    /// entries or an array of such objects for repeated sections. Strings
    /// are read like text values, numbers are dimensionless.
    pub fn parse_json(text: &str) -> AppResult<Document> {
        let root: serde_json::Value =
            serde_json::from_str(text).map_err(|e| AppError::Config(format!("invalid JSON: {e}")))?;
        let object = root
            .as_object()
            .ok_or_else(|| AppError::Config("JSON configuration must be an object of sections".into()))?;
        let mut sections = Vec::new();
        for (name, body) in object {
            if !is_identifier(name) {
                return Err(AppError::Config(format!("invalid section name '{name}'")));
            }
            let blocks: Vec<&serde_json::Value> = match body {
                serde_json::Value::Array(items) => items.iter().collect(),
                other => vec![other],
            };
            for block in blocks {
                let fields = block
                    .as_object()
                    .ok_or_else(|| AppError::Config(format!("section '{name}' must be an object")))?;
                let entries = fields
                    .iter()
                    .map(|(key, value)| {
                        let value = match value {
                            serde_json::Value::Number(n) => RawValue::Quantity {
                                literal: n.to_string(),
                                unit: None,
                            },
                            serde_json::Value::String(s) => RawValue::parse(s),
                            _ => {
                                return Err(AppError::Config(format!(
                                    "{name}.{key}: expected a number or a string"
                                )))
                            }
                        };
                        Ok(Entry {
                            key: key.clone(),
                            value,
                            line: 0,
                        })
                    })
                    .collect::<AppResult<Vec<_>>>()?;
                sections.push(Section {
                    name: name.clone(),
                    line: 0,
                    entries,
                });
            }
        }
        Ok(Document { sections })
    }

    /// Parses JSON when the text starts with `{`, the text format otherwise.
    pub fn parse(text: &str) -> AppResult<Document> {
        if text.trim_start().starts_with('{') {
            Document::parse_json(text)
        } else {
            Document::parse_text(text)
        }
    }
}

/// Typed view of one section that tracks which keys were consumed.
struct Fields<'a> {
    section: &'a Section,
    used: BTreeSet<&'a str>,
}

impl<'a> Fields<'a> {
    fn new(section: &'a Section) -> AppResult<Self> {
        let mut seen = BTreeSet::new();
        for e in &section.entries {
            if !seen.insert(e.key.as_str()) {
                return Err(at(e.line, format!("duplicate key '{}' in [{}]", e.key, section.name)));
            }
        }
        Ok(Fields {
            section,
            used: BTreeSet::new(),
        })
    }

    fn entry(&mut self, key: &'a str) -> Option<&'a Entry> {
        let found = self.section.entries.iter().find(|e| e.key == key)?;
        self.used.insert(key);
        Some(found)
    }

    fn quantity(&mut self, key: &'a str, dimension: Dimension) -> AppResult<Option<f64>> {
        let Some(entry) = self.entry(key) else {
            return Ok(None);
        };
        let name = &self.section.name;
        let RawValue::Quantity { literal, unit } = &entry.value else {
            return Err(at(entry.line, format!("[{name}] {key}: expected {dimension}")));
        };
        let factor = match (unit, dimension) {
            (None, Dimension::Dimensionless) => (0, false),
            (None, _) => {
                return Err(at(entry.line, format!("[{name}] {key}: missing unit, expected {dimension}")))
            }
            (Some(u), _) => match UNITS.iter().find(|(symbol, _, _)| symbol == u) {
                Some(&(symbol, d, exponent)) if d == dimension => {
                    let cyclic = d == Dimension::Frequency && symbol != "rad/s";
                    (exponent, cyclic)
                }
                _ => return Err(at(entry.line, format!("[{name}] {key}: unit '{u}' is not {dimension}"))),
            },
        };
        let (exponent, cyclic) = factor;
        let scaled = apply_prefix(literal, exponent).unwrap_or(f64::NAN);
        let scaled = if cyclic { TWO_PI * scaled } else { scaled };
        if !scaled.is_finite() {
            return Err(at(entry.line, format!("[{name}] {key}: value is not finite")));
        }
        Ok(Some(scaled))
    }

    fn required(&mut self, key: &'a str, dimension: Dimension) -> AppResult<f64> {
        let line = self.section.line;
        let name = &self.section.name;
        self.quantity(key, dimension)?
            .ok_or_else(|| at(line, format!("[{name}] is missing '{key}'")))
    }

    fn count(&mut self, key: &'a str) -> AppResult<Option<usize>> {
        let line = self.entry(key).map_or(0, |e| e.line);
        match self.quantity(key, Dimension::Dimensionless)? {
            None => Ok(None),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => Ok(Some(v as usize)),
            Some(v) => Err(at(line, format!("[{}] {key}: expected a non-negative integer, got {v}", self.section.name))),
        }
    }

    fn word(&mut self, key: &'a str) -> AppResult<Option<&'a str>> {
        let Some(entry) = self.entry(key) else {
            return Ok(None);
        };
        match &entry.value {
            RawValue::Word(w) => Ok(Some(w.as_str())),
            RawValue::Quantity { .. } => Err(at(
                entry.line,
                format!("[{}] {key}: expected a word", self.section.name),
            )),
        }
    }

    fn finish(self) -> AppResult<()> {
        match self.section.entries.iter().find(|e| !self.used.contains(e.key.as_str())) {
            Some(e) => Err(at(e.line, format!("unknown key '{}' in [{}]", e.key, self.section.name))),
            None => Ok(()),
        }
    }
}

/// Statistics of the signal field as named on the command line and in
/// configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Vacuum,
    Coherent,
    Incoherent,
    Thermal,
}

impl StateKind {
    pub const ALL: [StateKind; 4] = [StateKind::Vacuum, StateKind::Coherent, StateKind::Incoherent, StateKind::Thermal];

    pub fn name(self) -> &'static str {
        match self {
            StateKind::Vacuum => "vacuum",
            StateKind::Coherent => "coherent",
            StateKind::Incoherent => "incoherent",
            StateKind::Thermal => "thermal",
        }
    }
}

impl FromStr for StateKind {
    type Err = AppError;

    fn from_str(s: &str) -> AppResult<Self> {
        StateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AppError::Config(format!("unknown signal state '{s}'")))
    }
}

/// Default thermal coherence time, 10⁻¹² s/2π.
pub const DEFAULT_TAU_C: f64 = 1e-12 / TWO_PI;

/// Signal settings before they are bound to a system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalConfig {
    pub state: StateKind,
    /// Mean cavity photon number.
    pub nbar: Option<f64>,
    /// Photon flux, 1/s.
    pub flux: Option<f64>,
    /// Thermal coherence time, s.
    pub tau_c: Option<f64>,
    /// Signal detuning from ω_c*, rad/s.
    pub detuning: f64,
}

impl Default for SignalConfig {
    fn default() -> Self {
        SignalConfig {
            state: StateKind::Vacuum,
            nbar: None,
            flux: None,
            tau_c: None,
            detuning: 0.0,
        }
    }
}

impl SignalConfig {
    /// Resolves the field for `sys`; without `nbar` or `flux` a single
    /// photon on average is assumed.
    pub fn to_state(&self, sys: &SystemParams) -> AppResult<SignalState> {
        let amount = match (self.nbar, self.flux) {
            (Some(_), Some(_)) => {
                return Err(AppError::Config("give either nbar or flux for the signal, not both".into()))
            }
            (Some(n), None) => PhotonAmount::MeanNumber(n),
            (None, Some(j)) => PhotonAmount::Flux(j),
            (None, None) => PhotonAmount::MeanNumber(1.0),
        };
        let tau_c = self.tau_c.unwrap_or(DEFAULT_TAU_C);
        let field = match self.state {
            StateKind::Vacuum => SignalField::Vacuum,
            StateKind::Coherent => SignalField::Coherent { amount },
            StateKind::Incoherent => SignalField::Incoherent { amount },
            StateKind::Thermal => match amount {
                PhotonAmount::MeanNumber(n) => SignalField::Thermal { flux: n / tau_c, tau_c },
                PhotonAmount::Flux(j) => SignalField::Thermal { flux: j, tau_c },
            },
        };
        let state = SignalState {
            field,
            signal_omega: None,
        }
        .with_detuning(sys, self.detuning);
        Ok(state)
    }
}

/// Probe grid, rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridConfig {
    pub fn points(&self) -> Vec<f64> {
        crate::detector::linspace(self.start, self.stop, self.points)
    }
}

/// Gap coupling of the resonator, either absolute or relative to `C′L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapCoupling {
    Capacitance(f64),
    Ratio(f64),
}

/// Resonator section; the line parameters default to those of the
/// configured waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonatorConfig {
    pub length: f64,
    pub gap: GapCoupling,
    pub line_capacitance: Option<f64>,
    pub velocity: Option<f64>,
    pub modes: u32,
}

impl ResonatorConfig {
    pub fn geometry(&self, line: &WaveguideParams) -> ResonatorGeometry {
        let c_line = self.line_capacitance.unwrap_or(line.c_line);
        let velocity = self.velocity.unwrap_or(line.v);
        match self.gap {
            GapCoupling::Capacitance(c) => ResonatorGeometry {
                length: self.length,
                gap_capacitance: c,
                line_capacitance: c_line,
                velocity,
            },
            GapCoupling::Ratio(r) => ResonatorGeometry::from_ratio(self.length, c_line, velocity, r),
        }
    }
}

/// Driven artificial atom; the detuning sweep comes from the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomConfig {
    pub gamma1: f64,
    pub gamma_phi: f64,
    pub rabi: f64,
}

/// Truncation of the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub n_fock: usize,
}

/// Fully typed run configuration in SI angular units.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RunConfig {
    pub system: Option<SystemParams>,
    pub signal: Option<SignalConfig>,
    pub grid: Option<GridConfig>,
    pub waveguide: Option<WaveguideGeometry>,
    pub resonator: Option<ResonatorConfig>,
    pub atom: Option<AtomConfig>,
    pub oracle: Option<OracleConfig>,
}

/// Default number of cavity modes reported.
const DEFAULT_MODES: u32 = 3;
/// Default oracle truncation.
pub const DEFAULT_N_FOCK: usize = 40;

impl RunConfig {
    /// Parses and resolves text or JSON input.
    pub fn parse(text: &str) -> AppResult<RunConfig> {
        RunConfig::from_document(&Document::parse(text)?)
    }

    pub fn from_document(doc: &Document) -> AppResult<RunConfig> {
        let mut config = RunConfig::default();
        let mut cavity = None;
        let mut qubits = Vec::new();
        let mut seen = BTreeSet::new();
        for section in &doc.sections {
            if section.name != "qubit" && !seen.insert(section.name.as_str()) {
                return Err(at(section.line, format!("section [{}] appears twice", section.name)));
            }
            let mut f = Fields::new(section)?;
            match section.name.as_str() {
                "cavity" => {
                    cavity = Some(CavityParams {
                        omega_c: f.required("omega_c", Dimension::Frequency)?,
                        gamma_c: f.required("gamma_c", Dimension::Frequency)?,
                    })
                }
                "qubit" => qubits.push(QubitParams {
                    omega_q: f.required("omega_q", Dimension::Frequency)?,
                    chi: f.required("chi", Dimension::Frequency)?,
                    gamma: f.required("gamma", Dimension::Frequency)?,
                    gamma_phi: f.quantity("gamma_phi", Dimension::Frequency)?.unwrap_or(0.0),
                }),
                "signal" => {
                    let state = f.word("state")?.map(StateKind::from_str).transpose()?;
                    config.signal = Some(SignalConfig {
                        state: state.unwrap_or(StateKind::Vacuum),
                        nbar: f.quantity("nbar", Dimension::Dimensionless)?,
                        flux: f.quantity("flux", Dimension::Rate)?,
                        tau_c: f.quantity("tau_c", Dimension::Time)?,
                        detuning: f.quantity("detuning", Dimension::Frequency)?.unwrap_or(0.0),
                    });
                }
                "grid" => {
                    let start = f.required("start", Dimension::Frequency)?;
                    let stop = f.required("stop", Dimension::Frequency)?;
                    let points = f
                        .count("points")?
                        .ok_or_else(|| at(section.line, "[grid] is missing 'points'"))?;
                    if points < 2 || !(stop > start) {
                        return Err(at(section.line, "[grid] needs stop > start and at least 2 points"));
                    }
                    config.grid = Some(GridConfig { start, stop, points });
                }
                "waveguide" => config.waveguide = Some(waveguide_section(&mut f, section.line)?),
                "resonator" => {
                    let gap = match (
                        f.quantity("gap_capacitance", Dimension::Capacitance)?,
                        f.quantity("ratio", Dimension::Dimensionless)?,
                    ) {
                        (Some(c), None) => GapCoupling::Capacitance(c),
                        (None, Some(r)) => GapCoupling::Ratio(r),
                        _ => {
                            return Err(at(
                                section.line,
                                "[resonator] needs exactly one of 'gap_capacitance' and 'ratio'",
                            ))
                        }
                    };
                    let modes = f.count("modes")?.unwrap_or(DEFAULT_MODES as usize);
                    if modes == 0 {
                        return Err(at(section.line, "[resonator] modes must be at least 1"));
                    }
                    config.resonator = Some(ResonatorConfig {
                        length: f.required("length", Dimension::Length)?,
                        gap,
                        line_capacitance: f.quantity("line_capacitance", Dimension::CapacitancePerLength)?,
                        velocity: f.quantity("velocity", Dimension::Velocity)?,
                        modes: modes as u32,
                    });
                }
                "atom" => {
                    config.atom = Some(AtomConfig {
                        gamma1: f.required("gamma1", Dimension::Frequency)?,
                        gamma_phi: f.quantity("gamma_phi", Dimension::Frequency)?.unwrap_or(0.0),
                        rabi: f.quantity("rabi", Dimension::Frequency)?.unwrap_or(0.0),
                    })
                }
                "oracle" => {
                    config.oracle = Some(OracleConfig {
                        n_fock: f.count("n_fock")?.unwrap_or(DEFAULT_N_FOCK),
                    })
                }
                "" => return Err(at(section.entries[0].line, "entries must follow a [section] header")),
                other => return Err(at(section.line, format!("unknown section [{other}]"))),
            }
            f.finish()?;
        }
        match (cavity, qubits.is_empty()) {
            (Some(cavity), _) => config.system = Some(SystemParams { cavity, qubits }),
            (None, false) => return Err(AppError::Config("[qubit] requires a [cavity] section".into())),
            (None, true) => {}
        }
        Ok(config)
    }
}

fn waveguide_section<'a>(f: &mut Fields<'a>, line: usize) -> AppResult<WaveguideGeometry> {
    let model = f.word("model")?.unwrap_or("cpw");
    let eps1_rel = f.required("eps1", Dimension::Dimensionless)?;
    Ok(match model {
        "cpw" => WaveguideGeometry::Cpw {
            w: f.required("w", Dimension::Length)?,
            s: f.required("s", Dimension::Length)?,
            h1: f.required("h1", Dimension::Length)?,
            h2: f.required("h2", Dimension::Length)?,
            eps1_rel,
            eps2_rel: f.required("eps2", Dimension::Dimensionless)?,
        },
        "two_half_planes" => WaveguideGeometry::CpwTwoHalfPlanes {
            w: f.required("w", Dimension::Length)?,
            s: f.required("s", Dimension::Length)?,
            eps1_rel,
        },
        "parallel_plate" => WaveguideGeometry::ParallelPlate {
            width: f.required("width", Dimension::Length)?,
            d1: f.required("d1", Dimension::Length)?,
            d2: f.required("d2", Dimension::Length)?,
            eps1_rel,
            eps2_rel: f.required("eps2", Dimension::Dimensionless)?,
        },
        other => {
            return Err(at(
                line,
                format!("unknown waveguide model '{other}' (cpw, two_half_planes or parallel_plate)"),
            ))
        }
    })
}
