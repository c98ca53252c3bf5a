//! Command dispatch behind the `bellscope` binary.
//!
//! A [`RunConfig`] can be built from command-line flags or read from a JSON
//! document with the same field names. [`run`] produces an [`Artifact`], which
//! renders as JSON or CSV with numbers rounded to 12 significant digits.
//!
//! Exit codes: 0 success, 2 malformed configuration or input, 3 physics-domain
//! failure (for example an exactly resonant intermediate level).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::confusion::ConfusionMatrix;
use crate::device::{
    confusion_matrix, propagate_exact, propagate_monte_carlo, shortcut_device, standard_device,
    DeviceSpec,
};
use crate::error::{Error, Result};
use crate::physical::{
    check_resonance, CavityParams, CavityReport, Quantity, ResonanceCheck, ResonanceResult,
};
use crate::polarization::{bell_state, Amplitudes, BellLabel, TwoPhotonState, C64};
use crate::qdot::{four_pass_protocol, PassSchedule};
use crate::selection::{
    build_cg_table, geometrical_factors, tpa_relative_rate, GeometricalFactor, TransitionModel,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PHYSICS: i32 = 3;

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "BELLSCOPE_SEED";

pub fn exit_code(err: &Error) -> i32 {
    if err.is_physics_domain() {
        EXIT_PHYSICS
    } else {
        EXIT_CONFIG
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Confusion,
    Selection,
    Params,
    Qdot,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Montecarlo {
        trials: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

/// Input state: a Bell label or four `[re, im]` amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Bell(BellLabel),
    Amplitudes(Vec<[f64; 2]>),
}

impl InputSpec {
    /// Accepts a Bell label (`PhiPlus`, `psi-`, ...) or a JSON amplitude list.
    pub fn parse(s: &str) -> Result<Self> {
        if let Ok(label) = s.parse::<BellLabel>() {
            return Ok(InputSpec::Bell(label));
        }
        let amps: Vec<[f64; 2]> = serde_json::from_str(s).map_err(|_| {
            Error::InvalidState(format!(
                "input {s:?} is neither a Bell label nor a JSON list of [re, im] pairs"
            ))
        })?;
        Ok(InputSpec::Amplitudes(amps))
    }

    pub fn state(&self) -> Result<TwoPhotonState> {
        match self {
            InputSpec::Bell(l) => Ok(bell_state(*l)),
            InputSpec::Amplitudes(a) => {
                if a.len() != 4 {
                    return Err(Error::InvalidState(format!(
                        "expected 4 amplitudes, got {}",
                        a.len()
                    )));
                }
                TwoPhotonState::pure(Amplitudes::from_fn(|i, _| C64::new(a[i][0], a[i][1])))
            }
        }
    }
}

/// Everything one invocation needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub command: Command,
    /// Built-in device name: `standard` or `shortcut`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSpec>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Transition model for `selection`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_file: Option<PathBuf>,
    /// Photon energies in eV for `selection` and the resonance check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w2: Option<f64>,
    /// Parameter preset for `params`: `cucl`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity_lifetime: Option<Quantity>,
    /// Two-photon transition energy `E_f - E_0` in eV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition_energy: Option<f64>,
    /// Resonance tolerance in eV (default 1 meV).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn schema_version() -> u32 {
    1
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            schema: 1,
            command,
            device: None,
            device_file: None,
            eta: None,
            input: None,
            mode: Mode::Exact,
            format: Format::Json,
            output: None,
            model_file: None,
            w1: None,
            w2: None,
            preset: None,
            params_file: None,
            cavity_lifetime: None,
            transition_energy: None,
            tolerance: None,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(&fs::read_to_string(path)?)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if self.schema != 1 {
            return bad("unsupported config schema version");
        }
        if self.device.is_some() && self.device_file.is_some() {
            return bad("a built-in device and a device file are mutually exclusive");
        }
        if self.preset.is_some() && self.params_file.is_some() {
            return bad("a parameter preset and a parameter file are mutually exclusive");
        }
        if let Mode::Montecarlo { trials: 0, .. } = self.mode {
            return bad("montecarlo mode needs at least one trial");
        }
        Ok(())
    }

    fn eta(&self) -> f64 {
        self.eta.unwrap_or(1.0)
    }

    fn load_device(&self) -> Result<(String, DeviceSpec)> {
        if let Some(path) = &self.device_file {
            let device: DeviceSpec = serde_json::from_str(&fs::read_to_string(path)?)?;
            return Ok((path.display().to_string(), device));
        }
        let name = self.device.as_deref().unwrap_or("standard");
        let device = builtin_device(name, self.eta())?;
        Ok((name.to_string(), device))
    }

    fn input_spec(&self) -> Result<InputSpec> {
        self.input
            .clone()
            .ok_or_else(|| Error::InvalidParameter("an input state is required".into()))
    }
}

pub fn builtin_device(name: &str, eta: f64) -> Result<DeviceSpec> {
    match name {
        "standard" => standard_device(eta),
        "shortcut" => shortcut_device(eta),
        other => Err(Error::InvalidDevice(format!(
            "unknown built-in device {other:?}; expected standard or shortcut"
        ))),
    }
}

/// Seed fallback: the environment variable, then 0.
pub fn seed_or_env(seed: Option<u64>) -> Result<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{SEED_ENV}={v:?} is not a seed"))),
        Err(_) => Ok(0),
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub schema: u32,
    pub device: String,
    pub input: InputSpec,
    pub mode: Mode,
    pub outcomes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequencies: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfusionReport {
    pub schema: u32,
    pub device: String,
    #[serde(flatten)]
    pub matrix: ConfusionMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<PassSchedule>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub schema: u32,
    pub input: InputSpec,
    pub factors: Vec<GeometricalFactor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsReport {
    #[serde(flatten)]
    pub cavity: CavityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance: Option<ResonanceResult>,
}

/// Output of a command.
#[derive(Clone, Debug, PartialEq)]
pub enum Artifact {
    Distribution(DistributionReport),
    Confusion(ConfusionReport),
    Selection(SelectionReport),
    Params(ParamsReport),
}

impl Artifact {
    pub fn to_json(&self) -> Result<String> {
        let text = match self {
            Artifact::Distribution(r) => serde_json::to_string_pretty(r)?,
            Artifact::Confusion(r) => serde_json::to_string_pretty(r)?,
            Artifact::Selection(r) => serde_json::to_string_pretty(r)?,
            Artifact::Params(r) => serde_json::to_string_pretty(r)?,
        };
        Ok(text + "\n")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            Artifact::Distribution(r) => {
                out.push_str("quantity");
                for o in &r.outcomes {
                    let _ = write!(out, ",{o}");
                }
                out.push('\n');
                let mut row = |name: &str, values: &[String]| {
                    out.push_str(name);
                    for v in values {
                        let _ = write!(out, ",{v}");
                    }
                    out.push('\n');
                };
                if let Some(p) = &r.probabilities {
                    row(
                        "probability",
                        &p.iter().map(f64::to_string).collect::<Vec<_>>(),
                    );
                }
                if let Some(c) = &r.counts {
                    row("count", &c.iter().map(u64::to_string).collect::<Vec<_>>());
                }
                if let Some(f) = &r.frequencies {
                    row(
                        "frequency",
                        &f.iter().map(f64::to_string).collect::<Vec<_>>(),
                    );
                }
            }
            Artifact::Confusion(r) => out = r.matrix.to_csv(),
            Artifact::Selection(r) => {
                out.push_str("irrep,row,re,im\n");
                for f in &r.factors {
                    let _ = writeln!(out, "{},{},{},{}", f.irrep, f.row, f.value.re, f.value.im);
                }
                if let Some(rate) = r.rate {
                    let _ = writeln!(out, "rate,,{rate},");
                }
            }
            Artifact::Params(r) => {
                let c = &r.cavity;
                out.push_str("quantity,value,unit\n");
                for (name, q) in [
                    ("tpa_rate", &c.tpa_rate),
                    ("field", &c.field),
                    ("min_lifetime", &c.min_lifetime),
                ] {
                    let _ = writeln!(out, "{name},{},{}", q.value, q.unit);
                }
                let _ = writeln!(out, "q,{},", c.q);
                if let Some(eta) = c.efficiency {
                    let _ = writeln!(out, "efficiency,{eta},");
                }
                if let Some(res) = &r.resonance {
                    let _ = writeln!(out, "resonant_pair,{},", res.resonant_pair);
                    let _ = writeln!(
                        out,
                        "degenerate_single_source_resonant,{},",
                        res.degenerate_single_source_resonant
                    );
                }
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => Ok(self.to_csv()),
        }
    }
}

/// Dimensionless outputs (probabilities, geometrical factors) below this are
/// floating-point residue and print as exact zeros.
pub const RESIDUE: f64 = 1e-15;

/// [`round_sig`] for dimensionless values, flushing residue to zero.
pub fn round_dimensionless(x: f64) -> f64 {
    if x.abs() < RESIDUE {
        0.0
    } else {
        round_sig(x)
    }
}

fn round_all(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(round_dimensionless).collect()
}

/// Executes the command and returns its artifact.
pub fn run(config: &RunConfig) -> Result<Artifact> {
    config.validate()?;
    match config.command {
        Command::Simulate => simulate(config),
        Command::Confusion => {
            let (name, device) = config.load_device()?;
            let matrix = confusion_matrix(&device)?.map_entries(round_dimensionless);
            Ok(Artifact::Confusion(ConfusionReport {
                schema: 1,
                device: name,
                matrix,
                schedule: None,
            }))
        }
        Command::Qdot => {
            let (schedule, matrix) = four_pass_protocol(config.eta())?;
            Ok(Artifact::Confusion(ConfusionReport {
                schema: 1,
                device: "quantum-dot four-pass".into(),
                matrix: matrix.map_entries(round_dimensionless),
                schedule: Some(schedule),
            }))
        }
        Command::Selection => selection(config),
        Command::Params => params(config),
    }
}

fn simulate(config: &RunConfig) -> Result<Artifact> {
    let (name, device) = config.load_device()?;
    let input = config.input_spec()?;
    let state = input.state()?;
    let outcomes = device.outcomes().iter().map(|o| o.to_string()).collect();
    let report = match config.mode {
        Mode::Exact => {
            let dist = propagate_exact(&device, &state)?;
            DistributionReport {
                schema: 1,
                device: name,
                input,
                mode: Mode::Exact,
                outcomes,
                probabilities: Some(round_all(&dist.probabilities)),
                counts: None,
                frequencies: None,
            }
        }
        Mode::Montecarlo { trials, seed } => {
            let seed = seed_or_env(seed)?;
            let counts = propagate_monte_carlo(&device, &state, trials, seed)?;
            DistributionReport {
                schema: 1,
                device: name,
                input,
                mode: Mode::Montecarlo {
                    trials,
                    seed: Some(seed),
                },
                outcomes,
                probabilities: None,
                frequencies: Some(round_all(&counts.frequencies())),
                counts: Some(counts.counts),
            }
        }
    };
    Ok(Artifact::Distribution(report))
}

fn selection(config: &RunConfig) -> Result<Artifact> {
    let input = config.input_spec()?;
    let state = input.state()?;
    let cg = build_cg_table();
    let factors = geometrical_factors(&state, &cg)?
        .into_iter()
        .map(|mut f| {
            f.value = C64::new(
                round_dimensionless(f.value.re),
                round_dimensionless(f.value.im),
            );
            f
        })
        .collect();
    let rate = match &config.model_file {
        Some(path) => {
            let model: TransitionModel = serde_json::from_str(&fs::read_to_string(path)?)?;
            let (w1, w2) = config.w1.zip(config.w2).ok_or_else(|| {
                Error::InvalidParameter("a transition model needs --w1 and --w2".into())
            })?;
            Some(round_sig(tpa_relative_rate(&state, &model, &cg, w1, w2)?))
        }
        None => None,
    };
    Ok(Artifact::Selection(SelectionReport {
        schema: 1,
        input,
        factors,
        w1: config.w1,
        w2: config.w2,
        rate,
    }))
}

fn params(config: &RunConfig) -> Result<Artifact> {
    let mut params = match (&config.preset, &config.params_file) {
        (_, Some(path)) => serde_json::from_str::<CavityParams>(&fs::read_to_string(path)?)?,
        (Some(p), None) if p == "cucl" => CavityParams::cucl(),
        (Some(p), None) => {
            return Err(Error::InvalidParameter(format!(
                "unknown preset {p:?}; expected cucl"
            )))
        }
        (None, None) => CavityParams::cucl(),
    };
    if let Some(q) = &config.cavity_lifetime {
        params = params.with_lifetime(q.lifetime()?)?;
    }
    let mut cavity = CavityReport::compute(&params);
    for q in [
        &mut cavity.tpa_rate,
        &mut cavity.field,
        &mut cavity.min_lifetime,
    ] {
        q.value = round_sig(q.value);
    }
    cavity.q = round_sig(cavity.q);
    cavity.efficiency = cavity.efficiency.map(round_sig);
    let resonance = match (config.w1, config.w2) {
        (Some(w1), Some(w2)) => {
            let transition = config
                .transition_energy
                .unwrap_or_else(|| 2.0 * params.photon_energy.ev());
            let rc = ResonanceCheck::new(w1, w2, transition, config.tolerance.unwrap_or(1e-3))?;
            Some(check_resonance(&rc))
        }
        _ => None,
    };
    Ok(Artifact::Params(ParamsReport { cavity, resonance }))
}

/// Runs and writes the artifact to the configured output (stdout if none).
pub fn execute(config: &RunConfig) -> Result<String> {
    let text = run(config)?.render(config.format)?;
    if let Some(path) = &config.output {
        fs::write(path, &text)?;
    }
    Ok(text)
}
