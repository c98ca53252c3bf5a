//! Cascaded Bell-state analyzer built from absorbing crystals and linear
//! polarization elements.
//!
//! Each crystal is a two-outcome measurement (see [`crate::channel`]). A
//! photon pair that is not absorbed continues to the next stage in the
//! conditional state of the no-click branch.

use std::collections::HashSet;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{validate_efficiency, AbsorptionChannel};
use crate::confusion::ConfusionMatrix;
use crate::error::{Error, Result};
use crate::polarization::{bell_state, BellLabel, JonesOperator, Photon, TwoPhotonState, C64};

pub type DetectorId = u32;

/// What a crystal absorbs: a Bell state by name or an explicit pure state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum AbsorbedState {
    Bell(BellLabel),
    State(TwoPhotonState),
}

impl AbsorbedState {
    pub fn state(&self) -> TwoPhotonState {
        match self {
            AbsorbedState::Bell(label) => bell_state(*label),
            AbsorbedState::State(s) => s.clone(),
        }
    }
}

impl Default for AbsorbedState {
    fn default() -> Self {
        AbsorbedState::Bell(BellLabel::PhiPlus)
    }
}

/// One element of the cascade.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum StageSpec {
    Crystal {
        detector: DetectorId,
        eta: f64,
        #[serde(default)]
        absorbs: AbsorbedState,
        /// Bell state reported when this detector fires.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        announces: Option<BellLabel>,
    },
    RetarderBoth,
    Rotator {
        photon: Photon,
        angle: f64,
    },
    /// Unit-efficiency detector absorbing everything that reaches it.
    Photodetector {
        detector: DetectorId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        announces: Option<BellLabel>,
    },
}

/// What happens to photons that leave the last stage.
#[derive(Clone, Debug, PartialEq)]
pub enum Terminal {
    NoClick,
    Photodetector {
        detector: DetectorId,
        announces: Option<BellLabel>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TerminalDoc {
    Word(String),
    Photodetector {
        photodetector: DetectorId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        announces: Option<BellLabel>,
    },
}

impl Serialize for Terminal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Terminal::NoClick => TerminalDoc::Word("no-click".into()),
            Terminal::Photodetector {
                detector,
                announces,
            } => TerminalDoc::Photodetector {
                photodetector: *detector,
                announces: *announces,
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Terminal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match TerminalDoc::deserialize(d)? {
            TerminalDoc::Word(w) if w == "no-click" => Ok(Terminal::NoClick),
            TerminalDoc::Word(w) => Err(serde::de::Error::custom(format!(
                "unknown terminal {w:?}; expected \"no-click\" or {{\"photodetector\": id}}"
            ))),
            TerminalDoc::Photodetector {
                photodetector,
                announces,
            } => Ok(Terminal::Photodetector {
                detector: photodetector,
                announces,
            }),
        }
    }
}

/// Ordered cascade plus terminal behaviour.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DeviceDoc", into = "DeviceDoc")]
pub struct DeviceSpec {
    pub stages: Vec<StageSpec>,
    pub terminal: Terminal,
}

#[derive(Clone, Serialize, Deserialize)]
struct DeviceDoc {
    #[serde(default = "schema_version")]
    schema: u32,
    stages: Vec<StageSpec>,
    #[serde(default = "no_click")]
    terminal: Terminal,
}

fn schema_version() -> u32 {
    1
}

fn no_click() -> Terminal {
    Terminal::NoClick
}

impl TryFrom<DeviceDoc> for DeviceSpec {
    type Error = Error;

    fn try_from(doc: DeviceDoc) -> Result<Self> {
        if doc.schema != 1 {
            return Err(Error::InvalidDevice(format!(
                "unsupported schema version {}",
                doc.schema
            )));
        }
        DeviceSpec::new(doc.stages, doc.terminal)
    }
}

impl From<DeviceSpec> for DeviceDoc {
    fn from(d: DeviceSpec) -> Self {
        DeviceDoc {
            schema: 1,
            stages: d.stages,
            terminal: d.terminal,
        }
    }
}

/// A detector outcome or the absence of any click.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Detector(DetectorId),
    NoClick,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Detector(id) => write!(f, "d{id}"),
            Outcome::NoClick => f.write_str("no-click"),
        }
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "no-click" {
            return Ok(Outcome::NoClick);
        }
        s.strip_prefix('d')
            .and_then(|n| n.parse().ok())
            .map(Outcome::Detector)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown outcome {s:?}")))
    }
}

impl Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

enum Step {
    Absorb(AbsorptionChannel),
    Linear(Matrix4<C64>),
    Detect,
}

impl DeviceSpec {
    pub fn new(stages: Vec<StageSpec>, terminal: Terminal) -> Result<Self> {
        let device = DeviceSpec { stages, terminal };
        device.validate()?;
        Ok(device)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for id in self.detector_ids() {
            if !seen.insert(id) {
                return Err(Error::DuplicateDetector(id));
            }
        }
        for stage in &self.stages {
            match stage {
                StageSpec::Crystal { eta, absorbs, .. } => {
                    validate_efficiency(*eta)?;
                    AbsorptionChannel::from_state(&absorbs.state(), *eta)?;
                }
                StageSpec::Rotator { angle, .. } if !angle.is_finite() => {
                    return Err(Error::InvalidDevice(format!("rotator angle {angle}")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn detector_ids(&self) -> Vec<DetectorId> {
        let mut ids: Vec<DetectorId> =
            self.stages
                .iter()
                .filter_map(|s| match s {
                    StageSpec::Crystal { detector, .. }
                    | StageSpec::Photodetector { detector, .. } => Some(*detector),
                    _ => None,
                })
                .collect();
        if let Terminal::Photodetector { detector, .. } = self.terminal {
            ids.push(detector);
        }
        ids
    }

    /// Every outcome in cascade order, ending with [`Outcome::NoClick`].
    pub fn outcomes(&self) -> Vec<Outcome> {
        self.detector_ids()
            .into_iter()
            .map(Outcome::Detector)
            .chain(std::iter::once(Outcome::NoClick))
            .collect()
    }

    /// Bell labels announced by the detectors, in cascade order.
    pub fn announcements(&self) -> Vec<Option<BellLabel>> {
        let mut out: Vec<Option<BellLabel>> = self
            .stages
            .iter()
            .filter_map(|s| match s {
                StageSpec::Crystal { announces, .. }
                | StageSpec::Photodetector { announces, .. } => Some(*announces),
                _ => None,
            })
            .collect();
        if let Terminal::Photodetector { announces, .. } = self.terminal {
            out.push(announces);
        }
        out
    }

    /// Row order for confusion matrices: the announced labels when every
    /// detector announces a distinct one and together they cover all four
    /// Bell states, the canonical order otherwise.
    pub fn input_order(&self) -> Vec<BellLabel> {
        let labels: Option<Vec<BellLabel>> = self.announcements().into_iter().collect();
        match labels {
            Some(l) if l.len() == 4 && l.iter().collect::<HashSet<_>>().len() == 4 => l,
            _ => BellLabel::ALL.to_vec(),
        }
    }

    fn compile(&self) -> Result<Vec<Step>> {
        let mut steps = Vec::with_capacity(self.stages.len() + 1);
        let push_linear = |steps: &mut Vec<Step>, m: Matrix4<C64>| {
            if let Some(Step::Linear(prev)) = steps.last_mut() {
                *prev = m * *prev;
            } else {
                steps.push(Step::Linear(m));
            }
        };
        for stage in &self.stages {
            match stage {
                StageSpec::Crystal { eta, absorbs, .. } => steps.push(Step::Absorb(
                    AbsorptionChannel::from_state(&absorbs.state(), *eta)?,
                )),
                StageSpec::RetarderBoth => {
                    let q = JonesOperator::quarter_wave();
                    push_linear(&mut steps, q.tensor(&q));
                }
                StageSpec::Rotator { photon, angle } => {
                    let r = JonesOperator::rotation(*angle);
                    let id = JonesOperator::identity();
                    let m = match photon {
                        Photon::First => r.tensor(&id),
                        Photon::Second => id.tensor(&r),
                    };
                    push_linear(&mut steps, m);
                }
                StageSpec::Photodetector { .. } => steps.push(Step::Detect),
            }
        }
        if let Terminal::Photodetector { .. } = self.terminal {
            steps.push(Step::Detect);
        }
        Ok(steps)
    }

    /// Conditional click probability at every detecting step along the
    /// no-click path, in outcome order (excluding no-click).
    fn conditional_click_chain(&self, input: &TwoPhotonState) -> Result<Vec<f64>> {
        let mut state = normalized_input(input)?;
        let mut chain = Vec::new();
        for step in self.compile()? {
            match step {
                Step::Linear(m) => state = state.transformed(&m),
                Step::Absorb(channel) => {
                    let outcome = channel.apply(&state);
                    chain.push(outcome.p_click);
                    state = outcome.conditional;
                }
                Step::Detect => {
                    chain.push(if state.norm() > 0.0 { 1.0 } else { 0.0 });
                    state = TwoPhotonState::zero();
                }
            }
        }
        Ok(chain)
    }
}

fn normalized_input(input: &TwoPhotonState) -> Result<TwoPhotonState> {
    if !(input.norm() > 0.0) {
        return Err(Error::InvalidState("input state has zero norm".into()));
    }
    Ok(input.normalized())
}

/// The four-crystal cascade: crystal, π/2 retarders, crystal, π/2 rotator on
/// photon 1, crystal, π/2 retarders, crystal. Every crystal absorbs `Φ+`;
/// detectors 1 to 4 announce `Φ+`, `Φ-`, `Ψ-`, `Ψ+`.
pub fn standard_device(eta: f64) -> Result<DeviceSpec> {
    standard_device_with([eta; 4])
}

/// [`standard_device`] with a separate efficiency for each crystal.
pub fn standard_device_with(etas: [f64; 4]) -> Result<DeviceSpec> {
    let crystal = |detector: DetectorId, eta: f64, announces: BellLabel| StageSpec::Crystal {
        detector,
        eta,
        absorbs: AbsorbedState::Bell(BellLabel::PhiPlus),
        announces: Some(announces),
    };
    DeviceSpec::new(
        vec![
            crystal(1, etas[0], BellLabel::PhiPlus),
            StageSpec::RetarderBoth,
            crystal(2, etas[1], BellLabel::PhiMinus),
            StageSpec::Rotator {
                photon: Photon::First,
                angle: FRAC_PI_2,
            },
            crystal(3, etas[2], BellLabel::PsiMinus),
            StageSpec::RetarderBoth,
            crystal(4, etas[3], BellLabel::PsiPlus),
        ],
        Terminal::NoClick,
    )
}

/// Three crystals followed by an ordinary photodetector that reports `Ψ+`
/// for anything the crystals let through.
pub fn shortcut_device(eta: f64) -> Result<DeviceSpec> {
    let mut stages = standard_device(eta)?.stages;
    // drop the final retarder and crystal
    stages.truncate(stages.len() - 2);
    DeviceSpec::new(
        stages,
        Terminal::Photodetector {
            detector: 4,
            announces: Some(BellLabel::PsiPlus),
        },
    )
}

/// Exact outcome probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub outcomes: Vec<Outcome>,
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn probability(&self, outcome: Outcome) -> f64 {
        self.outcomes
            .iter()
            .position(|&o| o == outcome)
            .map_or(0.0, |i| self.probabilities[i])
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// Propagates `input` (rescaled to unit norm) through the cascade.
pub fn propagate_exact(device: &DeviceSpec, input: &TwoPhotonState) -> Result<OutcomeDistribution> {
    let mut state = normalized_input(input)?;
    let mut probabilities = Vec::new();
    for step in device.compile()? {
        match step {
            Step::Linear(m) => state = state.transformed(&m),
            Step::Absorb(channel) => {
                probabilities.push(channel.click_mass(&state));
                state = channel.transmit(&state);
            }
            Step::Detect => {
                probabilities.push(state.norm().max(0.0));
                state = TwoPhotonState::zero();
            }
        }
    }
    probabilities.push(state.norm().max(0.0));
    Ok(OutcomeDistribution {
        outcomes: device.outcomes(),
        probabilities,
    })
}

/// Empirical outcome counts from [`propagate_monte_carlo`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub outcomes: Vec<Outcome>,
    pub counts: Vec<u64>,
    pub trials: u64,
}

impl OutcomeCounts {
    pub fn count(&self, outcome: Outcome) -> u64 {
        self.outcomes
            .iter()
            .position(|&o| o == outcome)
            .map_or(0, |i| self.counts[i])
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.trials as f64)
            .collect()
    }
}

/// Random stream for one trial: ChaCha8 keyed by `seed`, stream `trial`.
///
/// Each trial owns an independent stream, so counts do not depend on how
/// trials are scheduled across threads.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Samples `trials` independent photon pairs through the cascade. At every
/// detecting stage a trial clicks with the channel's conditional click
/// probability, otherwise it continues in the no-click state.
pub fn propagate_monte_carlo(
    device: &DeviceSpec,
    input: &TwoPhotonState,
    trials: u64,
    seed: u64,
) -> Result<OutcomeCounts> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let chain = device.conditional_click_chain(input)?;
    let n = chain.len() + 1;
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut acc, trial| {
                let mut rng = trial_rng(seed, trial);
                let hit = chain
                    .iter()
                    .position(|&p| rng.random::<f64>() < p)
                    .unwrap_or(n - 1);
                acc[hit] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(OutcomeCounts {
        outcomes: device.outcomes(),
        counts,
        trials,
    })
}

/// Exact outcome probabilities for each Bell input. Rows follow
/// [`DeviceSpec::input_order`].
pub fn confusion_matrix(device: &DeviceSpec) -> Result<ConfusionMatrix> {
    let inputs = device.input_order();
    let rows = inputs
        .iter()
        .map(|&l| propagate_exact(device, &bell_state(l)).map(|d| d.probabilities))
        .collect::<Result<Vec<_>>>()?;
    ConfusionMatrix::new(
        inputs,
        device.outcomes().iter().map(Outcome::to_string).collect(),
        rows,
    )
}
