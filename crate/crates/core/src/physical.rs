//! Cavity-enhanced two-photon absorption estimates.
//!
//! Quantities are stored in SI units behind newtypes; constructors accept the
//! units used in the literature (eV, cm/W, µm³, ps).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 values.
pub mod constants {
    /// Speed of light in vacuum, m/s.
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    /// Vacuum permittivity, F/m.
    pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
    /// Reduced Planck constant, J·s.
    pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;
    /// Joules per electronvolt.
    pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;
}

use constants::*;

/// Photon energy.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Energy(f64);

impl Energy {
    pub fn from_joules(j: f64) -> Self {
        Energy(j)
    }

    pub fn from_ev(ev: f64) -> Self {
        Energy(ev * ELECTRON_VOLT)
    }

    pub fn joules(self) -> f64 {
        self.0
    }

    pub fn ev(self) -> f64 {
        self.0 / ELECTRON_VOLT
    }

    /// `ω = E/ℏ` in rad/s.
    pub fn angular_frequency(self) -> f64 {
        self.0 / REDUCED_PLANCK
    }
}

/// Two-photon absorption coefficient β.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct TpaCoefficient(f64);

impl TpaCoefficient {
    pub fn from_m_per_w(v: f64) -> Self {
        TpaCoefficient(v)
    }

    pub fn from_cm_per_w(v: f64) -> Self {
        TpaCoefficient(v * 1e-2)
    }

    pub fn m_per_w(self) -> f64 {
        self.0
    }

    pub fn cm_per_w(self) -> f64 {
        self.0 * 1e2
    }
}

/// Cavity mode volume.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Volume(f64);

impl Volume {
    pub fn from_cubic_meters(v: f64) -> Self {
        Volume(v)
    }

    pub fn from_cubic_microns(v: f64) -> Self {
        Volume(v * 1e-18)
    }

    pub fn from_cubic_cm(v: f64) -> Self {
        Volume(v * 1e-6)
    }

    pub fn cubic_meters(self) -> f64 {
        self.0
    }

    pub fn cubic_microns(self) -> f64 {
        self.0 * 1e18
    }
}

/// A time span such as the cavity photon lifetime.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Lifetime(f64);

impl Lifetime {
    pub fn from_seconds(s: f64) -> Self {
        Lifetime(s)
    }

    pub fn from_picoseconds(ps: f64) -> Self {
        Lifetime(ps * 1e-12)
    }

    pub fn seconds(self) -> f64 {
        self.0
    }

    pub fn picoseconds(self) -> f64 {
        self.0 * 1e12
    }
}

/// A number with an explicit unit string, as read from and written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
}

impl Quantity {
    pub fn new(value: f64, unit: &str) -> Self {
        Quantity {
            value,
            unit: unit.to_string(),
        }
    }

    fn scale(&self, quantity: &'static str, table: &[(&str, f64)]) -> Result<f64> {
        let unit = self.unit.trim();
        table
            .iter()
            .find(|(u, _)| *u == unit)
            .map(|(_, factor)| self.value * factor)
            .ok_or_else(|| Error::UnknownUnit {
                quantity,
                unit: self.unit.clone(),
            })
    }

    pub fn energy(&self) -> Result<Energy> {
        self.scale(
            "energy",
            &[
                ("eV", ELECTRON_VOLT),
                ("meV", 1e-3 * ELECTRON_VOLT),
                ("J", 1.0),
            ],
        )
        .map(Energy)
    }

    pub fn tpa_coefficient(&self) -> Result<TpaCoefficient> {
        self.scale("TPA coefficient", &[("cm/W", 1e-2), ("m/W", 1.0)])
            .map(TpaCoefficient)
    }

    pub fn volume(&self) -> Result<Volume> {
        self.scale(
            "volume",
            &[
                ("um^3", 1e-18),
                ("µm^3", 1e-18),
                ("nm^3", 1e-27),
                ("cm^3", 1e-6),
                ("m^3", 1.0),
            ],
        )
        .map(Volume)
    }

    pub fn lifetime(&self) -> Result<Lifetime> {
        self.scale(
            "time",
            &[("s", 1.0), ("ns", 1e-9), ("ps", 1e-12), ("fs", 1e-15)],
        )
        .map(Lifetime)
    }
}

/// Cavity filled with a two-photon absorber.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CavityDoc", into = "CavityDoc")]
pub struct CavityParams {
    pub photon_energy: Energy,
    pub refractive_index: f64,
    pub tpa_coefficient: TpaCoefficient,
    pub mode_volume: Volume,
    pub cavity_lifetime: Option<Lifetime>,
}

impl CavityParams {
    pub fn new(
        photon_energy: Energy,
        refractive_index: f64,
        tpa_coefficient: TpaCoefficient,
        mode_volume: Volume,
        cavity_lifetime: Option<Lifetime>,
    ) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && !v.is_nan() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("photon energy", photon_energy.joules())?;
        positive("refractive index", refractive_index)?;
        positive("TPA coefficient", tpa_coefficient.m_per_w())?;
        positive("mode volume", mode_volume.cubic_meters())?;
        if let Some(t) = cavity_lifetime {
            positive("cavity lifetime", t.seconds())?;
        }
        Ok(CavityParams {
            photon_energy,
            refractive_index,
            tpa_coefficient,
            mode_volume,
            cavity_lifetime,
        })
    }

    /// CuCl-filled cavity: ℏω = 3.186 eV, n = 3, β = 0.1 cm/W, V = 1 µm³.
    pub fn cucl() -> Self {
        CavityParams::new(
            Energy::from_ev(3.186),
            3.0,
            TpaCoefficient::from_cm_per_w(0.1),
            Volume::from_cubic_microns(1.0),
            None,
        )
        .expect("preset is valid")
    }

    pub fn with_lifetime(mut self, lifetime: Lifetime) -> Result<Self> {
        self.cavity_lifetime = Some(lifetime);
        CavityParams::new(
            self.photon_energy,
            self.refractive_index,
            self.tpa_coefficient,
            self.mode_volume,
            self.cavity_lifetime,
        )
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct CavityDoc {
    #[serde(default = "schema_version")]
    schema: u32,
    photon_energy: Quantity,
    refractive_index: f64,
    tpa_coefficient: Quantity,
    mode_volume: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cavity_lifetime: Option<Quantity>,
}

fn schema_version() -> u32 {
    1
}

impl TryFrom<CavityDoc> for CavityParams {
    type Error = Error;

    fn try_from(doc: CavityDoc) -> Result<Self> {
        if doc.schema != 1 {
            return Err(Error::InvalidParameter(format!(
                "unsupported schema version {}",
                doc.schema
            )));
        }
        CavityParams::new(
            doc.photon_energy.energy()?,
            doc.refractive_index,
            doc.tpa_coefficient.tpa_coefficient()?,
            doc.mode_volume.volume()?,
            doc.cavity_lifetime.map(|q| q.lifetime()).transpose()?,
        )
    }
}

impl From<CavityParams> for CavityDoc {
    fn from(p: CavityParams) -> Self {
        CavityDoc {
            schema: 1,
            photon_energy: Quantity::new(p.photon_energy.ev(), "eV"),
            refractive_index: p.refractive_index,
            tpa_coefficient: Quantity::new(p.tpa_coefficient.cm_per_w(), "cm/W"),
            mode_volume: Quantity::new(p.mode_volume.cubic_microns(), "um^3"),
            cavity_lifetime: p.cavity_lifetime.map(|t| Quantity::new(t.seconds(), "s")),
        }
    }
}

/// Output of [`tpa_rate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TpaRate {
    /// α in s⁻¹.
    pub rate: f64,
    /// Intracavity single-photon field `(ℏω / n²ε₀V)^{1/2}` in V/m.
    pub field: f64,
}

/// `α = c²βℏω / (n⁴V)`.
pub fn tpa_rate(params: &CavityParams) -> TpaRate {
    let n = params.refractive_index;
    let hw = params.photon_energy.joules();
    let v = params.mode_volume.cubic_meters();
    let beta = params.tpa_coefficient.m_per_w();
    let rate = SPEED_OF_LIGHT * SPEED_OF_LIGHT * beta * hw / (n.powi(4) * v);
    let field = (hw / (n * n * VACUUM_PERMITTIVITY * v)).sqrt();
    TpaRate { rate, field }
}

/// Output of [`required_q`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityRequirement {
    /// Shortest useful photon lifetime `1/α`.
    pub min_lifetime: Lifetime,
    /// `Q = ω / α`.
    pub q: f64,
}

/// Minimum cavity lifetime and quality factor for efficient absorption.
pub fn required_q(params: &CavityParams) -> QualityRequirement {
    let alpha = tpa_rate(params).rate;
    let min_lifetime = Lifetime(1.0 / alpha);
    QualityRequirement {
        min_lifetime,
        q: quality_factor(params.photon_energy.angular_frequency(), min_lifetime),
    }
}

/// `Q = ωτ`.
pub fn quality_factor(angular_frequency: f64, lifetime: Lifetime) -> f64 {
    angular_frequency * lifetime.seconds()
}

/// Branching ratio `α / (α + 1/τ_c)` of absorption against cavity decay.
///
/// This is a modelling bridge to the device efficiency η, not a measured
/// property of the crystal.
pub fn absorption_efficiency(params: &CavityParams) -> Result<f64> {
    let tau = params
        .cavity_lifetime
        .ok_or(Error::MissingCavityLifetime)?
        .seconds();
    let alpha = tpa_rate(params).rate;
    Ok(alpha / (alpha + 1.0 / tau))
}

/// Two-photon resonance query, all energies in eV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceCheck {
    pub w1: f64,
    pub w2: f64,
    pub transition_energy: f64,
    pub tolerance: f64,
}

impl ResonanceCheck {
    pub fn new(w1: f64, w2: f64, transition_energy: f64, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(ResonanceCheck {
            w1,
            w2,
            transition_energy,
            tolerance,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceResult {
    /// `ℏω₁ + ℏω₂` hits the transition.
    pub resonant_pair: bool,
    /// Two photons from the same beam would also hit it.
    pub degenerate_single_source_resonant: bool,
}

pub fn check_resonance(rc: &ResonanceCheck) -> ResonanceResult {
    let hits = |e: f64| (e - rc.transition_energy).abs() <= rc.tolerance;
    ResonanceResult {
        resonant_pair: hits(rc.w1 + rc.w2),
        degenerate_single_source_resonant: hits(2.0 * rc.w1) || hits(2.0 * rc.w2),
    }
}

/// Everything the `params` command reports, with unit-tagged values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CavityReport {
    pub schema: u32,
    pub params: CavityParams,
    pub tpa_rate: Quantity,
    pub field: Quantity,
    pub min_lifetime: Quantity,
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<f64>,
}

impl CavityReport {
    pub fn compute(params: &CavityParams) -> Self {
        let rate = tpa_rate(params);
        let q = required_q(params);
        CavityReport {
            schema: 1,
            params: params.clone(),
            tpa_rate: Quantity::new(rate.rate, "1/s"),
            field: Quantity::new(rate.field, "V/m"),
            min_lifetime: Quantity::new(q.min_lifetime.seconds(), "s"),
            q: q.q,
            efficiency: absorption_efficiency(params).ok(),
        }
    }
}
