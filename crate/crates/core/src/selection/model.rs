use serde::{Deserialize, Serialize};

use super::cg::IrrepLabel;
use crate::error::{Error, Result};
use crate::polarization::C64;

/// Default lineshape width, 1 meV.
pub const DEFAULT_LINEWIDTH_EV: f64 = 1e-3;

/// Intermediate level `φ` with energy (eV) and the product of reduced matrix
/// elements `⟨f‖P‖φ⟩⟨φ‖P‖0⟩` (arbitrary units).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Intermediate {
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "M", with = "complex_pair")]
    pub coupling: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalLevel {
    pub irrep: IrrepLabel,
    #[serde(rename = "E")]
    pub energy: f64,
}

/// Level scheme for a two-photon transition. Energies in eV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct TransitionModel {
    #[serde(rename = "E0")]
    pub ground_energy: f64,
    pub intermediates: Vec<Intermediate>,
    pub finals: Vec<FinalLevel>,
    pub sigma: f64,
}

#[derive(Deserialize)]
struct RawModel {
    #[serde(rename = "E0")]
    ground_energy: f64,
    intermediates: Vec<Intermediate>,
    finals: Vec<FinalLevel>,
    #[serde(default = "default_sigma")]
    sigma: f64,
}

fn default_sigma() -> f64 {
    DEFAULT_LINEWIDTH_EV
}

impl TryFrom<RawModel> for TransitionModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        TransitionModel::new(raw.ground_energy, raw.intermediates, raw.finals, raw.sigma)
    }
}

impl TransitionModel {
    pub fn new(
        ground_energy: f64,
        intermediates: Vec<Intermediate>,
        finals: Vec<FinalLevel>,
        sigma: f64,
    ) -> Result<Self> {
        let model = TransitionModel {
            ground_energy,
            intermediates,
            finals,
            sigma,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad(format!("linewidth must be positive, got {}", self.sigma));
        }
        if !self.ground_energy.is_finite() {
            return bad("ground energy must be finite".into());
        }
        for (i, level) in self.intermediates.iter().enumerate() {
            if !(level.energy > self.ground_energy) {
                return bad(format!(
                    "intermediate {i} at {} eV is not above the ground state",
                    level.energy
                ));
            }
            if !(level.coupling.re.is_finite() && level.coupling.im.is_finite()) {
                return bad(format!("intermediate {i} has a non-finite matrix element"));
            }
        }
        for (i, f) in self.finals.iter().enumerate() {
            if f.irrep.symmetry().is_none() {
                return bad(format!(
                    "final level {i} has irrep {}, which two photons cannot reach",
                    f.irrep
                ));
            }
            if !f.energy.is_finite() {
                return bad(format!("final level {i} has a non-finite energy"));
            }
        }
        Ok(())
    }
}

/// Serde helper writing a complex number as `[re, im]`.
pub(super) mod complex_pair {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}
