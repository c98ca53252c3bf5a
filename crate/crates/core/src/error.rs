use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operator is not unitary (max |U†U - I| = {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("invalid photon index {0}; expected 1 or 2")]
    InvalidPhoton(u8),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("operation requires a pure state")]
    MixedStateUnsupported,

    #[error(
        "intermediate level{} at E = {energy} eV is exactly resonant with photon {photon}",
        level.map(|i| format!(" {i}")).unwrap_or_default()
    )]
    ResonantIntermediate {
        level: Option<usize>,
        energy: f64,
        photon: u8,
    },

    #[error("invalid transition model: {0}")]
    InvalidModel(String),

    #[error("efficiency {0} outside [0, 1]")]
    InvalidEfficiency(f64),

    #[error("detector id {0} used more than once")]
    DuplicateDetector(u32),

    #[error("invalid device: {0}")]
    InvalidDevice(String),

    #[error("cavity lifetime is required for the absorption efficiency")]
    MissingCavityLifetime,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown unit {unit:?} for {quantity}")]
    UnknownUnit {
        quantity: &'static str,
        unit: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures rooted in the physics of the request (as opposed to
    /// malformed input).
    pub fn is_physics_domain(&self) -> bool {
        matches!(self, Error::ResonantIntermediate { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
