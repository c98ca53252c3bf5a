//! Complete Bell state measurement by controlled two-photon absorption.
//!
//! Two photons arrive in one of the four polarization Bell states. A cascade of
//! crystals, each absorbing only one two-photon polarization state, separated by
//! linear retarders and rotators, reports which Bell state arrived. This crate
//! models that cascade and the physics that makes it work:
//!
//! * [`polarization`]: two-photon states, Jones operators and overlaps.
//! * [`channel`]: the partial absorption channel of a single crystal.
//! * [`selection`]: cubic-group Clebsch-Gordan factors and relative two-photon
//!   absorption rates.
//! * [`device`]: the cascade itself, exact and Monte Carlo propagation, and
//!   confusion matrices.
//! * [`physical`]: absolute rates and cavity requirements from material
//!   parameters.
//! * [`qdot`]: the quantum-dot variant that reuses one absorber four times.
//! * [`cli`]: the configuration and report formats used by the binary.
//!
//! The `examples/` directory has one runnable program per capability, for
//! instance `cargo run --example complete_bsm`.

// Validation uses `!(x > 0.0)` style checks on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod confusion;
pub mod device;
pub mod error;
pub mod physical;
pub mod polarization;
pub mod qdot;
pub mod selection;

pub use channel::{AbsorptionChannel, ChannelOutcome};
pub use confusion::ConfusionMatrix;
pub use device::{
    confusion_matrix, propagate_exact, propagate_monte_carlo, shortcut_device, standard_device,
    DeviceSpec, Outcome, OutcomeCounts, OutcomeDistribution, StageSpec, Terminal,
};
pub use error::{Error, Result};
pub use physical::CavityParams;
pub use polarization::{bell_state, BellLabel, JonesOperator, Photon, TwoPhotonState};
pub use selection::{build_cg_table, CgTable, IrrepLabel, TransitionModel};
