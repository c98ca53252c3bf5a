//! Two-outcome absorption channel shared by the crystal and quantum-dot models.
//!
//! An absorber with target state `|a⟩` and efficiency `η` has the click
//! effect `E = η|a⟩⟨a|` and the no-click Kraus operator
//! `K = √(I - η|a⟩⟨a|) = I - (1 - √(1 - η))|a⟩⟨a|`, so `E + K†K = I`.

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::polarization::{max_abs, TwoPhotonState, C64};

/// Remaining mass below which the no-click branch is treated as empty.
const EMPTY_BRANCH: f64 = 1e-15;

/// Checks that `eta` is a probability.
pub fn validate_efficiency(eta: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&eta) {
        Ok(eta)
    } else {
        Err(Error::InvalidEfficiency(eta))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbsorptionChannel {
    target: Vector4<C64>,
    eta: f64,
}

/// Outcome of a single channel use on a normalized input.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelOutcome {
    pub p_click: f64,
    /// Normalized state given no click; the zero state when `p_click = 1`.
    pub conditional: TwoPhotonState,
}

impl AbsorptionChannel {
    /// `target` must be a unit-norm pure state.
    pub fn new(target: Vector4<C64>, eta: f64) -> Result<Self> {
        validate_efficiency(eta)?;
        let n = target.norm_squared();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "absorbed state must be normalized (norm {n})"
            )));
        }
        Ok(AbsorptionChannel { target, eta })
    }

    pub fn from_state(target: &TwoPhotonState, eta: f64) -> Result<Self> {
        let a = target
            .amplitudes()
            .ok_or_else(|| Error::InvalidState("absorbed state must be a pure state".into()))?;
        AbsorptionChannel::new(*a, eta)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn target(&self) -> &Vector4<C64> {
        &self.target
    }

    fn projector(&self) -> Matrix4<C64> {
        self.target * self.target.adjoint()
    }

    /// `η|a⟩⟨a|`.
    pub fn click_effect(&self) -> Matrix4<C64> {
        self.projector() * C64::from(self.eta)
    }

    /// `√(I - η|a⟩⟨a|)`.
    pub fn pass_kraus(&self) -> Matrix4<C64> {
        let shrink = 1.0 - (1.0 - self.eta).sqrt();
        Matrix4::identity() - self.projector() * C64::from(shrink)
    }

    /// `max |E + K†K - I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let k = self.pass_kraus();
        max_abs((self.click_effect() + k.adjoint() * k - Matrix4::identity()).iter())
    }

    /// Unnormalized click mass `η⟨a|ρ|a⟩`.
    pub fn click_mass(&self, state: &TwoPhotonState) -> f64 {
        let mass = match state {
            TwoPhotonState::Pure(psi) => self.target.dotc(psi).norm_sqr(),
            TwoPhotonState::Mixed(rho) => (self.target.adjoint() * rho * self.target)[(0, 0)].re,
        };
        (self.eta * mass).max(0.0)
    }

    /// Unnormalized no-click branch `K ρ K†`; its norm is the surviving mass.
    pub fn transmit(&self, state: &TwoPhotonState) -> TwoPhotonState {
        state.transformed(&self.pass_kraus())
    }

    /// Applies the channel to `state`, treated as normalized.
    pub fn apply(&self, state: &TwoPhotonState) -> ChannelOutcome {
        let norm = state.norm();
        if norm <= 0.0 {
            return ChannelOutcome {
                p_click: 0.0,
                conditional: TwoPhotonState::zero(),
            };
        }
        let p_click = (self.click_mass(state) / norm).min(1.0);
        let passed = self.transmit(state);
        let conditional = if passed.norm() <= EMPTY_BRANCH * norm {
            TwoPhotonState::zero()
        } else {
            passed.normalized()
        };
        ChannelOutcome {
            p_click,
            conditional,
        }
    }
}

/// `p_click = η⟨a|ρ|a⟩`, conditional state `KρK†/(1 - p_click)`.
pub fn crystal_channel(
    state: &TwoPhotonState,
    absorbed: &TwoPhotonState,
    eta: f64,
) -> Result<ChannelOutcome> {
    Ok(AbsorptionChannel::from_state(absorbed, eta)?.apply(state))
}
