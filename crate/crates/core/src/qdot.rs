//! Quantum-dot controlled absorption.
//!
//! The dot holds one electron-hole pair entangled with a photon. With a
//! second pair already present, Pauli blocking lets the dot absorb only the
//! `Ψ+` component of the pair-photon state. The photon is sent through the dot
//! up to four times, with circular-polarization elements in between; the pass
//! at which absorption happens identifies the Bell state.
//!
//! Basis ordering is `(↑σ+, ↑σ-, ↓σ+, ↓σ-)`; the photon is the second factor.

use std::collections::HashSet;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::channel::{validate_efficiency, AbsorptionChannel};
use crate::confusion::ConfusionMatrix;
use crate::error::{Error, Result};
use crate::polarization::{Amplitudes, BellLabel, TwoPhotonState, C64};

/// Pair-photon state; sub-normalized states carry the surviving mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DotPhotonState(pub Amplitudes);

impl DotPhotonState {
    pub fn norm(&self) -> f64 {
        self.0.norm_squared()
    }

    /// Squared overlap `|⟨self|other⟩|²`.
    pub fn overlap_probability(&self, other: &DotPhotonState) -> f64 {
        self.0.dotc(&other.0).norm_sqr()
    }

    fn photon_op(&self, op: Matrix2<C64>) -> DotPhotonState {
        let full = Matrix4::from_fn(|r, c| {
            if r / 2 == c / 2 {
                op[(r % 2, c % 2)]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        DotPhotonState(full * self.0)
    }
}

pub fn qd_bell_state(label: BellLabel) -> DotPhotonState {
    let h = C64::from(FRAC_1_SQRT_2);
    let z = C64::new(0.0, 0.0);
    DotPhotonState(match label {
        BellLabel::PhiPlus => Amplitudes::new(h, z, z, h),
        BellLabel::PhiMinus => Amplitudes::new(h, z, z, -h),
        BellLabel::PsiPlus => Amplitudes::new(z, h, h, z),
        BellLabel::PsiMinus => Amplitudes::new(z, h, -h, z),
    })
}

/// π retarder: `σ+ ↔ σ-`.
pub fn qd_pi_retarder(state: &DotPhotonState) -> DotPhotonState {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    state.photon_op(Matrix2::new(z, o, o, z))
}

/// π/2 rotator: relative phase -1 between `σ+` and `σ-`.
pub fn qd_half_pi_rotator(state: &DotPhotonState) -> DotPhotonState {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    state.photon_op(Matrix2::new(o, z, z, -o))
}

fn dot_channel(eta: f64) -> Result<AbsorptionChannel> {
    AbsorptionChannel::new(qd_bell_state(BellLabel::PsiPlus).0, eta)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DotPassOutcome {
    pub p_click: f64,
    pub conditional: DotPhotonState,
}

/// One pass through the dot: absorbs the `Ψ+` component with efficiency `eta`.
pub fn dot_pass(state: &DotPhotonState, eta: f64) -> Result<DotPassOutcome> {
    let out = dot_channel(eta)?.apply(&TwoPhotonState::Pure(state.0));
    let amplitudes = *out.conditional.amplitudes().expect("pure in, pure out");
    Ok(DotPassOutcome {
        p_click: out.p_click,
        conditional: DotPhotonState(amplitudes),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PassElement {
    PiRetarder,
    HalfPiRotator,
    DotPass { pass_id: u8 },
}

/// Ordered sequence of polarization elements and passes through the dot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PassSchedule {
    pub elements: Vec<PassElement>,
    pub eta: f64,
}

impl PassSchedule {
    pub fn new(elements: Vec<PassElement>, eta: f64) -> Result<Self> {
        validate_efficiency(eta)?;
        let mut ids = HashSet::new();
        for e in &elements {
            if let PassElement::DotPass { pass_id } = e {
                if !ids.insert(*pass_id) {
                    return Err(Error::InvalidParameter(format!(
                        "pass id {pass_id} repeated"
                    )));
                }
            }
        }
        if ids.len() > 4 {
            return Err(Error::InvalidParameter(format!(
                "at most four passes, got {}",
                ids.len()
            )));
        }
        Ok(PassSchedule { elements, eta })
    }

    pub fn pass_ids(&self) -> Vec<u8> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                PassElement::DotPass { pass_id } => Some(*pass_id),
                _ => None,
            })
            .collect()
    }

    /// Outcome labels: `pass<id>` in schedule order, then `no-click`.
    pub fn outcome_labels(&self) -> Vec<String> {
        self.pass_ids()
            .iter()
            .map(|id| format!("pass{id}"))
            .chain(std::iter::once("no-click".to_string()))
            .collect()
    }

    /// Exact click probability per pass (schedule order), then no-click.
    pub fn propagate(&self, input: &DotPhotonState) -> Result<Vec<f64>> {
        let n = input.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidState("input state has zero norm".into()));
        }
        let channel = dot_channel(self.eta)?;
        let mut state = TwoPhotonState::Pure(input.0 / C64::from(n.sqrt()));
        let mut probabilities = Vec::new();
        for e in &self.elements {
            let amplitudes = DotPhotonState(*state.amplitudes().expect("pure"));
            state = match e {
                PassElement::PiRetarder => TwoPhotonState::Pure(qd_pi_retarder(&amplitudes).0),
                PassElement::HalfPiRotator => {
                    TwoPhotonState::Pure(qd_half_pi_rotator(&amplitudes).0)
                }
                PassElement::DotPass { .. } => {
                    probabilities.push(channel.click_mass(&state));
                    channel.transmit(&state)
                }
            };
        }
        probabilities.push(state.norm());
        Ok(probabilities)
    }

    /// Bell state that each pass detects with certainty at unit efficiency,
    /// found by propagating all four inputs.
    pub fn announcements(&self) -> Result<Vec<Option<BellLabel>>> {
        let ideal = PassSchedule {
            elements: self.elements.clone(),
            eta: 1.0,
        };
        let mut out = vec![None; self.pass_ids().len()];
        for label in BellLabel::ALL {
            let probs = ideal.propagate(&qd_bell_state(label))?;
            if let Some(i) = probs[..out.len()]
                .iter()
                .position(|p| (p - 1.0).abs() < 1e-9)
            {
                out[i] = Some(label);
            }
        }
        Ok(out)
    }

    /// Confusion matrix with rows ordered by the announced Bell state of
    /// each pass when all four are distinct, canonical order otherwise.
    pub fn confusion_matrix(&self) -> Result<ConfusionMatrix> {
        let announced: Option<Vec<BellLabel>> = self.announcements()?.into_iter().collect();
        let inputs = match announced {
            Some(l) if l.len() == 4 => l,
            _ => BellLabel::ALL.to_vec(),
        };
        let rows = inputs
            .iter()
            .map(|&l| self.propagate(&qd_bell_state(l)))
            .collect::<Result<Vec<_>>>()?;
        ConfusionMatrix::new(inputs, self.outcome_labels(), rows)
    }
}

/// Pass 1, π/2 rotator, pass 2, π retarder, pass 3, π/2 rotator, pass 4.
///
/// At unit efficiency `Ψ+`, `Ψ-`, `Φ-`, `Φ+` are absorbed on passes 1 to 4.
pub fn four_pass_schedule(eta: f64) -> Result<PassSchedule> {
    use PassElement::*;
    PassSchedule::new(
        vec![
            DotPass { pass_id: 1 },
            HalfPiRotator,
            DotPass { pass_id: 2 },
            PiRetarder,
            DotPass { pass_id: 3 },
            HalfPiRotator,
            DotPass { pass_id: 4 },
        ],
        eta,
    )
}

/// The four-pass schedule together with its confusion matrix.
pub fn four_pass_protocol(eta: f64) -> Result<(PassSchedule, ConfusionMatrix)> {
    let schedule = four_pass_schedule(eta)?;
    let matrix = schedule.confusion_matrix()?;
    Ok((schedule, matrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn maps_to(state: &DotPhotonState, target: BellLabel) {
        for l in BellLabel::ALL {
            let expected = if l == target { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(
                state.overlap_probability(&qd_bell_state(l)),
                expected,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn bell_states() {
        let h = FRAC_1_SQRT_2;
        let phi = qd_bell_state(BellLabel::PhiPlus).0;
        assert_eq!(phi.map(|z| z.re).as_slice(), &[h, 0.0, 0.0, h]);
        let psi = qd_bell_state(BellLabel::PsiPlus).0;
        assert_eq!(psi.map(|z| z.re).as_slice(), &[0.0, h, h, 0.0]);
        for a in BellLabel::ALL {
            for b in BellLabel::ALL {
                let o = qd_bell_state(a).overlap_probability(&qd_bell_state(b));
                assert_abs_diff_eq!(o, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn retarder_swaps_phi_and_psi() {
        maps_to(
            &qd_pi_retarder(&qd_bell_state(BellLabel::PhiPlus)),
            BellLabel::PsiPlus,
        );
        maps_to(
            &qd_pi_retarder(&qd_bell_state(BellLabel::PsiMinus)),
            BellLabel::PhiMinus,
        );
        let s = qd_bell_state(BellLabel::PhiMinus);
        assert_eq!(qd_pi_retarder(&qd_pi_retarder(&s)), s);
    }

    #[test]
    fn rotator_flips_sign() {
        maps_to(
            &qd_half_pi_rotator(&qd_bell_state(BellLabel::PhiPlus)),
            BellLabel::PhiMinus,
        );
        maps_to(
            &qd_half_pi_rotator(&qd_bell_state(BellLabel::PsiMinus)),
            BellLabel::PsiPlus,
        );
        let s = DotPhotonState(Amplitudes::new(
            C64::new(0.3, 0.1),
            C64::new(0.2, 0.0),
            C64::new(0.0, 0.4),
            C64::new(0.5, 0.0),
        ));
        assert_eq!(qd_half_pi_rotator(&s).0[0], s.0[0]);
    }

    #[test]
    fn dot_absorbs_only_psi_plus() {
        let out = dot_pass(&qd_bell_state(BellLabel::PsiPlus), 1.0).unwrap();
        assert_abs_diff_eq!(out.p_click, 1.0, epsilon = 1e-12);
        for l in [BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PsiMinus] {
            let s = qd_bell_state(l);
            let out = dot_pass(&s, 0.6).unwrap();
            assert_abs_diff_eq!(out.p_click, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!((out.conditional.0 - s.0).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn dot_pass_superposition() {
        let s = DotPhotonState(
            (qd_bell_state(BellLabel::PsiPlus).0 + qd_bell_state(BellLabel::PsiMinus).0)
                * C64::from(FRAC_1_SQRT_2),
        );
        let out = dot_pass(&s, 0.5).unwrap();
        assert_abs_diff_eq!(out.p_click, 0.25, epsilon = 1e-12);
        assert!(dot_channel(0.5).unwrap().completeness_deviation() < 1e-12);
    }

    #[test]
    fn schedule_announcements() {
        let s = four_pass_schedule(1.0).unwrap();
        assert_eq!(
            s.announcements().unwrap(),
            vec![
                Some(BellLabel::PsiPlus),
                Some(BellLabel::PsiMinus),
                Some(BellLabel::PhiMinus),
                Some(BellLabel::PhiPlus)
            ]
        );
    }

    #[test]
    fn protocol_identity_at_unit_efficiency() {
        let (_, m) = four_pass_protocol(1.0).unwrap();
        assert_eq!(m.inputs[0], BellLabel::PsiPlus);
        assert_eq!(m.outcomes, ["pass1", "pass2", "pass3", "pass4", "no-click"]);
        assert!(m.off_diagonal_mass() < 1e-12);
    }

    #[test]
    fn protocol_at_zero_efficiency() {
        let (_, m) = four_pass_protocol(0.0).unwrap();
        for row in &m.rows {
            assert_abs_diff_eq!(row[4], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn schedule_validation() {
        use PassElement::*;
        let dup = PassSchedule::new(vec![DotPass { pass_id: 1 }, DotPass { pass_id: 1 }], 1.0);
        assert!(dup.is_err());
        let five = (1..=5).map(|pass_id| DotPass { pass_id }).collect();
        assert!(PassSchedule::new(five, 1.0).is_err());
        assert!(four_pass_schedule(1.5).is_err());
    }
}
