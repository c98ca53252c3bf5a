//! Two-photon polarization states and linear polarization elements.
//!
//! Every amplitude vector and density matrix uses the two-photon basis
//! ordering `(xx, xy, yx, yy)`, where the first letter is the polarization of
//! photon 1 and the second that of photon 2. Index of `|p1 p2⟩` is
//! `2 * p1 + p2` with `x = 0`, `y = 1`.
//!
//! Retarders use the fast axis along `x`: a quarter-wave retarder is
//! `diag(1, i)`. Rotators apply the real rotation
//! `[[cos θ, -sin θ], [sin θ, cos θ]]`, so a rotation by π/2 sends
//! `|x⟩ → |y⟩` and `|y⟩ → -|x⟩`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Amplitudes = Vector4<C64>;
pub type Density = Matrix4<C64>;

/// Tolerance on unitarity and Hermiticity checks.
pub const UNITARY_TOL: f64 = 1e-12;
/// Slack allowed above unit norm before a state is rejected.
pub const NORM_SLACK: f64 = 1e-9;

/// Largest entry modulus.
pub(crate) fn max_abs<'a>(entries: impl Iterator<Item = &'a C64>) -> f64 {
    entries.map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Linear polarization of a single photon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    X = 0,
    Y = 1,
}

/// The frozen two-photon basis ordering.
pub const TWO_PHOTON_BASIS: [(Polarization, Polarization); 4] = [
    (Polarization::X, Polarization::X),
    (Polarization::X, Polarization::Y),
    (Polarization::Y, Polarization::X),
    (Polarization::Y, Polarization::Y),
];

/// Position of `|p1 p2⟩` in the two-photon basis.
pub fn basis_index(p1: Polarization, p2: Polarization) -> usize {
    2 * p1 as usize + p2 as usize
}

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BellLabel::PhiPlus => "PhiPlus",
            BellLabel::PhiMinus => "PhiMinus",
            BellLabel::PsiPlus => "PsiPlus",
            BellLabel::PsiMinus => "PsiMinus",
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | ' ' | '(' | ')'))
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "phiplus" | "phi+" => Ok(BellLabel::PhiPlus),
            "phiminus" => Ok(BellLabel::PhiMinus),
            "psiplus" | "psi+" => Ok(BellLabel::PsiPlus),
            "psiminus" => Ok(BellLabel::PsiMinus),
            // '-' was stripped above, so "phi-" arrives as "phi"
            "phi" if s.trim_end_matches(')').ends_with('-') => Ok(BellLabel::PhiMinus),
            "psi" if s.trim_end_matches(')').ends_with('-') => Ok(BellLabel::PsiMinus),
            _ => Err(Error::InvalidState(format!("unknown Bell label {s:?}"))),
        }
    }
}

/// Which of the two photons an element acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Photon {
    First,
    Second,
}

impl Photon {
    pub fn number(self) -> u8 {
        match self {
            Photon::First => 1,
            Photon::Second => 2,
        }
    }
}

impl TryFrom<u8> for Photon {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Photon::First),
            2 => Ok(Photon::Second),
            other => Err(Error::InvalidPhoton(other)),
        }
    }
}

impl Serialize for Photon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for Photon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = u8::deserialize(d)?;
        Photon::try_from(n).map_err(serde::de::Error::custom)
    }
}

/// A (possibly sub-normalized) state of the two-photon polarization space.
///
/// Sub-normalized states represent conditional states after a
/// non-absorption event; `norm()` is the remaining probability mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateDoc", into = "StateDoc")]
pub enum TwoPhotonState {
    Pure(Amplitudes),
    Mixed(Density),
}

impl TwoPhotonState {
    /// Validated pure state: `Σ|a|² ≤ 1` (with slack).
    pub fn pure(amplitudes: Amplitudes) -> Result<Self> {
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = amplitudes.norm_squared();
        if norm > 1.0 + NORM_SLACK {
            return Err(Error::InvalidState(format!("norm {norm} exceeds 1")));
        }
        Ok(TwoPhotonState::Pure(amplitudes))
    }

    /// Validated density matrix: Hermitian, positive semidefinite, trace ≤ 1.
    pub fn mixed(density: Density) -> Result<Self> {
        if density
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite density entry".into()));
        }
        let asym = max_abs((density - density.adjoint()).iter());
        if asym > UNITARY_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix not Hermitian (deviation {asym:.3e})"
            )));
        }
        let min_eig = density
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -UNITARY_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        let trace = density.trace().re;
        if trace > 1.0 + NORM_SLACK {
            return Err(Error::InvalidState(format!("trace {trace} exceeds 1")));
        }
        Ok(TwoPhotonState::Mixed(density))
    }

    /// Product basis state `|p1⟩₁|p2⟩₂`.
    pub fn basis(p1: Polarization, p2: Polarization) -> Self {
        let mut a = Amplitudes::zeros();
        a[basis_index(p1, p2)] = ONE;
        TwoPhotonState::Pure(a)
    }

    /// The zero state, used as the conditional state of a certain event.
    pub fn zero() -> Self {
        TwoPhotonState::Pure(Amplitudes::zeros())
    }

    pub fn norm(&self) -> f64 {
        match self {
            TwoPhotonState::Pure(a) => a.norm_squared(),
            TwoPhotonState::Mixed(rho) => rho.trace().re,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, TwoPhotonState::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&Amplitudes> {
        match self {
            TwoPhotonState::Pure(a) => Some(a),
            TwoPhotonState::Mixed(_) => None,
        }
    }

    /// `|ψ⟩⟨ψ|` for pure states, the stored matrix otherwise.
    pub fn density(&self) -> Density {
        match self {
            TwoPhotonState::Pure(a) => a * a.adjoint(),
            TwoPhotonState::Mixed(rho) => *rho,
        }
    }

    /// Converts to the density-matrix representation.
    pub fn to_mixed(&self) -> Self {
        TwoPhotonState::Mixed(self.density())
    }

    /// Rescales to unit norm. Zero states are returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n <= 0.0 {
            return self.clone();
        }
        match self {
            TwoPhotonState::Pure(a) => TwoPhotonState::Pure(a / C64::from(n.sqrt())),
            TwoPhotonState::Mixed(rho) => TwoPhotonState::Mixed(rho / C64::from(n)),
        }
    }

    /// Applies a 4×4 operator: `U|ψ⟩` or `U ρ U†`.
    pub(crate) fn transformed(&self, op: &Matrix4<C64>) -> Self {
        match self {
            TwoPhotonState::Pure(a) => TwoPhotonState::Pure(op * a),
            TwoPhotonState::Mixed(rho) => TwoPhotonState::Mixed(op * rho * op.adjoint()),
        }
    }
}

/// A 2×2 unitary acting on one photon's polarization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JonesOperator(Matrix2<C64>);

impl JonesOperator {
    pub fn new(matrix: Matrix2<C64>) -> Result<Self> {
        let deviation = max_abs((matrix.adjoint() * matrix - Matrix2::identity()).iter());
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(JonesOperator(matrix))
    }

    pub fn identity() -> Self {
        JonesOperator(Matrix2::identity())
    }

    /// π/2 retarder (quarter-wave plate), fast axis along x.
    pub fn quarter_wave() -> Self {
        JonesOperator(Matrix2::new(ONE, ZERO, ZERO, I))
    }

    /// Retarder adding phase `e^{iφ}` to the y component.
    pub fn retarder(phase: f64) -> Self {
        JonesOperator(Matrix2::new(ONE, ZERO, ZERO, C64::from_polar(1.0, phase)))
    }

    /// Polarization rotation by `angle` radians.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        JonesOperator(Matrix2::new(
            C64::from(c),
            C64::from(-s),
            C64::from(s),
            C64::from(c),
        ))
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    /// `self ⊗ other` in the two-photon basis ordering.
    pub fn tensor(&self, other: &JonesOperator) -> Matrix4<C64> {
        let (a, b) = (&self.0, &other.0);
        Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
    }
}

/// The Bell state with the given label, normalized.
pub fn bell_state(label: BellLabel) -> TwoPhotonState {
    let h = C64::from(FRAC_1_SQRT_2);
    let amplitudes = match label {
        BellLabel::PhiPlus => Amplitudes::new(h, ZERO, ZERO, h),
        BellLabel::PhiMinus => Amplitudes::new(h, ZERO, ZERO, -h),
        BellLabel::PsiPlus => Amplitudes::new(ZERO, h, h, ZERO),
        BellLabel::PsiMinus => Amplitudes::new(ZERO, h, -h, ZERO),
    };
    TwoPhotonState::Pure(amplitudes)
}

/// Quarter-wave retarders on both photons: `diag(1, i) ⊗ diag(1, i)`.
pub fn quarter_wave_both(state: &TwoPhotonState) -> TwoPhotonState {
    let q = JonesOperator::quarter_wave();
    apply_jones(state, &q, &q)
}

/// Rotates the polarization of one photon by `angle` radians.
pub fn rotate_one(state: &TwoPhotonState, which: Photon, angle: f64) -> TwoPhotonState {
    let r = JonesOperator::rotation(angle);
    let id = JonesOperator::identity();
    match which {
        Photon::First => apply_jones(state, &r, &id),
        Photon::Second => apply_jones(state, &id, &r),
    }
}

/// Applies `op1 ⊗ op2`.
pub fn apply_jones(
    state: &TwoPhotonState,
    op1: &JonesOperator,
    op2: &JonesOperator,
) -> TwoPhotonState {
    state.transformed(&op1.tensor(op2))
}

/// Result of [`overlap`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Overlap {
    /// `⟨a|b⟩`, when both states are pure.
    Amplitude(C64),
    /// `Tr(ρ_a ρ_b)`, when either state is mixed.
    Trace(f64),
}

impl Overlap {
    /// `|⟨a|b⟩|²` or `Tr(ρ_a ρ_b)`; these agree for pure states.
    pub fn probability(&self) -> f64 {
        match *self {
            Overlap::Amplitude(a) => a.norm_sqr(),
            Overlap::Trace(t) => t,
        }
    }
}

pub fn overlap(a: &TwoPhotonState, b: &TwoPhotonState) -> Overlap {
    match (a, b) {
        (TwoPhotonState::Pure(x), TwoPhotonState::Pure(y)) => Overlap::Amplitude(x.dotc(y)),
        _ => Overlap::Trace((a.density() * b.density()).trace().re),
    }
}

/// Squared overlap, insensitive to global phase.
pub fn overlap_probability(a: &TwoPhotonState, b: &TwoPhotonState) -> f64 {
    overlap(a, b).probability()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct StateDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<Vec<Vec<[f64; 2]>>>,
}

impl From<TwoPhotonState> for StateDoc {
    fn from(state: TwoPhotonState) -> Self {
        match state {
            TwoPhotonState::Pure(a) => StateDoc {
                kind: "pure".into(),
                amplitudes: Some(a.iter().map(|z| [z.re, z.im]).collect()),
                density: None,
            },
            TwoPhotonState::Mixed(rho) => StateDoc {
                kind: "mixed".into(),
                amplitudes: None,
                density: Some(
                    (0..4)
                        .map(|r| (0..4).map(|c| [rho[(r, c)].re, rho[(r, c)].im]).collect())
                        .collect(),
                ),
            },
        }
    }
}

impl TryFrom<StateDoc> for TwoPhotonState {
    type Error = Error;

    fn try_from(doc: StateDoc) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidState(msg.to_string());
        match doc.kind.as_str() {
            "pure" => {
                let amps = doc
                    .amplitudes
                    .ok_or_else(|| bad("pure state needs \"amplitudes\""))?;
                if amps.len() != 4 {
                    return Err(bad("expected 4 amplitudes"));
                }
                TwoPhotonState::pure(Amplitudes::from_fn(|i, _| C64::new(amps[i][0], amps[i][1])))
            }
            "mixed" => {
                let rows = doc
                    .density
                    .ok_or_else(|| bad("mixed state needs \"density\""))?;
                if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                    return Err(bad("expected a 4x4 density matrix"));
                }
                TwoPhotonState::mixed(Density::from_fn(|r, c| {
                    C64::new(rows[r][c][0], rows[r][c][1])
                }))
            }
            other => Err(Error::InvalidState(format!("unknown state kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TOL: f64 = 1e-12;

    fn amps(s: &TwoPhotonState) -> Amplitudes {
        *s.amplitudes().unwrap()
    }

    #[test]
    fn bell_amplitudes() {
        let h = FRAC_1_SQRT_2;
        let phi = amps(&bell_state(BellLabel::PhiPlus));
        let expected = [h, 0.0, 0.0, h];
        for i in 0..4 {
            assert_abs_diff_eq!(phi[i].re, expected[i], epsilon = TOL);
            assert_abs_diff_eq!(phi[i].im, 0.0, epsilon = TOL);
        }
        let psi = amps(&bell_state(BellLabel::PsiMinus));
        let expected = [0.0, h, -h, 0.0];
        for i in 0..4 {
            assert_abs_diff_eq!(psi[i].re, expected[i], epsilon = TOL);
        }
    }

    #[test]
    fn bell_gram_matrix_is_identity() {
        for a in BellLabel::ALL {
            for b in BellLabel::ALL {
                let o = overlap(&bell_state(a), &bell_state(b));
                let expected = if a == b { 1.0 } else { 0.0 };
                let Overlap::Amplitude(z) = o else {
                    panic!("pure overlap")
                };
                assert_abs_diff_eq!(z.re, expected, epsilon = TOL);
                assert_abs_diff_eq!(z.im, 0.0, epsilon = TOL);
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let phi = bell_state(BellLabel::PhiPlus);
        let xx = TwoPhotonState::basis(Polarization::X, Polarization::X);
        assert_abs_diff_eq!(overlap_probability(&phi, &phi), 1.0, epsilon = TOL);
        assert_abs_diff_eq!(
            overlap_probability(&phi, &bell_state(BellLabel::PsiPlus)),
            0.0,
            epsilon = TOL
        );
        let Overlap::Amplitude(z) = overlap(&phi, &xx) else {
            unreachable!()
        };
        assert_abs_diff_eq!(z.re, FRAC_1_SQRT_2, epsilon = TOL);
        // mixed path reports Tr(ρaρb) = |⟨a|b⟩|²
        let Overlap::Trace(t) = overlap(&phi.to_mixed(), &xx) else {
            unreachable!()
        };
        assert_abs_diff_eq!(t, 0.5, epsilon = TOL);
    }

    #[test]
    fn quarter_wave_mappings() {
        let out = quarter_wave_both(&bell_state(BellLabel::PhiMinus));
        assert_abs_diff_eq!(
            overlap_probability(&out, &bell_state(BellLabel::PhiPlus)),
            1.0,
            epsilon = TOL
        );
        let psi = bell_state(BellLabel::PsiPlus);
        let out = amps(&quarter_wave_both(&psi));
        for i in 0..4 {
            let expected = amps(&psi)[i] * I;
            assert_abs_diff_eq!((out[i] - expected).norm(), 0.0, epsilon = TOL);
        }
        let xx = TwoPhotonState::basis(Polarization::X, Polarization::X);
        assert_eq!(quarter_wave_both(&xx), xx);
    }

    #[test]
    fn quarter_wave_fourth_power_is_identity() {
        let mut s = bell_state(BellLabel::PsiMinus);
        for _ in 0..4 {
            s = quarter_wave_both(&s);
        }
        assert_abs_diff_eq!(
            overlap_probability(&s, &bell_state(BellLabel::PsiMinus)),
            1.0,
            epsilon = TOL
        );
    }

    #[test]
    fn rotation_interchanges_psi_and_phi() {
        let cases = [
            (BellLabel::PsiMinus, BellLabel::PhiPlus),
            (BellLabel::PsiPlus, BellLabel::PhiMinus),
            (BellLabel::PhiPlus, BellLabel::PsiMinus),
            (BellLabel::PhiMinus, BellLabel::PsiPlus),
        ];
        for (from, to) in cases {
            let out = rotate_one(&bell_state(from), Photon::First, FRAC_PI_2);
            for target in BellLabel::ALL {
                let expected = if target == to { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(
                    overlap_probability(&out, &bell_state(target)),
                    expected,
                    epsilon = TOL
                );
            }
        }
    }

    #[test]
    fn zero_rotation_is_exact_identity() {
        for label in BellLabel::ALL {
            let s = bell_state(label);
            assert_eq!(rotate_one(&s, Photon::Second, 0.0), s);
        }
    }

    #[test]
    fn invalid_photon_index() {
        assert!(matches!(Photon::try_from(0), Err(Error::InvalidPhoton(0))));
        assert!(matches!(Photon::try_from(3), Err(Error::InvalidPhoton(3))));
        assert_eq!(Photon::try_from(2).unwrap(), Photon::Second);
    }

    #[test]
    fn apply_jones_matches_quarter_wave() {
        let s = bell_state(BellLabel::PhiMinus);
        let q = JonesOperator::new(Matrix2::new(ONE, ZERO, ZERO, I)).unwrap();
        let a = amps(&apply_jones(&s, &q, &q));
        let b = amps(&quarter_wave_both(&s));
        assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = TOL);
        let id = JonesOperator::identity();
        assert_eq!(apply_jones(&s, &id, &id), s);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = Matrix2::new(ONE, ONE, ZERO, ONE);
        assert!(matches!(
            JonesOperator::new(m),
            Err(Error::NonUnitary { .. })
        ));
        let half = Matrix2::identity() * C64::from(0.5);
        assert!(JonesOperator::new(half).is_err());
    }

    #[test]
    fn rotation_by_pi_flips_sign() {
        let s = bell_state(BellLabel::PhiPlus);
        let out = amps(&rotate_one(&s, Photon::First, PI));
        assert_abs_diff_eq!((out + amps(&s)).norm(), 0.0, epsilon = TOL);
    }

    #[test]
    fn state_validation() {
        let too_big = Amplitudes::new(ONE, ONE, ZERO, ZERO);
        assert!(TwoPhotonState::pure(too_big).is_err());
        let sub = Amplitudes::new(C64::from(0.5), ZERO, ZERO, ZERO);
        assert_abs_diff_eq!(TwoPhotonState::pure(sub).unwrap().norm(), 0.25);

        let mut rho = Density::zeros();
        rho[(0, 1)] = ONE;
        assert!(TwoPhotonState::mixed(rho).is_err(), "not Hermitian");
        let mut rho = Density::zeros();
        rho[(0, 0)] = C64::from(-0.1);
        rho[(1, 1)] = C64::from(0.5);
        assert!(TwoPhotonState::mixed(rho).is_err(), "negative eigenvalue");
        let mixed = Density::identity() * C64::from(0.25);
        assert_abs_diff_eq!(
            TwoPhotonState::mixed(mixed).unwrap().norm(),
            1.0,
            epsilon = TOL
        );
    }

    #[test]
    fn json_shape() {
        let s = bell_state(BellLabel::PhiPlus);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["kind"], "pure");
        assert_eq!(v["amplitudes"].as_array().unwrap().len(), 4);
        assert_eq!(v["amplitudes"][3][0].as_f64().unwrap(), FRAC_1_SQRT_2);

        let m = s.to_mixed();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["kind"], "mixed");
        let back: TwoPhotonState = serde_json::from_value(v).unwrap();
        assert_eq!(back, m);

        let bad = r#"{"kind":"pure","amplitudes":[[1,0],[1,0],[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<TwoPhotonState>(bad).is_err());
        let bad = r#"{"kind":"sparse"}"#;
        assert!(serde_json::from_str::<TwoPhotonState>(bad).is_err());
    }

    #[test]
    fn bell_label_parsing() {
        for label in BellLabel::ALL {
            assert_eq!(label.name().parse::<BellLabel>().unwrap(), label);
        }
        assert_eq!("phi-".parse::<BellLabel>().unwrap(), BellLabel::PhiMinus);
        assert_eq!("Psi+".parse::<BellLabel>().unwrap(), BellLabel::PsiPlus);
        assert_eq!(
            "psi_minus".parse::<BellLabel>().unwrap(),
            BellLabel::PsiMinus
        );
        assert!("chi".parse::<BellLabel>().is_err());
    }
}
