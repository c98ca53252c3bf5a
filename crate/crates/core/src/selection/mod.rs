//! Two-photon polarization selection rules in cubic crystals.
//!
//! The two-photon absorption amplitude into row `m` of a final irrep `μ`
//! factorizes into a polarization part, the geometrical factor
//! `G_{μm}(ψ) = Σ_{l l'} ⟨vac|a₁ˡ a₂ˡ'|ψ⟩ (μ m | Γ4− l, Γ4− l')`, and a
//! level part built from energy denominators and reduced matrix elements.
//! Photons travel along `z`, so only the `x`/`y` components of the coupling
//! table contribute.

mod cg;
mod model;

pub use cg::{build_cg_table, product_index, Axis, CgRow, CgTable, IrrepLabel, Symmetry};
pub use model::{FinalLevel, Intermediate, TransitionModel, DEFAULT_LINEWIDTH_EV};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polarization::{Amplitudes, Density, Polarization, TwoPhotonState, C64};

fn polarization_axis(p: Polarization) -> Axis {
    match p {
        Polarization::X => Axis::X,
        Polarization::Y => Axis::Y,
    }
}

/// Coefficients of a table row restricted to the `(xx, xy, yx, yy)` basis.
fn transverse_row(row: &CgRow) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, (p1, p2)) in crate::polarization::TWO_PHOTON_BASIS.iter().enumerate() {
        out[i] = row.coefficient(polarization_axis(*p1), polarization_axis(*p2));
    }
    out
}

/// Geometrical factor for raw two-photon amplitudes, without any norm check.
pub fn geometrical_factor_amplitudes(row: &CgRow, amplitudes: &Amplitudes) -> C64 {
    transverse_row(row)
        .iter()
        .zip(amplitudes.iter())
        .map(|(c, a)| a * *c)
        .sum()
}

/// `G_{μm}(ψ)` for a pure state. Mixed states are rejected because the
/// factor is an amplitude; use [`tpa_relative_rate`] for mixed inputs.
pub fn geometrical_factor(
    mu: IrrepLabel,
    m: usize,
    psi: &TwoPhotonState,
    cg: &CgTable,
) -> Result<C64> {
    let amplitudes = psi.amplitudes().ok_or(Error::MixedStateUnsupported)?;
    Ok(geometrical_factor_amplitudes(cg.row(mu, m)?, amplitudes))
}

/// One entry of [`geometrical_factors`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricalFactor {
    pub irrep: IrrepLabel,
    pub row: String,
    #[serde(with = "model::complex_pair")]
    pub value: C64,
}

/// All nine factors `G_{μm}(ψ)` in table order.
pub fn geometrical_factors(psi: &TwoPhotonState, cg: &CgTable) -> Result<Vec<GeometricalFactor>> {
    let amplitudes = psi.amplitudes().ok_or(Error::MixedStateUnsupported)?;
    Ok(cg
        .rows()
        .iter()
        .map(|row| GeometricalFactor {
            irrep: row.irrep,
            row: row.label.clone(),
            value: geometrical_factor_amplitudes(row, amplitudes),
        })
        .collect())
}

/// `Σ_m |G_{μm}|²` for a density matrix: `Σ_m c_mᵀ ρ c_m` with real `c_m`.
fn polarization_weight(mu: IrrepLabel, rho: &Density, cg: &CgTable) -> f64 {
    cg.rows_of(mu)
        .map(|row| {
            let c = transverse_row(row);
            let mut w = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    w += rho[(i, j)] * (c[i] * c[j]);
                }
            }
            w.re
        })
        .sum()
}

/// Relative threshold for an exactly vanishing detuning.
const RESONANCE_TOL: f64 = 1e-12;

fn denominator(
    level: Option<usize>,
    e_phi: f64,
    e0: f64,
    w1: f64,
    w2: f64,
    symmetry: Symmetry,
) -> Result<f64> {
    let gap = e_phi - e0;
    let scale = gap.abs().max(1.0);
    let d1 = gap - w1;
    let d2 = gap - w2;
    for (photon, d) in [(1, d1), (2, d2)] {
        if d.abs() <= RESONANCE_TOL * scale {
            return Err(Error::ResonantIntermediate {
                level,
                energy: e_phi,
                photon,
            });
        }
    }
    Ok(match symmetry {
        Symmetry::Symmetric => 1.0 / d1 + 1.0 / d2,
        Symmetry::Antisymmetric => 1.0 / d1 - 1.0 / d2,
    })
}

/// `Λ± = 1/(E_φ - E₀ - ℏω₁) ± 1/(E_φ - E₀ - ℏω₂)` in eV⁻¹; the sign is `+`
/// for symmetric and `-` for antisymmetric final irreps.
pub fn energy_denominator(
    e_phi: f64,
    e0: f64,
    w1: f64,
    w2: f64,
    symmetry: Symmetry,
) -> Result<f64> {
    denominator(None, e_phi, e0, w1, w2, symmetry)
}

/// Unit-area Gaussian standing in for the energy-conserving δ-function.
pub fn gaussian_lineshape(detuning: f64, sigma: f64) -> f64 {
    let z = detuning / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

/// Relative two-photon absorption rate (arbitrary units) for photon energies
/// `w1`, `w2` in eV:
///
/// `Σ_f Σ_m |G_{μ_f m}(ψ) Σ_φ Λ±_φ M_φ|² g(E_f - E₀ - ℏω₁ - ℏω₂; σ)`.
///
/// Rows of a multi-dimensional final irrep are distinct final states and are
/// summed in intensity. Mixed states enter through `|G|² → cᵀρc`.
pub fn tpa_relative_rate(
    psi: &TwoPhotonState,
    model: &TransitionModel,
    cg: &CgTable,
    w1: f64,
    w2: f64,
) -> Result<f64> {
    if !(w1 > 0.0 && w2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "photon energies must be positive, got {w1} and {w2}"
        )));
    }
    model.validate()?;
    let rho = psi.density();
    let mut rate = 0.0;
    for f in &model.finals {
        let symmetry = f.irrep.symmetry().expect("validated final irrep");
        let mut level_sum = C64::new(0.0, 0.0);
        for (i, phi) in model.intermediates.iter().enumerate() {
            let lambda = denominator(Some(i), phi.energy, model.ground_energy, w1, w2, symmetry)?;
            level_sum += phi.coupling * lambda;
        }
        let weight = polarization_weight(f.irrep, &rho, cg);
        let line = gaussian_lineshape(f.energy - model.ground_energy - w1 - w2, model.sigma);
        rate += level_sum.norm_sqr() * weight * line;
    }
    Ok(rate.max(0.0))
}
