//! Independent oracles shared by the integration and acceptance tests.
//!
//! None of these reuse library internals beyond plain data types; each one
//! recomputes its quantity from scratch by a different route.
#![allow(dead_code)]

use bellscope::polarization::{Amplitudes, C64};
use bellscope::selection::{Axis, CgTable, IrrepLabel, Symmetry, TransitionModel};
use nalgebra::{Matrix3, SMatrix};

pub type M9 = SMatrix<f64, 9, 9>;

/// The 24 proper rotations of the cube: signed permutation matrices with
/// determinant +1.
pub fn cubic_rotations() -> Vec<Matrix3<f64>> {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = Vec::new();
    for p in perms {
        for signs in 0..8 {
            let mut r = Matrix3::zeros();
            for (row, &col) in p.iter().enumerate() {
                r[(row, col)] = if signs >> row & 1 == 1 { -1.0 } else { 1.0 };
            }
            if r.determinant() > 0.0 {
                out.push(r);
            }
        }
    }
    assert_eq!(out.len(), 24);
    out
}

/// Character of `r` in the given irrep of O, with the class read off the
/// trace: 3 identity, 0 threefold, 1 fourfold, -1 twofold (diagonal for
/// C4², off-diagonal for C2').
pub fn character(irrep: IrrepLabel, r: &Matrix3<f64>) -> f64 {
    let tr = r.trace().round() as i32;
    let class = match tr {
        3 => 0,
        0 => 1,
        1 => 3,
        -1 if (0..3).all(|i| r[(i, i)] != 0.0) => 2,
        -1 => 4,
        other => panic!("unexpected trace {other}"),
    };
    let table: [f64; 5] = match irrep {
        IrrepLabel::G1Plus => [1.0, 1.0, 1.0, 1.0, 1.0],
        IrrepLabel::G3Plus => [2.0, -1.0, 2.0, 0.0, 0.0],
        IrrepLabel::G4Plus | IrrepLabel::G4Minus => [3.0, 0.0, -1.0, 1.0, -1.0],
        IrrepLabel::G5Plus => [3.0, 0.0, -1.0, -1.0, 1.0],
    };
    table[class]
}

/// Projector onto the `irrep` component of the vector ⊗ vector space, with
/// index `3l + l'`.
pub fn projector(irrep: IrrepLabel) -> M9 {
    let d = irrep.dimension() as f64;
    let mut p = M9::zeros();
    for r in cubic_rotations() {
        let chi = character(irrep, &r);
        let rr = M9::from_fn(|i, j| r[(i / 3, j / 3)] * r[(i % 3, j % 3)]);
        p += rr * chi;
    }
    p * (d / 24.0)
}

/// Spectral-norm distance between the projector onto the CG rows of `irrep`
/// and the group-theoretic projector.
pub fn subspace_distance(cg: &CgTable, irrep: IrrepLabel) -> f64 {
    let mut q = M9::zeros();
    for row in cg.rows_of(irrep) {
        let v = nalgebra::SVector::<f64, 9>::from_row_slice(&row.coefficients);
        q += v * v.transpose();
    }
    (q - projector(irrep))
        .svd(false, false)
        .singular_values
        .max()
}

fn axis(p: usize) -> Axis {
    [Axis::X, Axis::Y][p]
}

/// Unfactorized rate: every sum written out as a nested loop, the
/// polarization contraction inside the intermediate sum.
pub fn brute_force_rate(
    psi: &Amplitudes,
    model: &TransitionModel,
    cg: &CgTable,
    w1: f64,
    w2: f64,
) -> f64 {
    let mut rate = 0.0;
    for f in &model.finals {
        let sign = match f.irrep.symmetry().unwrap() {
            Symmetry::Symmetric => 1.0,
            Symmetry::Antisymmetric => -1.0,
        };
        let sigma = model.sigma;
        let detuning = f.energy - model.ground_energy - w1 - w2;
        let line = (-(detuning * detuning) / (2.0 * sigma * sigma)).exp()
            / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        for row in cg.rows_of(f.irrep) {
            let mut amp = C64::new(0.0, 0.0);
            for phi in &model.intermediates {
                let a = phi.energy - model.ground_energy - w1;
                let b = phi.energy - model.ground_energy - w2;
                for p1 in 0..2 {
                    for p2 in 0..2 {
                        amp += psi[2 * p1 + p2]
                            * row.coefficient(axis(p1), axis(p2))
                            * phi.coupling
                            * (1.0 / a + sign / b);
                    }
                }
            }
            rate += amp.norm_sqr() * line;
        }
    }
    rate
}

/// α from CGS inputs: c in cm/s, β in cm/erg·s (cm/W × 10⁻⁷), ℏω in erg,
/// V in cm³. Shares no constants with the library.
pub fn cgs_alpha(photon_ev: f64, n: f64, beta_cm_per_w: f64, volume_cm3: f64) -> f64 {
    let c = 2.99792458e10;
    let erg_per_ev = 1.602176634e-12;
    let beta_cgs = beta_cm_per_w * 1e-7;
    c * c * beta_cgs * photon_ev * erg_per_ev / (n.powi(4) * volume_cm3)
}

/// ω in rad/s from ℏω in eV, via ℏ in eV·s.
pub fn angular_frequency(photon_ev: f64) -> f64 {
    photon_ev / 6.582119569e-16
}

/// Kronecker product of two 2×2 complex matrices, written out elementwise.
pub fn kron2(a: &nalgebra::Matrix2<C64>, b: &nalgebra::Matrix2<C64>) -> nalgebra::Matrix4<C64> {
    let mut out = nalgebra::Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Binomial standard deviation of a frequency estimate.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Random two-intermediate, two-final model with photon energies, kept well
/// away from intermediate resonances.
pub fn random_model<R: rand::Rng>(rng: &mut R) -> (TransitionModel, f64, f64) {
    use bellscope::selection::{FinalLevel, Intermediate};
    let finals_pool = [
        IrrepLabel::G1Plus,
        IrrepLabel::G3Plus,
        IrrepLabel::G4Plus,
        IrrepLabel::G5Plus,
    ];
    let w1 = rng.random_range(1.5..3.0);
    let w2 = rng.random_range(1.5..3.0);
    let intermediates = (0..2)
        .map(|_| Intermediate {
            energy: rng.random_range(3.2..5.0),
            coupling: C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        })
        .collect();
    let sigma = rng.random_range(1e-3..5e-3);
    let finals = (0..2)
        .map(|_| FinalLevel {
            irrep: finals_pool[rng.random_range(0..4)],
            energy: w1 + w2 + rng.random_range(-2.0 * sigma..2.0 * sigma),
        })
        .collect();
    let model = TransitionModel::new(0.0, intermediates, finals, sigma).unwrap();
    (model, w1, w2)
}

/// Random normalized amplitudes.
pub fn random_amplitudes<R: rand::Rng>(rng: &mut R) -> Amplitudes {
    let a = Amplitudes::from_fn(|_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    a / C64::from(a.norm())
}
