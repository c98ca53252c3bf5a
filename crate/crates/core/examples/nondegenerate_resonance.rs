//! Two-photon resonance with non-degenerate photons, and the relative
//! absorption rate around a biexciton-like final level.
//!
//! Run: `cargo run --example nondegenerate_resonance`

use bellscope::physical::{check_resonance, ResonanceCheck};
use bellscope::polarization::{bell_state, BellLabel};
use bellscope::selection::{
    build_cg_table, tpa_relative_rate, FinalLevel, Intermediate, IrrepLabel, TransitionModel,
};
use num_complex::Complex64;

fn main() -> bellscope::Result<()> {
    let transition = 6.372;
    for (w1, w2) in [(3.186, 3.186), (3.0, 3.372), (3.0, 3.186)] {
        let r = check_resonance(&ResonanceCheck::new(w1, w2, transition, 1e-3)?);
        println!(
            "ℏω1 = {w1}, ℏω2 = {w2}: pair resonant {}, single degenerate source resonant {}",
            r.resonant_pair, r.degenerate_single_source_resonant
        );
    }

    let model = TransitionModel::new(
        0.0,
        vec![Intermediate {
            energy: 3.203,
            coupling: Complex64::new(1.0, 0.0),
        }],
        vec![FinalLevel {
            irrep: IrrepLabel::G1Plus,
            energy: transition,
        }],
        1e-3,
    )?;
    let cg = build_cg_table();
    println!("\nrelative rate into G1+ while detuning photon 2 (photon 1 at 3.000 eV)");
    for step in -3..=3 {
        let w2 = 3.372 + 0.5e-3 * step as f64;
        let rates: Vec<String> = BellLabel::ALL
            .iter()
            .map(|&l| {
                format!(
                    "{:.3e}",
                    tpa_relative_rate(&bell_state(l), &model, &cg, 3.0, w2).unwrap()
                )
            })
            .collect();
        println!(
            "  ℏω2 = {w2:.4} eV  Φ+ {}  Φ- {}  Ψ+ {}  Ψ- {}",
            rates[0], rates[1], rates[2], rates[3]
        );
    }
    Ok(())
}
