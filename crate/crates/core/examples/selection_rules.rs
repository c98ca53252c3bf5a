//! Geometrical factors of the four Bell states and the interference that
//! keeps all but Φ+ out of the totally symmetric final state.
//!
//! Run: `cargo run --example selection_rules`

use bellscope::polarization::{bell_state, BellLabel};
use bellscope::selection::{build_cg_table, geometrical_factors};

fn main() -> bellscope::Result<()> {
    let cg = build_cg_table();
    for label in BellLabel::ALL {
        println!("{label}");
        for f in geometrical_factors(&bell_state(label), &cg)? {
            if f.value.norm() > 1e-12 {
                println!(
                    "  {:<4} row {:<3} G = {:+.6}",
                    f.irrep.name(),
                    f.row,
                    f.value.re
                );
            }
        }
    }
    println!("\nOnly Φ+ couples to G1+; the other three cancel by interference.");
    Ok(())
}
