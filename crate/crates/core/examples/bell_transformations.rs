//! How retarders and rotators permute the Bell states.
//!
//! Run: `cargo run --example bell_transformations`

use std::f64::consts::FRAC_PI_2;

use bellscope::polarization::{
    bell_state, overlap_probability, quarter_wave_both, rotate_one, BellLabel, Photon,
    TwoPhotonState,
};

fn best_match(state: &TwoPhotonState) -> (BellLabel, f64) {
    BellLabel::ALL
        .iter()
        .map(|&l| (l, overlap_probability(state, &bell_state(l))))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

fn main() {
    println!(
        "{:<10} {:>22} {:>22}",
        "input", "pi/2 retarders", "pi/2 rotator, photon 1"
    );
    for label in BellLabel::ALL {
        let psi = bell_state(label);
        let (r, pr) = best_match(&quarter_wave_both(&psi));
        let (q, pq) = best_match(&rotate_one(&psi, Photon::First, FRAC_PI_2));
        println!(
            "{label:<10} {:>14} ({pr:.3}) {:>14} ({pq:.3})",
            r.name(),
            q.name()
        );
    }
    println!("\nThe number in parentheses is the squared overlap, so global phases drop out.");
}
