//! Seeded Monte Carlo sampling against exact probabilities.
//!
//! Run: `cargo run --release --example monte_carlo`

use bellscope::device::{propagate_exact, propagate_monte_carlo, standard_device};
use bellscope::polarization::{bell_state, BellLabel};

fn main() -> bellscope::Result<()> {
    let device = standard_device(0.7)?;
    let trials = 100_000;
    for label in BellLabel::ALL {
        let input = bell_state(label);
        let exact = propagate_exact(&device, &input)?;
        let sampled = propagate_monte_carlo(&device, &input, trials, 2024)?;
        println!("{label}");
        for ((outcome, p), f) in exact
            .outcomes
            .iter()
            .zip(&exact.probabilities)
            .zip(sampled.frequencies())
        {
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            let z = if sigma > 0.0 { (f - p) / sigma } else { 0.0 };
            println!("  {outcome:<9} exact {p:.4}  sampled {f:.4}  ({z:+.2} σ)");
        }
    }
    Ok(())
}
