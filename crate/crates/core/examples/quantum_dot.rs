//! The quantum-dot variant: one absorber visited four times, with the
//! detection time telling the Bell states apart.
//!
//! Run: `cargo run --example quantum_dot -- 0.9`

use bellscope::cli::round_dimensionless;
use bellscope::qdot::four_pass_protocol;

fn main() -> bellscope::Result<()> {
    let eta: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("efficiency must be a number"))
        .unwrap_or(1.0);
    let (schedule, matrix) = four_pass_protocol(eta)?;
    println!("schedule:");
    for element in &schedule.elements {
        println!("  {element:?}");
    }
    println!(
        "\nannounced state per pass: {:?}\n",
        schedule.announcements()?
    );
    print!("{}", matrix.map_entries(round_dimensionless).to_csv());
    Ok(())
}
