//! Absolute absorption rate and cavity requirements for a CuCl-filled
//! microcavity.
//!
//! Run: `cargo run --example cavity_feasibility`

use bellscope::physical::{absorption_efficiency, required_q, tpa_rate, CavityParams, Lifetime};

fn main() -> bellscope::Result<()> {
    let params = CavityParams::cucl();
    let rate = tpa_rate(&params);
    let need = required_q(&params);
    println!(
        "ℏω = {} eV, n = {}, β = {} cm/W, V = {} µm³",
        params.photon_energy.ev(),
        params.refractive_index,
        params.tpa_coefficient.cm_per_w(),
        params.mode_volume.cubic_microns()
    );
    println!("single-photon field   {:.3e} V/m", rate.field);
    println!("TPA rate α            {:.3e} 1/s", rate.rate);
    println!(
        "shortest lifetime 1/α {:.3} ps",
        need.min_lifetime.picoseconds()
    );
    println!("required Q            {:.0}", need.q);
    println!("\ncavity lifetime -> absorption efficiency η = α / (α + 1/τ)");
    for ps in [1.0, 5.0, 17.66, 50.0, 200.0] {
        let eta = absorption_efficiency(
            &params
                .clone()
                .with_lifetime(Lifetime::from_picoseconds(ps))?,
        )?;
        println!("  τ = {ps:>6} ps  η = {eta:.3}");
    }
    Ok(())
}
