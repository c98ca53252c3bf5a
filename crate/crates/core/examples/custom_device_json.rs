//! Devices are plain data: build one in JSON, load it, and compare it with
//! the built-in cascade.
//!
//! Run: `cargo run --example custom_device_json`

use bellscope::cli::round_dimensionless;
use bellscope::device::{confusion_matrix, DeviceSpec};

const DEVICE: &str = r#"{
  "schema": 1,
  "stages": [
    {"kind": "crystal", "detector": 1, "eta": 0.95, "absorbs": "PhiPlus", "announces": "PhiPlus"},
    {"kind": "retarder_both"},
    {"kind": "crystal", "detector": 2, "eta": 0.9, "absorbs": "PhiPlus", "announces": "PhiMinus"},
    {"kind": "rotator", "photon": 1, "angle": 1.5707963267948966},
    {"kind": "crystal", "detector": 3, "eta": 0.85, "absorbs": "PhiPlus", "announces": "PsiMinus"}
  ],
  "terminal": {"photodetector": 4, "announces": "PsiPlus"}
}"#;

fn main() -> bellscope::Result<()> {
    let device: DeviceSpec = serde_json::from_str(DEVICE)?;
    let matrix = confusion_matrix(&device)?;
    println!(
        "outcomes: {:?}\n",
        device
            .outcomes()
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
    );
    print!("{}", matrix.map_entries(round_dimensionless).to_csv());
    println!("\nround trip:\n{}", serde_json::to_string_pretty(&device)?);
    Ok(())
}
