//! Replacing the last crystal with a plain photodetector makes every
//! crystal failure a wrong answer instead of a missing one.
//!
//! Run: `cargo run --example shortcut_error`

use bellscope::device::{confusion_matrix, shortcut_device, standard_device};
use bellscope::polarization::BellLabel;

fn main() -> bellscope::Result<()> {
    println!("{:>5} {:>18} {:>18}", "η", "P(false Ψ+)", "P(no-click)");
    for eta in [0.25, 0.5, 0.75, 0.9, 1.0] {
        let shortcut = confusion_matrix(&shortcut_device(eta)?)?;
        let standard = confusion_matrix(&standard_device(eta)?)?;
        let wrong = shortcut.get(BellLabel::PhiPlus, "d4").unwrap();
        let missing = standard.get(BellLabel::PhiPlus, "no-click").unwrap();
        println!("{eta:>5} {wrong:>18.6} {missing:>18.6}");
    }
    println!("\nThe shortcut reports Ψ+ wrongly with probability 1 - η;");
    println!("the full cascade loses the same events to no-click instead.");
    Ok(())
}
