//! Direct and inverse inequality checks for `|x|^{3/2}`.

use jacobi_approx::functions::lookup;
use jacobi_approx::harness::{dyadic_grid, verify_direct, verify_inverse, verify_inverse_smallp, HarnessSettings};
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let settings = HarnessSettings::default();
    let f = lookup("abs_1_5")?;
    let w = WeightParams::new(0.0, 0.0, 2.0)?;

    let direct = verify_direct(std::slice::from_ref(&f), &[w], 2, 1, 1..=32, &settings)?;
    println!("direct  k=2 r=1: fitted {:.4}, passed {}", direct.fitted_constant, direct.passed);

    for r in [0, 1] {
        let inv = verify_inverse(&f, &w, 2, r, 1, &dyadic_grid(6), 128, &settings)?;
        println!("inverse k=2 r={r}: fitted {:.4}, passed {}", inv.fitted_constant, inv.passed);
        for note in inv.notes.iter().take(2) {
            println!("  {note}");
        }
    }

    let abs = lookup("abs")?;
    let half = WeightParams::new(0.0, 0.0, 0.5)?;
    let small = verify_inverse_smallp(&abs, &half, 1, 2..=16, 1.0, &settings)?;
    println!("small-p inverse: fitted {:.4}, passed {}", small.fitted_constant, small.passed);
    Ok(())
}
