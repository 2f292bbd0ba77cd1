//! Whitney-type estimates over seeded local samples.

use jacobi_approx::functions::lookup;
use jacobi_approx::harness::{verify_whitney, HarnessSettings};
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let settings = HarnessSettings::default();
    let specs = [lookup("abs")?, lookup("runge")?];
    let params = [WeightParams::new(0.0, 0.0, 2.0)?];
    let rep = verify_whitney(&specs, &params, 2, 0, 1.0, 16, &settings)?;
    for theorem in ["whitney-local", "whitney-global", "whitney-endpoint"] {
        println!("{theorem:<17} max ratio {:.4}", rep.max_ratio_where(|c| c.theorem == theorem));
    }
    println!("passed: {}", rep.passed);

    let deriv = verify_whitney(&[lookup("abs_1_5")?], &params, 2, 1, 1.0, 1, &settings)?;
    println!("whitney-derivative max ratio {:.4}", deriv.fitted_constant);
    Ok(())
}
