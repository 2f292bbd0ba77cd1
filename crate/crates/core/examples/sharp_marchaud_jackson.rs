//! Sharp Marchaud and Jackson inequalities at `p = 2`.

use jacobi_approx::functions::lookup;
use jacobi_approx::harness::{dyadic_grid, verify_appendix, HarnessSettings};
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let w = WeightParams::new(0.0, 0.0, 2.0)?;
    let f = lookup("abs_1_5")?;
    for r in [0, 1] {
        let rep = verify_appendix(&f, &w, 2, r, &dyadic_grid(5), 64, &HarnessSettings::default())?;
        for c in &rep.configs {
            println!("{:<45} constant {:.4} stable {}", c.label, c.fitted_constant, c.stable);
        }
    }
    Ok(())
}
