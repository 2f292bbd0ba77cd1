//! `E_n(f)` in every regime: projection, Remez, IRLS and the quasi-norm search.

use jacobi_approx::bestapprox::{best_approx, local_best_approx};
use jacobi_approx::functions::lookup;
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let sq = lookup("mono2")?;
    let abs = lookup("abs")?;
    for (f, p) in [(&sq, 2.0), (&sq, f64::INFINITY), (&abs, 1.0), (&abs, 0.5)] {
        let w = WeightParams::new(0.0, 0.0, p)?;
        for n in [1, 2, 8] {
            let res = best_approx(f, n, (-1.0, 1.0), &w)?;
            println!("E_{n}({}) p = {p:<4} = {:.10}  [{}]", f.name(), res.error, res.certificate);
        }
    }
    let w = WeightParams::new(1.0, 1.0, f64::INFINITY)?;
    let local = local_best_approx(&abs, 2, 0.5, 1.0, &w)?;
    println!("E_2(|x|, [0.5 ± φ(0.5)/2]) = {:.3e}", local.error);
    Ok(())
}
