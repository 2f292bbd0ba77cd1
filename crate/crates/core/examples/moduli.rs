//! Weighted moduli `ω^φ_{k,r}` and their averaged form `ω*`.

use jacobi_approx::functions::lookup;
use jacobi_approx::moduli::{averaged_modulus, weighted_modulus, ModulusQuery};
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let sq = lookup("mono2")?;
    let sup = WeightParams::new(0.0, 0.0, f64::INFINITY)?;
    for t in [0.1, 0.25, 0.5] {
        let m = weighted_modulus(&ModulusQuery::new(sq.clone(), 2, 0, t, sup))?;
        println!("ω_2(x², {t})_∞ = {:.10}   (2t² = {})", m.value, 2.0 * t * t);
    }

    let f = lookup("abs_1_5")?;
    let w = WeightParams::new(0.5, 0.0, 2.0)?;
    for t in [0.5, 0.25, 0.125, 0.0625] {
        let q = ModulusQuery::new(f.clone(), 2, 1, t, w);
        let sup_form = weighted_modulus(&q)?;
        let avg = averaged_modulus(&q)?;
        println!("t = {t:<7} ω_{{2,1}} = {:.6e}   ω* = {:.6e}", sup_form.value, avg.value);
    }
    Ok(())
}
