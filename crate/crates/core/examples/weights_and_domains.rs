//! Jacobi weights, the shifted weight `W̄_δ`, and the domains `Dom_δ`.

use jacobi_approx::weights::{dom_interval, eval_hatted_weight, phi, solve_y, HattedWeightParams};
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let w = WeightParams::new(0.5, 1.0, 2.0)?;
    for x in [-0.9, 0.0, 0.5] {
        println!("w_(1/2,1)({x}) = {:.6}   φ({x}) = {:.6}", w.eval(x)?, phi(x));
    }

    // α ≤ -1/p is outside J_p
    match WeightParams::new(-3.0, 0.0, 0.5) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }

    for delta in [0.1, 0.5, 1.0, 2.0] {
        let dom = dom_interval(delta);
        let hat = HattedWeightParams::new(1.0, 0.5, delta)?;
        println!(
            "Dom_{delta} = [{:.6}, {:.6}]   W̄(0) = {:.6}   y(0) = {:.6}",
            dom.lo,
            dom.hi,
            eval_hatted_weight(&hat, 0.0)?,
            solve_y(0.0, delta)?
        );
    }
    Ok(())
}
