//! Weighted Bernstein inequality for Chebyshev and random polynomials.

use jacobi_approx::bestapprox::{bernstein_ratio, Polynomial};
use jacobi_approx::harness::{verify_bernstein, HarnessSettings};
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let sup = WeightParams::new(0.0, 0.0, f64::INFINITY)?;
    for m in [1, 5, 20, 40] {
        let ratio = bernstein_ratio(&Polynomial::chebyshev_t(m), m + 1, 1, &sup)?;
        println!("‖φ T_{m}'‖ / ((m+1)‖T_{m}‖) = {ratio:.12}   m/(m+1) = {:.12}", m as f64 / (m + 1) as f64);
    }
    let w = WeightParams::new(1.0, 1.0, 2.0)?;
    let rep = verify_bernstein(&[4, 8, 16], 2, &w, 32, &HarnessSettings::default())?;
    println!("random polynomials, r = 2, α = β = 1, p = 2: max ratio {:.4}", rep.fitted_constant);
    Ok(())
}
