//! Gauss–Jacobi rules and adaptive weighted norms.

use std::f64::consts::PI;

use jacobi_approx::quadrature::{gauss_jacobi_rule, jacobi_moments, weighted_norm, NormOptions};
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let rule = gauss_jacobi_rule(8, 2.5, 0.3)?;
    let moments = jacobi_moments(16, 2.5, 0.3);
    let worst = (0..16)
        .map(|j| {
            let q = rule.apply(|x| x.powi(j as i32));
            ((q - moments[j]) / moments[j]).abs()
        })
        .fold(0.0, f64::max);
    println!("8-point rule, (a,b) = (2.5, 0.3): worst relative moment error up to degree 15: {worst:e}");

    let cheb = gauss_jacobi_rule(4, -0.5, -0.5)?;
    println!("∫(1-x²)^(-1/2) dx = {:.15} (π = {PI:.15})", cheb.apply(|_| 1.0));

    for p in [0.5, 1.0, 2.0, f64::INFINITY] {
        let w = WeightParams::new(0.5, 0.0, p)?;
        let opts = NormOptions { breakpoints: vec![0.0], ..NormOptions::with_tol(1e-12) };
        let n = weighted_norm(&|x: f64| x.abs(), (-1.0, 1.0), &w, &opts);
        println!("‖w_(1/2,0) |x|‖_{p} = {:.12}", n.value);
    }
    Ok(())
}
