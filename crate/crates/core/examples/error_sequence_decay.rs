//! Error ladders and a fitted decay rate with its modulus cross-check.

use jacobi_approx::functions::lookup;
use jacobi_approx::harness::{compute_error_sequence, dyadic_grid, fit_decay, verify_decay, HarnessSettings};
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let abs = lookup("abs")?;
    let sup = WeightParams::new(0.0, 0.0, f64::INFINITY)?;
    let seq = compute_error_sequence(&abs, &sup, 1..=64, (-1.0, 1.0))?;
    for e in seq.entries.iter().filter(|e| e.n.is_power_of_two()) {
        println!("E_{:<3} = {:.8}", e.n, e.error);
    }
    let profile = fit_decay(&seq, 8)?;
    let gamma = profile.gamma.expect("fitted");
    println!("fitted γ = {gamma:.4}, scale = {:.4}", profile.scale);
    let rep = verify_decay(&abs, &sup, 2, 0, &profile, &dyadic_grid(6), &HarnessSettings::default())?;
    println!("ω_2(|x|, t) ≤ C t^γ with C = {:.4} (stable: {})", rep.fitted_constant, rep.all_stable());
    Ok(())
}
