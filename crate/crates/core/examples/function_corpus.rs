//! The built-in test functions, their derivatives and class certificates.

use jacobi_approx::functions::{certify_class, corpus_catalog, lookup};
use jacobi_approx::{Result, WeightParams};

fn main() -> Result<()> {
    let sup = WeightParams::new(0.0, 0.0, f64::INFINITY)?;
    for f in corpus_catalog() {
        let r = f.max_derivative_order().min(1);
        println!(
            "{:<14} max order {}  f(0.3) = {:>10.6}  f^({r})(0.3) = {:>10.6}  B^{r}_∞ certified: {}",
            f.name(),
            f.max_derivative_order(),
            f.eval(0, 0.3)?,
            f.eval(r, 0.3)?,
            certify_class(&f, r, &sup)
        );
    }
    let e = lookup("endpoint_0.75")?;
    let l1 = WeightParams::new(0.0, 0.0, 1.0)?;
    println!("(1-x)^(3/4): f' in L_1: {}, φ f' in L_∞: {}", certify_class(&e, 1, &l1), certify_class(&e, 1, &sup));
    Ok(())
}
