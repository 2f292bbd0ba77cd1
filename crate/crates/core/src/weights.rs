//! Jacobi weights, the shifted ("hatted") weights used inside the moduli,
//! the stencil domains `Dom_δ`, and the change of variable `y(x)` defined by
//! `y + δ φ(y) / 2 = x`.

use crate::error::{Error, Result};

/// Rounding allowance for base factors that should be exactly zero at the
/// ends of a stencil domain.
const BASE_CLAMP: f64 = 1e-14;

/// `φ(x) = sqrt(1 - x²)`, clamped to zero outside `[-1, 1]`.
#[inline]
pub fn phi(x: f64) -> f64 {
    let s = (1.0 - x) * (1.0 + x);
    if s <= 0.0 {
        0.0
    } else {
        s.sqrt()
    }
}

/// Exponents of the Jacobi weight `(1-x)^α (1+x)^β` together with the
/// integrability index `p ∈ (0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    alpha: f64,
    beta: f64,
    p: f64,
}

impl WeightParams {
    /// Builds a parameter set, rejecting exponents outside `J_p`:
    /// `(-1/p, ∞)` for finite `p`, `[0, ∞)` for `p = ∞`.
    pub fn new(alpha: f64, beta: f64, p: f64) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::Admissibility(format!("p must lie in (0, ∞], got {p}")));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Admissibility("exponents must be finite".into()));
        }
        if p.is_infinite() {
            if alpha < 0.0 || beta < 0.0 {
                return Err(Error::Admissibility(format!(
                    "p = ∞ requires α ≥ 0 and β ≥ 0, got α = {alpha}, β = {beta}"
                )));
            }
        } else {
            let bound = -1.0 / p;
            if alpha <= bound {
                return Err(Error::Admissibility(format!("α = {alpha} must exceed -1/p = {bound}")));
            }
            if beta <= bound {
                return Err(Error::Admissibility(format!("β = {beta} must exceed -1/p = {bound}")));
            }
        }
        Ok(Self { alpha, beta, p })
    }

    /// Unweighted parameters for the given `p`.
    pub fn unweighted(p: f64) -> Result<Self> {
        Self::new(0.0, 0.0, p)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn is_sup(&self) -> bool {
        self.p.is_infinite()
    }

    /// Same exponents with a different `p`, re-validated against `J_p`.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, p)
    }

    /// Parameters for the weight `w_{α,β} φ^r = w_{α + r/2, β + r/2}`.
    pub fn with_phi_power(&self, r: usize) -> Result<Self> {
        let half = r as f64 / 2.0;
        Self::new(self.alpha + half, self.beta + half, self.p)
    }

    /// Exponents `(αp, βp)` of the integrand weight `w^p` for finite `p`.
    pub fn integrand_exponents(&self) -> (f64, f64) {
        (self.alpha * self.p, self.beta * self.p)
    }

    /// `r/2 + α ≥ 0` and `r/2 + β ≥ 0`.
    pub fn shifted_nonnegative(&self, r: usize) -> bool {
        let half = r as f64 / 2.0;
        half + self.alpha >= 0.0 && half + self.beta >= 0.0
    }

    /// Evaluates `w_{α,β}(x)`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        eval_weight(self, x)
    }
}

/// `(1-x)^α (1+x)^β`. Endpoints are accepted only where the corresponding
/// exponent is nonnegative.
pub fn eval_weight(params: &WeightParams, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} lies outside [-1, 1]")));
    }
    if x == 1.0 && params.alpha < 0.0 {
        return Err(Error::Domain(format!("w is singular at x = 1 (α = {})", params.alpha)));
    }
    if x == -1.0 && params.beta < 0.0 {
        return Err(Error::Domain(format!("w is singular at x = -1 (β = {})", params.beta)));
    }
    Ok(jacobi_weight(params.alpha, params.beta, x))
}

/// Unchecked `(1-x)^a (1+x)^b` with the convention `0^0 = 1`.
#[inline]
pub(crate) fn jacobi_weight(a: f64, b: f64, x: f64) -> f64 {
    pow0(1.0 - x, a) * pow0(1.0 + x, b)
}

#[inline]
fn pow0(base: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        base.powf(e)
    }
}

/// Exponents and step of `W̄_δ^{ξ,ζ}(x) = (1-x-δφ(x)/2)^ξ (1+x-δφ(x)/2)^ζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HattedWeightParams {
    pub xi: f64,
    pub zeta: f64,
    pub delta: f64,
}

impl HattedWeightParams {
    pub fn new(xi: f64, zeta: f64, delta: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&delta) {
            return Err(Error::Domain(format!("δ = {delta} must lie in [0, 2]")));
        }
        Ok(Self { xi, zeta, delta })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        eval_hatted_weight(self, x)
    }
}

/// Evaluates the shifted weight. Base factors within `1e-14` below zero are
/// treated as zero.
pub fn eval_hatted_weight(params: &HattedWeightParams, x: f64) -> Result<f64> {
    let half_step = params.delta * phi(x) / 2.0;
    let right = hatted_factor(1.0 - x - half_step, params.xi, x)?;
    let left = hatted_factor(1.0 + x - half_step, params.zeta, x)?;
    Ok(right * left)
}

fn hatted_factor(base: f64, e: f64, x: f64) -> Result<f64> {
    let base = if (-BASE_CLAMP..0.0).contains(&base) { 0.0 } else { base };
    if base < 0.0 {
        return Err(Error::Domain(format!("negative base factor {base:e} at x = {x}; x is outside Dom_δ")));
    }
    if base == 0.0 && e < 0.0 {
        return Err(Error::Domain(format!("zero base factor with negative exponent {e} at x = {x}")));
    }
    Ok(pow0(base, e))
}

/// Hot-loop variant of [`eval_hatted_weight`]: out-of-domain points map to
/// zero and a zero base with a negative exponent maps to `+∞`.
#[inline]
pub(crate) fn hatted_weight_unchecked(xi: f64, zeta: f64, delta: f64, x: f64) -> f64 {
    let half_step = delta * phi(x) / 2.0;
    let r = (1.0 - x - half_step).max(0.0);
    let l = (1.0 + x - half_step).max(0.0);
    pow0(r, xi) * pow0(l, zeta)
}

/// `μ(δ) = 2δ² / (4 + δ²)`.
pub fn mu(delta: f64) -> f64 {
    2.0 * delta * delta / (4.0 + delta * delta)
}

/// The set `Dom_δ = [-1 + μ(δ), 1 - μ(δ)]`, empty for `δ > 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomInterval {
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
}

impl DomInterval {
    pub fn contains(&self, x: f64) -> bool {
        !self.empty && x >= self.lo && x <= self.hi
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &DomInterval) -> bool {
        self.empty || (!other.empty && other.lo <= self.lo && self.hi <= other.hi)
    }

    pub fn len(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.hi - self.lo
        }
    }
}

pub fn dom_interval(delta: f64) -> DomInterval {
    if delta > 2.0 {
        return DomInterval { lo: 0.0, hi: 0.0, empty: true };
    }
    let m = mu(delta);
    DomInterval { lo: -1.0 + m, hi: 1.0 - m, empty: false }
}

/// Root of `y + c φ(y) = x` on the branch `x - y ≥ 0` when `c ≥ 0`
/// (or `y - x ≥ 0` when `c < 0`), for `|x| ≤ 1`.
pub(crate) fn solve_shift_equation(x: f64, c: f64) -> f64 {
    let c2 = c * c;
    let disc = (1.0 + c2 - x * x).max(0.0).sqrt();
    let mut y = (x - c * disc) / (1.0 + c2);
    // one Newton step on the residual keeps |residual| at rounding level
    let res = y + c * phi(y) - x;
    if res.abs() > 1e-13 {
        let py = phi(y);
        if py > 0.0 {
            let d = 1.0 - c * y / py;
            if d != 0.0 {
                y -= res / d;
            }
        }
    }
    y.clamp(-1.0, 1.0)
}

/// The unique `y(x)` with `y + δ φ(y) / 2 = x` and `y ≤ x`.
pub fn solve_y(x: f64, delta: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} lies outside [-1, 1]")));
    }
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(Error::Domain(format!("δ = {delta} must lie in (0, 2]")));
    }
    let y = solve_shift_equation(x, delta / 2.0);
    let residual = (y + delta * phi(y) / 2.0 - x).abs();
    if residual > 1e-12 {
        return Err(Error::Numerical(format!("y(x) residual {residual:e} at x = {x}, δ = {delta}")));
    }
    Ok(y)
}

/// `y_λ(x) = y(x) + λ φ(y(x))` for `|λ| ≤ δ/2` and `x ∈ [-1 + 2μ(δ), 1]`.
pub fn y_shifted(x: f64, delta: f64, lambda: f64) -> Result<f64> {
    if lambda.abs() > delta / 2.0 + 1e-15 {
        return Err(Error::Precondition(format!("|λ| = {} exceeds δ/2 = {}", lambda.abs(), delta / 2.0)));
    }
    let lower = -1.0 + 2.0 * mu(delta);
    if x < lower - 1e-15 || x > 1.0 {
        return Err(Error::Precondition(format!("x = {x} lies outside [-1 + 2μ(δ), 1] = [{lower}, 1]")));
    }
    let y = solve_y(x, delta)?;
    Ok(y + lambda * phi(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weight_values() {
        let w = WeightParams::new(0.0, 0.0, 2.0).unwrap();
        assert_eq!(w.eval(0.37).unwrap(), 1.0);
        let w = WeightParams::new(1.0, 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(w.eval(0.5).unwrap(), 0.75, epsilon = 1e-15);
        let w = WeightParams::new(1.0, 0.5, 2.0).unwrap();
        assert_abs_diff_eq!(w.eval(0.0).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn weight_endpoint_errors() {
        let w = WeightParams::new(-0.25, 0.0, 2.0).unwrap();
        assert!(matches!(w.eval(1.0), Err(Error::Domain(_))));
        assert!(w.eval(-1.0).is_ok());
        let w = WeightParams::new(0.0, -0.25, 2.0).unwrap();
        assert!(matches!(w.eval(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn admissibility() {
        assert!(WeightParams::new(-0.4, 0.0, 2.0).is_ok());
        assert!(WeightParams::new(-0.5, 0.0, 2.0).is_err());
        assert!(WeightParams::new(-3.0, 0.0, 0.5).is_err());
        assert!(WeightParams::new(-1.9, 0.0, 0.5).is_ok());
        assert!(WeightParams::new(0.0, -0.1, f64::INFINITY).is_err());
        assert!(WeightParams::new(0.0, 0.0, f64::INFINITY).is_ok());
        assert!(WeightParams::new(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn hatted_weight_values() {
        let hw = HattedWeightParams::new(1.0, 0.0, 0.0).unwrap();
        for &x in &[-1.0, -0.3, 0.0, 0.8, 1.0] {
            assert_abs_diff_eq!(hw.eval(x).unwrap(), 1.0 - x, epsilon = 1e-15);
        }
        let hw = HattedWeightParams::new(1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(hw.eval(0.0).unwrap(), 0.25, epsilon = 1e-15);
        let hw = HattedWeightParams::new(0.0, 0.0, 1.5).unwrap();
        assert_eq!(hw.eval(0.1).unwrap(), 1.0);
    }

    #[test]
    fn hatted_weight_domain_errors() {
        // x = 0.9 is outside Dom_1 = [-0.6, 0.6]
        let hw = HattedWeightParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(hw.eval(0.9), Err(Error::Domain(_))));
        // zero base at the edge of Dom_1 with a negative exponent
        let hw = HattedWeightParams::new(-0.5, 0.0, 1.0).unwrap();
        assert!(matches!(hw.eval(0.6), Err(Error::Domain(_))));
        let hw = HattedWeightParams::new(0.5, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(hw.eval(0.6).unwrap(), 0.0, epsilon = 1e-7);
    }

    #[test]
    fn mu_values() {
        assert_eq!(mu(0.0), 0.0);
        assert_abs_diff_eq!(mu(2.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mu(2f64.sqrt()), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn dom_values() {
        let d = dom_interval(1.0);
        assert!(!d.empty);
        assert_abs_diff_eq!(d.lo, -0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(d.hi, 0.6, epsilon = 1e-15);
        let d = dom_interval(2.0);
        assert_abs_diff_eq!(d.lo, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.hi, 0.0, epsilon = 1e-15);
        assert!(dom_interval(3.0).empty);
    }

    #[test]
    fn dom_is_where_the_stencil_fits() {
        for &delta in &[0.1, 0.7, 1.3, 2.0] {
            let d = dom_interval(delta);
            for &x in &[d.lo, d.hi] {
                assert_abs_diff_eq!(1.0 - delta * phi(x) / 2.0, x.abs(), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn solve_y_values() {
        for &delta in &[0.1, 0.5, 1.0, 2.0] {
            assert_abs_diff_eq!(solve_y(1.0, delta).unwrap(), 1.0 - mu(delta), epsilon = 1e-14);
        }
        for &x in &[-0.9, -0.2, 0.0, 0.5, 0.99] {
            assert_abs_diff_eq!(solve_y(x, 1e-8).unwrap(), x, epsilon = 1e-7);
        }
        assert_abs_diff_eq!(solve_y(0.0, 2.0).unwrap(), -(2f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert!(solve_y(1.5, 1.0).is_err());
        assert!(solve_y(0.0, 0.0).is_err());
    }

    #[test]
    fn y_shifted_values() {
        for &delta in &[0.3, 1.0, 2.0] {
            let x = 0.4_f64.max(-1.0 + 2.0 * mu(delta));
            assert_eq!(y_shifted(x, delta, 0.0).unwrap(), solve_y(x, delta).unwrap());
            assert_abs_diff_eq!(y_shifted(1.0, delta, delta / 2.0).unwrap(), 1.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(y_shifted(1.0, 2.0, -1.0).unwrap(), -1.0, epsilon = 1e-14);
        assert!(matches!(y_shifted(0.5, 1.0, 0.6), Err(Error::Precondition(_))));
        assert!(matches!(y_shifted(-0.5, 1.0, 0.1), Err(Error::Precondition(_))));
    }
}
