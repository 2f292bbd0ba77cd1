//! Test-function corpus with closed-form derivatives.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{weighted_lp_norm_with, weighted_sup_norm_with, NormOptions};
use crate::weights::WeightParams;

/// `(order, x) -> f^{(order)}(x)`.
pub type Evaluator = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// A corpus member: a function on `[-1, 1]` with analytic derivatives up to
/// `max_derivative_order`.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    max_derivative_order: usize,
    evaluator: Evaluator,
    singularities: Vec<f64>,
    expected_decay: Option<f64>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("max_derivative_order", &self.max_derivative_order)
            .field("singularities", &self.singularities)
            .field("expected_decay", &self.expected_decay)
            .finish()
    }
}

impl FunctionSpec {
    pub fn new(
        name: impl Into<String>,
        max_derivative_order: usize,
        singularities: Vec<f64>,
        evaluator: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let mut singularities = singularities;
        singularities.sort_by(f64::total_cmp);
        singularities.dedup();
        Self {
            name: name.into(),
            max_derivative_order,
            evaluator: Arc::new(evaluator),
            singularities,
            expected_decay: None,
        }
    }

    pub fn with_expected_decay(mut self, gamma: f64) -> Self {
        self.expected_decay = Some(gamma);
        self
    }

    /// Polynomial with monomial coefficients `coeffs[j]` of `x^j`.
    pub fn polynomial(name: impl Into<String>, coeffs: &[f64]) -> Self {
        let coeffs = coeffs.to_vec();
        let max = coeffs.len() + 2;
        Self::new(name, max, vec![], move |r, x| {
            let mut acc = 0.0;
            for j in (r..coeffs.len()).rev() {
                acc = acc * x + coeffs[j] * falling(j, r);
            }
            acc
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_derivative_order(&self) -> usize {
        self.max_derivative_order
    }

    pub fn singularities(&self) -> &[f64] {
        &self.singularities
    }

    /// Singular points strictly inside `(-1, 1)`.
    pub fn interior_singularities(&self) -> impl Iterator<Item = f64> + '_ {
        self.singularities.iter().copied().filter(|s| s.abs() < 1.0)
    }

    pub fn expected_decay(&self) -> Option<f64> {
        self.expected_decay
    }

    /// Checked evaluation of `f^{(r)}(x)`.
    pub fn eval(&self, r: usize, x: f64) -> Result<f64> {
        if r > self.max_derivative_order {
            return Err(Error::OrderOutOfRange {
                name: self.name.clone(),
                requested: r,
                max: self.max_derivative_order,
            });
        }
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} lies outside [-1, 1]")));
        }
        if r >= 1 && self.singularities.contains(&x) {
            return Err(Error::Singular { name: self.name.clone(), x });
        }
        Ok((self.evaluator)(r, x))
    }

    /// Unchecked evaluation for inner loops.
    #[inline]
    pub fn value(&self, r: usize, x: f64) -> f64 {
        (self.evaluator)(r, x)
    }

    /// `λ f`, named `name*λ`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let inner = self.evaluator.clone();
        Self {
            name: format!("{}*{}", self.name, lambda),
            max_derivative_order: self.max_derivative_order,
            evaluator: Arc::new(move |r, x| lambda * inner(r, x)),
            singularities: self.singularities.clone(),
            expected_decay: self.expected_decay,
        }
    }

    /// `f + g`, certified up to the smaller derivative order.
    pub fn sum(&self, other: &FunctionSpec) -> Self {
        let (a, b) = (self.evaluator.clone(), other.evaluator.clone());
        let mut singularities = self.singularities.clone();
        singularities.extend_from_slice(&other.singularities);
        Self::new(
            format!("{}+{}", self.name, other.name),
            self.max_derivative_order.min(other.max_derivative_order),
            singularities,
            move |r, x| a(r, x) + b(r, x),
        )
    }

    /// `f^{(r)}` viewed as a function in its own right.
    pub fn derivative(&self, r: usize) -> Result<Self> {
        if r > self.max_derivative_order {
            return Err(Error::OrderOutOfRange {
                name: self.name.clone(),
                requested: r,
                max: self.max_derivative_order,
            });
        }
        if r == 0 {
            return Ok(self.clone());
        }
        let inner = self.evaluator.clone();
        Ok(Self {
            name: format!("{}^({})", self.name, r),
            max_derivative_order: self.max_derivative_order - r,
            evaluator: Arc::new(move |s, x| inner(s + r, x)),
            singularities: self.singularities.clone(),
            expected_decay: None,
        })
    }
}

/// `j (j-1) ... (j-r+1)`.
fn falling(j: usize, r: usize) -> f64 {
    (0..r).map(|i| (j - i) as f64).product()
}

fn monomial(m: usize) -> FunctionSpec {
    FunctionSpec::new(format!("mono{m}"), m + 2, vec![], move |r, x| {
        if r > m {
            0.0
        } else {
            falling(m, r) * x.powi((m - r) as i32)
        }
    })
}

/// `|x|^γ` with derivatives `γ(γ-1)...|x|^{γ-r} sgn(x)^r`.
fn abs_power(name: &str, gamma: f64, max_order: usize) -> FunctionSpec {
    FunctionSpec::new(name, max_order, vec![0.0], move |r, x| {
        let c: f64 = (0..r).map(|i| gamma - i as f64).product();
        let sign = if r % 2 == 1 { x.signum() } else { 1.0 };
        if x == 0.0 && r > 0 {
            return if gamma - r as f64 > 0.0 { 0.0 } else { f64::INFINITY };
        }
        c * sign * x.abs().powf(gamma - r as f64)
    })
    .with_expected_decay(gamma)
}

/// `(x - a)_+^m`.
fn truncated_power(m: usize, a: f64) -> FunctionSpec {
    FunctionSpec::new(format!("trunc{m}_{a}"), m, vec![a], move |r, x| {
        if x <= a || r > m {
            0.0
        } else {
            falling(m, r) * (x - a).powi((m - r) as i32)
        }
    })
    .with_expected_decay(m as f64)
}

/// `(1 - x)^γ`.
fn endpoint_power(gamma: f64) -> FunctionSpec {
    FunctionSpec::new(format!("endpoint_{gamma}"), 4, vec![1.0], move |r, x| {
        let c: f64 = (0..r).map(|i| -(gamma - i as f64)).product();
        c * (1.0 - x).powf(gamma - r as f64)
    })
    .with_expected_decay(2.0 * gamma)
}

/// `1 / (1 + 25 x²) = Re 1/(1 + 5ix)`; the r-th derivative is
/// `Re[(-5i)^r r! (1 + 5ix)^{-(r+1)}]`.
fn runge() -> FunctionSpec {
    FunctionSpec::new("runge", 8, vec![], |r, x| {
        if r == 0 {
            return 1.0 / (1.0 + 25.0 * x * x);
        }
        let modulus = (1.0 + 25.0 * x * x).sqrt();
        let theta = (5.0 * x).atan();
        let fact: f64 = (1..=r).map(|i| i as f64).product();
        let phase = (r as f64 + 1.0) * theta + PI * r as f64 / 2.0;
        5f64.powi(r as i32) * fact * modulus.powi(-(r as i32 + 1)) * phase.cos()
    })
}

fn sin5() -> FunctionSpec {
    FunctionSpec::new("sin5", 8, vec![], |r, x| 5f64.powi(r as i32) * (5.0 * x + r as f64 * PI / 2.0).sin())
}

fn exp() -> FunctionSpec {
    FunctionSpec::new("exp", 8, vec![], |_, x| x.exp())
}

/// The built-in corpus.
pub fn corpus_catalog() -> Vec<FunctionSpec> {
    let mut out: Vec<FunctionSpec> = (0..=6).map(monomial).collect();
    out.push(abs_power("abs", 1.0, 0));
    out.push(abs_power("abs_1_5", 1.5, 2));
    out.push(
        FunctionSpec::new("x_abs_x", 1, vec![0.0], |r, x| match r {
            0 => x * x.abs(),
            _ => 2.0 * x.abs(),
        })
        .with_expected_decay(2.0),
    );
    for m in 1..=3 {
        for a in [0.0, 0.5] {
            out.push(truncated_power(m, a));
        }
    }
    out.push(endpoint_power(0.25));
    out.push(endpoint_power(0.75));
    out.push(runge());
    out.push(sin5());
    out.push(exp());
    out
}

/// Looks up a corpus member by name.
pub fn lookup(name: &str) -> Result<FunctionSpec> {
    corpus_catalog().into_iter().find(|s| s.name() == name).ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

/// Whether `w_{α,β} φ^r f^{(r)}` has a finite `L_p` (quasi)norm, judged by
/// convergence of the adaptive quadrature (`p < ∞`) or by the growth of the
/// weighted derivative towards the singular points (`p = ∞`).
pub fn certify_class(spec: &FunctionSpec, r: usize, params: &WeightParams) -> bool {
    if r > spec.max_derivative_order() {
        return false;
    }
    let Ok(shifted) = params.with_phi_power(r) else {
        return false;
    };
    let g = |x: f64| spec.value(r, x);
    let breakpoints: Vec<f64> = spec.interior_singularities().collect();
    if params.is_sup() {
        let res = weighted_sup_norm_with(&g, (-1.0, 1.0), &shifted, &breakpoints);
        if !res.value.is_finite() {
            return false;
        }
        // probe the growth of w φ^r |f^{(r)}| towards each singular point
        let (a, b) = (shifted.alpha(), shifted.beta());
        let weighted = |x: f64| crate::weights::jacobi_weight(a, b, x) * g(x).abs();
        let mut probes: Vec<(f64, f64)> = Vec::new();
        for &s in spec.singularities() {
            if s < 1.0 {
                probes.push((s, 1.0));
            }
            if s > -1.0 {
                probes.push((s, -1.0));
            }
        }
        for (s, dir) in probes {
            let near = weighted(s + dir * 1e-12);
            let far = weighted(s + dir * 1e-6);
            if !near.is_finite() {
                return false;
            }
            if far > 0.0 && near > 0.0 {
                // slope of log|value| against log(distance)
                let slope = (near.ln() - far.ln()) / (1e-12f64.ln() - 1e-6f64.ln());
                if slope < -1e-3 {
                    return false;
                }
            } else if far == 0.0 && near > 0.0 {
                return false;
            }
        }
        true
    } else {
        let opts = NormOptions { breakpoints, ..NormOptions::default() };
        let res = weighted_lp_norm_with(&g, (-1.0, 1.0), &shifted, &opts);
        res.converged && res.value.is_finite()
    }
}
