use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A polynomial stored by its Chebyshev coefficients on `[u, v]`:
/// `p(x) = Σ_j c_j T_j(s)`, `s = (2x - u - v) / (v - u)`.
///
/// A polynomial with `n` coefficients belongs to `Π_n` (degree ≤ n - 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
    interval: (f64, f64),
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>, interval: (f64, f64)) -> Result<Self> {
        let (u, v) = interval;
        if !(u < v) || !u.is_finite() || !v.is_finite() {
            return Err(Error::Precondition(format!("reference interval [{u}, {v}] is empty")));
        }
        Ok(Self { coeffs, interval })
    }

    pub fn zero(interval: (f64, f64)) -> Self {
        Self { coeffs: Vec::new(), interval }
    }

    /// `T_m` on `[-1, 1]`.
    pub fn chebyshev_t(m: usize) -> Self {
        let mut coeffs = vec![0.0; m + 1];
        coeffs[m] = 1.0;
        Self { coeffs, interval: (-1.0, 1.0) }
    }

    /// Interpolant of `g` in the `n` first-kind Chebyshev points of `[u, v]`.
    pub fn interpolate(g: impl Fn(f64) -> f64, n: usize, interval: (f64, f64)) -> Result<Self> {
        let mut out = Self::new(Vec::new(), interval)?;
        if n == 0 {
            return Ok(out);
        }
        let (u, v) = interval;
        let (mid, half) = (0.5 * (u + v), 0.5 * (v - u));
        let theta: Vec<f64> = (0..n).map(|i| PI * (i as f64 + 0.5) / n as f64).collect();
        let vals: Vec<f64> = theta.iter().map(|t| g(mid + half * t.cos())).collect();
        out.coeffs = (0..n)
            .map(|j| {
                let s: f64 = vals.iter().zip(&theta).map(|(f, t)| f * (j as f64 * t).cos()).sum();
                let scale = if j == 0 { 1.0 } else { 2.0 };
                scale * s / n as f64
            })
            .collect();
        Ok(out)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// Number of stored coefficients, i.e. the smallest `n` with `p ∈ Π_n`
    /// before trailing zeros are trimmed.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Degree after ignoring exactly-zero trailing coefficients; `None` for 0.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    fn to_reference(&self, x: f64) -> f64 {
        let (u, v) = self.interval;
        (2.0 * x - u - v) / (v - u)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, self.to_reference(x))
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| lambda * c).collect(), interval: self.interval }
    }

    /// Exact derivative via the Chebyshev coefficient recurrence
    /// `c'_{j-1} = c'_{j+1} + 2 j c_j`.
    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self { coeffs: vec![0.0], interval: self.interval };
        }
        let mut d = vec![0.0; n + 1];
        for j in (1..n).rev() {
            d[j - 1] = d[j + 1] + 2.0 * j as f64 * self.coeffs[j];
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        let (u, v) = self.interval;
        let scale = 2.0 / (v - u);
        for c in &mut d {
            *c *= scale;
        }
        Self { coeffs: d, interval: self.interval }
    }

    pub fn nth_derivative(&self, r: usize) -> Self {
        (0..r).fold(self.clone(), |p, _| p.derivative())
    }

    /// Coefficients padded with zeros (or truncated) to length `n`.
    pub fn resized(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, 0.0);
        Self { coeffs, interval: self.interval }
    }
}

pub(crate) fn clenshaw(c: &[f64], s: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &cj in c.iter().skip(1).rev() {
        let b0 = 2.0 * s * b1 - b2 + cj;
        b2 = b1;
        b1 = b0;
    }
    match c.first() {
        Some(&c0) => s * b1 - b2 + c0,
        None => 0.0,
    }
}

/// `T_0(s), ..., T_{n-1}(s)` written into `out`.
pub(crate) fn chebyshev_row(s: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = 1.0;
    if n > 1 {
        out[1] = s;
    }
    for j in 2..n {
        out[j] = 2.0 * s * out[j - 1] - out[j - 2];
    }
}
