//! Composite quadrature grids for the discrete least-squares and IRLS
//! problems, and a weighted least-squares solve.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quadrature::{cached_rule, PANEL_POINTS};
use crate::weights::jacobi_weight;

use super::polynomial::chebyshev_row;

/// Geometric grading ratio and depth towards singular points.
const GRADE_RATIO: f64 = 0.1;
pub(crate) const GRADE_DEPTH: usize = 10;

/// Nodes `x_i` and weights `W_i` with
/// `Σ W_i g(x_i) ≈ ∫_u^v (1-x)^a (1+x)^b g(x) dx`.
#[derive(Debug, Clone)]
pub(crate) struct Discretization {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
}

/// Breakpoints of a graded composite mesh: θ-uniform Chebyshev panels, the
/// given interior points, and geometric refinement towards each graded
/// point with its own depth.
fn mesh(interval: (f64, f64), panels: usize, interior: &[f64], graded: &[(f64, usize)]) -> Vec<f64> {
    let (u, v) = interval;
    let (mid, half) = (0.5 * (u + v), 0.5 * (v - u));
    let mut pts: Vec<f64> = (0..=panels).map(|j| mid - half * (PI * j as f64 / panels as f64).cos()).collect();
    pts[0] = u;
    pts[panels] = v;
    let min_gap = 1e-14 * (v - u);
    let inside = |s: &f64| *s >= u && *s <= v;
    pts.extend(interior.iter().copied().filter(inside));
    pts.extend(graded.iter().map(|g| g.0).filter(inside));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= min_gap);
    let mut extra = Vec::new();
    for &(s, depth) in graded.iter().filter(|g| inside(&g.0)) {
        let Some(j) = pts.iter().position(|p| (p - s).abs() <= min_gap) else {
            continue;
        };
        let s = pts[j];
        if let Some(&right) = pts.get(j + 1) {
            extra.extend((1..=depth).map(|i| s + (right - s) * GRADE_RATIO.powi(i as i32)));
        }
        if j > 0 {
            let left = pts[j - 1];
            extra.extend((1..=depth).map(|i| s - (s - left) * GRADE_RATIO.powi(i as i32)));
        }
    }
    pts.extend(extra);
    pts.retain(|&p| p >= u && p <= v);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (v - u));
    pts
}

/// Composite Gauss rule on `[u, v]` for the weight `(1-x)^a (1+x)^b`. Panels
/// touching `±1` absorb the singular factor into a Gauss–Jacobi rule.
pub(crate) fn discretize(
    interval: (f64, f64),
    a: f64,
    b: f64,
    panels: usize,
    interior: &[f64],
    graded: &[(f64, usize)],
) -> Discretization {
    let pts = mesh(interval, panels.max(1), interior, graded);
    let m = PANEL_POINTS;
    let legendre = cached_rule(m, 0.0, 0.0);
    let mut x = Vec::with_capacity(m * pts.len());
    let mut w = Vec::with_capacity(m * pts.len());
    let last = pts.len() - 2;
    for (i, seg) in pts.windows(2).enumerate() {
        let (lo, hi) = (seg[0], seg[1]);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let left_end = i == 0 && lo == -1.0 && b != 0.0;
        let right_end = i == last && hi == 1.0 && a != 0.0;
        match (left_end, right_end) {
            (true, true) => {
                let rule = cached_rule(m, a, b);
                let scale = half.powf(a + b + 1.0);
                for (&s, &ws) in rule.nodes.iter().zip(&rule.weights) {
                    x.push(mid + half * s);
                    w.push(scale * ws);
                }
            }
            (true, false) => {
                let rule = cached_rule(m, 0.0, b);
                let scale = half.powf(b + 1.0);
                for (&s, &ws) in rule.nodes.iter().zip(&rule.weights) {
                    let xi = mid + half * s;
                    x.push(xi);
                    w.push(scale * ws * jacobi_weight(a, 0.0, xi));
                }
            }
            (false, true) => {
                let rule = cached_rule(m, a, 0.0);
                let scale = half.powf(a + 1.0);
                for (&s, &ws) in rule.nodes.iter().zip(&rule.weights) {
                    let xi = mid + half * s;
                    x.push(xi);
                    w.push(scale * ws * jacobi_weight(0.0, b, xi));
                }
            }
            (false, false) => {
                for (&s, &ws) in legendre.nodes.iter().zip(&legendre.weights) {
                    let xi = mid + half * s;
                    x.push(xi);
                    w.push(half * ws * jacobi_weight(a, b, xi));
                }
            }
        }
    }
    Discretization { x, w }
}

/// Matrix of `T_j` values at the nodes, rows = nodes, `n` columns.
pub(crate) fn chebyshev_matrix(x: &[f64], n: usize, interval: (f64, f64)) -> DMatrix<f64> {
    let (u, v) = interval;
    let mut a = DMatrix::<f64>::zeros(x.len(), n);
    let mut row = vec![0.0; n];
    for (i, &xi) in x.iter().enumerate() {
        chebyshev_row((2.0 * xi - u - v) / (v - u), &mut row);
        for j in 0..n {
            a[(i, j)] = row[j];
        }
    }
    a
}

/// `argmin_c Σ ω_i (f_i - (A c)_i)²` by Householder QR, falling back to an
/// SVD when `R` is numerically singular.
pub(crate) fn weighted_lstsq(a: &DMatrix<f64>, f: &[f64], omega: &[f64]) -> Result<Vec<f64>> {
    let (m, n) = a.shape();
    let mut sa = a.clone();
    let mut sf = DVector::<f64>::zeros(m);
    for i in 0..m {
        let s = omega[i].max(0.0).sqrt();
        for j in 0..n {
            sa[(i, j)] *= s;
        }
        sf[i] = s * f[i];
    }
    let qr = sa.clone().qr();
    let r = qr.r();
    let dmax = (0..n).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    let dmin = (0..n).map(|i| r[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    if dmax > 0.0 && dmin > 1e-13 * dmax {
        let mut qtb = sf.clone();
        qr.q_tr_mul(&mut qtb);
        if let Some(c) = r.solve_upper_triangular(&qtb.rows(0, n)) {
            if c.iter().all(|v| v.is_finite()) {
                return Ok(c.iter().copied().collect());
            }
        }
    }
    let svd = sa.svd(true, true);
    let c = svd
        .solve(&sf, 1e-13 * svd.singular_values.max())
        .map_err(|e| Error::Numerical(format!("least-squares solve failed: {e}")))?;
    Ok(c.iter().copied().collect())
}
