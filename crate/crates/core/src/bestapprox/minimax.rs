//! Weighted minimax by multi-point exchange on a grid, followed by rounds
//! that add the continuous local extrema of the error to the grid.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::quadrature::golden_max;
use crate::weights::{jacobi_weight, WeightParams};

use super::polynomial::{chebyshev_row, clenshaw};
use super::{interior_breaks, residual_norm, ApproxResult, Certificate, Polynomial, SolverSettings};

struct Grid {
    x: Vec<f64>,
    /// `x` mapped to the reference interval `[-1, 1]`.
    s: Vec<f64>,
    w: Vec<f64>,
    f: Vec<f64>,
}

impl Grid {
    /// Chebyshev extreme points of `[u, v]` (both ends included) plus the
    /// singular points of `f`; points with zero weight are dropped.
    fn new(spec: &FunctionSpec, interval: (f64, f64), params: &WeightParams, size: usize) -> Self {
        let (u, v) = interval;
        let (mid, half) = (0.5 * (u + v), 0.5 * (v - u));
        let mut xs: Vec<f64> = (0..=size).map(|j| mid - half * (PI * j as f64 / size as f64).cos()).collect();
        xs[0] = u;
        xs[size] = v;
        xs.extend(interior_breaks(spec, interval));
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let (a, b) = (params.alpha(), params.beta());
        let mut grid = Grid { x: Vec::new(), s: Vec::new(), w: Vec::new(), f: Vec::new() };
        for x in xs {
            let w = jacobi_weight(a, b, x);
            let f = spec.value(0, x);
            if w > 0.0 && w.is_finite() && f.is_finite() {
                grid.x.push(x);
                grid.s.push(((2.0 * x - u - v) / (v - u)).clamp(-1.0, 1.0));
                grid.w.push(w);
                grid.f.push(f);
            }
        }
        grid
    }

    fn len(&self) -> usize {
        self.x.len()
    }

    /// Inserts new points, keeping the grid sorted.
    fn augment(&mut self, spec: &FunctionSpec, interval: (f64, f64), params: &WeightParams, extra: &[f64]) {
        let (u, v) = interval;
        let (a, b) = (params.alpha(), params.beta());
        for &x in extra {
            let i = self.x.partition_point(|&g| g < x);
            if self.x.get(i) == Some(&x) {
                continue;
            }
            let w = jacobi_weight(a, b, x);
            let f = spec.value(0, x);
            if w > 0.0 && w.is_finite() && f.is_finite() {
                self.x.insert(i, x);
                self.s.insert(i, ((2.0 * x - u - v) / (v - u)).clamp(-1.0, 1.0));
                self.w.insert(i, w);
                self.f.insert(i, f);
            }
        }
    }

    fn errors(&self, coeffs: &[f64]) -> Vec<f64> {
        (0..self.len()).map(|i| self.w[i] * (self.f[i] - clenshaw(coeffs, self.s[i]))).collect()
    }

    fn nearest(&self, x: f64) -> usize {
        let i = self.x.partition_point(|&g| g < x);
        if i == 0 {
            0
        } else if i >= self.len() {
            self.len() - 1
        } else if (self.x[i] - x).abs() < (x - self.x[i - 1]).abs() {
            i
        } else {
            i - 1
        }
    }
}

/// Solves `w_i (f_i - p(x_i)) = (-1)^i E` on the reference.
fn level_solve(grid: &Grid, reference: &[usize], n: usize) -> Result<(Vec<f64>, f64)> {
    let m = n + 1;
    let mut mat = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    let mut row = vec![0.0; n];
    for (i, &g) in reference.iter().enumerate() {
        chebyshev_row(grid.s[g], &mut row);
        for j in 0..n {
            mat[(i, j)] = grid.w[g] * row[j];
        }
        mat[(i, n)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        rhs[i] = grid.w[g] * grid.f[g];
    }
    let sol =
        mat.lu().solve(&rhs).ok_or_else(|| Error::Numerical("singular reference system in the exchange".into()))?;
    let coeffs: Vec<f64> = sol.iter().take(n).copied().collect();
    Ok((coeffs, sol[n]))
}

/// Local extrema of alternating sign, one per maximal run of equal sign.
fn alternating_extrema(err: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut sign = 0.0;
    let mut best = usize::MAX;
    for (i, &e) in err.iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        let s = e.signum();
        if s != sign {
            if best != usize::MAX {
                out.push(best);
            }
            sign = s;
            best = i;
        } else if e.abs() > err[best].abs() {
            best = i;
        }
    }
    if best != usize::MAX {
        out.push(best);
    }
    out
}

/// Drops points from an alternating set until `target` remain, always
/// keeping alternation and discarding the smallest errors first.
fn thin(mut pts: Vec<usize>, err: &[f64], target: usize) -> Vec<usize> {
    while pts.len() > target {
        let excess = pts.len() - target;
        let last = pts.len() - 1;
        if excess == 1 {
            if err[pts[0]].abs() <= err[pts[last]].abs() {
                pts.remove(0);
            } else {
                pts.pop();
            }
            continue;
        }
        let (jmin, _) = pts.iter().enumerate().min_by(|a, b| err[*a.1].abs().total_cmp(&err[*b.1].abs())).unwrap();
        if jmin == 0 || jmin == last {
            pts.remove(jmin);
        } else {
            // remove the smallest point together with its smaller neighbour
            let nb = if err[pts[jmin - 1]].abs() <= err[pts[jmin + 1]].abs() { jmin - 1 } else { jmin + 1 };
            let (lo, hi) = if nb < jmin { (nb, jmin) } else { (jmin, nb) };
            pts.remove(hi);
            pts.remove(lo);
        }
    }
    pts
}

/// Classical single-point exchange of the global maximum into `reference`.
fn single_exchange(reference: &[usize], err: &[f64], gmax: usize) -> Vec<usize> {
    let mut r = reference.to_vec();
    if r.contains(&gmax) {
        return r;
    }
    let sgn = |i: usize| err[i].signum();
    let pos = r.partition_point(|&g| g < gmax);
    if pos == 0 {
        if sgn(r[0]) == sgn(gmax) {
            r[0] = gmax;
        } else {
            r.insert(0, gmax);
            r.pop();
        }
    } else if pos == r.len() {
        let last = r.len() - 1;
        if sgn(r[last]) == sgn(gmax) {
            r[last] = gmax;
        } else {
            r.push(gmax);
            r.remove(0);
        }
    } else if sgn(r[pos - 1]) == sgn(gmax) {
        r[pos - 1] = gmax;
    } else {
        r[pos] = gmax;
    }
    r
}

/// Iterations without a smaller maximum error after which a nearly levelled
/// exchange is accepted (relative gap, or an absolute gap at rounding level).
const STALL_ITERATIONS: usize = 20;
const STALL_GAP: f64 = 1e-8;

struct Exchange {
    coeffs: Vec<f64>,
    level: f64,
    max_err: f64,
    reference: Vec<usize>,
}

fn exchange(
    grid: &Grid,
    n: usize,
    mut reference: Vec<usize>,
    budget: &mut usize,
    settings: &SolverSettings,
) -> Result<Exchange> {
    let scale = grid.w.iter().zip(&grid.f).map(|(w, f)| (w * f).abs()).fold(0.0, f64::max);
    let mut iterations = 0;
    let mut best: Option<Exchange> = None;
    let mut since_best = 0;
    loop {
        let (coeffs, e) = level_solve(grid, &reference, n)?;
        let err = grid.errors(&coeffs);
        let (gmax, max_err) =
            err.iter()
                .enumerate()
                .map(|(i, v)| (i, v.abs()))
                .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let level = e.abs();
        let done = max_err - level <= settings.minimax_stop * max_err || max_err <= 1e-14 * scale;
        if done {
            return Ok(Exchange { coeffs, level, max_err, reference });
        }
        iterations += 1;
        *budget += 1;
        if best.as_ref().is_none_or(|b| max_err < b.max_err) {
            best = Some(Exchange { coeffs: coeffs.clone(), level, max_err, reference: reference.clone() });
            since_best = 0;
        } else {
            since_best += 1;
        }
        // cycling at rounding level: the best iterate is as good as it gets
        if let Some(b) = best.as_ref().filter(|b| {
            since_best >= STALL_ITERATIONS && b.max_err - b.level <= (STALL_GAP * b.max_err).max(1e-13 * scale)
        }) {
            log::debug!("exchange cycling at gap {:e}; keeping the best iterate", b.max_err - b.level);
            return Ok(best.unwrap());
        }
        if *budget > settings.minimax_max_iter {
            return Err(Error::ExchangeStall { iterations: *budget, level, max_error: max_err });
        }
        let ext = alternating_extrema(&err);
        let next = if ext.len() > n {
            let mut t = thin(ext, &err, n + 1);
            if !t.contains(&gmax) {
                t = single_exchange(&reference, &err, gmax);
            }
            t
        } else {
            single_exchange(&reference, &err, gmax)
        };
        if next == reference {
            // the exchange cannot improve on this grid; accept at rounding level
            log::debug!("exchange settled after {iterations} steps with gap {:e}", max_err - level);
            return Ok(Exchange { coeffs, level, max_err, reference });
        }
        reference = next;
    }
}

pub(super) fn solve(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
) -> Result<ApproxResult> {
    let size = settings.minimax_grid.max(8 * n);
    let mut grid = Grid::new(spec, interval, params, size);
    if grid.len() < n + 1 {
        return Err(Error::Numerical("too few grid points with positive weight".into()));
    }
    let g = grid.len();
    let fscale = grid.w.iter().zip(&grid.f).map(|(w, f)| (w * f).abs()).fold(0.0, f64::max);
    let reference: Vec<usize> = (0..=n).map(|j| (j * (g - 1) + n / 2) / n).collect();
    let mut budget = 0;
    let mut sol = exchange(&grid, n, reference, &mut budget, settings)?;
    let mut converged = sol.max_err <= 1e-13 * fscale;
    let (u, v) = interval;
    let (a, b) = (params.alpha(), params.beta());
    for _ in 0..settings.minimax_refinements {
        if converged {
            break;
        }
        let prev_level = sol.level;
        let err = grid.errors(&sol.coeffs);
        let coeffs = sol.coeffs.clone();
        let h = |x: f64| {
            let s = ((2.0 * x - u - v) / (v - u)).clamp(-1.0, 1.0);
            let e = jacobi_weight(a, b, x) * (spec.value(0, x) - clenshaw(&coeffs, s));
            if e.is_finite() {
                e.abs()
            } else {
                f64::NEG_INFINITY
            }
        };
        // continuous local maxima of the error next to each grid extremum
        let extra: Vec<f64> = alternating_extrema(&err)
            .into_iter()
            .filter(|&i| i > 0 && i + 1 < grid.len())
            .map(|i| golden_max(h, grid.x[i - 1], grid.x[i + 1], 1e-13 * (v - u)).0)
            .collect();
        let prev_x: Vec<f64> = sol.reference.iter().map(|&i| grid.x[i]).collect();
        grid.augment(spec, interval, params, &extra);
        let mut reference: Vec<usize> = prev_x.iter().map(|&x| grid.nearest(x)).collect();
        reference.dedup();
        if reference.len() != n + 1 {
            let g = grid.len();
            reference = (0..=n).map(|j| (j * (g - 1) + n / 2) / n).collect();
        }
        sol = exchange(&grid, n, reference, &mut budget, settings)?;
        let exact = sol.max_err <= 1e-13 * fscale;
        if exact || (sol.level - prev_level).abs() <= (settings.minimax_grid_change * sol.level).max(1e-14 * fscale) {
            converged = true;
        }
    }
    let minimizer = Polynomial::new(sol.coeffs, interval)?;
    let sup = residual_norm(spec, &minimizer, interval, params, settings.norm_tol);
    Ok(ApproxResult {
        error: sup.value.max(sol.max_err),
        minimizer,
        certificate: Certificate::ExchangeConverged,
        iterations: budget,
        converged: converged && sup.converged,
        lower_bound: Some(sol.level),
        parseval_tail: None,
    })
}
