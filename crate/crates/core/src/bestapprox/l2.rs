use crate::error::Result;
use crate::functions::FunctionSpec;
use crate::quadrature::Recurrence;
use crate::weights::WeightParams;

use super::discretize::{chebyshev_matrix, discretize, weighted_lstsq};
use super::{graded_points, interior_breaks, residual_norm, ApproxResult, Certificate, Polynomial, SolverSettings};

const MAX_COEFFS: usize = 1024;
/// Coefficients beyond `n` examined before declaring the expansion resolved.
const TAIL_WINDOW: usize = 8;

pub(super) fn solve(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
) -> Result<ApproxResult> {
    let (a, b) = params.integrand_exponents();
    let (minimizer, parseval_tail) = if interval == (-1.0, 1.0) {
        project(spec, n, a, b)?
    } else {
        let breaks = interior_breaks(spec, interval);
        let graded = graded_points(spec, interval);
        let d = discretize(interval, a, b, n.max(8), &breaks, &graded);
        let f: Vec<f64> = d.x.iter().map(|&x| spec.value(0, x)).collect();
        let mat = chebyshev_matrix(&d.x, n, interval);
        let coeffs = weighted_lstsq(&mat, &f, &d.w)?;
        (Polynomial::new(coeffs, interval)?, None)
    };
    let norm = residual_norm(spec, &minimizer, interval, params, settings.norm_tol);
    Ok(ApproxResult {
        error: norm.value,
        minimizer,
        certificate: Certificate::OrthogonalProjection,
        iterations: 1,
        converged: norm.converged,
        lower_bound: None,
        parseval_tail,
    })
}

/// Expansion coefficients `c_j = ∫ (1-x)^a (1+x)^b f q_j` in the orthonormal
/// Jacobi basis, computed on a composite grid. For functions without
/// singular points the expansion is lengthened until its tail is resolved.
fn project(spec: &FunctionSpec, n: usize, a: f64, b: f64) -> Result<(Polynomial, Option<f64>)> {
    let breaks = interior_breaks(spec, (-1.0, 1.0));
    let graded = graded_points(spec, (-1.0, 1.0));
    let smooth = spec.singularities().is_empty();
    let mut m = n + 96;
    loop {
        let rec = Recurrence::jacobi(m, a, b);
        let d = discretize((-1.0, 1.0), a, b, (m / 2).max(16), &breaks, &graded);
        let mut c = vec![0.0; m];
        let mut q = vec![0.0; m];
        for (&x, &w) in d.x.iter().zip(&d.w) {
            let fw = w * spec.value(0, x);
            rec.eval_into(x, &mut q);
            for (cj, qj) in c.iter_mut().zip(&q) {
                *cj += fw * qj;
            }
        }
        let tail: f64 = c[n.min(m)..].iter().map(|v| v * v).sum();
        let total: f64 = c.iter().map(|v| v * v).sum();
        let last: f64 = c[m - TAIL_WINDOW..].iter().map(|v| v * v).sum();
        let resolved = last <= 1e-10 * tail || last <= 1e-30 * total;
        if resolved || !smooth || m >= MAX_COEFFS {
            let head = c[..n].to_vec();
            let poly = Polynomial::interpolate(
                |x| {
                    let mut q = vec![0.0; n];
                    rec.eval_into(x, &mut q);
                    head.iter().zip(&q).map(|(c, q)| c * q).sum()
                },
                n,
                (-1.0, 1.0),
            )?;
            return Ok((poly, (resolved && smooth).then_some(tail)));
        }
        m = (2 * m).min(MAX_COEFFS);
    }
}
