//! Empirical constant of the local stress estimate: the ratio of
//! `R^-1 ||A||_{L2(B_R)} + ||grad A||_{L2(B_R)}` to
//! `||f||_{L2(B_2R)} + R^{-n/2-1} ||A||_{L1(B_2R)}`, tracked across
//! refinements and exponents.

use crate::error::{Error, Result};
use crate::orlicz::NonlinearityLaw;
use crate::probe::region::{ball_norms, masked_l2_of_fn, BallRegion};
use crate::probe::stress::{stress_project_discrete, StressField};
use crate::scalar::Real;
use crate::solver::{
    continuation_solve, manufactured_rhs, poly_spatial_fn, DirichletProblem, SolverConfig,
    SpatialFn, StructuredGrid,
};
use crate::tensorfields::{Coeff, PolyVectorField};
use serde::Serialize;
use std::sync::Arc;

/// One evaluation of the empirical estimate ratio.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateRatio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub l2_term: f64,
    pub grad_term: f64,
    pub f_term: f64,
    pub l1_term: f64,
}

/// Evaluate the two sides of the local estimate for a stress field and a
/// right-hand side on a ball region.
pub fn estimate_ratio<T: Real>(
    stress: &StressField<T>,
    rhs: &SpatialFn<T>,
    region: &BallRegion<T>,
    quad_order: usize,
) -> Result<EstimateRatio> {
    let grid = stress.grid().clone();
    let norms = ball_norms(&stress.values, region, quad_order)?;
    let radius = region.radius.to_f64_lossy();
    let dim = grid.dim() as f64;
    let f_term = masked_l2_of_fn(
        &grid,
        rhs,
        region,
        region.radius * T::of(2.0),
        quad_order,
    )?;
    let l2_term = norms.l2_inner / radius;
    let grad_term = norms.grad_l2_inner;
    let l1_term = radius.powf(-dim / 2.0 - 1.0) * norms.l1_outer;
    let lhs = l2_term + grad_term;
    let rhs_value = f_term + l1_term;
    if rhs_value == 0.0 {
        return Err(Error::UndefinedRatio(
            "estimate ratio undefined: both the load and the stress vanish".into(),
        ));
    }
    Ok(EstimateRatio {
        lhs,
        rhs: rhs_value,
        ratio: lhs / rhs_value,
        l2_term,
        grad_term,
        f_term,
        l1_term,
    })
}

/// One row of the stability sweep across exponents and refinements.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateRow {
    pub p: f64,
    pub cells: usize,
    pub h: f64,
    pub eps_floor: f64,
    pub ratio: f64,
    pub grad_term: f64,
    pub newton_iterations_total: usize,
}

/// Smooth polynomial exact solution whose strain stays away from zero on
/// `[-1, 1]^2`; the workhorse of the stability sweep.
pub fn smooth_benchmark_field<T: Real + Coeff>() -> PolyVectorField<T> {
    use crate::tensorfields::Polynomial;
    let x1: Polynomial<T> = Polynomial::var(2, 0);
    let x2 = Polynomial::var(2, 1);
    let quarter = T::of(0.25);
    let u1 = x1.add(&x1.mul(&x1).mul(&x2).scale(&quarter));
    let u2 = x2.neg().add(&x1.mul(&x2).mul(&x2).scale(&quarter));
    PolyVectorField::new(vec![u1, u2]).expect("benchmark field is well formed")
}

/// Sweep the empirical ratio over exponents and grids for the smooth
/// manufactured solution: solve with pinch continuation, project the
/// stress, and evaluate both sides on the given region.
pub fn estimate_stability_sweep<T: Real + Coeff>(
    p_values: &[T],
    cell_counts: &[usize],
    lo: &[T],
    hi: &[T],
    region: &BallRegion<T>,
    config: &SolverConfig<T>,
) -> Result<Vec<EstimateRow>> {
    let exact = smooth_benchmark_field::<T>();
    let mut rows = Vec::new();
    for &p in p_values {
        let range = crate::identities::admissible_range::<T>(lo.len())?;
        if !(p > range.p_minus && p < range.p_plus) {
            return Err(Error::Domain(format!(
                "exponent {} outside the admissible interval ({}, {}) in dimension {}",
                p.to_f64_lossy(),
                range.p_minus.to_f64_lossy(),
                range.p_plus.to_f64_lossy(),
                lo.len()
            )));
        }
        // the target law is the singular power; the rhs is manufactured from
        // it so the continuation limit approximates the same solution
        let target = NonlinearityLaw::pure_power(p)?;
        let rhs = manufactured_rhs(&target, &exact);
        for &cells in cell_counts {
            let counts = vec![cells; lo.len()];
            let grid = Arc::new(StructuredGrid::new(lo, hi, &counts)?);
            let problem = DirichletProblem::new(
                NonlinearityLaw::regularized(p, config.eps_start)?,
                grid,
                rhs.clone(),
                poly_spatial_fn(&exact),
            )?;
            let outcome = continuation_solve(&problem, config)?;
            let floor_law = NonlinearityLaw::regularized(p, outcome.final_eps())?;
            let stress = stress_project_discrete(
                &floor_law,
                outcome.final_field(),
                config.quad_order,
            )?;
            let ratio = estimate_ratio(&stress, &rhs, region, config.quad_order + 2)?;
            rows.push(EstimateRow {
                p: p.to_f64_lossy(),
                cells,
                h: problem.grid.max_spacing().to_f64_lossy(),
                eps_floor: config.eps_floor.to_f64_lossy(),
                ratio: ratio.ratio,
                grad_term: ratio.grad_term,
                newton_iterations_total: outcome
                    .stages
                    .iter()
                    .map(|s| s.report.iterations)
                    .sum(),
            });
        }
    }
    Ok(rows)
}
