//! Manufactured right-hand sides: `f = -div(A(eps u*))` expanded by exact
//! symbolic chain rules on polynomial data, plus convergence studies against
//! the known exact solution.

use crate::error::{Error, Result};
use crate::orlicz::NonlinearityLaw;
use crate::scalar::Real;
use crate::solver::assemble::DirichletProblem;
use crate::solver::field::{poly_spatial_fn, SpatialFn};
use crate::solver::grid::StructuredGrid;
use crate::solver::newton::{newton_solve, SolverConfig};
use crate::tensorfields::{Coeff, PolyVectorField};
use serde::Serialize;
use std::sync::Arc;

/// Right-hand side `f(x) = -div(A(eps u*))(x)` for a polynomial exact
/// solution. Evaluation fails where the strain vanishes and the law is
/// singular there.
pub fn manufactured_rhs<T: Real + Coeff>(
    law: &NonlinearityLaw<T>,
    exact: &PolyVectorField<T>,
) -> SpatialFn<T> {
    let law = *law;
    let jets = exact.jets();
    Arc::new(move |x: &[T], out: &mut [T]| {
        let n = jets.dim;
        debug_assert_eq!(out.len(), n);
        let sample = jets.sample(x);
        let strain_norm = sample.sym_grad.norm();
        let two = T::of(2.0);
        if strain_norm == T::zero() {
            if !law.c1_at_zero() {
                return Err(Error::Domain(format!(
                    "manufactured rhs at zero strain is undefined for the singular law {law}"
                )));
            }
            let a0 = law.a_at_zero()?;
            for i in 0..n {
                out[i] = -a0 * jets.div_sym[i].eval(x);
            }
            return Ok(());
        }
        let a = law.eval_a(strain_norm)?;
        let a_prime = law.eval_a_prime(strain_norm)?;
        // w = grad |eps u| from the exact gradient of |eps u|^2
        let w: Vec<T> = (0..n)
            .map(|l| jets.grad_sym_norm2[l].eval(x) / (two * strain_norm))
            .collect();
        for i in 0..n {
            let coupling: T = (0..n).map(|j| sample.sym_grad[(i, j)] * w[j]).sum();
            out[i] = -(a * jets.div_sym[i].eval(x) + a_prime * coupling);
        }
        Ok(())
    })
}

/// One refinement level of a convergence study.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceLevel {
    pub cells: usize,
    pub h: f64,
    pub l2_error: f64,
    pub newton_iterations: usize,
}

/// Manufactured-solution convergence study at a fixed regularized law: the
/// rhs is built from the same law, so the polynomial field is the exact
/// solution at every level.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub p: f64,
    pub eps: f64,
    pub levels: Vec<ConvergenceLevel>,
    /// Least-squares slope of `log error` against `log h`.
    pub rate: f64,
}

pub fn convergence_study<T: Real + Coeff>(
    law: &NonlinearityLaw<T>,
    exact: &PolyVectorField<T>,
    lo: &[T],
    hi: &[T],
    cell_counts: &[usize],
    config: &SolverConfig<T>,
) -> Result<ConvergenceStudy> {
    let mut levels = Vec::new();
    for &cells in cell_counts {
        let counts = vec![cells; exact.dim()];
        let grid = Arc::new(StructuredGrid::new(lo, hi, &counts)?);
        let problem = DirichletProblem::new(
            *law,
            grid,
            manufactured_rhs(law, exact),
            poly_spatial_fn(exact),
        )?;
        let (field, report) = newton_solve(&problem, config, None)?;
        let error = field
            .l2_distance(&poly_spatial_fn(exact), config.quad_order + 2)?
            .to_f64_lossy();
        levels.push(ConvergenceLevel {
            cells,
            h: problem.grid.max_spacing().to_f64_lossy(),
            l2_error: error,
            newton_iterations: report.iterations,
        });
    }
    let rate = fit_rate(&levels);
    Ok(ConvergenceStudy {
        p: law.p.to_f64_lossy(),
        eps: law.eps.to_f64_lossy(),
        levels,
        rate,
    })
}

/// Least-squares slope of log(error) vs log(h).
fn fit_rate(levels: &[ConvergenceLevel]) -> f64 {
    let pts: Vec<(f64, f64)> = levels
        .iter()
        .filter(|l| l.l2_error > 0.0)
        .map(|l| (l.h.ln(), l.l2_error.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorfields::Polynomial;

    fn smooth_exact() -> PolyVectorField<f64> {
        // strain stays bounded away from zero on [-1, 1]^2
        let x1: Polynomial<f64> = Polynomial::var(2, 0);
        let x2 = Polynomial::var(2, 1);
        let quarter = 0.25;
        let u1 = x1.add(&x1.mul(&x1).mul(&x2).scale(&quarter));
        let u2 = x2.neg().add(&x1.mul(&x2).mul(&x2).scale(&quarter));
        PolyVectorField::new(vec![u1, u2]).unwrap()
    }

    #[test]
    fn affine_exact_solution_gives_zero_rhs() {
        let law = NonlinearityLaw::regularized(2.7, 0.2).unwrap();
        let m = vec![vec![1.0, 0.0], vec![0.0, -0.5]];
        let affine = PolyVectorField::affine(&m, &[0.3, 0.1]).unwrap();
        let f = manufactured_rhs(&law, &affine);
        let mut out = [f64::NAN; 2];
        f(&[0.4, -0.2], &mut out).unwrap();
        assert_eq!(out, [0.0, 0.0]);
    }

    #[test]
    fn shear_solution_gives_zero_rhs_for_any_power() {
        for p in [1.6, 2.0, 3.0] {
            let law = NonlinearityLaw::pure_power(p).unwrap();
            let shear = PolyVectorField::<f64>::singular_shear(2).unwrap();
            let f = manufactured_rhs(&law, &shear);
            let mut out = [f64::NAN; 2];
            f(&[0.3, 0.7], &mut out).unwrap();
            assert!(out[0].abs() < 1e-13 && out[1].abs() < 1e-13, "{out:?}");
        }
    }

    #[test]
    fn quadratic_rhs_matches_hand_expansion() {
        // u = (x1^2, 0), p = 2: eps u = diag(2 x1, 0), so
        // f = -div(eps u) = -(2, 0); same via -(Delta u + grad div u)/2
        let law = NonlinearityLaw::regularized(2.0, 0.5).unwrap();
        let x1: Polynomial<f64> = Polynomial::var(2, 0);
        let field =
            PolyVectorField::new(vec![x1.mul(&x1), Polynomial::zero(2)]).unwrap();
        let f = manufactured_rhs(&law, &field);
        let mut out = [f64::NAN; 2];
        f(&[0.2, 0.9], &mut out).unwrap();
        assert!((out[0] + 2.0).abs() < 1e-14);
        assert!(out[1].abs() < 1e-14);
    }

    #[test]
    fn singular_law_errors_at_zero_strain() {
        let law = NonlinearityLaw::pure_power(1.5).unwrap();
        let shear = PolyVectorField::<f64>::singular_shear(2).unwrap();
        let f = manufactured_rhs(&law, &shear);
        let mut out = [0.0; 2];
        assert!(f(&[0.5, 0.0], &mut out).is_err());
    }

    #[test]
    fn quadratic_convergence_rate() {
        let law = NonlinearityLaw::regularized(2.0, 0.3).unwrap();
        let study = convergence_study(
            &law,
            &smooth_exact(),
            &[-1.0, -1.0],
            &[1.0, 1.0],
            &[4, 8, 16],
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(study.rate >= 1.8, "rate {}", study.rate);
        // errors shrink monotonically
        assert!(study.levels.windows(2).all(|w| w[1].l2_error < w[0].l2_error));
    }
}
