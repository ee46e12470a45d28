//! Damped Newton iteration on the discrete energy, with backtracking line
//! search and the exact tangent from the stress-map derivative.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::scalar::Real;
use crate::solver::assemble::{
    energy, gather_interior, residual, scatter_interior, tangent, DirichletProblem, DofMap,
};
use crate::solver::field::NodalField;
use serde::Serialize;

/// Solver knobs: Newton tolerance, line-search parameters, quadrature order,
/// and the pinch continuation schedule.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig<T> {
    /// Euclidean norm of the interior residual vector at convergence.
    pub newton_tol: T,
    pub max_newton: usize,
    pub ls_contraction: T,
    pub ls_sufficient_decrease: T,
    pub max_line_search: usize,
    pub quad_order: usize,
    /// Relative tolerance of the per-point Young-function quadrature inside
    /// the energy.
    pub young_rel_tol: T,
    pub eps_start: T,
    pub eps_factor: T,
    pub eps_floor: T,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            newton_tol: T::of(1e-10),
            max_newton: 60,
            ls_contraction: T::of(0.5),
            ls_sufficient_decrease: T::of(1e-4),
            max_line_search: 40,
            quad_order: 3,
            young_rel_tol: T::of(1e-9),
            eps_start: T::of(1e-1),
            eps_factor: T::of(0.5),
            eps_floor: T::of(1e-5),
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.newton_tol > T::zero()) {
            return Err(Error::Config("newton tolerance must be positive".into()));
        }
        if !(self.eps_floor > T::zero()) {
            return Err(Error::Config("pinch floor must be positive".into()));
        }
        if !(self.eps_factor > T::zero() && self.eps_factor < T::one()) {
            return Err(Error::Config("pinch factor must lie in (0, 1)".into()));
        }
        if !(1..=8).contains(&self.quad_order) {
            return Err(Error::Config("quadrature order must be 1..=8".into()));
        }
        Ok(())
    }
}

/// Record of one Newton solve.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub eps: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual_history: Vec<f64>,
    pub energy_history: Vec<f64>,
    pub final_residual: f64,
    pub final_energy: f64,
}

/// Newton iteration from `initial` (defaults to the boundary interpolant).
/// The boundary nodes are pinned to the Dirichlet datum throughout.
pub fn newton_solve<T: Real>(
    problem: &DirichletProblem<T>,
    config: &SolverConfig<T>,
    initial: Option<NodalField<T>>,
) -> Result<(NodalField<T>, SolveReport)> {
    config.validate()?;
    let dofs = DofMap::build(&problem.grid);
    let bandwidth = dofs.bandwidth(&problem.grid);
    let mut field = match initial {
        Some(f) => f,
        None => problem.boundary_interpolant()?,
    };
    problem.enforce_boundary(&mut field)?;

    let mut residual_history = Vec::new();
    let mut energy_history = Vec::new();
    let mut current_energy =
        energy(problem, &field, config.quad_order, config.young_rel_tol)?;
    energy_history.push(current_energy.to_f64_lossy());

    for iter in 0..=config.max_newton {
        let r = residual(problem, &field, &dofs, config.quad_order)?;
        let r_norm = norm(&r);
        residual_history.push(r_norm.to_f64_lossy());
        if r_norm <= config.newton_tol {
            return Ok((
                field,
                SolveReport {
                    eps: problem.law.eps.to_f64_lossy(),
                    iterations: iter,
                    converged: true,
                    residual_history,
                    energy_history,
                    final_residual: r_norm.to_f64_lossy(),
                    final_energy: current_energy.to_f64_lossy(),
                },
            ));
        }
        if iter == config.max_newton {
            break;
        }

        let k = tangent(problem, &field, &dofs, config.quad_order, bandwidth)?;
        let chol = k.cholesky()?;
        let neg_r: Vec<T> = r.iter().map(|&v| -v).collect();
        let step = chol.solve(&neg_r);
        let slope = dot(&r, &step); // negative along a descent direction

        // full step first: in the quadratic convergence regime the energy
        // decrease (~ |r|^2) drowns in quadrature noise, but the residual
        // contraction is clean
        let mut full = field.clone();
        scatter_interior(&mut full, &dofs, &step, T::one());
        let full_residual_norm = norm(&residual(problem, &full, &dofs, config.quad_order)?);
        if full_residual_norm <= T::of(0.9) * r_norm {
            field = full;
            current_energy =
                energy(problem, &field, config.quad_order, config.young_rel_tol)?;
            energy_history.push(current_energy.to_f64_lossy());
            continue;
        }

        let mut alpha = T::one();
        let mut accepted = false;
        for _ in 0..config.max_line_search {
            let mut trial = field.clone();
            scatter_interior(&mut trial, &dofs, &step, alpha);
            let trial_energy =
                energy(problem, &trial, config.quad_order, config.young_rel_tol)?;
            if trial_energy
                <= current_energy + config.ls_sufficient_decrease * alpha * slope
            {
                field = trial;
                current_energy = trial_energy;
                energy_history.push(current_energy.to_f64_lossy());
                accepted = true;
                break;
            }
            alpha = alpha * config.ls_contraction;
        }
        if !accepted {
            return Err(Error::Numerics(format!(
                "line search stalled at Newton step {iter} (residual {:.3e})",
                r_norm.to_f64_lossy()
            )));
        }
    }

    let last: Vec<f64> = gather_interior(&field, &dofs)
        .iter()
        .map(|v| v.to_f64_lossy())
        .collect();
    Err(Error::NonConvergence {
        iterations: config.max_newton,
        residual: *residual_history.last().unwrap_or(&f64::NAN),
        last_iterate: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::NonlinearityLaw;
    use crate::solver::field::{poly_spatial_fn, zero_spatial_fn, SpatialFn};
    use crate::solver::grid::StructuredGrid;
    use crate::tensorfields::PolyVectorField;
    use std::sync::Arc;

    fn affine_problem(p: f64, eps: f64) -> DirichletProblem<f64> {
        let grid =
            Arc::new(StructuredGrid::new(&[0.0, 0.0], &[1.0, 1.0], &[6, 6]).unwrap());
        let m = vec![vec![0.5, 0.25], vec![0.25, -0.5]];
        let affine = PolyVectorField::affine(&m, &[0.1, 0.0]).unwrap();
        DirichletProblem::new(
            NonlinearityLaw::regularized(p, eps).unwrap(),
            grid,
            zero_spatial_fn(),
            poly_spatial_fn(&affine),
        )
        .unwrap()
    }

    #[test]
    fn quadratic_energy_converges_in_one_step() {
        let problem = affine_problem(2.0, 0.3);
        let grid = problem.grid.clone();
        // start far from the solution: zero interior
        let mut init = NodalField::zeros(grid, 2);
        problem.enforce_boundary(&mut init).unwrap();
        let (_, report) =
            newton_solve(&problem, &SolverConfig::default(), Some(init)).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterations, 1, "history {:?}", report.residual_history);
    }

    #[test]
    fn affine_data_reproduced_for_nonlinear_law() {
        // constant strain minimizes the energy in its boundary class
        let problem = affine_problem(3.0, 0.05);
        let (field, report) =
            newton_solve(&problem, &SolverConfig::default(), None).unwrap();
        assert!(report.converged);
        let exact = problem.boundary.clone();
        assert!(field.nodal_max_distance(&exact).unwrap() < 1e-8);
        // energy decreases monotonically along accepted steps
        for pair in report.energy_history.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
    }

    #[test]
    fn nonconvergence_carries_last_iterate() {
        let problem = affine_problem(1.8, 0.05);
        let config = SolverConfig { max_newton: 0, ..Default::default() };
        let mut init = NodalField::zeros(problem.grid.clone(), 2);
        problem.enforce_boundary(&mut init).unwrap();
        match newton_solve(&problem, &config, Some(init)) {
            Err(Error::NonConvergence { iterations, last_iterate, .. }) => {
                assert_eq!(iterations, 0);
                assert!(!last_iterate.is_empty());
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn forcing_moves_the_solution() {
        let grid =
            Arc::new(StructuredGrid::new(&[0.0, 0.0], &[1.0, 1.0], &[8, 8]).unwrap());
        let f: SpatialFn<f64> = Arc::new(|_x, out| {
            out[0] = 1.0;
            out[1] = 0.0;
            Ok(())
        });
        let problem = DirichletProblem::new(
            NonlinearityLaw::regularized(2.5, 0.1).unwrap(),
            grid,
            f,
            zero_spatial_fn(),
        )
        .unwrap();
        let (field, report) =
            newton_solve(&problem, &SolverConfig::default(), None).unwrap();
        assert!(report.converged);
        assert!(field.nodal_max() > 1e-3);
        assert!(report.final_energy < 0.0); // work of the load beats stored energy
    }
}
