//! Cross-module checks: discrete energies against analytic integrals,
//! masked stress norms against one-dimensional oracles, and continuation
//! stress trajectories.

use std::sync::Arc;
use symgrad::orlicz::NonlinearityLaw;
use symgrad::probe::{ball_norms, stress_project_analytic, stress_project_discrete, BallRegion};
use symgrad::quad::adaptive;
use symgrad::solver::{
    continuation_solve, energy, newton_solve, poly_spatial_fn, zero_spatial_fn,
    DirichletProblem, DofMap, SolverConfig, StructuredGrid,
};
use symgrad::tensorfields::PolyVectorField;

fn shear_problem(p: f64, eps: f64, cells: usize) -> DirichletProblem<f64> {
    let grid = Arc::new(StructuredGrid::symmetric_box(2, 1.0, cells).unwrap());
    let shear = PolyVectorField::<f64>::singular_shear(2).unwrap();
    DirichletProblem::new(
        NonlinearityLaw::regularized(p, eps).unwrap(),
        grid,
        zero_spatial_fn(),
        poly_spatial_fn(&shear),
    )
    .unwrap()
}

#[test]
fn shear_energy_matches_analytic_integral() {
    // B_3(|eps u|) = (2|x2|)^3 / 3 integrates to 8/3 over [-1,1]^2; the
    // near-singular pinch and the nodal interpolant stay within the
    // quadrature-order budget
    let problem = shear_problem(3.0, 1e-6, 32);
    let field = problem.boundary_interpolant().unwrap();
    let value = energy(&problem, &field, 3, 1e-10).unwrap();
    let exact = 8.0 / 3.0;
    let rel = (value - exact).abs() / exact;
    assert!(rel < 0.02, "energy {value} vs {exact} (rel {rel:.3e})");
}

#[test]
fn shear_stress_ball_norms_match_one_dimensional_oracle() {
    // stress entry (2|x2|)^2 sign(x2); ball at (0, 0.4), R = 0.2 avoids the
    // degenerate plane x2 = 0
    let law = NonlinearityLaw::pure_power(3.0).unwrap();
    let shear = PolyVectorField::<f64>::singular_shear(2).unwrap();
    let grid = Arc::new(StructuredGrid::symmetric_box(2, 1.0, 128).unwrap());
    let stress = stress_project_analytic(&law, &shear, grid).unwrap();
    let center = 0.4;
    let region = BallRegion::new(vec![0.0, center], 0.2);
    let norms = ball_norms(&stress.values, &region, 5).unwrap();

    // disk cross-sections reduce each norm to a 1-d integral in x2
    let chord = |r: f64, x: f64| 2.0 * (r * r - (x - center) * (x - center)).max(0.0).sqrt();
    let l1_exact = adaptive(
        |x: f64| (2.0 * x.abs()).powi(2) * chord(0.4, x),
        center - 0.4,
        center + 0.4,
        1e-10,
    )
    .unwrap();
    let l2_sq_exact = adaptive(
        |x: f64| (2.0 * x.abs()).powi(4) * chord(0.2, x),
        center - 0.2,
        center + 0.2,
        1e-10,
    )
    .unwrap();
    // gradient: d/dx2 of 4 x2^2 sign -> 8|x2|
    let grad_sq_exact = adaptive(
        |x: f64| (8.0 * x.abs()).powi(2) * chord(0.2, x),
        center - 0.2,
        center + 0.2,
        1e-10,
    )
    .unwrap();

    let rel = |measured: f64, exact: f64| (measured - exact).abs() / exact;
    assert!(rel(norms.l1_outer, l1_exact) < 0.02, "L1 {} vs {l1_exact}", norms.l1_outer);
    assert!(
        rel(norms.l2_inner, l2_sq_exact.sqrt()) < 0.02,
        "L2 {} vs {}",
        norms.l2_inner,
        l2_sq_exact.sqrt()
    );
    assert!(
        rel(norms.grad_l2_inner, grad_sq_exact.sqrt()) < 0.02,
        "grad L2 {} vs {}",
        norms.grad_l2_inner,
        grad_sq_exact.sqrt()
    );
}

#[test]
fn ball_norms_monotone_in_radius() {
    let law = NonlinearityLaw::pure_power(3.0).unwrap();
    let shear = PolyVectorField::<f64>::singular_shear(2).unwrap();
    let grid = Arc::new(StructuredGrid::symmetric_box(2, 1.0, 64).unwrap());
    let stress = stress_project_analytic(&law, &shear, grid).unwrap();
    let mut previous: Option<(f64, f64, f64)> = None;
    for radius in [0.1, 0.2, 0.3, 0.4] {
        let region = BallRegion::new(vec![0.0, 0.0], radius);
        let n = ball_norms(&stress.values, &region, 4).unwrap();
        if let Some((l1, l2, g)) = previous {
            assert!(n.l1_outer >= l1 && n.l2_inner >= l2 && n.grad_l2_inner >= g);
        }
        previous = Some((n.l1_outer, n.l2_inner, n.grad_l2_inner));
    }
}

#[test]
fn quadratic_solution_equals_assembled_linear_system() {
    // p = 2: one Newton step from zero interior IS the linear solve; the
    // converged field must match it to solver tolerance
    let problem = shear_problem(2.0, 0.3, 8);
    let grid = problem.grid.clone();
    let dofs = DofMap::build(&grid);
    let bw = dofs.bandwidth(&grid);
    let mut start = symgrad::solver::NodalField::zeros(grid.clone(), 2);
    problem.enforce_boundary(&mut start).unwrap();
    let r0 = symgrad::solver::residual(&problem, &start, &dofs, 3).unwrap();
    let k = symgrad::solver::tangent(&problem, &start, &dofs, 3, bw).unwrap();
    let delta = k.cholesky().unwrap().solve(&r0.iter().map(|v| -v).collect::<Vec<_>>());
    let mut linear = start.clone();
    symgrad::solver::scatter_interior(&mut linear, &dofs, &delta, 1.0);

    let (solved, report) =
        newton_solve(&problem, &SolverConfig::default(), Some(start)).unwrap();
    assert!(report.converged && report.iterations == 1);
    for (a, b) in solved.values().iter().zip(linear.values()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn three_dimensional_solve_reproduces_affine_data() {
    let grid = Arc::new(StructuredGrid::symmetric_box(3, 1.0, 4).unwrap());
    let m = vec![
        vec![0.3, 0.1, 0.0],
        vec![0.1, -0.2, 0.4],
        vec![0.0, 0.4, 0.1],
    ];
    let affine = PolyVectorField::affine(&m, &[0.0, 0.5, -0.5]).unwrap();
    let problem = DirichletProblem::new(
        NonlinearityLaw::regularized(2.4, 0.1).unwrap(),
        grid.clone(),
        zero_spatial_fn(),
        poly_spatial_fn(&affine),
    )
    .unwrap();
    let mut start = symgrad::solver::NodalField::zeros(grid, 3);
    problem.enforce_boundary(&mut start).unwrap();
    let (field, report) =
        newton_solve(&problem, &SolverConfig::default(), Some(start)).unwrap();
    assert!(report.converged);
    let err = field.nodal_max_distance(&poly_spatial_fn(&affine)).unwrap();
    assert!(err < 1e-8, "3-d affine reproduction error {err}");
}

#[test]
fn shared_types_cross_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<NonlinearityLaw<f64>>();
    assert_send_sync::<PolyVectorField<f64>>();
    assert_send_sync::<symgrad::tensorfields::TensorSample<f64>>();
    assert_send_sync::<symgrad::solver::NodalField<f64>>();
    assert_send_sync::<DirichletProblem<f64>>();
    assert_send_sync::<symgrad::probe::StressField<f64>>();

    // concurrent pointwise evaluation over shared jets
    let field = PolyVectorField::<f64>::singular_shear(2).unwrap();
    let jets = Arc::new(field.jets());
    let handles: Vec<_> = (0..4)
        .map(|k| {
            let jets = jets.clone();
            std::thread::spawn(move || {
                let x = [0.1 * k as f64, 0.3];
                jets.sample(&x).sym_grad.norm()
            })
        })
        .collect();
    for h in handles {
        assert!(h.join().unwrap().is_finite());
    }
}

#[test]
fn continuation_stress_trajectory_stabilizes() {
    // the interior stress-gradient norm settles as the pinch shrinks
    for p in [3.0, 1.8] {
        let problem = shear_problem(p, 0.1, 16);
        let config = SolverConfig { eps_floor: 1e-4, ..Default::default() };
        let outcome = continuation_solve(&problem, &config).unwrap();
        let region = BallRegion::new(vec![0.0, 0.4], 0.2);
        let mut grad_norms = Vec::new();
        for stage in &outcome.stages {
            let law = NonlinearityLaw::regularized(p, stage.eps).unwrap();
            let stress = stress_project_discrete(&law, &stage.field, 3).unwrap();
            grad_norms.push(ball_norms(&stress.values, &region, 3).unwrap().grad_l2_inner);
        }
        let last = grad_norms[grad_norms.len() - 1];
        let prev = grad_norms[grad_norms.len() - 2];
        let change = (last - prev).abs() / prev;
        assert!(
            change < 0.10,
            "p={p}: stress gradient trajectory {grad_norms:?} moved {change:.3} at the end"
        );
    }
}
