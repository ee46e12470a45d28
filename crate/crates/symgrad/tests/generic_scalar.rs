//! The numeric core is generic over the scalar; exercise the `f32`
//! instantiation end to end at loose tolerances.

use std::sync::Arc;
use symgrad::identities::{admissible_range, claim_matrix_spectrum};
use symgrad::orlicz::{estimate_indices, NonlinearityLaw, YoungFunctionView};
use symgrad::solver::{
    newton_solve, poly_spatial_fn, zero_spatial_fn, DirichletProblem, SolverConfig,
    StructuredGrid,
};
use symgrad::tensorfields::PolyVectorField;

#[test]
fn thresholds_in_single_precision() {
    let r = admissible_range::<f32>(8).unwrap();
    assert!((r.p_minus - 1.75).abs() < 1e-6);
    assert!((r.p_plus - 2.5).abs() < 1e-6);
    assert!(admissible_range::<f32>(5).unwrap().p_plus.is_infinite());
}

#[test]
fn laws_and_young_functions_in_single_precision() {
    let law = NonlinearityLaw::<f32>::regularized(1.5, 0.1).unwrap();
    let a = law.eval_a(1.0e6).unwrap();
    assert!((a - 0.1).abs() < 1e-2, "tail value {a}");
    assert_eq!(law.eval_theta(0.0).unwrap(), 0.0);

    let view = YoungFunctionView::with_tolerance(&law, 1e-6f32);
    let b_big = view.eval_b_big(2.0).unwrap();
    assert!(b_big > 0.0 && b_big.is_finite());

    let est = estimate_indices(&law, 1e-3f32, 1e3, 256).unwrap();
    assert!(est.i_lower >= -0.5 - 1e-5 && est.s_upper <= 1e-5);
}

#[test]
fn claim_spectrum_in_single_precision() {
    let ev = claim_matrix_spectrum::<f32>();
    assert!(ev[0].abs() < 1e-5);
    assert!(ev[1] > 0.0 && ev[2] > 0.0);
}

#[test]
fn quadratic_solve_in_single_precision() {
    let grid = Arc::new(StructuredGrid::<f32>::symmetric_box(2, 1.0, 6).unwrap());
    let m = vec![vec![0.0f32, 0.5], vec![0.5, 0.0]];
    let affine = PolyVectorField::affine(&m, &[0.0, 0.0]).unwrap();
    let problem = DirichletProblem::new(
        NonlinearityLaw::regularized(2.0f32, 0.25).unwrap(),
        grid,
        zero_spatial_fn(),
        poly_spatial_fn(&affine),
    )
    .unwrap();
    let config = SolverConfig::<f32> {
        newton_tol: 1e-4,
        young_rel_tol: 1e-5,
        ..Default::default()
    };
    let (field, report) = newton_solve(&problem, &config, None).unwrap();
    assert!(report.converged);
    let err = field.nodal_max_distance(&poly_spatial_fn(&affine)).unwrap();
    assert!(err < 1e-3, "nodal error {err}");
}
