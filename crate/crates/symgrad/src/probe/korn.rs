//! Empirical Korn and Poincare ratios for random zero-boundary discrete
//! fields, anchored to the exact quadratic identity
//! `∫|eps u|^2 = (∫|grad u|^2 + ∫(div u)^2) / 2`.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::orlicz::{NonlinearityLaw, YoungFunctionView};
use crate::scalar::Real;
use crate::solver::{NodalField, StructuredGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// Ratio statistics over the random sample.
#[derive(Debug, Clone, Serialize)]
pub struct KornReport {
    pub samples: usize,
    /// Max of `∫|grad u|^2 / ∫|eps u|^2` (quadratic Korn ratio; at most 2
    /// for zero-boundary fields up to quadrature round-off).
    pub max_gradient_ratio: f64,
    /// Max defect of the integration-by-parts identity, relative.
    pub max_identity_defect: f64,
    /// Max of `∫B(|grad u|) / ∫B(|eps u|)`.
    pub max_young_korn_ratio: f64,
    /// Max of `∫B(|u|) / ∫B(|grad u|)`.
    pub max_young_poincare_ratio: f64,
}

fn young<T: Real>(law: &NonlinearityLaw<T>, t: T) -> Result<T> {
    if t == T::zero() {
        return Ok(T::zero());
    }
    let scale = law.eval_b(t)? * t;
    YoungFunctionView::with_tolerance(law, T::of(1e-9) * (T::one() + scale)).eval_b_big(t)
}

/// Random zero-boundary field on the grid.
pub fn random_zero_boundary_field<T: Real, R: Rng>(
    grid: Arc<StructuredGrid<T>>,
    rng: &mut R,
) -> NodalField<T> {
    let dim = grid.dim();
    let mut field = NodalField::zeros(grid.clone(), dim);
    for node in 0..grid.num_nodes() {
        if grid.is_boundary_node(node) {
            continue;
        }
        let vals: Vec<T> = (0..dim).map(|_| T::of(rng.gen_range(-1.0..1.0))).collect();
        field.set_node_values(node, &vals);
    }
    field
}

/// Integrals of one field used by the ratios.
struct FieldIntegrals<T> {
    grad_sq: T,
    strain_sq: T,
    div_sq: T,
    young_grad: T,
    young_strain: T,
    young_value: T,
}

fn integrals<T: Real>(
    law: &NonlinearityLaw<T>,
    field: &NodalField<T>,
    quad_order: usize,
) -> Result<FieldIntegrals<T>> {
    let grid = field.grid().clone();
    let dim = grid.dim();
    let rule = grid.cell_rule(quad_order);
    let mut grad = Matrix::zeros(dim, dim);
    let mut uq = vec![T::zero(); dim];
    let mut out = FieldIntegrals {
        grad_sq: T::zero(),
        strain_sq: T::zero(),
        div_sq: T::zero(),
        young_grad: T::zero(),
        young_strain: T::zero(),
        young_value: T::zero(),
    };
    for cell in 0..grid.num_cells() {
        let multi = grid.cell_multi(cell);
        let nodes = grid.cell_nodes(&multi);
        for q in 0..rule.len() {
            let w = rule.weights[q];
            field.gradient_at(&nodes, &rule, q, &mut grad);
            let strain = grad.symmetric_part();
            let grad_norm = grad.norm();
            let strain_norm = strain.norm();
            let div = grad.trace();
            field.value_at(&nodes, &rule, q, &mut uq);
            let u_norm = uq.iter().map(|&v| v * v).sum::<T>().sqrt();
            out.grad_sq = out.grad_sq + w * grad_norm * grad_norm;
            out.strain_sq = out.strain_sq + w * strain_norm * strain_norm;
            out.div_sq = out.div_sq + w * div * div;
            out.young_grad = out.young_grad + w * young(law, grad_norm)?;
            out.young_strain = out.young_strain + w * young(law, strain_norm)?;
            out.young_value = out.young_value + w * young(law, u_norm)?;
        }
    }
    Ok(out)
}

/// Sample random zero-boundary fields and report the worst ratios.
pub fn korn_poincare_ratios<T: Real>(
    grid: Arc<StructuredGrid<T>>,
    law: &NonlinearityLaw<T>,
    samples: usize,
    seed: u64,
    quad_order: usize,
) -> Result<KornReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = KornReport {
        samples,
        max_gradient_ratio: 0.0,
        max_identity_defect: 0.0,
        max_young_korn_ratio: 0.0,
        max_young_poincare_ratio: 0.0,
    };
    let half = T::of(0.5);
    for _ in 0..samples {
        let field = random_zero_boundary_field(grid.clone(), &mut rng);
        let ints = integrals(law, &field, quad_order)?;
        if ints.strain_sq > T::zero() {
            report.max_gradient_ratio = report
                .max_gradient_ratio
                .max((ints.grad_sq / ints.strain_sq).to_f64_lossy());
            let defect = (ints.strain_sq - half * (ints.grad_sq + ints.div_sq)).abs()
                / ints.strain_sq;
            report.max_identity_defect =
                report.max_identity_defect.max(defect.to_f64_lossy());
        }
        if ints.young_strain > T::zero() {
            report.max_young_korn_ratio = report
                .max_young_korn_ratio
                .max((ints.young_grad / ints.young_strain).to_f64_lossy());
        }
        if ints.young_grad > T::zero() {
            report.max_young_poincare_ratio = report
                .max_young_poincare_ratio
                .max((ints.young_value / ints.young_grad).to_f64_lossy());
        }
    }
    Ok(report)
}

/// Evaluate the ratios for one given zero-boundary field (used by the
/// gradient-bubble and forced-rotation cases).
pub fn ratios_for_field<T: Real>(
    law: &NonlinearityLaw<T>,
    field: &NodalField<T>,
    quad_order: usize,
) -> Result<(f64, f64)> {
    let ints = integrals(law, field, quad_order)?;
    let grad_ratio = (ints.grad_sq / ints.strain_sq).to_f64_lossy();
    let young_ratio = (ints.young_grad / ints.young_strain).to_f64_lossy();
    Ok((grad_ratio, young_ratio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SpatialFn;

    fn grid(cells: usize) -> Arc<StructuredGrid<f64>> {
        Arc::new(StructuredGrid::symmetric_box(2, 1.0, cells).unwrap())
    }

    #[test]
    fn quadratic_ratio_bounded_by_two() {
        let law = NonlinearityLaw::pure_power(2.0).unwrap();
        let report = korn_poincare_ratios(grid(8), &law, 25, 7, 3).unwrap();
        assert!(report.max_gradient_ratio <= 2.05, "{}", report.max_gradient_ratio);
        assert!(report.max_identity_defect < 1e-12, "{}", report.max_identity_defect);
        assert!(report.max_young_poincare_ratio > 0.0);
    }

    #[test]
    fn gradient_bubble_sits_well_below_the_bound() {
        // u = grad phi with phi = (1-x^2)^2 (1-y^2)^2: curl-free, so
        // eps u is the full Hessian and the ratio stays near 1
        let g = grid(16);
        let f: SpatialFn<f64> = Arc::new(|x, out| {
            let (a, b) = (x[0], x[1]);
            let dphi_dx = -4.0 * a * (1.0 - a * a) * (1.0 - b * b).powi(2);
            let dphi_dy = -4.0 * b * (1.0 - b * b) * (1.0 - a * a).powi(2);
            out[0] = dphi_dx;
            out[1] = dphi_dy;
            Ok(())
        });
        let field = NodalField::interpolate(g, 2, &f).unwrap();
        let law = NonlinearityLaw::pure_power(2.0).unwrap();
        let (grad_ratio, _) = ratios_for_field(&law, &field, 3).unwrap();
        assert!(grad_ratio < 1.7, "gradient field ratio {grad_ratio}");
    }

    #[test]
    fn forced_rotation_stays_finite() {
        // rigid rotation clipped to zero boundary: large but finite ratio
        let g = grid(16);
        let f: SpatialFn<f64> = Arc::new(|x, out| {
            out[0] = -x[1];
            out[1] = x[0];
            Ok(())
        });
        let mut field = NodalField::interpolate(g.clone(), 2, &f).unwrap();
        for node in 0..g.num_nodes() {
            if g.is_boundary_node(node) {
                field.set_node_values(node, &[0.0, 0.0]);
            }
        }
        let law = NonlinearityLaw::pure_power(2.0).unwrap();
        let (grad_ratio, _) = ratios_for_field(&law, &field, 3).unwrap();
        assert!(grad_ratio.is_finite());
        assert!(grad_ratio <= 2.05);
    }
}
