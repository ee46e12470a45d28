//! Ball-shaped measurement regions realized as quadrature-point masks on the
//! structured grid, and the masked stress norms entering the local estimate.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;
use crate::solver::{NodalField, SpatialFn, StructuredGrid};
use serde::Serialize;

/// Ball of radius `R`; the doubled ball must fit inside the grid box.
#[derive(Debug, Clone)]
pub struct BallRegion<T> {
    pub center: Vec<T>,
    pub radius: T,
}

impl<T: Real> BallRegion<T> {
    pub fn new(center: Vec<T>, radius: T) -> Self {
        BallRegion { center, radius }
    }

    /// The doubled ball must lie inside the grid box.
    pub fn validate_in(&self, grid: &StructuredGrid<T>) -> Result<()> {
        if self.center.len() != grid.dim() {
            return Err(Error::Domain("region dimension mismatch".into()));
        }
        if !(self.radius > T::zero()) {
            return Err(Error::Domain("region radius must be positive".into()));
        }
        let two_r = self.radius * T::of(2.0);
        for k in 0..grid.dim() {
            if self.center[k] - two_r < grid.lo()[k] || self.center[k] + two_r > grid.hi()[k]
            {
                return Err(Error::Domain(format!(
                    "doubled ball leaves the domain along axis {k}"
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[T], radius: T) -> bool {
        let mut d2 = T::zero();
        for k in 0..self.center.len() {
            let d = x[k] - self.center[k];
            d2 = d2 + d * d;
        }
        d2 <= radius * radius
    }
}

/// Masked norms of a nodal tensor field over a ball region.
#[derive(Debug, Clone, Serialize)]
pub struct BallNorms {
    /// `L^1` norm over the doubled ball.
    pub l1_outer: f64,
    /// `L^2` norm over the inner ball.
    pub l2_inner: f64,
    /// `L^2` norm of the discrete gradient over the inner ball.
    pub grad_l2_inner: f64,
    pub inner_points: usize,
    pub outer_points: usize,
}

/// Quadrature-masked `L^1`, `L^2`, and gradient-`L^2` norms of a nodal field
/// over `(B_2R, B_R, B_R)`.
pub fn ball_norms<T: Real>(
    field: &NodalField<T>,
    region: &BallRegion<T>,
    quad_order: usize,
) -> Result<BallNorms> {
    let grid = field.grid().clone();
    region.validate_in(&grid)?;
    let rule = grid.cell_rule(quad_order);
    let ncomp = field.ncomp();
    let dim = grid.dim();
    let mut value = vec![T::zero(); ncomp];
    let mut grad = Matrix::zeros(ncomp, dim);
    let outer_radius = region.radius * T::of(2.0);

    let mut l1_outer = T::zero();
    let mut l2_inner = T::zero();
    let mut grad_l2_inner = T::zero();
    let mut inner_points = 0usize;
    let mut outer_points = 0usize;
    for cell in 0..grid.num_cells() {
        let multi = grid.cell_multi(cell);
        let nodes = grid.cell_nodes(&multi);
        for q in 0..rule.len() {
            let x = grid.position_in_cell(&multi, &rule.points[q]);
            let in_outer = region.contains(&x, outer_radius);
            if !in_outer {
                continue;
            }
            let w = rule.weights[q];
            field.value_at(&nodes, &rule, q, &mut value);
            let mag_sq: T = value.iter().map(|&v| v * v).sum();
            l1_outer = l1_outer + w * mag_sq.sqrt();
            outer_points += 1;
            if region.contains(&x, region.radius) {
                inner_points += 1;
                l2_inner = l2_inner + w * mag_sq;
                field.gradient_at(&nodes, &rule, q, &mut grad);
                grad_l2_inner = grad_l2_inner + w * grad.dot(&grad);
            }
        }
    }
    if inner_points == 0 {
        return Err(Error::DegenerateRegion(format!(
            "ball of radius {:.3e} captured no quadrature points",
            region.radius.to_f64_lossy()
        )));
    }
    Ok(BallNorms {
        l1_outer: l1_outer.to_f64_lossy(),
        l2_inner: l2_inner.sqrt().to_f64_lossy(),
        grad_l2_inner: grad_l2_inner.sqrt().to_f64_lossy(),
        inner_points,
        outer_points,
    })
}

/// `L^2` norm of a spatial function over a ball by the same masked rule.
pub fn masked_l2_of_fn<T: Real>(
    grid: &StructuredGrid<T>,
    f: &SpatialFn<T>,
    region: &BallRegion<T>,
    radius: T,
    quad_order: usize,
) -> Result<f64> {
    let rule = grid.cell_rule(quad_order);
    let mut buf = vec![T::zero(); grid.dim()];
    let mut total = T::zero();
    let mut hit = 0usize;
    for cell in 0..grid.num_cells() {
        let multi = grid.cell_multi(cell);
        for q in 0..rule.len() {
            let x = grid.position_in_cell(&multi, &rule.points[q]);
            if !region.contains(&x, radius) {
                continue;
            }
            hit += 1;
            f(&x, &mut buf)?;
            let mag_sq: T = buf.iter().map(|&v| v * v).sum();
            total = total + rule.weights[q] * mag_sq;
        }
    }
    if hit == 0 {
        return Err(Error::DegenerateRegion("mask captured no quadrature points".into()));
    }
    Ok(total.sqrt().to_f64_lossy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::zero_spatial_fn;
    use std::sync::Arc;

    fn grid(cells: usize) -> Arc<StructuredGrid<f64>> {
        Arc::new(StructuredGrid::symmetric_box(2, 1.0, cells).unwrap())
    }

    #[test]
    fn doubled_ball_must_fit() {
        let g = grid(8);
        assert!(BallRegion::new(vec![0.0, 0.0], 0.4).validate_in(&g).is_ok());
        assert!(BallRegion::new(vec![0.5, 0.0], 0.4).validate_in(&g).is_err());
        assert!(BallRegion::new(vec![0.0, 0.0], 0.6).validate_in(&g).is_err());
    }

    #[test]
    fn zero_field_zero_norms() {
        let g = grid(16);
        let field = NodalField::zeros(g, 1);
        let norms =
            ball_norms(&field, &BallRegion::new(vec![0.0, 0.0], 0.3), 3).unwrap();
        assert_eq!(norms.l1_outer, 0.0);
        assert_eq!(norms.l2_inner, 0.0);
        assert_eq!(norms.grad_l2_inner, 0.0);
        assert!(norms.inner_points > 0);
    }

    #[test]
    fn constant_field_matches_ball_volume() {
        let g = grid(64);
        let n_nodes = g.num_nodes();
        let field =
            NodalField::from_values(g.clone(), 1, vec![3.0; n_nodes]).unwrap();
        let r = 0.35;
        let norms = ball_norms(&field, &BallRegion::new(vec![0.0, 0.0], r), 5).unwrap();
        let area = std::f64::consts::PI * r * r;
        // L2 = |C| sqrt(area) up to mask discretization
        let expect = 3.0 * area.sqrt();
        assert!(
            (norms.l2_inner - expect).abs() < 0.02 * expect,
            "{} vs {expect}",
            norms.l2_inner
        );
        // constant field has zero discrete gradient
        assert!(norms.grad_l2_inner < 1e-12);
        // L1 over the doubled ball
        let expect_l1 = 3.0 * std::f64::consts::PI * (2.0 * r) * (2.0 * r);
        assert!((norms.l1_outer - expect_l1).abs() < 0.02 * expect_l1);
    }

    #[test]
    fn degenerate_region_is_reported() {
        let g = grid(4); // h = 0.5: a tiny ball misses every quadrature point
        let field = NodalField::zeros(g, 1);
        let err = ball_norms(&field, &BallRegion::new(vec![0.26, 0.26], 0.01), 1);
        assert!(matches!(err, Err(Error::DegenerateRegion(_))));
    }

    #[test]
    fn masked_fn_norm_zero_fn() {
        let g = grid(8);
        let region = BallRegion::new(vec![0.0, 0.0], 0.4);
        let v = masked_l2_of_fn(&g, &zero_spatial_fn(), &region, 0.8, 3).unwrap();
        assert_eq!(v, 0.0);
    }
}
