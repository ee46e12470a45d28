//! Discrete difference-quotient seminorms: the translation modulus of a
//! nodal field over shrinking balls, scaled by `|h|^-alpha`, with
//! translations along grid axes at integer multiples of the mesh size.

use crate::error::{Error, Result};
use crate::orlicz::NonlinearityLaw;
use crate::probe::region::BallRegion;
use crate::scalar::Real;
use crate::solver::NodalField;
use serde::Serialize;

/// The embedding exponent `alpha = min(1, 1/(1 + s))` from the law's upper
/// index.
pub fn nikolskii_alpha<T: Real>(law: &NonlinearityLaw<T>) -> T {
    let (_, s_upper) = law.index_bounds();
    (T::one() / (T::one() + s_upper)).min(T::one())
}

/// One sampled translation.
#[derive(Debug, Clone, Serialize)]
pub struct ShiftRecord {
    pub axis: usize,
    pub steps: i64,
    pub h: f64,
    /// `|| tau_h U ||_{L1(B_{R-|h|})}`.
    pub l1: f64,
    /// The same scaled by `|h|^-alpha`.
    pub scaled: f64,
}

/// Discrete translation norm of a field over a ball.
#[derive(Debug, Clone, Serialize)]
pub struct NikolskiiNorm {
    pub alpha: f64,
    /// `L^1` norm over the full ball.
    pub l1: f64,
    /// Max of the scaled translation terms.
    pub seminorm: f64,
    pub shifts: Vec<ShiftRecord>,
}

impl NikolskiiNorm {
    pub fn norm(&self) -> f64 {
        self.l1 + self.seminorm
    }
}

/// Empirical embedding ratio: the translation norm of the strain against
/// `1 +` the squared Sobolev norm of its stress. The bound's constant is
/// not explicit, so the ratio is reported, never asserted.
pub fn embedding_ratio(
    strain_norm: &NikolskiiNorm,
    stress_norms: &crate::probe::region::BallNorms,
) -> f64 {
    let sobolev_sq = stress_norms.l2_inner * stress_norms.l2_inner
        + stress_norms.grad_l2_inner * stress_norms.grad_l2_inner;
    strain_norm.norm() / (sobolev_sq + 1.0)
}

/// Compute the discrete seminorm: translations along each axis, both signs,
/// at multiples of the mesh size up to `R / 2`.
pub fn nikolskii_seminorm<T: Real>(
    field: &NodalField<T>,
    region: &BallRegion<T>,
    alpha: T,
    quad_order: usize,
) -> Result<NikolskiiNorm> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::Domain(format!(
            "translation exponent must lie in (0, 1], got {}",
            alpha.to_f64_lossy()
        )));
    }
    let grid = field.grid().clone();
    region.validate_in(&grid)?;
    let rule = grid.cell_rule(quad_order);
    let dim = grid.dim();
    let ncomp = field.ncomp();
    let mut value = vec![T::zero(); ncomp];
    let mut shifted_value = vec![T::zero(); ncomp];

    // L1 over the full ball
    let mut l1 = T::zero();
    let mut hit = 0usize;
    for cell in 0..grid.num_cells() {
        let multi = grid.cell_multi(cell);
        let nodes = grid.cell_nodes(&multi);
        for q in 0..rule.len() {
            let x = grid.position_in_cell(&multi, &rule.points[q]);
            if !region.contains(&x, region.radius) {
                continue;
            }
            hit += 1;
            field.value_at(&nodes, &rule, q, &mut value);
            let mag: T = value.iter().map(|&v| v * v).sum::<T>().sqrt();
            l1 = l1 + rule.weights[q] * mag;
        }
    }
    if hit == 0 {
        return Err(Error::DegenerateRegion(
            "ball captured no quadrature points".into(),
        ));
    }

    let mut shifts = Vec::new();
    let mut seminorm = 0.0f64;
    let mut any_shift = false;
    for axis in 0..dim {
        let spacing = grid.spacing()[axis];
        let max_steps =
            (region.radius / (T::of(2.0) * spacing)).floor().to_f64_lossy() as i64;
        for steps in 1..=max_steps {
            for sign in [1i64, -1] {
                let signed = sign * steps;
                let h_len = spacing * T::of_usize(steps as usize);
                let shrunk = region.radius - h_len;
                if !(shrunk > T::zero()) {
                    continue;
                }
                any_shift = true;
                let mut translated_l1 = T::zero();
                for cell in 0..grid.num_cells() {
                    let multi = grid.cell_multi(cell);
                    let target = multi[axis] as i64 + signed;
                    if target < 0 || target >= grid.cells()[axis] as i64 {
                        continue;
                    }
                    let mut shifted_multi = multi.clone();
                    shifted_multi[axis] = target as usize;
                    let nodes = grid.cell_nodes(&multi);
                    let shifted_nodes = grid.cell_nodes(&shifted_multi);
                    for q in 0..rule.len() {
                        let x = grid.position_in_cell(&multi, &rule.points[q]);
                        if !region.contains(&x, shrunk) {
                            continue;
                        }
                        field.value_at(&nodes, &rule, q, &mut value);
                        field.value_at(&shifted_nodes, &rule, q, &mut shifted_value);
                        let mut diff_sq = T::zero();
                        for c in 0..ncomp {
                            let d = shifted_value[c] - value[c];
                            diff_sq = diff_sq + d * d;
                        }
                        translated_l1 = translated_l1 + rule.weights[q] * diff_sq.sqrt();
                    }
                }
                let scaled = (translated_l1 / h_len.powf(alpha)).to_f64_lossy();
                seminorm = seminorm.max(scaled);
                shifts.push(ShiftRecord {
                    axis,
                    steps: signed,
                    h: h_len.to_f64_lossy(),
                    l1: translated_l1.to_f64_lossy(),
                    scaled,
                });
            }
        }
    }
    if !any_shift {
        return Err(Error::DegenerateRegion(
            "region too small for any admissible translation".into(),
        ));
    }
    Ok(NikolskiiNorm {
        alpha: alpha.to_f64_lossy(),
        l1: l1.to_f64_lossy(),
        seminorm,
        shifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::StructuredGrid;
    use std::sync::Arc;

    fn grid(cells: usize) -> Arc<StructuredGrid<f64>> {
        Arc::new(StructuredGrid::symmetric_box(2, 1.0, cells).unwrap())
    }

    #[test]
    fn alpha_from_law_indices() {
        let p3 = NonlinearityLaw::pure_power(3.0).unwrap();
        assert_eq!(nikolskii_alpha(&p3), 0.5);
        let p16 = NonlinearityLaw::pure_power(1.6).unwrap();
        assert_eq!(nikolskii_alpha(&p16), 1.0); // 1/(p-1) > 1 capped
        let p2 = NonlinearityLaw::pure_power(2.0).unwrap();
        assert_eq!(nikolskii_alpha(&p2), 1.0);
    }

    #[test]
    fn constant_field_has_zero_translation_term() {
        let g = grid(16);
        let n = g.num_nodes();
        let field = NodalField::from_values(g, 1, vec![2.5; n]).unwrap();
        let region = BallRegion::new(vec![0.0, 0.0], 0.4);
        let out = nikolskii_seminorm(&field, &region, 0.5, 3).unwrap();
        assert_eq!(out.seminorm, 0.0);
        assert!(out.l1 > 0.0);
        assert!(!out.shifts.is_empty());
    }

    #[test]
    fn opposite_translations_agree_for_symmetric_profiles() {
        // U(x) = 2 x2 is odd: |tau_h U| = 2|h| is the same for +h and -h
        let g = grid(32);
        let f: crate::solver::SpatialFn<f64> = std::sync::Arc::new(|x, out| {
            out[0] = 2.0 * x[1];
            Ok(())
        });
        let field = NodalField::interpolate(g, 1, &f).unwrap();
        let region = BallRegion::new(vec![0.0, 0.0], 0.4);
        let out = nikolskii_seminorm(&field, &region, 0.5, 3).unwrap();
        for rec in out.shifts.iter().filter(|r| r.steps > 0) {
            let mirror = out
                .shifts
                .iter()
                .find(|r| r.axis == rec.axis && r.steps == -rec.steps)
                .expect("mirror shift present");
            assert!(
                (rec.l1 - mirror.l1).abs() <= 1e-12 * (1.0 + rec.l1),
                "axis {} steps {}",
                rec.axis,
                rec.steps
            );
        }
    }

    #[test]
    fn too_small_region_errors() {
        let g = grid(4); // spacing 0.5: R/2 < h for R = 0.3
        let n = g.num_nodes();
        let field = NodalField::from_values(g, 1, vec![1.0; n]).unwrap();
        let region = BallRegion::new(vec![0.0, 0.0], 0.3);
        assert!(matches!(
            nikolskii_seminorm(&field, &region, 0.5, 2),
            Err(Error::DegenerateRegion(_))
        ));
    }

    #[test]
    fn alpha_validation() {
        let g = grid(8);
        let n = g.num_nodes();
        let field = NodalField::from_values(g, 1, vec![1.0; n]).unwrap();
        let region = BallRegion::new(vec![0.0, 0.0], 0.4);
        assert!(nikolskii_seminorm(&field, &region, 0.0, 2).is_err());
        assert!(nikolskii_seminorm(&field, &region, 1.5, 2).is_err());
    }
}
