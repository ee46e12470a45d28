//! Nodal stress fields: projection of `A(eps u)` from discrete solutions or
//! analytic fields, with conforming discrete gradients.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::orlicz::NonlinearityLaw;
use crate::scalar::Real;
use crate::solver::{NodalField, StructuredGrid};
use crate::tensorfields::{Coeff, PolyVectorField};
use std::sync::Arc;

/// Nodal stress values (`dim^2` components per node) plus projection
/// metadata.
#[derive(Debug, Clone)]
pub struct StressField<T> {
    pub law: NonlinearityLaw<T>,
    pub values: NodalField<T>,
    /// Nodes where the strain vanished and the zero stress convention was
    /// applied under a singular law.
    pub zero_strain_nodes: usize,
}

impl<T: Real> StressField<T> {
    pub fn grid(&self) -> &Arc<StructuredGrid<T>> {
        self.values.grid()
    }
}

/// Project the stress of a discrete solution: strains are taken cell-wise at
/// quadrature points and stress samples are volume-averaged to the nodes
/// through the multilinear weights (a lumped projection). The resulting
/// nodal field is differentiated like any other conforming field.
pub fn stress_project_discrete<T: Real>(
    law: &NonlinearityLaw<T>,
    solution: &NodalField<T>,
    quad_order: usize,
) -> Result<StressField<T>> {
    let grid = solution.grid().clone();
    let dim = grid.dim();
    let ncomp = dim * dim;
    let rule = grid.cell_rule(quad_order);
    let mut accum = vec![T::zero(); grid.num_nodes() * ncomp];
    let mut weight_sum = vec![T::zero(); grid.num_nodes()];
    let mut grad = Matrix::zeros(dim, dim);
    for cell in 0..grid.num_cells() {
        let multi = grid.cell_multi(cell);
        let nodes = grid.cell_nodes(&multi);
        for q in 0..rule.len() {
            solution.gradient_at(&nodes, &rule, q, &mut grad);
            let strain = grad.symmetric_part();
            let stress = law.stress(&strain);
            let w = rule.weights[q];
            for (corner, &node) in nodes.iter().enumerate() {
                let shape_weight = w * rule.shapes[q][corner];
                weight_sum[node] = weight_sum[node] + shape_weight;
                for i in 0..dim {
                    for j in 0..dim {
                        let c = i * dim + j;
                        accum[node * ncomp + c] =
                            accum[node * ncomp + c] + shape_weight * stress[(i, j)];
                    }
                }
            }
        }
    }
    for node in 0..grid.num_nodes() {
        for c in 0..ncomp {
            accum[node * ncomp + c] = accum[node * ncomp + c] / weight_sum[node];
        }
    }
    Ok(StressField {
        law: *law,
        values: NodalField::from_values(grid, ncomp, accum)?,
        zero_strain_nodes: 0,
    })
}

/// Exact nodal stress of an analytic polynomial field. Zero strain under a
/// singular law takes the zero stress convention and is counted in the
/// metadata.
pub fn stress_project_analytic<T: Real + Coeff>(
    law: &NonlinearityLaw<T>,
    field: &PolyVectorField<T>,
    grid: Arc<StructuredGrid<T>>,
) -> Result<StressField<T>> {
    let dim = grid.dim();
    let ncomp = dim * dim;
    let jets = field.jets();
    let mut values = vec![T::zero(); grid.num_nodes() * ncomp];
    let mut zero_strain_nodes = 0usize;
    for node in 0..grid.num_nodes() {
        let x = grid.node_coords(node);
        let mut strain = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                strain[(i, j)] = jets.sym[i][j].eval(&x);
            }
        }
        if strain.norm() == T::zero() && law.singular_at_zero() {
            zero_strain_nodes += 1;
        }
        let stress = law.stress(&strain);
        for i in 0..dim {
            for j in 0..dim {
                values[node * ncomp + i * dim + j] = stress[(i, j)];
            }
        }
    }
    Ok(StressField {
        law: *law,
        values: NodalField::from_values(grid, ncomp, values)?,
        zero_strain_nodes,
    })
}

/// Nodal strain samples of an analytic field (`dim^2` components), used by
/// difference-quotient probes.
pub fn strain_nodal_field<T: Real + Coeff>(
    field: &PolyVectorField<T>,
    grid: Arc<StructuredGrid<T>>,
) -> Result<NodalField<T>> {
    let dim = grid.dim();
    let ncomp = dim * dim;
    let jets = field.jets();
    let mut values = vec![T::zero(); grid.num_nodes() * ncomp];
    for node in 0..grid.num_nodes() {
        let x = grid.node_coords(node);
        for i in 0..dim {
            for j in 0..dim {
                values[node * ncomp + i * dim + j] = jets.sym[i][j].eval(&x);
            }
        }
    }
    NodalField::from_values(grid, ncomp, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::poly_spatial_fn;

    fn grid() -> Arc<StructuredGrid<f64>> {
        Arc::new(StructuredGrid::symmetric_box(2, 1.0, 8).unwrap())
    }

    #[test]
    fn quadratic_law_projects_strain_itself() {
        let law = NonlinearityLaw::pure_power(2.0).unwrap();
        let shear = PolyVectorField::<f64>::singular_shear(2).unwrap();
        let stress = stress_project_analytic(&law, &shear, grid()).unwrap();
        let strain = strain_nodal_field(&shear, grid()).unwrap();
        for (a, b) in stress.values.values().iter().zip(strain.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn shear_stress_has_reported_diagonal_form() {
        let law = NonlinearityLaw::pure_power(3.0).unwrap();
        let shear = PolyVectorField::<f64>::singular_shear(2).unwrap();
        let stress = stress_project_analytic(&law, &shear, grid()).unwrap();
        let grid = stress.grid().clone();
        for node in 0..grid.num_nodes() {
            let x = grid.node_coords(node);
            let vals = stress.values.node_values(node);
            let expect = (2.0 * x[1].abs()).powi(2) * x[1].signum();
            assert!((vals[0] - expect).abs() < 1e-12, "node at {x:?}");
            assert!(vals[1].abs() < 1e-14 && vals[2].abs() < 1e-14 && vals[3].abs() < 1e-14);
        }
    }

    #[test]
    fn singular_law_zero_strain_is_flagged() {
        // nodes on x2 = 0 have vanishing strain
        let law = NonlinearityLaw::pure_power(1.5).unwrap();
        let shear = PolyVectorField::<f64>::singular_shear(2).unwrap();
        let stress = stress_project_analytic(&law, &shear, grid()).unwrap();
        assert_eq!(stress.zero_strain_nodes, 9);
    }

    #[test]
    fn discrete_projection_of_affine_field_is_constant() {
        let law = NonlinearityLaw::regularized(2.5, 0.1).unwrap();
        let m = vec![vec![0.2, 0.5], vec![0.5, -0.1]];
        let affine = PolyVectorField::affine(&m, &[0.0, 0.0]).unwrap();
        let g = grid();
        let nodal =
            NodalField::interpolate(g.clone(), 2, &poly_spatial_fn(&affine)).unwrap();
        let stress = stress_project_discrete(&law, &nodal, 3).unwrap();
        let first = stress.values.node_values(0).to_vec();
        for node in 1..g.num_nodes() {
            for (a, b) in stress.values.node_values(node).iter().zip(&first) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        // strain is constant, so the discrete stress gradient vanishes
        let rule = g.cell_rule(3);
        let mut grad = Matrix::zeros(4, 2);
        stress.values.gradient_at(&g.cell_nodes(&[2, 3]), &rule, 0, &mut grad);
        assert!(grad.norm() < 1e-12);
    }
}
