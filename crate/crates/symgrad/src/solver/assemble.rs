//! Galerkin assembly for the regularized Dirichlet problem: energy,
//! residual (the exact gradient of the energy under the same quadrature),
//! and the tangent band matrix.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::orlicz::{LawKind, NonlinearityLaw, YoungFunctionView};
use crate::scalar::Real;
use crate::solver::field::{NodalField, SpatialFn};
use crate::solver::grid::{CellRule, StructuredGrid};
use crate::solver::linsolve::SymBandMatrix;
use std::sync::Arc;

/// Dirichlet problem `-div(A(eps u)) = f` on the grid box with boundary
/// datum `g`. The law must be a regularized pinch: the solver never touches
/// the singular power law directly.
pub struct DirichletProblem<T> {
    pub law: NonlinearityLaw<T>,
    pub grid: Arc<StructuredGrid<T>>,
    pub rhs: SpatialFn<T>,
    pub boundary: SpatialFn<T>,
}

impl<T: Real> DirichletProblem<T> {
    pub fn new(
        law: NonlinearityLaw<T>,
        grid: Arc<StructuredGrid<T>>,
        rhs: SpatialFn<T>,
        boundary: SpatialFn<T>,
    ) -> Result<Self> {
        if law.kind != LawKind::Regularized {
            return Err(Error::Domain(
                "the discrete solver accepts regularized laws only".into(),
            ));
        }
        Ok(DirichletProblem { law, grid, rhs, boundary })
    }

    /// Replace the pinch parameter (used by continuation stages).
    pub fn with_eps(&self, eps: T) -> Result<Self> {
        Ok(DirichletProblem {
            law: NonlinearityLaw::regularized(self.law.p, eps)?,
            grid: self.grid.clone(),
            rhs: self.rhs.clone(),
            boundary: self.boundary.clone(),
        })
    }

    /// Nodal interpolant of the boundary datum over all nodes; the standard
    /// initial iterate.
    pub fn boundary_interpolant(&self) -> Result<NodalField<T>> {
        NodalField::interpolate(self.grid.clone(), self.grid.dim(), &self.boundary)
    }

    /// Overwrite boundary nodes of a field with the boundary datum.
    pub fn enforce_boundary(&self, field: &mut NodalField<T>) -> Result<()> {
        let dim = self.grid.dim();
        let mut buf = vec![T::zero(); dim];
        for node in 0..self.grid.num_nodes() {
            if self.grid.is_boundary_node(node) {
                let x = self.grid.node_coords(node);
                (self.boundary)(&x, &mut buf)?;
                field.set_node_values(node, &buf);
            }
        }
        Ok(())
    }
}

/// Interior degree-of-freedom numbering: `dof = interior_rank * dim + comp`.
pub struct DofMap {
    /// node -> interior rank, or `usize::MAX` for boundary nodes.
    pub interior_rank: Vec<usize>,
    pub num_interior_nodes: usize,
    pub dim: usize,
}

impl DofMap {
    pub fn build<T: Real>(grid: &StructuredGrid<T>) -> Self {
        let mut interior_rank = vec![usize::MAX; grid.num_nodes()];
        let mut next = 0;
        for node in 0..grid.num_nodes() {
            if !grid.is_boundary_node(node) {
                interior_rank[node] = next;
                next += 1;
            }
        }
        DofMap { interior_rank, num_interior_nodes: next, dim: grid.dim() }
    }

    pub fn num_dofs(&self) -> usize {
        self.num_interior_nodes * self.dim
    }

    #[inline]
    pub fn dof(&self, node: usize, comp: usize) -> Option<usize> {
        let rank = self.interior_rank[node];
        if rank == usize::MAX {
            None
        } else {
            Some(rank * self.dim + comp)
        }
    }

    /// Band width of the tangent matrix under this numbering.
    pub fn bandwidth<T: Real>(&self, grid: &StructuredGrid<T>) -> usize {
        let mut bw = 0usize;
        for cell in 0..grid.num_cells() {
            let nodes = grid.cell_nodes(&grid.cell_multi(cell));
            let ranks: Vec<usize> = nodes
                .iter()
                .filter_map(|&n| {
                    let r = self.interior_rank[n];
                    (r != usize::MAX).then_some(r)
                })
                .collect();
            for &a in &ranks {
                for &b in &ranks {
                    if a > b {
                        bw = bw.max((a - b) * self.dim + self.dim - 1);
                    }
                }
            }
        }
        bw.max(self.dim - 1)
    }
}

/// Young function value used by the energy: closed forms where available,
/// otherwise adaptive quadrature at a tolerance relative to `b(t) t`.
fn young_value<T: Real>(law: &NonlinearityLaw<T>, t: T, rel_tol: T) -> Result<T> {
    if t == T::zero() {
        return Ok(T::zero());
    }
    let scale = law.eval_b(t)? * t;
    let view = YoungFunctionView::with_tolerance(law, rel_tol * (T::one() + scale));
    view.eval_b_big(t)
}

/// Strain at one quadrature point (symmetric part of the interpolated
/// gradient).
fn strain_at<T: Real>(
    field: &NodalField<T>,
    cell_nodes: &[usize],
    rule: &CellRule<T>,
    q: usize,
    grad_buf: &mut Matrix<T>,
) -> Matrix<T> {
    field.gradient_at(cell_nodes, rule, q, grad_buf);
    grad_buf.symmetric_part()
}

/// Energy `∫ B(|eps u|) - f . u` by cell quadrature.
pub fn energy<T: Real>(
    problem: &DirichletProblem<T>,
    field: &NodalField<T>,
    quad_order: usize,
    young_rel_tol: T,
) -> Result<T> {
    let grid = &problem.grid;
    let dim = grid.dim();
    let rule = grid.cell_rule(quad_order);
    let mut grad = Matrix::zeros(dim, dim);
    let mut uq = vec![T::zero(); dim];
    let mut fq = vec![T::zero(); dim];
    let mut total = T::zero();
    for cell in 0..grid.num_cells() {
        let multi = grid.cell_multi(cell);
        let nodes = grid.cell_nodes(&multi);
        for q in 0..rule.len() {
            let strain = strain_at(field, &nodes, &rule, q, &mut grad);
            let b_big = young_value(&problem.law, strain.norm(), young_rel_tol)?;
            field.value_at(&nodes, &rule, q, &mut uq);
            let x = grid.position_in_cell(&multi, &rule.points[q]);
            (problem.rhs)(&x, &mut fq)?;
            let fu: T = uq.iter().zip(&fq).map(|(&u, &f)| u * f).sum();
            total = total + rule.weights[q] * (b_big - fu);
        }
    }
    Ok(total)
}

/// Galerkin residual over interior degrees of freedom:
/// `r_i = ∫ A(eps u) : eps phi_i - f . phi_i`.
pub fn residual<T: Real>(
    problem: &DirichletProblem<T>,
    field: &NodalField<T>,
    dofs: &DofMap,
    quad_order: usize,
) -> Result<Vec<T>> {
    let grid = &problem.grid;
    let dim = grid.dim();
    let rule = grid.cell_rule(quad_order);
    let mut grad = Matrix::zeros(dim, dim);
    let mut fq = vec![T::zero(); dim];
    let mut out = vec![T::zero(); dofs.num_dofs()];
    for cell in 0..grid.num_cells() {
        let multi = grid.cell_multi(cell);
        let nodes = grid.cell_nodes(&multi);
        for q in 0..rule.len() {
            let strain = strain_at(field, &nodes, &rule, q, &mut grad);
            let stress = problem.law.stress(&strain);
            let x = grid.position_in_cell(&multi, &rule.points[q]);
            (problem.rhs)(&x, &mut fq)?;
            let w = rule.weights[q];
            for (corner, &node) in nodes.iter().enumerate() {
                let shape = rule.shapes[q][corner];
                let g = &rule.grads[q][corner];
                for c in 0..dim {
                    let Some(dof) = dofs.dof(node, c) else { continue };
                    // A(eps u) : eps(phi) with phi = N e_c reduces to the
                    // c-th row of the stress against the shape gradient
                    let mut flux = T::zero();
                    for k in 0..dim {
                        flux = flux + stress[(c, k)] * g[k];
                    }
                    out[dof] = out[dof] + w * (flux - fq[c] * shape);
                }
            }
        }
    }
    Ok(out)
}

/// Tangent matrix (exact Jacobian of the residual) in band storage.
pub fn tangent<T: Real>(
    problem: &DirichletProblem<T>,
    field: &NodalField<T>,
    dofs: &DofMap,
    quad_order: usize,
    bandwidth: usize,
) -> Result<SymBandMatrix<T>> {
    let grid = &problem.grid;
    let dim = grid.dim();
    let rule = grid.cell_rule(quad_order);
    let corners = 1usize << dim;
    let nloc = corners * dim;
    let mut grad = Matrix::zeros(dim, dim);
    let mut matrix = SymBandMatrix::zeros(dofs.num_dofs(), bandwidth);
    let mut local_strains: Vec<Matrix<T>> = vec![Matrix::zeros(dim, dim); nloc];
    let mut local_dofs: Vec<Option<usize>> = vec![None; nloc];
    let half = T::of(0.5);
    for cell in 0..grid.num_cells() {
        let multi = grid.cell_multi(cell);
        let nodes = grid.cell_nodes(&multi);
        for (corner, &node) in nodes.iter().enumerate() {
            for c in 0..dim {
                local_dofs[corner * dim + c] = dofs.dof(node, c);
            }
        }
        for q in 0..rule.len() {
            let strain = strain_at(field, &nodes, &rule, q, &mut grad);
            let jac = problem.law.stress_jacobian(&strain)?;
            let w = rule.weights[q];
            for corner in 0..corners {
                let g = &rule.grads[q][corner];
                for c in 0..dim {
                    let e = &mut local_strains[corner * dim + c];
                    for i in 0..dim {
                        for j in 0..dim {
                            let mut v = T::zero();
                            if i == c {
                                v = v + half * g[j];
                            }
                            if j == c {
                                v = v + half * g[i];
                            }
                            (*e)[(i, j)] = v;
                        }
                    }
                }
            }
            for a in 0..nloc {
                let Some(dof_a) = local_dofs[a] else { continue };
                for b in 0..nloc {
                    let Some(dof_b) = local_dofs[b] else { continue };
                    if dof_a < dof_b {
                        continue; // lower triangle only; symmetry covers the rest
                    }
                    let value = jac.form(&local_strains[b], &local_strains[a]);
                    matrix.add(dof_a, dof_b, w * value);
                }
            }
        }
    }
    Ok(matrix)
}

/// Extract interior dof values from a field.
pub fn gather_interior<T: Real>(field: &NodalField<T>, dofs: &DofMap) -> Vec<T> {
    let mut out = vec![T::zero(); dofs.num_dofs()];
    for node in 0..field.grid().num_nodes() {
        for c in 0..dofs.dim {
            if let Some(dof) = dofs.dof(node, c) {
                out[dof] = field.node_values(node)[c];
            }
        }
    }
    out
}

/// Add `alpha` times an interior dof vector into a field.
pub fn scatter_interior<T: Real>(
    field: &mut NodalField<T>,
    dofs: &DofMap,
    delta: &[T],
    alpha: T,
) {
    for node in 0..field.grid().num_nodes() {
        for c in 0..dofs.dim {
            if let Some(dof) = dofs.dof(node, c) {
                let mut vals = field.node_values(node).to_vec();
                vals[c] = vals[c] + alpha * delta[dof];
                field.set_node_values(node, &vals);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::field::zero_spatial_fn;

    fn unit_problem(p: f64, eps: f64, cells: usize) -> DirichletProblem<f64> {
        let grid =
            Arc::new(StructuredGrid::new(&[0.0, 0.0], &[1.0, 1.0], &[cells, cells]).unwrap());
        DirichletProblem::new(
            NonlinearityLaw::regularized(p, eps).unwrap(),
            grid,
            zero_spatial_fn(),
            zero_spatial_fn(),
        )
        .unwrap()
    }

    #[test]
    fn zero_field_zero_data_zero_energy() {
        let problem = unit_problem(3.0, 0.1, 4);
        let field = NodalField::zeros(problem.grid.clone(), 2);
        assert_eq!(energy(&problem, &field, 3, 1e-9).unwrap(), 0.0);
        let dofs = DofMap::build(&problem.grid);
        let r = residual(&problem, &field, &dofs, 3).unwrap();
        assert!(r.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn quadratic_law_energy_matches_quadratic_form() {
        // p = 2: B(t) = t^2/2 exactly, so E(u) = u^T K u / 2 with the
        // tangent assembled at any state
        let problem = unit_problem(2.0, 0.37, 3);
        let dofs = DofMap::build(&problem.grid);
        let bw = dofs.bandwidth(&problem.grid);
        let mut field = NodalField::zeros(problem.grid.clone(), 2);
        // interior bump
        let delta: Vec<f64> =
            (0..dofs.num_dofs()).map(|i| ((i * 7 + 3) % 11) as f64 / 11.0 - 0.4).collect();
        scatter_interior(&mut field, &dofs, &delta, 1.0);
        let k = tangent(&problem, &field, &dofs, 3, bw).unwrap();
        let kd = k.matvec(&delta);
        let quadratic: f64 = 0.5 * crate::linalg::dot(&delta, &kd);
        let direct = energy(&problem, &field, 3, 1e-12).unwrap();
        assert!(
            (quadratic - direct).abs() <= 1e-12 * (1.0 + direct.abs()),
            "{quadratic} vs {direct}"
        );
        // residual is K u for the linear law
        let r = residual(&problem, &field, &dofs, 3).unwrap();
        for (a, b) in r.iter().zip(&kd) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_is_gradient_of_energy() {
        let problem = unit_problem(2.5, 0.2, 3);
        let dofs = DofMap::build(&problem.grid);
        let mut field = problem.boundary_interpolant().unwrap();
        let bump: Vec<f64> =
            (0..dofs.num_dofs()).map(|i| ((i * 5 + 1) % 7) as f64 / 7.0 - 0.5).collect();
        scatter_interior(&mut field, &dofs, &bump, 1.0);

        let r = residual(&problem, &field, &dofs, 3).unwrap();
        let dir: Vec<f64> =
            (0..dofs.num_dofs()).map(|i| ((i * 3 + 2) % 5) as f64 / 5.0 - 0.4).collect();
        let g_exact = crate::linalg::dot(&r, &dir);

        let h = 1e-4;
        let mut plus = field.clone();
        scatter_interior(&mut plus, &dofs, &dir, h);
        let mut minus = field.clone();
        scatter_interior(&mut minus, &dofs, &dir, -h);
        let tol = 1e-13;
        let g_fd = (energy(&problem, &plus, 3, tol).unwrap()
            - energy(&problem, &minus, 3, tol).unwrap())
            / (2.0 * h);
        assert!(
            (g_exact - g_fd).abs() <= 1e-6 * (1.0 + g_exact.abs()),
            "exact {g_exact} vs fd {g_fd}"
        );
    }

    #[test]
    fn tangent_matches_residual_difference_for_linear_law() {
        // p = 2: residual(u + v) - residual(u) = K v independently of u
        let problem = unit_problem(2.0, 0.11, 3);
        let dofs = DofMap::build(&problem.grid);
        let bw = dofs.bandwidth(&problem.grid);
        let mut u = NodalField::zeros(problem.grid.clone(), 2);
        let du: Vec<f64> = (0..dofs.num_dofs()).map(|i| (i as f64).cos()).collect();
        let k = tangent(&problem, &u, &dofs, 3, bw).unwrap();
        let r0 = residual(&problem, &u, &dofs, 3).unwrap();
        scatter_interior(&mut u, &dofs, &du, 1.0);
        let r1 = residual(&problem, &u, &dofs, 3).unwrap();
        let kd = k.matvec(&du);
        for i in 0..du.len() {
            assert!((r1[i] - r0[i] - kd[i]).abs() < 1e-11);
        }
    }

    #[test]
    fn solver_rejects_non_regularized_laws() {
        let grid =
            Arc::new(StructuredGrid::<f64>::new(&[0.0, 0.0], &[1.0, 1.0], &[2, 2]).unwrap());
        let law = NonlinearityLaw::pure_power(2.0).unwrap();
        assert!(DirichletProblem::new(law, grid, zero_spatial_fn(), zero_spatial_fn())
            .is_err());
    }
}
