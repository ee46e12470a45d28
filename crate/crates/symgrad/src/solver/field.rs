//! Nodal fields on structured grids: storage, multilinear interpolation,
//! and quadrature-based norms. Vector fields carry `dim` components; nodal
//! stress samples reuse the same machinery with `dim^2` components.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;
use crate::solver::grid::{CellRule, StructuredGrid};
use std::sync::Arc;

/// Fallible spatial function writing `ncomp` values into a buffer.
pub type SpatialFn<T> =
    Arc<dyn Fn(&[T], &mut [T]) -> crate::error::Result<()> + Send + Sync>;

/// Nodal field with `ncomp` components per node.
#[derive(Debug, Clone)]
pub struct NodalField<T> {
    grid: Arc<StructuredGrid<T>>,
    ncomp: usize,
    values: Vec<T>,
}

/// Displacement-style field: one component per space dimension.
pub type DiscreteVectorField<T> = NodalField<T>;

impl<T: Real> NodalField<T> {
    pub fn zeros(grid: Arc<StructuredGrid<T>>, ncomp: usize) -> Self {
        let n = grid.num_nodes() * ncomp;
        NodalField { grid, ncomp, values: vec![T::zero(); n] }
    }

    pub fn from_values(
        grid: Arc<StructuredGrid<T>>,
        ncomp: usize,
        values: Vec<T>,
    ) -> Result<Self> {
        if values.len() != grid.num_nodes() * ncomp {
            return Err(Error::Domain(format!(
                "nodal value count {} does not match {} nodes x {} components",
                values.len(),
                grid.num_nodes(),
                ncomp
            )));
        }
        Ok(NodalField { grid, ncomp, values })
    }

    /// Fill from a spatial function evaluated at the nodes.
    pub fn interpolate(
        grid: Arc<StructuredGrid<T>>,
        ncomp: usize,
        f: &SpatialFn<T>,
    ) -> Result<Self> {
        let mut field = Self::zeros(grid, ncomp);
        let mut buf = vec![T::zero(); ncomp];
        for node in 0..field.grid.num_nodes() {
            let x = field.grid.node_coords(node);
            f(&x, &mut buf)?;
            field.values[node * ncomp..(node + 1) * ncomp].copy_from_slice(&buf);
        }
        Ok(field)
    }

    pub fn grid(&self) -> &Arc<StructuredGrid<T>> {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn node_values(&self, node: usize) -> &[T] {
        &self.values[node * self.ncomp..(node + 1) * self.ncomp]
    }

    pub fn set_node_values(&mut self, node: usize, vals: &[T]) {
        self.values[node * self.ncomp..(node + 1) * self.ncomp].copy_from_slice(vals);
    }

    /// Interpolated component values at a quadrature point of a cell.
    pub fn value_at(
        &self,
        cell_nodes: &[usize],
        rule: &CellRule<T>,
        q: usize,
        out: &mut [T],
    ) {
        out.fill(T::zero());
        for (corner, &node) in cell_nodes.iter().enumerate() {
            let shape = rule.shapes[q][corner];
            let vals = self.node_values(node);
            for c in 0..self.ncomp {
                out[c] = out[c] + shape * vals[c];
            }
        }
    }

    /// Interpolated gradient at a quadrature point: `out[(c, k)] = d_k u_c`.
    pub fn gradient_at(
        &self,
        cell_nodes: &[usize],
        rule: &CellRule<T>,
        q: usize,
        out: &mut Matrix<T>,
    ) {
        for c in 0..self.ncomp {
            for k in 0..rule.dim {
                out[(c, k)] = T::zero();
            }
        }
        for (corner, &node) in cell_nodes.iter().enumerate() {
            let grad = &rule.grads[q][corner];
            let vals = self.node_values(node);
            for c in 0..self.ncomp {
                for k in 0..rule.dim {
                    out[(c, k)] = out[(c, k)] + vals[c] * grad[k];
                }
            }
        }
    }

    /// Max-norm distance to a spatial function over the nodes.
    pub fn nodal_max_distance(&self, f: &SpatialFn<T>) -> Result<T> {
        let mut buf = vec![T::zero(); self.ncomp];
        let mut worst = T::zero();
        for node in 0..self.grid.num_nodes() {
            let x = self.grid.node_coords(node);
            f(&x, &mut buf)?;
            for (c, &b) in buf.iter().enumerate() {
                worst = worst.max((self.node_values(node)[c] - b).abs());
            }
        }
        Ok(worst)
    }

    /// Max nodal magnitude.
    pub fn nodal_max(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    /// Point evaluation by multilinear interpolation; coordinates outside
    /// the box are clamped to it.
    pub fn eval_at(&self, x: &[T]) -> Vec<T> {
        let grid = &self.grid;
        let dim = grid.dim();
        assert_eq!(x.len(), dim);
        let mut cell = vec![0usize; dim];
        let mut xi = vec![T::zero(); dim];
        for k in 0..dim {
            let s = ((x[k] - grid.lo()[k]) / grid.spacing()[k])
                .max(T::zero())
                .min(T::of_usize(grid.cells()[k]));
            let mut c = s.floor().to_f64_lossy() as usize;
            if c >= grid.cells()[k] {
                c = grid.cells()[k] - 1;
            }
            cell[k] = c;
            xi[k] = s - T::of_usize(c);
        }
        let nodes = grid.cell_nodes(&cell);
        let mut out = vec![T::zero(); self.ncomp];
        for (corner, &node) in nodes.iter().enumerate() {
            let mut shape = T::one();
            for k in 0..dim {
                let f = if (corner >> k) & 1 == 1 { xi[k] } else { T::one() - xi[k] };
                shape = shape * f;
            }
            let vals = self.node_values(node);
            for c in 0..self.ncomp {
                out[c] = out[c] + shape * vals[c];
            }
        }
        out
    }

    /// `L^2` distance to a spatial function by cell quadrature.
    pub fn l2_distance(&self, f: &SpatialFn<T>, order: usize) -> Result<T> {
        let rule = self.grid.cell_rule(order);
        let mut buf = vec![T::zero(); self.ncomp];
        let mut here = vec![T::zero(); self.ncomp];
        let mut total = T::zero();
        for cell in 0..self.grid.num_cells() {
            let multi = self.grid.cell_multi(cell);
            let nodes = self.grid.cell_nodes(&multi);
            for q in 0..rule.len() {
                let x = self.grid.position_in_cell(&multi, &rule.points[q]);
                f(&x, &mut buf)?;
                self.value_at(&nodes, &rule, q, &mut here);
                let mut diff_sq = T::zero();
                for c in 0..self.ncomp {
                    let d = here[c] - buf[c];
                    diff_sq = diff_sq + d * d;
                }
                total = total + rule.weights[q] * diff_sq;
            }
        }
        Ok(total.sqrt())
    }
}

/// Wrap a polynomial vector field as a spatial function.
pub fn poly_spatial_fn<T: Real + crate::tensorfields::Coeff>(
    field: &crate::tensorfields::PolyVectorField<T>,
) -> SpatialFn<T> {
    let field = field.clone();
    Arc::new(move |x: &[T], out: &mut [T]| {
        let vals = field.eval(x);
        out.copy_from_slice(&vals);
        Ok(())
    })
}

/// Constant-zero spatial function with `ncomp` components.
pub fn zero_spatial_fn<T: Real>() -> SpatialFn<T> {
    Arc::new(|_x: &[T], out: &mut [T]| {
        out.fill(T::zero());
        Ok(())
    })
}

/// Wrap nodal data (a measured force density, say) as a spatial function.
pub fn nodal_spatial_fn<T: Real>(field: NodalField<T>) -> SpatialFn<T> {
    Arc::new(move |x: &[T], out: &mut [T]| {
        let vals = field.eval_at(x);
        out.copy_from_slice(&vals);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2() -> Arc<StructuredGrid<f64>> {
        Arc::new(StructuredGrid::new(&[0.0, 0.0], &[1.0, 1.0], &[4, 4]).unwrap())
    }

    #[test]
    fn interpolation_reproduces_multilinear_functions() {
        let grid = grid2();
        let f: SpatialFn<f64> = Arc::new(|x, out| {
            out[0] = 2.0 * x[0] * x[1] + 1.0;
            out[1] = x[0] - 3.0 * x[1];
            Ok(())
        });
        let field = NodalField::interpolate(grid.clone(), 2, &f).unwrap();
        // bilinear functions are reproduced exactly inside cells
        let rule = grid.cell_rule(2);
        let mut here = [0.0; 2];
        let mut expect = [0.0; 2];
        for cell in 0..grid.num_cells() {
            let multi = grid.cell_multi(cell);
            let nodes = grid.cell_nodes(&multi);
            for q in 0..rule.len() {
                let x = grid.position_in_cell(&multi, &rule.points[q]);
                f(&x, &mut expect).unwrap();
                field.value_at(&nodes, &rule, q, &mut here);
                assert!((here[0] - expect[0]).abs() < 1e-14);
                assert!((here[1] - expect[1]).abs() < 1e-14);
            }
        }
        assert!(field.l2_distance(&f, 3).unwrap() < 1e-14);
    }

    #[test]
    fn gradient_of_linear_field_is_constant() {
        let grid = grid2();
        let f: SpatialFn<f64> = Arc::new(|x, out| {
            out[0] = 3.0 * x[0] + 2.0 * x[1];
            out[1] = -x[0];
            Ok(())
        });
        let field = NodalField::interpolate(grid.clone(), 2, &f).unwrap();
        let rule = grid.cell_rule(2);
        let mut grad = Matrix::zeros(2, 2);
        let nodes = grid.cell_nodes(&[1, 2]);
        field.gradient_at(&nodes, &rule, 0, &mut grad);
        assert!((grad[(0, 0)] - 3.0).abs() < 1e-13);
        assert!((grad[(0, 1)] - 2.0).abs() < 1e-13);
        assert!((grad[(1, 0)] + 1.0).abs() < 1e-13);
        assert!(grad[(1, 1)].abs() < 1e-13);
    }

    #[test]
    fn value_count_validation() {
        let grid = grid2();
        assert!(NodalField::from_values(grid, 2, vec![0.0; 7]).is_err());
    }

    #[test]
    fn point_evaluation_and_nodal_rhs_wrapper() {
        let grid = grid2();
        let f: SpatialFn<f64> = Arc::new(|x, out| {
            out[0] = x[0] * x[1] + 0.5;
            out[1] = 2.0 * x[0];
            Ok(())
        });
        let field = NodalField::interpolate(grid, 2, &f).unwrap();
        // bilinear data is reproduced pointwise, including off nodes
        let v = field.eval_at(&[0.33, 0.71]);
        assert!((v[0] - (0.33 * 0.71 + 0.5)).abs() < 1e-14);
        assert!((v[1] - 0.66).abs() < 1e-14);
        // clamped outside the box
        let edge = field.eval_at(&[-5.0, 0.5]);
        assert!((edge[0] - 0.5).abs() < 1e-14);

        let wrapped = nodal_spatial_fn(field);
        let mut out = [0.0; 2];
        wrapped(&[0.25, 0.25], &mut out).unwrap();
        assert!((out[0] - (0.0625 + 0.5)).abs() < 1e-14);
    }
}
