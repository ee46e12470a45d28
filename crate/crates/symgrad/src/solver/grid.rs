//! Uniform structured grids on boxes with conforming multilinear elements
//! and tensor-product Gauss quadrature.

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::scalar::Real;

/// Uniform grid on a box in dimension 2 or 3.
#[derive(Debug, Clone)]
pub struct StructuredGrid<T> {
    dim: usize,
    lo: Vec<T>,
    hi: Vec<T>,
    cells: Vec<usize>,
    spacing: Vec<T>,
}

impl<T: Real> StructuredGrid<T> {
    pub fn new(lo: &[T], hi: &[T], cells: &[usize]) -> Result<Self> {
        let dim = lo.len();
        if !(dim == 2 || dim == 3) {
            return Err(Error::Domain(format!("grid dimension must be 2 or 3, got {dim}")));
        }
        if hi.len() != dim || cells.len() != dim {
            return Err(Error::Domain("grid extents/cells shape mismatch".into()));
        }
        let mut spacing = Vec::with_capacity(dim);
        for k in 0..dim {
            if !(hi[k] > lo[k]) || cells[k] == 0 {
                return Err(Error::Domain("grid needs positive extent and cell count".into()));
            }
            spacing.push((hi[k] - lo[k]) / T::of_usize(cells[k]));
        }
        Ok(StructuredGrid { dim, lo: lo.to_vec(), hi: hi.to_vec(), cells: cells.to_vec(), spacing })
    }

    /// Unit-style box `[-1, 1]^d` with the same cell count per axis.
    pub fn symmetric_box(dim: usize, half_width: T, cells_per_axis: usize) -> Result<Self> {
        let lo = vec![-half_width; dim];
        let hi = vec![half_width; dim];
        let cells = vec![cells_per_axis; dim];
        Self::new(&lo, &hi, &cells)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> &[T] {
        &self.lo
    }

    pub fn hi(&self) -> &[T] {
        &self.hi
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn spacing(&self) -> &[T] {
        &self.spacing
    }

    pub fn max_spacing(&self) -> T {
        self.spacing.iter().copied().fold(T::zero(), T::max)
    }

    pub fn nodes_per_axis(&self, axis: usize) -> usize {
        self.cells[axis] + 1
    }

    pub fn num_nodes(&self) -> usize {
        (0..self.dim).map(|k| self.nodes_per_axis(k)).product()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn node_index(&self, multi: &[usize]) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for k in 0..self.dim {
            idx += multi[k] * stride;
            stride *= self.nodes_per_axis(k);
        }
        idx
    }

    pub fn node_multi(&self, mut index: usize) -> Vec<usize> {
        let mut multi = vec![0; self.dim];
        for k in 0..self.dim {
            let n = self.nodes_per_axis(k);
            multi[k] = index % n;
            index /= n;
        }
        multi
    }

    pub fn node_coords(&self, index: usize) -> Vec<T> {
        let multi = self.node_multi(index);
        (0..self.dim)
            .map(|k| self.lo[k] + self.spacing[k] * T::of_usize(multi[k]))
            .collect()
    }

    pub fn is_boundary_node(&self, index: usize) -> bool {
        let multi = self.node_multi(index);
        (0..self.dim).any(|k| multi[k] == 0 || multi[k] == self.cells[k])
    }

    /// Per-node boundary flags.
    pub fn boundary_mask(&self) -> Vec<bool> {
        (0..self.num_nodes()).map(|i| self.is_boundary_node(i)).collect()
    }

    pub fn cell_multi(&self, mut cell: usize) -> Vec<usize> {
        let mut multi = vec![0; self.dim];
        for k in 0..self.dim {
            multi[k] = cell % self.cells[k];
            cell /= self.cells[k];
        }
        multi
    }

    /// Lower corner coordinates of a cell.
    pub fn cell_origin(&self, cell_multi: &[usize]) -> Vec<T> {
        (0..self.dim)
            .map(|k| self.lo[k] + self.spacing[k] * T::of_usize(cell_multi[k]))
            .collect()
    }

    /// Corner node indices of a cell, ordered by corner bits
    /// (bit k of the corner rank toggles axis k).
    pub fn cell_nodes(&self, cell_multi: &[usize]) -> Vec<usize> {
        let corners = 1usize << self.dim;
        (0..corners)
            .map(|c| {
                let multi: Vec<usize> = (0..self.dim)
                    .map(|k| cell_multi[k] + ((c >> k) & 1))
                    .collect();
                self.node_index(&multi)
            })
            .collect()
    }

    /// Physical position of a reference point inside a cell.
    pub fn position_in_cell(&self, cell_multi: &[usize], xi: &[T]) -> Vec<T> {
        let origin = self.cell_origin(cell_multi);
        (0..self.dim).map(|k| origin[k] + self.spacing[k] * xi[k]).collect()
    }

    /// Tensor-product quadrature rule with multilinear shape data, shared by
    /// every cell of the uniform grid.
    pub fn cell_rule(&self, order: usize) -> CellRule<T> {
        CellRule::build(self, order)
    }
}

/// Quadrature points (reference coordinates in `[0,1]^d`), physical weights,
/// and multilinear shape values/physical gradients at each point.
#[derive(Debug, Clone)]
pub struct CellRule<T> {
    pub dim: usize,
    /// Reference coordinates of each point.
    pub points: Vec<Vec<T>>,
    /// Physical weights (cell volume already included).
    pub weights: Vec<T>,
    /// `shapes[q][corner]`.
    pub shapes: Vec<Vec<T>>,
    /// `grads[q][corner][axis]`, in physical coordinates.
    pub grads: Vec<Vec<Vec<T>>>,
}

impl<T: Real> CellRule<T> {
    fn build(grid: &StructuredGrid<T>, order: usize) -> Self {
        let dim = grid.dim;
        let line = gauss_legendre::<T>(order);
        let half = T::of(0.5);
        // map [-1,1] to [0,1]
        let line: Vec<(T, T)> =
            line.into_iter().map(|(x, w)| ((x + T::one()) * half, w * half)).collect();

        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut counters = vec![0usize; dim];
        let cell_volume: T =
            (0..dim).map(|k| grid.spacing[k]).fold(T::one(), |acc, h| acc * h);
        loop {
            let mut point = Vec::with_capacity(dim);
            let mut weight = cell_volume;
            for k in 0..dim {
                let (x, w) = line[counters[k]];
                point.push(x);
                weight = weight * w;
            }
            points.push(point);
            weights.push(weight);
            let mut carry = true;
            for c in counters.iter_mut() {
                if carry {
                    *c += 1;
                    if *c == order {
                        *c = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }

        let corners = 1usize << dim;
        let mut shapes = Vec::with_capacity(points.len());
        let mut grads = Vec::with_capacity(points.len());
        for point in &points {
            let mut shape_row = Vec::with_capacity(corners);
            let mut grad_row = Vec::with_capacity(corners);
            for c in 0..corners {
                let mut value = T::one();
                for (k, &xi) in point.iter().enumerate() {
                    let factor = if (c >> k) & 1 == 1 { xi } else { T::one() - xi };
                    value = value * factor;
                }
                let mut grad = vec![T::zero(); dim];
                for k in 0..dim {
                    let mut d = T::one();
                    for (m, &xi) in point.iter().enumerate() {
                        if m == k {
                            d = d * if (c >> k) & 1 == 1 { T::one() } else { -T::one() };
                        } else {
                            let factor =
                                if (c >> m) & 1 == 1 { xi } else { T::one() - xi };
                            d = d * factor;
                        }
                    }
                    grad[k] = d / grid.spacing[k];
                }
                shape_row.push(value);
                grad_row.push(grad);
            }
            shapes.push(shape_row);
            grads.push(grad_row);
        }
        CellRule { dim, points, weights, shapes, grads }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_indexing_round_trips() {
        let grid = StructuredGrid::<f64>::new(&[0.0, 0.0], &[1.0, 2.0], &[4, 8]).unwrap();
        assert_eq!(grid.num_nodes(), 5 * 9);
        for idx in 0..grid.num_nodes() {
            assert_eq!(grid.node_index(&grid.node_multi(idx)), idx);
        }
        assert_eq!(grid.spacing(), &[0.25, 0.25]);
    }

    #[test]
    fn boundary_detection() {
        let grid = StructuredGrid::<f64>::symmetric_box(2, 1.0, 4).unwrap();
        let mask = grid.boundary_mask();
        let interior = mask.iter().filter(|b| !**b).count();
        assert_eq!(interior, 3 * 3);
    }

    #[test]
    fn quadrature_weights_sum_to_volume() {
        let grid = StructuredGrid::<f64>::new(&[0.0, 0.0], &[2.0, 3.0], &[5, 7]).unwrap();
        let rule = grid.cell_rule(3);
        let cell_volume: f64 = rule.weights.iter().sum();
        assert!((cell_volume - (2.0 / 5.0) * (3.0 / 7.0)).abs() < 1e-14);
        // shapes form a partition of unity, gradients sum to zero
        for q in 0..rule.len() {
            let s: f64 = rule.shapes[q].iter().sum();
            assert!((s - 1.0).abs() < 1e-14);
            for k in 0..2 {
                let g: f64 = rule.grads[q].iter().map(|grad| grad[k]).sum();
                assert!(g.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_integrates_bilinear_exactly() {
        let grid = StructuredGrid::<f64>::new(&[0.0, 0.0], &[1.0, 1.0], &[2, 2]).unwrap();
        let rule = grid.cell_rule(2);
        // integrate f(x, y) = x y over the whole box via cells
        let mut total = 0.0;
        for cell in 0..grid.num_cells() {
            let multi = grid.cell_multi(cell);
            for q in 0..rule.len() {
                let x = grid.position_in_cell(&multi, &rule.points[q]);
                total += rule.weights[q] * x[0] * x[1];
            }
        }
        assert!((total - 0.25).abs() < 1e-14);
    }

    #[test]
    fn three_dimensional_grid() {
        let grid = StructuredGrid::<f64>::symmetric_box(3, 1.0, 2).unwrap();
        assert_eq!(grid.num_nodes(), 27);
        assert_eq!(grid.num_cells(), 8);
        let rule = grid.cell_rule(2);
        assert_eq!(rule.len(), 8);
        assert_eq!(grid.cell_nodes(&[0, 0, 0]).len(), 8);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(StructuredGrid::<f64>::new(&[0.0], &[1.0], &[4]).is_err());
        assert!(StructuredGrid::<f64>::new(&[0.0, 0.0], &[1.0, 0.0], &[4, 4]).is_err());
    }
}
