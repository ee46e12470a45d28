//! Small dense linear algebra for dimensions up to 8: matrices, third-order
//! tensors, and a Jacobi eigensolver for symmetric matrices. Sizes are tiny
//! and known only at run time, so storage is a plain `Vec`.

use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[&[T]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Symmetric part `(M + Mᵀ)/2`; requires a square matrix.
    pub fn symmetric_part(&self) -> Self {
        assert!(self.is_square());
        let half = T::of(0.5);
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = half * (self[(i, j)] + self[(j, i)]);
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius inner product `A : B`.
    pub fn dot(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(&a, &b)| a * b).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = *v * s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, &w) in out.data.iter_mut().zip(&other.data) {
            *v = *v + w;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    /// Matrix-vector product `M x`.
    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// Is the matrix exactly zero?
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == T::zero())
    }

    /// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi sweeps.
    pub fn symmetric_eigenvalues(&self) -> Vec<T> {
        self.symmetric_eigen().0
    }

    /// Eigen decomposition of a symmetric matrix: (ascending eigenvalues,
    /// matching eigenvectors as columns of the returned matrix).
    pub fn symmetric_eigen(&self) -> (Vec<T>, Matrix<T>) {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        let tol = T::epsilon() * T::of(16.0);
        for _sweep in 0..64 {
            let mut off = T::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off + a[(p, q)] * a[(p, q)];
                }
            }
            if off.sqrt() <= tol * (T::one() + a.norm()) {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let diff = a[(q, q)] - a[(p, p)];
                    let theta = diff / (T::of(2.0) * apq);
                    // stable tangent of the rotation angle
                    let t = if theta >= T::zero() {
                        T::one() / (theta + (T::one() + theta * theta).sqrt())
                    } else {
                        -T::one() / (-theta + (T::one() + theta * theta).sqrt())
                    };
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a[(i, i)].partial_cmp(&a[(j, j)]).expect("eigenvalues are finite")
        });
        let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
        let mut vectors = Self::zeros(n, n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for k in 0..n {
                vectors[(k, new_col)] = v[(k, old_col)];
            }
        }
        (eigenvalues, vectors)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense third-order tensor, index order `[i][j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<T> {
    d0: usize,
    d1: usize,
    d2: usize,
    data: Vec<T>,
}

impl<T: Real> Tensor3<T> {
    pub fn zeros(d0: usize, d1: usize, d2: usize) -> Self {
        Tensor3 { d0, d1, d2, data: vec![T::zero(); d0 * d1 * d2] }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d0, self.d1, self.d2)
    }

    /// Squared Frobenius norm over all entries.
    pub fn norm_sq(&self) -> T {
        self.data.iter().map(|&v| v * v).sum()
    }

    /// Slice `[i][·][·]` as a matrix.
    pub fn slice0(&self, i: usize) -> Matrix<T> {
        let mut m = Matrix::zeros(self.d1, self.d2);
        for j in 0..self.d1 {
            for k in 0..self.d2 {
                m[(j, k)] = self[(i, j, k)];
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dims(), other.dims());
        let mut out = self.clone();
        for (v, &w) in out.data.iter_mut().zip(&other.data) {
            *v = *v - w;
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }
}

impl<T> std::ops::Index<(usize, usize, usize)> for Tensor3<T> {
    type Output = T;
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &T {
        &self.data[(i * self.d1 + j) * self.d2 + k]
    }
}

impl<T> std::ops::IndexMut<(usize, usize, usize)> for Tensor3<T> {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut T {
        &mut self.data[(i * self.d1 + j) * self.d2 + k]
    }
}

/// Euclidean inner product of two slices.
pub fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

/// Euclidean norm of a slice.
pub fn norm<T: Real>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

/// `y += alpha * x`.
pub fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_part_and_trace() {
        let m = Matrix::from_rows(&[&[1.0, 2.0], &[0.0, 3.0]]);
        let s = m.symmetric_part();
        assert_eq!(s[(0, 1)], 1.0);
        assert_eq!(s[(1, 0)], 1.0);
        assert_eq!(s.trace(), 4.0);
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // eigenvalues of [[2,1],[1,2]] are 1 and 3
        let m: Matrix<f64> = Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let (ev, vectors) = m.symmetric_eigen();
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 3.0).abs() < 1e-14);
        // eigenvector residual ‖Mv − λv‖
        for (col, &lambda) in ev.iter().enumerate() {
            let v: Vec<f64> = (0..2).map(|k| vectors[(k, col)]).collect();
            let mv = m.matvec(&v);
            for k in 0..2 {
                assert!((mv[k] - lambda * v[k]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn jacobi_handles_diagonal_input() {
        let mut m = Matrix::zeros(3, 3);
        m[(0, 0)] = 5.0;
        m[(1, 1)] = -1.0;
        m[(2, 2)] = 2.0;
        let ev = m.symmetric_eigenvalues();
        assert_eq!(ev, vec![-1.0, 2.0, 5.0]);
    }

    #[test]
    fn tensor3_indexing_and_norm() {
        let mut t: Tensor3<f64> = Tensor3::zeros(2, 2, 2);
        t[(0, 1, 1)] = 3.0;
        t[(1, 0, 0)] = 4.0;
        assert_eq!(t.norm_sq(), 25.0);
        assert_eq!(t.slice0(0)[(1, 1)], 3.0);
    }
}
