//! Direct factorization of the symmetric positive definite band systems
//! produced by structured-grid assembly.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric band matrix, lower triangle stored column-wise:
/// entry `(i, j)` with `j <= i <= j + bandwidth` lives at
/// `data[j * (bandwidth + 1) + (i - j)]`.
#[derive(Debug, Clone)]
pub struct SymBandMatrix<T> {
    n: usize,
    bandwidth: usize,
    data: Vec<T>,
}

impl<T: Real> SymBandMatrix<T> {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        SymBandMatrix { n, bandwidth, data: vec![T::zero(); n * (bandwidth + 1)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bandwidth);
        j * (self.bandwidth + 1) + (i - j)
    }

    /// Accumulate into the lower triangle; callers scatter both local
    /// `(a, b)` and `(b, a)` entries, so upper contributions are dropped.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        if i < j {
            return;
        }
        let s = self.slot(i, j);
        self.data[s] = self.data[s] + v;
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        if hi - lo > self.bandwidth {
            T::zero()
        } else {
            self.data[self.slot(hi, lo)]
        }
    }

    pub fn reset(&mut self) {
        self.data.fill(T::zero());
    }

    /// Multiply by a vector (used by tests to verify factorizations).
    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![T::zero(); self.n];
        for j in 0..self.n {
            let top = (j + self.bandwidth).min(self.n - 1);
            for i in j..=top {
                let v = self.data[self.slot(i, j)];
                y[i] = y[i] + v * x[j];
                if i != j {
                    y[j] = y[j] + v * x[i];
                }
            }
        }
        y
    }

    /// In-place banded Cholesky; fails if the matrix is not positive
    /// definite to working precision.
    pub fn cholesky(mut self) -> Result<BandCholesky<T>> {
        let bw = self.bandwidth;
        for j in 0..self.n {
            let start = j.saturating_sub(bw);
            let mut diag = self.data[self.slot(j, j)];
            for k in start..j {
                let ljk = self.data[self.slot(j, k)];
                diag = diag - ljk * ljk;
            }
            if !(diag > T::zero()) {
                return Err(Error::LinearSolve(format!(
                    "pivot {:.3e} at row {j}: matrix is not positive definite",
                    diag.to_f64_lossy()
                )));
            }
            let ljj = diag.sqrt();
            let slot_jj = self.slot(j, j);
            self.data[slot_jj] = ljj;
            let top = (j + bw).min(self.n - 1);
            for i in (j + 1)..=top {
                let mut s = self.data[self.slot(i, j)];
                let start_i = i.saturating_sub(bw).max(start);
                for k in start_i..j {
                    s = s - self.data[self.slot(i, k)] * self.data[self.slot(j, k)];
                }
                let slot_ij = self.slot(i, j);
                self.data[slot_ij] = s / ljj;
            }
        }
        Ok(BandCholesky { factor: self })
    }
}

/// Cholesky factor of a band matrix.
#[derive(Debug, Clone)]
pub struct BandCholesky<T> {
    factor: SymBandMatrix<T>,
}

impl<T: Real> BandCholesky<T> {
    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let n = self.factor.n;
        let bw = self.factor.bandwidth;
        assert_eq!(rhs.len(), n);
        let mut y = rhs.to_vec();
        // forward: L y = rhs
        for i in 0..n {
            let start = i.saturating_sub(bw);
            let mut v = y[i];
            for k in start..i {
                v = v - self.factor.data[self.factor.slot(i, k)] * y[k];
            }
            y[i] = v / self.factor.data[self.factor.slot(i, i)];
        }
        // backward: L^T x = y
        for i in (0..n).rev() {
            let top = (i + bw).min(n - 1);
            let mut v = y[i];
            for k in (i + 1)..=top {
                v = v - self.factor.data[self.factor.slot(k, i)] * y[k];
            }
            y[i] = v / self.factor.data[self.factor.slot(i, i)];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factorize_and_solve_tridiagonal() {
        // discrete Laplacian, SPD
        let n = 20;
        let mut a = SymBandMatrix::<f64>::zeros(n, 1);
        for i in 0..n {
            a.add(i, i, 2.0);
            if i > 0 {
                a.add(i, i - 1, -1.0);
            }
        }
        let matrix = a.clone();
        let chol = a.cholesky().unwrap();
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = chol.solve(&rhs);
        let back = matrix.matvec(&x);
        for (b, r) in back.iter().zip(&rhs) {
            assert!((b - r).abs() < 1e-12);
        }
    }

    #[test]
    fn random_banded_spd_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let n = 40;
        let bw = 5;
        let mut a = SymBandMatrix::<f64>::zeros(n, bw);
        for j in 0..n {
            for i in j..(j + bw + 1).min(n) {
                let v: f64 = rng.gen_range(-0.5..0.5);
                a.add(i, j, v);
                if i != j {
                    // symmetric scatter convention: upper add is dropped
                    a.add(j, i, v);
                }
            }
            a.add(j, j, 8.0); // diagonal dominance keeps it SPD
        }
        let matrix = a.clone();
        let chol = a.cholesky().unwrap();
        let rhs: Vec<f64> = (0..n).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let x = chol.solve(&rhs);
        let back = matrix.matvec(&x);
        for (b, r) in back.iter().zip(&rhs) {
            assert!((b - r).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_indefinite_matrix() {
        let mut a = SymBandMatrix::<f64>::zeros(3, 1);
        a.add(0, 0, 1.0);
        a.add(1, 1, -1.0);
        a.add(2, 2, 1.0);
        assert!(a.cholesky().is_err());
    }
}
