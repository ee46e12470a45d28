//! Constant-free reduced inequalities for second-derivative data, the
//! positive-semidefinite quadratic form behind the planar case, and samplers
//! for brute-force verification.

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix, Tensor3};
use crate::scalar::Real;
use crate::tensorfields::TensorSample;
use rand::Rng;

/// Second-derivative data entering the reduced inequalities: the gradient of
/// the strain, the vector Laplacian, the gradient of the divergence, the
/// gradient of the strain norm, and `div u / |eps u|`.
#[derive(Debug, Clone)]
pub struct SecondOrderSample<T> {
    pub dim: usize,
    pub grad_sym_grad: Tensor3<T>,
    pub laplacian: Vec<T>,
    pub grad_div: Vec<T>,
    pub grad_strain_norm: Vec<T>,
    pub trace_ratio: T,
}

impl<T: Real> SecondOrderSample<T> {
    /// Extract from a field sample; the strain must not vanish (its
    /// direction enters the data).
    pub fn from_tensor_sample(sample: &TensorSample<T>) -> Result<Self> {
        let strain_norm = sample.sym_grad.norm();
        if strain_norm == T::zero() {
            return Err(Error::Domain(
                "second-order sample needs nonzero strain (its direction enters)".into(),
            ));
        }
        let direction = sample.sym_grad.scale(T::one() / strain_norm);
        Self::from_parts(&sample.hessian, &direction)
    }

    /// Build from a raw Hessian (symmetrized in its first two slots) and a
    /// strain direction (symmetrized and normalized).
    pub fn from_parts(hessian: &Tensor3<T>, direction: &Matrix<T>) -> Result<Self> {
        let (n, n1, n2) = hessian.dims();
        if n != n1 || n != n2 || direction.rows() != n || direction.cols() != n {
            return Err(Error::Domain("hessian/direction shape mismatch".into()));
        }
        let dir = direction.symmetric_part();
        let dir_norm = dir.norm();
        if dir_norm == T::zero() {
            return Err(Error::Domain("strain direction must be nonzero".into()));
        }
        let dir = dir.scale(T::one() / dir_norm);
        let half = T::of(0.5);

        let mut grad_sym_grad = Tensor3::zeros(n, n, n);
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let hij = half * (hessian[(l, i, j)] + hessian[(i, l, j)]);
                    let hji = half * (hessian[(l, j, i)] + hessian[(j, l, i)]);
                    grad_sym_grad[(l, i, j)] = half * (hij + hji);
                }
            }
        }
        let laplacian: Vec<T> =
            (0..n).map(|k| (0..n).map(|l| hessian[(l, l, k)]).sum()).collect();
        let grad_div: Vec<T> = (0..n)
            .map(|k| (0..n).map(|i| grad_sym_grad[(k, i, i)]).sum())
            .collect();
        let grad_strain_norm: Vec<T> = (0..n)
            .map(|l| {
                let mut acc = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        acc = acc + dir[(i, j)] * grad_sym_grad[(l, i, j)];
                    }
                }
                acc
            })
            .collect();
        Ok(SecondOrderSample {
            dim: n,
            grad_sym_grad,
            laplacian,
            grad_div,
            grad_strain_norm,
            trace_ratio: dir.trace(),
        })
    }

    /// Random sample: i.i.d. uniform Hessian entries (symmetrized) and a
    /// random symmetric strain direction.
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> Self {
        let mut hessian = Tensor3::zeros(dim, dim, dim);
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let v = T::of(rng.gen_range(-1.0..1.0));
                    hessian[(i, j, k)] = v;
                    hessian[(j, i, k)] = v;
                }
            }
        }
        let mut direction = Matrix::zeros(dim, dim);
        loop {
            for i in 0..dim {
                for j in i..dim {
                    let v = T::of(rng.gen_range(-1.0..1.0));
                    direction[(i, j)] = v;
                    direction[(j, i)] = v;
                }
            }
            if direction.norm() > T::of(1e-3) {
                break;
            }
        }
        Self::from_parts(&hessian, &direction).expect("random parts are well formed")
    }
}

/// Slack of a reduced inequality at one sample.
#[derive(Debug, Clone, Copy)]
pub struct InequalitySlack<T> {
    /// `LHS - c |grad eps u|^2`; nonnegative up to round-off when the
    /// hypothesis holds.
    pub slack: T,
    /// Sum of the term magnitudes, for normalizing round-off tolerances.
    pub scale: T,
    /// The explicit coefficient `c`.
    pub coefficient: T,
}

/// Reduced inequality of the low-dimension route: for `2 <= n <= 7` and
/// `theta >= -(8-n)/16`,
/// `|G|^2 + |L|^2/2 + 2 theta |w|^2 + (Dd . L)/2 >= c |G|^2`
/// with `c = 1 - n/8 + 2 min(theta, 0)`.
pub fn reduced_inequality_lowdim<T: Real>(
    sample: &SecondOrderSample<T>,
    theta: T,
    n: usize,
) -> Result<InequalitySlack<T>> {
    if !(2..=7).contains(&n) {
        return Err(Error::Domain(format!(
            "low-dimension inequality requires 2 <= n <= 7, got {n}"
        )));
    }
    if n != sample.dim {
        return Err(Error::Domain(format!(
            "sample dimension {} does not match n = {n}",
            sample.dim
        )));
    }
    let n_t = T::of_usize(n);
    let threshold = -(T::of(8.0) - n_t) / T::of(16.0);
    if theta < threshold {
        return Err(Error::Domain(format!(
            "theta = {} below the admissible threshold {}",
            theta, threshold
        )));
    }
    let half = T::of(0.5);
    let two = T::of(2.0);
    let g_sq = sample.grad_sym_grad.norm_sq();
    let l_sq = dot(&sample.laplacian, &sample.laplacian);
    let w_sq = dot(&sample.grad_strain_norm, &sample.grad_strain_norm);
    let coupling = half * dot(&sample.grad_div, &sample.laplacian);
    let lhs = g_sq + half * l_sq + two * theta * w_sq + coupling;
    let coefficient = T::one() - n_t / T::of(8.0) + two * theta.min(T::zero());
    let slack = lhs - coefficient * g_sq;
    let scale = g_sq
        + half * l_sq
        + (two * theta * w_sq).abs()
        + coupling.abs()
        + (coefficient * g_sq).abs();
    Ok(InequalitySlack { slack, scale, coefficient })
}

/// Admissible open interval for `theta` in the all-dimension inequality:
/// `(-1/(sqrt(n+1)+1), 1/(sqrt(n+1)-1))`.
pub fn alldim_theta_interval<T: Real>(n: usize) -> (T, T) {
    let root = (T::of_usize(n) + T::one()).sqrt();
    (-T::one() / (root + T::one()), T::one() / (root - T::one()))
}

/// Reduced inequality of the all-dimension route: for `theta` strictly
/// inside [`alldim_theta_interval`],
/// `|G|^2 + |L|^2/2 + |Dd|^2/2 + 2 theta |w|^2 + theta w.(Dd - L) rho >= c |G|^2`
/// with `rho = div u / |eps u|` and `c = 1 + min(0, 2 theta - n theta^2)`.
pub fn reduced_inequality_alldim<T: Real>(
    sample: &SecondOrderSample<T>,
    theta: T,
    n: usize,
) -> Result<InequalitySlack<T>> {
    if n != sample.dim {
        return Err(Error::Domain(format!(
            "sample dimension {} does not match n = {n}",
            sample.dim
        )));
    }
    let (lo, hi) = alldim_theta_interval::<T>(n);
    if !(theta > lo && theta < hi) {
        return Err(Error::Domain(format!(
            "theta = {} outside the admissible interval ({}, {})",
            theta, lo, hi
        )));
    }
    let half = T::of(0.5);
    let two = T::of(2.0);
    let n_t = T::of_usize(n);
    let g_sq = sample.grad_sym_grad.norm_sq();
    let l_sq = dot(&sample.laplacian, &sample.laplacian);
    let dd_sq = dot(&sample.grad_div, &sample.grad_div);
    let w_sq = dot(&sample.grad_strain_norm, &sample.grad_strain_norm);
    let dd_minus_l: Vec<T> = (0..sample.dim)
        .map(|i| sample.grad_div[i] - sample.laplacian[i])
        .collect();
    let coupling =
        theta * dot(&sample.grad_strain_norm, &dd_minus_l) * sample.trace_ratio;
    let lhs = g_sq + half * l_sq + half * dd_sq + two * theta * w_sq + coupling;
    let coefficient = T::one() + (two * theta - n_t * theta * theta).min(T::zero());
    let slack = lhs - coefficient * g_sq;
    let scale = g_sq
        + half * l_sq
        + half * dd_sq
        + (two * theta * w_sq).abs()
        + coupling.abs()
        + (coefficient * g_sq).abs();
    Ok(InequalitySlack { slack, scale, coefficient })
}

/// The symmetric 3x3 matrix behind the planar claim, with `s = sqrt(6) - 2`.
pub fn claim_matrix<T: Real>() -> Matrix<T> {
    let s = T::of(6.0).sqrt() - T::of(2.0);
    let half = T::of(0.5);
    let one = T::one();
    Matrix::from_rows(&[
        &[s + T::of(2.0), T::of(1.5), half],
        &[T::of(1.5), s * half + one, s * half + half],
        &[half, s * half + half, T::of(1.5) * s],
    ])
}

/// Eigenvalues of [`claim_matrix`], ascending. One is zero, the other two
/// positive, which makes the planar claim a sum of two PSD quadratic forms.
pub fn claim_matrix_spectrum<T: Real>() -> [T; 3] {
    let ev = claim_matrix::<T>().symmetric_eigenvalues();
    [ev[0], ev[1], ev[2]]
}

/// Planar claim evaluated on second-derivative data:
/// `(sqrt(6) - 2) |G|^2 + |L|^2 + Dd . L >= 0` in dimension 2.
pub fn claim_2d<T: Real>(sample: &SecondOrderSample<T>) -> Result<T> {
    if sample.dim != 2 {
        return Err(Error::Domain(format!(
            "the planar claim needs dimension 2, got {}",
            sample.dim
        )));
    }
    let s = T::of(6.0).sqrt() - T::of(2.0);
    let g_sq = sample.grad_sym_grad.norm_sq();
    let l_sq = dot(&sample.laplacian, &sample.laplacian);
    let coupling = dot(&sample.grad_div, &sample.laplacian);
    Ok(s * g_sq + l_sq + coupling)
}

/// Planar claim evaluated directly on a field sample (no strain direction
/// needed).
pub fn claim_2d_tensor<T: Real>(sample: &TensorSample<T>) -> Result<T> {
    if sample.laplacian.len() != 2 {
        return Err(Error::Domain("the planar claim needs dimension 2".into()));
    }
    let s = T::of(6.0).sqrt() - T::of(2.0);
    Ok(s * sample.grad_sym_grad.norm_sq()
        + dot(&sample.laplacian, &sample.laplacian)
        + dot(&sample.grad_div, &sample.laplacian))
}

/// Planar claim through the quadratic form: `v Q v^T + v' Q v'^T` with
/// coordinates `v = (d11 u1, d22 u1, d12 u2)` and `v' = (d22 u2, d11 u2, d12 u1)`.
pub fn claim_2d_coords<T: Real>(v: &[T; 3], v_prime: &[T; 3]) -> T {
    let q = claim_matrix::<T>();
    let form = |z: &[T; 3]| {
        let qz = q.matvec(z);
        dot(z, &qz)
    };
    form(v) + form(v_prime)
}
