//! Structural checks on sampled fields: the two routes to the strain
//! Laplacian, Hessian reconstruction from the symmetric gradient, the
//! stress-gradient comparability window, and the base strain identity.

use crate::error::{Error, Result};
use crate::linalg::Tensor3;
use crate::orlicz::NonlinearityLaw;
use crate::scalar::Real;
use crate::tensorfields::field::{FieldJets, TensorSample};
use crate::tensorfields::poly::Coeff;

/// Both computations of the strain Laplacian at a sample:
/// `div(eps u)` and `(Delta u + grad^T div u) / 2`.
pub fn sym_laplacian_routes<T: Real>(sample: &TensorSample<T>) -> (Vec<T>, Vec<T>) {
    let n = sample.laplacian.len();
    let half = T::of(0.5);
    let via_divergence: Vec<T> = (0..n)
        .map(|i| (0..n).map(|j| sample.grad_sym_grad[(j, i, j)]).sum())
        .collect();
    let via_split: Vec<T> = (0..n)
        .map(|i| half * (sample.laplacian[i] + sample.grad_div[i]))
        .collect();
    (via_divergence, via_split)
}

/// The strain Laplacian `div(eps u)`, cross-checked against the split route;
/// fails if the two disagree beyond round-off.
pub fn sym_laplacian<T: Real>(sample: &TensorSample<T>, rel_tol: T) -> Result<Vec<T>> {
    let (a, b) = sym_laplacian_routes(sample);
    let scale = T::one() + crate::linalg::norm(&a) + crate::linalg::norm(&b);
    let diff: Vec<T> = a.iter().zip(&b).map(|(&x, &y)| x - y).collect();
    if crate::linalg::norm(&diff) > rel_tol * scale {
        return Err(Error::Numerics(format!(
            "strain Laplacian routes disagree by {:.3e} (scale {:.3e})",
            crate::linalg::norm(&diff).to_f64_lossy(),
            scale.to_f64_lossy()
        )));
    }
    Ok(a)
}

/// Reconstruct the Hessian from the gradient of the symmetric gradient:
/// `d_i d_j u_k = d_i eps_jk + d_j eps_ik - d_k eps_ij`.
pub fn hessian_from_sym<T: Real>(sample: &TensorSample<T>) -> Tensor3<T> {
    let (n, _, _) = sample.hessian.dims();
    let mut out = Tensor3::zeros(n, n, n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[(i, j, k)] = sample.grad_sym_grad[(i, j, k)]
                    + sample.grad_sym_grad[(j, i, k)]
                    - sample.grad_sym_grad[(k, i, j)];
            }
        }
    }
    out
}

/// Comparability ratios of the stress gradient at a point.
#[derive(Debug, Clone)]
pub struct ComparabilityRatios<T> {
    /// `|grad A(eps u)| / (a(|eps u|) |grad eps u|)`.
    pub vs_grad_sym: T,
    /// `|grad A(eps u)| / (a(|eps u|) |hessian|)`.
    pub vs_hessian: T,
    /// Window `[1 + i, 1 + s]` that must contain `vs_grad_sym`.
    pub window: (T, T),
}

impl<T: Real> ComparabilityRatios<T> {
    pub fn first_ratio_in_window(&self, tol: T) -> bool {
        self.vs_grad_sym >= self.window.0 - tol && self.vs_grad_sym <= self.window.1 + tol
    }
}

/// Evaluate the comparability of `|grad(A(eps u))|` with
/// `a(|eps u|) |grad eps u|` and `a(|eps u|) |hessian|` at a point.
///
/// Requires nonzero strain unless the law is C¹ at zero strain.
pub fn check_comparability<T: Real + Coeff>(
    law: &NonlinearityLaw<T>,
    jets: &FieldJets<T>,
    x: &[T],
) -> Result<ComparabilityRatios<T>> {
    let sample = jets.sample(x);
    let n = jets.dim;
    let strain_norm = sample.sym_grad.norm();
    let (a, a_prime) = if strain_norm == T::zero() {
        if !law.c1_at_zero() {
            return Err(Error::Domain(format!(
                "comparability at zero strain is undefined for the singular law {law}"
            )));
        }
        (law.a_at_zero()?, T::zero())
    } else {
        (law.eval_a(strain_norm)?, law.eval_a_prime(strain_norm)?)
    };

    // grad A(eps u)[l][i][j] = a' w_l eps_ij + a G[l][i][j],
    // with w = grad|eps u| = grad(|eps u|^2) / (2 |eps u|)
    let mut grad_stress_sq = T::zero();
    let two = T::of(2.0);
    for l in 0..n {
        let w_l = if strain_norm == T::zero() {
            T::zero()
        } else {
            jets.grad_sym_norm2[l].eval(x) / (two * strain_norm)
        };
        for i in 0..n {
            for j in 0..n {
                let entry = a_prime * w_l * sample.sym_grad[(i, j)]
                    + a * sample.grad_sym_grad[(l, i, j)];
                grad_stress_sq = grad_stress_sq + entry * entry;
            }
        }
    }
    let grad_stress = grad_stress_sq.sqrt();
    let denom_sym = a * sample.grad_sym_grad.norm_sq().sqrt();
    let denom_hess = a * sample.hessian.norm_sq().sqrt();
    if denom_sym == T::zero() || denom_hess == T::zero() {
        return Err(Error::UndefinedRatio(
            "comparability ratio needs a nonvanishing second derivative".into(),
        ));
    }
    let (i_a, s_a) = law.index_bounds();
    Ok(ComparabilityRatios {
        vs_grad_sym: grad_stress / denom_sym,
        vs_hessian: grad_stress / denom_hess,
        window: (T::one() + i_a, T::one() + s_a),
    })
}

/// Relative residual of the strain identity
/// `div(eps u) . Delta u = |grad eps u|^2 + div W` at a point.
pub fn strain_identity_residual<T: Real + Coeff>(jets: &FieldJets<T>, x: &[T]) -> T {
    let n = jets.dim;
    let lhs: T = (0..n)
        .map(|i| jets.div_sym[i].eval(x) * jets.laplacian[i].eval(x))
        .sum();
    let mut grad_sym_sq = T::zero();
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                let g = jets.grad_sym[l][i][j].eval(x);
                grad_sym_sq = grad_sym_sq + g * g;
            }
        }
    }
    let rhs = grad_sym_sq + jets.div_flux_low.eval(x);
    (lhs - rhs).abs() / (T::one() + lhs.abs() + rhs.abs())
}

/// Strain linearity: `eps(alpha u + beta v) = alpha eps u + beta eps v` at a
/// point, returned as the max entry deviation.
pub fn strain_linearity_defect<T: Real + Coeff>(
    u: &TensorSample<T>,
    v: &TensorSample<T>,
    combined: &TensorSample<T>,
    alpha: T,
    beta: T,
) -> T {
    let n = u.laplacian.len();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            let expect = alpha * u.sym_grad[(i, j)] + beta * v.sym_grad[(i, j)];
            worst = worst.max((combined.sym_grad[(i, j)] - expect).abs());
        }
    }
    worst
}
