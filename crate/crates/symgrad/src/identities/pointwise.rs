//! The two pointwise differential identities for the stress tensor: both
//! sides are evaluated from exact polynomial data plus the scalar law, so
//! residuals are limited only by round-off.

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::orlicz::NonlinearityLaw;
use crate::scalar::Real;
use crate::tensorfields::{Coeff, FieldJets};

/// Which identity: the base one (used in low dimension) or the
/// divergence-coupled one (valid in every dimension).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    LowDim,
    AllDim,
}

/// Evaluation of one identity at one point.
#[derive(Debug, Clone)]
pub struct IdentityEval<T> {
    pub lhs: T,
    pub rhs: T,
    /// `|lhs - rhs| / (1 + |lhs| + |rhs|)`.
    pub residual: T,
    /// Magnitudes of the main bracket terms, for conditioning reports:
    /// `[|G|^2, |L|^2/2, theta term, divergence-coupling term, flux term]`.
    pub term_magnitudes: [T; 5],
}

/// Evaluate one pointwise identity at `x`.
///
/// Strain may vanish at `x` only for laws that are C¹ at zero; there the
/// `theta`-dependent terms are dropped and the flux derivative collapses to
/// `a(0)^2` times the polynomial flux divergence.
pub fn identity_residual<T: Real + Coeff>(
    kind: IdentityKind,
    law: &NonlinearityLaw<T>,
    jets: &FieldJets<T>,
    x: &[T],
) -> Result<IdentityEval<T>> {
    let n = jets.dim;
    let sample = jets.sample(x);
    let strain_norm = sample.sym_grad.norm();
    let zero_strain = strain_norm == T::zero();
    if zero_strain && !law.c1_at_zero() {
        return Err(Error::Domain(format!(
            "identity at zero strain is undefined for the singular law {law}"
        )));
    }

    let (a, a_prime, theta) = if zero_strain {
        (law.a_at_zero()?, T::zero(), T::zero())
    } else {
        (
            law.eval_a(strain_norm)?,
            law.eval_a_prime(strain_norm)?,
            law.eval_theta(strain_norm)?,
        )
    };
    let two = T::of(2.0);
    let half = T::of(0.5);

    // gradient of |eps u|: w_l = d_l(|eps u|^2) / (2 |eps u|)
    let w: Vec<T> = if zero_strain {
        vec![T::zero(); n]
    } else {
        (0..n)
            .map(|l| jets.grad_sym_norm2[l].eval(x) / (two * strain_norm))
            .collect()
    };

    // div(A(eps u))_i = a (div eps u)_i + a' (eps u w)_i
    let div_sym: Vec<T> = jets.div_sym.iter().map(|p| p.eval(x)).collect();
    let div_stress: Vec<T> = (0..n)
        .map(|i| {
            let coupling: T = (0..n).map(|j| sample.sym_grad[(i, j)] * w[j]).sum();
            a * div_sym[i] + a_prime * coupling
        })
        .collect();
    let lhs = two * a * dot(&div_stress, &sample.laplacian);

    let grad_sym_sq = sample.grad_sym_grad.norm_sq();
    let lap_sq = dot(&sample.laplacian, &sample.laplacian);
    let w_sq = dot(&w, &w);

    let flux_low: Vec<T> = jets.flux_low.iter().map(|p| p.eval(x)).collect();
    let div_flux_low = jets.div_flux_low.eval(x);

    let (bracket, flux, coupling_term) = match kind {
        IdentityKind::LowDim => {
            let coupling = half * dot(&sample.grad_div, &sample.laplacian);
            let bracket =
                grad_sym_sq + half * lap_sq + two * theta * w_sq + coupling;
            // div(a^2 W) = a^2 div W + 2 a a' (w . W)
            let flux = a * a * div_flux_low + two * a * a_prime * dot(&w, &flux_low);
            (bracket, flux, coupling)
        }
        IdentityKind::AllDim => {
            let grad_div_sq = dot(&sample.grad_div, &sample.grad_div);
            let coupling = if zero_strain {
                T::zero()
            } else {
                let l_minus_dd: Vec<T> = (0..n)
                    .map(|i| sample.laplacian[i] - sample.grad_div[i])
                    .collect();
                -theta * dot(&w, &l_minus_dd) * (sample.divergence / strain_norm)
            };
            let bracket = grad_sym_sq
                + half * lap_sq
                + half * grad_div_sq
                + two * theta * w_sq
                + coupling;
            let flux_div: Vec<T> = jets.flux_div.iter().map(|p| p.eval(x)).collect();
            let div_flux_div = jets.div_flux_div.eval(x);
            let total_flux: Vec<T> = (0..n).map(|i| flux_low[i] + half * flux_div[i]).collect();
            let flux = a * a * (div_flux_low + half * div_flux_div)
                + two * a * a_prime * dot(&w, &total_flux);
            (bracket, flux, coupling)
        }
    };

    let rhs = a * a * bracket + flux;
    let residual = (lhs - rhs).abs() / (T::one() + lhs.abs() + rhs.abs());
    Ok(IdentityEval {
        lhs,
        rhs,
        residual,
        term_magnitudes: [
            grad_sym_sq.abs(),
            (half * lap_sq).abs(),
            (two * theta * w_sq).abs(),
            coupling_term.abs(),
            flux.abs(),
        ],
    })
}
