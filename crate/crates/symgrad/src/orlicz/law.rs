//! Scalar nonlinearity laws `t ↦ a(t)` behind the matrix stress map
//! `ξ ↦ a(|ξ|)ξ`, with exact derivatives and index metadata.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Which member of the law family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawKind {
    /// `a(t) = t^(p-2)`; singular or degenerate at `t = 0` unless `p = 2`.
    PurePower,
    /// The rational pinch of the power law: bounded between `eps` and
    /// `1/eps`, continuously differentiable at `t = 0`.
    Regularized,
    /// `a(t) = (nu + t^2)^((p-2)/2)`; smooth at `t = 0` for `nu > 0`.
    Carreau,
}

/// A scalar law with exponent `p`, pinch parameter `eps`, and Carreau
/// parameter `nu`. Unused parameters are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearityLaw<T> {
    pub kind: LawKind,
    pub p: T,
    pub eps: T,
    pub nu: T,
}

impl<T: Real> NonlinearityLaw<T> {
    pub fn pure_power(p: T) -> Result<Self> {
        if !(p > T::one()) {
            return Err(Error::Domain(format!("power law needs p > 1, got {}", p)));
        }
        Ok(NonlinearityLaw { kind: LawKind::PurePower, p, eps: T::zero(), nu: T::zero() })
    }

    pub fn regularized(p: T, eps: T) -> Result<Self> {
        if !(p > T::one()) {
            return Err(Error::Domain(format!("regularized law needs p > 1, got {}", p)));
        }
        if !(eps > T::zero() && eps < T::one()) {
            return Err(Error::Domain(format!(
                "regularized law needs eps in (0, 1), got {}",
                eps
            )));
        }
        Ok(NonlinearityLaw { kind: LawKind::Regularized, p, eps, nu: T::zero() })
    }

    pub fn carreau(p: T, nu: T) -> Result<Self> {
        if !(p > T::one()) {
            return Err(Error::Domain(format!("carreau law needs p > 1, got {}", p)));
        }
        if nu < T::zero() {
            return Err(Error::Domain(format!("carreau law needs nu >= 0, got {}", nu)));
        }
        Ok(NonlinearityLaw { kind: LawKind::Carreau, p, eps: T::zero(), nu })
    }

    /// A law degenerate or singular at zero strain refuses scalar evaluation
    /// there; the matrix stress map still sends 0 to 0.
    pub fn singular_at_zero(&self) -> bool {
        match self.kind {
            LawKind::PurePower => self.p < T::of(2.0),
            LawKind::Carreau => self.nu == T::zero() && self.p < T::of(2.0),
            LawKind::Regularized => false,
        }
    }

    /// Does `b(t) = t a(t)` extend to a C¹ function on `[0, ∞)`?
    pub fn c1_at_zero(&self) -> bool {
        match self.kind {
            LawKind::PurePower => self.p >= T::of(2.0),
            LawKind::Carreau => self.nu > T::zero() || self.p >= T::of(2.0),
            LawKind::Regularized => true,
        }
    }

    fn check_scalar_domain(&self, t: T) -> Result<()> {
        if t < T::zero() {
            return Err(Error::Domain(format!("law argument must be nonnegative, got {}", t)));
        }
        if t == T::zero() && self.singular_at_zero() {
            return Err(Error::Domain(format!(
                "law {} is singular at t = 0; use the matrix stress map for zero strain",
                self
            )));
        }
        Ok(())
    }

    /// `a(t)`.
    pub fn eval_a(&self, t: T) -> Result<T> {
        self.check_scalar_domain(t)?;
        let two = T::of(2.0);
        Ok(match self.kind {
            LawKind::PurePower => {
                if t == T::zero() {
                    // p >= 2 here; limit value of t^(p-2)
                    if self.p == two {
                        T::one()
                    } else {
                        T::zero()
                    }
                } else {
                    t.powf(self.p - two)
                }
            }
            LawKind::Regularized => {
                let g = (self.eps + t * t).powf((self.p - two) / two);
                (g + self.eps) / (T::one() + self.eps * g)
            }
            LawKind::Carreau => {
                if self.nu == T::zero() && t == T::zero() {
                    // p >= 2 by the domain check
                    if self.p == two {
                        T::one()
                    } else {
                        T::zero()
                    }
                } else {
                    (self.nu + t * t).powf((self.p - two) / two)
                }
            }
        })
    }

    /// Exact `a'(t)`.
    pub fn eval_a_prime(&self, t: T) -> Result<T> {
        self.check_scalar_domain(t)?;
        let two = T::of(2.0);
        let four = T::of(4.0);
        match self.kind {
            LawKind::PurePower => {
                if t == T::zero() {
                    // (p-2) t^(p-3) at 0: finite only for p = 2 or p >= 3
                    if self.p == two {
                        Ok(T::zero())
                    } else if self.p >= T::of(3.0) {
                        Ok(if self.p == T::of(3.0) { T::one() } else { T::zero() })
                    } else {
                        Err(Error::Domain(format!(
                            "a'(0) is unbounded for the power law with p = {}",
                            self.p
                        )))
                    }
                } else {
                    Ok((self.p - two) * t.powf(self.p - T::of(3.0)))
                }
            }
            LawKind::Regularized => {
                let s = self.eps + t * t;
                let g = s.powf((self.p - two) / two);
                let g_prime = (self.p - two) * t * s.powf((self.p - four) / two);
                let denom = T::one() + self.eps * g;
                Ok(g_prime * (T::one() - self.eps * self.eps) / (denom * denom))
            }
            LawKind::Carreau => {
                if self.nu == T::zero() {
                    let power = NonlinearityLaw { kind: LawKind::PurePower, ..*self };
                    return power.eval_a_prime(t);
                }
                Ok((self.p - two) * t * (self.nu + t * t).powf((self.p - four) / two))
            }
        }
    }

    /// `b(t) = t a(t)`, extended by 0 at `t = 0` for every law.
    pub fn eval_b(&self, t: T) -> Result<T> {
        if t < T::zero() {
            return Err(Error::Domain(format!("law argument must be nonnegative, got {}", t)));
        }
        if t == T::zero() {
            return Ok(T::zero());
        }
        Ok(t * self.eval_a(t)?)
    }

    /// `b'(t) = a(t) + a'(t) t`.
    pub fn eval_b_prime(&self, t: T) -> Result<T> {
        if t == T::zero() {
            return self.a_at_zero();
        }
        Ok(self.eval_a(t)? + self.eval_a_prime(t)? * t)
    }

    /// The continuous extension `a(0) = b'(0)`, defined whenever `b` is C¹.
    pub fn a_at_zero(&self) -> Result<T> {
        if !self.c1_at_zero() {
            return Err(Error::Domain(format!("law {} has no C1 extension at t = 0", self)));
        }
        let two = T::of(2.0);
        Ok(match self.kind {
            LawKind::PurePower => {
                if self.p == two {
                    T::one()
                } else {
                    T::zero()
                }
            }
            LawKind::Regularized => {
                let g = self.eps.powf((self.p - two) / two);
                (g + self.eps) / (T::one() + self.eps * g)
            }
            LawKind::Carreau => {
                if self.nu > T::zero() {
                    self.nu.powf((self.p - two) / two)
                } else if self.p == two {
                    T::one()
                } else {
                    T::zero()
                }
            }
        })
    }

    /// `theta(t) = a'(t) t / a(t)`, with `theta(0) = 0` for laws that are C¹
    /// at zero.
    pub fn eval_theta(&self, t: T) -> Result<T> {
        if t == T::zero() {
            return if self.kind != LawKind::PurePower && self.c1_at_zero() {
                Ok(T::zero())
            } else {
                Err(Error::Domain(format!("theta(0) is undefined for law {}", self)))
            };
        }
        let two = T::of(2.0);
        match self.kind {
            LawKind::PurePower => {
                self.check_scalar_domain(t)?;
                Ok(self.p - two)
            }
            // closed form avoids the 0/0 of a'(t) t / a(t) at extreme t
            LawKind::Regularized => {
                let s = self.eps + t * t;
                let g = s.powf((self.p - two) / two);
                let numer = (T::one() - self.eps * self.eps) * (self.p - two) * t * t * g;
                Ok(numer / (s * (T::one() + self.eps * g) * (g + self.eps)))
            }
            LawKind::Carreau => {
                if self.nu == T::zero() {
                    self.check_scalar_domain(t)?;
                    return Ok(self.p - two);
                }
                Ok((self.p - two) * t * t / (self.nu + t * t))
            }
        }
    }

    /// A-priori window `[i, s]` containing every value of `theta`.
    ///
    /// Exact endpoints for the power law; for the other kinds these are the
    /// proven enclosing bounds `[min(p,2)-2, max(p,2)-2]`.
    pub fn index_bounds(&self) -> (T, T) {
        let two = T::of(2.0);
        match self.kind {
            LawKind::PurePower => (self.p - two, self.p - two),
            LawKind::Regularized => (self.p.min(two) - two, self.p.max(two) - two),
            LawKind::Carreau => {
                if self.nu == T::zero() {
                    (self.p - two, self.p - two)
                } else {
                    (self.p.min(two) - two, self.p.max(two) - two)
                }
            }
        }
    }

    /// Matrix stress map `A(xi) = a(|xi|) xi`, with `A(0) = 0` for every law.
    pub fn stress(&self, xi: &Matrix<T>) -> Matrix<T> {
        let norm = xi.norm();
        if norm == T::zero() {
            return Matrix::zeros(xi.rows(), xi.cols());
        }
        let a = self.eval_a(norm).expect("norm > 0 is always in the scalar domain");
        xi.scale(a)
    }

    /// Derivative of the stress map at `xi`, as a linear action on matrices.
    pub fn stress_jacobian(&self, xi: &Matrix<T>) -> Result<StressJacobian<T>> {
        let norm = xi.norm();
        if norm == T::zero() {
            let a0 = self.a_at_zero().map_err(|_| {
                Error::Domain(format!(
                    "stress jacobian at zero strain is undefined for the singular law {}",
                    self
                ))
            })?;
            return Ok(StressJacobian {
                identity_coeff: a0,
                rank_one_coeff: T::zero(),
                direction: Matrix::zeros(xi.rows(), xi.cols()),
            });
        }
        Ok(StressJacobian {
            identity_coeff: self.eval_a(norm)?,
            rank_one_coeff: self.eval_a_prime(norm)? / norm,
            direction: xi.clone(),
        })
    }
}

impl<T: Real> std::fmt::Display for NonlinearityLaw<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            LawKind::PurePower => write!(f, "power(p={})", self.p),
            LawKind::Regularized => write!(f, "regularized(p={}, eps={})", self.p, self.eps),
            LawKind::Carreau => write!(f, "carreau(p={}, nu={})", self.p, self.nu),
        }
    }
}

/// The action `eta ↦ a(|xi|) eta + a'(|xi|) (xi : eta / |xi|) xi`.
///
/// At `xi = 0` (C¹ laws only) this collapses to `a(0)` times the identity.
#[derive(Debug, Clone)]
pub struct StressJacobian<T> {
    pub identity_coeff: T,
    pub rank_one_coeff: T,
    pub direction: Matrix<T>,
}

impl<T: Real> StressJacobian<T> {
    pub fn apply(&self, eta: &Matrix<T>) -> Matrix<T> {
        let mut out = eta.scale(self.identity_coeff);
        if self.rank_one_coeff != T::zero() {
            let proj = self.direction.dot(eta) * self.rank_one_coeff;
            out = out.add(&self.direction.scale(proj));
        }
        out
    }

    /// Bilinear form `<D[eta], zeta>`; symmetric in its arguments.
    pub fn form(&self, eta: &Matrix<T>, zeta: &Matrix<T>) -> T {
        self.apply(eta).dot(zeta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg(p: f64, eps: f64) -> NonlinearityLaw<f64> {
        NonlinearityLaw::regularized(p, eps).unwrap()
    }

    #[test]
    fn constructor_validation() {
        assert!(NonlinearityLaw::pure_power(1.0).is_err());
        assert!(NonlinearityLaw::regularized(2.0, 0.0).is_err());
        assert!(NonlinearityLaw::regularized(2.0, 1.0).is_err());
        assert!(NonlinearityLaw::carreau(2.0, -0.1).is_err());
    }

    #[test]
    fn power_law_values() {
        let law = NonlinearityLaw::pure_power(3.0).unwrap();
        assert_eq!(law.eval_a(2.0).unwrap(), 2.0);
        assert_eq!(law.eval_a_prime(5.0).unwrap(), 1.0);
        assert_eq!(law.eval_theta(7.0).unwrap(), 1.0);
    }

    #[test]
    fn singular_power_law_refuses_zero() {
        let law = NonlinearityLaw::pure_power(1.5).unwrap();
        assert!(law.eval_a(0.0).is_err());
        assert!(law.eval_theta(0.0).is_err());
        assert!(law.stress_jacobian(&Matrix::zeros(2, 2)).is_err());
        // the matrix map still sends 0 to 0
        assert!(law.stress(&Matrix::zeros(2, 2)).is_zero());
    }

    #[test]
    fn regularized_collapses_for_p_two() {
        let law = reg(2.0, 0.5);
        assert_eq!(law.eval_a(7.0).unwrap(), 1.0);
        assert_eq!(law.eval_a_prime(3.0).unwrap(), 0.0);
    }

    #[test]
    fn regularized_tail_approaches_eps() {
        let law = reg(1.5, 0.1);
        let a = law.eval_a(1e6).unwrap();
        assert!((a - 0.1).abs() < 1e-3, "a(1e6) = {a}");
    }

    #[test]
    fn regularized_theta_zero_at_origin_and_windowed() {
        let law = reg(1.7, 0.05);
        assert_eq!(law.eval_theta(0.0).unwrap(), 0.0);
        for k in -40..=40 {
            let t = 10f64.powf(k as f64 / 5.0);
            let theta = law.eval_theta(t).unwrap();
            assert!((-0.3 - 1e-14..=1e-14).contains(&theta), "theta({t}) = {theta}");
        }
    }

    #[test]
    fn a_prime_matches_central_differences() {
        for law in [
            reg(3.0, 0.01),
            reg(1.6, 0.2),
            NonlinearityLaw::carreau(2.5, 0.3).unwrap(),
            NonlinearityLaw::pure_power(2.5).unwrap(),
        ] {
            for k in -3..=3 {
                let t = 10f64.powi(k);
                let h = 1e-6 * t.max(1.0);
                let fd = (law.eval_a(t + h).unwrap() - law.eval_a(t - h).unwrap()) / (2.0 * h);
                let exact = law.eval_a_prime(t).unwrap();
                assert!(
                    (fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()),
                    "{law} at t={t}: fd={fd}, exact={exact}"
                );
            }
        }
    }

    #[test]
    fn stress_zero_convention_and_linear_case() {
        let law = NonlinearityLaw::pure_power(2.0).unwrap();
        let xi = Matrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(law.stress(&xi), xi);

        let p3 = NonlinearityLaw::pure_power(3.0).unwrap();
        let mut diag = Matrix::zeros(3, 3);
        diag[(0, 0)] = -1.5; // 2|x2| with x2 = -0.75
        let stress = p3.stress(&diag);
        assert!((stress[(0, 0)] + (-1.5f64).abs().powf(2.0)).abs() < 1e-15);
        assert_eq!(stress[(1, 1)], 0.0);
    }

    #[test]
    fn stress_jacobian_zero_strain_branch() {
        let law = reg(3.0, 0.25);
        let jac = law.stress_jacobian(&Matrix::zeros(2, 2)).unwrap();
        let eta = Matrix::from_rows(&[&[1.0, -2.0], &[0.5, 0.0]]);
        let expected = eta.scale(law.a_at_zero().unwrap());
        assert_eq!(jac.apply(&eta), expected);
    }

    #[test]
    fn stress_jacobian_matches_directional_difference() {
        let law = reg(3.0, 0.01);
        let xi = Matrix::from_rows(&[&[0.3, -0.7], &[1.1, 0.4]]);
        let eta = Matrix::from_rows(&[&[-0.2, 0.9], &[0.1, -1.3]]);
        let h = 1e-6;
        let plus = law.stress(&xi.add(&eta.scale(h)));
        let minus = law.stress(&xi.add(&eta.scale(-h)));
        let fd = plus.sub(&minus).scale(0.5 / h);
        let exact = law.stress_jacobian(&xi).unwrap().apply(&eta);
        let rel = fd.sub(&exact).norm() / (1.0 + exact.norm());
        assert!(rel < 1e-6, "relative deviation {rel}");
    }

    #[test]
    fn stress_jacobian_is_self_adjoint() {
        let law = reg(1.8, 0.05);
        let xi = Matrix::from_rows(&[&[0.3, -0.2], &[0.8, 0.1]]);
        let eta = Matrix::from_rows(&[&[1.0, 0.4], &[-0.6, 0.2]]);
        let zeta = Matrix::from_rows(&[&[-0.9, 0.3], &[0.7, 1.2]]);
        let jac = law.stress_jacobian(&xi).unwrap();
        assert!((jac.form(&eta, &zeta) - jac.form(&zeta, &eta)).abs() < 1e-14);
    }
}
