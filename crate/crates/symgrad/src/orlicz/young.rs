//! Young functions derived from a nonlinearity law: `B(t) = ∫₀ᵗ b`, the
//! conjugate `B̃(t) = ∫₀ᵗ b⁻¹`, and the shifted variant used in difference
//! quotient estimates. Closed forms are used where they exist, adaptive
//! quadrature everywhere else.

use crate::error::{Error, Result};
use crate::orlicz::law::{LawKind, NonlinearityLaw};
use crate::quad;
use crate::scalar::Real;

/// View of a law through its Young function, with a quadrature tolerance.
#[derive(Debug, Clone, Copy)]
pub struct YoungFunctionView<'a, T> {
    pub law: &'a NonlinearityLaw<T>,
    pub quad_tol: T,
}

impl<'a, T: Real> YoungFunctionView<'a, T> {
    pub fn new(law: &'a NonlinearityLaw<T>) -> Self {
        YoungFunctionView { law, quad_tol: T::of(1e-10) }
    }

    pub fn with_tolerance(law: &'a NonlinearityLaw<T>, quad_tol: T) -> Self {
        YoungFunctionView { law, quad_tol }
    }

    fn closed_form_b_integral(&self, lo: T, hi: T) -> Option<T> {
        let two = T::of(2.0);
        let p = self.law.p;
        match self.law.kind {
            LawKind::PurePower => Some((hi.powf(p) - lo.powf(p)) / p),
            LawKind::Carreau => {
                let nu = self.law.nu;
                Some(((nu + hi * hi).powf(p / two) - (nu + lo * lo).powf(p / two)) / p)
            }
            // for p = 2 the pinch cancels exactly and a ≡ 1
            LawKind::Regularized if p == two => Some((hi * hi - lo * lo) / two),
            LawKind::Regularized => None,
        }
    }

    fn b_integral(&self, lo: T, hi: T) -> Result<T> {
        if let Some(v) = self.closed_form_b_integral(lo, hi) {
            return Ok(v);
        }
        let law = *self.law;
        quad::adaptive(
            move |t| law.eval_b(t).expect("b is defined on [0, inf) for every law"),
            lo,
            hi,
            self.quad_tol,
        )
    }

    /// `B(t) = ∫₀ᵗ b(τ) dτ`.
    pub fn eval_b_big(&self, t: T) -> Result<T> {
        if t < T::zero() {
            return Err(Error::Domain(format!("Young function argument negative: {}", t)));
        }
        if t == T::zero() {
            return Ok(T::zero());
        }
        self.b_integral(T::zero(), t)
    }

    /// Inversion of the strictly increasing `b` by bracketing and bisection.
    pub fn invert_b(&self, y: T) -> Result<T> {
        let law = *self.law;
        quad::invert_increasing(
            move |t| law.eval_b(t).expect("b is defined on [0, inf)"),
            y,
        )
    }

    /// Conjugate `B̃(t) = ∫₀ᵗ b⁻¹(τ) dτ`.
    pub fn eval_b_big_conjugate(&self, t: T) -> Result<T> {
        if t < T::zero() {
            return Err(Error::Domain(format!("Young conjugate argument negative: {}", t)));
        }
        if t == T::zero() {
            return Ok(T::zero());
        }
        if self.law.kind == LawKind::PurePower {
            // conjugate exponent pair: B = t^p / p pairs with t^p' / p'
            let p = self.law.p;
            let q = p / (p - T::one());
            return Ok(t.powf(q) / q);
        }
        let this = *self;
        quad::adaptive(
            move |y| this.invert_b(y).expect("b is invertible on [0, inf)"),
            T::zero(),
            t,
            self.quad_tol,
        )
    }

    /// Shifted Young function `∫₀ᵗ a(max{m, τ}) τ dτ`.
    ///
    /// Defined whenever the integrand is: the law must be evaluable on
    /// `[min(m,t), max(m,t)]`, which excludes the singular power law.
    pub fn eval_shifted(&self, shift: T, t: T) -> Result<T> {
        if shift < T::zero() || t < T::zero() {
            return Err(Error::Domain("shifted Young function needs m, t >= 0".into()));
        }
        if self.law.singular_at_zero() && shift == T::zero() {
            return Err(Error::Domain(format!(
                "shifted Young function with m = 0 is undefined for the singular law {}",
                self.law
            )));
        }
        if t == T::zero() {
            return Ok(T::zero());
        }
        if shift == T::zero() {
            return self.eval_b_big(t);
        }
        let a_m = self.law.eval_a(shift)?;
        let two = T::of(2.0);
        let flat = shift.min(t);
        let flat_part = a_m * flat * flat / two;
        if t <= shift {
            Ok(flat_part)
        } else {
            Ok(flat_part + self.b_integral(shift, t)?)
        }
    }
}
