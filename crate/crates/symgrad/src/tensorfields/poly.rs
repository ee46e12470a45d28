//! Multivariate polynomials over an exact or floating coefficient ring.
//! Differentiation is coefficient arithmetic, so derivative identities hold
//! exactly for rational coefficients and to round-off for floats.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficient ring: floats for numerics, `BigRational` for exact checks.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    fn from_ratio(numer: i64, denom: i64) -> Self;
}

impl Coeff for f64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }
}

impl Coeff for f32 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f32 / denom as f32
    }
}

impl Coeff for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(numer.into(), denom.into())
    }
}

/// Sparse multivariate polynomial; keys are exponent tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, value: C) -> Self {
        let mut p = Self::zero(nvars);
        if !value.is_zero() {
            p.terms.insert(vec![0; nvars], value);
        }
        p
    }

    /// The coordinate polynomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0u8; nvars];
        exps[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exps, C::one());
        p
    }

    /// Single monomial `c * x^exps`.
    pub fn monomial(nvars: usize, exps: &[u8], value: C) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !value.is_zero() {
            p.terms.insert(exps.to_vec(), value);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    fn insert_term(&mut self, exps: Vec<u8>, value: C) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + value;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    slot.insert(sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        if s.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            let v = c.clone() * s.clone();
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u8> =
                    ea.iter().zip(eb).map(|(&a, &b)| a.checked_add(b).expect("degree overflow")).collect();
                out.insert_term(exps, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to `x_i`.
    pub fn diff(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] = k - 1;
            let factor = C::from_ratio(k as i64, 1);
            out.insert_term(exps, c.clone() * factor);
        }
        out
    }

    pub fn eval(&self, x: &[C]) -> C {
        assert_eq!(x.len(), self.nvars);
        let mut total = C::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term * x[i].clone();
                }
            }
            total = total + term;
        }
        total
    }
}
