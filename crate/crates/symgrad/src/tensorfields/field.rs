//! Polynomial vector fields with exact derivative blocks, the symbolic jets
//! feeding the identity checks, and pointwise tensor samples.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Tensor3};
use crate::scalar::Real;
use crate::tensorfields::poly::{Coeff, Polynomial};
use rand::Rng;

/// Supported dimension range; covers every regime of the threshold table.
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

/// Exact polynomial vector field `u: R^n -> R^n`.
#[derive(Debug, Clone)]
pub struct PolyVectorField<C> {
    dim: usize,
    components: Vec<Polynomial<C>>,
}

impl<C: Coeff> PolyVectorField<C> {
    pub fn new(components: Vec<Polynomial<C>>) -> Result<Self> {
        let dim = components.len();
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(Error::Domain(format!(
                "field dimension must be {MIN_DIM}..={MAX_DIM}, got {dim}"
            )));
        }
        if components.iter().any(|p| p.nvars() != dim) {
            return Err(Error::Domain("component variable count must equal the dimension".into()));
        }
        Ok(PolyVectorField { dim, components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Polynomial<C>] {
        &self.components
    }

    pub fn max_degree(&self) -> usize {
        self.components.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Affine field `u = M x + c`.
    pub fn affine(matrix: &[Vec<C>], shift: &[C]) -> Result<Self> {
        let dim = matrix.len();
        let mut components = Vec::with_capacity(dim);
        for i in 0..dim {
            if matrix[i].len() != dim || shift.len() != dim {
                return Err(Error::Domain("affine data shape mismatch".into()));
            }
            let mut p = Polynomial::constant(dim, shift[i].clone());
            for j in 0..dim {
                p = p.add(&Polynomial::var(dim, j).scale(&matrix[i][j]));
            }
            components.push(p);
        }
        Self::new(components)
    }

    /// The quadratic shear field `(2 x1 x2, -x1^2, 0, ...)`: an exact
    /// zero-divergence-of-stress solution whose strain vanishes on the
    /// hyperplane `x2 = 0`.
    pub fn singular_shear(dim: usize) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(Error::Domain(format!("dimension {dim} out of range")));
        }
        let x1 = Polynomial::var(dim, 0);
        let x2 = Polynomial::var(dim, 1);
        let mut components = vec![Polynomial::zero(dim); dim];
        components[0] = x1.mul(&x2).scale(&C::from_ratio(2, 1));
        components[1] = x1.mul(&x1).neg();
        Self::new(components)
    }

    /// Symbolic derivative blocks for this field.
    pub fn jets(&self) -> FieldJets<C> {
        FieldJets::build(self)
    }
}

impl<C: Coeff + Real> PolyVectorField<C> {
    /// Random field: i.i.d. coefficients uniform in `[-1, 1]` over all
    /// monomials of total degree at most `degree`.
    pub fn random<R: Rng>(dim: usize, degree: usize, rng: &mut R) -> Result<Self> {
        let mut components = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut p = Polynomial::zero(dim);
            let mut exps = vec![0u8; dim];
            loop {
                let total: usize = exps.iter().map(|&e| e as usize).sum();
                if total <= degree {
                    let c: f64 = rng.gen_range(-1.0..1.0);
                    p = p.add(&Polynomial::monomial(dim, &exps, C::of(c)));
                }
                // odometer over exponent tuples bounded by `degree`
                let mut carry = true;
                for e in exps.iter_mut() {
                    if carry {
                        *e += 1;
                        if *e as usize > degree {
                            *e = 0;
                        } else {
                            carry = false;
                        }
                    }
                }
                if carry {
                    break;
                }
            }
            components.push(p);
        }
        Self::new(components)
    }

    /// Random divergence-free field built from rotational potentials
    /// (supported for n = 2 and n = 3).
    pub fn random_divergence_free<R: Rng>(
        dim: usize,
        degree: usize,
        rng: &mut R,
    ) -> Result<Self> {
        match dim {
            2 => {
                let phi = Self::random(2, degree + 1, rng)?.components[0].clone();
                let components = vec![phi.diff(1), phi.diff(0).neg()];
                Self::new(components)
            }
            3 => {
                let potential = Self::random(3, degree + 1, rng)?;
                let a = potential.components();
                let components = vec![
                    a[2].diff(1).sub(&a[1].diff(2)),
                    a[0].diff(2).sub(&a[2].diff(0)),
                    a[1].diff(0).sub(&a[0].diff(1)),
                ];
                Self::new(components)
            }
            _ => Err(Error::Domain(
                "divergence-free generator supports dimensions 2 and 3".into(),
            )),
        }
    }
}

/// All symbolic derivative blocks of a field needed by the pointwise
/// identities: everything here is a polynomial, so later point evaluation is
/// limited only by round-off of the coefficient ring.
#[derive(Debug, Clone)]
pub struct FieldJets<C> {
    pub dim: usize,
    /// `grad[i][j] = d_j u_i` (rows are gradients of components).
    pub grad: Vec<Vec<Polynomial<C>>>,
    /// Symmetric gradient entries.
    pub sym: Vec<Vec<Polynomial<C>>>,
    /// `hessian[i][j][k] = d_i d_j u_k`.
    pub hessian: Vec<Vec<Vec<Polynomial<C>>>>,
    /// `grad_sym[l][i][j] = d_l eps_ij`.
    pub grad_sym: Vec<Vec<Vec<Polynomial<C>>>>,
    pub laplacian: Vec<Polynomial<C>>,
    pub divergence: Polynomial<C>,
    pub grad_div: Vec<Polynomial<C>>,
    /// `(div eps u)_i = sum_j d_j eps_ij`.
    pub div_sym: Vec<Polynomial<C>>,
    /// `|eps u|^2`.
    pub sym_norm2: Polynomial<C>,
    /// Gradient of `|eps u|^2`.
    pub grad_sym_norm2: Vec<Polynomial<C>>,
    /// Flux row of the base identity: `W_i = (Delta u)^T eps u - 1/2 d_i |eps u|^2`.
    pub flux_low: Vec<Polynomial<C>>,
    pub div_flux_low: Polynomial<C>,
    /// Extra flux of the divergence-coupled identity:
    /// `Z_i = (div u)(Delta u_i - (grad div u)_i)`.
    pub flux_div: Vec<Polynomial<C>>,
    pub div_flux_div: Polynomial<C>,
}

impl<C: Coeff> FieldJets<C> {
    fn build(field: &PolyVectorField<C>) -> Self {
        let n = field.dim;
        let u = &field.components;
        let half = C::from_ratio(1, 2);

        let grad: Vec<Vec<_>> =
            (0..n).map(|i| (0..n).map(|j| u[i].diff(j)).collect()).collect();
        let sym: Vec<Vec<_>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| grad[i][j].add(&grad[j][i]).scale(&half))
                    .collect()
            })
            .collect();
        let hessian: Vec<Vec<Vec<_>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| u[k].diff(i).diff(j)).collect())
                    .collect()
            })
            .collect();
        let grad_sym: Vec<Vec<Vec<_>>> = (0..n)
            .map(|l| {
                (0..n)
                    .map(|i| (0..n).map(|j| sym[i][j].diff(l)).collect())
                    .collect()
            })
            .collect();
        let laplacian: Vec<_> = (0..n)
            .map(|k| {
                let mut p = Polynomial::zero(n);
                for l in 0..n {
                    p = p.add(&hessian[l][l][k]);
                }
                p
            })
            .collect();
        let mut divergence = Polynomial::zero(n);
        for (i, row) in grad.iter().enumerate() {
            divergence = divergence.add(&row[i]);
        }
        let grad_div: Vec<_> = (0..n).map(|k| divergence.diff(k)).collect();
        let div_sym: Vec<_> = (0..n)
            .map(|i| {
                let mut p = Polynomial::zero(n);
                for j in 0..n {
                    p = p.add(&sym[i][j].diff(j));
                }
                p
            })
            .collect();
        let mut sym_norm2 = Polynomial::zero(n);
        for row in &sym {
            for e in row {
                sym_norm2 = sym_norm2.add(&e.mul(e));
            }
        }
        let grad_sym_norm2: Vec<_> = (0..n).map(|l| sym_norm2.diff(l)).collect();

        let flux_low: Vec<_> = (0..n)
            .map(|i| {
                let mut p = Polynomial::zero(n);
                for j in 0..n {
                    p = p.add(&laplacian[j].mul(&sym[j][i]));
                }
                p.sub(&grad_sym_norm2[i].scale(&half))
            })
            .collect();
        let mut div_flux_low = Polynomial::zero(n);
        for (i, w) in flux_low.iter().enumerate() {
            div_flux_low = div_flux_low.add(&w.diff(i));
        }

        let flux_div: Vec<_> = (0..n)
            .map(|i| divergence.mul(&laplacian[i].sub(&grad_div[i])))
            .collect();
        let mut div_flux_div = Polynomial::zero(n);
        for (i, z) in flux_div.iter().enumerate() {
            div_flux_div = div_flux_div.add(&z.diff(i));
        }

        FieldJets {
            dim: n,
            grad,
            sym,
            hessian,
            grad_sym,
            laplacian,
            divergence,
            grad_div,
            div_sym,
            sym_norm2,
            grad_sym_norm2,
            flux_low,
            div_flux_low,
            flux_div,
            div_flux_div,
        }
    }

    /// Residual polynomial of the strain-Laplacian identity
    /// `div(eps u) . Delta u = |grad eps u|^2 + div W`; identically zero for
    /// every field, exactly so over rational coefficients.
    pub fn strain_identity_residual(&self) -> Polynomial<C> {
        let n = self.dim;
        let mut lhs = Polynomial::zero(n);
        for i in 0..n {
            lhs = lhs.add(&self.div_sym[i].mul(&self.laplacian[i]));
        }
        let mut grad_sym_sq = Polynomial::zero(n);
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let g = &self.grad_sym[l][i][j];
                    grad_sym_sq = grad_sym_sq.add(&g.mul(g));
                }
            }
        }
        lhs.sub(&grad_sym_sq).sub(&self.div_flux_low)
    }

    /// Hessian reconstruction from the gradient of the symmetric gradient,
    /// as polynomials: `d_i d_j u_k = d_i eps_jk + d_j eps_ik - d_k eps_ij`.
    pub fn hessian_from_sym_poly(&self, i: usize, j: usize, k: usize) -> Polynomial<C> {
        self.grad_sym[i][j][k]
            .add(&self.grad_sym[j][i][k])
            .sub(&self.grad_sym[k][i][j])
    }
}

/// Pointwise derivative data of a field: every block evaluated exactly from
/// the polynomial coefficients.
#[derive(Debug, Clone)]
pub struct TensorSample<T> {
    pub x: Vec<T>,
    pub grad: Matrix<T>,
    pub sym_grad: Matrix<T>,
    pub hessian: Tensor3<T>,
    pub grad_sym_grad: Tensor3<T>,
    pub laplacian: Vec<T>,
    pub divergence: T,
    pub grad_div: Vec<T>,
}

impl<C: Coeff + Real> FieldJets<C> {
    pub fn sample(&self, x: &[C]) -> TensorSample<C> {
        let n = self.dim;
        assert_eq!(x.len(), n, "point dimension mismatch");
        let mut grad = Matrix::zeros(n, n);
        let mut sym_grad = Matrix::zeros(n, n);
        let mut hessian = Tensor3::zeros(n, n, n);
        let mut grad_sym_grad = Tensor3::zeros(n, n, n);
        for i in 0..n {
            for j in 0..n {
                grad[(i, j)] = self.grad[i][j].eval(x);
                sym_grad[(i, j)] = self.sym[i][j].eval(x);
                for k in 0..n {
                    hessian[(i, j, k)] = self.hessian[i][j][k].eval(x);
                    grad_sym_grad[(i, j, k)] = self.grad_sym[i][j][k].eval(x);
                }
            }
        }
        TensorSample {
            x: x.to_vec(),
            grad,
            sym_grad,
            hessian,
            grad_sym_grad,
            laplacian: self.laplacian.iter().map(|p| p.eval(x)).collect(),
            divergence: self.divergence.eval(x),
            grad_div: self.grad_div.iter().map(|p| p.eval(x)).collect(),
        }
    }
}

impl<C: Coeff + Real> PolyVectorField<C> {
    /// Evaluate all derivative blocks at a point. Building jets per call is
    /// fine for one-off samples; batch callers should reuse [`PolyVectorField::jets`].
    pub fn sample(&self, x: &[C]) -> TensorSample<C> {
        self.jets().sample(x)
    }

    pub fn eval(&self, x: &[C]) -> Vec<C> {
        self.components.iter().map(|p| p.eval(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn affine_field_has_constant_gradient_and_zero_hessian() {
        let m = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        let c = vec![-1.0, 0.5];
        let field = PolyVectorField::affine(&m, &c).unwrap();
        let s = field.sample(&[0.3, -0.7]);
        assert_eq!(s.grad[(0, 1)], 2.0);
        assert_eq!(s.grad[(1, 0)], 3.0);
        assert_eq!(s.hessian.max_abs(), 0.0);
        assert_eq!(s.divergence, 5.0);
    }

    #[test]
    fn singular_shear_strain_is_diagonal() {
        let field = PolyVectorField::<f64>::singular_shear(3).unwrap();
        let s = field.sample(&[0.4, -0.9, 0.2]);
        // eps u = diag(2 x2, 0, 0)
        assert!((s.sym_grad[(0, 0)] - (-1.8)).abs() < 1e-15);
        for i in 0..3 {
            for j in 0..3 {
                if (i, j) != (0, 0) {
                    assert_eq!(s.sym_grad[(i, j)], 0.0, "entry ({i},{j})");
                }
            }
        }
        // Delta u = (0, -2, 0); div u = 2 x2; grad div = (0, 2, 0)
        assert_eq!(s.laplacian, vec![0.0, -2.0, 0.0]);
        assert!((s.divergence - (-1.8)).abs() < 1e-15);
        assert_eq!(s.grad_div, vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn sample_invariants_hold_for_random_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [2usize, 3] {
            let field = PolyVectorField::<f64>::random(dim, 3, &mut rng).unwrap();
            let jets = field.jets();
            for _ in 0..20 {
                let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let s = jets.sample(&x);
                // symmetry of the strain
                for i in 0..dim {
                    for j in 0..dim {
                        assert!((s.sym_grad[(i, j)] - s.sym_grad[(j, i)]).abs() < 1e-15);
                        for k in 0..dim {
                            assert!(
                                (s.hessian[(i, j, k)] - s.hessian[(j, i, k)]).abs() < 1e-13
                            );
                        }
                    }
                }
                // trace identity and trace bound
                assert!((s.sym_grad.trace() - s.divergence).abs() < 1e-13);
                let strain_norm = s.sym_grad.norm();
                assert!(
                    s.divergence.abs()
                        <= (dim as f64).sqrt() * strain_norm + 1e-13
                );
                // |grad div u|^2 <= n |grad eps u|^2
                let gd2: f64 = s.grad_div.iter().map(|v| v * v).sum();
                assert!(gd2 <= dim as f64 * s.grad_sym_grad.norm_sq() + 1e-12);
            }
        }
    }

    #[test]
    fn divergence_free_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2usize, 3] {
            let field =
                PolyVectorField::<f64>::random_divergence_free(dim, 3, &mut rng).unwrap();
            assert!(field.jets().divergence.is_zero());
        }
    }

    #[test]
    fn dimension_validation() {
        assert!(PolyVectorField::new(vec![Polynomial::<f64>::zero(1)]).is_err());
        let comps = vec![Polynomial::<f64>::zero(3), Polynomial::zero(3)];
        assert!(PolyVectorField::new(comps).is_err());
    }
}
