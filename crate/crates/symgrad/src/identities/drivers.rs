//! Batch drivers: random-field identity batteries, brute-force inequality
//! sweeps, and the planar-claim search, each condensed into check records.

use crate::error::Result;
use crate::identities::pointwise::{identity_residual, IdentityKind};
use crate::identities::reduced::{
    alldim_theta_interval, claim_2d, claim_matrix_spectrum, reduced_inequality_alldim,
    reduced_inequality_lowdim, SecondOrderSample,
};
use crate::orlicz::NonlinearityLaw;
use crate::report::{CheckRecord, CheckSet};
use crate::scalar::Real;
use crate::tensorfields::{strain_identity_residual, Coeff, PolyVectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Summary of one identity battery run.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub law: String,
    pub field_class: String,
    pub points: usize,
    pub max_residual: f64,
    /// Max magnitude of each main term over the sample:
    /// `[|G|^2, |L|^2/2, theta term, coupling term, flux term]`.
    pub term_maxima: [f64; 5],
}

/// Configuration of the random identity battery.
#[derive(Debug, Clone)]
pub struct IdentityBatteryConfig {
    pub dims: Vec<usize>,
    pub degree: usize,
    pub fields_per_case: usize,
    pub points_per_field: usize,
    pub seed: u64,
    /// Points with strain below this are rejected for singular laws.
    pub strain_margin: f64,
    pub residual_tol: f64,
}

impl Default for IdentityBatteryConfig {
    fn default() -> Self {
        IdentityBatteryConfig {
            dims: vec![2, 3],
            degree: 3,
            fields_per_case: 10,
            points_per_field: 10,
            seed: 0,
            strain_margin: 0.1,
            residual_tol: 1e-9,
        }
    }
}

/// Run the strain identity and both pointwise identities over random
/// polynomial fields for each law; one check record per (identity, law).
pub fn identity_battery<T: Real + Coeff>(
    laws: &[NonlinearityLaw<T>],
    cfg: &IdentityBatteryConfig,
) -> Result<(Vec<IdentityReport>, CheckSet)> {
    let mut reports = Vec::new();
    let mut checks = CheckSet::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // law-free strain identity first
    {
        let mut max_res = 0.0f64;
        let mut points = 0usize;
        for &dim in &cfg.dims {
            for _ in 0..cfg.fields_per_case {
                let field = PolyVectorField::<T>::random(dim, cfg.degree, &mut rng)?;
                let jets = field.jets();
                for _ in 0..cfg.points_per_field {
                    let x: Vec<T> =
                        (0..dim).map(|_| T::of(rng.gen_range(-1.0..1.0))).collect();
                    max_res = max_res
                        .max(strain_identity_residual(&jets, &x).to_f64_lossy());
                    points += 1;
                }
            }
        }
        reports.push(IdentityReport {
            identity: "strain_laplacian".into(),
            law: "none".into(),
            field_class: format!("random degree <= {}", cfg.degree),
            points,
            max_residual: max_res,
            term_maxima: [0.0; 5],
        });
        checks.push(
            CheckRecord::new("strain_identity_residual", cfg.residual_tol - max_res, 0.0)
                .with_details(format!("max residual {max_res:.3e} over {points} points")),
        );
    }

    for law in laws {
        for (kind, name) in [
            (IdentityKind::LowDim, "pointwise_identity_lowdim"),
            (IdentityKind::AllDim, "pointwise_identity_alldim"),
        ] {
            let mut max_res = 0.0f64;
            let mut points = 0usize;
            let mut term_maxima = [0.0f64; 5];
            for &dim in &cfg.dims {
                for _ in 0..cfg.fields_per_case {
                    let field = PolyVectorField::<T>::random(dim, cfg.degree, &mut rng)?;
                    let jets = field.jets();
                    let mut taken = 0;
                    let mut tries = 0;
                    while taken < cfg.points_per_field && tries < 100 * cfg.points_per_field {
                        tries += 1;
                        let x: Vec<T> =
                            (0..dim).map(|_| T::of(rng.gen_range(-1.0..1.0))).collect();
                        if law.singular_at_zero() {
                            let strain = jets.sample(&x).sym_grad.norm();
                            if strain < T::of(cfg.strain_margin) {
                                continue;
                            }
                        }
                        let eval = identity_residual(kind, law, &jets, &x)?;
                        max_res = max_res.max(eval.residual.to_f64_lossy());
                        for (slot, term) in
                            term_maxima.iter_mut().zip(eval.term_magnitudes)
                        {
                            *slot = slot.max(term.to_f64_lossy());
                        }
                        taken += 1;
                        points += 1;
                    }
                }
            }
            reports.push(IdentityReport {
                identity: name.into(),
                law: format!("{law}"),
                field_class: format!("random degree <= {}", cfg.degree),
                points,
                max_residual: max_res,
                term_maxima,
            });
            checks.push(
                CheckRecord::new(
                    format!("{name}[{law}]"),
                    cfg.residual_tol - max_res,
                    0.0,
                )
                .with_details(format!("max residual {max_res:.3e} over {points} points")),
            );
        }
    }
    Ok((reports, checks))
}

/// Brute-force sweep of the reduced inequalities over random
/// second-derivative samples, plus the claim-matrix spectrum and the planar
/// claim search.
pub fn inequality_battery<T: Real>(
    samples_per_case: usize,
    seed: u64,
) -> Result<CheckSet> {
    let mut checks = CheckSet::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = 1e-12;

    // low-dimension inequality on a grid of admissible (n, theta) pairs
    for n in 2..=7usize {
        let threshold = -(8.0 - n as f64) / 16.0;
        let thetas = [threshold + 0.01, threshold / 2.0, 0.0, 0.5, 2.0];
        for &theta in &thetas {
            let mut worst = f64::INFINITY;
            for _ in 0..samples_per_case {
                let sample = SecondOrderSample::<T>::random(n, &mut rng);
                let out = reduced_inequality_lowdim(&sample, T::of(theta), n)?;
                let normalized = if out.scale > T::zero() {
                    (out.slack / out.scale).to_f64_lossy()
                } else {
                    0.0
                };
                worst = worst.min(normalized);
            }
            checks.push(
                CheckRecord::new(
                    format!("reduced_lowdim[n={n},theta={theta:.4}]"),
                    worst,
                    tol,
                )
                .with_details(format!("{samples_per_case} samples")),
            );
        }
    }

    // all-dimension inequality for representative dimensions
    for n in [3usize, 8] {
        let (lo, hi) = alldim_theta_interval::<f64>(n);
        let thetas = [lo + 0.01, 0.0, hi - 0.01];
        for &theta in &thetas {
            let mut worst = f64::INFINITY;
            for _ in 0..samples_per_case {
                let sample = SecondOrderSample::<T>::random(n, &mut rng);
                let out = reduced_inequality_alldim(&sample, T::of(theta), n)?;
                let normalized = if out.scale > T::zero() {
                    (out.slack / out.scale).to_f64_lossy()
                } else {
                    0.0
                };
                worst = worst.min(normalized);
            }
            checks.push(
                CheckRecord::new(
                    format!("reduced_alldim[n={n},theta={theta:.4}]"),
                    worst,
                    tol,
                )
                .with_details(format!("{samples_per_case} samples")),
            );
        }
    }

    // claim-matrix spectrum: lambda1 = 0, lambda2, lambda3 > 0
    let ev = claim_matrix_spectrum::<T>();
    checks.push(
        CheckRecord::new("claim_matrix_null_eigenvalue", -ev[0].to_f64_lossy().abs(), 1e-12)
            .with_details(format!(
                "spectrum [{:.3e}, {:.6}, {:.6}]",
                ev[0].to_f64_lossy(),
                ev[1].to_f64_lossy(),
                ev[2].to_f64_lossy()
            )),
    );
    checks.push(CheckRecord::new(
        "claim_matrix_positive_pair",
        ev[1].to_f64_lossy().min(ev[2].to_f64_lossy()),
        0.0,
    ));
    Ok(checks)
}

/// Brute-force search over the planar claim; returns the worst normalized
/// slack (informational counterexample searches use a negative margin
/// threshold).
pub fn claim_2d_search<T: Real>(samples: usize, seed: u64) -> Result<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let sample = SecondOrderSample::<T>::random(2, &mut rng);
        let value = claim_2d(&sample)?;
        let scale = sample.grad_sym_grad.norm_sq() + T::one();
        worst = worst.min((value / scale).to_f64_lossy());
    }
    Ok(CheckRecord::new("claim_2d_brute_force", worst, 1e-12)
        .with_details(format!("{samples} samples, min normalized value {worst:.3e}")))
}

/// Search for violations of the low-dimension reduced inequality slightly
/// below the admissible threshold. The result is informational: the reduced
/// constant is not claimed to be sharp.
pub fn lowdim_counterexample_search<T: Real>(
    n: usize,
    undershoot: f64,
    samples: usize,
    seed: u64,
) -> Result<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = -(8.0 - n as f64) / 16.0 - undershoot;
    let n_t = T::of_usize(n);
    let theta_t = T::of(theta);
    let two = T::of(2.0);
    let half = T::of(0.5);
    let coefficient = T::one() - n_t / T::of(8.0) + two * theta_t.min(T::zero());
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let sample = SecondOrderSample::<T>::random(n, &mut rng);
        let g_sq = sample.grad_sym_grad.norm_sq();
        let l_sq = crate::linalg::dot(&sample.laplacian, &sample.laplacian);
        let w_sq =
            crate::linalg::dot(&sample.grad_strain_norm, &sample.grad_strain_norm);
        let coupling = half * crate::linalg::dot(&sample.grad_div, &sample.laplacian);
        let lhs = g_sq + half * l_sq + two * theta_t * w_sq + coupling;
        let slack = lhs - coefficient * g_sq;
        let scale = g_sq + half * l_sq + (two * theta_t * w_sq).abs() + coupling.abs();
        if scale > T::zero() {
            worst = worst.min((slack / scale).to_f64_lossy());
        }
    }
    Ok(CheckRecord::informational(
        format!("reduced_lowdim_below_threshold[n={n},undershoot={undershoot}]"),
        format!("min normalized slack {worst:.3e} over {samples} samples (not asserted)"),
    ))
}
