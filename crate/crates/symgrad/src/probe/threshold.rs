//! Singular threshold scan: the squared stress-gradient integral of the
//! quadratic shear field over the box with a slab `|x2| < delta` removed,
//! by graded quadrature and by the exact antiderivative, with a
//! convergent/divergent classification as the cutoff shrinks.

use crate::error::{Error, Result};
use crate::orlicz::NonlinearityLaw;
use crate::quad::fixed_gauss;
use crate::scalar::Real;
use serde::Serialize;

/// One cutoff level of the scan.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdRow {
    pub delta: f64,
    pub quadrature: f64,
    pub analytic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThresholdClass {
    Convergent,
    Divergent,
}

/// Scan outcome: per-cutoff integrals and the growth classification.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdScan {
    pub p: f64,
    pub rows: Vec<ThresholdRow>,
    /// Growth factor of the trajectory per decade of cutoff, measured on
    /// the last two rows.
    pub growth_per_decade: f64,
    pub classification: ThresholdClass,
}

/// Growth of at least this factor per cutoff decade classifies the
/// trajectory as divergent.
pub const DIVERGENCE_GROWTH_FACTOR: f64 = 1.2;

/// Squared Frobenius norm of the stress gradient of the shear field at
/// transverse coordinate `x2 > 0`, via the scalar law's chain rule.
///
/// The strain is `diag(2 x2, 0, ...)`, so the only varying stress entry is
/// `a(2 x2) 2 x2` and the squared gradient is `(b'(2 x2) * 2)^2`.
fn shear_stress_grad_sq<T: Real>(law: &NonlinearityLaw<T>, x2: T) -> Result<T> {
    let t = x2 * T::of(2.0);
    let d = law.eval_b_prime(t)? * T::of(2.0);
    Ok(d * d)
}

/// Exact value of `∫_box\{|x2|<delta} |grad A(eps u)|^2` for the power law
/// on `[-X, X]^n`: the transverse directions factor out and the profile
/// integrates in closed form.
pub fn shear_threshold_analytic(p: f64, delta: f64, half_width: f64, dim: usize) -> f64 {
    let transverse = (2.0 * half_width).powi(dim as i32 - 1);
    let coeff = 4.0f64.powf(p - 1.0) * (p - 1.0).powi(2);
    let exponent = 2.0 * p - 3.0;
    let profile = if exponent.abs() < 1e-12 {
        (half_width / delta).ln()
    } else {
        (half_width.powf(exponent) - delta.powf(exponent)) / exponent
    };
    2.0 * coeff * profile * transverse
}

/// Scan the cutoff trajectory for the power law with exponent `p` on
/// `[-half_width, half_width]^dim`.
///
/// The quadrature route uses composite Gauss rules of the given order on a
/// geometrically graded partition of `[delta, half_width]`, evaluating the
/// integrand through the law's derivatives rather than the antiderivative.
pub fn singular_threshold_scan(
    p: f64,
    cutoffs: &[f64],
    half_width: f64,
    dim: usize,
    quad_order: usize,
) -> Result<ThresholdScan> {
    if !(p > 1.0) {
        return Err(Error::Domain(format!("threshold scan needs p > 1, got {p}")));
    }
    let mut sorted = cutoffs.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("cutoffs are finite"));
    if sorted.is_empty() || sorted.iter().any(|&d| d <= 0.0 || d >= half_width) {
        return Err(Error::Domain(
            "cutoffs must be decreasing values in (0, half_width)".into(),
        ));
    }
    let law = NonlinearityLaw::pure_power(p)?;
    let transverse = (2.0 * half_width).powi(dim as i32 - 1);
    let mut rows = Vec::with_capacity(sorted.len());
    for &delta in &sorted {
        // graded panels delta, 2 delta, 4 delta, ..., half_width
        let mut quadrature = 0.0;
        let mut lo = delta;
        while lo < half_width {
            let hi = (lo * 2.0).min(half_width);
            quadrature += fixed_gauss(quad_order, lo, hi, |x2: f64| {
                shear_stress_grad_sq(&law, x2).expect("x2 > 0 keeps the law regular")
            });
            lo = hi;
        }
        quadrature *= 2.0 * transverse;
        rows.push(ThresholdRow {
            delta,
            quadrature,
            analytic: shear_threshold_analytic(p, delta, half_width, dim),
        });
    }

    let growth_per_decade = if rows.len() >= 2 {
        let a = &rows[rows.len() - 2];
        let b = &rows[rows.len() - 1];
        let decades = (a.delta / b.delta).log10();
        if a.quadrature > 0.0 && decades > 0.0 {
            (b.quadrature / a.quadrature).powf(1.0 / decades)
        } else {
            f64::INFINITY
        }
    } else {
        1.0
    };
    let classification = if growth_per_decade >= DIVERGENCE_GROWTH_FACTOR {
        ThresholdClass::Divergent
    } else {
        ThresholdClass::Convergent
    };
    Ok(ThresholdScan { p, rows, growth_per_decade, classification })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUTOFFS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

    #[test]
    fn quadrature_matches_antiderivative() {
        for &p in &[1.3, 1.45, 1.5, 1.6, 2.0, 3.0] {
            let scan = singular_threshold_scan(p, &CUTOFFS, 1.0, 2, 5).unwrap();
            for row in &scan.rows {
                if row.delta < 1e-3 {
                    continue;
                }
                let rel = (row.quadrature - row.analytic).abs() / row.analytic.abs();
                assert!(rel < 1e-6, "p={p} delta={}: rel {rel:.3e}", row.delta);
            }
        }
    }

    #[test]
    fn classification_straddles_the_threshold() {
        for &p in &[1.3, 1.4, 1.45, 1.5] {
            let scan = singular_threshold_scan(p, &CUTOFFS, 1.0, 2, 5).unwrap();
            assert_eq!(scan.classification, ThresholdClass::Divergent, "p = {p}");
        }
        for &p in &[1.6, 2.0, 3.0] {
            let scan = singular_threshold_scan(p, &CUTOFFS, 1.0, 2, 5).unwrap();
            assert_eq!(scan.classification, ThresholdClass::Convergent, "p = {p}");
        }
    }

    #[test]
    fn quadratic_case_trajectory_is_flat() {
        // exponent 2p - 4 = 0: the integrand is constant
        let scan = singular_threshold_scan(2.0, &CUTOFFS, 1.0, 2, 5).unwrap();
        let first = scan.rows.first().unwrap().quadrature;
        let last = scan.rows.last().unwrap().quadrature;
        assert!((last / first - 1.0).abs() < 0.12);
        assert!((scan.growth_per_decade - 1.0).abs() < 1e-3);
    }

    #[test]
    fn input_validation() {
        assert!(singular_threshold_scan(1.0, &CUTOFFS, 1.0, 2, 5).is_err());
        assert!(singular_threshold_scan(2.0, &[0.0], 1.0, 2, 5).is_err());
        assert!(singular_threshold_scan(2.0, &[2.0], 1.0, 2, 5).is_err());
    }

    #[test]
    fn three_dimensional_transverse_volume() {
        let scan2 = singular_threshold_scan(2.0, &[0.1], 1.0, 2, 5).unwrap();
        let scan3 = singular_threshold_scan(2.0, &[0.1], 1.0, 3, 5).unwrap();
        let ratio = scan3.rows[0].analytic / scan2.rows[0].analytic;
        assert!((ratio - 2.0).abs() < 1e-12);
    }
}
