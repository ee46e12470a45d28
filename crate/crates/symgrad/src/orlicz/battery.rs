//! Checkable predicates for the scalar-law inequalities: index windows,
//! two-sided Young-function bounds, growth envelopes, Young's inequality,
//! and uniform convergence of the regularized family to the power law.
//!
//! Failures are data, not errors: every predicate produces a [`CheckRecord`]
//! whose margin is the signed distance to violation.

use crate::error::{Error, Result};
use crate::orlicz::law::NonlinearityLaw;
use crate::orlicz::young::YoungFunctionView;
use crate::report::{CheckRecord, CheckSet};
use crate::scalar::Real;

/// Inner approximation of the law's index interval from a grid scan.
#[derive(Debug, Clone, Copy)]
pub struct IndexEstimate<T> {
    pub i_lower: T,
    pub s_upper: T,
    pub t_min: T,
    pub t_max: T,
    pub count: usize,
}

/// Scan `theta` over a log-spaced grid; the result brackets the sampled
/// values only (an inner approximation of the true index interval).
pub fn estimate_indices<T: Real>(
    law: &NonlinearityLaw<T>,
    t_min: T,
    t_max: T,
    count: usize,
) -> Result<IndexEstimate<T>> {
    if !(t_min > T::zero() && t_min < t_max) {
        return Err(Error::Domain("index scan needs 0 < t_min < t_max".into()));
    }
    if count < 2 {
        return Err(Error::Domain("index scan needs at least 2 samples".into()));
    }
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for t in log_grid(t_min, t_max, count) {
        let theta = law.eval_theta(t)?;
        lo = lo.min(theta);
        hi = hi.max(theta);
    }
    Ok(IndexEstimate { i_lower: lo, s_upper: hi, t_min, t_max, count })
}

/// Log-spaced grid with `count` points including both endpoints.
pub fn log_grid<T: Real>(t_min: T, t_max: T, count: usize) -> Vec<T> {
    let l0 = t_min.ln();
    let l1 = t_max.ln();
    (0..count)
        .map(|k| {
            let s = T::of_usize(k) / T::of_usize(count - 1);
            (l0 + (l1 - l0) * s).exp()
        })
        .collect()
}

fn lin_grid<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    (0..count)
        .map(|k| lo + (hi - lo) * T::of_usize(k) / T::of_usize(count - 1))
        .collect()
}

/// Configuration for the law battery. Defaults follow the desk-scale ranges
/// used by the acceptance experiments.
#[derive(Debug, Clone)]
pub struct BatteryConfig<T> {
    /// Pinch sample range (log grid), also used for theta windows.
    pub t_log_min: T,
    pub t_log_max: T,
    pub t_log_count: usize,
    /// Linear range for quadrature-backed checks.
    pub t_lin_max: T,
    pub t_lin_count: usize,
    /// Young's inequality grid is `young_count` x `young_count`.
    pub young_count: usize,
    pub young_max: T,
    /// Radius of the uniform-convergence window.
    pub sup_radius: T,
    /// `eps = 2^-k` for `k = 1..=conv_levels` in the convergence checks.
    pub conv_levels: usize,
    pub quad_tol: T,
}

impl<T: Real> Default for BatteryConfig<T> {
    fn default() -> Self {
        BatteryConfig {
            t_log_min: T::of(1e-6),
            t_log_max: T::of(1e6),
            t_log_count: 481,
            t_lin_max: T::of(10.0),
            t_lin_count: 65,
            young_count: 100,
            young_max: T::of(5.0),
            sup_radius: T::of(10.0),
            conv_levels: 10,
            quad_tol: T::of(1e-10),
        }
    }
}

fn rel_margin<T: Real>(lhs: T, rhs: T) -> f64 {
    // signed slack of `lhs <= rhs`, normalized
    ((rhs - lhs) / (T::one() + lhs.abs() + rhs.abs())).to_f64_lossy()
}

/// Battery for one law: monotonicity, index window, derivative window, and
/// the two-sided Young-function bounds.
pub fn law_battery<T: Real>(
    law: &NonlinearityLaw<T>,
    cfg: &BatteryConfig<T>,
) -> Result<CheckSet> {
    let mut set = CheckSet::default();
    let tag = format!("{law}");
    let tol = 1e-10;
    let view = YoungFunctionView::with_tolerance(law, cfg.quad_tol);
    let (idx_lo, idx_hi) = law.index_bounds();

    let mut log_ts = log_grid(cfg.t_log_min, cfg.t_log_max, cfg.t_log_count);
    if !law.singular_at_zero() {
        log_ts.insert(0, T::zero());
    }

    // pinch bounds eps <= a <= 1/eps (regularized only)
    if law.kind == crate::orlicz::law::LawKind::Regularized {
        let inv_eps = T::one() / law.eps;
        let mut margin = f64::INFINITY;
        for &t in &log_ts {
            let a = law.eval_a(t)?;
            margin = margin
                .min(((a - law.eps) / inv_eps).to_f64_lossy())
                .min(((inv_eps - a) / inv_eps).to_f64_lossy());
        }
        set.push(CheckRecord::new("pinch_bounds", margin, tol).with_details(tag.clone()));
    }

    // theta stays in the index window; t = 0 enters only where the zero
    // extension exists (the power law's window is a t > 0 statement)
    {
        let mut margin = f64::INFINITY;
        for &t in &log_ts {
            let theta = match law.eval_theta(t) {
                Ok(v) => v,
                Err(_) if t == T::zero() => continue,
                Err(e) => return Err(e),
            };
            margin = margin
                .min((theta - idx_lo).to_f64_lossy())
                .min((idx_hi - theta).to_f64_lossy());
        }
        set.push(CheckRecord::new("theta_index_window", margin, tol).with_details(tag.clone()));
    }

    // derivative window (m_p - 1) b <= b' t <= (M_p - 1) b
    {
        let lo = idx_lo + T::one();
        let hi = idx_hi + T::one();
        let mut margin = f64::INFINITY;
        for &t in &log_ts {
            if t == T::zero() {
                continue;
            }
            let b = law.eval_b(t)?;
            let bpt = law.eval_b_prime(t)? * t;
            margin = margin.min(rel_margin(lo * b, bpt)).min(rel_margin(bpt, hi * b));
        }
        set.push(
            CheckRecord::new("b_derivative_window", margin, tol).with_details(tag.clone()),
        );
    }

    // b strictly increasing along the sample
    {
        let mut margin = f64::INFINITY;
        let positive: Vec<T> =
            log_ts.iter().copied().filter(|&t| t > T::zero()).collect();
        for pair in positive.windows(2) {
            let b0 = law.eval_b(pair[0])?;
            let b1 = law.eval_b(pair[1])?;
            margin = margin.min(((b1 - b0) / (T::one() + b1.abs())).to_f64_lossy());
        }
        set.push(CheckRecord::new("b_monotone", margin, tol).with_details(tag.clone()));
    }

    // B(t) <= b(t) t  and the two-sided bound via the index window
    {
        let lo = idx_lo + T::of(2.0);
        let hi = idx_hi + T::of(2.0);
        let mut margin_upper = f64::INFINITY;
        let mut margin_two_sided = f64::INFINITY;
        for &t in &lin_grid(T::zero(), cfg.t_lin_max, cfg.t_lin_count) {
            if t == T::zero() {
                continue;
            }
            let b_big = view.eval_b_big(t)?;
            let bt = law.eval_b(t)? * t;
            margin_upper = margin_upper.min(rel_margin(b_big, bt));
            margin_two_sided = margin_two_sided
                .min(rel_margin(lo * b_big, bt))
                .min(rel_margin(bt, hi * b_big));
        }
        set.push(
            CheckRecord::new("b_big_below_bt", margin_upper, tol).with_details(tag.clone()),
        );
        set.push(
            CheckRecord::new("b_big_two_sided", margin_two_sided, tol)
                .with_details(tag.clone()),
        );
    }

    // Young's inequality st <= B(s) + B~(t) on a separable grid
    {
        let s_grid = lin_grid(T::zero(), cfg.young_max, cfg.young_count);
        let t_grid = s_grid.clone();
        let b_vals: Vec<T> =
            s_grid.iter().map(|&s| view.eval_b_big(s)).collect::<Result<_>>()?;
        let conj_vals: Vec<T> =
            t_grid.iter().map(|&t| view.eval_b_big_conjugate(t)).collect::<Result<_>>()?;
        let mut margin = f64::INFINITY;
        for (i, &s) in s_grid.iter().enumerate() {
            for (j, &t) in t_grid.iter().enumerate() {
                margin = margin.min(rel_margin(s * t, b_vals[i] + conj_vals[j]));
            }
        }
        set.push(CheckRecord::new("young_inequality", margin, tol).with_details(tag.clone()));
    }

    Ok(set)
}

/// Growth envelopes of the regularized family, uniform over the pinch
/// parameter: empirical constants for the power sandwiches of `b`, `B`, and
/// the conjugate. The checks assert positivity of the lower constants and
/// finiteness of the upper ones; the constants themselves are reported.
pub fn envelope_battery<T: Real>(
    p: T,
    eps_values: &[T],
    cfg: &BatteryConfig<T>,
) -> Result<CheckSet> {
    let mut set = CheckSet::default();
    let tol = 1e-10;
    let two = T::of(2.0);
    let m_p = p.min(two);
    let big_m_p = p.max(two);
    let ts = lin_grid(T::zero(), cfg.t_lin_max, cfg.t_lin_count);

    let mut b_lo = f64::INFINITY;
    let mut b_hi = f64::NEG_INFINITY;
    let mut bb_lo = f64::INFINITY;
    let mut bb_hi = f64::NEG_INFINITY;
    let mut upper_const = f64::NEG_INFINITY;
    let mut lower_const = f64::INFINITY;
    let mut conj_const = f64::NEG_INFINITY;
    for &eps in eps_values {
        let law = NonlinearityLaw::regularized(p, eps)?;
        let view = YoungFunctionView::with_tolerance(&law, cfg.quad_tol);
        for &t in &ts {
            if t == T::zero() {
                continue;
            }
            let b = law.eval_b(t)?;
            let min_pow = t.powf(m_p - T::one()).min(t.powf(big_m_p - T::one()));
            let max_pow = t.powf(m_p - T::one()).max(t.powf(big_m_p - T::one()));
            b_lo = b_lo.min((b / min_pow).to_f64_lossy());
            b_hi = b_hi.max((b / max_pow).to_f64_lossy());

            let b_big = view.eval_b_big(t)?;
            let min_pow = t.powf(m_p).min(t.powf(big_m_p));
            let max_pow = t.powf(m_p).max(t.powf(big_m_p));
            bb_lo = bb_lo.min((b_big / min_pow).to_f64_lossy());
            bb_hi = bb_hi.max((b_big / max_pow).to_f64_lossy());

            // B <= c (t^{M_p} + 1)  and  B >= c (t^{m_p} - 1)
            upper_const =
                upper_const.max((b_big / (t.powf(big_m_p) + T::one())).to_f64_lossy());
            let floor = t.powf(m_p) - T::one();
            if floor > T::of(0.5) {
                lower_const = lower_const.min((b_big / floor).to_f64_lossy());
            }
        }
        // conjugate upper bound on a coarse grid (inversion is costly)
        let conj_exponent = if p < two { p / (p - T::one()) } else { two };
        for &t in &lin_grid(T::zero(), cfg.t_lin_max, 9) {
            if t == T::zero() {
                continue;
            }
            let conj = view.eval_b_big_conjugate(t)?;
            conj_const =
                conj_const.max((conj / (t.powf(conj_exponent) + T::one())).to_f64_lossy());
        }
    }

    let finite = |c: f64| if c.is_finite() && c > 0.0 { 1.0 / (1.0 + c) } else { -1.0 };
    set.push(
        CheckRecord::new("b_power_envelope_lower", b_lo, tol)
            .with_details(format!("inf b/min-power = {b_lo:.6e} over eps sample")),
    );
    set.push(
        CheckRecord::new("b_power_envelope_upper", finite(b_hi), tol)
            .with_details(format!("sup b/max-power = {b_hi:.6e} over eps sample")),
    );
    set.push(
        CheckRecord::new("b_big_power_envelope_lower", bb_lo, tol)
            .with_details(format!("inf B/min-power = {bb_lo:.6e} over eps sample")),
    );
    set.push(
        CheckRecord::new("b_big_power_envelope_upper", finite(bb_hi), tol)
            .with_details(format!("sup B/max-power = {bb_hi:.6e} over eps sample")),
    );
    set.push(
        CheckRecord::new("b_big_upper_power_bound", finite(upper_const), tol)
            .with_details(format!("sup B/(t^Mp + 1) = {upper_const:.6e}")),
    );
    let lower_margin = if lower_const.is_finite() { lower_const } else { 0.0 };
    set.push(
        CheckRecord::new("b_big_lower_power_bound", lower_margin, tol)
            .with_details(format!("inf B/(t^mp - 1) = {lower_const:.6e}")),
    );
    set.push(
        CheckRecord::new("b_big_conjugate_upper_power_bound", finite(conj_const), tol)
            .with_details(format!("sup conj/(t^q + 1) = {conj_const:.6e}")),
    );
    Ok(set)
}

/// Uniform convergence of the regularized family to the power law on
/// `[0, R]`: sup-distances of the Young functions and of the stress moduli
/// must decrease monotonically along `eps = 2^-k`.
pub fn convergence_battery<T: Real>(p: T, cfg: &BatteryConfig<T>) -> Result<CheckSet> {
    let mut set = CheckSet::default();
    let tol = 1e-10;
    let power = NonlinearityLaw::pure_power(p)?;
    let power_view = YoungFunctionView::with_tolerance(&power, cfg.quad_tol);
    let ts = lin_grid(T::zero(), cfg.sup_radius, 201);

    let power_b_big: Vec<T> =
        ts.iter().map(|&t| power_view.eval_b_big(t)).collect::<Result<_>>()?;
    let power_b: Vec<T> = ts
        .iter()
        .map(|&t| if t == T::zero() { Ok(T::zero()) } else { power.eval_b(t) })
        .collect::<Result<_>>()?;

    let mut dist_b_big = Vec::new();
    let mut dist_stress = Vec::new();
    for k in 1..=cfg.conv_levels {
        let eps = T::of(0.5).powi(k as i32);
        let law = NonlinearityLaw::regularized(p, eps)?;
        let view = YoungFunctionView::with_tolerance(&law, cfg.quad_tol);
        let mut sup_b_big = T::zero();
        let mut sup_stress = T::zero();
        for (i, &t) in ts.iter().enumerate() {
            sup_b_big = sup_b_big.max((view.eval_b_big(t)? - power_b_big[i]).abs());
            // |A_eps(xi) - A_p(xi)| = |b_eps(|xi|) - b_p(|xi|)| on |xi| = t
            let b_eps = law.eval_b(t)?;
            sup_stress = sup_stress.max((b_eps - power_b[i]).abs());
        }
        dist_b_big.push(sup_b_big.to_f64_lossy());
        dist_stress.push(sup_stress.to_f64_lossy());
    }

    for (name, dist) in [
        ("b_big_uniform_convergence", &dist_b_big),
        ("stress_uniform_convergence", &dist_stress),
    ] {
        let margin = dist
            .windows(2)
            .map(|w| (w[0] - w[1]) / (dist[0].abs() + 1e-300))
            .fold(f64::INFINITY, f64::min);
        let margin = if margin.is_finite() { margin } else { 0.0 };
        set.push(CheckRecord::new(name, margin, tol).with_details(format!(
            "sup distances along eps=2^-k: {:?}",
            dist.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>()
        )));
    }
    Ok(set)
}

/// Full battery for exponent `p`: per-law checks for the power law and each
/// regularized pinch, the envelope constants, and the convergence ladder.
pub fn section_battery<T: Real>(
    p: T,
    eps_values: &[T],
    cfg: &BatteryConfig<T>,
) -> Result<CheckSet> {
    let mut set = CheckSet::default();
    let power = NonlinearityLaw::pure_power(p)?;
    set.extend(law_battery(&power, cfg)?);
    for &eps in eps_values {
        let law = NonlinearityLaw::regularized(p, eps)?;
        set.extend(law_battery(&law, cfg)?);
    }
    set.extend(envelope_battery(p, eps_values, cfg)?);
    set.extend(convergence_battery(p, cfg)?);
    Ok(set)
}
