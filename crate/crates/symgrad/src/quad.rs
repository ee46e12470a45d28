//! One-dimensional quadrature: tabulated Gauss–Legendre rules (orders 1–8)
//! and an adaptive Gauss–Kronrod integrator, plus bracketing inversion of
//! monotone functions. All routines are generic over the scalar.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gauss–Legendre nodes and weights on `[-1, 1]` (positive half; mirror for
/// negative nodes; a `0.0` node stands alone).
#[allow(clippy::excessive_precision)]
const GL_HALF: [&[(f64, f64)]; 8] = [
    &[(0.0, 2.0)],
    &[(0.577_350_269_189_625_8, 1.0)],
    &[(0.0, 0.888_888_888_888_888_9), (0.774_596_669_241_483_4, 0.555_555_555_555_555_6)],
    &[
        (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
        (0.861_136_311_594_052_6, 0.347_854_845_137_453_85),
    ],
    &[
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
        (0.906_179_845_938_664_0, 0.236_926_885_056_189_08),
    ],
    &[
        (0.238_619_186_083_196_9, 0.467_913_934_572_691_04),
        (0.661_209_386_466_264_5, 0.360_761_573_048_138_6),
        (0.932_469_514_203_152_1, 0.171_324_492_379_170_36),
    ],
    &[
        (0.0, 0.417_959_183_673_469_4),
        (0.405_845_151_377_397_2, 0.381_830_050_505_118_9),
        (0.741_531_185_599_394_5, 0.279_705_391_489_276_64),
        (0.949_107_912_342_758_5, 0.129_484_966_168_869_7),
    ],
    &[
        (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
        (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
        (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
        (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
    ],
];

/// Gauss–Legendre rule of the given order (1–8) on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(order: usize) -> Vec<(T, T)> {
    assert!((1..=8).contains(&order), "tabulated Gauss orders are 1..=8");
    let mut rule = Vec::with_capacity(order);
    for &(x, w) in GL_HALF[order - 1] {
        if x == 0.0 {
            rule.push((T::zero(), T::of(w)));
        } else {
            rule.push((T::of(-x), T::of(w)));
            rule.push((T::of(x), T::of(w)));
        }
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("nodes are finite"));
    rule
}

/// Fixed Gauss–Legendre quadrature of `f` over `[a, b]`.
pub fn fixed_gauss<T: Real, F: FnMut(T) -> T>(order: usize, a: T, b: T, mut f: F) -> T {
    let half = (b - a) * T::of(0.5);
    let mid = (a + b) * T::of(0.5);
    gauss_legendre::<T>(order)
        .into_iter()
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<T>()
        * half
}

/// Kronrod-15 nodes with Kronrod weights and (where present) the embedded
/// Gauss-7 weights.
#[allow(clippy::excessive_precision)]
const K15: [(f64, f64, f64); 8] = [
    (0.0, 0.209_482_141_084_727_83, 0.417_959_183_673_469_4),
    (0.207_784_955_007_898_26, 0.204_432_940_075_298_9, 0.0),
    (0.405_845_151_377_397_2, 0.190_350_578_064_785_4, 0.381_830_050_505_118_9),
    (0.586_087_235_467_691_1, 0.169_004_726_639_267_9, 0.0),
    (0.741_531_185_599_394_5, 0.140_653_259_715_525_9, 0.279_705_391_489_276_64),
    (0.864_864_423_359_769_1, 0.104_790_010_322_250_18, 0.0),
    (0.949_107_912_342_758_5, 0.063_092_092_629_978_55, 0.129_484_966_168_869_7),
    (0.991_455_371_120_813_, 0.022_935_322_010_529_225, 0.0),
];

/// Gauss–Kronrod (7, 15) pair on `[a, b]`; returns `(kronrod, |kronrod - gauss|)`.
fn gk15<T: Real, F: FnMut(T) -> T>(a: T, b: T, f: &mut F) -> (T, T) {
    let half = (b - a) * T::of(0.5);
    let mid = (a + b) * T::of(0.5);
    let mut k = T::zero();
    let mut g = T::zero();
    for &(x, wk, wg) in &K15 {
        if x == 0.0 {
            let v = f(mid);
            k = k + T::of(wk) * v;
            g = g + T::of(wg) * v;
        } else {
            let v = f(mid - half * T::of(x)) + f(mid + half * T::of(x));
            k = k + T::of(wk) * v;
            if wg != 0.0 {
                g = g + T::of(wg) * v;
            }
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]` to the given
/// absolute tolerance (a relative floor of a few ulps is always applied).
///
/// Fails with a diagnostic when bisection exceeds the depth budget.
pub fn adaptive<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: T) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    fn rec<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T, tol: T, depth: usize) -> Result<T> {
        let (value, err) = gk15(a, b, f);
        let floor = T::epsilon() * T::of(64.0) * value.abs();
        if err <= tol.max(floor) || err == T::zero() {
            return Ok(value);
        }
        if depth == 0 {
            return Err(Error::Numerics(format!(
                "adaptive quadrature stalled on [{}, {}]: error estimate {:.3e} > tolerance {:.3e}",
                a.to_f64_lossy(),
                b.to_f64_lossy(),
                err.to_f64_lossy(),
                tol.to_f64_lossy(),
            )));
        }
        let mid = (a + b) * T::of(0.5);
        let half_tol = tol * T::of(0.5);
        Ok(rec(f, a, mid, half_tol, depth - 1)? + rec(f, mid, b, half_tol, depth - 1)?)
    }
    rec(&mut f, a, b, tol, 48)
}

/// Invert a strictly increasing function with `f(0) = 0`: find `t >= 0` with
/// `f(t) = y`, by bracket doubling followed by bisection.
pub fn invert_increasing<T: Real, F: FnMut(T) -> T>(mut f: F, y: T) -> Result<T> {
    if y < T::zero() {
        return Err(Error::Domain("cannot invert an increasing function below f(0)=0".into()));
    }
    if y == T::zero() {
        return Ok(T::zero());
    }
    let mut hi = T::one();
    let mut grow = 0;
    while f(hi) < y {
        hi = hi * T::of(2.0);
        grow += 1;
        if grow > 600 {
            return Err(Error::Numerics(format!(
                "bracket expansion failed: f({:.3e}) still below {:.3e}",
                hi.to_f64_lossy(),
                y.to_f64_lossy()
            )));
        }
    }
    let mut lo = T::zero();
    for _ in 0..200 {
        let mid = (lo + hi) * T::of(0.5);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::of(0.5))
}
