//! Adaptive Gauss–Kronrod quadrature on an interval, deterministic by
//! construction: worst-interval-first refinement with index tie-breaking and
//! pairwise summation in left-to-right interval order.

use crate::error::{Error, Result};
use crate::real::{midpoint, Real};

use super::QuadratureResult;

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// One Gauss–Kronrod pass over [a, b]: returns (kronrod value, error estimate).
fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let center = midpoint(a, b);
    let half = (b - a) * T::of(0.5);
    let f_center = f(center);

    let mut res_kronrod = f_center * T::of(WGK[7]);
    let mut res_gauss = f_center * T::of(WG[3]);
    let mut res_abs = res_kronrod.abs();

    let mut fv = [T::zero(); 14];
    for j in 0..7 {
        let abscissa = half * T::of(XGK[j]);
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv[j] = f1;
        fv[7 + j] = f2;
        let fsum = f1 + f2;
        res_kronrod = res_kronrod + T::of(WGK[j]) * fsum;
        res_abs = res_abs + T::of(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            // Kronrod nodes with odd index coincide with the Gauss nodes.
            res_gauss = res_gauss + T::of(WG[j / 2]) * fsum;
        }
    }

    let mean = res_kronrod * T::of(0.5);
    let mut res_asc = T::of(WGK[7]) * (f_center - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::of(WGK[j]) * ((fv[j] - mean).abs() + (fv[7 + j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs = res_abs * half.abs();
    res_asc = res_asc * half.abs();

    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc > T::zero() && err > T::zero() {
        let scale = (T::of(200.0) * err / res_asc).powf(T::of(1.5));
        err = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    let min_err = T::of(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::of(50.0) * T::epsilon()) && min_err > err {
        err = min_err;
    }
    (value, err)
}

/// Cascade summation in slice order; stable against cancellation growth.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    err: T,
}

/// Adaptive integration of `f` over [a, b].
///
/// Stops when the accumulated error estimate drops below
/// `max(rel_tol · |value|, abs_floor)`. Exceeding `budget` evaluations yields
/// [`Error::Budget`] carrying the best estimate so far.
pub fn adaptive<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    rel_tol: T,
    abs_floor: T,
    budget: usize,
) -> Result<QuadratureResult<T>> {
    if a == b {
        return Ok(QuadratureResult {
            value: T::zero(),
            abs_error: T::zero(),
            evaluations: 0,
        });
    }
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![Panel { a, b, value: v, err: e }];
    let mut evals = 15usize;

    loop {
        let total_err: T = pairwise_sum(&panels.iter().map(|p| p.err).collect::<Vec<_>>());
        let total_val: T = pairwise_sum(&panels.iter().map(|p| p.value).collect::<Vec<_>>());
        // Below the rule's rounding floor no further split can help.
        let noise = T::of(50.0) * T::epsilon() * total_val.abs();
        let target = (rel_tol * total_val.abs()).max(abs_floor).max(noise);
        if total_err <= target {
            return Ok(QuadratureResult {
                value: total_val,
                abs_error: total_err,
                evaluations: evals,
            });
        }
        if evals + 30 > budget {
            return Err(Error::Budget {
                best_estimate: total_val.lossy(),
                abs_error: total_err.lossy(),
                evaluations: evals,
            });
        }
        // Deterministic worst-first: the first panel attaining the maximum.
        let mut worst = 0usize;
        for (i, p) in panels.iter().enumerate() {
            if p.err > panels[worst].err {
                worst = i;
            }
        }
        let Panel { a: pa, b: pb, .. } = panels[worst];
        let m = midpoint(pa, pb);
        if !(m > pa && m < pb) {
            // Interval exhausted at machine precision; freeze its estimate.
            let total_val = pairwise_sum(&panels.iter().map(|p| p.value).collect::<Vec<_>>());
            let total_err = pairwise_sum(&panels.iter().map(|p| p.err).collect::<Vec<_>>());
            return Ok(QuadratureResult {
                value: total_val,
                abs_error: total_err,
                evaluations: evals,
            });
        }
        let (v1, e1) = gk15(f, pa, m);
        let (v2, e2) = gk15(f, m, pb);
        evals += 30;
        panels[worst] = Panel { a: pa, b: m, value: v1, err: e1 };
        // Keep panels sorted by left endpoint for reproducible summation.
        let insert_at = panels
            .partition_point(|p| p.a.partial_cmp(&m) == Some(std::cmp::Ordering::Less));
        panels.insert(insert_at, Panel { a: m, b: pb, value: v2, err: e2 });
    }
}

/// ∫_a^b f(t) dt where f carries an algebraic endpoint behavior
/// f(t) ~ (t − a)^{−γ} near a, with γ < 1 (γ ≤ 0 smooths kinks).
/// Substituting u = (t − a)^{1−γ} removes the singularity exactly for pure
/// powers and weakens it otherwise.
pub fn adaptive_power_lower<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    gamma: T,
    rel_tol: T,
    abs_floor: T,
    budget: usize,
) -> Result<QuadratureResult<T>> {
    debug_assert!(gamma < T::one());
    if gamma == T::zero() {
        return adaptive(f, a, b, rel_tol, abs_floor, budget);
    }
    let q = T::one() / (T::one() - gamma);
    let u_top = (b - a).powf(T::one() - gamma);
    let g = |u: T| {
        if u <= T::zero() {
            return T::zero();
        }
        let t = a + u.powf(q);
        f(t) * q * u.powf(q - T::one())
    };
    adaptive(&g, T::zero(), u_top, rel_tol, abs_floor, budget)
}

/// Mirror image of [`adaptive_power_lower`] for a singularity at the upper
/// endpoint: f(t) ~ (b − t)^{−γ} near b.
pub fn adaptive_power_upper<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    gamma: T,
    rel_tol: T,
    abs_floor: T,
    budget: usize,
) -> Result<QuadratureResult<T>> {
    let flipped = |t: T| f(a + b - t);
    adaptive_power_lower(&flipped, a, b, gamma, rel_tol, abs_floor, budget)
}

/// ∫_a^∞ f(t) dt for f(t) ~ c t^{−p} at infinity with p > 1.
/// The substitution t = a v^{−1/(p−1)} maps to (0, 1] with a bounded,
/// nonsingular integrand when the decay hint is sharp; softer decay still
/// integrates but converges more slowly.
pub fn adaptive_tail<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    decay_p: T,
    rel_tol: T,
    abs_floor: T,
    budget: usize,
) -> Result<QuadratureResult<T>> {
    if !(decay_p > T::one()) {
        return Err(Error::Divergent(format!(
            "tail integral needs decay exponent > 1, got {}",
            decay_p.lossy()
        )));
    }
    debug_assert!(a > T::zero());
    let s = T::one() / (decay_p - T::one());
    let g = |v: T| {
        if v <= T::zero() {
            return T::zero();
        }
        let t = a * v.powf(-s);
        f(t) * a * s * v.powf(-s - T::one())
    };
    adaptive(&g, T::zero(), T::one(), rel_tol, abs_floor, budget)
}
