//! The isotropic α-stable model: scaling function φ(λ) = λ^{α/2}, renewal
//! function V(t) = t^{α/2}, Lévy density j(r) = C(d,α) r^{−d−α}, and a
//! numeric weak-scaling probe for user-supplied scaling functions.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::{beta, gamma};

/// Parameters of the isotropic α-stable process in R^d together with the
/// kernel constants derived from them.
///
/// * `levy_const` — C(d,α) in j(r) = C(d,α) r^{−d−α},
///   C(d,α) = α 2^{α−1} Γ((d+α)/2) / (π^{d/2} Γ(1−α/2)).
/// * `green_const` — B(d,α) in the ball Green function,
///   B(d,α) = Γ(d/2) / (2^α π^{d/2} Γ(α/2)²).
/// * `poisson_const` — C_P(d,α) in the ball Poisson kernel,
///   C_P(d,α) = Γ(d/2) sin(πα/2) / π^{d/2+1}.
///
/// None of these is trusted blindly: the Poisson normalization, the kernel
/// consistency identity and the Monte Carlo oracle gate them in tests.
#[derive(Clone, Debug)]
pub struct StableModel<T> {
    alpha: T,
    dim: usize,
    levy_const: T,
    green_const: T,
    poisson_const: T,
    /// Complete value of the Green incomplete-beta integral,
    /// ∫_0^∞ s^{α/2−1} (1+s)^{−d/2} ds = B(α/2, (d−α)/2).
    green_beta_complete: T,
}

impl<T: Real> StableModel<T> {
    pub fn new(alpha: T, dim: usize) -> Result<Self> {
        let a = alpha.lossy();
        if !(a > 0.0 && a < 2.0) {
            return Err(Error::Domain(format!(
                "stability index must lie in (0,2), got {a}"
            )));
        }
        if dim != 2 && dim != 3 {
            return Err(Error::Domain(format!("dimension must be 2 or 3, got {dim}")));
        }
        let d = dim as f64;
        let pi = std::f64::consts::PI;
        let levy = a * 2f64.powf(a - 1.0) * gamma((d + a) / 2.0)
            / (pi.powf(d / 2.0) * gamma(1.0 - a / 2.0));
        let green = gamma(d / 2.0) / (2f64.powf(a) * pi.powf(d / 2.0) * gamma(a / 2.0).powi(2));
        let poisson = gamma(d / 2.0) * (pi * a / 2.0).sin() / pi.powf(d / 2.0 + 1.0);
        let beta_c = beta(a / 2.0, (d - a) / 2.0);
        for (name, v) in [
            ("levy", levy),
            ("green", green),
            ("poisson", poisson),
            ("beta", beta_c),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!(
                    "derived constant {name} is not positive finite: {v}"
                )));
            }
        }
        Ok(StableModel {
            alpha,
            dim,
            levy_const: T::of(levy),
            green_const: T::of(green),
            poisson_const: T::of(poisson),
            green_beta_complete: T::of(beta_c),
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levy_const(&self) -> T {
        self.levy_const
    }

    pub fn green_const(&self) -> T {
        self.green_const
    }

    pub fn poisson_const(&self) -> T {
        self.poisson_const
    }

    pub(crate) fn green_beta_complete(&self) -> T {
        self.green_beta_complete
    }

    /// φ(λ) = λ^{α/2}, λ > 0.
    pub fn phi_eval(&self, lam: T) -> Result<T> {
        if !(lam > T::zero()) || !lam.is_finite() {
            return Err(Error::Domain(format!(
                "phi expects positive finite argument, got {}",
                lam.lossy()
            )));
        }
        Ok(lam.powf(self.alpha * T::of(0.5)))
    }

    /// Renewal function V(t) = t^{α/2}, t ≥ 0.
    pub fn renewal_eval(&self, t: T) -> Result<T> {
        if t < T::zero() || !t.is_finite() {
            return Err(Error::Domain(format!(
                "renewal function expects t >= 0, got {}",
                t.lossy()
            )));
        }
        Ok(self.renewal(t))
    }

    /// Unchecked V(t) = t^{α/2} for internal hot paths (t ≥ 0 by construction).
    #[inline]
    pub(crate) fn renewal(&self, t: T) -> T {
        t.powf(self.alpha * T::of(0.5))
    }

    /// Lévy density j(r) = C(d,α) r^{−d−α}, r > 0.
    pub fn levy_density(&self, r: T) -> Result<T> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::Domain(format!(
                "levy density expects r > 0, got {}",
                r.lossy()
            )));
        }
        Ok(self.levy_unchecked(r))
    }

    #[inline]
    pub(crate) fn levy_unchecked(&self, r: T) -> T {
        self.levy_const * r.powf(-(T::of_usize(self.dim) + self.alpha))
    }
}

/// Certified weak-scaling exponents and constants on a sample set:
/// a1 (t/s)^{δ1} ≤ φ(t)/φ(s) ≤ a2 (t/s)^{δ2} for all sampled pairs t ≥ s.
#[derive(Clone, Copy, Debug)]
pub struct ScalingProbeResult<T> {
    pub delta1: T,
    pub delta2: T,
    pub a1: T,
    pub a2: T,
}

/// Fit the tightest weak-scaling exponents over all sampled pairs by
/// exhaustive pairwise log-ratio slopes (O(n²); the returned constants are
/// certified bounds on the sample set, not a regression).
pub fn weak_scaling_probe<T: Real>(
    phi_samples: &[(T, T)],
    range: (T, T),
) -> Result<ScalingProbeResult<T>> {
    let (s_min, s_max) = range;
    if !(s_min > T::zero() && s_max > s_min) {
        return Err(Error::Probe("range must satisfy 0 < s_min < s_max".into()));
    }
    let inside: Vec<(T, T)> = phi_samples
        .iter()
        .copied()
        .filter(|&(t, _)| t >= s_min && t <= s_max)
        .collect();
    if inside.len() < 8 {
        return Err(Error::Probe(format!(
            "need at least 8 samples inside the range, got {}",
            inside.len()
        )));
    }
    for w in inside.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Probe("sample abscissae must strictly increase".into()));
        }
        if !(w[0].1 > T::zero() && w[1].1 > T::zero()) {
            return Err(Error::Probe("phi values must be positive".into()));
        }
        if !(w[1].1 > w[0].1) {
            return Err(Error::Probe("phi must be strictly increasing on the samples".into()));
        }
    }

    let mut slope_min = T::infinity();
    let mut slope_max = T::neg_infinity();
    for i in 0..inside.len() {
        for k in (i + 1)..inside.len() {
            let (s, phi_s) = inside[i];
            let (t, phi_t) = inside[k];
            let slope = (phi_t / phi_s).ln() / (t / s).ln();
            slope_min = slope_min.min(slope);
            slope_max = slope_max.max(slope);
        }
    }
    if !(slope_min > T::zero() && slope_max < T::one()) {
        return Err(Error::Probe(format!(
            "fitted exponents [{}, {}] leave the admissible band (0, 1)",
            slope_min.lossy(),
            slope_max.lossy()
        )));
    }

    // With δ1 = min slope every pair ratio exceeds (t/s)^{δ1}; the smallest
    // excess is the certified a1. Symmetrically for a2.
    let mut a1 = T::infinity();
    let mut a2 = T::zero();
    for i in 0..inside.len() {
        for k in (i + 1)..inside.len() {
            let (s, phi_s) = inside[i];
            let (t, phi_t) = inside[k];
            let ratio = phi_t / phi_s;
            let base = t / s;
            a1 = a1.min(ratio / base.powf(slope_min));
            a2 = a2.max(ratio / base.powf(slope_max));
        }
    }
    Ok(ScalingProbeResult {
        delta1: slope_min,
        delta2: slope_max,
        a1,
        a2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn model(alpha: f64, dim: usize) -> StableModel<f64> {
        StableModel::new(alpha, dim).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StableModel::<f64>::new(0.0, 3).is_err());
        assert!(StableModel::<f64>::new(2.0, 3).is_err());
        assert!(StableModel::<f64>::new(1.0, 4).is_err());
    }

    #[test]
    fn phi_values() {
        let m = model(1.0, 3);
        assert_eq!(m.phi_eval(1.0).unwrap(), 1.0);
        assert!((m.phi_eval(4.0).unwrap() - 2.0).abs() < 1e-15);
        let m = model(1.5, 3);
        assert!((m.phi_eval(2.0).unwrap() - 2f64.powf(0.75)).abs() < 1e-15);
        assert!(m.phi_eval(0.0).is_err());
        assert!(m.phi_eval(-1.0).is_err());
    }

    #[test]
    fn renewal_values() {
        let m = model(1.0, 3);
        assert!((m.renewal_eval(4.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(m.renewal_eval(0.0).unwrap(), 0.0);
        for alpha in [0.5, 1.0, 1.7] {
            let m = model(alpha, 2);
            assert_eq!(m.renewal_eval(1.0).unwrap(), 1.0);
        }
        assert!(m.renewal_eval(-0.1).is_err());
    }

    /// V(t)² φ(t^{−2}) = 1 exactly in the stable case.
    #[test]
    fn renewal_phi_identity() {
        for alpha in [0.3, 0.5, 1.0, 1.5, 1.9] {
            let m = model(alpha, 3);
            for &t in &[1e-3, 0.1, 0.5, 1.0, 7.0] {
                let v = m.renewal_eval(t).unwrap();
                let p = m.phi_eval(1.0 / (t * t)).unwrap();
                assert!((v * v * p - 1.0).abs() < 1e-12, "alpha={alpha} t={t}");
            }
        }
    }

    #[test]
    fn levy_density_values() {
        let m = model(1.0, 3);
        // C(3,1) = 1/π².
        assert!((m.levy_density(1.0).unwrap() - 1.0 / (PI * PI)).abs() < 1e-14);
        // Power-law doubling j(2r)/j(r) = 2^{−d−α}.
        for &r in &[0.01, 0.5, 3.0] {
            let ratio = m.levy_density(2.0 * r).unwrap() / m.levy_density(r).unwrap();
            assert!((ratio - 2f64.powf(-4.0)).abs() < 1e-13);
        }
        assert!(m.levy_density(0.0).is_err());
    }

    #[test]
    fn levy_density_monotone_and_scaled() {
        let m = model(0.7, 2);
        let mut last = f64::INFINITY;
        for i in 1..200 {
            let r = 1e-2 * 1.07f64.powi(i);
            let j = m.levy_density(r).unwrap();
            assert!(j < last);
            last = j;
            // j(r) / (φ(r^{−2}) r^{−d}) constant in r for the stable case.
            let normalized = j / (m.phi_eval(r.powi(-2)).unwrap() * r.powi(-2));
            assert!((normalized / m.levy_const() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn probe_recovers_pure_power() {
        let samples: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let t = 1.0 * (100f64 / 1.0).powf(i as f64 / 39.0);
                (t, t.powf(0.5))
            })
            .collect();
        let r = weak_scaling_probe(&samples, (1.0, 100.0)).unwrap();
        assert!((r.delta1 - 0.5).abs() < 1e-9);
        assert!((r.delta2 - 0.5).abs() < 1e-9);
        assert!((r.a1 - 1.0).abs() < 1e-9);
        assert!((r.a2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn probe_brackets_mixed_power() {
        let samples: Vec<(f64, f64)> = (0..60)
            .map(|i| {
                let t = 100f64.powf(i as f64 / 59.0);
                (t, t.powf(0.3) + t.powf(0.7))
            })
            .collect();
        let r = weak_scaling_probe(&samples, (1.0, 100.0)).unwrap();
        assert!(r.delta1 >= 0.3 && r.delta1 <= 0.7);
        assert!(r.delta2 >= r.delta1 && r.delta2 <= 0.7 + 1e-12);
        // Certified bounds hold on every sampled pair.
        for i in 0..samples.len() {
            for k in (i + 1)..samples.len() {
                let (s, ps) = samples[i];
                let (t, pt) = samples[k];
                assert!(r.a1 * (t / s).powf(r.delta1) <= pt / ps * (1.0 + 1e-12));
                assert!(pt / ps <= r.a2 * (t / s).powf(r.delta2) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn probe_rejects_degenerate_inputs() {
        let constant: Vec<(f64, f64)> = (0..10).map(|i| (1.0 + i as f64, 2.0)).collect();
        assert!(weak_scaling_probe(&constant, (1.0, 10.0)).is_err());
        let few: Vec<(f64, f64)> = (0..5).map(|i| (1.0 + i as f64, 1.0 + i as f64)).collect();
        assert!(weak_scaling_probe(&few, (1.0, 10.0)).is_err());
    }
}
