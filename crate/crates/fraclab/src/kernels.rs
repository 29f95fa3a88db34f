//! Closed-form kernels of the α-stable process killed on a ball: Green
//! function, Poisson kernel, Martin kernel, modified Martin kernel, and the
//! killing function κ_D. The closed forms are classical; none is trusted
//! blindly — the consistency identity P_D(x,z) = ∫ G_D(x,y) j(|y−z|) dy, the
//! exit-distribution normalization, the Martin limits and the Monte Carlo
//! oracle all gate them in the test suites.

use crate::error::{Error, Result};
use crate::geom::{BallDomain, Point};
use crate::levy::StableModel;
use crate::quad::{
    adaptive_1d, adaptive_power_lower, integrate_exterior_axisym, Axisym, AxisymOpts,
};
use crate::real::Real;

const BETA_TOL: f64 = 1e-13;
const BETA_BUDGET: usize = 200_000;

/// Incomplete integral I(r₀) = ∫_0^{r₀} s^{α/2−1} (1+s)^{−d/2} ds.
///
/// The substitution w = s^{α/2} removes the endpoint singularity exactly:
/// I = (2/α) ∫_0^{r₀^{α/2}} (1 + t^{2/α})^{−d/2} dt. Large upper limits are
/// folded once more through u = v^{d/α−1} so slow tails (α near 2, d = 2)
/// stay cheap.
pub fn green_beta_integral<T: Real>(model: &StableModel<T>, r0: T) -> T {
    if !(r0 > T::zero()) {
        return T::zero();
    }
    let alpha = model.alpha();
    let d = T::of_usize(model.dim());
    let two = T::of(2.0);
    let w = r0.powf(alpha * T::of(0.5));
    let split = T::of(8.0);
    let head_top = w.min(split);
    let integrand = |t: T| (T::one() + t.powf(two / alpha)).powf(-d * T::of(0.5));
    let head = adaptive_1d(
        &integrand,
        T::zero(),
        head_top,
        T::of(BETA_TOL),
        T::of(1e-300),
        BETA_BUDGET,
    )
    .map(|r| r.value)
    .unwrap_or_else(|_| T::nan());
    let mut total = head;
    if w > split {
        // Tail in v = 1/t, then flatten the v^{d/α−2} profile exactly.
        let qp = d / alpha - T::one();
        let h = |v: T| (T::one() + v.powf(-two / alpha)).powf(-d * T::of(0.5)) / (v * v);
        let g = |u: T| {
            if u <= T::zero() {
                return T::zero();
            }
            let v = u.powf(T::one() / qp);
            h(v) / qp * u.powf(T::one() / qp - T::one())
        };
        let u_lo = w.recip().powf(qp);
        let u_hi = split.recip().powf(qp);
        let tail = adaptive_1d(&g, u_lo, u_hi, T::of(BETA_TOL), T::of(1e-300), BETA_BUDGET)
            .map(|r| r.value)
            .unwrap_or_else(|_| T::nan());
        total = total + tail;
    }
    two / alpha * total
}

/// Green function of the ball in scalar form: qx = |x − c|, qy = |y − c|,
/// u = |x − y|. Returns 0 outside the closed ball; no validation.
pub(crate) fn green_scalar<T: Real>(model: &StableModel<T>, radius: T, qx: T, qy: T, u: T) -> T {
    if qx >= radius || qy >= radius {
        return T::zero();
    }
    let r2 = radius * radius;
    let r0 = (r2 - qx * qx) * (r2 - qy * qy) / (r2 * u * u);
    let d = T::of_usize(model.dim());
    model.green_const() * u.powf(model.alpha() - d) * green_beta_integral(model, r0)
}

/// G_D(x, y) for the ball; the Blumenthal–Getoor–Ray closed form.
pub fn green<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    x: &Point<T>,
    y: &Point<T>,
) -> Result<T> {
    check_dims(model, ball)?;
    let u = x.dist(y);
    if u <= ball.boundary_tol() {
        return Err(Error::Singular(format!(
            "green function evaluated on its diagonal (|x−y| = {})",
            u.lossy()
        )));
    }
    let qx = ball.center().dist(x);
    let qy = ball.center().dist(y);
    if qx >= ball.radius() || qy >= ball.radius() {
        return Ok(T::zero());
    }
    Ok(green_scalar(model, ball.radius(), qx, qy, u))
}

pub(crate) fn poisson_scalar<T: Real>(model: &StableModel<T>, radius: T, qx: T, qz: T, u: T) -> T {
    let r2 = radius * radius;
    let half_alpha = model.alpha() * T::of(0.5);
    let d = T::of_usize(model.dim());
    model.poisson_const() * ((r2 - qx * qx) / (qz * qz - r2)).powf(half_alpha) * u.powf(-d)
}

/// Poisson kernel P_D(x, z) of the ball (M. Riesz form), x ∈ D, z ∈ (D̄)^c.
pub fn poisson<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    x: &Point<T>,
    z: &Point<T>,
) -> Result<T> {
    check_dims(model, ball)?;
    require_interior(ball, x)?;
    let dz = ball.delta_out(z);
    if dz.abs() <= ball.boundary_tol() {
        return Err(Error::Singular(
            "Poisson kernel blows up on the (accessible) boundary".into(),
        ));
    }
    if dz < T::zero() {
        return Err(Error::Domain("z must lie strictly outside the closed ball".into()));
    }
    let qx = ball.center().dist(x);
    let qz = ball.center().dist(z);
    Ok(poisson_scalar(model, ball.radius(), qx, qz, x.dist(z)))
}

pub(crate) fn martin_scalar<T: Real>(model: &StableModel<T>, radius: T, qx: T, u: T) -> T {
    let r2 = radius * radius;
    let half_alpha = model.alpha() * T::of(0.5);
    let d = T::of_usize(model.dim());
    (r2 - qx * qx).powf(half_alpha) * radius.powf(d - model.alpha()) * u.powf(-d)
}

/// Martin kernel M_D(x, z) normalized at x₀ = center, z ∈ ∂D.
pub fn martin<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    x: &Point<T>,
    z: &Point<T>,
) -> Result<T> {
    check_dims(model, ball)?;
    require_interior(ball, x)?;
    require_on_sphere(ball, z)?;
    let qx = ball.center().dist(x);
    Ok(martin_scalar(model, ball.radius(), qx, x.dist(z)))
}

pub(crate) fn modified_martin_scalar<T: Real>(
    model: &StableModel<T>,
    radius: T,
    qx: T,
    u: T,
) -> T {
    // Limit constant of G_D(x,y)/V(δ_D(y)) as y → z, from the small-r₀
    // expansion I(r₀) ≈ (2/α) r₀^{α/2} of the Green closed form.
    let half_alpha = model.alpha() * T::of(0.5);
    let limit_const = T::of(2.0) / model.alpha()
        * model.green_const()
        * (T::of(2.0) * radius).powf(half_alpha)
        * radius.powf(-model.alpha());
    let r2 = radius * radius;
    let d = T::of_usize(model.dim());
    limit_const * (r2 - qx * qx).powf(half_alpha) * u.powf(-d)
}

/// Modified Martin kernel K_D(x, z) = lim_{y→z} G_D(x, y)/V(δ_D(y)).
pub fn modified_martin<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    x: &Point<T>,
    z: &Point<T>,
) -> Result<T> {
    check_dims(model, ball)?;
    require_interior(ball, x)?;
    require_on_sphere(ball, z)?;
    let qx = ball.center().dist(x);
    Ok(modified_martin_scalar(model, ball.radius(), qx, x.dist(z)))
}

/// κ_D(x) = ∫_{D^c} j(|y − x|) dy, by radial-angular reduction.
pub fn killing<T: Real>(model: &StableModel<T>, ball: &BallDomain<T>, x: &Point<T>) -> Result<T> {
    check_dims(model, ball)?;
    require_interior(ball, x)?;
    let rho = ball.center().dist(x);
    killing_radial(model, ball.radius(), rho)
}

/// κ_D at distance `rho` from the center (the kernel is radial).
pub fn killing_radial<T: Real>(model: &StableModel<T>, radius: T, rho: T) -> Result<T> {
    let d = T::of_usize(model.dim());
    let geom = Axisym { ball_radius: radius, offset: rho, dim: model.dim() };
    let opts = AxisymOpts::new(T::of(1e-9)).budget(600_000);
    let res = integrate_exterior_axisym(
        &geom,
        &|r: T, _mu: T| model.levy_unchecked(r),
        d + model.alpha(),
        &opts,
    )?;
    Ok(res.value)
}

fn check_dims<T: Real>(model: &StableModel<T>, ball: &BallDomain<T>) -> Result<()> {
    if model.dim() != ball.dim() {
        return Err(Error::Domain(format!(
            "model dimension {} does not match ball dimension {}",
            model.dim(),
            ball.dim()
        )));
    }
    Ok(())
}

pub(crate) fn require_interior<T: Real>(ball: &BallDomain<T>, x: &Point<T>) -> Result<()> {
    if ball.delta_in(x) <= ball.boundary_tol() {
        return Err(Error::Domain(format!(
            "point must lie strictly inside the ball (δ_D = {})",
            ball.delta_in(x).lossy()
        )));
    }
    Ok(())
}

pub(crate) fn require_on_sphere<T: Real>(ball: &BallDomain<T>, z: &Point<T>) -> Result<()> {
    if !ball.is_boundary(z) {
        return Err(Error::Domain(format!(
            "point must lie on the sphere (δ = {})",
            ball.delta_in(z).lossy()
        )));
    }
    Ok(())
}

/// Expected first exit time of the ball started at its center,
/// E_0[τ_{B_r}] = G_{B_r} 1(0); enters the walk-on-spheres Green estimator.
pub fn mean_exit_time_center<T: Real>(model: &StableModel<T>, radius: T) -> T {
    // G_{B_1}1(0) = B(d,α) ω_{d−1} ∫_0^1 q^{d−1} q^{α−d} I((1−q²)/q²) dq,
    // then scale by r^α.
    let area = T::of(crate::special::unit_sphere_area(model.dim()));
    let alpha = model.alpha();
    let g = |q: T| {
        if q <= T::zero() || q >= T::one() {
            return T::zero();
        }
        let r0 = (T::one() - q * q) / (q * q);
        q.powf(alpha - T::one()) * green_beta_integral(model, r0)
    };
    // Integrand ~ q^{α−1} at 0: flatten exactly.
    let res = adaptive_power_lower(
        &g,
        T::zero(),
        T::one(),
        T::one() - alpha,
        T::of(1e-11),
        T::of(1e-300),
        BETA_BUDGET,
    )
    .map(|r| r.value)
    .unwrap_or_else(|_| T::nan());
    model.green_const() * area * res * radius.powf(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn setup(alpha: f64, dim: usize) -> (StableModel<f64>, BallDomain<f64>) {
        (StableModel::new(alpha, dim).unwrap(), BallDomain::unit(dim))
    }

    /// Test-local oracle for I(r₀): composite Simpson in log s plus a
    /// two-term analytic head for the endpoint power. Independent of the
    /// library's transform-then-adapt evaluation path.
    fn beta_integral_oracle(alpha: f64, dim: usize, r0: f64) -> f64 {
        let eps = 1e-8_f64.min(r0 / 2.0);
        let d = dim as f64;
        let head = 2.0 / alpha * eps.powf(alpha / 2.0)
            - d / (alpha / 2.0 + 1.0) * eps.powf(alpha / 2.0 + 1.0) / 2.0;
        let f = |s: f64| s.powf(alpha / 2.0 - 1.0) * (1.0 + s).powf(-d / 2.0);
        let n = 40_000;
        let (a, b) = (eps.ln(), r0.ln());
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let t = a + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * f(t.exp()) * t.exp();
        }
        head + acc * h / 3.0
    }

    #[test]
    fn beta_integral_matches_oracle() {
        for &(alpha, dim) in &[(0.5, 2usize), (1.0, 3), (1.5, 3), (1.9, 2)] {
            let m = StableModel::new(alpha, dim).unwrap();
            for &r0 in &[1e-6, 0.3, 3.0, 50.0, 1e4] {
                let ours = green_beta_integral(&m, r0);
                let oracle = beta_integral_oracle(alpha, dim, r0);
                assert!(
                    (ours / oracle - 1.0).abs() < 1e-7,
                    "alpha={alpha} dim={dim} r0={r0}: {ours} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn beta_integral_reaches_complete_value() {
        // I(∞) = B(α/2, (d−α)/2); huge r₀ must approach it from below.
        for &(alpha, dim) in &[(1.0, 3usize), (1.9, 2)] {
            let m = StableModel::new(alpha, dim).unwrap();
            let complete = crate::special::beta(alpha / 2.0, (dim as f64 - alpha) / 2.0);
            let big = green_beta_integral(&m, 1e26);
            assert!(big <= complete * (1.0 + 1e-12));
            let gap = (1.0 - big / complete).max(0.0);
            // Missing mass is (2/α) w^{1−d/α}/(d/α−1) with w = r₀^{α/2}.
            let d = dim as f64;
            let w = 1e26_f64.powf(alpha / 2.0);
            let tail = 2.0 / alpha * w.powf(1.0 - d / alpha) / (d / alpha - 1.0) / complete;
            assert!(
                gap <= 1.5 * tail.max(1e-12) && gap >= 0.5 * tail - 1e-10,
                "alpha={alpha} dim={dim}: gap {gap} vs predicted {tail}"
            );
        }
    }

    #[test]
    fn green_frozen_value() {
        // α=1, d=3, R=1, x=0, |y|=1/2: r₀ = 3, I = √3, G = √3/π².
        let (m, b) = setup(1.0, 3);
        let x = Point::origin(3);
        let y = Point::new(&[0.0, 0.0, 0.5]);
        let expect = 3f64.sqrt() / (PI * PI);
        let g = green(&m, &b, &x, &y).unwrap();
        assert!((g / expect - 1.0).abs() < 1e-10, "{g} vs {expect}");
    }

    #[test]
    fn green_symmetry_and_zero_outside() {
        let (m, b) = setup(1.3, 3);
        let pts = [
            Point::new(&[0.1, -0.2, 0.3]),
            Point::new(&[-0.5, 0.1, 0.7]),
            Point::new(&[0.0, 0.9, 0.05]),
            Point::new(&[0.01, 0.0, -0.97]),
        ];
        for i in 0..pts.len() {
            for k in (i + 1)..pts.len() {
                let a = green(&m, &b, &pts[i], &pts[k]).unwrap();
                let bb = green(&m, &b, &pts[k], &pts[i]).unwrap();
                assert!((a / bb - 1.0).abs() < 1e-12);
            }
        }
        let inside = Point::new(&[0.0, 0.0, 0.2]);
        let outside = Point::new(&[0.0, 0.0, 1.7]);
        assert_eq!(green(&m, &b, &inside, &outside).unwrap(), 0.0);
        assert!(green(&m, &b, &inside, &inside).is_err());
    }

    #[test]
    fn poisson_frozen_value_and_blowup() {
        let (m, b) = setup(1.0, 3);
        let x = Point::origin(3);
        let z = Point::new(&[0.0, 0.0, 2.0]);
        let expect = 1.0 / (16.0 * 3f64.sqrt() * PI * PI);
        let p = poisson(&m, &b, &x, &z).unwrap();
        assert!((p / expect - 1.0).abs() < 1e-12);

        // Radial blow-up toward ∂D at rate at least ε^{−α/2}.
        let p1 = poisson(&m, &b, &x, &Point::new(&[0.0, 0.0, 1.0 + 1e-3])).unwrap();
        let p2 = poisson(&m, &b, &x, &Point::new(&[0.0, 0.0, 1.0 + 1e-5])).unwrap();
        assert!(p2 / p1 > 0.9 * (1e-3f64 / 1e-5).powf(0.5));
        assert!(poisson(&m, &b, &x, &b.boundary_point()).is_err());
    }

    #[test]
    fn martin_normalization_and_limit() {
        for &(alpha, dim) in &[(0.6, 2usize), (1.0, 3), (1.5, 3)] {
            let (m, b) = setup(alpha, dim);
            let z = b.boundary_point();
            let c = Point::origin(dim);
            assert!((martin(&m, &b, &c, &z).unwrap() - 1.0).abs() < 1e-12);

            // Finite-difference consistency with the Green-ratio definition.
            let mut x = vec![0.0; dim];
            x[0] = 0.35;
            x[dim - 1] = -0.2;
            let x = Point::new(&x);
            let eps = 1e-4;
            let y = Point::on_axis(dim, 1.0 - eps);
            let ratio = green(&m, &b, &x, &y).unwrap() / green(&m, &b, &c, &y).unwrap();
            let mk = martin(&m, &b, &x, &z).unwrap();
            assert!(
                (ratio / mk - 1.0).abs() < 1e-2,
                "alpha={alpha} dim={dim}: {ratio} vs {mk}"
            );
        }
    }

    #[test]
    fn martin_rejects_off_sphere_and_is_structured() {
        let (m, b) = setup(1.0, 3);
        let x = Point::new(&[0.3, 0.0, 0.0]);
        assert!(martin(&m, &b, &x, &Point::new(&[0.0, 0.0, 0.9])).is_err());
        // martin · |x−z|^d / (R²−|x|²)^{α/2} constant over x and z.
        let zs = [
            Point::new(&[0.0, 0.0, 1.0]),
            Point::new(&[0.0, 1.0, 0.0]),
            Point::new(&[(0.5f64).sqrt(), 0.0, -(0.5f64).sqrt()]),
        ];
        let xs = [Point::origin(3), x, Point::new(&[0.0, -0.6, 0.3])];
        let mut vals = vec![];
        for z in &zs {
            for x in &xs {
                let v = martin(&m, &b, x, z).unwrap() * x.dist(z).powi(3)
                    / (1.0 - x.norm_sq()).powf(0.5);
                vals.push(v);
            }
        }
        for v in &vals {
            assert!((v / vals[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn modified_martin_ratio_and_limit() {
        for &(alpha, dim) in &[(0.8, 2usize), (1.0, 3), (1.4, 3)] {
            let (m, b) = setup(alpha, dim);
            let z = b.boundary_point();
            let c = Point::origin(dim);
            let mut xv = vec![0.0; dim];
            xv[0] = -0.25;
            xv[dim - 1] = 0.45;
            let x = Point::new(&xv);

            // K(x,z)/K(center,z) = M(x,z) exactly.
            let k_ratio = modified_martin(&m, &b, &x, &z).unwrap()
                / modified_martin(&m, &b, &c, &z).unwrap();
            let mk = martin(&m, &b, &x, &z).unwrap();
            assert!((k_ratio / mk - 1.0).abs() < 1e-12);

            // Limit definition: G(x,y)/V(δ(y)) → K(x,z) along y = (1−ε)z.
            let eps = 1e-4;
            let y = Point::on_axis(dim, 1.0 - eps);
            let fd = green(&m, &b, &x, &y).unwrap() / m.renewal_eval(eps).unwrap();
            let kk = modified_martin(&m, &b, &x, &z).unwrap();
            assert!(
                (fd / kk - 1.0).abs() < 1e-2,
                "alpha={alpha} dim={dim}: {fd} vs {kk}"
            );
        }
    }

    #[test]
    fn killing_frozen_value() {
        // α=1, d=3, R=1, x = center: κ = 4/π.
        let (m, b) = setup(1.0, 3);
        let k = killing(&m, &b, &Point::origin(3)).unwrap();
        assert!((k / (4.0 / PI) - 1.0).abs() < 1e-7, "{k}");
    }

    #[test]
    fn killing_radial_symmetry_and_estimate() {
        let (m, b) = setup(1.2, 3);
        let k1 = killing(&m, &b, &Point::new(&[0.4, 0.0, 0.0])).unwrap();
        let k2 = killing(&m, &b, &Point::new(&[0.0, -0.4, 0.0])).unwrap();
        let k3 = killing(&m, &b, &Point::new(&[0.0, 0.24, 0.32])).unwrap();
        assert!((k1 / k2 - 1.0).abs() < 1e-8);
        assert!((k1 / k3 - 1.0).abs() < 1e-7);

        // κ(x) V(δ)² stays in a fixed window as δ spans [1e-3, R].
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..=12 {
            let delta = 1e-3f64.powf(1.0 - i as f64 / 12.0);
            let k = killing_radial(&m, 1.0, 1.0 - delta).unwrap();
            let v = m.renewal_eval(delta).unwrap();
            let prod = k * v * v;
            lo = lo.min(prod);
            hi = hi.max(prod);
        }
        assert!(lo > 0.0 && hi / lo < 50.0, "window [{lo}, {hi}]");
    }

    #[test]
    fn killing_requires_interior() {
        let (m, b) = setup(1.0, 3);
        assert!(killing(&m, &b, &b.boundary_point()).is_err());
        assert!(killing(&m, &b, &Point::new(&[0.0, 0.0, 1.4])).is_err());
    }

    #[test]
    fn mean_exit_time_value() {
        // E_0[τ_B] = Γ(d/2)/(2^α Γ(1+α/2) Γ((d+α)/2)) R^α; equals 1/2 for
        // α=1, d=3, R=1.
        let m = StableModel::new(1.0, 3).unwrap();
        let v: f64 = mean_exit_time_center(&m, 1.0);
        assert!((v - 0.5).abs() < 1e-9, "{v}");
        let m2 = StableModel::new(0.7, 2).unwrap();
        let (d, a) = (2.0f64, 0.7f64);
        let expect = crate::special::gamma(d / 2.0)
            / (2f64.powf(a)
                * crate::special::gamma(1.0 + a / 2.0)
                * crate::special::gamma((d + a) / 2.0));
        let v2 = mean_exit_time_center(&m2, 1.0);
        assert!((v2 / expect - 1.0).abs() < 1e-8, "{v2} vs {expect}");
        // Scaling in the radius.
        let v3 = mean_exit_time_center(&m2, 2.0);
        assert!((v3 / (v2 * 2f64.powf(0.7)) - 1.0).abs() < 1e-9);
    }
}
