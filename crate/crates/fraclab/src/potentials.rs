//! Potential operators of the killed process: the Green potential G_D f, the
//! Poisson potential P_D λ for exterior densities, the Martin potential M_D μ
//! for boundary densities, and the Kato-class sufficient-condition checker.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{BallDomain, Point};
use crate::kernels::{
    self, green_scalar, martin_scalar, poisson_scalar, require_interior,
};
use crate::levy::StableModel;
use crate::quad::{
    integrate_ball, integrate_ball_axisym, integrate_exterior_axisym, integrate_sphere,
    integrate_sphere_axisym, Axisym, AxisymOpts, SingularitySpec,
};
use crate::real::Real;

/// Fraction of the radius kept between the innermost grid shell and ∂D.
pub const GRID_DELTA_FLOOR: f64 = 1e-6;

type PointRule<T> = Arc<dyn Fn(&Point<T>) -> T + Send + Sync>;

/// Boundary-refined radial-angular node set with cached values.
#[derive(Clone, Debug)]
pub struct FieldGrid<T> {
    /// Distances from the center, increasing; innermost shell at δ = 10⁻⁶ R.
    pub radii: Vec<T>,
    /// Polar angles θ about the last axis (radial fields ignore them).
    pub angles: Vec<T>,
    /// Row-major values\[i·n_angles + j\] = u(r_i, θ_j).
    pub values: Vec<T>,
}

/// Radial grid with geometric grading of δ toward the boundary.
pub fn graded_radii<T: Real>(radius: T, n: usize) -> Vec<T> {
    assert!(n >= 2);
    (0..n)
        .map(|k| {
            let t = T::of_usize(k) / T::of_usize(n - 1);
            let delta = radius * T::of(GRID_DELTA_FLOOR).powf(t);
            radius - delta
        })
        .collect()
}

/// A real-valued function on D: an evaluation rule plus a grid cache.
#[derive(Clone)]
pub struct ScalarField<T> {
    rule: PointRule<T>,
    grid: FieldGrid<T>,
    meta: String,
    radial: bool,
    /// Hint: the field behaves like δ_D^{−boundary_power} toward ∂D.
    boundary_power: T,
    grid_backed: bool,
    center: Point<T>,
    radius: T,
}

impl<T: Real> ScalarField<T> {
    /// Field defined by an evaluation rule on D.
    pub fn from_rule(
        meta: &str,
        ball: &BallDomain<T>,
        radial: bool,
        rule: impl Fn(&Point<T>) -> T + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::build(meta, ball, radial, Arc::new(rule), T::zero())
    }

    /// Radial profile of the boundary distance, f(x) = U(δ_D(x)), that blows
    /// up like δ^{−boundary_power} (0 for bounded profiles).
    pub fn from_delta_profile(
        meta: &str,
        ball: &BallDomain<T>,
        boundary_power: T,
        profile: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Result<Self> {
        let b = ball.clone();
        let rule = move |x: &Point<T>| profile(b.delta_in(x));
        Self::build(meta, ball, true, Arc::new(rule), boundary_power)
    }

    /// The constant-one field.
    pub fn one(ball: &BallDomain<T>) -> Self {
        Self::from_rule("one", ball, true, |_x| T::one()).expect("constant field")
    }

    /// The zero field.
    pub fn zero(ball: &BallDomain<T>) -> Self {
        Self::from_rule("zero", ball, true, |_x| T::zero()).expect("constant field")
    }

    fn build(
        meta: &str,
        ball: &BallDomain<T>,
        radial: bool,
        rule: PointRule<T>,
        boundary_power: T,
    ) -> Result<Self> {
        let radii = graded_radii(ball.radius(), 64);
        let angles: Vec<T> = if radial {
            vec![T::zero()]
        } else {
            (0..32)
                .map(|j| T::PI() * (T::of_usize(j) + T::of(0.5)) / T::of(32.0))
                .collect()
        };
        let mut values = Vec::with_capacity(radii.len() * angles.len());
        for &r in &radii {
            for &th in &angles {
                let x = node_point(ball, r, th);
                let v = rule(&x);
                if !v.is_finite() {
                    return Err(Error::Domain(format!(
                        "field '{meta}' is not finite at grid node r={} θ={}",
                        r.lossy(),
                        th.lossy()
                    )));
                }
                values.push(v);
            }
        }
        Ok(ScalarField {
            rule,
            grid: FieldGrid { radii, angles, values },
            meta: meta.to_string(),
            radial,
            boundary_power,
            grid_backed: false,
            center: *ball.center(),
            radius: ball.radius(),
        })
    }

    /// Radial field reconstructed from values on a radial grid; evaluation
    /// interpolates linearly in the radius and clamps beyond the last shell.
    pub fn from_radial_values(
        meta: &str,
        ball: &BallDomain<T>,
        radii: Vec<T>,
        values: Vec<T>,
    ) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::Domain("radial grid and values must align".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("field '{meta}' has non-finite grid values")));
        }
        let r_for_interp = radii.clone();
        let v_for_interp = values.clone();
        let center = *ball.center();
        let rule = move |x: &Point<T>| {
            let q = center.dist(x);
            interp_radial(&r_for_interp, &v_for_interp, q)
        };
        Ok(ScalarField {
            rule: Arc::new(rule),
            grid: FieldGrid { radii, angles: vec![T::zero()], values },
            meta: meta.to_string(),
            radial: true,
            boundary_power: T::zero(),
            grid_backed: true,
            center,
            radius: ball.radius(),
        })
    }

    pub fn eval(&self, x: &Point<T>) -> T {
        (self.rule)(x)
    }

    /// Evaluate a radial field at distance q from the center.
    pub fn eval_radial(&self, q: T) -> T {
        debug_assert!(self.radial);
        if self.grid_backed {
            interp_radial(&self.grid.radii, &self.grid.values, q)
        } else {
            let x = self.center.add(&Point::on_axis(self.center.dim(), q));
            (self.rule)(&x)
        }
    }

    pub fn is_radial(&self) -> bool {
        self.radial
    }

    pub fn boundary_power(&self) -> T {
        self.boundary_power
    }

    pub fn meta(&self) -> &str {
        &self.meta
    }

    pub fn grid(&self) -> &FieldGrid<T> {
        &self.grid
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    /// Sup of |u| over the grid nodes.
    pub fn sup_norm_grid(&self) -> T {
        self.grid
            .values
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

fn node_point<T: Real>(ball: &BallDomain<T>, r: T, theta: T) -> Point<T> {
    let dim = ball.dim();
    let (s, c) = theta.sin_cos();
    let p = match dim {
        2 => Point::new(&[r * s, r * c]),
        3 => Point::new(&[r * s, T::zero(), r * c]),
        _ => unreachable!(),
    };
    ball.center().add(&p)
}

fn interp_radial<T: Real>(radii: &[T], values: &[T], q: T) -> T {
    let n = radii.len();
    if q <= radii[0] {
        return values[0];
    }
    if q >= radii[n - 1] {
        return values[n - 1];
    }
    let mut lo = 0usize;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if radii[mid] <= q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = (q - radii[lo]) / (radii[hi] - radii[lo]);
    values[lo] * (T::one() - t) + values[hi] * t
}

/// Nonnegative density on D^c of the form λ(dy) = Ũ(δ_{D^c}(y)) dy.
#[derive(Clone)]
pub struct ExteriorDensity<T> {
    profile: Arc<dyn Fn(T) -> T + Send + Sync>,
    /// β when Ũ(t) = t^{−β}; enables exact admissibility arithmetic.
    power: Option<T>,
    /// Decay exponent of Ũ(t) as t → ∞ (β itself for powers).
    decay: T,
    zero: bool,
}

impl<T: Real> ExteriorDensity<T> {
    pub fn power(beta: T) -> Self {
        ExteriorDensity {
            profile: Arc::new(move |t: T| t.powf(-beta)),
            power: Some(beta),
            decay: beta,
            zero: false,
        }
    }

    pub fn from_profile(
        profile: impl Fn(T) -> T + Send + Sync + 'static,
        decay: T,
    ) -> Self {
        ExteriorDensity { profile: Arc::new(profile), power: None, decay, zero: false }
    }

    pub fn zero() -> Self {
        ExteriorDensity {
            profile: Arc::new(|_t: T| T::zero()),
            power: None,
            decay: T::zero(),
            zero: true,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn profile_at(&self, t: T) -> T {
        (self.profile)(t)
    }

    pub fn power_exponent(&self) -> Option<T> {
        self.power
    }

    pub fn decay_exponent(&self) -> T {
        self.decay
    }

    /// Admissibility ∫_0^1 Ũ/V + ∫_1^∞ Ũ/(V² t) < ∞; exact arithmetic for
    /// powers (−α < β < 1 − α/2), quadrature with divergence detection
    /// otherwise.
    pub fn check_admissible(&self, model: &StableModel<T>) -> Result<()> {
        if self.zero {
            return Ok(());
        }
        let half_alpha = model.alpha() * T::of(0.5);
        if let Some(beta) = self.power {
            if beta >= T::one() - half_alpha {
                return Err(Error::Divergent(format!(
                    "exterior power β = {} violates β < 1 − α/2 = {}",
                    beta.lossy(),
                    (T::one() - half_alpha).lossy()
                )));
            }
            if beta <= -model.alpha() {
                return Err(Error::Divergent(format!(
                    "exterior power β = {} violates β > −α = {}",
                    beta.lossy(),
                    (-model.alpha()).lossy()
                )));
            }
            return Ok(());
        }
        let profile = self.profile.clone();
        let near = crate::quad::divergence_probe(
            &|t: T| profile(t) / t.powf(half_alpha),
            T::of(1e-8),
            T::one(),
        )?;
        if !near {
            return Err(Error::Divergent(
                "∫_0^1 Ũ(t)/V(t) dt diverges (condition on the boundary layer)".into(),
            ));
        }
        // Tail part: Ũ(t)/(V(t)² t) must decay strictly faster than 1/t.
        if !(self.decay + model.alpha() > T::zero()) {
            return Err(Error::Divergent(
                "∫_1^∞ Ũ(t)/(V(t)² t) dt diverges (tail decay too slow)".into(),
            ));
        }
        Ok(())
    }
}

/// Nonnegative continuous density h against the surface measure on ∂D.
#[derive(Clone)]
pub struct BoundaryDensity<T> {
    h: PointRule<T>,
    constant: Option<T>,
    zero: bool,
}

impl<T: Real> BoundaryDensity<T> {
    pub fn constant(c: T) -> Result<Self> {
        if c < T::zero() {
            return Err(Error::Domain("boundary density must be nonnegative".into()));
        }
        Ok(BoundaryDensity {
            h: Arc::new(move |_z: &Point<T>| c),
            constant: Some(c),
            zero: c == T::zero(),
        })
    }

    /// The surface measure itself (h ≡ 1).
    pub fn sigma() -> Self {
        Self::constant(T::one()).expect("unit density")
    }

    pub fn zero() -> Self {
        Self::constant(T::zero()).expect("zero density")
    }

    pub fn from_rule(rule: impl Fn(&Point<T>) -> T + Send + Sync + 'static) -> Self {
        BoundaryDensity { h: Arc::new(rule), constant: None, zero: false }
    }

    pub fn eval(&self, z: &Point<T>) -> T {
        (self.h)(z)
    }

    pub fn constant_value(&self) -> Option<T> {
        self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }
}

/// G_D f(x) = ∫_D G_D(x, y) f(y) dy.
pub fn green_potential<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    f: &ScalarField<T>,
    x: &Point<T>,
) -> Result<T> {
    require_interior(ball, x)?;
    let beta = f.boundary_power();
    // (U1) gate for δ-power blowups: β < 1 + α/2.
    if beta >= T::one() + model.alpha() * T::of(0.5) {
        return Err(Error::Divergent(format!(
            "Green potential of δ^{{−{}}} diverges (integrability needs β < 1 + α/2)",
            beta.lossy()
        )));
    }
    let rel_tol = if beta > T::zero() { T::of(0.5e-4) } else { T::of(0.5e-6) };
    if f.is_radial() {
        let rho = ball.center().dist(x);
        return green_potential_radial_fn(
            model,
            ball,
            &|q: T| f.eval_radial(q),
            rho,
            beta,
            rel_tol,
        );
    }
    let sing = SingularitySpec::interior(
        *x,
        T::of_usize(model.dim()) - model.alpha(),
        model.dim(),
    )?;
    let radius = ball.radius();
    let qx = ball.center().dist(x);
    let xx = *x;
    let cc = *ball.center();
    let integrand = move |y: &Point<T>| {
        let u = xx.dist(y);
        if u <= T::zero() {
            return T::zero();
        }
        green_scalar(model, radius, qx, cc.dist(y), u) * f.eval(y)
    };
    Ok(integrate_ball(&integrand, ball, Some(&sing), rel_tol)?.value)
}

/// Green potential of a radial integrand given as a function of |y − c|.
pub fn green_potential_radial_fn<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    f_of_dist: &dyn Fn(T) -> T,
    rho: T,
    boundary_power: T,
    rel_tol: T,
) -> Result<T> {
    let radius = ball.radius();
    let dim = model.dim();
    let geom = Axisym { ball_radius: radius, offset: rho, dim };
    let qx = rho;
    let integrand = |r: T, mu: T| {
        let qy = geom.dist_to_center(r, mu);
        if qy >= radius {
            return T::zero();
        }
        green_scalar(model, radius, qx, qy, r) * f_of_dist(qy)
    };
    // Inner: G ~ δ(y)^{α/2} meets the profile's δ^{−β}.
    let inner_exp = boundary_power - model.alpha() * T::of(0.5);
    let opts = AxisymOpts::new(rel_tol)
        .origin_exponent(T::of_usize(dim) - model.alpha())
        .boundary_exponent(inner_exp)
        .breakpoints(&[ball.delta_in(&ball.interior_at_delta(radius - rho))]);
    let res = integrate_ball_axisym(&geom, T::zero(), radius + rho, &integrand, &opts)?;
    Ok(res.value)
}

/// P_D λ(x) for λ(dy) = Ũ(δ_{D^c}(y)) dy.
pub fn poisson_potential<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    g: &ExteriorDensity<T>,
    x: &Point<T>,
) -> Result<T> {
    require_interior(ball, x)?;
    if g.is_zero() {
        return Ok(T::zero());
    }
    g.check_admissible(model)?;
    let rho = ball.center().dist(x);
    poisson_potential_radial(model, ball, g, rho)
}

/// P_D λ at distance rho from the center (the potential is radial).
pub fn poisson_potential_radial<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    g: &ExteriorDensity<T>,
    rho: T,
) -> Result<T> {
    if g.is_zero() {
        return Ok(T::zero());
    }
    let radius = ball.radius();
    let dim = model.dim();
    let geom = Axisym { ball_radius: radius, offset: rho, dim };
    let qx = rho;
    let gg = g.clone();
    let integrand = move |r: T, mu: T| {
        let qz = geom.dist_to_center(r, mu);
        if qz <= radius {
            return T::zero();
        }
        poisson_scalar(model, radius, qx, qz, r) * gg.profile_at(qz - radius)
    };
    let beta = g.power_exponent().unwrap_or(T::zero());
    let half_alpha = model.alpha() * T::of(0.5);
    let opts = AxisymOpts::new(T::of(0.5e-6))
        .boundary_exponent(beta + half_alpha)
        .budget(2_000_000);
    let decay = T::of_usize(dim) + model.alpha() + g.decay_exponent();
    let res = integrate_exterior_axisym(&geom, &integrand, decay, &opts)?;
    Ok(res.value)
}

/// M_D μ(x) for μ(dz) = h(z) σ(dz); for h ≡ 1 this is M_D σ(x).
pub fn martin_potential<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    h: &BoundaryDensity<T>,
    x: &Point<T>,
) -> Result<T> {
    require_interior(ball, x)?;
    if h.is_zero() {
        return Ok(T::zero());
    }
    let radius = ball.radius();
    let rho = ball.center().dist(x);
    if let Some(c) = h.constant_value() {
        // Radial reduction about the direction of x.
        let r2 = radius * radius;
        let integrand = |mu: T| {
            let u2 = r2 + rho * rho - T::of(2.0) * radius * rho * mu;
            martin_scalar(model, radius, rho, u2.sqrt())
        };
        let res = integrate_sphere_axisym(&integrand, radius, model.dim(), T::of(1e-8), Some(T::one()))?;
        return Ok(c * res.value);
    }
    let xx = *x;
    let integrand = move |z: &Point<T>| martin_scalar(model, radius, rho, xx.dist(z)) * h.eval(z);
    Ok(integrate_sphere(&integrand, ball, T::of(1e-7))?.value)
}

/// Input accepted by the Kato checker.
pub enum KatoInput<'a, T> {
    /// q(x) = δ_D(x)^{−β}.
    DeltaPower(T),
    /// q(x) = U(δ_D(x)) for a general profile.
    DeltaProfile(&'a dyn Fn(T) -> T),
    /// An arbitrary field; |q| is used.
    Field(&'a ScalarField<T>),
}

/// Result of the sufficient-condition Kato check: the ε-profile of
/// m(ε) = sup_x ∫_{|x−y|<ε} |q(y)| φ(|x−y|^{−2})^{−1} |x−y|^{−d} dy,
/// recorded with ε decreasing.
#[derive(Clone, Debug)]
pub struct KatoReport<T> {
    pub passes: bool,
    pub divergent: bool,
    pub epsilon_profile: Vec<(T, T)>,
    pub limit_estimate: T,
    pub slope: T,
}

/// Check the sufficient Kato-class condition by evaluating the local-mass
/// profile on a grid of base points including the boundary itself (where the
/// supremum is attained for δ-profiles).
pub fn kato_check<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    q: &KatoInput<'_, T>,
    eps_list: &[T],
) -> Result<KatoReport<T>> {
    let radius = ball.radius();
    let dim = model.dim();
    let alpha = model.alpha();

    // Divergence pre-check by exact exponent arithmetic.
    if let KatoInput::DeltaPower(beta) = q {
        if *beta >= T::one() {
            return Ok(KatoReport {
                passes: false,
                divergent: true,
                epsilon_profile: Vec::new(),
                limit_estimate: T::infinity(),
                slope: T::zero(),
            });
        }
    }

    let abs_q = |qv: T| qv.abs();
    let profile_val = |delta: T| -> T {
        match q {
            KatoInput::DeltaPower(beta) => delta.powf(-*beta),
            KatoInput::DeltaProfile(u) => abs_q(u(delta)),
            KatoInput::Field(_) => unreachable!(),
        }
    };
    let beta_hint = match q {
        KatoInput::DeltaPower(beta) => *beta,
        _ => T::zero(),
    };

    // 200-point grid of base distances: boundary point plus log-spaced δ.
    let n_grid = 199usize;
    let mut rhos: Vec<T> = vec![radius];
    for i in 0..n_grid {
        let t = T::of_usize(i) / T::of_usize(n_grid - 1);
        let delta = radius * T::of(1e-3).powf(T::one() - t);
        rhos.push(radius - delta);
    }

    let mut eps_sorted: Vec<T> = eps_list.to_vec();
    eps_sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut profile_out: Vec<(T, T)> = Vec::new();
    let mut divergent = false;

    for &eps in &eps_sorted {
        let mut sup = T::zero();
        for &rho in &rhos {
            let geom = Axisym { ball_radius: radius, offset: rho, dim };
            let value = match q {
                KatoInput::Field(field) => {
                    let f = |r: T, mu: T| {
                        let qy = geom.dist_to_center(r, mu);
                        if qy >= radius {
                            return T::zero();
                        }
                        let y = point_at(ball, rho, r, mu);
                        field.eval(&y).abs() * r.powf(alpha - T::of_usize(dim))
                    };
                    let opts = AxisymOpts::new(T::of(1e-6))
                        .origin_exponent(T::of_usize(dim) - alpha)
                        .budget(300_000);
                    integrate_ball_axisym(&geom, T::zero(), eps, &f, &opts)
                }
                _ => {
                    let f = |r: T, mu: T| {
                        let qy = geom.dist_to_center(r, mu);
                        if qy >= radius {
                            return T::zero();
                        }
                        profile_val(radius - qy) * r.powf(alpha - T::of_usize(dim))
                    };
                    let opts = AxisymOpts::new(T::of(1e-6))
                        .origin_exponent(T::of_usize(dim) - alpha)
                        .boundary_exponent(beta_hint)
                        .budget(300_000);
                    integrate_ball_axisym(&geom, T::zero(), eps, &f, &opts)
                }
            };
            match value {
                Ok(r) => sup = sup.max(r.value),
                Err(Error::Budget { .. }) | Err(Error::Divergent(_)) => {
                    divergent = true;
                }
                Err(e) => return Err(e),
            }
        }
        profile_out.push((eps, sup));
        if divergent {
            break;
        }
    }

    if divergent {
        return Ok(KatoReport {
            passes: false,
            divergent: true,
            epsilon_profile: profile_out,
            limit_estimate: T::infinity(),
            slope: T::zero(),
        });
    }

    // Least-squares slope of log m against log ε.
    let n = T::of_usize(profile_out.len());
    let (mut sx, mut sy, mut sxx, mut sxy) = (T::zero(), T::zero(), T::zero(), T::zero());
    for &(e, m) in &profile_out {
        let lx = e.ln();
        let ly = m.max(T::of(1e-300)).ln();
        sx = sx + lx;
        sy = sy + ly;
        sxx = sxx + lx * lx;
        sxy = sxy + lx * ly;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let passes = slope > T::zero();
    let limit_estimate = if passes {
        T::zero()
    } else {
        profile_out.last().map(|&(_, m)| m).unwrap_or(T::zero())
    };
    Ok(KatoReport { passes, divergent: false, epsilon_profile: profile_out, limit_estimate, slope })
}

fn point_at<T: Real>(ball: &BallDomain<T>, rho: T, r: T, mu: T) -> Point<T> {
    // Base point on the last axis at distance rho, offset by r at polar μ.
    let dim = ball.dim();
    let smu = (T::one() - mu * mu).max(T::zero()).sqrt();
    let mut coords = vec![T::zero(); dim];
    coords[0] = r * smu;
    coords[dim - 1] = rho + r * mu;
    ball.center().add(&Point::new(&coords))
}

/// M_D σ(x) closed form for the ball (test and audit reference).
pub fn martin_sigma_closed_form<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    rho: T,
) -> T {
    let rr = ball.radius();
    let r2 = rr * rr;
    let d = model.dim();
    let sphere_int = match d {
        3 => T::of(4.0) * T::PI() * rr / (r2 - rho * rho),
        2 => T::of(2.0) * T::PI() * rr / (r2 - rho * rho),
        _ => unreachable!(),
    };
    (r2 - rho * rho).powf(model.alpha() * T::of(0.5))
        * rr.powf(T::of_usize(d) - model.alpha())
        * sphere_int
}

/// K_D σ(x) = ∫_{∂D} K_D(x,z) σ(dz), closed form for the ball.
pub fn modified_martin_sigma_closed_form<T: Real>(
    model: &StableModel<T>,
    ball: &BallDomain<T>,
    rho: T,
) -> T {
    let ratio = kernels::modified_martin_scalar(model, ball.radius(), rho, T::one())
        / kernels::martin_scalar(model, ball.radius(), rho, T::one());
    martin_sigma_closed_form(model, ball, rho) * ratio
}
