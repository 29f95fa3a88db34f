//! Singularity-aware deterministic quadrature over the ball, its exterior and
//! the boundary sphere.
//!
//! Everything reduces to nested one-dimensional adaptive Gauss–Kronrod
//! passes. Radially or axially symmetric integrands use the dimension-reduced
//! forms directly; general integrands go through spherical product
//! coordinates centered at the singularity. Algebraic endpoint behavior is
//! removed by exact power substitutions rather than chased adaptively.

pub mod adaptive;
pub mod ring;

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::geom::{BallDomain, Point};
use crate::real::Real;
use crate::special::unit_sphere_area;

pub use adaptive::{
    adaptive as adaptive_1d, adaptive_power_lower, adaptive_power_upper, adaptive_tail,
    pairwise_sum,
};
pub use ring::ring_integral;

/// Default evaluation budget per public quadrature call.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Value, error estimate and cost of one integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub abs_error: T,
    pub evaluations: usize,
}

/// Kind of integrable singularity carried by an integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityKind {
    /// Integrand behaves like |y − location|^{−exponent} at an interior point.
    InteriorPoint,
    /// Integrand behaves like δ_D(y)^{−exponent} toward the boundary.
    BoundaryPower,
}

/// Description of the integrand's singular behavior.
#[derive(Clone, Copy, Debug)]
pub struct SingularitySpec<T> {
    pub location: Point<T>,
    pub exponent: T,
    pub kind: SingularityKind,
}

impl<T: Real> SingularitySpec<T> {
    pub fn interior(location: Point<T>, exponent: T, dim: usize) -> Result<Self> {
        if !(exponent.lossy() < dim as f64) {
            return Err(Error::Domain(format!(
                "interior singularity exponent {} is not integrable in dimension {dim}",
                exponent.lossy()
            )));
        }
        Ok(SingularitySpec { location, exponent, kind: SingularityKind::InteriorPoint })
    }

    pub fn boundary(exponent: T, dim: usize) -> Self {
        SingularitySpec {
            location: Point::origin(dim),
            exponent,
            kind: SingularityKind::BoundaryPower,
        }
    }
}

/// Geometry for axially symmetric integration: the integrand is a function of
/// (r, μ) where r is the distance from an expansion point p located at
/// distance `offset` from the ball center along the symmetry axis, and μ is
/// the cosine of the polar angle measured from the axis pointing from the
/// center through p.
#[derive(Clone, Copy, Debug)]
pub struct Axisym<T> {
    pub ball_radius: T,
    pub offset: T,
    pub dim: usize,
}

impl<T: Real> Axisym<T> {
    /// |y − center| for a point at (r, μ) from the expansion point.
    #[inline]
    pub fn dist_to_center(&self, r: T, mu: T) -> T {
        let rho = self.offset;
        (rho * rho + r * r + T::of(2.0) * r * rho * mu).max(T::zero()).sqrt()
    }

    /// μ at which |y − center| = q, for fixed r (increasing in q).
    #[inline]
    fn mu_of_dist(&self, r: T, q: T) -> T {
        (q * q - self.offset * self.offset - r * r) / (T::of(2.0) * r * self.offset)
    }
}

/// Options for the axisymmetric integrators.
#[derive(Clone)]
pub struct AxisymOpts<T> {
    pub rel_tol: T,
    /// Integrand ~ r^{−γ} as r → 0 (γ may be negative for fractional kinks).
    pub origin_exponent: T,
    /// Integrand ~ δ^{−γ} toward ∂D (δ_D inside, δ_{D^c} outside).
    pub boundary_exponent: T,
    /// Restrict to points with δ in this band (interior or exterior distance).
    pub delta_band: Option<(T, T)>,
    /// Extra radial split points.
    pub breakpoints: Vec<T>,
    pub budget: usize,
}

impl<T: Real> AxisymOpts<T> {
    pub fn new(rel_tol: T) -> Self {
        AxisymOpts {
            rel_tol,
            origin_exponent: T::zero(),
            boundary_exponent: T::zero(),
            delta_band: None,
            breakpoints: Vec::new(),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn origin_exponent(mut self, g: T) -> Self {
        self.origin_exponent = g;
        self
    }

    pub fn boundary_exponent(mut self, g: T) -> Self {
        self.boundary_exponent = g;
        self
    }

    pub fn delta_band(mut self, lo: T, hi: T) -> Self {
        self.delta_band = Some((lo, hi));
        self
    }

    pub fn breakpoints(mut self, bp: &[T]) -> Self {
        self.breakpoints = bp.to_vec();
        self
    }

    pub fn budget(mut self, b: usize) -> Self {
        self.budget = b;
        self
    }
}

const INNER_BUDGET: usize = 400_000;

/// Angular factor of the surface measure left after the polar reduction:
/// 2π for d = 3 (measure dμ), 2 for d = 2 (measure dθ).
fn angular_const<T: Real>(dim: usize) -> T {
    match dim {
        3 => T::of(2.0) * T::PI(),
        2 => T::of(2.0),
        _ => unreachable!(),
    }
}

/// Inner polar integral at fixed r over μ ∈ [mu_lo, mu_hi] ⊂ [−1, 1].
/// `sing_at_hi` / `sing_at_lo` request a power transform with the given
/// exponent at the respective endpoint.
fn polar_slice<T: Real, F: Fn(T, T) -> T>(
    f: &F,
    dim: usize,
    r: T,
    mu_lo: T,
    mu_hi: T,
    sing_lo: Option<T>,
    sing_hi: Option<T>,
    rel_tol: T,
    evals: &Cell<usize>,
) -> Result<T> {
    if !(mu_hi > mu_lo) {
        return Ok(T::zero());
    }
    let count = |v: T| {
        evals.set(evals.get() + 1);
        v
    };
    let res = match dim {
        3 => {
            let g = |mu: T| count(f(r, mu));
            match (sing_lo, sing_hi) {
                (Some(gl), _) if gl != T::zero() => {
                    adaptive_power_lower(&g, mu_lo, mu_hi, gl, rel_tol, T::of(1e-300), INNER_BUDGET)?
                }
                (_, Some(gh)) if gh != T::zero() => {
                    adaptive_power_upper(&g, mu_lo, mu_hi, gh, rel_tol, T::of(1e-300), INNER_BUDGET)?
                }
                _ => adaptive_1d(&g, mu_lo, mu_hi, rel_tol, T::of(1e-300), INNER_BUDGET)?,
            }
        }
        2 => {
            // Work in θ = arccos μ so the circle measure is flat.
            let th_lo = mu_hi.min(T::one()).acos();
            let th_hi = mu_lo.max(-T::one()).acos();
            let g = |th: T| count(f(r, th.cos()));
            // μ endpoint singularities map to the opposite θ endpoints.
            match (sing_lo, sing_hi) {
                (Some(gl), _) if gl != T::zero() => {
                    adaptive_power_upper(&g, th_lo, th_hi, gl, rel_tol, T::of(1e-300), INNER_BUDGET)?
                }
                (_, Some(gh)) if gh != T::zero() => {
                    adaptive_power_lower(&g, th_lo, th_hi, gh, rel_tol, T::of(1e-300), INNER_BUDGET)?
                }
                _ => adaptive_1d(&g, th_lo, th_hi, rel_tol, T::of(1e-300), INNER_BUDGET)?,
            }
        }
        _ => unreachable!(),
    };
    Ok(res.value)
}

/// ∫ f over {y ∈ B : r_lo < |y − p| < r_hi, δ-band} for an integrand
/// axisymmetric about the axis through the ball center and the expansion
/// point p (which must lie inside the ball).
pub fn integrate_ball_axisym<T: Real, F: Fn(T, T) -> T>(
    geom: &Axisym<T>,
    r_lo: T,
    r_hi: T,
    f: &F,
    opts: &AxisymOpts<T>,
) -> Result<QuadratureResult<T>> {
    let rr = geom.ball_radius;
    let rho = geom.offset;
    let dim = geom.dim;
    debug_assert!(rho <= rr, "expansion point must lie inside the closed ball");
    let evals = Cell::new(0usize);
    let ang = angular_const::<T>(dim);

    let (band_lo, band_hi) = opts.delta_band.unwrap_or((T::zero(), rr));
    let band_lo = band_lo.max(T::zero());
    let band_hi = band_hi.min(rr);
    if !(band_hi > band_lo) {
        return Ok(QuadratureResult { value: T::zero(), abs_error: T::zero(), evaluations: 0 });
    }

    // Concentric expansion point: δ bands are pure radial restrictions.
    let concentric = rho <= rr * T::of(1e-14);

    let r_top = (rho + rr).min(r_hi);
    let r_bot = r_lo.max(T::zero());
    if !(r_top > r_bot) {
        return Ok(QuadratureResult { value: T::zero(), abs_error: T::zero(), evaluations: 0 });
    }

    // Radial segment boundaries: ball-cut onset, band geometry, caller's.
    let mut cuts: Vec<T> = vec![r_bot, r_top];
    let push = |v: T, cuts: &mut Vec<T>| {
        if v > r_bot && v < r_top {
            cuts.push(v);
        }
    };
    push((rr - rho).abs(), &mut cuts); // cap starts to intersect ∂D
    // Radii where the δ band enters/leaves the reachable set.
    for s in [band_lo, band_hi] {
        let q = rr - s;
        push((q - rho).abs(), &mut cuts);
        push(q + rho, &mut cuts);
    }
    for &b in &opts.breakpoints {
        push(b, &mut cuts);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= (r_top * T::of(1e-15)).max(T::of(1e-300)));
    // A single segment cannot host transforms at both endpoints.
    if cuts.len() == 2 && concentric && opts.boundary_exponent != T::zero() {
        cuts.insert(1, crate::real::midpoint(cuts[0], cuts[1]));
    }

    let inner_tol = opts.rel_tol * T::of(0.25);
    let outer = |r: T| -> Result<T> {
        if r <= T::zero() {
            return Ok(T::zero());
        }
        if concentric {
            let q = r; // |y − center| = r
            let dlt = rr - q;
            if dlt <= band_lo || dlt >= band_hi {
                return Ok(T::zero());
            }
            evals.set(evals.get() + 1);
            // Full sphere of directions; f cannot depend on μ meaningfully.
            return Ok(T::of(unit_sphere_area(dim)) * f(r, T::zero()));
        }
        // μ window: ball interior ∩ δ band.
        let mu_ball = geom.mu_of_dist(r, rr - band_lo);
        let mu_band_lo = geom.mu_of_dist(r, rr - band_hi);
        let mut lo = mu_band_lo.max(-T::one());
        let mut hi = mu_ball.min(T::one());
        if !(hi > lo) {
            return Ok(T::zero());
        }
        lo = lo.max(-T::one());
        hi = hi.min(T::one());
        // Power transform only when the binding endpoint is the δ cut.
        let sing_hi = if mu_ball < T::one() && opts.boundary_exponent != T::zero() {
            Some(opts.boundary_exponent)
        } else {
            None
        };
        // Entering the band from deeper inside is never singular; only the
        // δ → 0 edge (the ball cut) carries the boundary power.
        polar_slice(f, dim, r, lo, hi, None, sing_hi, inner_tol, &evals).map(|v| ang * v)
    };

    let mut pieces: Vec<T> = Vec::new();
    let mut err_total = T::zero();
    let n_windows = cuts.len() - 1;
    for (iw, w) in cuts.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let g = |r: T| -> T {
            match outer(r) {
                Ok(v) => r.powf(T::of_usize(dim) - T::one()) * v,
                Err(_) => T::nan(), // surfaces as a budget/accuracy failure
            }
        };
        let gamma_out = opts.origin_exponent - (T::of_usize(dim) - T::one());
        let gamma_b = opts.boundary_exponent;
        let res = if a <= r_bot + r_top * T::of(1e-15) && gamma_out != T::zero() && gamma_out < T::one()
        {
            adaptive_power_lower(&g, a, b, gamma_out, opts.rel_tol, T::of(1e-300), opts.budget)?
        } else if concentric && iw + 1 == n_windows && gamma_b != T::zero() && gamma_b < T::one() {
            // Concentric: the δ → 0 blowup sits at the outer upper endpoint.
            adaptive_power_upper(&g, a, b, gamma_b, opts.rel_tol, T::of(1e-300), opts.budget)?
        } else {
            adaptive_1d(&g, a, b, opts.rel_tol, T::of(1e-300), opts.budget)?
        };
        if res.value.is_nan() {
            return Err(Error::Budget {
                best_estimate: f64::NAN,
                abs_error: f64::NAN,
                evaluations: evals.get(),
            });
        }
        pieces.push(res.value);
        err_total = err_total + res.abs_error;
        evals.set(evals.get() + res.evaluations);
        if evals.get() > opts.budget.saturating_mul(4) {
            return Err(Error::Budget {
                best_estimate: pairwise_sum(&pieces).lossy(),
                abs_error: err_total.lossy(),
                evaluations: evals.get(),
            });
        }
    }
    Ok(QuadratureResult {
        value: pairwise_sum(&pieces),
        abs_error: err_total,
        evaluations: evals.get(),
    })
}

/// ∫ f over {y ∈ D^c : δ-band, |y − p| < ∞} for an axisymmetric integrand;
/// p inside the ball. `decay_exponent` is the |y|^{−p} decay of f at
/// infinity and must exceed the dimension.
pub fn integrate_exterior_axisym<T: Real, F: Fn(T, T) -> T>(
    geom: &Axisym<T>,
    f: &F,
    decay_exponent: T,
    opts: &AxisymOpts<T>,
) -> Result<QuadratureResult<T>> {
    let rr = geom.ball_radius;
    let rho = geom.offset;
    let dim = geom.dim;
    if !(decay_exponent.lossy() > dim as f64) {
        return Err(Error::Divergent(format!(
            "exterior integrand decay exponent {} does not exceed the dimension {dim}",
            decay_exponent.lossy()
        )));
    }
    let evals = Cell::new(0usize);
    let ang = angular_const::<T>(dim);

    let band = opts.delta_band;
    let (band_lo, band_hi) = band.unwrap_or((T::zero(), T::infinity()));

    let concentric = rho <= rr * T::of(1e-14);
    let inner_tol = opts.rel_tol * T::of(0.25);

    let slice = |r: T| -> Result<T> {
        if concentric {
            let q = r;
            let dlt = q - rr;
            if dlt <= band_lo || dlt >= band_hi {
                return Ok(T::zero());
            }
            evals.set(evals.get() + 1);
            return Ok(T::of(unit_sphere_area(dim)) * f(r, T::zero()));
        }
        // Exterior: |y − c| > R + band_lo, and below R + band_hi if banded.
        let mu_lo = geom.mu_of_dist(r, rr + band_lo).max(-T::one());
        let mu_hi = if band_hi.is_finite() {
            geom.mu_of_dist(r, rr + band_hi).min(T::one())
        } else {
            T::one()
        };
        if !(mu_hi > mu_lo) {
            return Ok(T::zero());
        }
        let sing_lo = if mu_lo > -T::one() && opts.boundary_exponent != T::zero() && band_lo == T::zero()
        {
            Some(opts.boundary_exponent)
        } else {
            None
        };
        polar_slice(f, dim, r, mu_lo, mu_hi, sing_lo, None, inner_tol, &evals).map(|v| ang * v)
    };

    let g = |r: T| -> T {
        match slice(r) {
            Ok(v) => r.powf(T::of_usize(dim) - T::one()) * v,
            Err(_) => T::nan(),
        }
    };

    let r_first = rr - rho + band_lo.min(rr * T::of(1e6)); // nearest reachable exterior point
    let r_cut = rr + rho + band_lo.min(rr * T::of(1e6)); // full sphere beyond this
    let r_far = (rr * T::of(10.0)).max(r_cut + rr);

    let mut pieces: Vec<T> = Vec::new();
    let mut err_total = T::zero();
    let push_res = |res: QuadratureResult<T>, pieces: &mut Vec<T>, err: &mut T| {
        pieces.push(res.value);
        *err = *err + res.abs_error;
        evals.set(evals.get() + res.evaluations);
    };

    // Boundary layer with a shrinking cap: the layer width 1 − γ_b governs
    // the outer endpoint behavior; transform with γ_b − 1 when singular.
    let gamma_layer = opts.boundary_exponent - T::one();
    let res = if gamma_layer != T::zero() && !concentric && band_lo == T::zero() {
        adaptive_power_lower(&g, r_first, r_cut, gamma_layer, opts.rel_tol, T::of(1e-300), opts.budget)?
    } else if opts.boundary_exponent != T::zero() && concentric && band_lo == T::zero() {
        adaptive_power_lower(
            &g,
            r_first,
            r_cut,
            opts.boundary_exponent,
            opts.rel_tol,
            T::of(1e-300),
            opts.budget,
        )?
    } else {
        adaptive_1d(&g, r_first, r_cut, opts.rel_tol, T::of(1e-300), opts.budget)?
    };
    push_res(res, &mut pieces, &mut err_total);

    if band_hi.is_infinite() || rr + band_hi + rho > r_cut {
        let mid_end = if band_hi.is_finite() { (rr + band_hi + rho).min(r_far) } else { r_far };
        if mid_end > r_cut {
            let res = adaptive_1d(&g, r_cut, mid_end, opts.rel_tol, T::of(1e-300), opts.budget)?;
            push_res(res, &mut pieces, &mut err_total);
        }
        if band_hi.is_infinite() {
            // Far zone mapped to a compact interval through the decay hint.
            let p_outer = decay_exponent - (T::of_usize(dim) - T::one());
            let res = adaptive_tail(&g, r_far, p_outer, opts.rel_tol, T::of(1e-300), opts.budget)?;
            push_res(res, &mut pieces, &mut err_total);
        }
    }

    Ok(QuadratureResult {
        value: pairwise_sum(&pieces),
        abs_error: err_total,
        evaluations: evals.get(),
    })
}

/// ∫_B g(|y − center|) dy by the co-area formula.
pub fn integrate_ball_radial<T: Real, F: Fn(T) -> T>(
    g: &F,
    ball_radius: T,
    dim: usize,
    rel_tol: T,
    origin_exponent: T,
    boundary_exponent: T,
    budget: usize,
) -> Result<QuadratureResult<T>> {
    let area = T::of(unit_sphere_area(dim));
    let h = |q: T| area * q.powf(T::of_usize(dim) - T::one()) * g(q);
    let gamma0 = origin_exponent - (T::of_usize(dim) - T::one());
    let half = ball_radius * T::of(0.5);
    let lower = if gamma0 != T::zero() && gamma0 < T::one() {
        adaptive_power_lower(&h, T::zero(), half, gamma0, rel_tol, T::of(1e-300), budget)?
    } else {
        adaptive_1d(&h, T::zero(), half, rel_tol, T::of(1e-300), budget)?
    };
    let upper = if boundary_exponent != T::zero() && boundary_exponent < T::one() {
        adaptive_power_upper(&h, half, ball_radius, boundary_exponent, rel_tol, T::of(1e-300), budget)?
    } else {
        adaptive_1d(&h, half, ball_radius, rel_tol, T::of(1e-300), budget)?
    };
    Ok(QuadratureResult {
        value: lower.value + upper.value,
        abs_error: lower.abs_error + upper.abs_error,
        evaluations: lower.evaluations + upper.evaluations,
    })
}

fn orthonormal_frame<T: Real>(e: &Point<T>, dim: usize) -> (Point<T>, Point<T>) {
    // Pick the standard axis least aligned with e, orthogonalize.
    let coords = e.coords();
    let mut best = 0usize;
    for i in 1..dim {
        if coords[i].abs() < coords[best].abs() {
            best = i;
        }
    }
    let mut v = vec![T::zero(); dim];
    v[best] = T::one();
    let axis = Point::new(&v);
    let proj = e.scale(axis.dot(e));
    let mut e1 = axis.sub(&proj);
    e1 = e1.scale(T::one() / e1.norm());
    if dim == 2 {
        return (e1, Point::origin(dim));
    }
    // e2 = e × e1 in 3-d.
    let a = e.coords();
    let b = e1.coords();
    let e2 = Point::new(&[
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]);
    (e1, e2)
}

/// General ball integral in spherical product coordinates centered at the
/// singularity (or the ball center). Axisymmetric callers should prefer
/// [`integrate_ball_axisym`].
pub fn integrate_ball<T: Real, F: Fn(&Point<T>) -> T>(
    f: &F,
    ball: &BallDomain<T>,
    sing: Option<&SingularitySpec<T>>,
    rel_tol: T,
) -> Result<QuadratureResult<T>> {
    if !(rel_tol > T::zero()) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let dim = ball.dim();
    let (p, origin_exp, boundary_exp) = match sing {
        Some(s) if s.kind == SingularityKind::InteriorPoint => {
            if s.exponent.lossy() >= dim as f64 {
                return Err(Error::Domain(
                    "interior singularity exponent must be below the dimension".into(),
                ));
            }
            (s.location, s.exponent, T::zero())
        }
        Some(s) => {
            if s.exponent >= T::one() {
                return Err(Error::Domain(
                    "boundary power must be integrable against the radial measure".into(),
                ));
            }
            (*ball.center(), T::zero(), s.exponent)
        }
        None => (*ball.center(), T::zero(), T::zero()),
    };
    if !(ball.delta_in(&p) > T::zero()) {
        return Err(Error::Domain("expansion point must lie inside the ball".into()));
    }
    let rho = ball.center().dist(&p);
    let e = if rho > T::zero() {
        p.sub(ball.center()).scale(T::one() / rho)
    } else {
        Point::on_axis(dim, T::one())
    };
    let (e1, _e2) = orthonormal_frame(&e, dim);
    let geom = Axisym { ball_radius: ball.radius(), offset: rho, dim };
    let evals = Cell::new(0usize);

    // Rounding in point construction may cross ∂D; the integrand lives on D.
    let fd = |y: &Point<T>| if ball.delta_in(y) > T::zero() { f(y) } else { T::zero() };

    // Azimuthal average of f at polar position (r, μ) around the axis e.
    let avg = |r: T, mu: T| -> T {
        let smu = (T::one() - mu * mu).max(T::zero()).sqrt();
        match dim {
            2 => {
                // Two reflection-symmetric points share the same (r, μ).
                let half = T::of(0.5);
                let y1 = p.add(&e.scale(r * mu)).add(&e1.scale(r * smu));
                let y2 = p.add(&e.scale(r * mu)).add(&e1.scale(-(r * smu)));
                evals.set(evals.get() + 2);
                half * (fd(&y1) + fd(&y2))
            }
            3 => {
                let base = p.add(&e.scale(r * mu));
                let (ea, eb) = orthonormal_frame(&e, 3);
                let g = |phi: T| {
                    evals.set(evals.get() + 1);
                    let dir = ea.scale(phi.cos()).add(&eb.scale(phi.sin()));
                    fd(&base.add(&dir.scale(r * smu)))
                };
                let two_pi = T::of(2.0) * T::PI();
                let res = adaptive_1d(&g, T::zero(), two_pi, rel_tol * T::of(0.25), T::of(1e-300), INNER_BUDGET)
                    .map(|r| r.value / two_pi);
                res.unwrap_or_else(|_| T::nan())
            }
            _ => unreachable!(),
        }
    };

    let opts = AxisymOpts::new(rel_tol)
        .origin_exponent(origin_exp)
        .boundary_exponent(boundary_exp)
        .budget(DEFAULT_BUDGET);
    let mut res = integrate_ball_axisym(&geom, T::zero(), ball.radius() + rho, &avg, &opts)?;
    if res.value.is_nan() {
        return Err(Error::Budget {
            best_estimate: f64::NAN,
            abs_error: f64::NAN,
            evaluations: res.evaluations + evals.get(),
        });
    }
    res.evaluations += evals.get();
    Ok(res)
}

/// Exterior integral of a general integrand with known far-field decay.
pub fn integrate_exterior<T: Real, F: Fn(&Point<T>) -> T>(
    g: &F,
    ball: &BallDomain<T>,
    decay_exponent: T,
    rel_tol: T,
) -> Result<QuadratureResult<T>> {
    let dim = ball.dim();
    if !(decay_exponent.lossy() > dim as f64) {
        return Err(Error::Divergent(format!(
            "exterior decay exponent {} must exceed the dimension {dim}",
            decay_exponent.lossy()
        )));
    }
    let c = *ball.center();
    let e = Point::on_axis(dim, T::one());
    let (e1, e2) = orthonormal_frame(&e, dim);
    let evals = Cell::new(0usize);
    let avg = |r: T, mu: T| -> T {
        let smu = (T::one() - mu * mu).max(T::zero()).sqrt();
        match dim {
            2 => {
                let half = T::of(0.5);
                let y1 = c.add(&e.scale(r * mu)).add(&e1.scale(r * smu));
                let y2 = c.add(&e.scale(r * mu)).add(&e1.scale(-(r * smu)));
                evals.set(evals.get() + 2);
                half * (g(&y1) + g(&y2))
            }
            3 => {
                let base = c.add(&e.scale(r * mu));
                let h = |phi: T| {
                    evals.set(evals.get() + 1);
                    let dir = e1.scale(phi.cos()).add(&e2.scale(phi.sin()));
                    g(&base.add(&dir.scale(r * smu)))
                };
                let two_pi = T::of(2.0) * T::PI();
                adaptive_1d(&h, T::zero(), two_pi, rel_tol * T::of(0.25), T::of(1e-300), INNER_BUDGET)
                    .map(|r| r.value / two_pi)
                    .unwrap_or_else(|_| T::nan())
            }
            _ => unreachable!(),
        }
    };
    let geom = Axisym { ball_radius: ball.radius(), offset: T::zero(), dim };
    // Expansion about the center: radial slices never intersect ∂D.
    let _ = geom;
    let area = T::of(unit_sphere_area(dim));
    let sphere_avg = |r: T| -> T {
        match dim {
            2 => {
                let res = adaptive_1d(
                    &|mu: T| avg(r, mu.cos()),
                    T::zero(),
                    T::PI(),
                    rel_tol * T::of(0.25),
                    T::of(1e-300),
                    INNER_BUDGET,
                );
                res.map(|v| v.value / T::PI()).unwrap_or_else(|_| T::nan())
            }
            3 => {
                let res = adaptive_1d(
                    &|mu: T| avg(r, mu),
                    -T::one(),
                    T::one(),
                    rel_tol * T::of(0.25),
                    T::of(1e-300),
                    INNER_BUDGET,
                );
                res.map(|v| v.value * T::of(0.5)).unwrap_or_else(|_| T::nan())
            }
            _ => unreachable!(),
        }
    };
    let h = |r: T| area * r.powf(T::of_usize(dim) - T::one()) * sphere_avg(r);
    let rr = ball.radius();
    let far = rr * T::of(10.0);
    let near = adaptive_1d(&h, rr, far, rel_tol, T::of(1e-300), DEFAULT_BUDGET)?;
    let p_outer = decay_exponent - (T::of_usize(dim) - T::one());
    let tail = adaptive_tail(&h, far, p_outer, rel_tol, T::of(1e-300), DEFAULT_BUDGET)?;
    let value = near.value + tail.value;
    if value.is_nan() {
        return Err(Error::Budget {
            best_estimate: f64::NAN,
            abs_error: f64::NAN,
            evaluations: near.evaluations + tail.evaluations + evals.get(),
        });
    }
    Ok(QuadratureResult {
        value,
        abs_error: near.abs_error + tail.abs_error,
        evaluations: near.evaluations + tail.evaluations + evals.get(),
    })
}

/// Surface integral over ∂D against the (d−1)-dimensional Hausdorff measure.
pub fn integrate_sphere<T: Real, F: Fn(&Point<T>) -> T>(
    h: &F,
    ball: &BallDomain<T>,
    rel_tol: T,
) -> Result<QuadratureResult<T>> {
    let dim = ball.dim();
    let rr = ball.radius();
    let c = *ball.center();
    let evals = Cell::new(0usize);
    match dim {
        2 => {
            let g = |th: T| {
                evals.set(evals.get() + 1);
                let z = c.add(&Point::new(&[rr * th.cos(), rr * th.sin()]));
                h(&z)
            };
            let res = adaptive_1d(
                &g,
                T::zero(),
                T::of(2.0) * T::PI(),
                rel_tol,
                T::of(1e-300),
                DEFAULT_BUDGET,
            )?;
            Ok(QuadratureResult {
                value: rr * res.value,
                abs_error: rr * res.abs_error,
                evaluations: evals.get(),
            })
        }
        3 => {
            let ring = |mu: T| {
                let smu = (T::one() - mu * mu).max(T::zero()).sqrt();
                let g = |phi: T| {
                    evals.set(evals.get() + 1);
                    let z = c.add(&Point::new(&[
                        rr * smu * phi.cos(),
                        rr * smu * phi.sin(),
                        rr * mu,
                    ]));
                    h(&z)
                };
                adaptive_1d(
                    &g,
                    T::zero(),
                    T::of(2.0) * T::PI(),
                    rel_tol * T::of(0.25),
                    T::of(1e-300),
                    INNER_BUDGET,
                )
                .map(|r| r.value)
                .unwrap_or_else(|_| T::nan())
            };
            let res = adaptive_1d(&ring, -T::one(), T::one(), rel_tol, T::of(1e-300), DEFAULT_BUDGET)?;
            if res.value.is_nan() {
                return Err(Error::Budget {
                    best_estimate: f64::NAN,
                    abs_error: f64::NAN,
                    evaluations: evals.get(),
                });
            }
            Ok(QuadratureResult {
                value: rr * rr * res.value,
                abs_error: rr * rr * res.abs_error,
                evaluations: evals.get(),
            })
        }
        _ => unreachable!(),
    }
}

/// Axisymmetric surface integral: h as a function of μ = cos of the polar
/// angle about the last axis.
pub fn integrate_sphere_axisym<T: Real, F: Fn(T) -> T>(
    h: &F,
    ball_radius: T,
    dim: usize,
    rel_tol: T,
    peak_mu: Option<T>,
) -> Result<QuadratureResult<T>> {
    let rr = ball_radius;
    match dim {
        3 => {
            let two_pi = T::of(2.0) * T::PI();
            let mut cuts = vec![-T::one(), T::one()];
            if let Some(p) = peak_mu {
                if p > -T::one() && p < T::one() {
                    cuts.insert(1, p);
                }
            }
            let mut value = T::zero();
            let mut err = T::zero();
            let mut evals = 0usize;
            for w in cuts.windows(2) {
                let res = adaptive_1d(h, w[0], w[1], rel_tol, T::of(1e-300), DEFAULT_BUDGET)?;
                value = value + res.value;
                err = err + res.abs_error;
                evals += res.evaluations;
            }
            Ok(QuadratureResult {
                value: two_pi * rr * rr * value,
                abs_error: two_pi * rr * rr * err,
                evaluations: evals,
            })
        }
        2 => {
            let g = |th: T| h(th.cos());
            let res = adaptive_1d(&g, T::zero(), T::PI(), rel_tol, T::of(1e-300), DEFAULT_BUDGET)?;
            Ok(QuadratureResult {
                value: T::of(2.0) * rr * res.value,
                abs_error: T::of(2.0) * rr * res.abs_error,
                evaluations: res.evaluations,
            })
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_volume_d3() {
        let ball: BallDomain<f64> = BallDomain::unit(3);
        let v = integrate_ball(&|_y| 1.0, &ball, None, 1e-8).unwrap();
        assert!((v.value - 4.0 * PI / 3.0).abs() < 1e-6);
    }

    #[test]
    fn ball_volume_d2() {
        let ball: BallDomain<f64> = BallDomain::unit(2);
        let v = integrate_ball(&|_y| 1.0, &ball, None, 1e-9).unwrap();
        assert!((v.value - PI).abs() < 1e-7);
    }

    #[test]
    fn riesz_singularity_at_interior_point() {
        // ∫_B |y|^{-1} dy = 2π over the unit ball in R³.
        let ball: BallDomain<f64> = BallDomain::unit(3);
        let sing = SingularitySpec::interior(Point::origin(3), 1.0, 3).unwrap();
        let f = |y: &Point<f64>| 1.0 / y.norm();
        let v = integrate_ball(&f, &ball, Some(&sing), 1e-9).unwrap();
        assert!((v.value - 2.0 * PI).abs() < 1e-6, "{}", v.value);
    }

    #[test]
    fn off_center_singularity() {
        // ∫_B |y−p|^{-2} dy is finite for p inside; compare against the
        // axisymmetric reduction evaluated independently.
        let ball: BallDomain<f64> = BallDomain::unit(3);
        let p = Point::new(&[0.0, 0.0, 0.4]);
        let sing = SingularitySpec::interior(p, 2.0, 3).unwrap();
        let f = |y: &Point<f64>| 1.0 / y.sub(&p).norm_sq();
        let v = integrate_ball(&f, &ball, Some(&sing), 1e-8).unwrap();
        let geom = Axisym { ball_radius: 1.0, offset: 0.4, dim: 3 };
        let opts = AxisymOpts::new(1e-10).origin_exponent(2.0);
        let w =
            integrate_ball_axisym(&geom, 0.0, 1.4, &|r: f64, _mu: f64| r.powi(-2), &opts).unwrap();
        assert!((v.value / w.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn boundary_power_profile() {
        // ∫_B δ(y)^{-1/2} dy in d=3: radial closed form 4π ∫_0^1 r²(1−r)^{-1/2} dr
        // = 4π · 16/15.
        let v = integrate_ball_radial(
            &|q: f64| (1.0 - q).powf(-0.5),
            1.0,
            3,
            1e-11,
            0.0,
            0.5,
            200_000,
        )
        .unwrap();
        let expect = 4.0 * PI * 16.0 / 15.0;
        assert!((v.value / expect - 1.0).abs() < 1e-9);

        // Same through the general interface with a boundary singularity hint.
        let ball: BallDomain<f64> = BallDomain::unit(3);
        let sing = SingularitySpec::boundary(0.5, 3);
        let f = |y: &Point<f64>| (1.0 - y.norm()).powf(-0.5);
        let g = integrate_ball(&f, &ball, Some(&sing), 1e-7).unwrap();
        assert!((g.value / expect - 1.0).abs() < 1e-5);
    }

    #[test]
    fn exterior_radial_power() {
        // ∫_{|z|>1} |z|^{-4} dz = 4π in d=3.
        let ball: BallDomain<f64> = BallDomain::unit(3);
        let v = integrate_exterior(&|z: &Point<f64>| z.norm().powi(-4), &ball, 4.0, 1e-9).unwrap();
        assert!((v.value - 4.0 * PI).abs() < 4.0 * PI * 1e-6);
    }

    #[test]
    fn exterior_boundary_layer_blowup() {
        // 4π ∫_1^2 r² (r−1)^{-1/2} dr = 224π/15 for the shell integrand.
        let geom = Axisym { ball_radius: 1.0, offset: 0.0, dim: 3 };
        let opts = AxisymOpts::new(1e-10).boundary_exponent(0.5).delta_band(0.0, 1.0);
        let f = |r: f64, _mu: f64| {
            let d = r - 1.0;
            if d <= 0.0 || d >= 1.0 {
                0.0
            } else {
                d.powf(-0.5)
            }
        };
        let v = integrate_exterior_axisym(&geom, &f, 4.0, &opts).unwrap();
        let expect = 224.0 * PI / 15.0;
        assert!((v.value / expect - 1.0).abs() < 1e-6, "{}", v.value);
    }

    #[test]
    fn exterior_rejects_harmonic_tail() {
        let ball: BallDomain<f64> = BallDomain::unit(3);
        let err = integrate_exterior(&|z: &Point<f64>| z.norm().powi(-3), &ball, 3.0, 1e-6);
        assert!(matches!(err, Err(Error::Divergent(_))));
    }

    #[test]
    fn sphere_areas() {
        let b3: BallDomain<f64> = BallDomain::unit(3);
        let v = integrate_sphere(&|_z| 1.0, &b3, 1e-9).unwrap();
        assert!((v.value - 4.0 * PI).abs() < 1e-6);
        let b2: BallDomain<f64> = BallDomain::unit(2);
        let v = integrate_sphere(&|_z| 1.0, &b2, 1e-10).unwrap();
        assert!((v.value - 2.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn sphere_kernel_near_boundary() {
        // ∫_{∂B} |x−z|^{-d} σ(dz) = 4π/(1−ρ²) at |x| = ρ in d=3 (closed form).
        for &rho in &[0.3, 0.9, 0.999] {
            let h = |mu: f64| {
                let d2 = 1.0 + rho * rho - 2.0 * rho * mu;
                d2.powf(-1.5)
            };
            let v = integrate_sphere_axisym(&h, 1.0, 3, 1e-10, Some(1.0)).unwrap();
            let expect = 4.0 * PI / (1.0 - rho * rho);
            assert!((v.value / expect - 1.0).abs() < 1e-7, "rho={rho}");
        }
    }

    #[test]
    fn axisym_ball_matches_radial_shift() {
        // Radial integrand |y| integrated from an off-center expansion point
        // must match the concentric co-area evaluation.
        let geom = Axisym { ball_radius: 1.0, offset: 0.5, dim: 3 };
        let opts = AxisymOpts::new(1e-10);
        let f = |r: f64, mu: f64| geom.dist_to_center(r, mu);
        let off = integrate_ball_axisym(&geom, 0.0, 1.5, &f, &opts).unwrap();
        let radial =
            integrate_ball_radial(&|q: f64| q, 1.0, 3, 1e-12, 0.0, 0.0, 100_000).unwrap();
        assert!((off.value / radial.value - 1.0).abs() < 1e-7);
    }

    #[test]
    fn axisym_delta_band_volume() {
        // Volume of the shell {0.2 < δ < 0.5} of the unit ball, seen from an
        // off-center point: (4π/3)(0.8³ − 0.5³).
        let geom = Axisym { ball_radius: 1.0, offset: 0.3, dim: 3 };
        let opts = AxisymOpts::new(1e-9).delta_band(0.2, 0.5);
        let v = integrate_ball_axisym(&geom, 0.0, 1.3, &|_r, _mu| 1.0, &opts).unwrap();
        let expect = 4.0 * PI / 3.0 * (0.8f64.powi(3) - 0.5f64.powi(3));
        assert!((v.value / expect - 1.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic_ball_integral() {
        let ball: BallDomain<f64> = BallDomain::unit(3);
        let f = |y: &Point<f64>| (1.0 - y.norm_sq()).sqrt();
        let a = integrate_ball(&f, &ball, None, 1e-8).unwrap();
        let b = integrate_ball(&f, &ball, None, 1e-8).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }
}
