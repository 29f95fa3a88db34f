//! Angular averages over spheres: for g a function of distance,
//! ring_integral computes ∫_{S^{d−1}} g(|r ω − ρ e|) σ(dω), the integral of g
//! over all directions at radius r seen from a point at distance ρ on the
//! axis. Off-center ball and annulus integrals of radial-about-a-point
//! integrands reduce to these one-dimensional forms.

use crate::error::Result;
use crate::real::Real;
use crate::special::unit_sphere_area;

use super::adaptive::adaptive;

/// ∫_{S^{d−1}} g(|r ω − ρ e|) σ(dω) with σ the surface measure of the unit
/// sphere (total mass 2π for d = 2, 4π for d = 3). Distances span
/// [|r − ρ|, r + ρ].
pub fn ring_integral<T: Real, F: Fn(T) -> T>(
    g: &F,
    r: T,
    rho: T,
    dim: usize,
    rel_tol: T,
    budget: usize,
) -> Result<T> {
    debug_assert!(r >= T::zero() && rho >= T::zero());
    let prod = r * rho;
    if prod <= T::of(1e-300) {
        // Concentric: all points at the same distance.
        let d = (r * r + rho * rho).sqrt();
        return Ok(T::of(unit_sphere_area(dim)) * g(d));
    }
    match dim {
        3 => {
            // (2π/(rρ)) ∫_{|r−ρ|}^{r+ρ} u g(u) du.
            let lo = (r - rho).abs();
            let hi = r + rho;
            let res = adaptive(&|u: T| u * g(u), lo, hi, rel_tol, T::of(1e-300), budget)?;
            Ok(T::of(2.0) * T::PI() / prod * res.value)
        }
        2 => {
            // u(ψ)² = (r−ρ)² cos²ψ + (r+ρ)² sin²ψ turns the endpoint
            // square-root weights into 4 ∫_0^{π/2} g(u(ψ)) dψ.
            let b = (r - rho).abs();
            let a = r + rho;
            let f = |psi: T| {
                let (s, c) = psi.sin_cos();
                let u = ((b * c) * (b * c) + (a * s) * (a * s)).sqrt();
                g(u)
            };
            let res = adaptive(
                &f,
                T::zero(),
                T::of(std::f64::consts::FRAC_PI_2),
                rel_tol,
                T::of(1e-300),
                budget,
            )?;
            Ok(T::of(4.0) * res.value)
        }
        _ => unreachable!("dimension restricted to 2 or 3 at model construction"),
    }
}
