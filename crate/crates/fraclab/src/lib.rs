//! A numerical laboratory for the semilinear Dirichlet problem of the
//! fractional Laplacian on balls: closed-form kernels of the killed α-stable
//! process, potential operators, empirical audits of sharp two-sided
//! estimates, existence/nonexistence integral criteria, monotone and Picard
//! solvers for the semilinear problem, boundary trace operators, and an
//! independent walk-on-spheres Monte Carlo oracle.
//!
//! All numerics are generic over the scalar type through [`real::Real`];
//! the `f64` instantiations are aliased at the crate root.

pub mod error;

pub mod geom;
pub mod kernels;
pub mod levy;


pub mod quad;
pub mod real;

pub mod special;


pub use error::{Error, Result};
pub use real::Real;

/// Default scalar used by the command-line tools and most tests.
pub type Scalar = f64;

pub type Point = geom::Point<Scalar>;
pub type BallDomain = geom::BallDomain<Scalar>;
pub type StableModel = levy::StableModel<Scalar>;




pub type QuadratureResult = quad::QuadratureResult<Scalar>;



