//! Points in R^d (d = 2, 3) and the ball domain with its interior/exterior
//! distance functions.

use crate::error::{Error, Result};
use crate::real::Real;

/// A point in R^d for d ≤ 3; unused coordinates stay zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point<T> {
    coords: [T; 3],
    dim: usize,
}

impl<T: Real> Point<T> {
    pub fn new(coords: &[T]) -> Self {
        assert!(
            coords.len() == 2 || coords.len() == 3,
            "only d = 2, 3 supported"
        );
        let mut c = [T::zero(); 3];
        c[..coords.len()].copy_from_slice(coords);
        Point {
            coords: c,
            dim: coords.len(),
        }
    }

    pub fn origin(dim: usize) -> Self {
        Self::new(&vec![T::zero(); dim])
    }

    /// Point at distance `r` from the origin along the last coordinate axis.
    pub fn on_axis(dim: usize, r: T) -> Self {
        let mut c = vec![T::zero(); dim];
        c[dim - 1] = r;
        Self::new(&c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[T] {
        &self.coords[..self.dim]
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn norm_sq(&self) -> T {
        self.coords[..self.dim]
            .iter()
            .map(|&c| c * c)
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn dist(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim, other.dim);
        let mut s = T::zero();
        for i in 0..self.dim {
            let d = self.coords[i] - other.coords[i];
            s = s + d * d;
        }
        s.sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut c = self.coords;
        for i in 0..self.dim {
            c[i] = c[i] + other.coords[i];
        }
        Point { coords: c, dim: self.dim }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut c = self.coords;
        for i in 0..self.dim {
            c[i] = c[i] - other.coords[i];
        }
        Point { coords: c, dim: self.dim }
    }

    pub fn scale(&self, s: T) -> Self {
        let mut c = self.coords;
        for x in &mut c {
            *x = *x * s;
        }
        Point { coords: c, dim: self.dim }
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim, other.dim);
        let mut s = T::zero();
        for i in 0..self.dim {
            s = s + self.coords[i] * other.coords[i];
        }
        s
    }

    pub fn is_finite(&self) -> bool {
        self.coords[..self.dim].iter().all(|c| c.is_finite())
    }
}

/// Ball domain D = B(center, radius) in R^d.
#[derive(Clone, Debug)]
pub struct BallDomain<T> {
    center: Point<T>,
    radius: T,
    dim: usize,
}

impl<T: Real> BallDomain<T> {
    pub fn new(center: Point<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::Domain(format!(
                "ball radius must be positive and finite, got {}",
                radius.lossy()
            )));
        }
        if !center.is_finite() {
            return Err(Error::Domain("ball center must be finite".into()));
        }
        Ok(BallDomain { dim: center.dim(), center, radius })
    }

    /// Unit ball centered at the origin.
    pub fn unit(dim: usize) -> Self {
        Self::new(Point::origin(dim), T::one()).expect("unit ball")
    }

    pub fn center(&self) -> &Point<T> {
        &self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diameter(&self) -> T {
        self.radius + self.radius
    }

    /// δ_D(x) = radius − |x − center|; positive strictly inside.
    pub fn delta_in(&self, x: &Point<T>) -> T {
        self.radius - self.center.dist(x)
    }

    /// δ_{D^c}(z) = |z − center| − radius; positive strictly outside.
    pub fn delta_out(&self, z: &Point<T>) -> T {
        self.center.dist(z) - self.radius
    }

    pub fn contains(&self, x: &Point<T>) -> bool {
        self.delta_in(x) > T::zero()
    }

    /// Relative tolerance used to classify points as lying on ∂D.
    pub fn boundary_tol(&self) -> T {
        self.radius * T::of(1e-12)
    }

    pub fn is_boundary(&self, x: &Point<T>) -> bool {
        self.delta_in(x).abs() <= self.boundary_tol()
    }

    /// Interior point at distance `delta` from the boundary on the last axis.
    pub fn interior_at_delta(&self, delta: T) -> Point<T> {
        self.center
            .add(&Point::on_axis(self.dim, self.radius - delta))
    }

    /// Exterior point at distance `delta` from the boundary on the last axis.
    pub fn exterior_at_delta(&self, delta: T) -> Point<T> {
        self.center
            .add(&Point::on_axis(self.dim, self.radius + delta))
    }

    /// Boundary point on the last coordinate axis.
    pub fn boundary_point(&self) -> Point<T> {
        self.center.add(&Point::on_axis(self.dim, self.radius))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances() {
        let b: BallDomain<f64> = BallDomain::unit(3);
        let x = Point::new(&[0.0, 0.0, 0.25]);
        assert!((b.delta_in(&x) - 0.75).abs() < 1e-15);
        let z = Point::new(&[0.0, 0.0, 2.0]);
        assert!((b.delta_out(&z) - 1.0).abs() < 1e-15);
        assert!(b.contains(&x) && !b.contains(&z));
    }

    #[test]
    fn rejects_bad_radius() {
        let c: Point<f64> = Point::origin(2);
        assert!(BallDomain::new(c, 0.0).is_err());
        assert!(BallDomain::new(c, -1.0).is_err());
    }

    #[test]
    fn axis_helpers_land_where_expected() {
        let b: BallDomain<f64> = BallDomain::new(Point::new(&[1.0, 2.0]), 2.0).unwrap();
        let x = b.interior_at_delta(0.5);
        assert!((b.delta_in(&x) - 0.5).abs() < 1e-15);
        let z = b.exterior_at_delta(0.5);
        assert!((b.delta_out(&z) - 0.5).abs() < 1e-15);
        assert!(b.is_boundary(&b.boundary_point()));
    }
}
