use crate::error::{Error, Result};
use crate::real::Real;

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint<T> {
    x: T,
    y: T,
}

impl<T: Real> HPoint<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidPoint(format!("non-finite coordinates ({x}, {y})")));
        }
        if y <= T::zero() {
            return Err(Error::InvalidPoint(format!("imaginary part {y} is not positive")));
        }
        Ok(Self { x, y })
    }

    /// The point `i`, used throughout as the base point.
    pub fn i() -> Self {
        Self { x: T::zero(), y: T::one() }
    }

    pub(crate) fn new_unchecked(x: T, y: T) -> Self {
        debug_assert!(y > T::zero());
        Self { x, y }
    }

    #[inline]
    pub fn x(&self) -> T {
        self.x
    }

    #[inline]
    pub fn y(&self) -> T {
        self.y
    }

    /// Image of a disk-model point `u + iv` (|w| < 1) under `w -> i(1+w)/(1-w)`.
    pub fn from_disk(u: T, v: T) -> Result<Self> {
        let one = T::one();
        let den = (one - u) * (one - u) + v * v;
        let r2 = u * u + v * v;
        if r2 >= one {
            return Err(Error::InvalidPoint(format!("disk point ({u}, {v}) outside the unit disk")));
        }
        Self::new(T::lit(-2.0) * v / den, (one - r2) / den)
    }

    /// Disk-model coordinates `(z - i)/(z + i)`.
    pub fn to_disk(&self) -> (T, T) {
        let den = self.x * self.x + (self.y + T::one()) * (self.y + T::one());
        let re = (self.x * self.x + self.y * self.y - T::one()) / den;
        let im = T::lit(-2.0) * self.x / den;
        (re, im)
    }

    /// The point at distance `rho` from `i` in direction `theta`; angles are
    /// measured counterclockwise from the upward vertical at `i`.
    pub fn polar_at_i(rho: T, theta: T) -> Self {
        let r = (rho * T::lit(0.5)).tanh();
        let (s, c) = theta.sin_cos();
        Self::from_disk(r * c, r * s).expect("polar radius is finite")
    }

    /// Hyperboloid coordinates `(X0, X1, X2)` with `X0^2 - X1^2 - X2^2 = 1`.
    pub fn to_hyperboloid(&self) -> [T; 3] {
        let two = T::lit(2.0);
        let n = self.x * self.x + self.y * self.y;
        [(n + T::one()) / (two * self.y), (n - T::one()) / (two * self.y), self.x / self.y]
    }

    /// Inverse of [`to_hyperboloid`](Self::to_hyperboloid); the input is
    /// rescaled onto the upper sheet first, so any timelike future vector works.
    pub fn from_hyperboloid(v: [T; 3]) -> Self {
        let q = (v[0] * v[0] - v[1] * v[1] - v[2] * v[2]).sqrt();
        let w = [v[0] / q, v[1] / q, v[2] / q];
        let y = T::one() / (w[0] - w[1]);
        Self::new_unchecked(w[2] * y, y)
    }
}

/// `cosh` of the hyperbolic distance.
#[inline]
pub fn cosh_distance<T: Real>(z: &HPoint<T>, w: &HPoint<T>) -> T {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    T::one() + (dx * dx + dy * dy) / (T::lit(2.0) * z.y * w.y)
}

/// Hyperbolic distance, evaluated as `2 asinh(|z - w| / (2 sqrt(Im z Im w)))`
/// which keeps full relative accuracy for nearby points.
#[inline]
pub fn hyp_distance<T: Real>(z: &HPoint<T>, w: &HPoint<T>) -> T {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    let e = (dx * dx + dy * dy).sqrt() / (T::lit(2.0) * (z.y * w.y).sqrt());
    T::lit(2.0) * e.asinh()
}

/// Minkowski form `X0 Y0 - X1 Y1 - X2 Y2`.
#[inline]
pub fn minkowski<T: Real>(a: &[T; 3], b: &[T; 3]) -> T {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2]
}

/// Geodesic midpoint.
pub fn midpoint<T: Real>(z: &HPoint<T>, w: &HPoint<T>) -> HPoint<T> {
    let a = z.to_hyperboloid();
    let b = w.to_hyperboloid();
    HPoint::from_hyperboloid([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
}

/// Area of a ball of radius `r` in the hyperbolic plane.
pub fn ball_area<T: Real>(r: T) -> T {
    T::lit(2.0) * T::PI() * (r.cosh() - T::one())
}
