use super::point::HPoint;
use crate::error::{Error, Result};
use crate::real::Real;
use std::ops::Mul;

/// An orientation-preserving isometry `z -> (az + b)/(cz + d)` with `ad - bc = 1`,
/// stored with its first nonzero entry positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap<T> {
    m: [T; 4],
}

impl<T: Real> MoebiusMap<T> {
    /// Normalizes `(a, b, c, d)` to unit determinant and canonical sign.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > T::zero()) || !det.is_finite() {
            return Err(Error::InvalidArgument(format!("matrix determinant {det} is not positive")));
        }
        let s = det.sqrt();
        Ok(Self::canonical([a / s, b / s, c / s, d / s]))
    }

    fn canonical(m: [T; 4]) -> Self {
        let lead = m.iter().copied().find(|v| *v != T::zero()).unwrap_or(T::one());
        if lead < T::zero() {
            Self { m: [-m[0], -m[1], -m[2], -m[3]] }
        } else {
            Self { m }
        }
    }

    pub fn identity() -> Self {
        Self { m: [T::one(), T::zero(), T::zero(), T::one()] }
    }

    /// `z -> z + b`.
    pub fn translation(b: T) -> Self {
        Self { m: [T::one(), b, T::zero(), T::one()] }
    }

    /// `z -> lambda z` for `lambda > 0`.
    pub fn dilation(lambda: T) -> Self {
        let s = lambda.sqrt();
        Self { m: [s, T::zero(), T::zero(), T::one() / s] }
    }

    /// Rotation about `i` by `alpha`, counterclockwise.
    pub fn rotation_about_i(alpha: T) -> Self {
        let (s, c) = (alpha * T::lit(0.5)).sin_cos();
        Self::canonical([c, s, -s, c])
    }

    /// The map `z -> Re(p) + Im(p) z`, sending `i` to `p`.
    pub fn to_point(p: &HPoint<T>) -> Self {
        let s = p.y().sqrt();
        Self { m: [s, p.x() / s, T::zero(), T::one() / s] }
    }

    /// Hyperbolic translation by `len` along the geodesic through `i` leaving in
    /// direction `theta` (counterclockwise from the upward vertical).
    pub fn translation_from_i(theta: T, len: T) -> Self {
        let r = Self::rotation_about_i(theta);
        r * Self::dilation(len.exp()) * r.inverse()
    }

    #[inline]
    pub fn entries(&self) -> [T; 4] {
        self.m
    }

    #[inline]
    pub fn trace(&self) -> T {
        self.m[0] + self.m[3]
    }

    pub fn det(&self) -> T {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self::canonical([d, -b, -c, a])
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > T::lit(2.0)
    }

    #[inline]
    pub fn apply(&self, z: &HPoint<T>) -> HPoint<T> {
        mobius_apply(self, z)
    }

    /// Largest entrywise difference, minimized over the sign ambiguity.
    pub fn distance_to(&self, other: &Self) -> T {
        let mut plus = T::zero();
        let mut minus = T::zero();
        for k in 0..4 {
            plus = plus.max((self.m[k] - other.m[k]).abs());
            minus = minus.max((self.m[k] + other.m[k]).abs());
        }
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.distance_to(other) <= tol
    }

    /// `cosh d(i, g i)`, which equals half the squared Frobenius norm.
    pub fn cosh_displacement_at_i(&self) -> T {
        let [a, b, c, d] = self.m;
        (a * a + b * b + c * c + d * d) * T::lit(0.5)
    }
}

impl<T: Real> Mul for MoebiusMap<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        Self::canonical([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

/// `(az + b)/(cz + d)` in complex arithmetic.
#[inline]
pub fn mobius_apply<T: Real>(m: &MoebiusMap<T>, z: &HPoint<T>) -> HPoint<T> {
    let [a, b, c, d] = m.m;
    let (x, y) = (z.x(), z.y());
    let nr = a * x + b;
    let ni = a * y;
    let dr = c * x + d;
    let di = c * y;
    let den = dr * dr + di * di;
    let re = (nr * dr + ni * di) / den;
    // Im((az+b)/(cz+d)) = y (ad - bc) / |cz+d|^2; this form never loses the sign.
    let im = y / den;
    HPoint::new_unchecked(re, im)
}

/// Translation length `2 arccosh(|tr| / 2)` of a hyperbolic element.
pub fn translation_length<T: Real>(m: &MoebiusMap<T>) -> Result<T> {
    let tr = m.trace().abs();
    if tr <= T::lit(2.0) {
        return Err(Error::NotHyperbolic { trace: tr.as_f64() });
    }
    Ok(T::lit(2.0) * (tr * T::lit(0.5)).acosh())
}
