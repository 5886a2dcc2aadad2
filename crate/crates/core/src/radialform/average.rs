use super::primitive::{lift_point, PrimitiveField};
use crate::error::{Error, Result};
use crate::fuchsian::DEFAULT_RADIUS_CAP;
use crate::quad::gauss_legendre;
use crate::real::Real;
use crate::surfmesh::SurfaceMesh;
use crate::{Moebius, Point};
use std::f64::consts::PI;

/// Geodesic step of the finite-difference stencil.
pub const STENCIL_STEP: f64 = 1e-3;

/// Default quadrature level for the ball integrals.
pub const DEFAULT_RADIAL_QUAD_LEVEL: usize = 1;

/// `2 pi (cosh t - 1) / sqrt(cosh t)`: total mass of the kernel
/// `K_t(rho) = 1{rho < t} / sqrt(cosh t)`.
pub fn mu_factor<T: Real>(t: T) -> T {
    let c = t.cosh();
    T::TAU() * (c - T::one()) / c.sqrt()
}

/// The same mass by Gauss-Legendre quadrature of `2 pi int_0^t K_t sinh`.
pub fn kernel_mass_quadrature(t: f64, nodes: usize) -> f64 {
    let (x, w) = gauss_legendre::<f64>(nodes);
    let half = 0.5 * t;
    let s: f64 = x.iter().zip(&w).map(|(x, w)| w * (half * (x + 1.0)).sinh()).sum();
    2.0 * PI * half * s / t.cosh().sqrt()
}

/// The point at distance `rho` from `x` in direction `theta`, with angles
/// measured counterclockwise from the upward vertical.
pub fn exp_at(x: &Point, rho: f64, theta: f64) -> Point {
    Moebius::to_point(x).apply(&Point::polar_at_i(rho, theta))
}

/// Polar product rule on `B(x, t)`: Gauss-Legendre in the radius and the
/// offset trapezoid rule on each circle, with circle node counts growing
/// with the circumference.
#[derive(Debug, Clone)]
pub struct BallRule {
    pub t: f64,
    /// `(rho, theta, weight)` with weights summing to `Vol(B(x, t))`.
    pub nodes: Vec<(f64, f64, f64)>,
}

impl BallRule {
    pub fn new(t: f64, quad_level: usize) -> Self {
        let scale = (1usize << quad_level) as f64;
        let nr = (8.0 * scale * t.max(0.25)).ceil() as usize;
        let (x, w) = gauss_legendre::<f64>(nr);
        let half = 0.5 * t;
        let mut nodes = Vec::new();
        for (x, w) in x.iter().zip(&w) {
            let rho = half * (x + 1.0);
            let m = ((2.0 * PI * rho.sinh() * 40.0 * scale).ceil() as usize).max(16);
            let wt = half * w * rho.sinh() * 2.0 * PI / m as f64;
            for k in 0..m {
                nodes.push((rho, 2.0 * PI * (k as f64 + 0.5) / m as f64, wt));
            }
        }
        Self { t, nodes }
    }

    pub fn volume(&self) -> f64 {
        self.nodes.iter().map(|n| n.2).sum()
    }
}

/// `F(x) = int K_t(d(x, y)) f(y) dy` for each field, with `f` the lift of the primitive.
pub fn averaged_primitive(mesh: &SurfaceMesh, fields: &[&PrimitiveField], x: &Point, rule: &BallRule) -> Vec<f64> {
    let k = 1.0 / rule.t.cosh().sqrt();
    let mut acc = vec![0.0; fields.len()];
    for &(rho, theta, w) in &rule.nodes {
        let p = lift_point(mesh, &exp_at(x, rho, theta));
        for (a, f) in acc.iter_mut().zip(fields) {
            *a += w * f.lifted_value(mesh, &p);
        }
    }
    acc.iter().map(|a| k * a).collect()
}

/// `dF_x` in the orthonormal frame at `x` given by the directions `0` and
/// `pi / 2` (see [`exp_at`]), by central differences of step [`STENCIL_STEP`].
pub fn averaged_operator_apply(
    mesh: &SurfaceMesh,
    field: &PrimitiveField,
    x: &Point,
    t: f64,
    quad_level: usize,
) -> Result<[f64; 2]> {
    Ok(averaged_operator_apply_many(mesh, &[field], x, t, quad_level, 0.0)?[0])
}

/// [`averaged_operator_apply`] for several fields at once, in the frame
/// rotated by `frame`.
pub fn averaged_operator_apply_many(
    mesh: &SurfaceMesh,
    fields: &[&PrimitiveField],
    x: &Point,
    t: f64,
    quad_level: usize,
    frame: f64,
) -> Result<Vec<[f64; 2]>> {
    check_radius(t)?;
    let rule = BallRule::new(t, quad_level);
    let eps = STENCIL_STEP;
    let mut out = vec![[0.0; 2]; fields.len()];
    for dir in 0..2 {
        let theta = frame + 0.5 * PI * dir as f64;
        let plus = averaged_primitive(mesh, fields, &exp_at(x, eps, theta), &rule);
        let minus = averaged_primitive(mesh, fields, &exp_at(x, -eps, theta), &rule);
        for (o, (p, m)) in out.iter_mut().zip(plus.iter().zip(&minus)) {
            o[dir] = (p - m) / (2.0 * eps);
        }
    }
    Ok(out)
}

fn check_radius(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("averaging radius must be positive, got {t}")));
    }
    if t > DEFAULT_RADIUS_CAP {
        return Err(Error::EnumerationCap { requested: t, cap: DEFAULT_RADIUS_CAP, found: 0 });
    }
    Ok(())
}

/// Mean of the lifted primitive over the circle of radius `rho` about `x`.
pub fn circle_average(mesh: &SurfaceMesh, field: &PrimitiveField, x: &Point, rho: f64, nodes: usize) -> f64 {
    let s: f64 = (0..nodes)
        .map(|k| field.value(mesh, &exp_at(x, rho, 2.0 * PI * (k as f64 + 0.5) / nodes as f64)))
        .sum();
    s / nodes as f64
}

/// Radius of the circle used by [`pointwise_form`].
pub const PROBE_RADIUS: f64 = 1.0;

/// `w_x` in the frame of [`averaged_operator_apply`], from the first
/// Fourier mode of the primitive on a circle about `x`. In the disk model
/// centered at `x` a harmonic function has no other degree-one part, and the
/// metric there is twice the Euclidean one.
pub fn pointwise_form(mesh: &SurfaceMesh, field: &PrimitiveField, x: &Point, rho: f64, nodes: usize, frame: f64) -> [f64; 2] {
    let (mut a, mut b) = (0.0, 0.0);
    for k in 0..nodes {
        let th = 2.0 * PI * (k as f64 + 0.5) / nodes as f64;
        let v = field.value(mesh, &exp_at(x, rho, frame + th));
        a += v * th.cos();
        b += v * th.sin();
    }
    let s = (0.5 * rho).tanh();
    let norm = 2.0 / nodes as f64 / s;
    [0.5 * a * norm, 0.5 * b * norm]
}
