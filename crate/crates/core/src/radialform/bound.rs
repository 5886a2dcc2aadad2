use super::average::{averaged_operator_apply_many, mu_factor, pointwise_form, PROBE_RADIUS};
use super::primitive::PrimitiveField;
use crate::error::Result;
use crate::fuchsian::{max_loop_count, systole};
use crate::surfmesh::SurfaceMesh;
use crate::Point;
use rayon::prelude::*;
use serde::Serialize;

/// Node count of the circle used for `w_x`.
pub const PROBE_NODES: usize = 1024;

/// One sample point of a radial check.
#[derive(Debug, Clone, Serialize)]
pub struct RadialSample {
    pub x: f64,
    pub y: f64,
    pub form: usize,
    pub df: [f64; 2],
    pub omega: [f64; 2],
    pub df_norm: f64,
    /// `mu_t |w|_x`.
    pub mu_omega: f64,
    /// `|dF - mu_t w_x| / (mu_t |w|_x)`.
    pub relative_error: f64,
    /// `|dF|_x / (mu_t |w|_x)`.
    pub ratio: f64,
    /// `sqrt(2 pi (4 t n / Inj + 2)) ||w||_2`.
    pub bound: f64,
    pub pass: bool,
}

/// Eigen-identity and sup-norm bound over sample points.
#[derive(Debug, Clone, Serialize)]
pub struct RadialReport {
    pub t: f64,
    pub level: usize,
    pub quad_level: usize,
    pub mu: f64,
    pub injectivity: f64,
    /// Measured `N_{2t}`: the most primitive loops of length `<= 2t` at a sample point.
    pub loop_count: usize,
    /// `sqrt(2 pi (4 t n / Inj + 2))`.
    pub bound_constant: f64,
    pub samples: Vec<RadialSample>,
    pub max_relative_error: f64,
    pub bound_violations: usize,
    /// Largest `|w|_x / ||w||_2` over samples and forms.
    pub implied_sup_ratio: f64,
    /// `bound_constant / mu`, the ratio the bound allows.
    pub allowed_sup_ratio: f64,
}

/// Evaluates `dF_x` and `w_x` for every field at every point and checks
/// `|dF|_x <= sqrt(2 pi (4 t n / Inj + 2)) ||w||_2`, with `n` the loop count
/// measured at the same points. `l2_norms[k]` is the L2 norm of field `k`.
pub fn supnorm_bound_check(
    mesh: &SurfaceMesh,
    fields: &[&PrimitiveField],
    l2_norms: &[f64],
    t: f64,
    points: &[Point],
    quad_level: usize,
) -> Result<RadialReport> {
    let gens = &mesh.group;
    let injectivity = 0.5 * systole(gens, 3.0)?;
    let loop_count = max_loop_count(gens, 2.0 * t, points)?;
    let bound_constant = (2.0 * std::f64::consts::PI * (4.0 * t * loop_count as f64 / injectivity + 2.0)).sqrt();
    let mu = mu_factor(t);
    let per_point: Vec<Result<Vec<RadialSample>>> = points
        .par_iter()
        .map(|p| {
            let df = averaged_operator_apply_many(mesh, fields, p, t, quad_level, 0.0)?;
            Ok(fields
                .iter()
                .zip(&df)
                .enumerate()
                .map(|(k, (f, d))| {
                    let omega = pointwise_form(mesh, f, p, PROBE_RADIUS, PROBE_NODES, 0.0);
                    let df_norm = d[0].hypot(d[1]);
                    let mu_omega = mu * omega[0].hypot(omega[1]);
                    let err = (d[0] - mu * omega[0]).hypot(d[1] - mu * omega[1]);
                    let bound = bound_constant * l2_norms[k];
                    let safe = |a: f64, b: f64| if b > 0.0 { a / b } else if a == 0.0 { 0.0 } else { f64::INFINITY };
                    RadialSample {
                        x: p.x(),
                        y: p.y(),
                        form: k,
                        df: *d,
                        omega,
                        df_norm,
                        mu_omega,
                        relative_error: safe(err, mu_omega),
                        ratio: safe(df_norm, mu_omega),
                        bound,
                        pass: df_norm <= bound,
                    }
                })
                .collect())
        })
        .collect();
    let mut samples = Vec::new();
    for r in per_point {
        samples.extend(r?);
    }
    let max_relative_error = samples.iter().map(|s| s.relative_error).fold(0.0, f64::max);
    let bound_violations = samples.iter().filter(|s| !s.pass).count();
    let implied_sup_ratio = samples
        .iter()
        .filter(|s| l2_norms[s.form] > 0.0)
        .map(|s| s.mu_omega / mu / l2_norms[s.form])
        .fold(0.0, f64::max);
    Ok(RadialReport {
        t,
        level: mesh.level,
        quad_level,
        mu,
        injectivity,
        loop_count,
        bound_constant,
        samples,
        max_relative_error,
        bound_violations,
        implied_sup_ratio,
        allowed_sup_ratio: bound_constant / mu,
    })
}
