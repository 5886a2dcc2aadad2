use super::assemble::TwistedOperator;
use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::surfmesh::{triangle_vector, SurfaceMesh};
use num_complex::Complex64;
use serde::Serialize;

/// Largest distance from an eigenvalue to the conjugate of its nearest
/// partner in the list.
pub fn conjugation_defect(eigs: &[Complex64]) -> f64 {
    eigs.iter().map(|z| eigs.iter().map(|w| (z - w.conj()).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

/// Structural checks on a twisted spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub lambda0: Complex64,
    /// `Re lambda_1 - Re lambda_0`.
    pub gap: f64,
    pub conjugation_defect: f64,
    pub c: f64,
    /// `-c (1 + c) - tol <= lambda0 <= tol` and `|Im lambda0| <= tol`.
    pub lambda0_in_range: bool,
    pub strip_b: f64,
    pub strip_violations: usize,
    pub max_strip_ratio: f64,
}

pub fn structure_report(spec: &Spectrum, c: f64, b: f64, tol: f64) -> StructureReport {
    let e = &spec.eigenvalues;
    let lambda0 = e[0];
    let gap = if e.len() > 1 { e[1].re - e[0].re } else { f64::INFINITY };
    let h2 = spec.h * spec.h;
    let in_range = lambda0.im.abs() <= tol && lambda0.re >= -h2 * c * (1.0 + c) - tol && lambda0.re <= tol;
    let mut violations = 0;
    let mut ratio: f64 = 0.0;
    for z in e.iter().filter(|z| z.re <= b * h2) {
        let bound = h2 * 2.0 * c * (b + c * c).sqrt();
        if z.im.abs() > bound + tol {
            violations += 1;
        }
        if bound > 0.0 {
            ratio = ratio.max(z.im.abs() / bound);
        }
    }
    StructureReport {
        lambda0,
        gap,
        conjugation_defect: conjugation_defect(e),
        c,
        lambda0_in_range: in_range,
        strip_b: b,
        strip_violations: violations,
        max_strip_ratio: ratio,
    }
}

/// Per-mode comparison of eigenvalues with the quadratic-form identities
/// `Re lambda = int |d phi|^2 - |w|^2 |phi|^2` and
/// `Im lambda = -2i int <w, d phi> conj(phi)`, evaluated triangle by triangle.
#[derive(Debug, Clone, Serialize)]
pub struct RayleighReport {
    pub recomputed: Vec<Complex64>,
    pub re_mismatch: Vec<f64>,
    pub im_mismatch: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Modes whose mismatch exceeds ten times their eigen-residual (with a
    /// floor of `1e-12 (1 + |lambda|)` for rounding).
    pub failures: usize,
}

pub fn verify_rayleigh(spec: &Spectrum, mesh: &SurfaceMesh, omega: &[f64]) -> Result<RayleighReport> {
    let vecs = spec
        .eigenvectors
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("spectrum carries no eigenvectors".into()))?;
    if omega.len() != mesh.num_edges() {
        return Err(Error::DimensionMismatch { expected: mesh.num_edges(), got: omega.len() });
    }
    let h2 = spec.h * spec.h;
    let tri_w: Vec<[f64; 2]> = (0..mesh.num_triangles()).map(|t| triangle_vector(mesh, omega, t)).collect();
    let mut rep = RayleighReport { recomputed: vec![], re_mismatch: vec![], im_mismatch: vec![], residuals: vec![], failures: 0 };
    for (k, v) in vecs.iter().enumerate() {
        let (mut energy, mut pot) = (0.0, 0.0);
        let mut cross = Complex64::new(0.0, 0.0);
        for t in 0..mesh.num_triangles() {
            let vs = mesh.tri_vertices(t);
            let g = &mesh.charts[t].grad;
            let a = mesh.tri_area[t];
            let w = tri_w[t];
            let mut grad = [Complex64::new(0.0, 0.0); 2];
            for i in 0..3 {
                grad[0] += v[vs[i]] * g[i][0];
                grad[1] += v[vs[i]] * g[i][1];
            }
            energy += a * (grad[0].norm_sqr() + grad[1].norm_sqr());
            let wdphi = grad[0] * w[0] + grad[1] * w[1];
            let w2 = w[0] * w[0] + w[1] * w[1];
            for i in 0..3 {
                pot += a / 3.0 * w2 * v[vs[i]].norm_sqr();
                cross += a / 3.0 * wdphi * v[vs[i]].conj();
            }
        }
        let im = -2.0 * Complex64::i() * cross;
        let z = Complex64::new(h2 * (energy - pot), h2 * im.re);
        let lam = spec.eigenvalues[k];
        let (dr, di) = ((z.re - lam.re).abs(), (z.im - lam.im).abs());
        let allowed = (10.0 * spec.residuals[k]).max(1e-12 * (1.0 + lam.norm()));
        if dr > allowed || di > allowed {
            rep.failures += 1;
        }
        rep.recomputed.push(z);
        rep.re_mismatch.push(dr);
        rep.im_mismatch.push(di);
        rep.residuals.push(spec.residuals[k]);
    }
    Ok(rep)
}

/// Norm of `A(-w) - A(w)^T` relative to `A(w)`; zero because the advection
/// is stored skew, and the dropped symmetric part is `op.adjoint_defect`.
pub fn adjoint_defect(op: &TwistedOperator, op_neg: &TwistedOperator) -> f64 {
    let a = op.matrix();
    let at = a.transpose();
    let b = op_neg.matrix();
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for (r, c, v) in b.triplets() {
        num = num.max((v - at.get(r, c)).abs());
        den = den.max(v.abs());
    }
    for (r, c, v) in at.triplets() {
        num = num.max((v - b.get(r, c)).abs());
    }
    num / den.max(f64::MIN_POSITIVE)
}
