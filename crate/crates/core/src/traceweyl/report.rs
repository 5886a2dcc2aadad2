use super::trace::{geometric_side, spectral_side, topological_term, GeometricOptions, GeometricSide};
use crate::error::Result;
use crate::fuchsian::bolza_group;
use crate::surfmesh::{combine, exterior_calculus, harmonic_basis, SurfaceMesh};
use crate::twistedop::{assemble_twisted, compute_spectrum, Spectrum, SpectrumOptions};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub t: f64,
    pub level: usize,
    pub periods: [f64; 4],
    pub spectral_side: f64,
    /// Imaginary part of the eigenvalue sum; zero up to rounding.
    pub spectral_imag: f64,
    /// Weyl-density estimate of the unresolved spectral tail (not included).
    pub spectral_tail: f64,
    pub topological_term: f64,
    pub geometric_term: f64,
    pub truncation_radius: f64,
    /// Shell-bound estimate of the truncated geometric terms (not included).
    pub tail_estimate: f64,
    pub geometric_elements: usize,
    /// `spectral - topological - geometric`.
    pub residual: f64,
    pub relative_residual: f64,
}

/// Full dense spectrum of `-Delta_w` for the form with the given periods.
pub fn twisted_spectrum(level: usize, periods: &[f64; 4]) -> Result<(Spectrum, f64)> {
    let mesh = SurfaceMesh::build(level)?;
    let ext = exterior_calculus(&mesh);
    let basis = harmonic_basis(&mesh, &ext)?;
    let omega = combine(&basis, periods);
    let op = assemble_twisted(&mesh, &omega, 1.0)?;
    let spec = compute_spectrum(&op, op.dim(), &SpectrumOptions::default())?;
    Ok((spec, op.linf))
}

pub fn trace_report(t: f64, periods: &[f64; 4], spec: &Spectrum, geo: &GeometricSide) -> Result<TraceReport> {
    let vol = 4.0 * PI;
    let cut = spec.eigenvalues.last().map(|z| z.re).unwrap_or(0.0);
    let (s, im, tail) = spectral_side(spec, t, vol, cut)?;
    let topo = topological_term(vol, t)?;
    let residual = s - topo - geo.value;
    Ok(TraceReport {
        t,
        level: spec.level,
        periods: *periods,
        spectral_side: s,
        spectral_imag: im,
        spectral_tail: tail,
        topological_term: topo,
        geometric_term: geo.value,
        truncation_radius: geo.truncation_radius,
        tail_estimate: geo.tail_estimate,
        geometric_elements: geo.elements,
        residual,
        relative_residual: residual.abs() / s.abs(),
    })
}

/// Both sides of the heat-trace identity at one mesh level.
pub fn trace_residual(level: usize, periods: &[f64; 4], t: f64, opts: &GeometricOptions) -> Result<TraceReport> {
    let (spec, linf) = twisted_spectrum(level, periods)?;
    let gens = bolza_group::<f64>();
    let opts = GeometricOptions { form_linf: opts.form_linf.max(1.1 * linf), ..*opts };
    let geo = geometric_side(&gens, periods, t, &opts)?;
    trace_report(t, periods, &spec, &geo)
}
