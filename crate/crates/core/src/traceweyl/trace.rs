use crate::error::{Error, Result};
use crate::fuchsian::{abelian_period, GeneratorSet, OrbitTree};
use crate::hgeom::{ln_heat_kernel, polygon_quadrature, HeatKernelTable};
use crate::quad::{integrate, Tolerance};
use crate::twistedop::Spectrum;
use crate::Point;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// `(Vol / 4 pi) int_R e^{-t (1/4 + r^2)} r tanh(pi r) dr`.
pub fn topological_term(vol: f64, t: f64) -> Result<f64> {
    if !(vol > 0.0) || !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("topological term needs vol, t > 0 (vol={vol}, t={t})")));
    }
    let f = |r: f64| (-t * (0.25 + r * r)).exp() * r * (PI * r).tanh();
    // the integrand is below 1e-18 of its peak past this point
    let peak_r = (0.5 / t).sqrt();
    let rmax = peak_r + ((41.5 + 0.5 * (1.0 + 1.0 / t).ln().max(0.0)) / t).sqrt() + 1.0;
    let v = integrate(f, 0.0, rmax, Tolerance::new(0.0, 1e-12))?;
    Ok(vol / (4.0 * PI) * 2.0 * v.value)
}

/// `(sum_j e^{-t lambda_j}, tail)` over a spectrum. The tail is the
/// Weyl-density mass `(Vol/4 pi) int_cut^inf e^{-t l} dl` above the
/// largest resolved real part; it is reported, never added.
pub fn spectral_side(spec: &Spectrum, t: f64, vol: f64, cut: f64) -> Result<(f64, f64, f64)> {
    let l0 = spec.eigenvalues.first().map(|z| z.re).unwrap_or(f64::INFINITY);
    if cut < l0 {
        return Err(Error::InvalidArgument(format!("cutoff {cut} lies below the principal eigenvalue {l0}")));
    }
    let mut sum = num_complex::Complex64::new(0.0, 0.0);
    for z in spec.eigenvalues.iter().filter(|z| z.re <= cut) {
        sum += (-t * z).exp();
    }
    let tail = vol / (4.0 * PI) * (-t * cut).exp() / t;
    Ok((sum.re, sum.im, tail))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricOptions {
    /// Subdivision level of the fine node set on the octagon.
    pub quad_level: usize,
    /// Target for the truncation tail bound.
    pub tail_tol: f64,
    /// Hard cap on the enumeration radius.
    pub radius_cap: f64,
    /// Sup norm of the form, bounding `|int_g w| <= c d(x, g x)`.
    pub form_linf: f64,
    /// Injectivity radius lower bound used in the shell counts.
    pub injectivity: f64,
}

impl Default for GeometricOptions {
    fn default() -> Self {
        Self { quad_level: 5, tail_tol: 1e-8, radius_cap: 16.0, form_linf: 0.0, injectivity: (1.0 + 2f64.sqrt()).acosh() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometricSide {
    pub value: f64,
    pub truncation_radius: f64,
    pub tail_estimate: f64,
    pub elements: usize,
    pub nodes: usize,
}

/// Bound on the truncated terms, `Vol(D) sum_{d(x, g x) > R} e^{c d} k(t, d)`.
/// Disjoint balls of radius `r_g` about the orbit give
/// `#{g : d(x, g x) <= r} <= B(r) = (cosh(r + r_g) - 1) / (cosh(r_g) - 1)`,
/// and integrating by parts against the decreasing weight `f = e^{c r} k`
/// bounds the sum by `int_R^inf B(r) (-f'(r)) dr`.
pub fn truncation_tail(t: f64, r: f64, opts: &GeometricOptions) -> Result<f64> {
    let rg = opts.injectivity;
    let c = opts.form_linf;
    let ball = |x: f64| ((x + rg).cosh() - 1.0) / (rg.cosh() - 1.0);
    let mut failure = None;
    let mut f = |x: f64| -> f64 {
        let eps = 1e-4;
        match (ln_heat_kernel(t, x), ln_heat_kernel(t, x - eps), ln_heat_kernel(t, x + eps)) {
            (Ok(l), Ok(lm), Ok(lp)) => {
                let slope = -((lp - lm) / (2.0 * eps) + c);
                ball(x) * (l + c * x).exp() * slope.max(0.0)
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let span = 2.0 * (t * 60.0).sqrt() + 2.0 * t * (1.0 + c) + 10.0;
    let v = integrate(&mut f, r, r + span, Tolerance::new(1e-300, 1e-8))?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(4.0 * PI * v.value)
}

/// Smallest integer radius whose truncation tail is below `tail_tol`.
pub fn truncation_radius(t: f64, opts: &GeometricOptions) -> Result<f64> {
    let mut r = 1.0;
    while truncation_tail(t, r, opts)? > opts.tail_tol {
        r += 1.0;
        if r > 200.0 {
            return Err(Error::InvalidArgument("no truncation radius reaches the tail tolerance".into()));
        }
    }
    Ok(r)
}

/// Coarse contributions above this are recomputed on the fine node set.
pub const FINE_THRESHOLD: f64 = 1e-11;

struct NodeSet {
    z: Vec<(f64, f64)>,
    z2: Vec<(f64, f64)>,
    inv_y2: Vec<f64>,
    w: Vec<f64>,
}

impl NodeSet {
    fn new(corners: &[Point], level: usize) -> Result<Self> {
        let q = polygon_quadrature(corners, level)?;
        let z: Vec<(f64, f64)> = q.nodes.iter().map(|p| (p.x(), p.y())).collect();
        Ok(Self {
            z2: z.iter().map(|&(x, y)| (x * x - y * y, 2.0 * x * y)).collect(),
            inv_y2: z.iter().map(|&(_, y)| 0.5 / (y * y)).collect(),
            z,
            w: q.weights,
        })
    }

    fn cosh_disp(&self, m: [f64; 4], k: usize) -> f64 {
        let [a, b, c, d] = m;
        let (x, y) = self.z[k];
        let (zx, zy) = self.z2[k];
        let re = c * zx + (d - a) * x - b;
        let im = c * zy + (d - a) * y;
        1.0 + (re * re + im * im) * self.inv_y2[k]
    }

    /// `int_D k(t, d(x, g x)) dx` by the node rule, using
    /// `cosh d(z, g z) = 1 + |c z^2 + (d - a) z - b|^2 / (2 y^2)`,
    fn integrate(&self, m: [f64; 4], table: &HeatKernelTable) -> f64 {
        (0..self.w.len()).map(|k| self.w[k] * table.eval(self.cosh_disp(m, k).acosh())).sum()
    }
}

/// `sum_{g != 1} int_D e^{-int_g w} k(t, x, g x) dx`.
///
/// Every element with `d(o, g o) <= R + 2 r_c` is included. Each element is
/// first integrated on a coarse node set; only those whose coarse value
/// exceeds [`FINE_THRESHOLD`] are integrated again on the fine set.
pub fn geometric_side(gens: &GeneratorSet<f64>, periods4: &[f64; 4], t: f64, opts: &GeometricOptions) -> Result<GeometricSide> {
    let r = truncation_radius(t, opts)?;
    let rc = gens.circumradius;
    let reach = r + 2.0 * rc;
    if reach > opts.radius_cap {
        return Err(Error::EnumerationCap { requested: reach, cap: opts.radius_cap, found: 0 });
    }
    let tree = OrbitTree::grow(gens, reach);
    let table = HeatKernelTable::new(t, reach + 2.0 * rc + 1.0, 4e-3)?;
    let fine = NodeSet::new(&gens.corners, opts.quad_level)?;
    let coarse_level = opts.quad_level.saturating_sub(2);
    let coarse = NodeSet::new(&gens.corners, coarse_level)?;
    let contrib: Vec<f64> = (1..tree.len())
        .into_par_iter()
        .map(|k| {
            let m = tree.maps[k].entries();
            let weight = (-abelian_period(periods4, &tree.abelian_i32(k))).exp();
            let rough = coarse.integrate(m, &table);
            if rough > FINE_THRESHOLD {
                weight * fine.integrate(m, &table)
            } else {
                weight * rough
            }
        })
        .collect();
    let value = contrib.iter().sum();
    Ok(GeometricSide { value, truncation_radius: r, tail_estimate: truncation_tail(t, r, opts)?, elements: tree.len() - 1, nodes: fine.w.len() })
}
