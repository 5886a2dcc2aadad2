use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::twistedop::Spectrum;
use serde::Serialize;
use std::f64::consts::PI;

/// `(1 / 4 pi) int_a^b 1_{l >= 1/4} tanh(pi sqrt(l - 1/4)) dl`, evaluated
/// after `l = 1/4 + r^2`, where the integrand `2 r tanh(pi r)` is smooth.
pub fn weyl_main_term(a: f64, b: f64) -> Result<f64> {
    if !(b > a) {
        return Ok(0.0);
    }
    let (lo, hi) = ((a - 0.25).max(0.0).sqrt(), (b - 0.25).max(0.0).sqrt());
    if hi <= lo {
        return Ok(0.0);
    }
    let v = integrate(|r: f64| 2.0 * r * (PI * r).tanh(), lo, hi, Tolerance::new(0.0, 1e-13))?;
    Ok(v.value / (4.0 * PI))
}

/// The same integral taken directly in `l`.
pub fn weyl_main_term_direct(a: f64, b: f64) -> Result<f64> {
    let (lo, hi) = (a.max(0.25), b.max(0.25));
    if hi <= lo {
        return Ok(0.0);
    }
    let tol = Tolerance { abs: 0.0, rel: 1e-13, max_intervals: 5000 };
    let v = integrate(|l: f64| (PI * (l - 0.25).max(0.0).sqrt()).tanh(), lo, hi, tol)?;
    Ok(v.value / (4.0 * PI))
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylReport {
    pub a: f64,
    pub b: f64,
    pub count: usize,
    pub volume: f64,
    pub main_term: f64,
    /// `count / Vol - main_term`.
    pub remainder: f64,
    /// `sqrt((b+1)/log g) (log(2 + (b-a) sqrt(log g/(b+1))))^{1/2}` at `g = 2`;
    /// context only, the bound is asymptotic in the genus.
    pub remainder_bound_shape_g2: f64,
}

/// Counts `Re lambda in [a, b]`. The spectrum must resolve past `b`.
pub fn weyl_report(spec: &Spectrum, a: f64, b: f64, volume: f64) -> Result<WeylReport> {
    let top = spec.eigenvalues.last().map(|z| z.re).unwrap_or(f64::NEG_INFINITY);
    if !(top > b) {
        return Err(Error::Unresolved { requested: b, resolved: top });
    }
    let count = spec.count_real_part_in(a, b);
    let main_term = weyl_main_term(a, b)?;
    let lg = 2f64.ln();
    let shape = ((b + 1.0) / lg).sqrt() * (2.0 + (b - a).max(0.0) * (lg / (b + 1.0)).sqrt()).ln().sqrt();
    Ok(WeylReport { a, b, count, volume, main_term, remainder: count as f64 / volume - main_term, remainder_bound_shape_g2: shape })
}
