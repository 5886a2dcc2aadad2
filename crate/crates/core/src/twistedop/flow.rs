use super::assemble::TwistedOperator;
use crate::error::{Error, Result};
use faer::{Mat, Side};
use serde::Serialize;

/// The exponent `Pr >= 1` with `lambda0 = Pr (1 - Pr)`.
pub fn pressure_from_lambda0(lambda0: f64, tol: f64) -> Result<f64> {
    if lambda0 > tol {
        return Err(Error::InvalidArgument(format!("principal eigenvalue {lambda0} is positive")));
    }
    Ok(0.5 * (1.0 + (1.0 - 4.0 * lambda0.min(0.0)).sqrt()))
}

/// Moves eigenvalues within `delta` of `{a, b}` off the window boundary:
/// values just inside move to distance `delta` inside, values just outside
/// to distance `delta` outside.
pub fn pdelta_modify(eigs: &[f64], a: f64, b: f64, delta: f64) -> Vec<f64> {
    eigs.iter()
        .map(|&l| {
            if l > a - delta && l < a {
                a - delta
            } else if l >= a && l < a + delta {
                a + delta
            } else if l > b - delta && l <= b {
                b - delta
            } else if l > b && l < b + delta {
                b + delta
            } else {
                l
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowReport {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub h: f64,
    pub times: Vec<f64>,
    pub counts: Vec<usize>,
    /// `N^P(lambda in I)` of the unperturbed operator.
    pub count_p: usize,
    /// `N^{P^delta}(lambda in I)`.
    pub count_p_delta: usize,
    /// `N^{P_w}(Re lambda in I)` of the twisted operator without the
    /// delta modification.
    pub count_p_omega: usize,
    /// `N^P(lambda in dI + (-delta, delta))`.
    pub boundary_count: usize,
    /// `|count_p_omega - count_p| / max(boundary_count, 1)`.
    pub constant: f64,
    pub max_shift: f64,
    pub refinements: usize,
}

impl FlowReport {
    pub fn is_constant(&self) -> bool {
        self.counts.iter().all(|&c| c == self.count_p_delta)
    }
}

fn count_in(eigs: &[num_complex::Complex64], a: f64, b: f64) -> (usize, f64) {
    let near = eigs.iter().map(|z| (z.re - a).abs().min((z.re - b).abs())).fold(f64::INFINITY, f64::min);
    (eigs.iter().filter(|z| z.re >= a && z.re <= b).count(), near)
}

fn eigenvalues(c: &Mat<f64>) -> Result<Vec<num_complex::Complex64>> {
    let e = c.eigenvalues().map_err(|e| Error::EigenFailure { message: format!("{e:?}"), residual: f64::NAN })?;
    Ok(e.into_iter().map(|z| num_complex::Complex64::new(z.re, z.im)).collect())
}

/// Counts eigenvalues of `P^delta_{t w}` with real part in `[a, b]` at
/// `t = j / steps`. The operator is written in the mass-orthonormal
/// eigenbasis of `P`, where `P^delta` is diagonal.
pub fn spectral_flow_count(op: &TwistedOperator, a: f64, b: f64, delta: f64, steps: usize) -> Result<FlowReport> {
    faer::set_global_parallelism(faer::Par::Seq);
    if !(delta > 0.0) || a > b || steps == 0 {
        return Err(Error::InvalidArgument(format!("bad flow parameters a={a} b={b} delta={delta} steps={steps}")));
    }
    let n = op.dim();
    let h2 = op.h * op.h;
    let s: Vec<f64> = op.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let mut k = Mat::<f64>::zeros(n, n);
    for (r, c, v) in op.stiffness.triplets() {
        k[(r, c)] = h2 * s[r] * v * s[c];
    }
    let e = k.self_adjoint_eigen(Side::Lower).map_err(|e| Error::EigenFailure { message: format!("{e:?}"), residual: f64::NAN })?;
    let lam: Vec<f64> = (0..n).map(|i| e.S()[i]).collect();
    let y = e.U().to_owned();
    let modified = pdelta_modify(&lam, a, b, delta);
    let max_shift = lam.iter().zip(&modified).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    // twist terms in the eigenbasis: Y^T S B S Y and Y^T S P S Y
    let mut bm = Mat::<f64>::zeros(n, n);
    for (r, c, v) in op.advection.triplets() {
        bm[(r, c)] = h2 * s[r] * v * s[c];
    }
    let bh = y.transpose() * &bm * &y;
    let pd = Mat::<f64>::from_fn(n, n, |i, j| if i == j { h2 * op.potential[i] * s[i] * s[i] } else { 0.0 });
    let ph = y.transpose() * &pd * &y;
    let build = |t: f64, diag: &[f64]| Mat::<f64>::from_fn(n, n, |i, j| t * bh[(i, j)] - t * t * ph[(i, j)] + if i == j { diag[i] } else { 0.0 });

    let count_p = lam.iter().filter(|l| **l >= a && **l <= b).count();
    let count_p_delta = modified.iter().filter(|l| **l >= a && **l <= b).count();
    let boundary_count = lam.iter().filter(|l| (**l - a).abs() < delta || (**l - b).abs() < delta).count();
    let (count_p_omega, _) = count_in(&eigenvalues(&build(1.0, &lam))?, a, b);

    let mut times = Vec::new();
    let mut counts = Vec::new();
    let mut refinements = 0;
    for j in 0..=steps {
        let t = j as f64 / steps as f64;
        let (mut c, mut near) = count_in(&eigenvalues(&build(t, &modified))?, a, b);
        let mut tt = t;
        if near < 1e-10 {
            refinements += 1;
            tt = if j == steps { t - 0.25 / steps as f64 } else { t + 0.25 / steps as f64 };
            (c, near) = count_in(&eigenvalues(&build(tt, &modified))?, a, b);
            if near < 1e-10 {
                return Err(Error::BoundaryProximity { value: near, tolerance: 1e-10, step: j });
            }
        }
        times.push(tt);
        counts.push(c);
    }
    let diff = (count_p_omega as f64 - count_p as f64).abs();
    Ok(FlowReport {
        a,
        b,
        delta,
        h: op.h,
        times,
        counts,
        count_p,
        count_p_delta,
        count_p_omega,
        boundary_count,
        constant: diff / boundary_count.max(1) as f64,
        max_shift,
        refinements,
    })
}
