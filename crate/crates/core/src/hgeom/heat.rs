use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::real::Real;

fn kernel_tolerance<T: Real>() -> Tolerance<T> {
    let rel = T::lit(1e-13).max(T::epsilon() * T::lit(64.0));
    Tolerance { abs: T::zero(), rel, max_intervals: 400 }
}

/// Natural logarithm of the heat kernel `k(t, d)` of the hyperbolic plane.
///
/// With `u = d + s^2` the kernel becomes
/// `sqrt(2) e^{-t/4} (4 pi t)^{-3/2} e^{-d^2/4t - d/2} J`, where
/// `J = int_0^inf 2s u e^{-(2ds^2 + s^4)/4t} / sqrt(2 e^{-d} sinh(d + s^2/2) sinh(s^2/2)) ds`
/// has a bounded integrand; the leading Gaussian factor is kept in log form so
/// large distances underflow gracefully.
pub fn ln_heat_kernel<T: Real>(t: T, d: T) -> Result<T> {
    if !(t > T::zero()) || !(d >= T::zero()) {
        return Err(Error::InvalidArgument(format!("heat kernel needs t > 0, d >= 0 (t={t}, d={d})")));
    }
    let two = T::lit(2.0);
    let four_t = T::lit(4.0) * t;
    let half = T::lit(0.5);
    let integrand = |s: T| -> T {
        let s2 = s * s;
        let u = d + s2;
        let g = (-(two * d * s2 + s2 * s2) / four_t).exp();
        let s1 = (-d).exp() * (d + s2 * half).sinh();
        let sb = (s2 * half).sinh();
        let den = (two * s1 * sb).sqrt();
        if den == T::zero() {
            // s -> 0 limit: 2 u / sqrt(sinh d) for d > 0, and 0 for d = 0.
            if d == T::zero() {
                return T::zero();
            }
            return two * d * g / (two * s1).sqrt();
        }
        two * s * u * g / den
    };
    // Gaussian factor below e^{-45} beyond this point.
    let smax = ((d * d + T::lit(180.0) * t).sqrt() - d).sqrt();
    let j = integrate(integrand, T::zero(), smax, kernel_tolerance())?;
    let pre = two.sqrt().ln() - t / T::lit(4.0) - T::lit(1.5) * (T::lit(4.0) * T::PI() * t).ln();
    Ok(pre - d * d / four_t - d * half + j.value.ln())
}

/// Heat kernel `k(t, d)` of the hyperbolic plane.
pub fn heat_kernel<T: Real>(t: T, d: T) -> Result<T> {
    Ok(ln_heat_kernel(t, d)?.exp())
}

/// Total mass `2 pi int_0^inf k(t, rho) sinh(rho) d rho`, which is 1.
pub fn heat_kernel_mass(t: f64) -> Result<f64> {
    let rmax = t + (t * t + 200.0 * t).sqrt();
    let mut failure = None;
    let f = |r: f64| match ln_heat_kernel(t, r) {
        Ok(l) => (l + r).exp() * 0.5 * (1.0 - (-2.0 * r).exp()),
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let v = integrate(f, 0.0, rmax, Tolerance::new(1e-14, 1e-12))?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * std::f64::consts::PI * v.value)
}

/// Spectral multiplier `e^{-(1/4 + r^2) t}` of the heat kernel.
pub fn selberg_heat_transform<T: Real>(t: T, r: T) -> T {
    (-(T::lit(0.25) + r * r) * t).exp()
}

/// Tabulated `ln k(t, .)` on `[0, d_max]` with cubic interpolation.
#[derive(Debug, Clone)]
pub struct HeatKernelTable {
    t: f64,
    step: f64,
    values: Vec<f64>,
}

impl HeatKernelTable {
    pub fn new(t: f64, d_max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(d_max > 0.0) {
            return Err(Error::InvalidArgument("table needs positive step and range".into()));
        }
        let n = (d_max / step).ceil() as usize + 3;
        let values = (0..n).map(|k| ln_heat_kernel(t, k as f64 * step)).collect::<Result<Vec<_>>>()?;
        Ok(Self { t, step, values })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn d_max(&self) -> f64 {
        (self.values.len() - 3) as f64 * self.step
    }

    /// Interpolated `ln k(t, d)`; `ln k` is even in `d`, which supplies the
    /// ghost value below zero.
    pub fn ln_eval(&self, d: f64) -> f64 {
        let u = d / self.step;
        let k = (u.floor() as usize).min(self.values.len() - 3);
        let f = u - k as f64;
        let at = |j: isize| -> f64 { self.values[j.unsigned_abs()] };
        let k = k as isize;
        let (p0, p1, p2, p3) = (at(k - 1), at(k), at(k + 1), at(k + 2));
        // Cubic Lagrange through k-1, k, k+1, k+2.
        let w0 = -f * (f - 1.0) * (f - 2.0) / 6.0;
        let w1 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
        let w2 = -(f + 1.0) * f * (f - 2.0) / 2.0;
        let w3 = (f + 1.0) * f * (f - 1.0) / 6.0;
        w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3
    }

    pub fn eval(&self, d: f64) -> f64 {
        self.ln_eval(d).exp()
    }
}
