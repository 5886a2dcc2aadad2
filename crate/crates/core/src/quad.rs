//! One-dimensional quadrature: adaptive Gauss-Kronrod and Gauss-Legendre rules.

use crate::error::{Error, Result};
use crate::real::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
    pub max_intervals: usize,
}

impl<T: Real> Tolerance<T> {
    pub fn new(abs: T, rel: T) -> Self {
        Self { abs, rel, max_intervals: 2000 }
    }
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let c = (a + b) * half;
    let h = (b - a) * half;
    let fc = f(c);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = h * T::lit(XGK[j]);
        let s = f(c - dx) + f(c + dx);
        k = k + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            g = g + s * T::lit(WG[j / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive 7/15-point Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below `max(tol.abs, tol.rel * |value|)`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: Tolerance<T>) -> Result<Integral<T>> {
    let (v, e) = gk15(&mut f, a, b);
    let mut segs = vec![(a, b, v, e)];
    loop {
        let value = segs.iter().fold(T::zero(), |s, x| s + x.2);
        let error = segs.iter().fold(T::zero(), |s, x| s + x.3);
        if error <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(Integral { value, error, intervals: segs.len() });
        }
        if segs.len() >= tol.max_intervals {
            return Err(Error::QuadratureNonConvergence { estimate: error.as_f64(), intervals: segs.len() });
        }
        let worst = (0..segs.len())
            .max_by(|&i, &j| segs[i].3.partial_cmp(&segs[j].3).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap();
        let (lo, hi, _, _) = segs[worst];
        let mid = (lo + hi) * T::lit(0.5);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        segs[worst] = (lo, mid, v1, e1);
        segs.insert(worst + 1, (mid, hi, v2, e2));
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed by Newton iteration.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0, "rule needs at least one node");
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let one = T::one();
    let two = T::lit(2.0);
    let nf = T::from_usize(n).unwrap();
    for i in 0..n.div_ceil(2) {
        let mut z = (T::PI() * (T::from_usize(i).unwrap() + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = one;
        for _ in 0..100 {
            let (mut p0, mut p1) = (one, z);
            for k in 2..=n {
                let kf = T::from_usize(k).unwrap();
                let p2 = ((two * kf - one) * z * p1 - (kf - one) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { one } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - one);
            let dz = pn / dp;
            z = z - dz;
            if dz.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let (mut p0, mut p1) = (one, z);
        for k in 2..=n {
            let kf = T::from_usize(k).unwrap();
            let p2 = ((two * kf - one) * z * p1 - (kf - one) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        if n > 1 {
            dp = nf * (z * p1 - p0) / (z * z - one);
        }
        let wi = two / ((one - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = T::zero();
    }
    (x, w)
}
