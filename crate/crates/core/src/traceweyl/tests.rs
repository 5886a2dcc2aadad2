use super::*;
use crate::fuchsian::bolza_group;
use crate::quad::gauss_legendre;
use crate::surfmesh::SurfaceMesh;
use crate::twistedop::{assemble_twisted, compute_spectrum, SpectrumOptions};
use std::f64::consts::PI;

fn composite_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre::<f64>(20);
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for k in 0..x.len() {
            s += 0.5 * h * w[k] * f(lo + 0.5 * h * (x[k] + 1.0));
        }
    }
    s
}

#[test]
fn topological_term_matches_refined_quadrature() {
    let v = topological_term(4.0 * PI, 1.0).unwrap();
    let oracle = 2.0 * composite_gl(|r| (-(0.25 + r * r)).exp() * r * (PI * r).tanh(), 0.0, 12.0, 400);
    assert!((v - oracle).abs() < 1e-10 * oracle, "{v} {oracle}");
    let mut last = f64::INFINITY;
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let x = topological_term(4.0 * PI, t).unwrap();
        assert!(x > 0.0 && x < last);
        last = x;
    }
    assert!(topological_term(0.0, 1.0).is_err());
}

#[test]
fn weyl_main_term_examples() {
    assert_eq!(weyl_main_term(0.0, 0.25).unwrap(), 0.0);
    assert_eq!(weyl_main_term(3.0, 2.0).unwrap(), 0.0);
    let a = weyl_main_term(0.25, 1.25).unwrap();
    let b = weyl_main_term_direct(0.25, 1.25).unwrap();
    assert!((a - b).abs() < 1e-12, "{a} {b}");
    let oracle = composite_gl(|r| 2.0 * r * (PI * r).tanh(), 0.0, 1.0, 50) / (4.0 * PI);
    assert!((a - oracle).abs() < 1e-13);
    for (x, y, z) in [(0.0, 3.0, 20.0), (0.1, 0.2, 0.3), (-1.0, 0.5, 7.5)] {
        let lhs = weyl_main_term(x, z).unwrap();
        let rhs = weyl_main_term(x, y).unwrap() + weyl_main_term(y, z).unwrap();
        assert!((lhs - rhs).abs() < 1e-10);
    }
}

#[test]
fn spectral_side_contracts() {
    let m = SurfaceMesh::build(2).unwrap();
    let op = assemble_twisted(&m, &vec![0.0; m.num_edges()], 1.0).unwrap();
    let s = compute_spectrum(&op, op.dim(), &SpectrumOptions::default()).unwrap();
    let cut = s.eigenvalues.last().unwrap().re;
    let (v, im, tail) = spectral_side(&s, 1.0, 4.0 * PI, cut).unwrap();
    assert!(v >= 1.0 && im == 0.0 && tail >= 0.0);
    let (v8, _, _) = spectral_side(&s, 8.0, 4.0 * PI, cut).unwrap();
    assert!((v8 - 1.0).abs() < 1e-9);
    assert!(spectral_side(&s, 1.0, 4.0 * PI, -1.0).is_err());

    let (tw, _) = twisted_spectrum(2, &[0.3, 0.0, -0.2, 0.0]).unwrap();
    assert!(tw.eigenvalues.iter().any(|z| z.im.abs() > 1e-6));
    let (v, im, _) = spectral_side(&tw, 1.0, 4.0 * PI, tw.eigenvalues.last().unwrap().re).unwrap();
    assert!(im.abs() < 1e-12 * v);
}

#[test]
fn geometric_side_is_even_in_the_periods() {
    let gens = bolza_group::<f64>();
    let opts = GeometricOptions { quad_level: 3, tail_tol: 1e-6, form_linf: 0.3, ..Default::default() };
    let p = [0.1, -0.05, 0.0, 0.02];
    let a = geometric_side(&gens, &p, 0.5, &opts).unwrap();
    let b = geometric_side(&gens, &p.map(|x| -x), 0.5, &opts).unwrap();
    assert!((a.value - b.value).abs() < 1e-10 * a.value, "{} {}", a.value, b.value);
    let zero = geometric_side(&gens, &[0.0; 4], 0.5, &opts).unwrap();
    assert!(a.value > zero.value);
}

#[test]
fn truncation_tail_bounds_the_change_with_radius() {
    let gens = bolza_group::<f64>();
    let loose = GeometricOptions { quad_level: 3, tail_tol: 1e-3, ..Default::default() };
    let tight = GeometricOptions { tail_tol: 1e-9, ..loose };
    let a = geometric_side(&gens, &[0.0; 4], 0.5, &loose).unwrap();
    let b = geometric_side(&gens, &[0.0; 4], 0.5, &tight).unwrap();
    assert!(b.truncation_radius > a.truncation_radius);
    assert!((a.value - b.value).abs() <= a.tail_estimate);
    assert!(a.value > 0.0 && a.tail_estimate >= 0.0);
}

#[test]
fn enumeration_cap_is_reported() {
    let gens = bolza_group::<f64>();
    let opts = GeometricOptions { radius_cap: 8.0, ..Default::default() };
    assert!(matches!(geometric_side(&gens, &[0.0; 4], 1.0, &opts), Err(crate::Error::EnumerationCap { .. })));
}

#[test]
fn weyl_report_examples() {
    let m = SurfaceMesh::build(3).unwrap();
    let op = assemble_twisted(&m, &vec![0.0; m.num_edges()], 1.0).unwrap();
    let s = compute_spectrum(&op, 40, &SpectrumOptions::default()).unwrap();
    let r = weyl_report(&s, -1.0, 0.0, 4.0 * PI).unwrap();
    assert_eq!(r.count, 1);
    assert_eq!(r.main_term, 0.0);
    assert!((r.remainder - 1.0 / (4.0 * PI)).abs() < 1e-15);
    assert!(matches!(weyl_report(&s, 0.0, 1e4, 4.0 * PI), Err(crate::Error::Unresolved { .. })));
}
