use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(7)
}

fn random_map(r: &mut ChaCha8Rng) -> MoebiusMap<f64> {
    loop {
        let (a, b, c, d): (f64, f64, f64, f64) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        if a * d - b * c > 0.1 {
            return MoebiusMap::new(a, b, c, d).unwrap();
        }
    }
}

fn random_point(r: &mut ChaCha8Rng) -> HPoint<f64> {
    HPoint::new(r.gen_range(-3.0..3.0), r.gen_range(0.1..3.0)).unwrap()
}

#[test]
fn apply_examples() {
    let i = HPoint::<f64>::i();
    let z = MoebiusMap::translation(1.0).apply(&i);
    assert_eq!((z.x(), z.y()), (1.0, 1.0));
    let w = HPoint::new(0.3, 1.7).unwrap();
    assert_eq!(MoebiusMap::identity().apply(&w), w);
    let s = std::f64::consts::SQRT_2;
    let z = MoebiusMap::new(s, 0.0, 0.0, 1.0 / s).unwrap().apply(&i);
    assert!((z.x()).abs() < 1e-15 && (z.y() - 2.0).abs() < 1e-15);
}

#[test]
fn points_reject_lower_half_plane() {
    assert!(HPoint::new(0.0, 0.0).is_err());
    assert!(HPoint::new(0.0, -1.0).is_err());
    assert!(HPoint::new(f64::NAN, 1.0).is_err());
}

#[test]
fn distance_examples_and_invariance() {
    let i = HPoint::<f64>::i();
    let two_i = HPoint::new(0.0, 2.0).unwrap();
    assert!((hyp_distance(&i, &two_i) - 2f64.ln()).abs() < 1e-15);
    assert_eq!(hyp_distance(&two_i, &two_i), 0.0);
    let mut r = rng();
    for _ in 0..100 {
        let g = random_map(&mut r);
        let (z, w) = (random_point(&mut r), random_point(&mut r));
        let d0 = hyp_distance(&z, &w);
        let d1 = hyp_distance(&g.apply(&z), &g.apply(&w));
        assert!((d0 - d1).abs() <= 1e-10 * (1.0 + d0));
        assert!((hyp_distance(&w, &z) - d0).abs() < 1e-14 * (1.0 + d0));
        assert!((cosh_distance(&z, &w) - d0.cosh()).abs() < 1e-10 * d0.cosh());
    }
}

#[test]
fn maps_are_normalized() {
    let mut r = rng();
    for _ in 0..50 {
        let (g, h) = (random_map(&mut r), random_map(&mut r));
        let gh = g * h;
        assert!((gh.det() - 1.0).abs() < 1e-12);
        assert!(gh.entries().iter().find(|v| **v != 0.0).unwrap() > &0.0);
        assert!((g * g.inverse()).approx_eq(&MoebiusMap::identity(), 1e-12));
        let k = random_map(&mut r);
        assert!(((g * h) * k).approx_eq(&(g * (h * k)), 1e-10));
    }
    let m = MoebiusMap::new(-2.0, 0.0, 0.0, -0.5).unwrap();
    assert_eq!(m.entries(), [2.0, 0.0, 0.0, 0.5]);
}

#[test]
fn translation_length_examples() {
    let m = MoebiusMap::new(2.0, 0.0, 0.0, 0.5).unwrap();
    assert!((translation_length(&m).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-14);
    assert!(matches!(translation_length(&MoebiusMap::<f64>::identity()), Err(crate::Error::NotHyperbolic { .. })));
    assert!(translation_length(&MoebiusMap::<f64>::translation(1.0)).is_err());
    assert!(translation_length(&MoebiusMap::<f64>::rotation_about_i(0.3)).is_err());
}

#[test]
fn translation_length_is_minimal_displacement() {
    let mut r = rng();
    let mut checked = 0;
    while checked < 20 {
        let g = random_map(&mut r);
        let Ok(len) = translation_length(&g) else { continue };
        checked += 1;
        let mut best = f64::INFINITY;
        for _ in 0..2000 {
            let z = HPoint::new(r.gen_range(-5.0..5.0), r.gen_range(0.01..5.0)).unwrap();
            let d = hyp_distance(&z, &g.apply(&z));
            assert!(d >= len - 1e-6);
            best = best.min(d);
        }
        // A fixed point of the axis attains the minimum.
        let [a, _, c, d] = g.entries();
        if c.abs() > 1e-9 {
            let disc = ((a + d) * (a + d) - 4.0).sqrt();
            let (f1, f2) = ((a - d + disc) / (2.0 * c), (a - d - disc) / (2.0 * c));
            let on_axis = HPoint::new(0.5 * (f1 + f2), 0.5 * (f1 - f2).abs()).unwrap();
            assert!((hyp_distance(&on_axis, &g.apply(&on_axis)) - len).abs() < 1e-8);
        }
        assert!(best < len + 2.0);
    }
}

#[test]
fn ball_area_examples() {
    assert_eq!(ball_area(0.0f64), 0.0);
    // 2 pi (cosh r - 1) evaluated independently to 12 digits.
    assert!((ball_area(1.0f64) - 3.412276265284902).abs() < 1e-12);
    assert!((ball_area(2.0f64) - 17.355387381771436).abs() < 1e-11);
    assert!((ball_area(1.0f64) / 3.41255 - 1.0).abs() < 1e-4);
}

#[test]
fn polar_coordinates_agree_with_rotations() {
    for k in 0..16 {
        let theta = k as f64 * PI / 8.0 - 1.0;
        let p = HPoint::polar_at_i(1.3, theta);
        assert!((hyp_distance(&HPoint::i(), &p) - 1.3).abs() < 1e-13);
        let q = MoebiusMap::rotation_about_i(theta).apply(&HPoint::new(0.0, 1.3f64.exp()).unwrap());
        assert!(hyp_distance(&p, &q) < 1e-12);
    }
    // Counterclockwise from vertical: a quarter turn points left.
    let p = HPoint::polar_at_i(0.5, PI / 2.0);
    assert!(p.x() < 0.0);
    let (u, v) = HPoint::<f64>::new(0.4, 2.0).unwrap().to_disk();
    let back = HPoint::from_disk(u, v).unwrap();
    assert!((back.x() - 0.4).abs() < 1e-14 && (back.y() - 2.0).abs() < 1e-14);
}

#[test]
fn hyperboloid_round_trip() {
    let mut r = rng();
    for _ in 0..50 {
        let z = random_point(&mut r);
        let h = z.to_hyperboloid();
        assert!((minkowski(&h, &h) - 1.0).abs() < 1e-10 * h[0] * h[0]);
        let w = HPoint::from_hyperboloid(h);
        assert!(hyp_distance(&z, &w) < 1e-10);
        let m = midpoint(&z, &w);
        assert!(hyp_distance(&m, &z) < 1e-10);
    }
    let (a, b): (HPoint<f64>, HPoint<f64>) = (HPoint::new(-1.0, 0.5).unwrap(), HPoint::new(2.0, 3.0).unwrap());
    let m = midpoint(&a, &b);
    let d = hyp_distance(&a, &b);
    assert!((hyp_distance(&a, &m) - d / 2.0).abs() < 1e-12);
    assert!((hyp_distance(&b, &m) - d / 2.0).abs() < 1e-12);
}

fn equilateral(angle: f64) -> Vec<HPoint<f64>> {
    let ca = angle.cos();
    let side = ((ca + ca * ca) / (1.0 - ca * ca)).acosh();
    // circumradius of an equilateral triangle: sinh(R) = sinh(a/2)/sin(pi/3)
    let rad = ((side / 2.0).sinh() / (PI / 3.0).sin()).asinh();
    (0..3).map(|k| HPoint::polar_at_i(rad, 2.0 * PI * k as f64 / 3.0)).collect()
}

#[test]
fn quadrature_weight_equals_angle_deficit() {
    let tri = equilateral(PI / 4.0);
    let [a, b, c] = vertex_angles(&tri[0], &tri[1], &tri[2]);
    for x in [a, b, c] {
        assert!((x - PI / 4.0).abs() < 1e-12);
    }
    for level in 0..5 {
        let rule = polygon_quadrature(&tri, level).unwrap();
        assert!((rule.total_weight() - PI / 4.0).abs() < 1e-10);
        assert!(rule.weights.iter().all(|w| *w > 0.0));
        assert_eq!(rule.len(), 3 * 4usize.pow(level as u32));
    }
}

#[test]
fn regular_octagon_has_area_four_pi() {
    let rc = (3.0 + 2.0 * 2f64.sqrt()).acosh();
    let oct: Vec<HPoint<f64>> = (0..8).map(|k| HPoint::polar_at_i(rc, PI / 8.0 + k as f64 * PI / 4.0)).collect();
    let mut prev: Option<f64> = None;
    for level in 0..5 {
        let w = polygon_quadrature(&oct, level).unwrap().total_weight();
        assert!((w - 4.0 * PI).abs() < 1e-8, "level {level}: {w}");
        if let Some(p) = prev {
            assert!((w - p).abs() < 1e-10);
        }
        prev = Some(w);
    }
    // Clockwise input is accepted as well.
    let rev: Vec<_> = oct.iter().rev().copied().collect();
    assert!((polygon_quadrature(&rev, 1).unwrap().total_weight() - 4.0 * PI).abs() < 1e-8);
}

#[test]
fn quadrature_integrates_smooth_functions() {
    // Integral of cosh(d(i, z)) over the ball of radius 1 is pi sinh(1)^2.
    let tri = equilateral(PI / 4.0);
    let f = |z: &HPoint<f64>| cosh_distance(&HPoint::i(), z);
    let coarse = polygon_quadrature(&tri, 2).unwrap().integrate(f);
    let fine = polygon_quadrature(&tri, 5).unwrap().integrate(f);
    let finer = polygon_quadrature(&tri, 6).unwrap().integrate(f);
    assert!((finer - fine).abs() < (fine - coarse).abs() / 10.0);
}

#[test]
fn degenerate_polygons_are_rejected() {
    let a = HPoint::new(0.0, 1.0).unwrap();
    let b = HPoint::new(0.0, 2.0).unwrap();
    let c = HPoint::new(0.0, 3.0).unwrap();
    assert!(matches!(polygon_quadrature(&[a, b, c], 1), Err(crate::Error::DegeneratePolygon(_))));
    assert!(polygon_quadrature(&[a, b], 0).is_err());
    // A bow-tie is not convex.
    let q = [HPoint::new(-1.0, 1.0).unwrap(), HPoint::new(1.0, 2.0).unwrap(), HPoint::new(1.0, 1.0).unwrap(), HPoint::new(-1.0, 2.0).unwrap()];
    assert!(polygon_quadrature(&q, 0).is_err());
}

#[test]
fn orientation_sign() {
    let p = HPoint::<f64>::i();
    let q = HPoint::new(0.1, 1.0).unwrap();
    let r = HPoint::new(0.0, 1.1).unwrap();
    assert!(orientation(&p, &q, &r) > 0.0);
    assert!(orientation(&p, &r, &q) < 0.0);
}

#[test]
fn heat_kernel_unit_mass() {
    for t in [0.5, 1.0, 2.0] {
        let m = heat_kernel_mass(t).unwrap();
        assert!((m - 1.0).abs() < 1e-6, "t={t}: mass {m}");
    }
}

#[test]
fn heat_kernel_monotone_and_bounded_shape() {
    let k = |d: f64| heat_kernel(1.0, d).unwrap();
    assert!(k(0.5) > k(1.0) && k(1.0) > k(2.0));
    let mut c_max: f64 = 0.0;
    let mut prev = f64::INFINITY;
    for j in 0..=40 {
        let d = 0.25 * j as f64;
        let v = k(d);
        assert!(v > 0.0 && v < prev);
        prev = v;
    }
    for it in 0..=15 {
        let t = 0.25 + 0.25 * it as f64;
        for j in 0..=20 {
            let d = 0.5 * j as f64;
            c_max = c_max.max(heat_kernel(t, d).unwrap() * t * (d * d / (8.0 * t)).exp());
        }
    }
    assert!(c_max.is_finite() && c_max < 1.0);
}

#[test]
fn heat_kernel_matches_closed_form_in_three_dimensions_limit() {
    // Independent check at d = 0 against direct quadrature of the unsubstituted
    // form on [eps, inf) plus the analytic singular piece.
    let t: f64 = 1.0;
    let direct = {
        let f = |u: f64| u * (-u * u / (4.0 * t)).exp() / (u.cosh() - 1.0).sqrt();
        // u / sqrt(cosh u - 1) -> sqrt(2) as u -> 0; integrable, smooth.
        let r = crate::quad::integrate(f, 1e-300, 40.0, crate::quad::Tolerance::new(1e-15, 1e-13)).unwrap();
        2f64.sqrt() * (-t / 4.0).exp() / (4.0 * PI * t).powf(1.5) * r.value
    };
    assert!((heat_kernel(t, 0.0).unwrap() - direct).abs() < 1e-11 * direct);
}

#[test]
fn heat_kernel_large_distance_underflows_in_log_space() {
    let l = ln_heat_kernel(1.0, 60.0f64).unwrap();
    assert!(l.is_finite() && l < -900.0);
    assert!(heat_kernel(0.0f64, 1.0).is_err());
    assert!(heat_kernel(1.0f64, -1.0).is_err());
}

#[test]
fn heat_table_interpolates() {
    let tab = HeatKernelTable::new(1.0, 6.0, 0.01).unwrap();
    for d in [0.0, 0.003, 0.77, 2.345, 5.99] {
        let exact = ln_heat_kernel(1.0, d).unwrap();
        assert!((tab.ln_eval(d) - exact).abs() < 1e-9, "d={d}");
    }
}

#[test]
fn selberg_transform_examples() {
    assert!((selberg_heat_transform(1.0f64, 0.0) - 0.778801).abs() < 1e-6);
    assert!((selberg_heat_transform(1.0f64, 3f64.sqrt() / 2.0) - (-1f64).exp()).abs() < 1e-15);
    assert!(selberg_heat_transform(1.0f64, 100.0) < 1e-300);
    for (t, s, r) in [(0.3f64, 0.7f64, 0.2f64), (1.0, 2.0, 1.5), (0.1, 0.05, 3.0)] {
        let lhs = selberg_heat_transform(t, r) * selberg_heat_transform(s, r);
        let rhs = selberg_heat_transform(t + s, r);
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }
}

#[test]
fn single_precision_geometry() {
    let i = HPoint::<f32>::i();
    let p = HPoint::<f32>::new(0.0, 2.0).unwrap();
    assert!((hyp_distance(&i, &p) - 2f32.ln()).abs() < 1e-6);
    let rc = (3.0f32 + 2.0 * 2f32.sqrt()).acosh();
    let oct: Vec<HPoint<f32>> = (0..8).map(|k| HPoint::polar_at_i(rc, std::f32::consts::PI / 8.0 + k as f32 * std::f32::consts::PI / 4.0)).collect();
    let w = polygon_quadrature(&oct, 2).unwrap().total_weight();
    assert!((w - 4.0 * std::f32::consts::PI).abs() < 1e-3);
    assert!((heat_kernel(1.0f32, 1.0).unwrap() - heat_kernel(1.0f64, 1.0).unwrap() as f32).abs() < 1e-5);
}
