use super::*;
use crate::fuchsian::sample_domain;
use crate::surfmesh::{exterior_calculus, harmonic_basis, ExteriorCalculus, HarmonicForm, SurfaceMesh};
use crate::{Error, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use std::f64::consts::PI;

fn setup(level: usize) -> (SurfaceMesh, ExteriorCalculus, [HarmonicForm; 4]) {
    let mesh = SurfaceMesh::build(level).unwrap();
    let ext = exterior_calculus(&mesh);
    let basis = harmonic_basis(&mesh, &ext).unwrap();
    (mesh, ext, basis)
}

#[test]
fn mu_factor_values() {
    assert!((mu_factor(1.0f64) - 2.746_944_436_225_403).abs() < 1e-12);
    assert!(mu_factor(1e-6f64) < 1e-10);
    for t in [2.0f64, 4.0, 8.0, 16.0] {
        let s = mu_factor(t) * (-t / 2.0).exp();
        assert!(s > 2.0 && s < 2.0 * PI * 2f64.sqrt(), "t = {t}: {s}");
    }
    assert!((mu_factor(1.0f32) - 2.746_944_4).abs() < 1e-5);
}

#[test]
fn kernel_mass_matches_closed_form() {
    for t in [0.5, 1.0, 2.0, 4.0] {
        assert!((kernel_mass_quadrature(t, 32) - mu_factor(t)).abs() < 1e-10 * mu_factor(t));
        let rule = BallRule::new(t, 0);
        assert!((rule.volume() - 2.0 * PI * (t.cosh() - 1.0)).abs() < 1e-10 * rule.volume());
    }
}

#[test]
fn zero_form_has_zero_primitive_and_average() {
    let (mesh, ext, _) = setup(2);
    let f = primitive_on_domain(&mesh, &ext, &vec![0.0; mesh.num_edges()]).unwrap();
    assert!(f.values.iter().all(|v| *v == 0.0));
    let df = averaged_operator_apply(&mesh, &f, &Point::new(0.1, 1.2).unwrap(), 1.0, 0).unwrap();
    assert!(df[0].abs() < 1e-8 && df[1].abs() < 1e-8);
}

#[test]
fn non_closed_cochain_is_rejected() {
    let (mesh, ext, _) = setup(2);
    let mut w = vec![0.0; mesh.num_edges()];
    w[0] = 1.0;
    assert!(matches!(primitive_on_domain(&mesh, &ext, &w), Err(Error::NotClosed { .. })));
    assert!(matches!(primitive_on_domain(&mesh, &ext, &[0.0]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn primitive_jumps_are_the_periods() {
    let (mesh, ext, basis) = setup(3);
    for (i, b) in basis.iter().enumerate() {
        let f = primitive_on_domain(&mesh, &ext, &b.cochain).unwrap();
        assert!(f.edge_defect < 1e-10);
        assert!(f.gluing_defect(&mesh) < 1e-10);
        assert_eq!(f.values[f.anchor], 0.0);
        for j in 0..4 {
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((f.jumps[j] - expect).abs() < 1e-10, "form {i} side {j}: {}", f.jumps[j]);
        }
    }
}

#[test]
fn primitive_is_path_independent_on_random_cycles() {
    let (mesh, ext, basis) = setup(3);
    let w = &basis[1].cochain;
    let f = primitive_on_domain(&mesh, &ext, w).unwrap();
    let n = mesh.local_pos.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &mesh.local_edges {
        let v = f64::from(e.sign) * w[e.edge];
        adj[e.a].push((e.b, v));
        adj[e.b].push((e.a, -v));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let start = rng.gen_range(0..n);
        let mut cur = start;
        let mut sum = 0.0;
        for _ in 0..rng.gen_range(3..40) {
            let (next, v) = adj[cur][rng.gen_range(0..adj[cur].len())];
            sum += v;
            cur = next;
        }
        assert!((f.values[cur] - f.values[start] - sum).abs() < 1e-10);
        // close the loop along a breadth-first path back to the start
        let mut prev = vec![usize::MAX; n];
        prev[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &(b, _) in &adj[a] {
                if prev[b] == usize::MAX {
                    prev[b] = a;
                    queue.push_back(b);
                }
            }
        }
        while cur != start {
            let p = prev[cur];
            sum += adj[cur].iter().find(|e| e.0 == p).unwrap().1;
            cur = p;
        }
        assert!(sum.abs() < 1e-10, "cycle sum {sum}");
    }
}

#[test]
fn primitive_is_linear() {
    let (mesh, ext, basis) = setup(2);
    let mix: Vec<f64> = basis[0].cochain.iter().zip(&basis[2].cochain).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
    let f = primitive_on_domain(&mesh, &ext, &mix).unwrap();
    let f0 = primitive_on_domain(&mesh, &ext, &basis[0].cochain).unwrap();
    let f2 = primitive_on_domain(&mesh, &ext, &basis[2].cochain).unwrap();
    for v in 0..f.values.len() {
        assert!((f.values[v] - (2.0 * f0.values[v] - 0.5 * f2.values[v])).abs() < 1e-12);
    }
}

#[test]
fn lifted_primitive_shifts_by_periods() {
    let (mesh, ext, basis) = setup(3);
    let f = primitive_on_domain(&mesh, &ext, &basis[2].cochain).unwrap();
    let z = Point::new(0.2, 0.9).unwrap();
    for j in 0..4 {
        let gz = mesh.group.gens[j].apply(&z);
        let expect = if j == 2 { 1.0 } else { 0.0 };
        assert!((f.value(&mesh, &gz) - f.value(&mesh, &z) - expect).abs() < 1e-9);
    }
}

#[test]
fn circle_averages_recover_the_center_value() {
    let (mesh, ext, basis) = setup(4);
    let f = primitive_on_domain(&mesh, &ext, &basis[0].cochain).unwrap();
    for x in sample_domain(&mesh.group, 10) {
        let center = circle_average(&mesh, &f, &x, 0.3, 512);
        for rho in [0.6, 1.2, 2.0] {
            let avg = circle_average(&mesh, &f, &x, rho, 2048);
            assert!((avg - center).abs() < 5e-3, "rho {rho}: {avg} vs {center}");
        }
    }
}

#[test]
fn df_transforms_as_a_covector() {
    let (mesh, ext, basis) = setup(3);
    let f = primitive_on_domain(&mesh, &ext, &basis[3].cochain).unwrap();
    let x = Point::new(-0.3, 1.4).unwrap();
    let a = 0.7;
    let d0 = averaged_operator_apply_many(&mesh, &[&f], &x, 1.0, 1, 0.0).unwrap()[0];
    let d1 = averaged_operator_apply_many(&mesh, &[&f], &x, 1.0, 1, a).unwrap()[0];
    let rot = [d0[0] * a.cos() + d0[1] * a.sin(), -d0[0] * a.sin() + d0[1] * a.cos()];
    let n = d0[0].hypot(d0[1]);
    assert!((rot[0] - d1[0]).abs() < 5e-3 * n && (rot[1] - d1[1]).abs() < 5e-3 * n, "{rot:?} vs {d1:?}");
}

#[test]
fn eigen_identity_at_level_three() {
    let (mesh, ext, basis) = setup(3);
    let f = primitive_on_domain(&mesh, &ext, &basis[0].cochain).unwrap();
    let mu = mu_factor(1.5);
    for x in sample_domain(&mesh.group, 4) {
        let df = averaged_operator_apply(&mesh, &f, &x, 1.5, 1).unwrap();
        let w = pointwise_form(&mesh, &f, &x, PROBE_RADIUS, PROBE_NODES, 0.0);
        let err = (df[0] - mu * w[0]).hypot(df[1] - mu * w[1]);
        assert!(err < 0.03 * mu * w[0].hypot(w[1]), "{df:?} vs {w:?}");
    }
}

#[test]
fn bound_check_is_homogeneous() {
    let (mesh, ext, basis) = setup(2);
    let f = primitive_on_domain(&mesh, &ext, &basis[1].cochain).unwrap();
    let scaled: Vec<f64> = basis[1].cochain.iter().map(|v| 5.0 * v).collect();
    let g = primitive_on_domain(&mesh, &ext, &scaled).unwrap();
    let pts = sample_domain(&mesh.group, 3);
    let l2 = basis[1].l2_norm;
    let a = supnorm_bound_check(&mesh, &[&f], &[l2], 1.0, &pts, 0).unwrap();
    let b = supnorm_bound_check(&mesh, &[&g], &[5.0 * l2], 1.0, &pts, 0).unwrap();
    for (s, u) in a.samples.iter().zip(&b.samples) {
        assert!((u.df_norm - 5.0 * s.df_norm).abs() < 1e-9 * u.df_norm);
        assert!((u.bound - 5.0 * s.bound).abs() < 1e-12 * u.bound);
        assert_eq!(u.pass, s.pass);
    }
    let zero = primitive_on_domain(&mesh, &ext, &vec![0.0; mesh.num_edges()]).unwrap();
    let z = supnorm_bound_check(&mesh, &[&zero], &[0.0], 1.0, &pts, 0).unwrap();
    assert_eq!(z.bound_violations, 0);
}

#[test]
fn radius_is_validated() {
    let (mesh, ext, basis) = setup(1);
    let f = primitive_on_domain(&mesh, &ext, &basis[0].cochain).unwrap();
    let x = Point::i();
    assert!(matches!(averaged_operator_apply(&mesh, &f, &x, 40.0, 0), Err(Error::EnumerationCap { .. })));
    assert!(averaged_operator_apply(&mesh, &f, &x, -1.0, 0).is_err());
}
