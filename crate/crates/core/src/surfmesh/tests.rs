use super::*;
use crate::hgeom::hyp_distance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_closed(mesh: &SurfaceMesh, ext: &ExteriorCalculus, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let jumps: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let w0 = cut_differential(mesh, &cut_potential(mesh, &jumps));
    let u: Vec<f64> = (0..mesh.num_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let du = ext.d0.to_f64().matvec(&u);
    w0.iter().zip(&du).map(|(a, b)| a + b).collect()
}

#[test]
fn counts_and_topology() {
    for (level, v) in [2, 14, 62, 254, 1022].into_iter().enumerate() {
        let m = SurfaceMesh::build(level).unwrap();
        assert_eq!(m.num_triangles(), 8 * 4usize.pow(level as u32));
        assert_eq!(m.euler_characteristic(), -2, "level {level}");
        assert_eq!(m.num_vertices(), v, "level {level}");
        assert!((m.total_area() - 4.0 * PI).abs() < 1e-6);
        assert!(m.tri_angles.iter().flatten().all(|a| *a > 0.0));
    }
}

#[test]
fn level_cap_is_enforced() {
    assert!(matches!(build_mesh_capped(3, 2), Err(crate::Error::LevelCap { level: 3, cap: 2 })));
}

#[test]
fn every_boundary_vertex_has_one_partner() {
    let m = SurfaceMesh::build(3).unwrap();
    for s in 4..8 {
        let on_side = (0..m.local_pos.len()).filter(|&v| m.local_sides[v] & (1 << s) != 0).count();
        let glued = m.vertex_gluing.iter().filter(|g| g.0 == s).count();
        assert_eq!(on_side, glued);
        assert_eq!(m.side_path(s).len(), m.side_path(s - 4).len());
    }
    let corners: std::collections::HashSet<usize> = (1..9).map(|k| m.local_to_vertex[k]).collect();
    assert_eq!(corners.len(), 1);
}

#[test]
fn glued_edges_carry_consistent_signs() {
    let m = SurfaceMesh::build(2).unwrap();
    let g = &m.group.gens;
    for le in &m.local_edges {
        let rep = &m.local_edges[m.edge_rep[le.edge]];
        let (pa, pb) = if le.sign > 0 { (le.a, le.b) } else { (le.b, le.a) };
        let (ra, rb) = (rep.a, rep.b);
        assert_eq!(m.local_to_vertex[pa], m.local_to_vertex[ra]);
        assert_eq!(m.local_to_vertex[pb], m.local_to_vertex[rb]);
        if (pa, pb) != (ra, rb) {
            let s = (4..8).find(|&s| m.local_sides[pa] & m.local_sides[pb] & (1 << s) != 0).unwrap();
            let t = g[s - 4];
            assert!(hyp_distance(&t.apply(&m.local_pos[pa]), &m.local_pos[ra]) < 1e-9);
            assert!(hyp_distance(&t.apply(&m.local_pos[pb]), &m.local_pos[rb]) < 1e-9);
        }
    }
}

#[test]
fn boundary_of_boundary_vanishes() {
    let m = SurfaceMesh::build(3).unwrap();
    let ext = exterior_calculus(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let u: Vec<i64> = (0..m.num_vertices()).map(|_| rng.gen_range(-1000..1000)).collect();
        let du = ext.d0.matvec_int(&u);
        assert!(ext.d1.matvec_int(&du).iter().all(|&x| x == 0));
    }
    let ones = vec![1i64; m.num_vertices()];
    assert!(ext.d0.matvec_int(&ones).iter().all(|&x| x == 0));
}

#[test]
fn stiffness_matches_cotangent_laplacian() {
    let m = SurfaceMesh::build(2).unwrap();
    let ext = exterior_calculus(&m);
    let k = stiffness(&m).to_dense();
    let d0 = ext.d0.to_f64().to_dense();
    let n = m.num_vertices();
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for e in 0..m.num_edges() {
                s += d0[e][i] * ext.star1[e] * d0[e][j];
            }
            assert!((s - k[i][j]).abs() < 1e-12, "{i} {j}");
        }
        assert!(k[i][i] > 0.0);
    }
}

#[test]
fn exact_forms_have_zero_periods() {
    let m = SurfaceMesh::build(3).unwrap();
    let ext = exterior_calculus(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u: Vec<f64> = (0..m.num_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let du = ext.d0.to_f64().matvec(&u);
    for p in form_periods(&m, &ext, &du).unwrap() {
        assert!(p.abs() < 1e-10);
    }
}

#[test]
fn non_closed_cochains_are_rejected() {
    let m = SurfaceMesh::build(1).unwrap();
    let ext = exterior_calculus(&m);
    let mut w = vec![0.0; m.num_edges()];
    w[3] = 1.0;
    assert!(matches!(form_periods(&m, &ext, &w), Err(crate::Error::NotClosed { .. })));
    assert!(form_periods(&m, &ext, &w[1..]).is_err());
}

#[test]
fn cut_potentials_are_well_defined_on_the_quotient() {
    let m = SurfaceMesh::build(2).unwrap();
    let ext = exterior_calculus(&m);
    let jumps = [0.3, -1.1, 0.7, 2.0];
    let u = cut_potential(&m, &jumps);
    let w = cut_differential(&m, &u);
    for (k, le) in m.local_edges.iter().enumerate() {
        assert!((m.local_edge_value(&w, k) - (u[le.b] - u[le.a])).abs() < 1e-14);
    }
    assert!(closedness_defect(&ext, &w) < 1e-14);
    let p = form_periods(&m, &ext, &w).unwrap();
    for j in 0..4 {
        assert!((p[j] - jumps[j]).abs() < 1e-14);
    }
}

#[test]
fn harmonic_basis_contract() {
    let m = SurfaceMesh::build(3).unwrap();
    let ext = exterior_calculus(&m);
    let basis = harmonic_basis(&m, &ext).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (i, f) in basis.iter().enumerate() {
        assert!(closedness_defect(&ext, &f.cochain) < 1e-12);
        assert!(f.codifferential_residual <= 1e-8, "{}", f.codifferential_residual);
        for j in 0..4 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((f.periods[j] - want).abs() < 1e-8);
        }
        assert!(f.linf_norm >= f.l2_norm / (4.0 * PI).sqrt());
        // Hodge orthogonality against exact forms
        for _ in 0..20 {
            let u: Vec<f64> = (0..m.num_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let du = ext.d0.to_f64().matvec(&u);
            let ip: f64 = f.cochain.iter().zip(&du).zip(&ext.star1).map(|((a, b), s)| a * b * s).sum();
            let ndu = form_norms(&m, &du).0;
            assert!(ip.abs() <= 1e-8 * f.l2_norm * ndu, "{ip}");
        }
    }
}

#[test]
fn fifth_closed_form_is_dependent() {
    let m = SurfaceMesh::build(3).unwrap();
    let ext = exterior_calculus(&m);
    let basis = harmonic_basis(&m, &ext).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let w = random_closed(&m, &ext, &mut rng);
    let p = form_periods(&m, &ext, &w).unwrap();
    let h = combine(&basis, &p);
    let r: Vec<f64> = w.iter().zip(&h).map(|(a, b)| a - b).collect();
    let proj = harmonic_projection(&ext, &stiffness(&m), &r).unwrap();
    let (n, _) = form_norms(&m, &proj);
    assert!(n <= 1e-8 * form_norms(&m, &w).0, "{n}");
}

#[test]
fn periods_are_linear_and_norms_homogeneous() {
    let m = SurfaceMesh::build(2).unwrap();
    let ext = exterior_calculus(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = random_closed(&m, &ext, &mut rng);
    let b = random_closed(&m, &ext, &mut rng);
    let s: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    let (pa, pb, ps) =
        (form_periods(&m, &ext, &a).unwrap(), form_periods(&m, &ext, &b).unwrap(), form_periods(&m, &ext, &s).unwrap());
    for j in 0..4 {
        assert!((ps[j] - pa[j] - pb[j]).abs() < 1e-12);
    }
    let three: Vec<f64> = a.iter().map(|x| 3.0 * x).collect();
    let (l2, li) = form_norms(&m, &a);
    let (l2b, lib) = form_norms(&m, &three);
    assert!((l2b - 3.0 * l2).abs() <= 1e-14 * l2b);
    assert!((lib - 3.0 * li).abs() <= 1e-14 * lib);
    assert_eq!(form_norms(&m, &vec![0.0; m.num_edges()]), (0.0, 0.0));
}

#[test]
fn constant_vector_reconstruction_is_exact_on_linear_data() {
    let m = SurfaceMesh::build(1).unwrap();
    for t in 0..m.num_triangles() {
        let ch = &m.charts[t];
        // a cochain sampled from chart-linear data on this triangle only
        let g = [0.4, -1.3];
        let f = |k: usize| g[0] * ch.pos[k][0] + g[1] * ch.pos[k][1];
        let mut w = vec![0.0; m.num_edges()];
        let [a, b, c] = m.triangles[t];
        for (p, q, i, j) in [(a, b, 0, 1), (b, c, 1, 2), (c, a, 2, 0)] {
            let (k, o) = m.find_local_edge(p, q).unwrap();
            let le = &m.local_edges[k];
            w[le.edge] = (f(j) - f(i)) * o as f64 * le.sign as f64;
        }
        let v = triangle_vector(&m, &w, t);
        assert!((v[0] - g[0]).abs() < 1e-12 && (v[1] - g[1]).abs() < 1e-12);
    }
}

#[test]
fn locate_finds_vertices_and_interior_points() {
    let m = SurfaceMesh::build(3).unwrap();
    for (k, p) in m.local_pos.iter().enumerate().step_by(7) {
        let (t, l) = locate(&m, p);
        let j = m.triangles[t].iter().position(|&v| v == k).expect("vertex in located triangle");
        assert!((l[j] - 1.0).abs() < 1e-9);
    }
    for (t, &[a, b, c]) in m.triangles.iter().enumerate().step_by(13) {
        let q = crate::hgeom::midpoint(&crate::hgeom::midpoint(&m.local_pos[a], &m.local_pos[b]), &m.local_pos[c]);
        let (found, l) = locate(&m, &q);
        assert_eq!(found, t);
        assert!(l.iter().all(|x| *x > 0.0) && (l.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn mesh_file_header_round_trips() {
    let m = SurfaceMesh::build(2).unwrap();
    let mut buf = Vec::new();
    write_mesh(&m, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let counts = read_mesh_counts(&text).unwrap();
    assert_eq!(counts, [m.local_pos.len(), m.num_vertices(), m.num_edges(), m.num_triangles(), m.vertex_gluing.len()]);
    let lines = text.lines().count();
    assert_eq!(lines, 3 + 4 + counts[0] + counts[2] + counts[3] + counts[4]);
}
