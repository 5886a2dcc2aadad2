use super::build::SurfaceMesh;
use crate::error::{Error, Result};
use crate::sparse::{conjugate_gradient, Csr};
use faer::linalg::solvers::DenseSolveCore;

/// Incidence operators and diagonal Hodge stars.
#[derive(Debug, Clone)]
pub struct ExteriorCalculus {
    /// Vertices to edges, `(d0 u)_e = u(head) - u(tail)`.
    pub d0: Csr<i32>,
    /// Edges to triangles, summing around the counterclockwise boundary.
    pub d1: Csr<i32>,
    pub star0: Vec<f64>,
    pub star1: Vec<f64>,
}

/// Per-edge cotangent weights. Each triangle contributes
/// `(A_hyp / A_chart) cot(theta) / 2` for the chart angle `theta` opposite the
/// edge, so that `d0^T star1 d0` equals the hat-function stiffness matrix
/// with hyperbolic area weighting.
pub fn hodge_star1(mesh: &SurfaceMesh) -> Vec<f64> {
    let mut w = vec![0.0; mesh.num_edges()];
    for t in 0..mesh.num_triangles() {
        let ch = &mesh.charts[t];
        let scale = mesh.tri_area[t] / ch.area;
        for k in 0..3 {
            let e = mesh.local_edges[mesh.tri_local_edges[t][k]].edge;
            w[e] += scale * 0.5 * ch.cot[k];
        }
    }
    w
}

pub fn exterior_calculus(mesh: &SurfaceMesh) -> ExteriorCalculus {
    let mut t0 = Vec::with_capacity(2 * mesh.num_edges());
    for (e, &[a, b]) in mesh.edges.iter().enumerate() {
        t0.push((e, a, -1));
        t0.push((e, b, 1));
    }
    let d0 = Csr::from_triplets(mesh.num_edges(), mesh.num_vertices(), &t0);
    let mut t1 = Vec::with_capacity(3 * mesh.num_triangles());
    for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        for (p, q) in [(a, b), (b, c), (c, a)] {
            let (k, o) = mesh.find_local_edge(p, q).expect("triangle edge");
            let le = &mesh.local_edges[k];
            t1.push((t, le.edge, o as i32 * le.sign as i32));
        }
    }
    let d1 = Csr::from_triplets(mesh.num_triangles(), mesh.num_edges(), &t1);
    ExteriorCalculus { d0, d1, star0: mesh.vertex_area.clone(), star1: hodge_star1(mesh) }
}

/// Stiffness matrix `sum_T A_T grad(phi_i) . grad(phi_j)` on quotient vertices.
pub fn stiffness(mesh: &SurfaceMesh) -> Csr<f64> {
    let mut trip = Vec::with_capacity(9 * mesh.num_triangles());
    for t in 0..mesh.num_triangles() {
        let vs = mesh.tri_vertices(t);
        let g = &mesh.charts[t].grad;
        let a = mesh.tri_area[t];
        for i in 0..3 {
            for j in 0..3 {
                trip.push((vs[i], vs[j], a * (g[i][0] * g[j][0] + g[i][1] * g[j][1])));
            }
        }
    }
    Csr::from_triplets(mesh.num_vertices(), mesh.num_vertices(), &trip)
}

/// Constant vector of a 1-cochain on triangle `t` in that triangle's chart.
pub fn triangle_vector(mesh: &SurfaceMesh, w: &[f64], t: usize) -> [f64; 2] {
    let te = mesh.tri_local_edges[t];
    let [a, _, c] = mesh.triangles[t];
    let p = &mesh.charts[t].pos;
    let val = |k: usize, from: usize| -> f64 {
        let v = mesh.local_edge_value(w, te[k]);
        if mesh.local_edges[te[k]].a == from {
            v
        } else {
            -v
        }
    };
    // edge c->a is opposite b (index 1), edge a->b opposite c (index 2)
    let wab = val(2, a);
    let wac = -val(1, c);
    let (u, v) = ([p[1][0] - p[0][0], p[1][1] - p[0][1]], [p[2][0] - p[0][0], p[2][1] - p[0][1]]);
    let det = u[0] * v[1] - u[1] * v[0];
    [(wab * v[1] - wac * u[1]) / det, (u[0] * wac - v[0] * wab) / det]
}

/// `(L2, Linf)` norms of the piecewise constant reconstruction.
pub fn form_norms(mesh: &SurfaceMesh, w: &[f64]) -> (f64, f64) {
    let mut l2 = 0.0;
    let mut linf: f64 = 0.0;
    for t in 0..mesh.num_triangles() {
        let v = triangle_vector(mesh, w, t);
        let n2 = v[0] * v[0] + v[1] * v[1];
        l2 += mesh.tri_area[t] * n2;
        linf = linf.max(n2.sqrt());
    }
    (l2.sqrt(), linf)
}

/// Largest `|d1 w|` over triangles.
pub fn closedness_defect(ext: &ExteriorCalculus, w: &[f64]) -> f64 {
    ext.d1.to_f64().matvec(w).iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Cut-vertex path of generator loop `j`: from corner `j + 3` to its image,
/// corner `j`, clockwise along sides `j + 3`, `j + 2`, `j + 1`.
pub fn generator_loop(mesh: &SurfaceMesh, j: usize) -> Vec<usize> {
    let mut path: Vec<usize> = Vec::new();
    for s in [j + 3, j + 2, j + 1] {
        let mut side = mesh.side_path(s % 8);
        side.reverse();
        if !path.is_empty() {
            side.remove(0);
        }
        path.extend(side);
    }
    path
}

/// Sum of `w` along a path of cut vertices.
pub fn path_integral(mesh: &SurfaceMesh, w: &[f64], path: &[usize]) -> f64 {
    path.windows(2)
        .map(|p| {
            let (k, o) = mesh.find_local_edge(p[0], p[1]).expect("path follows mesh edges");
            o as f64 * mesh.local_edge_value(w, k)
        })
        .sum()
}

/// Periods of a closed cochain over the four generator loops.
pub fn form_periods(mesh: &SurfaceMesh, ext: &ExteriorCalculus, w: &[f64]) -> Result<[f64; 4]> {
    if w.len() != mesh.num_edges() {
        return Err(Error::DimensionMismatch { expected: mesh.num_edges(), got: w.len() });
    }
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let defect = closedness_defect(ext, w);
    if defect > 1e-9 * scale.max(1e-300) {
        return Err(Error::NotClosed { defect });
    }
    Ok(std::array::from_fn(|j| path_integral(mesh, w, &generator_loop(mesh, j))))
}

/// A cut-domain potential whose jump across the side pair of generator `j`
/// is `jumps[j]`: `u(T_j q) - u(q) = jumps[j]` for `q` on side `j + 4`.
/// Non-corner vertices of sides `4..8` and interior vertices get 0; corner
/// values follow the vertex cycle.
pub fn cut_potential(mesh: &SurfaceMesh, jumps: &[f64; 4]) -> Vec<f64> {
    let n = mesh.local_pos.len();
    let mut u = vec![0.0; n];
    let is_corner = |v: usize| mesh.local_sides[v].count_ones() == 2;
    for &(s, v, w) in &mesh.vertex_gluing {
        if !is_corner(v) {
            u[w] = u[v] + jumps[s - 4];
        }
    }
    let corners: Vec<usize> = (0..n).filter(|&v| is_corner(v)).collect();
    let mut known = vec![false; n];
    known[corners[0]] = true;
    u[corners[0]] = 0.0;
    let mut changed = true;
    while changed {
        changed = false;
        for &(s, v, w) in &mesh.vertex_gluing {
            if !is_corner(v) {
                continue;
            }
            if known[v] && !known[w] {
                u[w] = u[v] + jumps[s - 4];
                known[w] = true;
                changed = true;
            } else if known[w] && !known[v] {
                u[v] = u[w] - jumps[s - 4];
                known[v] = true;
                changed = true;
            }
        }
    }
    u
}

/// Quotient cochain `d u` of a cut potential with constant side jumps.
pub fn cut_differential(mesh: &SurfaceMesh, u: &[f64]) -> Vec<f64> {
    mesh.edge_rep.iter().map(|&k| u[mesh.local_edges[k].b] - u[mesh.local_edges[k].a]).collect()
}

/// A discrete harmonic 1-form with its diagnostics.
#[derive(Debug, Clone)]
pub struct HarmonicForm {
    pub cochain: Vec<f64>,
    pub periods: [f64; 4],
    pub l2_norm: f64,
    pub linf_norm: f64,
    /// `||delta w|| / ||w||` with the dual-area weighted vertex norm.
    pub codifferential_residual: f64,
}

impl HarmonicForm {
    pub fn from_cochain(mesh: &SurfaceMesh, ext: &ExteriorCalculus, cochain: Vec<f64>) -> Result<Self> {
        let periods = form_periods(mesh, ext, &cochain)?;
        let (l2_norm, linf_norm) = form_norms(mesh, &cochain);
        let codifferential_residual = if l2_norm > 0.0 { codifferential_norm(ext, &cochain) / l2_norm } else { 0.0 };
        Ok(Self { cochain, periods, l2_norm, linf_norm, codifferential_residual })
    }

    /// `s * self`, with norms and periods scaled exactly.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            cochain: self.cochain.iter().map(|v| v * s).collect(),
            periods: self.periods.map(|p| p * s),
            l2_norm: self.l2_norm * s.abs(),
            linf_norm: self.linf_norm * s.abs(),
            codifferential_residual: self.codifferential_residual,
        }
    }
}

/// `sqrt(sum_v star0_v (delta w)_v^2)` with `delta w = star0^{-1} d0^T star1 w`.
pub fn codifferential_norm(ext: &ExteriorCalculus, w: &[f64]) -> f64 {
    let sw: Vec<f64> = w.iter().zip(&ext.star1).map(|(a, b)| a * b).collect();
    let d = ext.d0.transpose().to_f64().matvec(&sw);
    d.iter().zip(&ext.star0).map(|(x, a)| x * x / a).sum::<f64>().sqrt()
}

/// Removes the exact part of a closed cochain: solves
/// `d0^T star1 d0 a = d0^T star1 w` and returns `w - d0 a`.
pub fn harmonic_projection(ext: &ExteriorCalculus, k: &Csr<f64>, w: &[f64]) -> Result<Vec<f64>> {
    let sw: Vec<f64> = w.iter().zip(&ext.star1).map(|(a, b)| a * b).collect();
    let rhs = ext.d0.transpose().to_f64().matvec(&sw);
    let a = conjugate_gradient(k, &rhs, 1e-14, 20 * k.nrows + 1000, true)?;
    let da = ext.d0.to_f64().matvec(&a);
    Ok(w.iter().zip(&da).map(|(x, y)| x - y).collect())
}

/// Harmonic forms dual to the four generator loops, with period matrix
/// equal to the identity after a final change of basis.
pub fn harmonic_basis(mesh: &SurfaceMesh, ext: &ExteriorCalculus) -> Result<[HarmonicForm; 4]> {
    let k = stiffness(mesh);
    let mut raw = Vec::with_capacity(4);
    for j in 0..4 {
        let mut jumps = [0.0; 4];
        jumps[j] = 1.0;
        let w0 = cut_differential(mesh, &cut_potential(mesh, &jumps));
        raw.push(harmonic_projection(ext, &k, &w0)?);
    }
    let mut pm = faer::Mat::<f64>::zeros(4, 4);
    for (j, w) in raw.iter().enumerate() {
        let p = form_periods(mesh, ext, w)?;
        for i in 0..4 {
            pm[(i, j)] = p[i];
        }
    }
    let inv = pm.partial_piv_lu().inverse();
    let mut out = Vec::with_capacity(4);
    for j in 0..4 {
        let mut c = vec![0.0; mesh.num_edges()];
        for (i, w) in raw.iter().enumerate() {
            let s = inv[(i, j)];
            c.iter_mut().zip(w).for_each(|(c, w)| *c += s * w);
        }
        out.push(HarmonicForm::from_cochain(mesh, ext, c)?);
    }
    Ok(out.try_into().expect("four forms"))
}

/// `sum_k coeffs[k] basis[k]`.
pub fn combine(basis: &[HarmonicForm; 4], coeffs: &[f64; 4]) -> Vec<f64> {
    let mut c = vec![0.0; basis[0].cochain.len()];
    for (f, s) in basis.iter().zip(coeffs) {
        c.iter_mut().zip(&f.cochain).for_each(|(c, w)| *c += s * w);
    }
    c
}
