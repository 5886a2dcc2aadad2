use crate::error::{Error, Result};
use crate::sparse::Csr;
use crate::surfmesh::{triangle_vector, SurfaceMesh};

/// Discrete `-h^2 Delta_w` split into its pieces. The matrix of the
/// operator is `h^2 (stiffness + advection - diag(potential))`, acting in
/// the generalized problem `A v = lambda diag(mass) v`.
#[derive(Debug, Clone)]
pub struct TwistedOperator {
    pub stiffness: Csr<f64>,
    /// Skew part of `2 int phi_i <w, d phi_j>`.
    pub advection: Csr<f64>,
    /// Lumped `int |w|^2 phi_i`.
    pub potential: Vec<f64>,
    pub mass: Vec<f64>,
    pub h: f64,
    pub level: usize,
    /// Largest per-triangle `|w_T|`, the discrete sup norm.
    pub linf: f64,
    /// Largest entry of the symmetric part dropped from the advection,
    /// relative to the largest advection entry. Bounded by the
    /// codifferential residual of the form.
    pub adjoint_defect: f64,
}

pub fn assemble_twisted(mesh: &SurfaceMesh, omega: &[f64], h: f64) -> Result<TwistedOperator> {
    if omega.len() != mesh.num_edges() {
        return Err(Error::DimensionMismatch { expected: mesh.num_edges(), got: omega.len() });
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("h must be positive, got {h}")));
    }
    let n = mesh.num_vertices();
    let mut k_trip = Vec::with_capacity(9 * mesh.num_triangles());
    let mut b_trip = Vec::new();
    let mut potential = vec![0.0; n];
    let mut linf: f64 = 0.0;
    for t in 0..mesh.num_triangles() {
        let vs = mesh.tri_vertices(t);
        let g = &mesh.charts[t].grad;
        let a = mesh.tri_area[t];
        for i in 0..3 {
            for j in 0..3 {
                k_trip.push((vs[i], vs[j], a * (g[i][0] * g[j][0] + g[i][1] * g[j][1])));
            }
        }
        let w = triangle_vector(mesh, omega, t);
        let w2 = w[0] * w[0] + w[1] * w[1];
        linf = linf.max(w2.sqrt());
        if w2 == 0.0 {
            continue;
        }
        for i in 0..3 {
            potential[vs[i]] += a / 3.0 * w2;
            for j in 0..3 {
                b_trip.push((vs[i], vs[j], 2.0 * a / 3.0 * (w[0] * g[j][0] + w[1] * g[j][1])));
            }
        }
    }
    let stiffness = Csr::from_triplets(n, n, &k_trip);
    let raw = Csr::from_triplets(n, n, &b_trip);
    let raw_t = raw.transpose();
    let mut skew = Vec::with_capacity(2 * raw.nnz());
    let (mut sym_max, mut max): (f64, f64) = (0.0, 0.0);
    for (r, c, v) in raw.triplets() {
        skew.push((r, c, 0.5 * v));
        skew.push((c, r, -0.5 * v));
        sym_max = sym_max.max((v + raw_t.get(r, c)).abs());
        max = max.max(v.abs());
    }
    let advection = Csr::from_triplets(n, n, &skew);
    Ok(TwistedOperator {
        stiffness,
        advection,
        potential,
        mass: mesh.vertex_area.clone(),
        h,
        level: mesh.level,
        linf,
        adjoint_defect: if max > 0.0 { sym_max / max } else { 0.0 },
    })
}

impl TwistedOperator {
    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    pub fn is_untwisted(&self) -> bool {
        self.advection.nnz() == 0 && self.potential.iter().all(|p| *p == 0.0)
    }

    /// The operator `h^2 (K + t B - t^2 P)` of the scaled form `t w`.
    pub fn matrix_at(&self, t: f64) -> Csr<f64> {
        let h2 = self.h * self.h;
        let mut trip: Vec<(usize, usize, f64)> = self.stiffness.triplets().into_iter().map(|(r, c, v)| (r, c, h2 * v)).collect();
        trip.extend(self.advection.triplets().into_iter().map(|(r, c, v)| (r, c, h2 * t * v)));
        trip.extend(self.potential.iter().enumerate().map(|(i, p)| (i, i, -h2 * t * t * p)));
        Csr::from_triplets(self.dim(), self.dim(), &trip)
    }

    pub fn matrix(&self) -> Csr<f64> {
        self.matrix_at(1.0)
    }
}
