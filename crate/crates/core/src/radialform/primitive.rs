use crate::error::{Error, Result};
use crate::surfmesh::{closedness_defect, locate, ExteriorCalculus, SurfaceMesh};
use crate::Point;
use std::collections::VecDeque;

/// Primitive `f` of a closed cochain on the cut octagon, `f(anchor) = 0`.
#[derive(Debug, Clone)]
pub struct PrimitiveField {
    /// Values at the cut vertices.
    pub values: Vec<f64>,
    pub anchor: usize,
    /// `f(T_j q) - f(q)` for `q` on side `j + 4`, read off the glued vertex pairs.
    pub jumps: [f64; 4],
    /// Largest `|f(b) - f(a) - w(ab)|` over cut edges.
    pub edge_defect: f64,
}

/// A point of the plane resolved into the octagon: mesh triangle, Klein
/// barycentric coordinates and the abelianized deck transformation.
#[derive(Debug, Clone, Copy)]
pub struct LiftedPoint {
    pub triangle: usize,
    pub bary: [f64; 3],
    pub abelian: [i32; 4],
}

/// Reduces `z` into the octagon and locates it in the mesh.
pub fn lift_point(mesh: &SurfaceMesh, z: &Point) -> LiftedPoint {
    let r = mesh.group.reduce(z);
    let (triangle, bary) = locate(mesh, &r.point);
    LiftedPoint { triangle, bary, abelian: r.abelian }
}

/// Integrates `w` along a breadth-first spanning tree of the cut 1-skeleton.
pub fn primitive_on_domain(mesh: &SurfaceMesh, ext: &ExteriorCalculus, w: &[f64]) -> Result<PrimitiveField> {
    if w.len() != mesh.num_edges() {
        return Err(Error::DimensionMismatch { expected: mesh.num_edges(), got: w.len() });
    }
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let defect = closedness_defect(ext, w);
    if defect > 1e-9 * scale.max(1e-300) {
        return Err(Error::NotClosed { defect });
    }
    let n = mesh.local_pos.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &mesh.local_edges {
        let v = f64::from(e.sign) * w[e.edge];
        adj[e.a].push((e.b, v));
        adj[e.b].push((e.a, -v));
    }
    let anchor = 0;
    let mut values = vec![f64::NAN; n];
    values[anchor] = 0.0;
    let mut queue = VecDeque::from([anchor]);
    while let Some(a) = queue.pop_front() {
        for &(b, v) in &adj[a] {
            if values[b].is_nan() {
                values[b] = values[a] + v;
                queue.push_back(b);
            }
        }
    }
    let edge_defect = mesh
        .local_edges
        .iter()
        .map(|e| (values[e.b] - values[e.a] - f64::from(e.sign) * w[e.edge]).abs())
        .fold(0.0, f64::max);
    let mut jumps = [0.0; 4];
    let mut seen = [false; 4];
    for &(s, v, u) in &mesh.vertex_gluing {
        if !seen[s - 4] {
            jumps[s - 4] = values[u] - values[v];
            seen[s - 4] = true;
        }
    }
    Ok(PrimitiveField { values, anchor, jumps, edge_defect })
}

impl PrimitiveField {
    /// Linear interpolation inside the octagon.
    pub fn local_value(&self, mesh: &SurfaceMesh, triangle: usize, bary: &[f64; 3]) -> f64 {
        let [a, b, c] = mesh.triangles[triangle];
        bary[0] * self.values[a] + bary[1] * self.values[b] + bary[2] * self.values[c]
    }

    /// Value of the lift to the plane at a resolved point.
    pub fn lifted_value(&self, mesh: &SurfaceMesh, p: &LiftedPoint) -> f64 {
        let shift: f64 = (0..4).map(|j| f64::from(p.abelian[j]) * self.jumps[j]).sum();
        self.local_value(mesh, p.triangle, &p.bary) + shift
    }

    /// Value of the lift at any point of the plane.
    pub fn value(&self, mesh: &SurfaceMesh, z: &Point) -> f64 {
        self.lifted_value(mesh, &lift_point(mesh, z))
    }

    /// Largest mismatch between the two sides of a glued vertex pair after
    /// the jump is removed.
    pub fn gluing_defect(&self, mesh: &SurfaceMesh) -> f64 {
        mesh.vertex_gluing
            .iter()
            .map(|&(s, v, u)| (self.values[u] - self.values[v] - self.jumps[s - 4]).abs())
            .fold(0.0, f64::max)
    }
}
