use crate::error::{Error, Result};
use crate::fuchsian::{bolza_group, GeneratorSet};
use crate::hgeom::{hyp_distance, midpoint, triangle_angles, HPoint};
use crate::Point;
use std::collections::HashMap;

/// Default cap on the subdivision level.
pub const DEFAULT_MAX_LEVEL: usize = 7;

/// An edge of the cut octagon with the quotient edge it represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalEdge {
    pub a: usize,
    pub b: usize,
    pub edge: usize,
    /// `+1` when `a -> b` agrees with the orientation of `edge`.
    pub sign: i8,
}

/// Per-triangle flattening: a Euclidean triangle with the same edge lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart {
    pub pos: [[f64; 2]; 3],
    /// Gradients of the three hat functions.
    pub grad: [[f64; 2]; 3],
    pub area: f64,
    /// Cotangents of the Euclidean angles at the three corners.
    pub cot: [f64; 3],
}

/// Triangulated octagon with its side pairings glued, viewed both as the cut
/// (simply connected) complex and as the closed quotient surface.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub level: usize,
    pub group: GeneratorSet<f64>,
    /// Positions of the cut-complex vertices.
    pub local_pos: Vec<Point>,
    /// Bit `s` set when the cut vertex lies on octagon side `s`.
    pub local_sides: Vec<u8>,
    /// Quotient vertex of each cut vertex.
    pub local_to_vertex: Vec<usize>,
    /// Counterclockwise cut-vertex triples.
    pub triangles: Vec<[usize; 3]>,
    /// Cut edges opposite to corner `k` of each triangle.
    pub tri_local_edges: Vec<[usize; 3]>,
    pub local_edges: Vec<LocalEdge>,
    /// Cut edge index by sorted cut-vertex pair.
    pub local_edge_index: HashMap<(usize, usize), usize>,
    /// Quotient edges as quotient vertex pairs (tail, head).
    pub edges: Vec<[usize; 2]>,
    /// A cut-edge representative of each quotient edge with the same orientation.
    pub edge_rep: Vec<usize>,
    pub edge_len: Vec<f64>,
    pub vertex_rep: Vec<usize>,
    pub tri_angles: Vec<[f64; 3]>,
    pub tri_area: Vec<f64>,
    pub charts: Vec<Chart>,
    /// Lumped dual areas (one third of incident triangle areas).
    pub vertex_area: Vec<f64>,
    /// For each side `s` in `4..8`, pairs `(v, w)` of cut vertices with
    /// `w = T_{s-4}(v)` on side `s - 4`.
    pub vertex_gluing: Vec<(usize, usize, usize)>,
    /// Subdivision history: `levels[l]` are the triangles of level `l`
    /// and `children[l][t]` the four triangles of level `l + 1` inside `t`.
    pub levels: Vec<Vec<[usize; 3]>>,
    pub children: Vec<Vec<[usize; 4]>>,
    pub warnings: Vec<String>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

fn chart(l: [f64; 3]) -> Chart {
    // l[k] is the length of the edge opposite corner k.
    let (la, lb, lc) = (l[0], l[1], l[2]);
    let cos_a = ((lb * lb + lc * lc - la * la) / (2.0 * lb * lc)).clamp(-1.0, 1.0);
    let sin_a = (1.0 - cos_a * cos_a).sqrt();
    let pos = [[0.0, 0.0], [lc, 0.0], [lb * cos_a, lb * sin_a]];
    let area = 0.5 * lc * lb * sin_a;
    let mut grad = [[0.0; 2]; 3];
    let mut cot = [0.0; 3];
    for k in 0..3 {
        let (p, q) = (pos[(k + 1) % 3], pos[(k + 2) % 3]);
        // Rotate the opposite edge q - p by +90 degrees and scale.
        grad[k] = [-(q[1] - p[1]) / (2.0 * area), (q[0] - p[0]) / (2.0 * area)];
        let u = [p[0] - pos[k][0], p[1] - pos[k][1]];
        let v = [q[0] - pos[k][0], q[1] - pos[k][1]];
        cot[k] = (u[0] * v[0] + u[1] * v[1]) / (u[0] * v[1] - u[1] * v[0]).abs();
    }
    Chart { pos, grad, area, cot }
}

impl SurfaceMesh {
    /// Builds the mesh at `level` under the default level cap.
    pub fn build(level: usize) -> Result<Self> {
        build_mesh_capped(level, DEFAULT_MAX_LEVEL)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_rep.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_triangles() as i64
    }

    pub fn total_area(&self) -> f64 {
        self.tri_area.iter().sum()
    }

    /// Quotient vertices of triangle `t`.
    pub fn tri_vertices(&self, t: usize) -> [usize; 3] {
        self.triangles[t].map(|v| self.local_to_vertex[v])
    }

    /// Cut edge joining cut vertices `a` and `b`, with orientation `+1` when
    /// it is stored as `a -> b`.
    pub fn find_local_edge(&self, a: usize, b: usize) -> Option<(usize, i8)> {
        self.local_edge_index.get(&(a.min(b), a.max(b))).map(|&k| (k, if self.local_edges[k].a == a { 1 } else { -1 }))
    }

    /// Value of the quotient 1-cochain `w` along the cut edge `k` traversed
    /// from `local_edges[k].a` to `.b`.
    #[inline]
    pub fn local_edge_value(&self, w: &[f64], k: usize) -> f64 {
        let e = &self.local_edges[k];
        e.sign as f64 * w[e.edge]
    }

    /// Cut vertices on side `s` ordered from corner `s - 1` to corner `s`.
    pub fn side_path(&self, s: usize) -> Vec<usize> {
        let start = self.group.corners[(s + 7) % 8];
        let mut v: Vec<usize> = (0..self.local_pos.len()).filter(|&k| self.local_sides[k] & (1 << s) != 0).collect();
        v.sort_by(|&a, &b| hyp_distance(&start, &self.local_pos[a]).partial_cmp(&hyp_distance(&start, &self.local_pos[b])).unwrap());
        v
    }
}

/// Builds the level-`level` triangulation: the octagon is fanned into eight
/// triangles about its center and each triangle is split into four by
/// geodesic midpoints `level` times.
pub fn build_mesh_capped(level: usize, cap: usize) -> Result<SurfaceMesh> {
    if level > cap {
        return Err(Error::LevelCap { level, cap });
    }
    let group = bolza_group::<f64>();
    let mut pos: Vec<Point> = vec![HPoint::i()];
    let mut sides: Vec<u8> = vec![0];
    for k in 0..8 {
        pos.push(group.corners[k]);
        // corner k lies on sides k and k + 1
        sides.push((1u8 << k) | (1u8 << ((k + 1) % 8)));
    }
    let mut tris: Vec<[usize; 3]> = (0..8).map(|j| [0, 1 + (j + 7) % 8, 1 + j]).collect();
    let mut levels = vec![tris.clone()];
    let mut children = Vec::new();
    for _ in 0..level {
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, pos: &mut Vec<Point>, sides: &mut Vec<u8>| -> usize {
            let key = (a.min(b), a.max(b));
            *mids.entry(key).or_insert_with(|| {
                pos.push(midpoint(&pos[a], &pos[b]));
                sides.push(sides[a] & sides[b]);
                pos.len() - 1
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        let mut ch = Vec::with_capacity(tris.len());
        for &[a, b, c] in &tris {
            let ab = mid(a, b, &mut pos, &mut sides);
            let bc = mid(b, c, &mut pos, &mut sides);
            let ca = mid(c, a, &mut pos, &mut sides);
            let base = next.len();
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
            ch.push([base, base + 1, base + 2, base + 3]);
        }
        tris = next;
        levels.push(tris.clone());
        children.push(ch);
    }

    // Glue boundary vertices: T_{s-4} carries side s onto side s - 4.
    let nl = pos.len();
    let mut uf = UnionFind((0..nl).collect());
    let mut vertex_gluing = Vec::new();
    let mut partner: HashMap<(usize, usize), usize> = HashMap::new();
    for s in 4..8 {
        let t = group.gens[s - 4];
        let targets: Vec<usize> = (0..nl).filter(|&k| sides[k] & (1 << (s - 4)) != 0).collect();
        for v in (0..nl).filter(|&k| sides[k] & (1 << s) != 0) {
            let img = t.apply(&pos[v]);
            let w = *targets
                .iter()
                .min_by(|&&a, &&b| hyp_distance(&img, &pos[a]).partial_cmp(&hyp_distance(&img, &pos[b])).unwrap())
                .unwrap();
            let gap = hyp_distance(&img, &pos[w]);
            if gap > 1e-8 {
                return Err(Error::InvalidArgument(format!("side pairing mismatch {gap:e} on side {s}")));
            }
            uf.union(v, w);
            partner.insert((v, s), w);
            vertex_gluing.push((s, v, w));
        }
    }
    let mut vertex_of_root: HashMap<usize, usize> = HashMap::new();
    let mut local_to_vertex = vec![0; nl];
    let mut vertex_rep = Vec::new();
    for v in 0..nl {
        let r = uf.find(v);
        let id = *vertex_of_root.entry(r).or_insert_with(|| {
            vertex_rep.push(v);
            vertex_rep.len() - 1
        });
        local_to_vertex[v] = id;
    }

    // Cut edges, then quotient edges. Edges on sides 4..8 are identified
    // with their images on sides 0..4.
    let mut local_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut local_edges: Vec<LocalEdge> = Vec::new();
    let mut tri_local_edges = Vec::with_capacity(tris.len());
    for &[a, b, c] in &tris {
        let mut te = [0; 3];
        for (k, (p, q)) in [(b, c), (c, a), (a, b)].into_iter().enumerate() {
            let key = (p.min(q), p.max(q));
            te[k] = *local_index.entry(key).or_insert_with(|| {
                local_edges.push(LocalEdge { a: key.0, b: key.1, edge: usize::MAX, sign: 1 });
                local_edges.len() - 1
            });
        }
        tri_local_edges.push(te);
    }
    let glued_side = |e: &LocalEdge| -> Option<usize> { (4..8).find(|&s| sides[e.a] & sides[e.b] & (1 << s) != 0) };
    let mut edges = Vec::new();
    let mut edge_rep = Vec::new();
    for k in 0..local_edges.len() {
        if glued_side(&local_edges[k]).is_none() {
            let e = &mut local_edges[k];
            e.edge = edges.len();
            edges.push([local_to_vertex[e.a], local_to_vertex[e.b]]);
            edge_rep.push(k);
        }
    }
    for k in 0..local_edges.len() {
        if let Some(s) = glued_side(&local_edges[k]) {
            let e = local_edges[k];
            let (pa, pb) = (partner[&(e.a, s)], partner[&(e.b, s)]);
            let j = local_index[&(pa.min(pb), pa.max(pb))];
            let target = local_edges[j];
            local_edges[k].edge = target.edge;
            local_edges[k].sign = if target.a == pa { target.sign } else { -target.sign };
        }
    }

    let mut edge_len = vec![0.0; edges.len()];
    for (e, &k) in edge_rep.iter().enumerate() {
        edge_len[e] = hyp_distance(&pos[local_edges[k].a], &pos[local_edges[k].b]);
    }
    let mut tri_angles = Vec::with_capacity(tris.len());
    let mut tri_area = Vec::with_capacity(tris.len());
    let mut charts = Vec::with_capacity(tris.len());
    let mut vertex_area = vec![0.0; vertex_rep.len()];
    let mut warnings = Vec::new();
    for (t, &[a, b, c]) in tris.iter().enumerate() {
        let l = [hyp_distance(&pos[b], &pos[c]), hyp_distance(&pos[c], &pos[a]), hyp_distance(&pos[a], &pos[b])];
        let ang = triangle_angles(l[0], l[1], l[2]);
        if ang.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::InvalidArgument(format!("triangle {t} has a nonpositive angle")));
        }
        let area = std::f64::consts::PI - ang[0] - ang[1] - ang[2];
        for v in [a, b, c] {
            vertex_area[local_to_vertex[v]] += area / 3.0;
        }
        tri_angles.push(ang);
        tri_area.push(area);
        charts.push(chart(l));
    }
    let mut mesh = SurfaceMesh {
        level,
        group,
        local_pos: pos,
        local_sides: sides,
        local_to_vertex,
        triangles: tris,
        tri_local_edges,
        local_edges,
        local_edge_index: local_index,
        edges,
        edge_rep,
        edge_len,
        vertex_rep,
        tri_angles,
        tri_area,
        charts,
        vertex_area,
        vertex_gluing,
        levels,
        children,
        warnings: Vec::new(),
    };
    let star1 = super::dec::hodge_star1(&mesh);
    let negative = star1.iter().filter(|w| **w <= 0.0).count();
    if negative > 0 {
        warnings.push(format!("{negative} edges with nonpositive cotangent weight (obtuse opposite angles)"));
    }
    mesh.warnings = warnings;
    Ok(mesh)
}
