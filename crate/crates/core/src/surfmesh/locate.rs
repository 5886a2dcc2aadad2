use super::build::SurfaceMesh;
use crate::Point;

fn klein(z: &Point) -> [f64; 2] {
    let w = z.to_disk();
    let r2 = w.0 * w.0 + w.1 * w.1;
    [2.0 * w.0 / (1.0 + r2), 2.0 * w.1 / (1.0 + r2)]
}

/// Barycentric coordinates of `z` in the geodesic triangle `(a, b, c)`.
/// Geodesics are straight in the Klein model, so these are affine there.
pub fn klein_barycentric(a: &Point, b: &Point, c: &Point, z: &Point) -> [f64; 3] {
    let (a, b, c, p) = (klein(a), klein(b), klein(c), klein(z));
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
    let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
    [1.0 - l1 - l2, l1, l2]
}

/// Finest-level triangle containing `z` (a point of the closed octagon)
/// and its Klein barycentric coordinates. Descends the subdivision tree,
/// choosing at each step the child whose smallest coordinate is largest,
/// so points marginally outside the octagon still land in a boundary
/// triangle with slightly negative coordinates.
pub fn locate(mesh: &SurfaceMesh, z: &Point) -> (usize, [f64; 3]) {
    let pos = &mesh.local_pos;
    let best = |cands: &mut dyn Iterator<Item = usize>, tris: &[[usize; 3]]| -> (usize, [f64; 3]) {
        let mut out = (usize::MAX, [f64::NAN; 3]);
        let mut score = f64::NEG_INFINITY;
        for t in cands {
            let [a, b, c] = tris[t];
            let l = klein_barycentric(&pos[a], &pos[b], &pos[c], z);
            let m = l[0].min(l[1]).min(l[2]);
            if m > score {
                score = m;
                out = (t, l);
            }
        }
        out
    };
    let mut cur = best(&mut (0..mesh.levels[0].len()), &mesh.levels[0]);
    for l in 0..mesh.level {
        let kids = mesh.children[l][cur.0];
        cur = best(&mut kids.into_iter(), &mesh.levels[l + 1]);
    }
    cur
}
