use super::point::{hyp_distance, midpoint, HPoint};
use crate::error::{Error, Result};
use crate::real::Real;

/// Nodes and positive area weights covering a geodesic polygon.
#[derive(Debug, Clone)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<HPoint<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().fold(T::zero(), |s, w| s + *w)
    }

    /// Applies the rule to `f` with a fixed left-to-right reduction.
    pub fn integrate<F: FnMut(&HPoint<T>) -> T>(&self, mut f: F) -> T {
        self.nodes.iter().zip(&self.weights).fold(T::zero(), |s, (z, w)| s + *w * f(z))
    }
}

/// Interior angles of a hyperbolic triangle with side lengths `a, b, c`,
/// opposite to the respective sides. Half-angle formulas keep small
/// triangles accurate.
pub fn triangle_angles<T: Real>(a: T, b: T, c: T) -> [T; 3] {
    let half = T::lit(0.5);
    let s = (a + b + c) * half;
    let (sa, sb, sc) = ((s - a).max(T::zero()), (s - b).max(T::zero()), (s - c).max(T::zero()));
    let sh = s.sinh();
    let two = T::lit(2.0);
    let ang = |x: T, y: T, opp: T| -> T {
        // tan(A/2) = sqrt(sinh(s-b) sinh(s-c) / (sinh s sinh(s-a)))
        let num = x.sinh() * y.sinh();
        let den = sh * opp.sinh();
        two * num.sqrt().atan2(den.sqrt())
    };
    [ang(sb, sc, sa), ang(sa, sc, sb), ang(sa, sb, sc)]
}

/// Angles of the geodesic triangle `p q r`, at `p`, `q`, `r` in that order.
pub fn vertex_angles<T: Real>(p: &HPoint<T>, q: &HPoint<T>, r: &HPoint<T>) -> [T; 3] {
    let a = hyp_distance(q, r);
    let b = hyp_distance(p, r);
    let c = hyp_distance(p, q);
    triangle_angles(a, b, c)
}

/// Area by angle deficit, `pi - alpha - beta - gamma`.
pub fn triangle_area<T: Real>(p: &HPoint<T>, q: &HPoint<T>, r: &HPoint<T>) -> T {
    let [x, y, z] = vertex_angles(p, q, r);
    T::PI() - x - y - z
}

/// Sign of the orientation of `p q r`: positive when counterclockwise.
pub fn orientation<T: Real>(p: &HPoint<T>, q: &HPoint<T>, r: &HPoint<T>) -> T {
    let [a0, a1, a2] = p.to_hyperboloid();
    let [b0, b1, b2] = q.to_hyperboloid();
    let [c0, c1, c2] = r.to_hyperboloid();
    // Columns ordered (X0, X2, X1): near i, X2 tracks Re z and X1 tracks Im z.
    a0 * (b2 * c1 - b1 * c2) - a2 * (b0 * c1 - b1 * c0) + a1 * (b0 * c2 - b2 * c0)
}

fn subdivide<T: Real>(tri: [HPoint<T>; 3], level: usize, rule: &mut QuadratureRule<T>) {
    if level == 0 {
        let [p, q, r] = tri;
        let (a, b, c) = (p.to_hyperboloid(), q.to_hyperboloid(), r.to_hyperboloid());
        rule.nodes.push(HPoint::from_hyperboloid([a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]]));
        rule.weights.push(triangle_area(&p, &q, &r));
        return;
    }
    let [p, q, r] = tri;
    let (pq, qr, rp) = (midpoint(&p, &q), midpoint(&q, &r), midpoint(&r, &p));
    subdivide([p, pq, rp], level - 1, rule);
    subdivide([pq, q, qr], level - 1, rule);
    subdivide([rp, qr, r], level - 1, rule);
    subdivide([pq, qr, rp], level - 1, rule);
}

/// Centroid rule on a convex geodesic polygon: the polygon is fanned from its
/// hyperboloid barycenter and every fan triangle is split `level` times into
/// four by geodesic midpoints.
pub fn polygon_quadrature<T: Real>(vertices: &[HPoint<T>], level: usize) -> Result<QuadratureRule<T>> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::DegeneratePolygon(format!("{n} vertices")));
    }
    let tol = T::epsilon().sqrt();
    let signs: Vec<T> = (0..n)
        .map(|k| orientation(&vertices[(k + n - 1) % n], &vertices[k], &vertices[(k + 1) % n]))
        .collect();
    let pos = signs.iter().all(|s| *s > tol);
    let neg = signs.iter().all(|s| *s < -tol);
    if !pos && !neg {
        return Err(Error::DegeneratePolygon("vertices are collinear or not in convex position".into()));
    }
    let mut acc = [T::zero(); 3];
    for v in vertices {
        let h = v.to_hyperboloid();
        for k in 0..3 {
            acc[k] = acc[k] + h[k];
        }
    }
    let center = HPoint::from_hyperboloid(acc);
    let mut rule = QuadratureRule { nodes: Vec::new(), weights: Vec::new() };
    for k in 0..n {
        subdivide([center, vertices[k], vertices[(k + 1) % n]], level, &mut rule);
    }
    Ok(rule)
}
