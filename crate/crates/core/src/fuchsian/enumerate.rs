use super::group::{abelianize, free_reduce, GeneratorSet, Letter};
use crate::error::{Error, Result};
use crate::hgeom::{hyp_distance, translation_length, HPoint, MoebiusMap};
use crate::real::Real;

/// Default hard cap on enumeration radii.
pub const DEFAULT_RADIUS_CAP: f64 = 12.0;

/// A group element with its freely reduced word and cached displacement.
#[derive(Debug, Clone)]
pub struct GroupElement<T> {
    pub word: Vec<Letter>,
    pub map: MoebiusMap<T>,
    pub displacement: T,
}

impl<T: Real> GroupElement<T> {
    pub fn abelian(&self) -> [i32; 4] {
        abelianize(&self.word)
    }
}

/// All `g` with `d(o, g o) <= radius` for the octagon center `o`, grown as a
/// tree: the parent of a tile `g D` is its side neighbour whose center is
/// closest to `o` (lowest letter on ties). For a Dirichlet tiling that
/// neighbour is strictly closer than `g o`, so the tree reaches every tile
/// inside the ball without visiting any tile outside it and without a
/// duplicate check.
#[derive(Debug, Clone)]
pub struct OrbitTree<T> {
    pub maps: Vec<MoebiusMap<T>>,
    pub cosh_disp: Vec<T>,
    pub parent: Vec<u32>,
    pub letter: Vec<Letter>,
    pub abelian: Vec<[i16; 4]>,
    pub radius: T,
}

impl<T: Real> OrbitTree<T> {
    pub fn grow(gens: &GeneratorSet<T>, radius: T) -> Self {
        let limit = radius.cosh() * (T::one() + T::lit(1e-12));
        let tie = T::epsilon().sqrt();
        let mut tree = OrbitTree {
            maps: vec![MoebiusMap::identity()],
            cosh_disp: vec![T::one()],
            parent: vec![0],
            letter: vec![Letter::new(0)],
            abelian: vec![[0; 4]],
            radius,
        };
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &p in &frontier {
                let gp = tree.maps[p];
                for l in Letter::ALL {
                    if p != 0 && l == tree.letter[p].inverse() {
                        continue;
                    }
                    let child = gp * *gens.letter(l);
                    let c = child.cosh_displacement_at_i();
                    if c > limit {
                        continue;
                    }
                    let nb: [T; 8] = std::array::from_fn(|k| (child * gens.gens[k]).cosh_displacement_at_i());
                    let m = nb.iter().fold(T::infinity(), |a, b| a.min(*b));
                    let chosen = (0..8).find(|&k| nb[k] <= m * (T::one() + tie)).unwrap();
                    if chosen != l.inverse().index() {
                        continue;
                    }
                    let mut ab = tree.abelian[p];
                    ab[l.generator()] += l.sign() as i16;
                    tree.maps.push(child);
                    tree.cosh_disp.push(c);
                    tree.parent.push(p as u32);
                    tree.letter.push(l);
                    tree.abelian.push(ab);
                    next.push(tree.maps.len() - 1);
                }
            }
            frontier = next;
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Word of node `k`, read from the root.
    pub fn word(&self, mut k: usize) -> Vec<Letter> {
        let mut w = Vec::new();
        while k != 0 {
            w.push(self.letter[k]);
            k = self.parent[k] as usize;
        }
        w.reverse();
        w
    }

    pub fn abelian_i32(&self, k: usize) -> [i32; 4] {
        self.abelian[k].map(i32::from)
    }
}

/// Radius of the tree needed so that every `g` with `d(x, g x) <= r` is found
/// for a base point `x` of the octagon.
fn tree_radius<T: Real>(gens: &GeneratorSet<T>, x: &HPoint<T>, r: T) -> T {
    r + T::lit(2.0) * hyp_distance(&gens.center(), x)
}

/// All nontrivial `g` with `d(x, g x) <= r`, in breadth-first order.
pub fn enumerate<T: Real>(gens: &GeneratorSet<T>, x: &HPoint<T>, r: T) -> Result<Vec<GroupElement<T>>> {
    enumerate_capped(gens, x, r, T::lit(DEFAULT_RADIUS_CAP))
}

/// [`enumerate`] with an explicit radius cap.
pub fn enumerate_capped<T: Real>(gens: &GeneratorSet<T>, x: &HPoint<T>, r: T, cap: T) -> Result<Vec<GroupElement<T>>> {
    if !(r >= T::zero()) {
        return Err(Error::InvalidArgument(format!("enumeration radius {r} is negative")));
    }
    if r > cap {
        let partial = enumerate_capped(gens, x, cap, cap)?.len();
        return Err(Error::EnumerationCap { requested: r.as_f64(), cap: cap.as_f64(), found: partial });
    }
    let red = gens.reduce(x);
    let x0 = red.point;
    let tree = OrbitTree::grow(gens, tree_radius(gens, &x0, r));
    let delta = red.map;
    let delta_inv = delta.inverse();
    let dw: Vec<Letter> = red.word.clone();
    let dw_inv: Vec<Letter> = dw.iter().rev().map(|l| l.inverse()).collect();
    let mut out = Vec::new();
    for k in 1..tree.len() {
        let g = tree.maps[k];
        let d = hyp_distance(&x0, &g.apply(&x0));
        if d <= r {
            let mut word = dw.clone();
            word.extend(tree.word(k));
            word.extend(dw_inv.iter().copied());
            out.push(GroupElement { word: free_reduce(&word), map: delta * g * delta_inv, displacement: d });
        }
    }
    Ok(out)
}

/// Integer-shell histogram `#Gamma_r(x)` with the counting bounds attached.
#[derive(Debug, Clone)]
pub struct ShellTable<T> {
    pub basepoint: HPoint<T>,
    pub max_radius: T,
    /// `counts[r]` is the number of `g` with `r < d(x, g x) <= r + 1`.
    pub counts: Vec<usize>,
    pub inj_at_base: T,
    /// `(cosh(r + 1 + r_g) - cosh(r - r_g)) / (cosh(r_g) - 1)`.
    pub cosh_bounds: Vec<T>,
    /// `e^{r_g + 1} r_g^{-2} e^r`.
    pub exp_bounds: Vec<T>,
    pub total: usize,
}

impl<T: Real> ShellTable<T> {
    /// Shells violating the cosh-ratio bound or the exponential bound.
    pub fn violations(&self) -> Vec<usize> {
        (0..self.counts.len())
            .filter(|&r| {
                let c = T::from_usize(self.counts[r]).unwrap();
                c > self.cosh_bounds[r] || c > self.exp_bounds[r]
            })
            .collect()
    }
}

/// Lattice-count bound for a shell, with `rg` the injectivity radius.
pub fn shell_bound_cosh<T: Real>(r: T, rg: T) -> T {
    ((r + T::one() + rg).cosh() - (r - rg).cosh()) / (rg.cosh() - T::one())
}

/// The weaker exponential form of [`shell_bound_cosh`].
pub fn shell_bound_exp<T: Real>(r: T, rg: T) -> T {
    (rg + T::one()).exp() / (rg * rg) * r.exp()
}

pub fn shell_table<T: Real>(gens: &GeneratorSet<T>, x: &HPoint<T>, r: T) -> Result<ShellTable<T>> {
    let elems = enumerate(gens, x, r)?;
    let shells = r.ceil().to_usize().unwrap_or(0);
    let mut counts = vec![0usize; shells];
    let mut min_d = T::infinity();
    for e in &elems {
        min_d = min_d.min(e.displacement);
        let s = (e.displacement.ceil().to_usize().unwrap_or(1)).saturating_sub(1).min(shells.saturating_sub(1));
        counts[s] += 1;
    }
    let inj = if min_d.is_finite() { min_d * T::lit(0.5) } else { injectivity_radius(gens, x, r + T::one())? };
    let cosh_bounds = (0..shells).map(|k| shell_bound_cosh(T::from_usize(k).unwrap(), inj)).collect();
    let exp_bounds = (0..shells).map(|k| shell_bound_exp(T::from_usize(k).unwrap(), inj)).collect();
    Ok(ShellTable { basepoint: *x, max_radius: r, counts, inj_at_base: inj, cosh_bounds, exp_bounds, total: elems.len() })
}

/// `Inj_x = min d(x, g x) / 2` over the elements found within `search_r`.
pub fn injectivity_radius<T: Real>(gens: &GeneratorSet<T>, x: &HPoint<T>, search_r: T) -> Result<T> {
    let elems = enumerate(gens, x, search_r)?;
    elems
        .iter()
        .map(|e| e.displacement)
        .fold(None, |m: Option<T>, d| Some(m.map_or(d, |m| m.min(d))))
        .map(|d| d * T::lit(0.5))
        .ok_or(Error::EmptyEnumeration { radius: search_r.as_f64() })
}

/// Deterministic, roughly area-uniform sample points of the octagon interior
/// (a golden-angle spiral in geodesic polar coordinates about the center).
pub fn sample_domain<T: Real>(gens: &GeneratorSet<T>, n: usize) -> Vec<HPoint<T>> {
    let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    let rc = gens.circumradius;
    let area_frac = |u: T| (T::one() + u * (rc.cosh() - T::one())).acosh();
    let mut out = Vec::with_capacity(n);
    let mut m = n;
    while out.len() < n {
        out.clear();
        for k in 0..m {
            let u = (T::from_usize(k).unwrap() + T::lit(0.5)) / T::from_usize(m).unwrap();
            let p = HPoint::polar_at_i(area_frac(u), golden * T::from_usize(k).unwrap());
            if gens.contains(&p, T::zero()) {
                out.push(p);
            }
        }
        m += (n - out.len().min(n)).max(1);
    }
    out.truncate(n);
    out
}

/// Global injectivity radius estimated as the minimum of `Inj_x` over
/// `n` sample points; returns `(estimate, sample spacing)`.
pub fn global_injectivity_radius<T: Real>(gens: &GeneratorSet<T>, n: usize) -> Result<(T, T)> {
    let search = T::lit(2.0) * gens.circumradius + T::one();
    let mut best = T::infinity();
    for p in sample_domain(gens, n) {
        best = best.min(injectivity_radius(gens, &p, search)?);
    }
    let spacing = (T::lit(4.0) * T::PI() / T::from_usize(n).unwrap()).sqrt();
    Ok((best, spacing))
}

/// Systole as the minimal translation length. Every conjugacy class of
/// length `l` has a representative with `d(o, g o) <= l + 2 r_c`, so the
/// search radius is enlarged until it covers the candidate plus that margin.
pub fn systole<T: Real>(gens: &GeneratorSet<T>, search_r: T) -> Result<T> {
    let o = gens.center();
    let margin = T::lit(2.0) * gens.circumradius;
    let mut r = search_r;
    loop {
        let elems = enumerate_capped(gens, &o, r, r.max(T::lit(DEFAULT_RADIUS_CAP)))?;
        let best = elems
            .iter()
            .filter_map(|e| translation_length(&e.map).ok())
            .fold(None, |m: Option<T>, l| Some(m.map_or(l, |m| m.min(l))));
        match best {
            Some(l) if r >= l + margin => return Ok(l),
            Some(l) => r = l + margin,
            None => r = r + T::one(),
        }
    }
}

fn find_element<T: Real>(sorted: &[(T, MoebiusMap<T>)], target: &MoebiusMap<T>, disp: T) -> Option<usize> {
    let tol = T::lit(1e-7);
    let lo = sorted.partition_point(|e| e.0 < disp - tol);
    (lo..sorted.len()).take_while(|&k| sorted[k].0 <= disp + tol).find(|&k| {
        let scale = target.entries().iter().fold(T::one(), |m, v| m.max(v.abs()));
        sorted[k].1.approx_eq(target, tol * scale)
    })
}

/// Number of unoriented primitive geodesic loops of length `<= l` based at
/// `x`: elements that are not proper powers, with `g` and `g^-1` counted once.
pub fn primitive_loop_count<T: Real>(gens: &GeneratorSet<T>, x: &HPoint<T>, l: T) -> Result<usize> {
    let elems = enumerate(gens, x, l)?;
    let mut sorted: Vec<(T, MoebiusMap<T>)> = elems.iter().map(|e| (e.displacement, e.map)).collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut proper_power = vec![false; sorted.len()];
    for k in 0..sorted.len() {
        let beta = sorted[k].1;
        let mut p = beta * beta;
        loop {
            let d = hyp_distance(x, &p.apply(x));
            if d > l {
                break;
            }
            if let Some(j) = find_element(&sorted, &p, d) {
                proper_power[j] = true;
            }
            p = p * beta;
        }
    }
    let primitive = proper_power.iter().filter(|b| !**b).count();
    Ok(primitive / 2)
}

/// `N_L(X)` estimated as the maximum of [`primitive_loop_count`] over sample
/// points; returns `(estimate, sample spacing)`.
pub fn max_loop_count<T: Real>(gens: &GeneratorSet<T>, l: T, samples: &[HPoint<T>]) -> Result<usize> {
    let mut best = 0;
    for p in samples {
        best = best.max(primitive_loop_count(gens, p, l)?);
    }
    Ok(best)
}

/// `#{g : d(z, g w) <= rho}` for `z, w` in the octagon.
pub fn count_translates<T: Real>(tree: &OrbitTree<T>, z: &HPoint<T>, w: &HPoint<T>, rho: T) -> usize {
    tree.maps.iter().filter(|g| hyp_distance(z, &g.apply(w)) <= rho).count()
}

/// Tree large enough for [`count_translates`] with radius `rho` and points in the octagon.
pub fn translate_tree<T: Real>(gens: &GeneratorSet<T>, rho: T) -> OrbitTree<T> {
    OrbitTree::grow(gens, rho + T::lit(2.0) * gens.circumradius)
}
