use crate::hgeom::{cosh_distance, hyp_distance, HPoint, MoebiusMap};
use crate::real::Real;
use std::fmt;

/// One of the eight side-pairing letters. Letters `0..4` are the generators
/// `a1, b1, a2, b2`; letter `j + 4` is the inverse of letter `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const ALL: [Letter; 8] = [Letter(0), Letter(1), Letter(2), Letter(3), Letter(4), Letter(5), Letter(6), Letter(7)];

    pub fn new(index: usize) -> Self {
        assert!(index < 8, "letter index out of range");
        Letter(index as u8)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Generator number in `0..4`.
    #[inline]
    pub fn generator(self) -> usize {
        (self.0 % 4) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 >= 4
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter((self.0 + 4) % 8)
    }

    /// Contribution `+-1` to the abelianization coordinate `generator()`.
    #[inline]
    pub fn sign(self) -> i32 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["a1", "b1", "a2", "b2"];
        write!(f, "{}{}", NAMES[self.generator()], if self.is_inverse() { "'" } else { "" })
    }
}

/// Free reduction of a word.
pub fn free_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Exponent sums of the four generators.
pub fn abelianize(word: &[Letter]) -> [i32; 4] {
    let mut ab = [0; 4];
    for l in word {
        ab[l.generator()] += l.sign();
    }
    ab
}

/// Side pairings of the regular octagon with interior angles `pi/4`.
///
/// Sides are numbered counterclockwise with side `j` centered in direction
/// `j pi/4` from `i`; corner `j` sits between sides `j` and `j + 1`. Letter
/// `j` is the translation carrying side `j + 4` onto side `j`, so the tile
/// across side `j` is `T_j D`.
#[derive(Debug, Clone)]
pub struct GeneratorSet<T> {
    pub gens: [MoebiusMap<T>; 8],
    pub relation_word: [Letter; 8],
    pub corners: [HPoint<T>; 8],
    pub inradius: T,
    pub circumradius: T,
}

/// The Bolza surface group.
pub fn bolza_group<T: Real>() -> GeneratorSet<T> {
    let sqrt2 = T::lit(2.0).sqrt();
    let inradius = (T::one() + sqrt2).acosh();
    let circumradius = (T::lit(3.0) + T::lit(2.0) * sqrt2).acosh();
    let quarter = T::FRAC_PI_4();
    let corners: [HPoint<T>; 8] =
        std::array::from_fn(|k| HPoint::polar_at_i(circumradius, quarter * (T::lit(0.5) + T::from_usize(k).unwrap())));
    let gens: [MoebiusMap<T>; 8] =
        std::array::from_fn(|j| MoebiusMap::translation_from_i(quarter * T::from_usize(j).unwrap(), T::lit(2.0) * inradius));
    let relation_word = vertex_cycle(&gens, &corners);
    GeneratorSet { gens, relation_word, corners, inradius, circumradius }
}

/// Walks the eight tiles around corner 0 and records the sides crossed.
fn vertex_cycle<T: Real>(gens: &[MoebiusMap<T>; 8], corners: &[HPoint<T>; 8]) -> [Letter; 8] {
    let p = corners[0];
    let mut w = MoebiusMap::identity();
    let mut entered: Option<usize> = None;
    let mut word = [Letter(0); 8];
    for slot in word.iter_mut() {
        let local = w.inverse().apply(&p);
        let k = (0..8)
            .min_by(|&a, &b| hyp_distance(&corners[a], &local).partial_cmp(&hyp_distance(&corners[b], &local)).unwrap())
            .unwrap();
        let sides = [k, (k + 1) % 8];
        let s = match entered {
            Some(e) if sides[0] == e => sides[1],
            Some(_) => sides[0],
            None => sides[1],
        };
        *slot = Letter::new(s);
        w = w * gens[s];
        entered = Some((s + 4) % 8);
    }
    word
}

impl<T: Real> GeneratorSet<T> {
    #[inline]
    pub fn letter(&self, l: Letter) -> &MoebiusMap<T> {
        &self.gens[l.index()]
    }

    /// Ordered product of the letters of `word`.
    pub fn evaluate(&self, word: &[Letter]) -> MoebiusMap<T> {
        word.iter().fold(MoebiusMap::identity(), |m, l| m * *self.letter(*l))
    }

    /// The octagon center, `i`.
    pub fn center(&self) -> HPoint<T> {
        HPoint::i()
    }

    /// Upper bound for `d(x, y)` over all `y` in the octagon.
    pub fn reach(&self, x: &HPoint<T>) -> T {
        self.corners.iter().fold(T::zero(), |m, c| m.max(hyp_distance(x, c)))
    }

    /// Whether `z` lies in the closed octagon, up to a relative slack.
    pub fn contains(&self, z: &HPoint<T>, slack: T) -> bool {
        let c0 = cosh_distance(z, &self.center());
        self.gens.iter().all(|g| c0 <= cosh_distance(z, &g.apply(&self.center())) * (T::one() + slack))
    }

    /// Dirichlet reduction of `z` into the octagon.
    pub fn reduce(&self, z: &HPoint<T>) -> Reduction<T> {
        let o = self.center();
        let images: [HPoint<T>; 8] = std::array::from_fn(|j| self.gens[j].apply(&o));
        let mut cur = *z;
        let mut g = MoebiusMap::identity();
        let mut word = Vec::new();
        let shrink = T::one() - T::lit(64.0) * T::epsilon();
        for _ in 0..10_000 {
            let c0 = cosh_distance(&cur, &o);
            let (j, cj) = (0..8)
                .map(|j| (j, cosh_distance(&cur, &images[j])))
                .fold((0, T::infinity()), |best, x| if x.1 < best.1 { x } else { best });
            if cj >= c0 * shrink {
                break;
            }
            let l = Letter::new(j);
            cur = self.gens[l.inverse().index()].apply(&cur);
            g = g * self.gens[j];
            word.push(l);
        }
        let word = free_reduce(&word);
        let abelian = abelianize(&word);
        Reduction { point: cur, map: g, word, abelian }
    }
}

/// Result of [`GeneratorSet::reduce`]: `z = map(point)` with `point` in the
/// octagon and `map` the product of `word`.
#[derive(Debug, Clone)]
pub struct Reduction<T> {
    pub point: HPoint<T>,
    pub map: MoebiusMap<T>,
    pub word: Vec<Letter>,
    pub abelian: [i32; 4],
}
