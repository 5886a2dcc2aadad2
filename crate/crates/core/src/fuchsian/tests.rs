use super::*;
use crate::hgeom::{hyp_distance, polygon_quadrature, translation_length, HPoint, MoebiusMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn g() -> GeneratorSet<f64> {
    bolza_group()
}

#[test]
fn relation_word_is_identity() {
    let gs = g();
    let prod = gs.evaluate(&gs.relation_word);
    assert!(prod.approx_eq(&MoebiusMap::identity(), 1e-9), "{prod:?}");
    // Each generator appears once with each sign.
    let ab = abelianize(&gs.relation_word);
    assert_eq!(ab, [0; 4]);
    assert_eq!(free_reduce(&gs.relation_word).len(), 8);
}

#[test]
fn generators_pair_opposite_sides() {
    let gs = g();
    for j in 0..8 {
        let t = gs.gens[j];
        assert!(t.is_hyperbolic());
        assert!((translation_length(&t).unwrap() - 2.0 * gs.inradius).abs() < 1e-9);
        assert!((gs.gens[(j + 4) % 8] * t).approx_eq(&MoebiusMap::identity(), 1e-12));
        // side j+4 runs from corner j+3 to corner j+4 and lands on side j reversed
        let a = t.apply(&gs.corners[(j + 3) % 8]);
        let b = t.apply(&gs.corners[(j + 4) % 8]);
        assert!(hyp_distance(&a, &gs.corners[j]) < 1e-9, "letter {j}");
        assert!(hyp_distance(&b, &gs.corners[(j + 7) % 8]) < 1e-9, "letter {j}");
    }
}

#[test]
fn octagon_has_area_four_pi_and_systole_sides() {
    let gs = g();
    let area = polygon_quadrature(&gs.corners, 3).unwrap().total_weight();
    assert!((area - 4.0 * PI).abs() < 1e-8);
    let side = hyp_distance(&gs.corners[0], &gs.corners[1]);
    assert!((side - 2.0 * (1.0 + 2f64.sqrt()).acosh()).abs() < 1e-12);
}

#[test]
fn translates_do_not_overlap() {
    let gs = g();
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let mut inside = 0;
    while inside < 200 {
        let p = HPoint::polar_at_i(r.gen_range(0.0..gs.circumradius), r.gen_range(0.0..2.0 * PI));
        if !gs.contains(&p, -1e-9) {
            continue;
        }
        inside += 1;
        for t in &gs.gens {
            assert!(!gs.contains(&t.apply(&p), -1e-9));
        }
    }
}

#[test]
fn reduction_lands_in_domain() {
    let gs = g();
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let z = HPoint::new(r.gen_range(-3.0..3.0), r.gen_range(0.02..4.0)).unwrap();
        let red = gs.reduce(&z);
        assert!(gs.contains(&red.point, 1e-9));
        assert!(hyp_distance(&red.map.apply(&red.point), &z) < 1e-7);
        assert!(gs.evaluate(&red.word).approx_eq(&red.map, 1e-7 * red.map.entries().iter().fold(1.0f64, |m, v| m.max(v.abs()))));
    }
}

fn brute_force(gs: &GeneratorSet<f64>, x: &HPoint<f64>, r: f64, depth: usize) -> Vec<MoebiusMap<f64>> {
    let mut found: Vec<MoebiusMap<f64>> = Vec::new();
    let mut layer: Vec<(Vec<Letter>, MoebiusMap<f64>)> = vec![(vec![], MoebiusMap::identity())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (w, m) in &layer {
            for l in Letter::ALL {
                if w.last() == Some(&l.inverse()) {
                    continue;
                }
                let mm = *m * gs.gens[l.index()];
                let mut ww = w.clone();
                ww.push(l);
                if hyp_distance(x, &mm.apply(x)) <= r
                    && !mm.approx_eq(&MoebiusMap::identity(), 1e-7)
                    && !found.iter().any(|f| f.approx_eq(&mm, 1e-7))
                {
                    found.push(mm);
                }
                next.push((ww, mm));
            }
        }
        layer = next;
    }
    found
}

#[test]
fn enumeration_matches_brute_force_at_radius_six() {
    let gs = g();
    let o = gs.center();
    let elems = enumerate(&gs, &o, 6.0).unwrap();
    let max_len = elems.iter().map(|e| e.word.len()).max().unwrap();
    let bf = brute_force(&gs, &o, 6.0, max_len + 1);
    let bf_more = brute_force(&gs, &o, 6.0, max_len + 2);
    assert_eq!(bf.len(), bf_more.len(), "brute force has not stabilized");
    assert_eq!(elems.len(), bf.len());
    for e in &elems {
        assert!(bf.iter().any(|m| m.approx_eq(&e.map, 1e-7)));
        assert!(gs.evaluate(&e.word).approx_eq(&e.map, 1e-9 * e.displacement.cosh()));
        assert_eq!(free_reduce(&e.word), e.word);
    }
    for (a, ea) in elems.iter().enumerate() {
        for eb in &elems[a + 1..] {
            assert!(!ea.map.approx_eq(&eb.map, 1e-7));
        }
    }
}

#[test]
fn enumeration_from_off_center_basepoint_matches_brute_force() {
    let gs = g();
    let x = HPoint::polar_at_i(1.9, 0.3);
    let elems = enumerate(&gs, &x, 5.0).unwrap();
    let bf = brute_force(&gs, &x, 5.0, 7);
    assert_eq!(elems.len(), bf.len());
}

#[test]
fn enumeration_small_radius_and_inversion() {
    let gs = g();
    let o = gs.center();
    let inj = injectivity_radius(&gs, &o, 4.0).unwrap();
    assert!(enumerate(&gs, &o, 2.0 * inj - 1e-6).unwrap().is_empty());
    let elems = enumerate(&gs, &o, 7.0).unwrap();
    for e in &elems {
        let inv = e.map.inverse();
        assert!(elems.iter().any(|f| f.map.approx_eq(&inv, 1e-7)));
        if let Ok(l) = translation_length(&e.map) {
            assert!(e.displacement >= l - 1e-9);
        }
    }
    assert!(matches!(enumerate(&gs, &o, 13.0), Err(crate::Error::EnumerationCap { found, .. }) if found > 0));
}

#[test]
fn enumeration_is_conjugation_consistent() {
    let gs = g();
    let x = HPoint::polar_at_i(0.7, 2.0);
    let gx = gs.gens[2].apply(&x);
    let a = enumerate(&gs, &x, 6.0).unwrap();
    let b = enumerate(&gs, &gx, 6.0).unwrap();
    assert_eq!(a.len(), b.len());
}

#[test]
fn shell_tables_respect_both_bounds() {
    let gs = g();
    for p in sample_domain(&gs, 10) {
        let tab = shell_table(&gs, &p, 8.0).unwrap();
        assert!(tab.violations().is_empty(), "{:?}", tab.counts);
        assert_eq!(tab.counts.iter().sum::<usize>(), tab.total);
        for (r, c) in tab.counts.iter().enumerate() {
            if (r as f64) + 1.0 < 2.0 * tab.inj_at_base {
                assert_eq!(*c, 0);
            }
        }
    }
}

#[test]
fn injectivity_radius_examples() {
    let gs = g();
    let o = gs.center();
    let inj = injectivity_radius(&gs, &o, 4.0).unwrap();
    assert!((inj - gs.inradius).abs() < 1e-12);
    let min_gen = gs.gens.iter().map(|t| hyp_distance(&o, &t.apply(&o))).fold(f64::INFINITY, f64::min);
    assert!((inj - min_gen / 2.0).abs() < 1e-12);
    assert_eq!(inj, injectivity_radius(&gs, &o, 8.0).unwrap());
    assert!(matches!(injectivity_radius(&gs, &o, 1.0), Err(crate::Error::EmptyEnumeration { .. })));
    let x = HPoint::polar_at_i(1.2, 1.0);
    let ix = injectivity_radius(&gs, &x, 7.0).unwrap();
    assert!(ix <= 0.5 * hyp_distance(&x, &gs.gens[0].apply(&x)) + 1e-12);
    let (glob, spacing) = global_injectivity_radius(&gs, 40).unwrap();
    assert!(glob >= gs.inradius - 1e-9 && glob < 2.0 && spacing > 0.0);
}

#[test]
fn systole_of_bolza() {
    let gs = g();
    let s = systole(&gs, 4.0).unwrap();
    assert!((s - 2.0 * (1.0 + 2f64.sqrt()).acosh()).abs() < 1e-9);
    for t in &gs.gens {
        assert!(s <= translation_length(t).unwrap() + 1e-12);
    }
    // cross-check: translation lengths of everything with displacement <= 8
    let o = gs.center();
    let m = enumerate(&gs, &o, 8.0).unwrap().iter().filter_map(|e| translation_length(&e.map).ok()).fold(f64::INFINITY, f64::min);
    assert!((m - s).abs() < 1e-9);
}

#[test]
fn periods_are_a_homomorphism() {
    let gs = g();
    let p = [1.0, 0.0, 0.0, 0.0];
    let w = [Letter::new(0), Letter::new(1), Letter::new(4)];
    assert_eq!(word_period(&p, &w), 0.0);
    let mut r = ChaCha8Rng::seed_from_u64(11);
    let elems = enumerate(&gs, &gs.center(), 6.0).unwrap();
    for _ in 0..100 {
        let q: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let a = &elems[r.gen_range(0..elems.len())];
        let b = &elems[r.gen_range(0..elems.len())];
        let mut w = a.word.clone();
        w.extend(&b.word);
        let w = free_reduce(&w);
        assert!((word_period(&q, &w) - period(&q, a) - period(&q, b)).abs() < 1e-12);
        assert!(word_period(&q, &gs.relation_word).abs() < 1e-12);
        // conjugates of the relation
        let mut c = a.word.clone();
        c.extend(gs.relation_word);
        c.extend(a.word.iter().rev().map(|l| l.inverse()));
        assert!(word_period(&q, &free_reduce(&c)).abs() < 1e-12);
        assert!((abelian_period(&q, &a.abelian()) - period(&q, a)).abs() < 1e-12);
    }
}

#[test]
fn primitive_loops() {
    let gs = g();
    let o = gs.center();
    assert_eq!(primitive_loop_count(&gs, &o, 3.0).unwrap(), 0);
    let n4 = primitive_loop_count(&gs, &o, 4.0).unwrap();
    assert_eq!(n4, 4);
    // The square of a generator has displacement 4 r_in and is not primitive.
    let l = 4.0 * gs.inradius + 0.01;
    let all = enumerate(&gs, &o, l).unwrap().len();
    let prim = primitive_loop_count(&gs, &o, l).unwrap();
    assert!(2 * prim <= all - 8);
}

#[test]
fn loop_count_lemma_holds_on_a_grid() {
    let gs = g();
    let samples = sample_domain(&gs, 6);
    let big_r = 4.0;
    let n = max_loop_count(&gs, big_r, &samples).unwrap();
    let (inj, _) = global_injectivity_radius(&gs, 20).unwrap();
    let tree = translate_tree(&gs, big_r / 2.0);
    for z in &samples {
        for w in &samples {
            for k in 1..=4 {
                let r = big_r * k as f64 / 4.0;
                let c = count_translates(&tree, z, w, r / 2.0) as f64;
                assert!(c <= 2.0 * n as f64 * r / inj + 2.0);
            }
        }
    }
}

#[test]
fn single_precision_group() {
    let gs = bolza_group::<f32>();
    assert!(gs.evaluate(&gs.relation_word).approx_eq(&MoebiusMap::identity(), 1e-3));
    let n = enumerate(&gs, &gs.center(), 5.0f32).unwrap().len();
    assert_eq!(n, enumerate(&g(), &g().center(), 5.0).unwrap().len());
}
