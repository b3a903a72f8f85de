use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use volut_core::fincat::{random_concrete_category, Category};
use volut_profmor::herm::{analyze_hermitian, enumerate_hermitian, herm_compose, nondegenerate};
use volut_profmor::morita::{balanced_tensor, enumerate_bimodules, small_star_algebras, verify_associator, verify_left_unitor, verify_right_unitor};
use volut_profmor::prof::{
    associator, check_profunctor, check_transformation, coend_partition_by_closure, prof_compose, prof_opposite, random_profunctor, yoneda_left, yoneda_right, Cat, Grid,
};

fn random_cat(rng: &mut ChaCha8Rng, max_objects: usize) -> Cat {
    use rand::Rng;
    let n = rng.gen_range(1..=max_objects);
    Arc::new(random_concrete_category(rng, n, 3 * n, 2, 6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn yoneda_unitors_are_natural_isos(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, d) = (random_cat(&mut rng, 3), random_cat(&mut rng, 3));
        let f = random_profunctor(&mut rng, &Grid::new(d, c).unwrap(), 2);
        prop_assert!(check_profunctor(&f).is_ok());
        let (l, t) = yoneda_left(&f).unwrap();
        prop_assert!(check_transformation(&l.profunctor, &f, &t, true).is_ok());
        let (r, t) = yoneda_right(&f).unwrap();
        prop_assert!(check_transformation(&r.profunctor, &f, &t, true).is_ok());
    }

    #[test]
    fn composition_is_associative_up_to_iso(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cs: Vec<Cat> = (0..4).map(|_| random_cat(&mut rng, 3)).collect();
        let f = random_profunctor(&mut rng, &Grid::new(cs[1].clone(), cs[0].clone()).unwrap(), 2);
        let g = random_profunctor(&mut rng, &Grid::new(cs[2].clone(), cs[1].clone()).unwrap(), 2);
        let h = random_profunctor(&mut rng, &Grid::new(cs[3].clone(), cs[2].clone()).unwrap(), 2);
        let (l, r, t) = associator(&h, &g, &f).unwrap();
        let rep = check_transformation(&l.profunctor, &r.profunctor, &t, true);
        prop_assert!(rep.is_ok(), "{}", rep);
    }

    #[test]
    fn coend_classes_agree_with_closure(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cs: Vec<Cat> = (0..3).map(|_| random_cat(&mut rng, 3)).collect();
        let f = random_profunctor(&mut rng, &Grid::new(cs[1].clone(), cs[0].clone()).unwrap(), 2);
        let g = random_profunctor(&mut rng, &Grid::new(cs[2].clone(), cs[1].clone()).unwrap(), 2);
        let comp = prof_compose(&g, &f).unwrap();
        for e in 0..cs[2].object_count() {
            for c in 0..cs[0].object_count() {
                let classes = coend_partition_by_closure(&g, &f, e, c);
                prop_assert_eq!(classes.len(), comp.profunctor.size(e, c));
            }
        }
    }

    #[test]
    fn opposite_is_an_involution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, d) = (random_cat(&mut rng, 3), random_cat(&mut rng, 3));
        let f = random_profunctor(&mut rng, &Grid::new(d, c).unwrap(), 2);
        let op = prof_opposite(&f).unwrap();
        prop_assert!(check_profunctor(&op).is_ok());
        let back = prof_opposite(&op).unwrap();
        prop_assert_eq!(back.sizes, f.sizes);
        prop_assert_eq!(back.maps, f.maps);
    }

    #[test]
    fn tensor_unitors_and_associator(a in 0usize..6, b in 0usize..6, c in 0usize..6, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let algs = small_star_algebras();
        let (a, b, c) = (&algs[a], &algs[b], &algs[c]);
        let ms = enumerate_bimodules(a, b, 2);
        let ns = enumerate_bimodules(b, c, 2);
        let os = enumerate_bimodules(c, a, 1);
        let (m, n, o) = (i.get(&ms), j.get(&ns), k.get(&os));
        prop_assert!(verify_left_unitor(m).unwrap().is_ok());
        prop_assert!(verify_right_unitor(m).unwrap().0.is_ok());
        prop_assert!(verify_associator(m, n, o).unwrap().is_ok());
        prop_assert!(balanced_tensor(m, n).unwrap().module.dim <= m.dim * n.dim);
    }

    #[test]
    fn hermitian_composites_satisfy_the_fixed_point_equation(a in 0usize..6, b in 0usize..6, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let algs = small_star_algebras();
        let f2 = &algs[0];
        let (a, b) = (&algs[a], &algs[b]);
        let hs: Vec<_> = enumerate_bimodules(f2, a, 1).iter().flat_map(enumerate_hermitian).collect();
        let ks: Vec<_> = enumerate_bimodules(a, b, 1).iter().flat_map(enumerate_hermitian).collect();
        prop_assume!(!hs.is_empty() && !ks.is_empty());
        let (h, k) = (i.get(&hs), j.get(&ks));
        let (comp, report) = herm_compose(h, k).unwrap();
        prop_assert!(report.is_ok(), "{}", report);
        let check = analyze_hermitian(&comp).unwrap();
        prop_assert!(check.fixed_point, "{}", check.report);
        let (_, q) = nondegenerate(&comp).unwrap();
        prop_assert!(q.report.is_ok() && q.honest);
    }
}
