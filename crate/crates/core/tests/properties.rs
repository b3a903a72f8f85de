use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use volut_core::equiv::{adjunction_data_from_volutive, check_pairing, pairing_from_volutive, verify_zorro};
use volut_core::fincat::{
    check_category, opposite_with_map, random_concrete_category, Category, CatRef, FiniteCategory,
};
use volut_core::instances::catalog::{bundled, BUNDLED};
use volut_core::volutive::{
    check_volutive, check_volutive_as, dagger_category, hermitian_points, is_lax_isometry, mutant_violates,
    mutations, shift_structure, volutive_holds, Kind, MutationContext, VolutiveStructure,
};

fn small(name: &str) -> VolutiveStructure {
    bundled(name).unwrap().volutive
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_categories_are_categories(seed in any::<u64>(), n in 1usize..=4, m in 4usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_concrete_category(&mut rng, n, m.max(n), 3, 6);
        prop_assert!(c.morphism_count() <= m.max(n));
        prop_assert!(check_category(&c).is_ok());
        let (op, _) = opposite_with_map(&c).unwrap();
        let (back, _) = opposite_with_map(&op).unwrap();
        prop_assert_eq!(back.morphism_count(), c.morphism_count());
        let json = c.to_json();
        prop_assert_eq!(FiniteCategory::from_json(&json).unwrap().to_json(), json);
    }

    #[test]
    fn local_mutant_check_agrees_with_full_check(seed in any::<u64>(), pick in 0usize..6) {
        let names = ["arrow_swap", "f2vect_2", "lukasiewicz3", "unit_below_top", "finmod_z4", "heyting_chain_3"];
        let v = small(names[pick]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ms = mutations(&v, 1, &mut rng);
        let ctx = MutationContext::new(&v);
        for m in ms.iter().take(60) {
            prop_assert_eq!(mutant_violates(&v, &ctx, m), !volutive_holds(&m.apply(&v), v.kind), "{:?}", m);
        }
    }

    #[test]
    fn strict_implies_lax_on_mutants(seed in any::<u64>()) {
        let v = small("f2vect_2");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in mutations(&v, 2, &mut rng) {
            let w = m.apply(&v);
            if volutive_holds(&w, Kind::Strict) {
                prop_assert!(volutive_holds(&w, Kind::Lax));
            }
        }
    }

    #[test]
    fn zorro_tracks_lax_coherence(seed in any::<u64>()) {
        let v = small("f3vect_2");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in mutations(&v, 2, &mut rng).into_iter().filter(|m| matches!(m, volut_core::volutive::Mutation::Eta { .. })) {
            let w = m.apply(&v);
            let zorro = verify_zorro(&adjunction_data_from_volutive(&w)).is_ok();
            prop_assert_eq!(zorro, volutive_holds(&w, Kind::Lax));
        }
    }
}

#[test]
fn shifts_stay_coherent_on_bundled_instances() {
    for name in BUNDLED {
        if *name == "f3vect_3" {
            continue;
        }
        let v = small(name);
        for k in 0..=2 {
            let r = check_volutive(&shift_structure(&v, k));
            assert!(r.is_ok(), "{name} k={k}: {r}");
        }
    }
}

#[test]
fn lax_isometries_are_dagger_isometries() {
    for name in ["f2vect_2", "f3vect_2", "finmod_z4", "lukasiewicz3_dualizing"] {
        let v = small(name);
        let dc = dagger_category(&v);
        let pts: Vec<_> = hermitian_points(&v).into_iter().filter(|p| p.honest).collect();
        for (i, p) in pts.iter().enumerate() {
            for (j, q) in pts.iter().enumerate() {
                for x in v.base.hom(p.object, q.object) {
                    let lax = is_lax_isometry(&v, p, q, x);
                    let y = dc.from_base(i, j, x);
                    let iso = dc.try_compose(dc.dagger(y), y) == Some(dc.identity(i));
                    assert_eq!(lax, iso, "{name}");
                }
            }
        }
    }
}

#[test]
fn pairings_of_small_instances_are_valid() {
    for name in ["terminal", "arrow_swap", "f2vect_2", "bool2", "finmod_z4", "finmod_t2f2"] {
        let v = small(name);
        assert!(check_volutive(&v).is_ok(), "{name}");
        let r = check_pairing(&pairing_from_volutive(&v));
        assert!(r.is_ok(), "{name}: {r}");
    }
}

#[test]
fn module_instances() {
    let t2 = bundled("finmod_t2f2").unwrap();
    let v = &t2.volutive;
    assert!(check_volutive(v).is_ok());
    assert!(!check_volutive_as(v, Kind::Strict).is_ok());
    let (sub, rv) = volut_core::volutive::reflexive_subcategory(v).unwrap();
    assert!(check_volutive(&rv).is_ok());
    assert!(sub.object_count() < v.base.object_count());
    let z4 = bundled("finmod_z4").unwrap();
    let c: CatRef = z4.volutive.base.clone();
    assert!(check_category(&*c).is_ok());
    let _ = Arc::strong_count(&c);
}
