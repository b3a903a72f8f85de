//! Algebraic laws of linear relations on random spans with small Gaussian
//! integer entries.

use proptest::prelude::*;
use volut_linrel::relation::{conj_transpose, mat_mul, Matrix};
use volut_linrel::scalar::from_ints;
use volut_linrel::{compose, LinearRelation};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(proptest::collection::vec((-2i64..=2, -2i64..=2), cols), rows)
        .prop_map(|m| m.into_iter().map(|r| r.into_iter().map(|(a, b)| from_ints(a, b)).collect()).collect())
}

fn relation(src: usize, tgt: usize) -> impl Strategy<Value = LinearRelation> {
    (0..=src + tgt + 1)
        .prop_flat_map(move |k| matrix(k, src + tgt))
        .prop_map(move |rows| LinearRelation::span(src, tgt, rows).unwrap())
}

fn chain3() -> impl Strategy<Value = (LinearRelation, LinearRelation, LinearRelation)> {
    (0usize..=3, 0usize..=3, 0usize..=3, 0usize..=3).prop_flat_map(|(a, b, c, d)| (relation(a, b), relation(b, c), relation(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_is_an_involution_of_complementary_dimension(v in (0usize..=3, 0usize..=3).prop_flat_map(|(m, n)| relation(m, n))) {
        let a = v.adjoint();
        prop_assert_eq!((a.src, a.tgt), (v.tgt, v.src));
        prop_assert_eq!(a.dim() + v.dim(), v.src + v.tgt);
        prop_assert_eq!(a.adjoint(), v);
    }

    #[test]
    fn composition_is_associative_and_unital((u, v, w) in chain3()) {
        let left = compose(&w, &compose(&v, &u).unwrap()).unwrap();
        let right = compose(&compose(&w, &v).unwrap(), &u).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(compose(&LinearRelation::diagonal(u.tgt), &u).unwrap(), u.clone());
        prop_assert_eq!(compose(&u, &LinearRelation::diagonal(u.src)).unwrap(), u);
    }

    #[test]
    fn adjoint_and_reverse_are_contravariant((_, v, w) in chain3()) {
        let wv = compose(&w, &v).unwrap();
        prop_assert_eq!(wv.adjoint(), compose(&v.adjoint(), &w.adjoint()).unwrap());
        prop_assert_eq!(wv.reverse(), compose(&v.reverse(), &w.reverse()).unwrap());
        prop_assert_eq!(v.reverse().reverse(), v);
    }

    #[test]
    fn graphs_compose_as_matrices(
        (m, n, p, s, t) in (1usize..=3, 1usize..=3, 1usize..=3)
            .prop_flat_map(|(m, n, p)| (Just(m), Just(n), Just(p), matrix(p, n), matrix(n, m)))
    ) {
        let gt = LinearRelation::graph(&t, m, n).unwrap();
        let gs = LinearRelation::graph(&s, n, p).unwrap();
        let st = mat_mul(&s, &t, n, m);
        prop_assert_eq!(compose(&gs, &gt).unwrap(), LinearRelation::graph(&st, m, p).unwrap());
        prop_assert_eq!(gt.adjoint(), LinearRelation::graph(&conj_transpose(&t, n, m), n, m).unwrap());
    }

    #[test]
    fn composition_is_monotone(
        (v, extra, w) in (0usize..=3, 0usize..=3, 0usize..=3)
            .prop_flat_map(|(a, b, c)| (relation(a, b), matrix(2, a + b), relation(b, c)))
    ) {
        let mut rows = v.basis().clone();
        rows.extend(extra);
        let bigger = LinearRelation::span(v.src, v.tgt, rows).unwrap();
        prop_assert!(v.included_in(&bigger));
        prop_assert!(compose(&w, &v).unwrap().included_in(&compose(&w, &bigger).unwrap()));
        prop_assert!(bigger.adjoint().included_in(&v.adjoint()));
    }

    #[test]
    fn json_round_trips(v in (0usize..=3, 0usize..=3).prop_flat_map(|(m, n)| relation(m, n))) {
        prop_assert_eq!(LinearRelation::from_json(&v.to_json()).unwrap(), v);
    }
}
