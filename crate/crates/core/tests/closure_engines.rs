mod common;

use common::{arb_tree, q5};
use mckay_core::closure::{
    commutator, cycle_closure, cycle_closure_per_arrow, is_ic, is_ic_by_weighting,
    projected_cycle_rank, rank,
};
use mckay_core::dd::{minimal_generators, ConeGenerators};
use mckay_core::oracle::{closure_bruteforce, default_max_len, TypeZeroCycles};
use mckay_core::quiver::enumerate_cycles;
use mckay_core::{Configuration, Quiver, Rat};
use num_traits::Signed;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_configuration(q: &Quiver, rng: &mut StdRng) -> Configuration {
    let p: f64 = rng.gen_range(0.05..0.6);
    (0..q.arrow_count()).filter(|_| rng.gen_bool(p)).collect()
}

fn agree_on_random(r: u32, w: &[i64], samples: usize, seed: u64) {
    let q = Quiver::from_weights(r, w).unwrap();
    let ml = default_max_len(&q);
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        let s = random_configuration(&q, &mut rng);
        assert_eq!(
            cycle_closure(&q, &s),
            closure_bruteforce(&q, &s, ml),
            "1/{r}{w:?} S = {s:?}"
        );
    }
}

#[test]
fn random_configurations_on_five() {
    agree_on_random(5, &[1, 2, 3], 1000, 5);
}

#[test]
fn random_configurations_on_seven() {
    agree_on_random(7, &[1, 2, 3], 1000, 7);
}

#[test]
fn exhaustive_agreement_up_to_ten_arrows() {
    for (r, w) in [
        (2u32, vec![1i64, 1, 1]),
        (3, vec![1, 1, 1]),
        (5, vec![1, 2]),
        (5, vec![1, 4]),
    ] {
        let q = Quiver::from_weights(r, &w).unwrap();
        let na = q.arrow_count();
        assert!(na <= 10);
        let ml = default_max_len(&q);
        let cycles = TypeZeroCycles::new(&q, ml);
        for mask in 0u32..(1 << na) {
            let s: Configuration = (0..na).filter(|a| mask >> a & 1 == 1).collect();
            let lp = cycle_closure(&q, &s);
            assert_eq!(closure_bruteforce(&q, &s, ml), lp, "1/{r}{w:?} S = {s:?}");
            assert_eq!(cycles.closure(&s), lp, "1/{r}{w:?} S = {s:?}");
        }
    }
}

#[test]
fn spanning_commutator_closed_set_that_is_not_cycle_closed() {
    let q = Quiver::from_weights(7, &[1, 2, 3]).unwrap();
    let s = Configuration::new(vec![0, 3, 4, 5, 12, 13, 17]);
    assert!(s.is_spanning(&q));
    assert_eq!(commutator(&q, &s), s);
    let expected = Configuration::new(vec![0, 3, 4, 5, 9, 12, 13, 17]);
    assert_eq!(cycle_closure(&q, &s), expected);
    assert_eq!(closure_bruteforce(&q, &s, default_max_len(&q)), expected);
}

#[test]
fn walked_out_and_back_connectors_cancel() {
    // Two disjoint cycles of opposite type sum to a type-zero flow that forces arrow 7. Any single
    // closed walk joining them crosses a connector twice, which only cancels in the net reading.
    let q = Quiver::from_weights(7, &[1, 2, 3]).unwrap();
    let s = Configuration::new(vec![3, 6, 15, 16, 18, 20]);
    let closed = cycle_closure(&q, &s);
    assert_eq!(
        closed,
        Configuration::new(vec![3, 6, 7, 12, 15, 16, 18, 19, 20])
    );
    assert_eq!(closure_bruteforce(&q, &s, 63), closed);
}

/// Dimension of the lineality space of the cone spanned by the types of all undirected simple
/// cycles whose backward arrows lie in `s`.
fn lineality_of_projected_cone(q: &Quiver, s: &Configuration) -> usize {
    let n = q.type_count();
    let rays: Vec<Vec<Rat>> = enumerate_cycles(q, q.vertex_count())
        .into_iter()
        .flat_map(|c| [c.reversed(q), c])
        .filter(|c| {
            c.basic_flow(q)
                .iter()
                .enumerate()
                .all(|(a, x)| !x.is_negative() || s.contains(a))
        })
        .map(|c| {
            c.cycle_type(q)
                .into_iter()
                .map(|x| Rat::from_integer(x.into()))
                .collect()
        })
        .collect();
    let cone = minimal_generators(
        n,
        &ConeGenerators {
            rays,
            lineality: Vec::new(),
        },
    );
    cone.lineality.len()
}

fn arb_configuration(na: usize) -> impl Strategy<Value = Configuration> {
    proptest::collection::vec(any::<bool>(), na).prop_map(|m| Configuration::from_mask(&m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_a_closure_operator(s in arb_configuration(15), t in arb_configuration(15)) {
        let q = q5();
        let cs = cycle_closure(&q, &s);
        prop_assert!(s.is_subset(&cs));
        prop_assert!(commutator(&q, &s).is_subset(&cs));
        prop_assert_eq!(cycle_closure(&q, &cs), cs.clone());
        let u = s.union(&t);
        prop_assert!(cs.is_subset(&cycle_closure(&q, &u)));
    }

    #[test]
    fn single_program_matches_per_arrow_programs(s in arb_configuration(15)) {
        let q = q5();
        prop_assert_eq!(cycle_closure(&q, &s), cycle_closure_per_arrow(&q, &s));
    }

    #[test]
    fn rank_is_lineality_of_projected_cone(s in arb_configuration(15)) {
        let q = q5();
        let k = rank(&q, &s);
        prop_assert_eq!(lineality_of_projected_cone(&q, &s), k);
        prop_assert_eq!(lineality_of_projected_cone(&q, &cycle_closure(&q, &s)), k);
        prop_assert!(projected_cycle_rank(&q, &s) <= k);
        prop_assert!(k <= q.type_count());
    }

    #[test]
    fn weighting_criterion_matches_rank_on_trees(t in arb_tree(&q5())) {
        let q = q5();
        prop_assert_eq!(projected_cycle_rank(&q, &t), 0);
        prop_assert_eq!(is_ic_by_weighting(&q, &t).unwrap(), is_ic(&q, &t));
    }
}

#[test]
fn unbarred_cycle_rank_undercounts_on_trees() {
    let q = q5();
    let mut rng = StdRng::seed_from_u64(11);
    let mut seen_gap = false;
    for _ in 0..200 {
        let mut order: Vec<usize> = (0..q.arrow_count()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut comp: Vec<usize> = (0..q.vertex_count()).collect();
        let mut tree = Vec::new();
        for a in order {
            let ar = q.arrow(a);
            let (x, y) = (comp[ar.tail], comp[ar.head]);
            if x != y {
                comp.iter_mut().filter(|c| **c == x).for_each(|c| *c = y);
                tree.push(a);
            }
        }
        let t = Configuration::new(tree);
        assert_eq!(projected_cycle_rank(&q, &t), 0);
        seen_gap |= rank(&q, &t) > 0;
    }
    assert!(seen_gap);
}
