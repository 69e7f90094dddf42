mod common;

use std::collections::BTreeSet;

use common::{arb_tree, arb_zeta, q5, zeta};
use mckay_core::closure::{cycle_closure, is_ic, rank};
use mckay_core::flow::{boundary, type_of};
use mckay_core::linalg::{int_det, rank as mat_rank};
use mckay_core::oracle::project_and_hull;
use mckay_core::toric::{
    build_fan, classify_cone, crepancy_check, extreme_points, face_of, k_adjacency, tangent_cone,
    vertex_points, ConeClass,
};
use mckay_core::trees::{
    admissible_cone, admissible_ic_trees, enumerate_ic_trees, enumerate_spanning_trees, is_ic_tree,
    tree_flow, LinearForm,
};
use mckay_core::{Configuration, Int, Quiver, Rat, ZetaVector};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rat(x: i64) -> Rat {
    Rat::from_integer(x.into())
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn random_zeta(nv: usize, bound: i64, rng: &mut StdRng) -> ZetaVector {
    loop {
        let mut v: Vec<i64> = (0..nv - 1).map(|_| rng.gen_range(-bound..=bound)).collect();
        v.push(-v.iter().sum::<i64>());
        let z = zeta(&v);
        if z.is_generic() {
            return z;
        }
    }
}

/// Primitive integer direction of a rational vector.
fn direction(v: &[Rat]) -> Vec<Int> {
    mckay_core::scalar::primitive(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_flow_has_the_prescribed_boundary(t in arb_tree(&q5()), z in arb_zeta(5, 6)) {
        let q = q5();
        let f = tree_flow(&q, &t, &z).unwrap();
        prop_assert_eq!(boundary(&q, &f), z);
        prop_assert!(f.is_integral());
        prop_assert!(f.support().iter().all(|&a| t.contains(a)));
    }

    #[test]
    fn tree_columns_of_the_boundary_are_independent(t in arb_tree(&q5())) {
        // Uniqueness: a flow supported in a tree is determined by its boundary.
        let q = q5();
        let cols: Vec<Vec<Rat>> = t
            .arrows()
            .iter()
            .map(|&a| boundary(&q, &mckay_core::Flow::indicator(&q, a)).values().to_vec())
            .collect();
        prop_assert_eq!(mat_rank(&cols, q.vertex_count()), t.len());
    }

    #[test]
    fn admissibility_is_membership_in_the_admissible_cone(t in arb_tree(&q5()), z in arb_zeta(5, 4)) {
        let q = q5();
        let f = tree_flow(&q, &t, &z).unwrap();
        let cone = admissible_cone(&q, &t).unwrap();
        for form in &cone.forms {
            prop_assert_eq!(form.eval(&z), f.get(form.arrow).clone());
        }
        prop_assert_eq!(cone.contains(&z), f.is_nonnegative());
    }

    #[test]
    fn tangent_cone_only_sees_the_closure(mask in proptest::collection::vec(any::<bool>(), 15)) {
        let q = q5();
        let s = Configuration::from_mask(&mask);
        let c = tangent_cone(&q, &s);
        prop_assert_eq!(&c, &tangent_cone(&q, &cycle_closure(&q, &s)));
        prop_assert_eq!(c.lineality().len(), rank(&q, &s));
    }
}

#[test]
fn path_tree_forms_are_partial_sums() {
    let mut rng = StdRng::seed_from_u64(3);
    for (r, w) in [
        (5u32, vec![1i64, 2, 3]),
        (7, vec![1, 2, 4]),
        (4, vec![1, 1]),
    ] {
        let q = Quiver::from_weights(r, &w).unwrap();
        let n = q.type_count();
        let tree = Configuration::new((1..r as usize).map(|v| v * n).collect());
        let cone = admissible_cone(&q, &tree).unwrap();
        for _ in 0..20 {
            let z = random_zeta(r as usize, 5, &mut rng);
            for form in &cone.forms {
                let k = form.arrow / n - 1;
                let partial: Rat = z.values()[..=k].iter().sum();
                assert_eq!(form.eval(&z), partial, "1/{r}{w:?} arrow {}", form.arrow);
            }
        }
    }
}

#[test]
fn two_vertex_forms_are_plus_minus_zeta_zero() {
    let q = Quiver::from_weights(2, &[1, 1]).unwrap();
    for t in enumerate_spanning_trees(&q).unwrap() {
        let cone = admissible_cone(&q, &t).unwrap();
        let c = &cone.forms[0].coeffs;
        assert!(c == &vec![1, 0] || c == &vec![-1, 0], "{c:?}");
    }
}

#[test]
fn zero_flow_on_every_tree_at_zeta_zero() {
    let q = Quiver::from_weights(3, &[1, 1, 1]).unwrap();
    for t in enumerate_spanning_trees(&q).unwrap() {
        assert!(tree_flow(&q, &t, &ZetaVector::zero(3)).unwrap().is_zero());
    }
}

#[test]
fn catalog_orbits_and_rank_agree_on_every_tree() {
    let q = q5();
    let reduced = enumerate_ic_trees(&q, true).unwrap();
    let full = enumerate_ic_trees(&q, false).unwrap();
    assert_eq!(reduced.spanning_trees, 605);
    assert_eq!(reduced.len(), 55);
    assert_eq!(full.len(), 275);
    assert!(reduced.translation_free);
    assert_eq!(
        reduced.trees.iter().map(|t| t.orbit_size).sum::<usize>(),
        full.len()
    );
    let ic: BTreeSet<Configuration> = full.trees.iter().map(|t| t.tree.clone()).collect();
    for t in enumerate_spanning_trees(&q).unwrap() {
        let by_rank = is_ic(&q, &t);
        assert_eq!(is_ic_tree(&q, &t).unwrap(), by_rank, "{t:?}");
        assert_eq!(ic.contains(&t), by_rank);
    }
}

#[test]
fn worked_example_tree() {
    let q = q5();
    let z = zeta(&[-1, -1, -1, -1, 4]);
    let t = Configuration::new(vec![0, 4, 8, 10]);
    assert!(is_ic(&q, &t));
    assert_eq!(cycle_closure(&q, &t), t);
    let f = tree_flow(&q, &t, &z).unwrap();
    assert!(f.is_nonnegative());
    assert_eq!(type_of(&q, &f), vec![rat(1), rat(3), rat(1)]);
    let gens: BTreeSet<Vec<Int>> = tangent_cone(&q, &t).rays().iter().cloned().collect();
    let expected: BTreeSet<Vec<Int>> = [[1, 1, -1], [1, -2, 1], [-1, 0, 2], [-1, 3, 0]]
        .iter()
        .map(|v| ints(v))
        .collect();
    assert_eq!(gens, expected);

    // The translate by 3 carries the four forms, read with vertex labels v -> -v.
    let t3 = t.translate(&q, 3);
    assert_eq!(t3, Configuration::new(vec![2, 4, 9, 13]));
    assert_eq!(tangent_cone(&q, &t3), tangent_cone(&q, &t));
    let mirrored: BTreeSet<Vec<i64>> = admissible_cone(&q, &t3)
        .unwrap()
        .forms
        .iter()
        .map(|f| (0..5).map(|v| f.coeffs[q.neg(v)]).collect())
        .collect();
    let stated: BTreeSet<Vec<i64>> = [
        [-1, 0, 0, 0, 0],
        [0, 0, -1, 0, 0],
        [0, 0, 0, 0, -1],
        [0, -1, 0, 0, -1],
    ]
    .iter()
    .map(|v| v.to_vec())
    .collect();
    assert_eq!(mirrored, stated);
}

#[test]
fn linear_forms_print_compactly() {
    let f = LinearForm {
        arrow: 0,
        coeffs: vec![-1, 0, -2, 0, 1],
    };
    assert_eq!(f.to_string(), "-z0-2z2+z4");
}

#[test]
fn smoothness_matches_a_unimodular_dual() {
    let q = q5();
    for z in [
        zeta(&[9, 8, -3, -2, -12]),
        zeta(&[-1, -1, -1, -1, 4]),
        ZetaVector::zero(5),
    ] {
        for p in extreme_points(&q, &z).unwrap() {
            let report = classify_cone(&p.cone);
            let dual = p.cone.dual();
            let lattice = p.cone.lattice();
            let coords: Vec<Vec<Int>> = dual
                .rays
                .iter()
                .map(|y| {
                    lattice
                        .rows()
                        .iter()
                        .map(|r| {
                            let s: Rat = r
                                .iter()
                                .zip(y)
                                .map(|(a, b)| Rat::from_integer(a.clone()) * b)
                                .sum();
                            assert!(s.is_integer());
                            s.to_integer()
                        })
                        .collect()
                })
                .collect();
            let unimodular_dual = coords.len() == 3 && int_det(&coords).abs().is_one();
            assert_eq!(report.smooth, unimodular_dual, "{z} at {:?}", p.point);
        }
    }
}

#[test]
fn catalog_images_are_the_extreme_points() {
    let mut rng = StdRng::seed_from_u64(17);
    for (r, w) in [
        (3u32, vec![1i64, 1, 1]),
        (5, vec![1, 2, 3]),
        (6, vec![1, 1, 5]),
        (7, vec![1, 2, 4]),
    ] {
        let q = Quiver::from_weights(r, &w).unwrap();
        let catalog = enumerate_ic_trees(&q, false).unwrap();
        for _ in 0..3 {
            let z = random_zeta(r as usize, 6, &mut rng);
            let admissible = admissible_ic_trees(&q, &z, &catalog).unwrap();
            let images: BTreeSet<Vec<Rat>> =
                admissible.iter().map(|a| type_of(&q, &a.flow)).collect();
            let lp: BTreeSet<Vec<Rat>> = vertex_points(&q, &z).unwrap().into_iter().collect();
            assert_eq!(images, lp, "1/{r}{w:?} at {z}");
            for p in extreme_points(&q, &z).unwrap() {
                let t = admissible
                    .iter()
                    .find(|a| type_of(&q, &a.flow) == p.point)
                    .unwrap();
                assert_eq!(tangent_cone(&q, &t.tree), p.cone);
            }
        }
    }
}

#[test]
fn fan_rays_are_facet_normals() {
    let q = q5();
    for z in [
        zeta(&[9, 8, -3, -2, -12]),
        zeta(&[-1, -1, -1, -1, 4]),
        zeta(&[3, -5, 1, 2, -1]),
    ] {
        let fan = build_fan(&q, &z).unwrap();
        assert!(fan.check_intersections());
        let pts = vertex_points(&q, &z).unwrap();
        let units: Vec<Vec<Rat>> = (0..3)
            .map(|i| (0..3).map(|j| rat(i64::from(i == j))).collect())
            .collect();
        let hull = project_and_hull(&pts, &units, &units);
        let normals: BTreeSet<Vec<Int>> =
            hull.facets.iter().map(|f| direction(&f.normal)).collect();
        let rays: BTreeSet<Vec<Int>> = fan.rays.iter().map(|r| direction(r)).collect();
        assert_eq!(normals, rays, "{z}");
        assert_eq!(fan.maximal.len(), hull.vertices.len());
    }
}

#[test]
fn adjacency_rank_is_the_dimension_of_the_joining_face() {
    let q = q5();
    for z in [zeta(&[9, 8, -3, -2, -12]), zeta(&[-1, -1, -1, -1, 4])] {
        let points = extreme_points(&q, &z).unwrap();
        let units: Vec<Vec<Rat>> = (0..3)
            .map(|i| (0..3).map(|j| rat(i64::from(i == j))).collect())
            .collect();
        let pts: Vec<Vec<Rat>> = points.iter().map(|p| p.point.clone()).collect();
        let hull = project_and_hull(&pts, &units, &units);
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let (a, b) = (
                    hull.vertex_index(&pts[i]).unwrap(),
                    hull.vertex_index(&pts[j]).unwrap(),
                );
                let smallest = hull
                    .faces
                    .iter()
                    .filter(|f| f.vertices.contains(&a) && f.vertices.contains(&b))
                    .map(|f| f.dim)
                    .min()
                    .unwrap();
                let k = k_adjacency(&q, &points[i].support, &points[j].support);
                assert_eq!(k, smallest, "{z}: {:?} {:?}", pts[i], pts[j]);
            }
        }
    }
}

#[test]
fn faces_contain_the_vertices_they_join() {
    let q = q5();
    let z = zeta(&[9, 8, -3, -2, -12]);
    let points = extreme_points(&q, &z).unwrap();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let s = points[i].support.union(&points[j].support);
            let face = face_of(&q, &s, &z).unwrap();
            assert_eq!(face.dim, rank(&q, &s));
            let again = face_of(&q, &points[j].support.union(&points[i].support), &z).unwrap();
            assert_eq!(face, again);
            for p in [&points[i].point, &points[j].point] {
                let mut rows = face.directions.clone();
                rows.push(p.iter().zip(&face.anchor).map(|(x, y)| x - y).collect());
                assert_eq!(mat_rank(&rows, 3), face.dim, "point off its face");
            }
        }
    }
    let single = face_of(&q, &points[0].support, &z).unwrap();
    assert_eq!(single.dim, 0);
    assert_eq!(single.anchor, points[0].point);
}

#[test]
fn generic_vertex_supports_are_spanning_trees() {
    let q = Quiver::from_weights(7, &[1, 2, 4]).unwrap();
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..3 {
        let z = random_zeta(7, 9, &mut rng);
        for p in extreme_points(&q, &z).unwrap() {
            assert!(p.support.is_spanning(&q));
            assert_eq!(p.support.len(), 6);
            assert_eq!(p.tree.as_ref(), Some(&p.support));
        }
    }
}

#[test]
fn apex_at_zeta_zero_is_the_cyclic_quotient() {
    let q = q5();
    let points = extreme_points(&q, &ZetaVector::zero(5)).unwrap();
    assert_eq!(points.len(), 1);
    assert!(points[0].point.iter().all(Zero::is_zero));
    match classify_cone(&points[0].cone).class {
        ConeClass::CyclicQuotient { order, .. } => assert_eq!(order, 5),
        other => panic!("{other:?}"),
    }
}

#[test]
fn crepancy_reports_each_ray() {
    let q = Quiver::from_weights(3, &[1, 1, 1]).unwrap();
    let fan = build_fan(&q, &zeta(&[2, 1, -3])).unwrap();
    let report = crepancy_check(&fan);
    assert!(report.crepant);
    assert_eq!(report.rays.len(), fan.rays.len());
    let non_sl = build_fan(&q5(), &zeta(&[9, 8, -3, -2, -12])).unwrap();
    assert!(!crepancy_check(&non_sl).crepant);
    assert!(non_sl
        .rays
        .iter()
        .all(|r| r.iter().any(|x| x.is_positive())));
}
