#![allow(dead_code)]

use mckay_core::{Configuration, Quiver, ZetaVector};
use proptest::prelude::*;

pub fn q5() -> Quiver {
    Quiver::from_weights(5, &[1, 2, 3]).unwrap()
}

/// Spanning trees built by Kruskal over a random arrow order.
pub fn arb_tree(q: &Quiver) -> impl Strategy<Value = Configuration> {
    let na = q.arrow_count();
    let nv = q.vertex_count();
    let q = q.clone();
    proptest::collection::vec(0..na, na).prop_filter_map(
        "no spanning tree from this order",
        move |order| {
            let mut comp: Vec<usize> = (0..nv).collect();
            let mut tree = Vec::new();
            for a in order {
                let ar = q.arrow(a);
                let (x, y) = (comp[ar.tail], comp[ar.head]);
                if x != y {
                    comp.iter_mut().filter(|c| **c == x).for_each(|c| *c = y);
                    tree.push(a);
                }
            }
            (tree.len() + 1 == nv).then(|| Configuration::new(tree))
        },
    )
}

/// Integral ζ with entries in `-bound..=bound` before the last one absorbs the sum.
pub fn arb_zeta(nv: usize, bound: i64) -> impl Strategy<Value = ZetaVector> {
    proptest::collection::vec(-bound..=bound, nv - 1).prop_map(|mut v| {
        let s: i64 = v.iter().sum();
        v.push(-s);
        ZetaVector::from_ints(&v).unwrap()
    })
}

pub fn zeta(v: &[i64]) -> ZetaVector {
    ZetaVector::from_ints(v).unwrap()
}
