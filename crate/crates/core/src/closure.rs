//! Configurations, the commutator, type-zero cycle closure, rank and n-weightings.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank as mat_rank};
use crate::lp::{LinearProgram, Relation};
use crate::quiver::Quiver;
use crate::{Int, Rat};

/// A set of arrow ids, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Configuration(Vec<usize>);

impl Configuration {
    pub fn new(mut arrows: Vec<usize>) -> Self {
        arrows.sort_unstable();
        arrows.dedup();
        Configuration(arrows)
    }

    pub fn all(q: &Quiver) -> Self {
        Configuration((0..q.arrow_count()).collect())
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        Configuration(
            mask.iter()
                .enumerate()
                .filter(|(_, &m)| m)
                .map(|(i, _)| i)
                .collect(),
        )
    }

    pub fn arrows(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn mask(&self, narrows: usize) -> Vec<bool> {
        let mut m = vec![false; narrows];
        for &a in &self.0 {
            m[a] = true;
        }
        m
    }

    pub fn union(&self, other: &Configuration) -> Configuration {
        Configuration::new(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &Configuration) -> bool {
        self.0.iter().all(|&a| other.contains(a))
    }

    /// Image under the vertex translation `v -> v + g`.
    pub fn translate(&self, q: &Quiver, g: usize) -> Configuration {
        Configuration::new(self.0.iter().map(|&a| q.translate_arrow(a, g)).collect())
    }

    pub fn check(&self, q: &Quiver) -> Result<()> {
        match self.0.iter().find(|&&a| a >= q.arrow_count()) {
            Some(&a) => Err(Error::ArrowOutOfRange(a)),
            None => Ok(()),
        }
    }

    /// Vertices touched by some arrow, and whether that is all of them.
    pub fn is_spanning(&self, q: &Quiver) -> bool {
        let mut seen = vec![false; q.vertex_count()];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); q.vertex_count()];
        for &a in &self.0 {
            let ar = q.arrow(a);
            adj[ar.tail].push(ar.head);
            adj[ar.head].push(ar.tail);
        }
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl FromIterator<usize> for Configuration {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Configuration::new(iter.into_iter().collect())
    }
}

/// Smallest superset in which each length-two path `v -i-> -j->` is present iff `v -j-> -i->` is.
pub fn commutator(q: &Quiver, s: &Configuration) -> Configuration {
    let n = q.type_count();
    let mut mask = s.mask(q.arrow_count());
    loop {
        let mut changed = false;
        for v in 0..q.vertex_count() {
            for i in 0..n {
                for j in i + 1..n {
                    let a1 = q.arrow_at(v, i);
                    let a2 = q.arrow_at(q.arrow(a1).head, j);
                    let b1 = q.arrow_at(v, j);
                    let b2 = q.arrow_at(q.arrow(b1).head, i);
                    let p = mask[a1] && mask[a2];
                    let p2 = mask[b1] && mask[b2];
                    if p != p2 {
                        for a in [a1, a2, b1, b2] {
                            changed |= !mask[a];
                            mask[a] = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return Configuration::from_mask(&mask);
        }
    }
}

/// A closed type-zero flow, non-negative outside `closed`, with value at least 1 on `target`.
fn forcing_witness(q: &Quiver, closed: &[bool], target: usize) -> Option<Vec<Rat>> {
    let mut lp = closed_type_zero_flows(q, closed, 0);
    lp.add_sparse(&[(target, Rat::one())], Relation::Ge, Rat::one());
    lp.feasible_point()
}

/// Closure under the type-zero cycle rule, decided by linear feasibility per candidate arrow.
pub fn cycle_closure_per_arrow(q: &Quiver, s: &Configuration) -> Configuration {
    let na = q.arrow_count();
    let mut closed = commutator(q, s).mask(na);
    loop {
        let mut changed = false;
        for a in 0..na {
            if closed[a] {
                continue;
            }
            if let Some(w) = forcing_witness(q, &closed, a) {
                let fresh: Vec<usize> = (0..na)
                    .filter(|&b| !closed[b] && w[b].is_positive())
                    .collect();
                for b in fresh {
                    closed[b] = true;
                }
                changed = true;
            }
        }
        if !changed {
            return Configuration::from_mask(&closed);
        }
    }
}

/// Closure under the type-zero cycle rule.
///
/// All candidate arrows are tested in one linear program: a closed type-zero flow `f`, free on
/// the current set and non-negative elsewhere, with capped indicators `0 <= y_b <= min(f_b, 1)`
/// whose sum is maximised. Since the feasible flows form a cone, the optimum has `y_b = 1` for
/// every arrow that the per-arrow test would accept.
pub fn cycle_closure(q: &Quiver, s: &Configuration) -> Configuration {
    let na = q.arrow_count();
    let mut closed = commutator(q, s).mask(na);
    loop {
        let open: Vec<usize> = (0..na).filter(|&a| !closed[a]).collect();
        if open.is_empty() {
            return Configuration::from_mask(&closed);
        }
        let mut lp = closed_type_zero_flows(q, &closed, open.len());
        let mut objective = vec![Rat::zero(); na + open.len()];
        for (k, &b) in open.iter().enumerate() {
            let y = na + k;
            lp.add_sparse(
                &[(y, Rat::one()), (b, -Rat::one())],
                Relation::Le,
                Rat::zero(),
            );
            lp.add_sparse(&[(y, Rat::one())], Relation::Le, Rat::one());
            objective[y] = Rat::one();
        }
        let x = lp
            .maximize(&objective)
            .point()
            .expect("the zero flow is feasible and y is capped");
        let fresh: Vec<usize> = open
            .iter()
            .enumerate()
            .filter(|(k, _)| x[na + k].is_positive())
            .map(|(_, &b)| b)
            .collect();
        if fresh.is_empty() {
            return Configuration::from_mask(&closed);
        }
        for b in fresh {
            closed[b] = true;
        }
    }
}

fn closed_type_zero_flows(q: &Quiver, closed: &[bool], extra: usize) -> LinearProgram<Rat> {
    let na = q.arrow_count();
    let mut lp: LinearProgram<Rat> = LinearProgram::new(na + extra);
    for (a, &c) in closed.iter().enumerate() {
        if c {
            lp.set_free(a);
        }
    }
    for v in 0..q.vertex_count() {
        let mut terms: Vec<(usize, Rat)> = q.incoming(v).iter().map(|&a| (a, Rat::one())).collect();
        terms.extend(q.outgoing(v).map(|a| (a, -Rat::one())));
        lp.add_sparse(&terms, Relation::Eq, Rat::zero());
    }
    for i in 0..q.type_count() {
        let terms: Vec<(usize, Rat)> = q
            .arrows()
            .iter()
            .filter(|a| a.kind == i)
            .map(|a| (a.id, Rat::one()))
            .collect();
        lp.add_sparse(&terms, Relation::Eq, Rat::zero());
    }
    lp
}

/// Dimension of `π Z₀(S̄)`.
pub fn rank(q: &Quiver, s: &Configuration) -> usize {
    let closure = cycle_closure(q, s);
    projected_cycle_rank(q, &closure)
}

/// Dimension of the span of cycle types for cycles inside `s` itself.
pub fn projected_cycle_rank(q: &Quiver, s: &Configuration) -> usize {
    mat_rank(&projected_cycle_span(q, s), q.type_count())
}

/// Types of a basis of the closed flows supported in `s`.
pub fn projected_cycle_span(q: &Quiver, s: &Configuration) -> Vec<Vec<Rat>> {
    let cols = s.arrows();
    let d: Vec<Vec<Rat>> = (0..q.vertex_count())
        .map(|v| {
            cols.iter()
                .map(|&a| {
                    let ar = q.arrow(a);
                    Rat::from_integer(Int::from(i32::from(ar.head == v) - i32::from(ar.tail == v)))
                })
                .collect()
        })
        .collect();
    nullspace(&d, cols.len())
        .iter()
        .map(|f| {
            let mut t = vec![Rat::zero(); q.type_count()];
            for (x, &a) in f.iter().zip(cols) {
                t[q.arrow(a).kind] += x;
            }
            t
        })
        .collect()
}

pub fn equivalent(q: &Quiver, s: &Configuration, s2: &Configuration) -> bool {
    cycle_closure(q, s) == cycle_closure(q, s2)
}

/// Extreme configuration: the closure carries no cycle of non-zero type.
pub fn is_ic(q: &Quiver, s: &Configuration) -> bool {
    rank(q, s) == 0
}

/// Vertex labels in `Z^n` stepping by `e_{π(a)}` along certified arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weighting {
    pub anchor: usize,
    pub values: Vec<Option<Vec<Int>>>,
}

impl Weighting {
    pub fn value(&self, v: usize) -> Option<&[Int]> {
        self.values[v].as_deref()
    }

    /// Whether `W(h(a)) − W(t(a)) = e_{π(a)}`.
    pub fn certifies(&self, q: &Quiver, a: usize) -> bool {
        let ar = q.arrow(a);
        match (self.value(ar.tail), self.value(ar.head)) {
            (Some(t), Some(h)) => h.iter().zip(t).enumerate().all(|(i, (x, y))| {
                let d = x - y;
                if i == ar.kind {
                    d.is_one()
                } else {
                    d.is_zero()
                }
            }),
            _ => false,
        }
    }

    pub fn to_json(&self) -> WeightingJson {
        WeightingJson {
            anchor: self.anchor,
            values: self
                .values
                .iter()
                .enumerate()
                .filter_map(|(v, w)| {
                    w.as_ref()
                        .map(|w| (v, w.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightingJson {
    pub anchor: usize,
    pub values: crate::flow::IndexedMap<Vec<String>>,
}

/// Spanning tree check: `|Q₀| − 1` arrows reaching every vertex.
pub fn check_spanning_tree(q: &Quiver, t: &Configuration) -> Result<()> {
    t.check(q)?;
    if t.len() + 1 != q.vertex_count() || !t.is_spanning(q) {
        return Err(Error::NotSpanningTree);
    }
    Ok(())
}

/// The n-weighting determined by a spanning tree, anchored at vertex 0.
pub fn weighting_from_tree(q: &Quiver, t: &Configuration) -> Result<Weighting> {
    check_spanning_tree(q, t)?;
    let n = q.type_count();
    let mut values: Vec<Option<Vec<Int>>> = vec![None; q.vertex_count()];
    values[0] = Some(vec![Int::zero(); n]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let wv = values[v].clone().expect("queued vertices are labelled");
        for &a in t.arrows() {
            let ar = q.arrow(a);
            let (u, sign) = if ar.tail == v {
                (ar.head, 1)
            } else if ar.head == v {
                (ar.tail, -1)
            } else {
                continue;
            };
            if values[u].is_none() {
                let mut w = wv.clone();
                w[ar.kind] += sign;
                values[u] = Some(w);
                queue.push_back(u);
            }
        }
    }
    Ok(Weighting { anchor: 0, values })
}

/// All arrows certified by the weighting.
pub fn invariant_hull(q: &Quiver, w: &Weighting) -> Configuration {
    (0..q.arrow_count())
        .filter(|&a| w.certifies(q, a))
        .collect()
}

/// Weighting criterion for trees: every arrow of the closure is certified.
pub fn is_ic_by_weighting(q: &Quiver, t: &Configuration) -> Result<bool> {
    let w = weighting_from_tree(q, t)?;
    let hull = invariant_hull(q, &w);
    Ok(cycle_closure(q, t).is_subset(&hull))
}
