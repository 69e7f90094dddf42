//! Spanning trees of the McKay quiver, their ζ-flows, admissible cones and IC-tree catalogs.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::closure::{check_spanning_tree, cycle_closure, weighting_from_tree, Configuration};
use crate::error::{Error, Result};
use crate::flow::{flow_on_tree, Flow, ZetaVector};
use crate::linalg::int_det;
use crate::lp::{LinearProgram, Relation};
use crate::quiver::Quiver;
use crate::{Int, Rat};

/// Union-find with undo, for backtracking.
struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push(b);
        true
    }

    fn undo(&mut self) {
        let b = self.history.pop().expect("undo without union");
        let a = self.parent[b];
        self.size[a] -= self.size[b];
        self.parent[b] = b;
    }
}

/// Number of spanning trees of the underlying multigraph (loops ignored).
pub fn spanning_tree_count(q: &Quiver) -> Int {
    let nv = q.vertex_count();
    if nv == 1 {
        return Int::from(1);
    }
    let mut lap = vec![vec![Int::zero(); nv]; nv];
    for a in q.arrows().iter().filter(|a| a.tail != a.head) {
        lap[a.tail][a.tail] += 1;
        lap[a.head][a.head] += 1;
        lap[a.tail][a.head] -= 1;
        lap[a.head][a.tail] -= 1;
    }
    let reduced: Vec<Vec<Int>> = lap[1..].iter().map(|row| row[1..].to_vec()).collect();
    int_det(&reduced)
}

/// Calls `visit` on every spanning tree containing `forced`, in lexicographic order of the sorted
/// arrow lists, until it breaks.
pub fn visit_spanning_trees<F>(q: &Quiver, forced: &[usize], mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if !q.is_connected() {
        return Err(Error::Disconnected);
    }
    let nv = q.vertex_count();
    let mut dsu = Dsu::new(nv);
    let mut is_forced = vec![false; q.arrow_count()];
    for &a in forced {
        if a >= q.arrow_count() {
            return Err(Error::ArrowOutOfRange(a));
        }
        let ar = q.arrow(a);
        if is_forced[a] || !dsu.union(ar.tail, ar.head) {
            return Err(Error::Invalid(format!(
                "forced arrows contain a cycle at arrow {a}"
            )));
        }
        is_forced[a] = true;
    }
    let edges: Vec<usize> = q
        .arrows()
        .iter()
        .filter(|a| a.tail != a.head && !is_forced[a.id])
        .map(|a| a.id)
        .collect();
    let mut search = TreeSearch {
        q,
        edges: &edges,
        is_forced: &is_forced,
        chosen: Vec::new(),
        needed: nv - 1 - forced.len(),
    };
    let _ = search.run(0, &mut dsu, &mut visit);
    Ok(())
}

struct TreeSearch<'a> {
    q: &'a Quiver,
    edges: &'a [usize],
    is_forced: &'a [bool],
    chosen: Vec<usize>,
    needed: usize,
}

impl TreeSearch<'_> {
    fn run<F>(&mut self, i: usize, dsu: &mut Dsu, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if self.chosen.len() == self.needed {
            let mut tree: Vec<usize> = self.chosen.clone();
            tree.extend((0..self.is_forced.len()).filter(|&a| self.is_forced[a]));
            tree.sort_unstable();
            return visit(&tree);
        }
        if self.edges.len() - i < self.needed - self.chosen.len() {
            return ControlFlow::Continue(());
        }
        let e = self.edges[i];
        let ar = self.q.arrow(e);
        if dsu.union(ar.tail, ar.head) {
            self.chosen.push(e);
            let flow = self.run(i + 1, dsu, visit);
            self.chosen.pop();
            dsu.undo();
            flow?;
        }
        if self.still_connected(i, dsu) {
            return self.run(i + 1, dsu, visit);
        }
        ControlFlow::Continue(())
    }

    /// Whether the chosen arrows plus the undecided ones after `i` still connect every vertex.
    fn still_connected(&self, i: usize, dsu: &Dsu) -> bool {
        let nv = dsu.parent.len();
        let mut reach = Dsu::new(nv);
        for v in 0..nv {
            reach.union(v, dsu.find(v));
        }
        let mut components = (0..nv).filter(|&v| reach.find(v) == v).count();
        for &e in &self.edges[i + 1..] {
            let ar = self.q.arrow(e);
            if reach.union(ar.tail, ar.head) {
                components -= 1;
                if components == 1 {
                    return true;
                }
            }
        }
        components == 1
    }
}

/// Every spanning tree, checked against the Matrix-Tree count.
pub fn enumerate_spanning_trees(q: &Quiver) -> Result<Vec<Configuration>> {
    let mut trees = Vec::new();
    visit_spanning_trees(q, &[], |t| {
        trees.push(Configuration::new(t.to_vec()));
        ControlFlow::Continue(())
    })?;
    let expected = spanning_tree_count(q);
    if Int::from(trees.len()) != expected {
        return Err(Error::Invalid(format!(
            "enumerated {} spanning trees, Matrix-Tree count is {expected}",
            trees.len()
        )));
    }
    Ok(trees)
}

/// The unique flow supported in `t` with boundary `zeta`.
pub fn tree_flow(q: &Quiver, t: &Configuration, zeta: &ZetaVector) -> Result<Flow> {
    check_spanning_tree(q, t)?;
    flow_on_tree(q, t.arrows(), &zeta.clone().for_quiver(q)?)
}

/// `ζ ↦ Σ_v coeffs[v]·ζ(v)`, the value of one tree arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinearForm {
    pub arrow: usize,
    pub coeffs: Vec<i64>,
}

impl LinearForm {
    pub fn eval(&self, zeta: &ZetaVector) -> Rat {
        self.coeffs
            .iter()
            .zip(zeta.values())
            .filter(|(c, _)| **c != 0)
            .map(|(&c, z)| z * Rat::from_integer(c.into()))
            .sum()
    }
}

impl std::fmt::Display for LinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (v, &c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 1 {
                String::new()
            } else {
                c.abs().to_string()
            };
            write!(f, "{sign}{mag}z{v}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The forms whose common positivity region is the set of ζ admitting a positive tree flow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleCone {
    pub forms: Vec<LinearForm>,
}

impl AdmissibleCone {
    pub fn values(&self, zeta: &ZetaVector) -> Vec<Rat> {
        self.forms.iter().map(|f| f.eval(zeta)).collect()
    }

    /// All forms non-negative.
    pub fn contains(&self, zeta: &ZetaVector) -> bool {
        self.forms.iter().all(|f| !f.eval(zeta).is_negative())
    }

    /// All forms strictly positive.
    pub fn contains_interior(&self, zeta: &ZetaVector) -> bool {
        self.forms.iter().all(|f| f.eval(zeta).is_positive())
    }
}

/// Each tree arrow carries the ζ-sum of the component on its head side, written over the smaller
/// component (on ties, the one holding vertex 0).
pub fn admissible_cone(q: &Quiver, t: &Configuration) -> Result<AdmissibleCone> {
    check_spanning_tree(q, t)?;
    let nv = q.vertex_count();
    let forms = t
        .arrows()
        .iter()
        .map(|&a| {
            let head_side = component_without(q, t, a, q.arrow(a).head);
            let size = head_side.iter().filter(|&&x| x).count();
            let use_head = 2 * size < nv || (2 * size == nv && head_side[0]);
            let coeffs = head_side
                .iter()
                .map(|&inside| match (inside == use_head, use_head) {
                    (false, _) => 0,
                    (true, true) => 1,
                    (true, false) => -1,
                })
                .collect();
            LinearForm { arrow: a, coeffs }
        })
        .collect();
    Ok(AdmissibleCone { forms })
}

fn component_without(q: &Quiver, t: &Configuration, cut: usize, root: usize) -> Vec<bool> {
    let mut seen = vec![false; q.vertex_count()];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &a in t.arrows().iter().filter(|&&a| a != cut) {
            let ar = q.arrow(a);
            let other = if ar.tail == v {
                ar.head
            } else if ar.head == v {
                ar.tail
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    seen
}

/// The closed flow `χ_e` plus the tree path back from the head of `e` to its tail.
pub fn fundamental_cycle(q: &Quiver, tree: &[usize], e: usize) -> Result<Flow> {
    let ar = q.arrow(e);
    let mut z = vec![Rat::zero(); q.vertex_count()];
    z[ar.tail] += Rat::from_integer(1.into());
    z[ar.head] -= Rat::from_integer(1.into());
    let mut f = flow_on_tree(q, tree, &ZetaVector::new(z)?)?;
    let v = f.get(e) + Rat::from_integer(1.into());
    f.set(e, v);
    Ok(f)
}

/// Types of the fundamental cycles of a spanning tree, each run along its non-tree arrow; these
/// generate `π F₀(T)`.
pub fn fundamental_cycle_types(q: &Quiver, t: &Configuration) -> Result<Vec<(usize, Vec<Int>)>> {
    let w = weighting_from_tree(q, t)?;
    Ok((0..q.arrow_count())
        .filter(|&a| !t.contains(a))
        .map(|a| {
            let ar = q.arrow(a);
            let tail = w
                .value(ar.tail)
                .expect("tree weightings label every vertex");
            let head = w
                .value(ar.head)
                .expect("tree weightings label every vertex");
            let mut ty: Vec<Int> = tail.iter().zip(head).map(|(x, y)| x - y).collect();
            ty[ar.kind] += 1;
            (a, ty)
        })
        .collect())
}

/// Whether the cone spanned by `gens` contains no line.
pub fn is_pointed(gens: &[Vec<Int>], dim: usize) -> bool {
    let nonzero: Vec<&Vec<Int>> = gens
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .collect();
    if nonzero.is_empty() {
        return true;
    }
    let mut lp: LinearProgram<Rat> = LinearProgram::new(dim);
    for j in 0..dim {
        lp.set_free(j);
    }
    for g in nonzero {
        let row: Vec<Rat> = g.iter().map(|x| Rat::from_integer(x.clone())).collect();
        lp.add(row, Relation::Ge, Rat::from_integer(1.into()));
    }
    lp.feasible_point().is_some()
}

/// Rank-zero test for spanning trees: the fundamental cycle types span a pointed cone.
pub fn is_ic_tree(q: &Quiver, t: &Configuration) -> Result<bool> {
    let types: Vec<Vec<Int>> = fundamental_cycle_types(q, t)?
        .into_iter()
        .map(|(_, t)| t)
        .collect();
    Ok(is_pointed(&types, q.type_count()))
}

/// Smallest translate of `t` under the vertex translations.
pub fn canonical_translate(q: &Quiver, t: &Configuration) -> Configuration {
    (0..q.vertex_count())
        .map(|g| t.translate(q, g))
        .min()
        .expect("at least one vertex")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IcTree {
    pub tree: Configuration,
    pub closure: Configuration,
    /// Number of distinct translates of the tree.
    pub orbit_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IcCatalog {
    pub reduced: bool,
    pub trees: Vec<IcTree>,
    pub spanning_trees: usize,
    pub unreduced_count: usize,
    /// Every orbit has full size, so the reduced count times the group order is the unreduced one.
    pub translation_free: bool,
}

impl IcCatalog {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

/// All IC spanning trees, optionally one per translation class (the smallest translate).
pub fn enumerate_ic_trees(q: &Quiver, reduce: bool) -> Result<IcCatalog> {
    let all = enumerate_spanning_trees(q)?;
    let flags: Vec<bool> = all
        .par_iter()
        .map(|t| is_ic_tree(q, t))
        .collect::<Result<_>>()?;
    let ic: Vec<Configuration> = all
        .iter()
        .zip(&flags)
        .filter(|(_, &f)| f)
        .map(|(t, _)| t.clone())
        .collect();
    let mut orbits: BTreeMap<Configuration, BTreeSet<Configuration>> = BTreeMap::new();
    for t in &ic {
        let orbit: BTreeSet<Configuration> =
            (0..q.vertex_count()).map(|g| t.translate(q, g)).collect();
        let rep = orbit.iter().next().expect("orbit contains t").clone();
        orbits.insert(rep, orbit);
    }
    let group = q.vertex_count();
    let translation_free = orbits.values().all(|o| o.len() == group);
    let picked: Vec<(Configuration, usize)> = if reduce {
        orbits
            .iter()
            .map(|(rep, o)| (rep.clone(), o.len()))
            .collect()
    } else {
        ic.iter()
            .map(|t| {
                let size = orbits
                    .values()
                    .find(|o| o.contains(t))
                    .map_or(1, BTreeSet::len);
                (t.clone(), size)
            })
            .collect()
    };
    let trees = picked
        .into_par_iter()
        .map(|(tree, orbit_size)| IcTree {
            closure: cycle_closure(q, &tree),
            tree,
            orbit_size,
        })
        .collect();
    Ok(IcCatalog {
        reduced: reduce,
        trees,
        spanning_trees: all.len(),
        unreduced_count: ic.len(),
        translation_free,
    })
}

/// An IC-tree with non-negative ζ-flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleTree {
    pub tree: Configuration,
    pub flow: Flow,
    /// Arrows with strictly positive flow.
    pub support: Configuration,
}

/// IC-trees of an unreduced catalog whose ζ-flow is non-negative.
pub fn admissible_ic_trees(
    q: &Quiver,
    zeta: &ZetaVector,
    catalog: &IcCatalog,
) -> Result<Vec<AdmissibleTree>> {
    let zeta = zeta.clone().for_quiver(q)?;
    let mut out = Vec::new();
    for entry in &catalog.trees {
        let trees: Vec<Configuration> = if catalog.reduced {
            (0..q.vertex_count())
                .map(|g| entry.tree.translate(q, g))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        } else {
            vec![entry.tree.clone()]
        };
        for tree in trees {
            let flow = flow_on_tree(q, tree.arrows(), &zeta)?;
            if flow.is_nonnegative() {
                let support = Configuration::new(flow.positive_support());
                out.push(AdmissibleTree {
                    tree,
                    flow,
                    support,
                });
            }
        }
    }
    out.sort_by(|a, b| a.tree.cmp(&b.tree));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts_match_the_determinant() {
        for (r, w, count) in [
            (2u32, vec![1i64, 1], 4u64),
            (3, vec![1, 1, 1], 27),
            (5, vec![1, 2, 3], 605),
        ] {
            let q = Quiver::from_weights(r, &w).unwrap();
            assert_eq!(spanning_tree_count(&q), Int::from(count));
            let trees = enumerate_spanning_trees(&q).unwrap();
            assert_eq!(trees.len() as u64, count);
            assert!(trees.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn forced_arrows_restrict_the_search() {
        let q = Quiver::from_weights(3, &[1, 1, 1]).unwrap();
        let mut seen = 0;
        visit_spanning_trees(&q, &[0], |t| {
            assert!(t.contains(&0));
            seen += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        // 27 trees, each with 2 of the 9 arrows: arrow 0 lies in 27 * 2 / 9 of them.
        assert_eq!(seen, 6);
    }

    #[test]
    fn two_vertex_forms() {
        let q = Quiver::from_weights(2, &[1, 1]).unwrap();
        for a in 0..q.arrow_count() {
            let t = Configuration::new(vec![a]);
            let cone = admissible_cone(&q, &t).unwrap();
            let c = &cone.forms[0].coeffs;
            assert!(c == &vec![1, 0] || c == &vec![-1, 0], "{c:?}");
            let z = ZetaVector::from_ints(&[3, -3]).unwrap();
            let f = tree_flow(&q, &t, &z).unwrap();
            assert_eq!(f.get(a), &cone.forms[0].eval(&z));
        }
    }
}
