//! McKay quivers of diagonal abelian actions, walks in them and the sequential flow notation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// `1/r(w1,...,wn)`: the cyclic group of order r acting with the given weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicAction {
    order: u32,
    weights: Vec<u32>,
}

impl CyclicAction {
    /// Free outside the origin: every weight must be a unit mod r.
    pub fn new(order: u32, weights: &[i64]) -> Result<Self> {
        let a = Self::allow_fixed_loci(order, weights)?;
        if let Some(&w) = a.weights.iter().find(|w| w.gcd(&order) != 1) {
            return Err(Error::NonFree { order, weight: w });
        }
        Ok(a)
    }

    /// Accepts weights with non-trivial stabilisers, as long as none is zero and one is a unit.
    pub fn allow_fixed_loci(order: u32, weights: &[i64]) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if weights.len() < 2 {
            return Err(Error::TooFewWeights(weights.len()));
        }
        let m = i64::from(order);
        let reduced: Vec<u32> = weights.iter().map(|w| w.rem_euclid(m) as u32).collect();
        if order > 1 {
            if let Some((&w, _)) = weights.iter().zip(&reduced).find(|(_, r)| **r == 0) {
                return Err(Error::ZeroWeight { order, weight: w });
            }
            if !reduced.iter().any(|w| w.gcd(&order) == 1) {
                return Err(Error::NoUnitWeight { order });
            }
        }
        Ok(CyclicAction {
            order,
            weights: if order == 1 {
                vec![0; reduced.len()]
            } else {
                reduced
            },
        })
    }

    /// The trivial group with no weights; a neutral factor for products.
    pub fn trivial() -> Self {
        CyclicAction {
            order: 1,
            weights: Vec::new(),
        }
    }

    /// Parses `r:w1,w2,...`.
    pub fn parse(s: &str, allow_fixed_loci: bool) -> Result<Self> {
        let bad = || Error::BadAction(s.to_string());
        let (r, ws) = s.split_once(':').ok_or_else(bad)?;
        let r: u32 = r.trim().parse().map_err(|_| bad())?;
        let ws: Vec<i64> = ws
            .split(',')
            .map(|w| w.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if allow_fixed_loci {
            Self::allow_fixed_loci(r, &ws)
        } else {
            Self::new(r, &ws)
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn is_free(&self) -> bool {
        self.weights.iter().all(|w| w.gcd(&self.order) == 1)
    }
}

impl std::fmt::Display for CyclicAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "1/{}({})", self.order, ws.join(","))
    }
}

/// Product of cyclic factors acting on the direct sum of their representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    factors: Vec<CyclicAction>,
}

impl GroupAction {
    pub fn new(factors: Vec<CyclicAction>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::NoFactors);
        }
        Ok(GroupAction { factors })
    }

    pub fn cyclic(a: CyclicAction) -> Self {
        GroupAction { factors: vec![a] }
    }

    pub fn factors(&self) -> &[CyclicAction] {
        &self.factors
    }

    pub fn group_order(&self) -> u64 {
        self.factors.iter().map(|f| u64::from(f.order)).product()
    }

    pub fn type_count(&self) -> usize {
        self.factors.iter().map(|f| f.weights.len()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    /// Zero-based type index.
    #[serde(skip)]
    pub kind: usize,
}

/// McKay quiver: vertices are group elements, arrow `a_v^i : v -> v - s_i` for each type i.
#[derive(Clone, Debug)]
pub struct Quiver {
    action: GroupAction,
    orders: Vec<u32>,
    shifts: Vec<Vec<u32>>,
    arrows: Vec<Arrow>,
    incoming: Vec<Vec<usize>>,
}

impl Quiver {
    pub fn mckay_cyclic(a: CyclicAction) -> Result<Self> {
        if a.order < 2 {
            return Err(Error::Invalid("a cyclic McKay quiver needs r >= 2".into()));
        }
        Ok(Self::mckay(GroupAction::cyclic(a)))
    }

    pub fn mckay_abelian(action: GroupAction) -> Result<Self> {
        if action.type_count() < 2 {
            return Err(Error::TooFewWeights(action.type_count()));
        }
        Ok(Self::mckay(action))
    }

    pub fn from_weights(order: u32, weights: &[i64]) -> Result<Self> {
        Self::mckay_cyclic(CyclicAction::new(order, weights)?)
    }

    fn mckay(action: GroupAction) -> Self {
        let orders: Vec<u32> = action.factors.iter().map(|f| f.order).collect();
        let mut shifts = Vec::new();
        for (k, f) in action.factors.iter().enumerate() {
            for &w in &f.weights {
                let mut s = vec![0u32; orders.len()];
                s[k] = w % f.order.max(1);
                shifts.push(s);
            }
        }
        let nverts: usize = orders.iter().map(|&o| o as usize).product();
        let n = shifts.len();
        let mut q = Quiver {
            action,
            orders,
            shifts,
            arrows: Vec::with_capacity(nverts * n),
            incoming: vec![Vec::new(); nverts],
        };
        for v in 0..nverts {
            for i in 0..n {
                let head = q.shift_down(v, i);
                let id = q.arrows.len();
                q.arrows.push(Arrow {
                    id,
                    tail: v,
                    head,
                    kind: i,
                });
                q.incoming[head].push(id);
            }
        }
        q
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    /// Order and weights when the group is cyclic.
    pub fn cyclic(&self) -> Option<&CyclicAction> {
        match self.action.factors.as_slice() {
            [a] => Some(a),
            _ => None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.incoming.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn type_count(&self) -> usize {
        self.shifts.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: usize) -> &Arrow {
        &self.arrows[id]
    }

    /// Id of `a_v^i` (zero-based type).
    pub fn arrow_at(&self, v: usize, kind: usize) -> usize {
        v * self.type_count() + kind
    }

    pub fn outgoing(&self, v: usize) -> std::ops::Range<usize> {
        let n = self.type_count();
        v * n..(v + 1) * n
    }

    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Group element of a vertex as a tuple of residues.
    pub fn coords(&self, v: usize) -> Vec<u32> {
        let mut c = vec![0; self.orders.len()];
        let mut rest = v;
        for k in (0..self.orders.len()).rev() {
            let o = self.orders[k] as usize;
            c[k] = (rest % o) as u32;
            rest /= o;
        }
        c
    }

    pub fn vertex(&self, coords: &[u32]) -> usize {
        coords
            .iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&c, &o)| acc * o as usize + (c % o) as usize)
    }

    pub fn add(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.coords(u), self.coords(v));
        let c: Vec<u32> = a
            .iter()
            .zip(&b)
            .zip(&self.orders)
            .map(|((x, y), o)| (x + y) % o)
            .collect();
        self.vertex(&c)
    }

    pub fn neg(&self, v: usize) -> usize {
        let c: Vec<u32> = self
            .coords(v)
            .iter()
            .zip(&self.orders)
            .map(|(x, o)| (o - x) % o)
            .collect();
        self.vertex(&c)
    }

    pub fn sub(&self, u: usize, v: usize) -> usize {
        self.add(u, self.neg(v))
    }

    /// Group element `s_i` of a type.
    pub fn shift(&self, kind: usize) -> usize {
        self.vertex(&self.shifts[kind])
    }

    fn shift_down(&self, v: usize, kind: usize) -> usize {
        self.sub(v, self.vertex(&self.shifts[kind]))
    }

    /// Arrow id of the image of `a` under the vertex translation `v -> v + g`.
    pub fn translate_arrow(&self, id: usize, g: usize) -> usize {
        let a = &self.arrows[id];
        self.arrow_at(self.add(a.tail, g), a.kind)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            let nbrs = self
                .outgoing(v)
                .map(|a| self.arrows[a].head)
                .chain(self.incoming[v].iter().map(|&a| self.arrows[a].tail));
            for u in nbrs.collect::<Vec<_>>() {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph mckay {\n");
        for v in 0..self.vertex_count() {
            s.push_str(&format!("  v{v} [label=\"{}\"];\n", self.vertex_label(v)));
        }
        for a in &self.arrows {
            s.push_str(&format!(
                "  v{} -> v{} [label=\"{}\"];\n",
                a.tail,
                a.head,
                a.kind + 1
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn vertex_label(&self, v: usize) -> String {
        let c = self.coords(v);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }
}

/// One traversal of an arrow, along (`forward`) or against its direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub arrow: usize,
    pub forward: bool,
}

/// Walk in the underlying graph; a cycle when it returns to its start.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub steps: Vec<Step>,
}

impl Path {
    pub fn new(start: usize) -> Self {
        Path {
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self, q: &Quiver) -> usize {
        self.steps.last().map_or(self.start, |s| step_end(q, *s))
    }

    pub fn is_cycle(&self, q: &Quiver) -> bool {
        !self.steps.is_empty() && self.end(q) == self.start
    }

    /// Consecutive steps connect and never reuse the same arrow back to back.
    pub fn is_valid(&self, q: &Quiver) -> bool {
        let mut at = self.start;
        for (k, s) in self.steps.iter().enumerate() {
            if step_start(q, *s) != at {
                return false;
            }
            if k > 0 && self.steps[k - 1].arrow == s.arrow {
                return false;
            }
            at = step_end(q, *s);
        }
        true
    }

    /// Signed indicator flow of the walk.
    pub fn basic_flow(&self, q: &Quiver) -> Vec<BigInt> {
        let mut f = vec![BigInt::zero(); q.arrow_count()];
        for s in &self.steps {
            if s.forward {
                f[s.arrow] += 1;
            } else {
                f[s.arrow] -= 1;
            }
        }
        f
    }

    pub fn cycle_type(&self, q: &Quiver) -> Vec<i64> {
        let mut t = vec![0i64; q.type_count()];
        for s in &self.steps {
            t[q.arrow(s.arrow).kind] += if s.forward { 1 } else { -1 };
        }
        t
    }

    /// Arrows traversed forward (with multiplicity).
    pub fn positive_part(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter(|s| s.forward)
            .map(|s| s.arrow)
            .collect()
    }

    pub fn negative_part(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter(|s| !s.forward)
            .map(|s| s.arrow)
            .collect()
    }

    pub fn reversed(&self, q: &Quiver) -> Path {
        Path {
            start: self.end(q),
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step {
                    arrow: s.arrow,
                    forward: !s.forward,
                })
                .collect(),
        }
    }
}

pub fn step_start(q: &Quiver, s: Step) -> usize {
    let a = q.arrow(s.arrow);
    if s.forward {
        a.tail
    } else {
        a.head
    }
}

pub fn step_end(q: &Quiver, s: Step) -> usize {
    let a = q.arrow(s.arrow);
    if s.forward {
        a.head
    } else {
        a.tail
    }
}

/// `{v}(j0,...,jk)` with signed one-based types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqFlowExpr {
    pub base: usize,
    pub seq: Vec<i32>,
}

impl SeqFlowExpr {
    pub fn new(base: usize, seq: Vec<i32>) -> Self {
        SeqFlowExpr { base, seq }
    }

    /// The walk read off the sequence: `+j` follows `a_v^j`, `-j` walks back along `a_{v+s_j}^j`.
    pub fn to_path(&self, q: &Quiver) -> Result<Path> {
        let n = q.type_count() as i32;
        let mut p = Path::new(self.base);
        let mut at = self.base;
        for &j in &self.seq {
            if j == 0 || j.abs() > n {
                return Err(Error::Invalid(format!("sequence index {j} out of range")));
            }
            let kind = (j.unsigned_abs() - 1) as usize;
            if j > 0 {
                let a = q.arrow_at(at, kind);
                p.steps.push(Step {
                    arrow: a,
                    forward: true,
                });
                at = q.arrow(a).head;
            } else {
                let tail = q.add(at, q.shift(kind));
                let a = q.arrow_at(tail, kind);
                p.steps.push(Step {
                    arrow: a,
                    forward: false,
                });
                at = tail;
            }
        }
        Ok(p)
    }

    pub fn to_flow(&self, q: &Quiver) -> Result<Vec<BigInt>> {
        Ok(self.to_path(q)?.basic_flow(q))
    }

    pub fn endpoint(&self, q: &Quiver) -> Result<usize> {
        Ok(self.to_path(q)?.end(q))
    }
}

impl std::fmt::Display for SeqFlowExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.seq.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}({})", self.base, parts.join(","))
    }
}

fn canonical_cycle(q: &Quiver, c: &Path) -> Vec<Step> {
    let len = c.steps.len();
    let rev = c.reversed(q);
    let mut best: Option<Vec<Step>> = None;
    for seq in [&c.steps, &rev.steps] {
        for k in 0..len {
            let rot: Vec<Step> = seq[k..].iter().chain(&seq[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// All closed walks of length at most `max_len` without immediate arrow repetition (cyclically),
/// each once in canonical rotation/reflection form.
pub fn enumerate_cycles(q: &Quiver, max_len: usize) -> Vec<Path> {
    let mut found: BTreeSet<Vec<Step>> = BTreeSet::new();
    let mut stack: Vec<Step> = Vec::new();
    for start in 0..q.vertex_count() {
        walk_dfs(q, start, start, max_len, &mut stack, &mut found);
    }
    found
        .into_iter()
        .map(|steps| Path {
            start: step_start(q, steps[0]),
            steps,
        })
        .collect()
}

fn walk_dfs(
    q: &Quiver,
    start: usize,
    at: usize,
    max_len: usize,
    stack: &mut Vec<Step>,
    found: &mut BTreeSet<Vec<Step>>,
) {
    if !stack.is_empty()
        && at == start
        && stack.first().map(|s| s.arrow) != stack.last().map(|s| s.arrow)
    {
        let p = Path {
            start,
            steps: stack.clone(),
        };
        found.insert(canonical_cycle(q, &p));
    }
    if stack.len() == max_len {
        return;
    }
    let last = stack.last().map(|s| s.arrow);
    let moves: Vec<Step> = q
        .outgoing(at)
        .map(|a| Step {
            arrow: a,
            forward: true,
        })
        .chain(q.incoming(at).iter().map(|&a| Step {
            arrow: a,
            forward: false,
        }))
        .collect();
    for s in moves {
        if Some(s.arrow) == last {
            continue;
        }
        stack.push(s);
        walk_dfs(q, start, step_end(q, s), max_len, stack, found);
        stack.pop();
    }
}

/// Quiver JSON for cyclic actions; products list their factors.
#[derive(Serialize)]
pub struct QuiverJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorJson>>,
    pub vertices: Vec<serde_json::Value>,
    pub arrows: Vec<ArrowJson>,
}

#[derive(Serialize)]
pub struct FactorJson {
    pub r: u32,
    pub weights: Vec<u32>,
}

#[derive(Serialize)]
pub struct ArrowJson {
    pub id: usize,
    pub tail: serde_json::Value,
    pub head: serde_json::Value,
    #[serde(rename = "type")]
    pub kind: usize,
}

impl Quiver {
    pub fn to_json(&self) -> QuiverJson {
        let label = |v: usize| -> serde_json::Value {
            let c = self.coords(v);
            if c.len() == 1 {
                serde_json::Value::from(c[0])
            } else {
                serde_json::Value::from(c)
            }
        };
        let (r, weights, factors) = match self.cyclic() {
            Some(a) => (Some(a.order), Some(a.weights.clone()), None),
            None => (
                None,
                None,
                Some(
                    self.action
                        .factors
                        .iter()
                        .map(|f| FactorJson {
                            r: f.order,
                            weights: f.weights.clone(),
                        })
                        .collect(),
                ),
            ),
        };
        QuiverJson {
            r,
            weights,
            factors,
            vertices: (0..self.vertex_count()).map(label).collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    id: a.id,
                    tail: label(a.tail),
                    head: label(a.head),
                    kind: a.kind + 1,
                })
                .collect(),
        }
    }
}

/// `∂χ_a = χ_head − χ_tail` as an integer vector.
pub fn arrow_boundary(q: &Quiver, id: usize) -> Vec<BigInt> {
    let a = q.arrow(id);
    let mut z = vec![BigInt::zero(); q.vertex_count()];
    z[a.head] += BigInt::one();
    z[a.tail] -= BigInt::one();
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> Quiver {
        Quiver::from_weights(5, &[1, 2, 3]).unwrap()
    }

    #[test]
    fn cyclic_construction() {
        let q = q5();
        assert_eq!(q.vertex_count(), 5);
        assert_eq!(q.arrow_count(), 15);
        for a in q.arrows() {
            let w = [1, 2, 3][a.kind];
            assert_eq!((a.tail + 5 - w) % 5, a.head);
            assert_eq!(a.id, a.tail * 3 + a.kind);
        }
        let q3 = Quiver::from_weights(3, &[1, 1, 1]).unwrap();
        assert_eq!(q3.arrow_count(), 9);
        for v in 0..3 {
            let heads: Vec<usize> = q3.outgoing(v).map(|a| q3.arrow(a).head).collect();
            assert_eq!(heads, vec![(v + 2) % 3; 3]);
        }
        assert_eq!(Quiver::from_weights(2, &[1, 1]).unwrap().arrow_count(), 4);
    }

    #[test]
    fn rejections() {
        assert_eq!(
            CyclicAction::new(4, &[1, 2]),
            Err(Error::NonFree {
                order: 4,
                weight: 2
            })
        );
        assert_eq!(CyclicAction::new(5, &[1]), Err(Error::TooFewWeights(1)));
        assert!(CyclicAction::allow_fixed_loci(6, &[1, 2, 3]).is_ok());
        assert!(CyclicAction::allow_fixed_loci(6, &[2, 3]).is_err());
        assert!(CyclicAction::allow_fixed_loci(6, &[1, 6]).is_err());
        assert!(GroupAction::new(vec![]).is_err());
    }

    #[test]
    fn weights_reduced_mod_r() {
        let a = CyclicAction::new(5, &[6, -3]).unwrap();
        assert_eq!(a.weights(), &[1, 2]);
        assert_eq!(a.to_string(), "1/5(1,2)");
        assert_eq!(
            CyclicAction::parse("5:1,2,3", false).unwrap().weights(),
            &[1, 2, 3]
        );
        assert!(CyclicAction::parse("5;1", false).is_err());
    }

    #[test]
    fn product_counts() {
        let a = CyclicAction::new(2, &[1, 1]).unwrap();
        let q =
            Quiver::mckay_abelian(GroupAction::new(vec![a.clone(), a.clone()]).unwrap()).unwrap();
        assert_eq!(q.vertex_count(), 4);
        assert_eq!(q.arrow_count(), 16);
        let b = CyclicAction::new(3, &[1, 1, 1]).unwrap();
        let q = Quiver::mckay_abelian(GroupAction::new(vec![b.clone(), a]).unwrap()).unwrap();
        assert_eq!(q.vertex_count(), 6);
        assert_eq!(q.arrow_count(), 6 * 2 + 2 * 9);
        let t = Quiver::mckay_abelian(
            GroupAction::new(vec![b.clone(), CyclicAction::trivial()]).unwrap(),
        )
        .unwrap();
        let plain = Quiver::mckay_cyclic(b).unwrap();
        assert_eq!(t.arrows(), plain.arrows());
    }

    #[test]
    fn regular_in_and_out() {
        let q = q5();
        for v in 0..5 {
            assert_eq!(q.outgoing(v).len(), 3);
            assert_eq!(q.incoming(v).len(), 3);
        }
    }

    #[test]
    fn sequential_examples() {
        let q7 = Quiver::from_weights(7, &[1, 2, 3]).unwrap();
        let e = SeqFlowExpr::new(0, vec![1, 1, 2, 1, 1, -3, -3]);
        let p = e.to_path(&q7).unwrap();
        assert!(p.is_valid(&q7));
        assert!(p.is_cycle(&q7));
        assert_eq!(p.cycle_type(&q7), vec![4, 1, -2]);
        let q = q5();
        let e = SeqFlowExpr::new(0, vec![1, 1, 1, 2]);
        assert_eq!(e.endpoint(&q).unwrap(), 0);
        let z = SeqFlowExpr::new(3, vec![2, -2]).to_flow(&q).unwrap();
        assert!(z.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn short_cycles() {
        let q = q5();
        let cs = enumerate_cycles(&q, 2);
        // v -> v-2 (type 2) and v-2 -> v (type 3): one 2-cycle per vertex.
        assert_eq!(cs.len(), 5);
        for c in &cs {
            let kinds: BTreeSet<usize> = c.steps.iter().map(|s| q.arrow(s.arrow).kind).collect();
            assert_eq!(kinds, BTreeSet::from([1, 2]));
            assert!(c.is_valid(&q) && c.is_cycle(&q));
        }
        let q3 = Quiver::from_weights(3, &[1, 1, 1]).unwrap();
        assert!(enumerate_cycles(&Quiver::from_weights(5, &[1, 2]).unwrap(), 2).is_empty());
        assert!(!enumerate_cycles(&q3, 2).is_empty());
    }

    #[test]
    fn seven_cycle_listed() {
        let q7 = Quiver::from_weights(7, &[1, 2, 3]).unwrap();
        let p = SeqFlowExpr::new(0, vec![1, 1, 2, 1, 1, -3, -3])
            .to_path(&q7)
            .unwrap();
        let key = canonical_cycle(&q7, &p);
        let cs = enumerate_cycles(&q7, 7);
        assert!(cs.iter().any(|c| c.steps == key));
    }
}
