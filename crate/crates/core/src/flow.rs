//! Flows on quivers: boundary, type projection, conformal decomposition and sequential forms.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::quiver::{step_end, Path, Quiver, SeqFlowExpr, Step};
use crate::scalar::{parse_rat, rat_string};
use crate::{Int, Rat};

/// Values on arrows, indexed by arrow id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flow {
    values: Vec<Rat>,
}

impl Flow {
    pub fn zero(q: &Quiver) -> Self {
        Flow {
            values: vec![Rat::zero(); q.arrow_count()],
        }
    }

    pub fn new(q: &Quiver, values: Vec<Rat>) -> Result<Self> {
        if values.len() != q.arrow_count() {
            return Err(Error::FlowLength {
                expected: q.arrow_count(),
                got: values.len(),
            });
        }
        Ok(Flow { values })
    }

    pub fn from_ints(q: &Quiver, values: &[Int]) -> Result<Self> {
        Self::new(q, values.iter().cloned().map(Rat::from_integer).collect())
    }

    /// `χ_a`.
    pub fn indicator(q: &Quiver, arrow: usize) -> Self {
        let mut f = Self::zero(q);
        f.values[arrow] = Rat::one();
        f
    }

    /// Basic flow of a walk.
    pub fn of_path(q: &Quiver, p: &Path) -> Self {
        Flow {
            values: p.basic_flow(q).into_iter().map(Rat::from_integer).collect(),
        }
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn get(&self, arrow: usize) -> &Rat {
        &self.values[arrow]
    }

    pub fn set(&mut self, arrow: usize, v: Rat) {
        self.values[arrow] = v;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn to_ints(&self) -> Result<Vec<Int>> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        Ok(self.values.iter().map(|v| v.to_integer()).collect())
    }

    pub fn support(&self) -> Vec<usize> {
        self.ids_where(|v| !v.is_zero())
    }

    pub fn positive_support(&self) -> Vec<usize> {
        self.ids_where(Signed::is_positive)
    }

    pub fn negative_support(&self) -> Vec<usize> {
        self.ids_where(Signed::is_negative)
    }

    fn ids_where(&self, keep: impl Fn(&Rat) -> bool) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| keep(v))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn add(&self, other: &Flow) -> Flow {
        Flow {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Flow) -> Flow {
        Flow {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Flow {
        Flow {
            values: self.values.iter().map(|a| a * k).collect(),
        }
    }

    pub fn to_json(&self, q: &Quiver) -> FlowJson {
        FlowJson {
            quiver: quiver_ref(q),
            values: self
                .values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, rat_string(v)))
                .collect(),
        }
    }
}

/// Short textual reference to the quiver's group action.
pub fn quiver_ref(q: &Quiver) -> String {
    let parts: Vec<String> = q.action().factors().iter().map(|f| f.to_string()).collect();
    parts.join(" x ")
}

/// Sparse arrow-value map serialized in numeric key order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedMap<T>(pub Vec<(usize, T)>);

impl<T> FromIterator<(usize, T)> for IndexedMap<T> {
    fn from_iter<I: IntoIterator<Item = (usize, T)>>(iter: I) -> Self {
        IndexedMap(iter.into_iter().collect())
    }
}

impl<T: Serialize> Serialize for IndexedMap<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(&k.to_string(), v)?;
        }
        m.end()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FlowJson {
    pub quiver: String,
    pub values: IndexedMap<String>,
}

/// A vertex function with total sum zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZetaVector {
    values: Vec<Rat>,
}

impl ZetaVector {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        let s: Rat = values.iter().sum();
        if !s.is_zero() {
            return Err(Error::ZetaSum(rat_string(&s)));
        }
        Ok(ZetaVector { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&v| Rat::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn zero(nverts: usize) -> Self {
        ZetaVector {
            values: vec![Rat::zero(); nverts],
        }
    }

    /// Comma-separated integers or `num/den` rationals.
    pub fn parse(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| parse_rat(t.trim()).ok_or_else(|| Error::BadZeta(t.trim().to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn for_quiver(self, q: &Quiver) -> Result<Self> {
        if self.values.len() != q.vertex_count() {
            return Err(Error::ZetaLength {
                expected: q.vertex_count(),
                got: self.values.len(),
            });
        }
        Ok(self)
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        ZetaVector {
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }

    /// No non-empty proper vertex subset has zero total.
    pub fn is_generic(&self) -> bool {
        let n = self.values.len();
        if n > 24 {
            return self.is_generic_by_sums();
        }
        let full = (1u64 << n) - 1;
        (1..full).all(|mask| {
            let s: Rat = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &self.values[i])
                .sum();
            !s.is_zero()
        })
    }

    fn is_generic_by_sums(&self) -> bool {
        // Subset sums are enumerated with a set of reachable (sum, size) pairs.
        let n = self.values.len();
        let mut reach: std::collections::BTreeSet<(Rat, usize)> = Default::default();
        reach.insert((Rat::zero(), 0));
        for v in &self.values {
            let next: Vec<(Rat, usize)> = reach.iter().map(|(s, k)| (s + v, k + 1)).collect();
            reach.extend(next);
        }
        !reach.iter().any(|(s, k)| s.is_zero() && *k > 0 && *k < n)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(rat_string).collect()
    }
}

impl std::fmt::Display for ZetaVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `(∂f)(v) = Σ_{In(v)} f − Σ_{Out(v)} f`.
pub fn boundary(q: &Quiver, f: &Flow) -> ZetaVector {
    let mut z = vec![Rat::zero(); q.vertex_count()];
    for a in q.arrows() {
        let x = &f.values[a.id];
        if !x.is_zero() {
            z[a.head] += x;
            z[a.tail] -= x;
        }
    }
    ZetaVector { values: z }
}

/// `π(f)`: total value per arrow type.
pub fn type_of(q: &Quiver, f: &Flow) -> Vec<Rat> {
    let mut t = vec![Rat::zero(); q.type_count()];
    for a in q.arrows() {
        t[a.kind] += &f.values[a.id];
    }
    t
}

/// Sign-oriented moves out of `v` along the support of `f`.
fn signed_moves(q: &Quiver, f: &Flow, v: usize) -> Vec<Step> {
    let mut moves: Vec<Step> = q
        .outgoing(v)
        .filter(|&a| f.values[a].is_positive())
        .map(|a| Step {
            arrow: a,
            forward: true,
        })
        .chain(
            q.incoming(v)
                .iter()
                .filter(|&&a| f.values[a].is_negative())
                .map(|&a| Step {
                    arrow: a,
                    forward: false,
                }),
        )
        .collect();
    moves.sort();
    moves
}

/// Writes a closed flow as a positive combination of pairwise conformal cycles.
pub fn decompose_conformal(q: &Quiver, f: &Flow) -> Result<Vec<(Rat, Path)>> {
    if !boundary(q, f).is_zero() {
        return Err(Error::NotClosed);
    }
    let mut rest = f.clone();
    let mut out = Vec::new();
    while let Some(&first) = rest.support().first() {
        let forward = rest.values[first].is_positive();
        let s0 = Step {
            arrow: first,
            forward,
        };
        let start = crate::quiver::step_start(q, s0);
        let mut steps = vec![s0];
        let mut visited = vec![start];
        let mut at = step_end(q, s0);
        let cycle = loop {
            if let Some(pos) = visited.iter().position(|&v| v == at) {
                break Path {
                    start: at,
                    steps: steps[pos..].to_vec(),
                };
            }
            visited.push(at);
            let next = *signed_moves(q, &rest, at)
                .first()
                .expect("a closed flow leaves every vertex it enters");
            steps.push(next);
            at = step_end(q, next);
        };
        let coeff = cycle
            .steps
            .iter()
            .map(|s| rest.values[s.arrow].abs())
            .min()
            .expect("cycles are non-empty");
        for s in &cycle.steps {
            let d = if s.forward {
                coeff.clone()
            } else {
                -coeff.clone()
            };
            rest.values[s.arrow] -= d;
        }
        out.push((coeff, cycle));
    }
    Ok(out)
}

/// A walk from v to v' inside the support of `f`, following its signs, when `∂f = χ_{v'} − χ_v`.
pub fn path_between(q: &Quiver, f: &Flow) -> Result<Path> {
    let z = boundary(q, f);
    let ones: Vec<usize> = (0..z.len()).filter(|&v| z.values[v].is_one()).collect();
    let minus: Vec<usize> = (0..z.len()).filter(|&v| (-&z.values[v]).is_one()).collect();
    let nonzero = z.values.iter().filter(|x| !x.is_zero()).count();
    let (start, end) = match (ones.as_slice(), minus.as_slice(), nonzero) {
        ([e], [s], 2) => (*s, *e),
        _ => return Err(Error::BoundaryShape),
    };
    let mut prev: Vec<Option<Step>> = vec![None; q.vertex_count()];
    let mut seen = vec![false; q.vertex_count()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if v == end {
            break;
        }
        for s in signed_moves(q, f, v) {
            let u = step_end(q, s);
            if !seen[u] {
                seen[u] = true;
                prev[u] = Some(s);
                queue.push_back(u);
            }
        }
    }
    if !seen[end] {
        return Err(Error::BoundaryShape);
    }
    let mut steps = Vec::new();
    let mut at = end;
    while let Some(s) = prev[at] {
        steps.push(s);
        at = crate::quiver::step_start(q, s);
    }
    steps.reverse();
    Ok(Path { start, steps })
}

/// The unique flow supported on the spanning tree `tree` with boundary `zeta`, by leaf peeling.
pub fn flow_on_tree(q: &Quiver, tree: &[usize], zeta: &ZetaVector) -> Result<Flow> {
    let nv = q.vertex_count();
    if tree.len() + 1 != nv {
        return Err(Error::NotSpanningTree);
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &a in tree {
        if a >= q.arrow_count() {
            return Err(Error::ArrowOutOfRange(a));
        }
        let arrow = q.arrow(a);
        if arrow.tail == arrow.head {
            return Err(Error::NotSpanningTree);
        }
        incident[arrow.tail].push(a);
        incident[arrow.head].push(a);
    }
    let mut residual: Vec<Rat> = zeta.values().to_vec();
    let mut used = vec![false; q.arrow_count()];
    let mut degree: Vec<usize> = incident.iter().map(Vec::len).collect();
    let mut f = Flow::zero(q);
    let mut leaves: VecDeque<usize> = (0..nv).filter(|&v| degree[v] == 1).collect();
    let mut peeled = 0;
    while let Some(v) = leaves.pop_front() {
        let Some(&a) = incident[v].iter().find(|&&a| !used[a]) else {
            continue;
        };
        used[a] = true;
        peeled += 1;
        let arrow = q.arrow(a);
        let (value, other) = if arrow.head == v {
            (residual[v].clone(), arrow.tail)
        } else {
            (-residual[v].clone(), arrow.head)
        };
        if other == arrow.tail {
            residual[other] += &value;
        } else {
            residual[other] -= &value;
        }
        residual[v] = Rat::zero();
        f.values[a] = value;
        degree[v] -= 1;
        degree[other] -= 1;
        if degree[other] == 1 {
            leaves.push_back(other);
        }
    }
    if peeled != tree.len() {
        return Err(Error::NotSpanningTree);
    }
    Ok(f)
}

/// Signed one-based type sequence read off a walk.
pub fn path_sequence(q: &Quiver, p: &Path) -> Vec<i32> {
    p.steps
        .iter()
        .map(|s| {
            let j = q.arrow(s.arrow).kind as i32 + 1;
            if s.forward {
                j
            } else {
                -j
            }
        })
        .collect()
}

/// Shortest signed type sequence leading from `from` to `to`.
fn connector(q: &Quiver, from: usize, to: usize) -> Vec<i32> {
    let mut prev: Vec<Option<Step>> = vec![None; q.vertex_count()];
    let mut seen = vec![false; q.vertex_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        let moves: Vec<Step> = q
            .outgoing(v)
            .map(|a| Step {
                arrow: a,
                forward: true,
            })
            .chain(q.incoming(v).iter().map(|&a| Step {
                arrow: a,
                forward: false,
            }))
            .collect();
        for s in moves {
            let u = step_end(q, s);
            if !seen[u] {
                seen[u] = true;
                prev[u] = Some(s);
                queue.push_back(u);
            }
        }
    }
    let mut steps = Vec::new();
    let mut at = to;
    while let Some(s) = prev[at] {
        steps.push(s);
        at = crate::quiver::step_start(q, s);
    }
    steps.reverse();
    path_sequence(q, &Path { start: from, steps })
}

/// One sequential expression based at vertex 0 whose flow is the closed integral flow `f`.
pub fn single_cycle_form(q: &Quiver, f: &Flow) -> Result<SeqFlowExpr> {
    if !f.is_integral() {
        return Err(Error::NotIntegral);
    }
    let parts = decompose_conformal(q, f)?;
    let mut seq = Vec::new();
    for (coeff, cycle) in parts {
        let reps = coeff.to_integer();
        let conn = connector(q, 0, cycle.start);
        let body = path_sequence(q, &cycle);
        let mut k = BigInt::zero();
        while k < reps {
            seq.extend(&conn);
            seq.extend(&body);
            seq.extend(conn.iter().rev().map(|j| -j));
            k += 1;
        }
    }
    Ok(SeqFlowExpr::new(0, seq))
}

pub fn seq_to_flow(q: &Quiver, e: &SeqFlowExpr) -> Result<Flow> {
    Flow::from_ints(q, &e.to_flow(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn q5() -> Quiver {
        Quiver::from_weights(5, &[1, 2, 3]).unwrap()
    }

    fn seq(q: &Quiver, base: usize, s: &[i32]) -> Flow {
        seq_to_flow(q, &SeqFlowExpr::new(base, s.to_vec())).unwrap()
    }

    #[test]
    fn boundary_of_arrow() {
        let q = q5();
        for a in q.arrows() {
            let z = boundary(&q, &Flow::indicator(&q, a.id));
            for v in 0..5 {
                let want = i64::from(v == a.head) - i64::from(v == a.tail);
                assert_eq!(z.values()[v], rat_int(want));
            }
            let t = type_of(&q, &Flow::indicator(&q, a.id));
            assert_eq!(t[a.kind], rat_int(1));
        }
    }

    #[test]
    fn seven_cycle_type() {
        let q = Quiver::from_weights(7, &[1, 2, 3]).unwrap();
        let f = seq(&q, 0, &[1, 1, 2, 1, 1, -3, -3]);
        assert!(boundary(&q, &f).is_zero());
        assert_eq!(type_of(&q, &f), vec![rat_int(4), rat_int(1), rat_int(-2)]);
    }

    #[test]
    fn zeta_validation() {
        assert!(ZetaVector::from_ints(&[1, 2]).is_err());
        let z = ZetaVector::parse("1/2, -1/2").unwrap();
        assert_eq!(z.to_strings(), vec!["1/2", "-1/2"]);
        assert!(ZetaVector::from_ints(&[-1, -1, -1, -1, 4])
            .unwrap()
            .is_generic());
        assert!(ZetaVector::from_ints(&[9, 8, -3, -2, -12])
            .unwrap()
            .is_generic());
        assert!(!ZetaVector::from_ints(&[1, -1, 0]).unwrap().is_generic());
    }

    #[test]
    fn decomposition_of_multiple() {
        let q = q5();
        let c = SeqFlowExpr::new(0, vec![1, 2, 2]).to_path(&q).unwrap();
        let f = Flow::of_path(&q, &c).scale(&rat_int(2));
        let d = decompose_conformal(&q, &f).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, rat_int(2));
        assert_eq!(Flow::of_path(&q, &d[0].1).scale(&rat_int(2)), f);
    }

    #[test]
    fn non_conformal_pair_is_rewritten() {
        let q = q5();
        let c1 = seq(&q, 0, &[1, 1, 1, 1, 1]);
        let c2 = seq(&q, 0, &[2, 3]);
        let c3 = seq(&q, 1, &[-1, 3, 3]);
        assert!(c1.add(&c3).get(q.arrow_at(2, 0)).is_zero());
        let f = c1.add(&c2).add(&c3);
        let d = decompose_conformal(&q, &f).unwrap();
        let mut sum = Flow::zero(&q);
        for (x, c) in &d {
            assert!(x.is_positive());
            sum = sum.add(&Flow::of_path(&q, c).scale(x));
            for s in &c.steps {
                assert_eq!(f.get(s.arrow).is_positive(), s.forward);
            }
        }
        assert_eq!(sum, f);
    }

    #[test]
    fn paths_follow_signs() {
        let q = Quiver::from_weights(3, &[1, 1, 1]).unwrap();
        let a = q.arrow_at(0, 0);
        let p = path_between(&q, &Flow::indicator(&q, a)).unwrap();
        assert_eq!(
            p.steps,
            vec![Step {
                arrow: a,
                forward: true
            }]
        );
        let back = q.arrow_at(1, 1);
        let p = path_between(&q, &Flow::indicator(&q, back).scale(&rat_int(-1))).unwrap();
        assert_eq!((p.start, p.end(&q)), (0, 1));
        assert!(!p.steps[0].forward);
        let two = Flow::indicator(&q, a).add(&Flow::indicator(&q, q.arrow_at(2, 0)));
        let p = path_between(&q, &two).unwrap();
        assert_eq!((p.start, p.end(&q), p.steps.len()), (0, 1, 2));
        let loop_flow =
            Flow::indicator(&q, q.arrow_at(1, 1)).sub(&Flow::indicator(&q, q.arrow_at(1, 2)));
        let with_loop = two.add(&loop_flow);
        let p = path_between(&q, &with_loop).unwrap();
        assert_eq!((p.start, p.end(&q)), (0, 1));
        assert!(p
            .steps
            .iter()
            .all(|s| with_loop.get(s.arrow).is_positive() == s.forward));
        let parallel = Flow::indicator(&q, a).sub(&Flow::indicator(&q, q.arrow_at(0, 1)));
        assert_eq!(path_between(&q, &parallel), Err(Error::BoundaryShape));
    }

    #[test]
    fn sequential_form_round_trip() {
        let q = q5();
        let f = seq(&q, 0, &[1, 2, 2]).add(&seq(&q, 3, &[1, 1, 1, 2]));
        let e = single_cycle_form(&q, &f).unwrap();
        assert_eq!(seq_to_flow(&q, &e).unwrap(), f);
        assert!(single_cycle_form(&q, &Flow::zero(&q))
            .unwrap()
            .seq
            .is_empty());
        assert!(single_cycle_form(&q, &f.scale(&crate::scalar::rat(1, 2))).is_err());
    }
}
