//! Integer lattices attached to a McKay quiver: Π, Λ², and the exact sequence checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{boundary, flow_on_tree, seq_to_flow, type_of, Flow, ZetaVector};
use crate::linalg::{hnf, int_det, integer_kernel, smith_diagonal, solve};
use crate::quiver::{Quiver, SeqFlowExpr};
use crate::{Int, Rat};

/// Sublattice of `Z^dim` stored by its Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    dim: usize,
    rows: Vec<Vec<Int>>,
}

impl LatticeBasis {
    pub fn span(generators: &[Vec<Int>], dim: usize) -> Self {
        LatticeBasis {
            dim,
            rows: hnf(generators, dim),
        }
    }

    pub fn standard(dim: usize) -> Self {
        let rows: Vec<Vec<Int>> = (0..dim)
            .map(|i| (0..dim).map(|j| Int::from(u8::from(i == j))).collect())
            .collect();
        LatticeBasis { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    /// Integer coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn int_coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let c = row.iter().position(|x| !x.is_zero())?;
            let (k, rem) = rest[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &k * y;
            }
            coords.push(k);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.int_coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &LatticeBasis) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Rational coordinates of `v` in the Hermite basis, if `v` lies in its span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let cols: Vec<Vec<Rat>> = (0..self.dim)
            .map(|j| {
                self.rows
                    .iter()
                    .map(|r| Rat::from_integer(r[j].clone()))
                    .collect()
            })
            .collect();
        solve(&cols, v, self.rows.len())
    }

    /// `[Z^dim : L]` for a full-rank lattice.
    pub fn index(&self) -> Option<Int> {
        (self.rank() == self.dim).then(|| int_det(&self.rows).abs())
    }
}

/// `Π = {x ∈ Z^n : Σ x_i s_i = 0 in the group}`.
pub fn lattice_pi(q: &Quiver) -> LatticeBasis {
    let n = q.type_count();
    let orders = q.orders();
    let m = orders.len();
    let rows: Vec<Vec<Int>> = (0..m)
        .map(|k| {
            let mut row: Vec<Int> = (0..n).map(|i| Int::from(q.coords(q.shift(i))[k])).collect();
            row.extend((0..m).map(|l| {
                if l == k {
                    Int::from(orders[k])
                } else {
                    Int::zero()
                }
            }));
            row
        })
        .collect();
    let kernel = integer_kernel(&rows, n + m);
    let projected: Vec<Vec<Int>> = kernel.into_iter().map(|v| v[..n].to_vec()).collect();
    LatticeBasis::span(&projected, n)
}

fn reduce_coords(q: &Quiver, acc: &[Int]) -> usize {
    let c: Vec<u32> = acc
        .iter()
        .zip(q.orders())
        .map(|(a, &o)| {
            let r = a.mod_floor(&Int::from(o));
            u32::try_from(r).expect("residue fits")
        })
        .collect();
    q.vertex(&c)
}

/// `Σ x_i s_i + Σ_v ζ(v)·v`; zero exactly when a flow with type x and boundary ζ exists.
pub fn obstruction(q: &Quiver, x: &[Int], zeta: &[Int]) -> usize {
    let orders = q.orders();
    let mut acc = vec![Int::zero(); orders.len()];
    for (i, xi) in x.iter().enumerate() {
        for (k, s) in q.coords(q.shift(i)).into_iter().enumerate() {
            acc[k] += xi * Int::from(s);
        }
    }
    for (v, z) in zeta.iter().enumerate() {
        for (k, c) in q.coords(v).into_iter().enumerate() {
            acc[k] += z * Int::from(c);
        }
    }
    reduce_coords(q, &acc)
}

/// Commutation flows `χ_v^i + χ_{v−s_i}^j − χ_v^j − χ_{v−s_j}^i` for all v and i < j.
pub fn commutation_generators(q: &Quiver) -> Vec<Vec<Int>> {
    let n = q.type_count();
    let mut gens = Vec::new();
    for v in 0..q.vertex_count() {
        for i in 0..n {
            for j in i + 1..n {
                let mut g = vec![Int::zero(); q.arrow_count()];
                let vi = q.arrow(q.arrow_at(v, i)).head;
                let vj = q.arrow(q.arrow_at(v, j)).head;
                g[q.arrow_at(v, i)] += 1;
                g[q.arrow_at(vi, j)] += 1;
                g[q.arrow_at(v, j)] -= 1;
                g[q.arrow_at(vj, i)] -= 1;
                gens.push(g);
            }
        }
    }
    gens
}

/// `Λ²`, the lattice spanned by the commutation flows.
pub fn lambda2(q: &Quiver) -> LatticeBasis {
    LatticeBasis::span(&commutation_generators(q), q.arrow_count())
}

/// Rows of `∂` (vertices by arrows).
pub fn boundary_matrix(q: &Quiver) -> Vec<Vec<Int>> {
    let mut m = vec![vec![Int::zero(); q.arrow_count()]; q.vertex_count()];
    for a in q.arrows() {
        m[a.head][a.id] += 1;
        m[a.tail][a.id] -= 1;
    }
    m
}

/// Rows of `π` (types by arrows).
pub fn type_matrix(q: &Quiver) -> Vec<Vec<Int>> {
    let mut m = vec![vec![Int::zero(); q.arrow_count()]; q.type_count()];
    for a in q.arrows() {
        m[a.kind][a.id] = Int::one();
    }
    m
}

/// Integer closed flows `ker ∂`.
pub fn cycle_lattice(q: &Quiver) -> LatticeBasis {
    LatticeBasis::span(
        &integer_kernel(&boundary_matrix(q), q.arrow_count()),
        q.arrow_count(),
    )
}

/// A flow with `π f = x` and `∂f = ζ`; built from a spanning chain and a closed sequential flow.
pub fn solve_flow(q: &Quiver, x: &[Int], zeta: &ZetaVector) -> Result<Flow> {
    if x.len() != q.type_count() {
        return Err(Error::Invalid(format!(
            "type vector has {} entries, expected {}",
            x.len(),
            q.type_count()
        )));
    }
    let zeta = zeta.clone().for_quiver(q)?;
    if !zeta.is_integral() {
        return Err(Error::NotIntegral);
    }
    let zi: Vec<Int> = zeta.values().iter().map(|v| v.to_integer()).collect();
    let obs = obstruction(q, x, &zi);
    if obs != 0 {
        return Err(Error::Incompatible {
            x: x.iter().map(|v| v.to_string()).collect(),
            obstruction: q.vertex_label(obs),
        });
    }
    let g = flow_on_tree(q, &spanning_chain(q), &zeta)?;
    let gt = type_of(q, &g);
    let mut seq = Vec::new();
    for (i, (xi, gi)) in x.iter().zip(&gt).enumerate() {
        let d = xi - gi.to_integer();
        let j = i as i32 + 1;
        let step = if d.is_negative() { -j } else { j };
        let mut k = Int::zero();
        while k < d.abs() {
            seq.push(step);
            k += 1;
        }
    }
    let closed = seq_to_flow(q, &SeqFlowExpr::new(0, seq))?;
    Ok(g.add(&closed))
}

/// Spanning tree used by `solve_flow`: the chain of a unit-weight type for cyclic groups,
/// a breadth-first tree otherwise.
pub fn spanning_chain(q: &Quiver) -> Vec<usize> {
    if let Some(a) = q.cyclic() {
        let r = a.order();
        if let Some(t) = a.weights().iter().position(|w| w.gcd(&r) == 1) {
            let w = a.weights()[t] as usize;
            let r = r as usize;
            return (1..r).map(|k| q.arrow_at(k * w % r, t)).collect();
        }
    }
    let mut seen = vec![false; q.vertex_count()];
    seen[0] = true;
    let mut tree = Vec::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let mut moves: Vec<(usize, usize)> = q.outgoing(v).map(|a| (a, q.arrow(a).head)).collect();
        moves.extend(q.incoming(v).iter().map(|&a| (a, q.arrow(a).tail)));
        for (a, u) in moves {
            if !seen[u] {
                seen[u] = true;
                tree.push(a);
                queue.push_back(u);
            }
        }
    }
    tree
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub action: String,
    pub vertices: usize,
    pub arrows: usize,
    pub types: usize,
    pub lambda2_rank: usize,
    pub expected_lambda2_rank: usize,
    pub kernel_rank: usize,
    pub kernel_equals_lambda2: bool,
    pub pi_of_cycles_equals_pi: bool,
    pub pi_index: String,
    pub cokernel_order: Option<String>,
    pub group_order: u64,
    pub passed: bool,
}

/// Checks `ker(π×∂) = Λ²`, `π(ker ∂) = Π` and that `π×∂` has cokernel of order |G|.
pub fn check_exactness(q: &Quiver) -> ExactnessReport {
    let na = q.arrow_count();
    let nv = q.vertex_count();
    let n = q.type_count();
    let l2 = lambda2(q);
    let mut stacked = type_matrix(q);
    stacked.extend(boundary_matrix(q));
    let kernel = LatticeBasis::span(&integer_kernel(&stacked, na), na);
    let cycles = integer_kernel(&boundary_matrix(q), na);
    let projected: Vec<Vec<Int>> = cycles
        .iter()
        .map(|c| {
            let f = Flow::from_ints(q, c).expect("length matches");
            type_of(q, &f).iter().map(|t| t.to_integer()).collect()
        })
        .collect();
    let pi_cycles = LatticeBasis::span(&projected, n);
    let pi = lattice_pi(q);
    // Coordinates on Z^n × Λ^{0,0}: the type vector and ζ(v) for v ≠ 0.
    let image: Vec<Vec<Int>> = (0..na)
        .map(|a| {
            let mut v: Vec<Int> = (0..n).map(|i| stacked[i][a].clone()).collect();
            v.extend((1..nv).map(|u| stacked[n + u][a].clone()));
            v
        })
        .collect();
    let diag = smith_diagonal(&image, n + nv - 1);
    let cokernel =
        (diag.len() == n + nv - 1).then(|| diag.iter().fold(BigInt::one(), |a, d| a * d));
    let group_order = q.action().group_order();
    let expected = na + 1 - n - nv;
    let kernel_equals_lambda2 = kernel == l2;
    let pi_of_cycles_equals_pi = pi_cycles == pi;
    let passed = kernel_equals_lambda2
        && pi_of_cycles_equals_pi
        && l2.rank() == expected
        && cokernel.as_ref() == Some(&Int::from(group_order));
    ExactnessReport {
        action: crate::flow::quiver_ref(q),
        vertices: nv,
        arrows: na,
        types: n,
        lambda2_rank: l2.rank(),
        expected_lambda2_rank: expected,
        kernel_rank: kernel.rank(),
        kernel_equals_lambda2,
        pi_of_cycles_equals_pi,
        pi_index: pi
            .index()
            .map_or_else(|| "infinite".into(), |i| i.to_string()),
        cokernel_order: cokernel.map(|c| c.to_string()),
        group_order,
        passed,
    }
}

/// `∂` of an integral flow as integers.
pub fn int_boundary(q: &Quiver, f: &Flow) -> Vec<Int> {
    boundary(q, f)
        .values()
        .iter()
        .map(|v| v.to_integer())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_big;

    fn big(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn pi_for_five() {
        let q = Quiver::from_weights(5, &[1, 2, 3]).unwrap();
        let pi = lattice_pi(&q);
        assert_eq!(pi.index(), Some(Int::from(5)));
        for v in [[1, 2, 0], [0, 1, 1], [2, -1, 0]] {
            assert!(pi.contains(&big(&v)));
        }
        let listed =
            LatticeBasis::span(&to_big(&[vec![1, 2, 0], vec![0, 1, 1], vec![2, -1, 0]]), 3);
        assert_eq!(listed, pi);
        assert!(!pi.contains(&big(&[1, 0, 0])));
    }

    #[test]
    fn pi_for_three_and_trivial() {
        let q = Quiver::from_weights(3, &[1, 1, 1]).unwrap();
        let pi = lattice_pi(&q);
        assert_eq!(pi.index(), Some(Int::from(3)));
        for v in [[3, 0, 0], [1, -1, 0], [0, 1, -1]] {
            assert!(pi.contains(&big(&v)));
        }
        let t = crate::quiver::CyclicAction::allow_fixed_loci(1, &[1, 1]).unwrap();
        let tq = Quiver::mckay_abelian(crate::GroupAction::cyclic(t)).unwrap();
        assert_eq!(lattice_pi(&tq), LatticeBasis::standard(2));
    }

    #[test]
    fn exactness_small() {
        for (r, w) in [(5u32, vec![1, 2, 3]), (2, vec![1, 1]), (3, vec![1, 1, 1])] {
            let q = Quiver::from_weights(r, &w).unwrap();
            let rep = check_exactness(&q);
            assert!(rep.passed, "{rep:?}");
            assert_eq!(rep.lambda2_rank, (w.len() - 1) * (r as usize - 1));
            assert_eq!(rep.cokernel_order, Some(r.to_string()));
        }
    }

    #[test]
    fn solve_flow_examples() {
        let q = Quiver::from_weights(5, &[1, 2, 3]).unwrap();
        let z0 = ZetaVector::zero(5);
        assert!(solve_flow(&q, &big(&[0, 0, 0]), &z0).unwrap().is_zero());
        let f = solve_flow(&q, &big(&[1, 2, 0]), &z0).unwrap();
        assert_eq!(
            f,
            seq_to_flow(&q, &SeqFlowExpr::new(0, vec![1, 2, 2])).unwrap()
        );
        let mut z = vec![0i64; 5];
        z[2] = 1;
        z[3] = -1;
        let f = solve_flow(&q, &big(&[1, 0, 0]), &ZetaVector::from_ints(&z).unwrap()).unwrap();
        assert_eq!(f, Flow::indicator(&q, q.arrow_at(3, 0)));
        let err = solve_flow(&q, &big(&[1, 0, 0]), &z0).unwrap_err();
        assert!(matches!(err, Error::Incompatible { .. }));
    }

    #[test]
    fn solve_flow_hits_targets() {
        let q = Quiver::from_weights(7, &[1, 2, 4]).unwrap();
        let z = ZetaVector::from_ints(&[3, -1, 0, 2, -5, 4, -3]).unwrap();
        let zi: Vec<Int> = z.values().iter().map(|v| v.to_integer()).collect();
        let mut x = big(&[2, 0, 0]);
        while obstruction(&q, &x, &zi) != 0 {
            x[0] += 1;
        }
        let f = solve_flow(&q, &x, &z).unwrap();
        assert_eq!(int_boundary(&q, &f), zi);
        let t: Vec<Int> = type_of(&q, &f).iter().map(|v| v.to_integer()).collect();
        assert_eq!(t, x);
    }
}
