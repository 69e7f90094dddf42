//! Tangent cones of `C_ζ = π F_ζ`, its extreme points, the dual fan and its singularities.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::closure::{cycle_closure, projected_cycle_span, rank, Configuration};
use crate::dd::{cone_from_constraints, dual_cone, minimal_generators, ConeGenerators};
use crate::error::{Error, Result};
use crate::flow::{type_of, Flow, ZetaVector};
use crate::lattice::{lattice_pi, LatticeBasis};
use crate::linalg::{int_det, integer_kernel, rank as mat_rank, rref, smith_diagonal, solve};
use crate::lp::{LinearProgram, LpResult, Relation};
use crate::quiver::Quiver;
use crate::scalar::{primitive, rat_string};
use crate::trees::{fundamental_cycle, is_ic_tree, visit_spanning_trees};
use crate::{Int, Rat};

fn to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

fn to_i64(v: &[Int]) -> Vec<i64> {
    v.iter()
        .map(|x| x.to_i64().expect("lattice coordinate fits in i64"))
        .collect()
}

fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_string).collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Primitive rational row basis of the span, in reduced echelon form.
fn canonical_span(vectors: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let (m, pivots) = rref(vectors, dim);
    m.into_iter().take(pivots.len()).collect()
}

/// Orthogonal projection onto the complement of `span` (given by an echelon basis).
fn project_off(v: &[Rat], span: &[Vec<Rat>]) -> Vec<Rat> {
    if span.is_empty() {
        return v.to_vec();
    }
    let k = span.len();
    let gram: Vec<Vec<Rat>> = span
        .iter()
        .map(|a| span.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs: Vec<Rat> = span.iter().map(|a| dot(a, v)).collect();
    let coeffs = solve(&gram, &rhs, k).expect("echelon rows are independent");
    let mut out = v.to_vec();
    for (c, a) in coeffs.iter().zip(span) {
        for (o, x) in out.iter_mut().zip(a) {
            *o -= c * x;
        }
    }
    out
}

/// A rational polyhedral cone in `Π ⊗ ℚ`, stored by Π-primitive extreme rays and a lineality basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeCone {
    lattice: LatticeBasis,
    rays: Vec<Vec<Int>>,
    lineality: Vec<Vec<Int>>,
}

impl LatticeCone {
    /// The cone `cone(rays) + span(lineality)`, reduced to extreme rays.
    pub fn from_generators(
        lattice: &LatticeBasis,
        rays: &[Vec<Rat>],
        lineality: &[Vec<Rat>],
    ) -> Self {
        let dim = lattice.dim();
        let gens = ConeGenerators {
            rays: rays
                .iter()
                .filter(|r| r.iter().any(|x| !x.is_zero()))
                .cloned()
                .collect(),
            lineality: lineality.to_vec(),
        };
        let min = minimal_generators(dim, &gens);
        let lin = canonical_span(&min.lineality, dim);
        let mut out_rays: Vec<Vec<Int>> = min
            .rays
            .iter()
            .map(|r| project_off(r, &lin))
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|r| pi_primitive(lattice, &r))
            .collect();
        out_rays.sort();
        out_rays.dedup();
        let mut out_lin: Vec<Vec<Int>> = lin.iter().map(|l| primitive(l)).collect();
        out_lin.sort();
        LatticeCone {
            lattice: lattice.clone(),
            rays: out_rays,
            lineality: out_lin,
        }
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    /// Extreme-ray generators in `ℤⁿ` coordinates, primitive in Π.
    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<Int>] {
        &self.lineality
    }

    /// Generators in coordinates of the Hermite basis of Π.
    pub fn pi_coordinates(&self) -> Vec<Vec<Int>> {
        self.rays
            .iter()
            .map(|r| self.lattice.int_coordinates(r).expect("rays lie in Π"))
            .collect()
    }

    pub fn ambient_dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn dim(&self) -> usize {
        let all: Vec<Vec<Rat>> = self
            .rays
            .iter()
            .chain(&self.lineality)
            .map(|v| to_rat(v))
            .collect();
        mat_rank(&all, self.ambient_dim())
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    /// `{y : ⟨x, y⟩ ≥ 0 on the cone}` with rays primitive in the dual lattice `Π*`.
    pub fn dual(&self) -> DualCone {
        let n = self.ambient_dim();
        let gens = ConeGenerators {
            rays: self.rays.iter().map(|r| to_rat(r)).collect(),
            lineality: self.lineality.iter().map(|r| to_rat(r)).collect(),
        };
        let d = dual_cone(n, &gens);
        let lin = canonical_span(&d.lineality, n);
        let mut rays: Vec<Vec<Rat>> = d
            .rays
            .iter()
            .map(|r| project_off(r, &lin))
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|r| dual_primitive(&self.lattice, &r))
            .collect();
        rays.sort();
        rays.dedup();
        DualCone {
            rays,
            lineality: lin,
        }
    }

    pub fn to_json(&self) -> ConeJson {
        ConeJson {
            rays: self.rays.iter().map(|r| to_i64(r)).collect(),
            pi_coordinates: self.pi_coordinates().iter().map(|r| to_i64(r)).collect(),
            lineality: self.lineality.iter().map(|r| to_i64(r)).collect(),
            dim: self.dim(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeJson {
    pub rays: Vec<Vec<i64>>,
    #[serde(rename = "piCoordinates")]
    pub pi_coordinates: Vec<Vec<i64>>,
    pub lineality: Vec<Vec<i64>>,
    pub dim: usize,
}

/// A cone in `Π* ⊗ ℚ` with rays primitive in `Π*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCone {
    pub rays: Vec<Vec<Rat>>,
    pub lineality: Vec<Vec<Rat>>,
}

/// Smallest positive multiple of `v` lying in Π.
fn pi_primitive(lattice: &LatticeBasis, v: &[Rat]) -> Vec<Int> {
    let coords = lattice.coordinates(v).expect("Π has full rank");
    let p = primitive(&coords);
    let mut out = vec![Int::zero(); lattice.dim()];
    for (c, row) in p.iter().zip(lattice.rows()) {
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

/// Smallest positive multiple of `y` lying in `Π* = {y : ⟨x, y⟩ ∈ ℤ for x ∈ Π}`.
pub fn dual_primitive(lattice: &LatticeBasis, y: &[Rat]) -> Vec<Rat> {
    let rows: Vec<Vec<Rat>> = lattice.rows().iter().map(|r| to_rat(r)).collect();
    let pairing: Vec<Rat> = rows.iter().map(|r| dot(r, y)).collect();
    let c = to_rat(&primitive(&pairing));
    solve(&rows, &c, lattice.dim()).expect("Π has full rank")
}

/// Coordinates of `y ∈ Π*` in the basis dual to the Hermite basis of Π.
fn dual_coordinates(lattice: &LatticeBasis, y: &[Rat]) -> Vec<Int> {
    lattice
        .rows()
        .iter()
        .map(|r| dot(&to_rat(r), y))
        .map(|x| {
            assert!(x.is_integer(), "vector is not in the dual lattice");
            x.to_integer()
        })
        .collect()
}

/// A spanning tree containing as many arrows of `preferred` as possible.
fn spanning_tree_preferring(q: &Quiver, preferred: &[bool]) -> Vec<usize> {
    let nv = q.vertex_count();
    let mut comp: Vec<usize> = (0..nv).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    let mut order: Vec<usize> = (0..q.arrow_count()).collect();
    order.sort_by_key(|&a| !preferred[a]);
    let mut tree = Vec::new();
    for a in order {
        let ar = q.arrow(a);
        let (x, y) = (find(&mut comp, ar.tail), find(&mut comp, ar.head));
        if x != y {
            comp[x] = y;
            tree.push(a);
        }
    }
    tree.sort_unstable();
    tree
}

/// `π F₀(S̄)`, the cone spanned by types of cycles whose negative part lies in the closure of `s`.
pub fn tangent_cone(q: &Quiver, s: &Configuration) -> LatticeCone {
    let closed = cycle_closure(q, s).mask(q.arrow_count());
    cone_of_closed_set(q, &closed)
}

/// `π F₀(S)` for a set `S` taken as is.
pub fn cone_of_closed_set(q: &Quiver, closed: &[bool]) -> LatticeCone {
    let n = q.type_count();
    let lattice = lattice_pi(q);
    let tree = spanning_tree_preferring(q, closed);
    let in_tree = Configuration::new(tree.clone());
    let others: Vec<usize> = (0..q.arrow_count())
        .filter(|&a| !in_tree.contains(a))
        .collect();
    let cycles: Vec<Flow> = others
        .iter()
        .map(|&e| fundamental_cycle(q, &tree, e).expect("tree is spanning"))
        .collect();
    let types: Vec<Vec<Rat>> = cycles.iter().map(|c| type_of(q, c)).collect();
    let constrained_tree: Vec<usize> = tree.iter().copied().filter(|&a| !closed[a]).collect();
    let (rays, lineality): (Vec<Vec<Rat>>, Vec<Vec<Rat>>) = if constrained_tree.is_empty() {
        let mut rays = Vec::new();
        let mut lin = Vec::new();
        for (k, &e) in others.iter().enumerate() {
            if closed[e] {
                lin.push(types[k].clone());
            } else {
                rays.push(types[k].clone());
            }
        }
        (rays, lin)
    } else {
        let m = others.len();
        let mut ineqs: Vec<Vec<Rat>> = Vec::new();
        for (k, &e) in others.iter().enumerate() {
            if !closed[e] {
                let mut row = vec![Rat::zero(); m];
                row[k] = Rat::one();
                ineqs.push(row);
            }
        }
        for &a in &constrained_tree {
            ineqs.push(cycles.iter().map(|c| c.get(a).clone()).collect());
        }
        let cone = cone_from_constraints(m, &ineqs, &[]);
        let image = |lam: &Vec<Rat>| -> Vec<Rat> {
            let mut t = vec![Rat::zero(); n];
            for (l, ty) in lam.iter().zip(&types) {
                for (o, x) in t.iter_mut().zip(ty) {
                    *o += l * x;
                }
            }
            t
        };
        (
            cone.rays.iter().map(image).collect(),
            cone.lineality.iter().map(image).collect(),
        )
    };
    LatticeCone::from_generators(&lattice, &rays, &lineality)
}

/// Classification tag of a cone's singularity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConeClass {
    Smooth,
    CyclicQuotient {
        order: i64,
        weights: Vec<i64>,
    },
    /// Four generators with `v₁ + v₃ = v₂ + v₄` in the listed order.
    QuadricCone {
        generators: Vec<Vec<i64>>,
    },
    Other {
        relations: Vec<Vec<i64>>,
        quotient: Vec<i64>,
    },
    /// Not full-dimensional or not pointed: a face datum rather than a vertex cone.
    Face {
        dim: usize,
    },
}

impl ConeClass {
    /// The serialized `kind` tag.
    pub fn kind(&self) -> &'static str {
        match self {
            ConeClass::Smooth => "smooth",
            ConeClass::CyclicQuotient { .. } => "cyclic-quotient",
            ConeClass::QuadricCone { .. } => "quadric-cone",
            ConeClass::Other { .. } => "other",
            ConeClass::Face { .. } => "face",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub generators: usize,
    pub smooth: bool,
    pub class: ConeClass,
    /// Integer relations among the generators (columns in the order of `LatticeCone::rays`).
    pub relations: Vec<Vec<i64>>,
}

/// Smoothness (simplicial with a Π-basis of generators), cyclic quotients, the quadric cone, or
/// the relation lattice otherwise.
pub fn classify_cone(c: &LatticeCone) -> ConeReport {
    let n = c.ambient_dim();
    let k = c.rays().len();
    let coords = c.pi_coordinates();
    let columns: Vec<Vec<Int>> = (0..n)
        .map(|i| coords.iter().map(|r| r[i].clone()).collect())
        .collect();
    let relations: Vec<Vec<i64>> = if k == 0 {
        Vec::new()
    } else {
        integer_kernel(&columns, k)
            .iter()
            .map(|r| to_i64(r))
            .collect()
    };
    if !c.is_pointed() || !c.is_full_dimensional() {
        return ConeReport {
            generators: k,
            smooth: false,
            class: ConeClass::Face { dim: c.dim() },
            relations,
        };
    }
    if k == n {
        let det = int_det(&coords).abs();
        if det.is_one() {
            return ConeReport {
                generators: k,
                smooth: true,
                class: ConeClass::Smooth,
                relations,
            };
        }
        let class = cyclic_quotient(c).unwrap_or_else(|| ConeClass::Other {
            relations: Vec::new(),
            quotient: quotient_invariants(c),
        });
        return ConeReport {
            generators: k,
            smooth: false,
            class,
            relations,
        };
    }
    let class = quadric(&coords, &relations, c).unwrap_or_else(|| ConeClass::Other {
        relations: relations.clone(),
        quotient: Vec::new(),
    });
    ConeReport {
        generators: k,
        smooth: false,
        class,
        relations,
    }
}

fn quadric(coords: &[Vec<Int>], relations: &[Vec<i64>], c: &LatticeCone) -> Option<ConeClass> {
    if coords.len() != 4 || c.ambient_dim() != 3 || relations.len() != 1 {
        return None;
    }
    let triples_unimodular = (0..4).all(|skip| {
        let m: Vec<Vec<Int>> = (0..4)
            .filter(|&i| i != skip)
            .map(|i| coords[i].clone())
            .collect();
        int_det(&m).abs().is_one()
    });
    let rel = &relations[0];
    let plus: Vec<usize> = (0..4).filter(|&i| rel[i] == 1).collect();
    let minus: Vec<usize> = (0..4).filter(|&i| rel[i] == -1).collect();
    if !triples_unimodular || plus.len() != 2 || minus.len() != 2 {
        return None;
    }
    let order = [plus[0], minus[0], plus[1], minus[1]];
    Some(ConeClass::QuadricCone {
        generators: order.iter().map(|&i| to_i64(&c.rays()[i])).collect(),
    })
}

/// Simplicial dual cone in `Π*`: its rays span a sublattice `N'`; returns the Smith invariants of `Π*/N'`.
fn quotient_invariants(c: &LatticeCone) -> Vec<i64> {
    let d = c.dual();
    let cols: Vec<Vec<Int>> = d
        .rays
        .iter()
        .map(|y| dual_coordinates(c.lattice(), y))
        .collect();
    smith_diagonal(&cols, c.ambient_dim())
        .iter()
        .filter(|x| !x.is_one())
        .map(|x| x.to_i64().expect("small group"))
        .collect()
}

/// `1/d(a₁,…,aₙ)` when `Π*/N'` is cyclic, with the lexicographically smallest weight vector
/// among generators; weights follow the order of the dual rays.
fn cyclic_quotient(c: &LatticeCone) -> Option<ConeClass> {
    let n = c.ambient_dim();
    let d = c.dual();
    if d.rays.len() != n {
        return None;
    }
    let u: Vec<Vec<Int>> = d
        .rays
        .iter()
        .map(|y| dual_coordinates(c.lattice(), y))
        .collect();
    let det = int_det(&u).abs();
    let order = det.to_i64()?;
    let cols: Vec<Vec<Rat>> = (0..n)
        .map(|i| u.iter().map(|r| Rat::from_integer(r[i].clone())).collect())
        .collect();
    let gens: Vec<Vec<i64>> = (0..n)
        .map(|k| {
            let mut e = vec![Rat::zero(); n];
            e[k] = Rat::one();
            let lam = solve(&cols, &e, n).expect("simplicial cone");
            lam.iter()
                .map(|x| {
                    let v = (x * Rat::from_integer(det.clone())).to_integer();
                    v.mod_floor(&det).to_i64().expect("residue")
                })
                .collect()
        })
        .collect();
    let mut group: BTreeSet<Vec<i64>> = BTreeSet::from([vec![0; n]]);
    let mut frontier = vec![vec![0i64; n]];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y: Vec<i64> = x
                .iter()
                .zip(g)
                .map(|(a, b)| (a + b).rem_euclid(order))
                .collect();
            if group.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    if group.len() as i64 != order {
        return None;
    }
    group
        .into_iter()
        .find(|x| x.iter().fold(order, |g, a| g.gcd(a)) == 1)
        .map(|weights| ConeClass::CyclicQuotient { order, weights })
}

/// A vertex of `C_ζ` together with a fibre flow, its support, an IC-tree and the tangent cone.
#[derive(Clone, Debug)]
pub struct ExtremePoint {
    pub point: Vec<Rat>,
    pub flow: Flow,
    /// Arrows carrying positive flow; acyclic.
    pub support: Configuration,
    /// An IC spanning tree through the support, if one was found.
    pub tree: Option<Configuration>,
    pub cone: LatticeCone,
}

/// `{f ≥ 0 : ∂f = ζ}` as a linear program on the arrows.
pub fn zeta_flow_program(q: &Quiver, zeta: &ZetaVector) -> LinearProgram<Rat> {
    let mut lp: LinearProgram<Rat> = LinearProgram::new(q.arrow_count());
    for v in 0..q.vertex_count() {
        let mut terms: Vec<(usize, Rat)> = q.incoming(v).iter().map(|&a| (a, Rat::one())).collect();
        terms.extend(q.outgoing(v).map(|a| (a, -Rat::one())));
        lp.add_sparse(&terms, Relation::Eq, zeta.values()[v].clone());
    }
    lp
}

fn type_objective(q: &Quiver, c: &[Rat]) -> Vec<Rat> {
    q.arrows().iter().map(|a| c[a.kind].clone()).collect()
}

/// Cancels cycles in the support of `f` one at a time; every such cycle has type zero when `π f`
/// is extreme, so `π f` is unchanged.
fn acyclic_fibre_flow(q: &Quiver, f: &Flow) -> Flow {
    let mut f = f.clone();
    loop {
        let support = f.positive_support();
        let mut comp: Vec<usize> = (0..q.vertex_count()).collect();
        fn find(c: &mut [usize], x: usize) -> usize {
            if c[x] != x {
                let r = find(c, c[x]);
                c[x] = r;
            }
            c[x]
        }
        let mut forest = Vec::new();
        let mut closing = None;
        for &a in &support {
            let ar = q.arrow(a);
            let (x, y) = (find(&mut comp, ar.tail), find(&mut comp, ar.head));
            if x == y {
                closing = Some(a);
                break;
            }
            comp[x] = y;
            forest.push(a);
        }
        let Some(e) = closing else {
            return f;
        };
        let cycle = cycle_through(q, &forest, e);
        let step = (0..q.arrow_count())
            .filter(|&a| cycle[a].is_negative())
            .map(|a| f.get(a) / -&cycle[a])
            .chain(
                (0..q.arrow_count())
                    .filter(|&a| cycle[a].is_positive())
                    .map(|a| -(f.get(a) / &cycle[a])),
            )
            .filter(|t| !t.is_zero())
            .min_by(|a, b| a.abs().cmp(&b.abs()))
            .expect("a cycle in the support has arrows");
        for a in 0..q.arrow_count() {
            if !cycle[a].is_zero() {
                let v = f.get(a) + &step * &cycle[a];
                f.set(a, v);
            }
        }
    }
}

/// The closed signed indicator of `e` plus the forest path joining its ends.
fn cycle_through(q: &Quiver, forest: &[usize], e: usize) -> Vec<Rat> {
    let ar = q.arrow(e);
    let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut stack = vec![ar.head];
    let mut seen = vec![false; q.vertex_count()];
    seen[ar.head] = true;
    while let Some(v) = stack.pop() {
        for &a in forest {
            let fa = q.arrow(a);
            let u = if fa.tail == v {
                fa.head
            } else if fa.head == v {
                fa.tail
            } else {
                continue;
            };
            if !seen[u] {
                seen[u] = true;
                prev.insert(u, (v, a));
                stack.push(u);
            }
        }
    }
    let mut c = vec![Rat::zero(); q.arrow_count()];
    c[e] = Rat::one();
    let mut v = ar.tail;
    while v != ar.head {
        let (p, a) = prev[&v];
        // Walking from p to v along a.
        if q.arrow(a).tail == p {
            c[a] += Rat::one();
        } else {
            c[a] -= Rat::one();
        }
        v = p;
    }
    c
}

/// First IC spanning tree (in canonical order) containing `forest`, within a search budget.
pub fn ic_tree_through(q: &Quiver, forest: &[usize], budget: usize) -> Option<Configuration> {
    let mut found = None;
    let mut left = budget;
    visit_spanning_trees(q, forest, |t| {
        let t = Configuration::new(t.to_vec());
        if is_ic_tree(q, &t).unwrap_or(false) {
            found = Some(t);
            return ControlFlow::Break(());
        }
        left -= 1;
        if left == 0 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .ok()?;
    found
}

const TREE_SEARCH_BUDGET: usize = 200_000;

/// Vertices of `C_ζ`, found by a beneath-beyond hull driven by exact linear programs over `F_ζ`,
/// sorted lexicographically.
pub fn extreme_points(q: &Quiver, zeta: &ZetaVector) -> Result<Vec<ExtremePoint>> {
    let zeta = zeta.clone().for_quiver(q)?;
    let points = vertex_points(q, &zeta)?;
    let lp = zeta_flow_program(q, &zeta);
    points
        .into_par_iter()
        .map(|x| {
            let mut fibre = lp.clone();
            for i in 0..q.type_count() {
                let mut c = vec![Rat::zero(); q.type_count()];
                c[i] = Rat::one();
                fibre.add(type_objective(q, &c), Relation::Eq, x[i].clone());
            }
            let f = Flow::new(
                q,
                fibre
                    .feasible_point()
                    .ok_or(Error::Invalid("empty fibre over a vertex".into()))?,
            )?;
            let flow = acyclic_fibre_flow(q, &f);
            let support = Configuration::new(flow.positive_support());
            let tree = if support.len() + 1 == q.vertex_count() && support.is_spanning(q) {
                Some(support.clone())
            } else {
                ic_tree_through(q, support.arrows(), TREE_SEARCH_BUDGET)
            };
            let cone = tangent_cone(q, &support);
            Ok(ExtremePoint {
                point: x,
                flow,
                support,
                tree,
                cone,
            })
        })
        .collect()
}

/// Vertex set of `conv(V) + ℝⁿ₊ = π F_ζ`, lexicographically sorted.
pub fn vertex_points(q: &Quiver, zeta: &ZetaVector) -> Result<Vec<Vec<Rat>>> {
    let n = q.type_count();
    let lp = zeta_flow_program(q, zeta);
    let lex_vertex = |c: &[Rat]| -> Option<Vec<Rat>> {
        let mut objectives = vec![type_objective(q, c)];
        for i in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[i] = Rat::one();
            objectives.push(type_objective(q, &e));
        }
        let f = lp.lexmin(&objectives).point()?;
        Some(type_of(q, &Flow::new(q, f).expect("arrow count")))
    };
    let Some(first) = lex_vertex(&vec![Rat::one(); n]) else {
        return Ok(Vec::new());
    };
    let mut vertices: BTreeSet<Vec<Rat>> = BTreeSet::from([first]);
    let mut certified: BTreeSet<Vec<Rat>> = BTreeSet::new();
    loop {
        let facets = lower_facets(&vertices, n);
        let mut grew = false;
        for (b, c) in facets {
            let mut key = vec![b.clone()];
            key.extend(c.iter().cloned());
            if certified.contains(&key) {
                continue;
            }
            let best = match lp.minimize(&type_objective(q, &c)) {
                LpResult::Optimal { value, .. } => value,
                _ => return Err(Error::Invalid("flow program lost feasibility".into())),
            };
            if best < -b.clone() {
                let v = lex_vertex(&c).expect("feasible");
                if vertices.insert(v) {
                    grew = true;
                    break;
                }
            }
            certified.insert(key);
        }
        if !grew {
            return Ok(vertices.into_iter().collect());
        }
    }
}

/// Facets `c·x ≥ -b` of `conv(V) + ℝⁿ₊` with `c ≠ 0`.
fn lower_facets(vertices: &BTreeSet<Vec<Rat>>, n: usize) -> Vec<(Rat, Vec<Rat>)> {
    let mut rays: Vec<Vec<Rat>> = vertices
        .iter()
        .map(|v| {
            std::iter::once(Rat::one())
                .chain(v.iter().cloned())
                .collect()
        })
        .collect();
    for i in 0..n {
        let mut e = vec![Rat::zero(); n + 1];
        e[i + 1] = Rat::one();
        rays.push(e);
    }
    let d = dual_cone(
        n + 1,
        &ConeGenerators {
            rays,
            lineality: Vec::new(),
        },
    );
    let mut out: Vec<(Rat, Vec<Rat>)> = d
        .rays
        .into_iter()
        .filter(|r| r[1..].iter().any(|x| !x.is_zero()))
        .map(|r| (r[0].clone(), r[1..].to_vec()))
        .collect();
    out.sort();
    out
}

/// `|ext C_ζ|`.
pub fn euler_number(q: &Quiver, zeta: &ZetaVector) -> Result<usize> {
    Ok(vertex_points(q, &zeta.clone().for_quiver(q)?)?.len())
}

/// A maximal cone of the fan: the dual of the tangent cone at one vertex.
#[derive(Clone, Debug)]
pub struct FanCone {
    pub vertex: Vec<Rat>,
    pub tree: Option<Configuration>,
    pub rays: Vec<usize>,
    pub tangent: LatticeCone,
}

#[derive(Clone, Debug)]
pub struct Fan {
    pub lattice: LatticeBasis,
    /// Primitive generators in `Π*`, sorted.
    pub rays: Vec<Vec<Rat>>,
    pub maximal: Vec<FanCone>,
    /// Every cone of the fan as a sorted ray-index set, including the zero cone.
    pub cones: BTreeSet<Vec<usize>>,
    pub generic: bool,
}

impl Fan {
    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Cones of dimension `k`.
    pub fn skeleton(&self, k: usize) -> Vec<&Vec<usize>> {
        self.cones
            .iter()
            .filter(|c| self.cone_dim(c) == k)
            .collect()
    }

    pub fn cone_dim(&self, cone: &[usize]) -> usize {
        let vs: Vec<Vec<Rat>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        mat_rank(&vs, self.dim())
    }

    /// Every pair of maximal cones meets in a cone spanned by their common rays, which is a face
    /// of both.
    pub fn check_intersections(&self) -> bool {
        let faces: Vec<BTreeSet<Vec<usize>>> =
            self.maximal.iter().map(|m| cone_faces(self, m)).collect();
        for i in 0..self.maximal.len() {
            for j in i + 1..self.maximal.len() {
                let a = &self.maximal[i];
                let b = &self.maximal[j];
                let ineqs: Vec<Vec<Rat>> = a
                    .tangent
                    .rays()
                    .iter()
                    .chain(b.tangent.rays())
                    .map(|r| to_rat(r))
                    .collect();
                let meet = cone_from_constraints(self.dim(), &ineqs, &[]);
                if !meet.lineality.is_empty() {
                    return false;
                }
                let mut idx: Vec<usize> = Vec::new();
                for r in &meet.rays {
                    let p = dual_primitive(&self.lattice, r);
                    match self.rays.iter().position(|x| *x == p) {
                        Some(k) => idx.push(k),
                        None => return false,
                    }
                }
                idx.sort_unstable();
                let common: Vec<usize> = a
                    .rays
                    .iter()
                    .copied()
                    .filter(|k| b.rays.contains(k))
                    .collect();
                if idx != common || !faces[i].contains(&common) || !faces[j].contains(&common) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            rays: self.rays.iter().map(|r| rat_strings(r)).collect(),
            maximal_cones: self
                .maximal
                .iter()
                .map(|m| FanConeJson {
                    vertex: rat_strings(&m.vertex),
                    rays: m.rays.clone(),
                    tree: m.tree.clone(),
                    tangent_cone: m.tangent.to_json(),
                })
                .collect(),
            cones: self
                .cones
                .iter()
                .map(|c| FanFaceJson {
                    dim: self.cone_dim(c),
                    rays: c.clone(),
                })
                .collect(),
            generic: self.generic,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FanJson {
    pub rays: Vec<Vec<String>>,
    #[serde(rename = "maximalCones")]
    pub maximal_cones: Vec<FanConeJson>,
    pub cones: Vec<FanFaceJson>,
    pub generic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FanConeJson {
    pub vertex: Vec<String>,
    pub rays: Vec<usize>,
    pub tree: Option<Configuration>,
    #[serde(rename = "tangentCone")]
    pub tangent_cone: ConeJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct FanFaceJson {
    pub dim: usize,
    pub rays: Vec<usize>,
}

/// Faces of a maximal cone: intersections of its facets, each facet cut out by one tangent generator.
fn cone_faces(fan: &Fan, m: &FanCone) -> BTreeSet<Vec<usize>> {
    let facets: Vec<Vec<usize>> = m
        .tangent
        .rays()
        .iter()
        .map(|g| {
            let g = to_rat(g);
            m.rays
                .iter()
                .copied()
                .filter(|&k| dot(&g, &fan.rays[k]).is_zero())
                .collect()
        })
        .collect();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::from([m.rays.clone()]);
    let mut frontier = vec![m.rays.clone()];
    while let Some(f) = frontier.pop() {
        for facet in &facets {
            let meet: Vec<usize> = f.iter().copied().filter(|k| facet.contains(k)).collect();
            if faces.insert(meet.clone()) {
                frontier.push(meet);
            }
        }
    }
    faces
}

/// The normal fan of `C_ζ` in `Π*`: one maximal cone per vertex, dual to its tangent cone.
pub fn build_fan(q: &Quiver, zeta: &ZetaVector) -> Result<Fan> {
    let zeta = zeta.clone().for_quiver(q)?;
    let lattice = lattice_pi(q);
    let points = extreme_points(q, &zeta)?;
    let duals: Vec<DualCone> = points.iter().map(|p| p.cone.dual()).collect();
    let rays: Vec<Vec<Rat>> = duals
        .iter()
        .flat_map(|d| d.rays.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let maximal: Vec<FanCone> = points
        .into_iter()
        .zip(&duals)
        .map(|(p, d)| {
            let mut idx: Vec<usize> = d
                .rays
                .iter()
                .map(|r| rays.iter().position(|x| x == r).expect("ray collected"))
                .collect();
            idx.sort_unstable();
            FanCone {
                vertex: p.point,
                tree: p.tree,
                rays: idx,
                tangent: p.cone,
            }
        })
        .collect();
    let mut fan = Fan {
        lattice,
        rays,
        maximal,
        cones: BTreeSet::new(),
        generic: zeta.is_generic(),
    };
    let cones: BTreeSet<Vec<usize>> = fan
        .maximal
        .iter()
        .flat_map(|m| cone_faces(&fan, m))
        .collect();
    fan.cones = cones;
    Ok(fan)
}

#[derive(Clone, Debug, Serialize)]
pub struct RayCheck {
    pub ray: Vec<String>,
    pub sum: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrepancyReport {
    pub crepant: bool,
    pub rays: Vec<RayCheck>,
}

/// Every primitive ray generator lies on the hyperplane `Σ yᵢ = 1`.
pub fn crepancy_check(fan: &Fan) -> CrepancyReport {
    let rays: Vec<RayCheck> = fan
        .rays
        .iter()
        .map(|r| {
            let sum: Rat = r.iter().sum();
            RayCheck {
                ray: rat_strings(r),
                ok: sum.is_one(),
                sum: rat_string(&sum),
            }
        })
        .collect();
    CrepancyReport {
        crepant: rays.iter().all(|r| r.ok),
        rays,
    }
}

/// `rank(S ∪ S₂)`: the dimension of the smallest face holding both images.
pub fn k_adjacency(q: &Quiver, s: &Configuration, s2: &Configuration) -> usize {
    rank(q, &s.union(s2))
}

/// The affine span of a face of `C_ζ`: a point reduced against the direction basis, and that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDescriptor {
    pub dim: usize,
    pub anchor: Vec<Rat>,
    pub directions: Vec<Vec<Rat>>,
}

impl FaceDescriptor {
    pub fn to_json(&self) -> FaceJson {
        FaceJson {
            dim: self.dim,
            anchor: rat_strings(&self.anchor),
            directions: self.directions.iter().map(|d| rat_strings(d)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceJson {
    pub dim: usize,
    pub anchor: Vec<String>,
    pub directions: Vec<Vec<String>>,
}

/// A ζ-flow with support exactly `s`, if one exists.
pub fn flow_with_support(q: &Quiver, s: &Configuration, zeta: &ZetaVector) -> Option<Flow> {
    let na = q.arrow_count();
    let t = na;
    let mut lp: LinearProgram<Rat> = LinearProgram::new(na + 1);
    for v in 0..q.vertex_count() {
        let mut terms: Vec<(usize, Rat)> = q.incoming(v).iter().map(|&a| (a, Rat::one())).collect();
        terms.extend(q.outgoing(v).map(|a| (a, -Rat::one())));
        lp.add_sparse(&terms, Relation::Eq, zeta.values()[v].clone());
    }
    for a in 0..na {
        if s.contains(a) {
            lp.add_sparse(
                &[(a, Rat::one()), (t, -Rat::one())],
                Relation::Ge,
                Rat::zero(),
            );
        } else {
            lp.add_sparse(&[(a, Rat::one())], Relation::Eq, Rat::zero());
        }
    }
    lp.add_sparse(&[(t, Rat::one())], Relation::Le, Rat::one());
    let mut objective = vec![Rat::zero(); na + 1];
    objective[t] = Rat::one();
    let x = lp.maximize(&objective).point()?;
    (s.is_empty() || x[t].is_positive())
        .then(|| Flow::new(q, x[..na].to_vec()).expect("arrow count"))
}

/// The face of `C_ζ` indexed by an admissible configuration: `π f + π Z₀(S̄)`.
pub fn face_of(q: &Quiver, s: &Configuration, zeta: &ZetaVector) -> Result<FaceDescriptor> {
    let zeta = zeta.clone().for_quiver(q)?;
    let f = flow_with_support(q, s, &zeta).ok_or(Error::NotAdmissible)?;
    let n = q.type_count();
    let closure = cycle_closure(q, s);
    let directions = canonical_span(&projected_cycle_span(q, &closure), n);
    let mut anchor = type_of(q, &f);
    for d in &directions {
        let p = d
            .iter()
            .position(|x| !x.is_zero())
            .expect("echelon rows are non-zero");
        let k = anchor[p].clone() / d[p].clone();
        for (a, x) in anchor.iter_mut().zip(d) {
            *a -= &k * x;
        }
    }
    Ok(FaceDescriptor {
        dim: directions.len(),
        anchor,
        directions,
    })
}
