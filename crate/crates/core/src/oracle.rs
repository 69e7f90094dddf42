//! Slow, independent reference computations used to validate the fast paths.

use std::collections::{BTreeSet, VecDeque};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::closure::Configuration;
use crate::dd::{cone_from_constraints, dual_cone, ConeGenerators};
use crate::error::{Error, Result};
use crate::flow::ZetaVector;
use crate::linalg::{rank as mat_rank, rref};
use crate::quiver::{enumerate_cycles, Quiver};
use crate::scalar::{primitive, rat_string};
use crate::Rat;

/// Default walk-length bound for the closure oracle.
pub fn default_max_len(q: &Quiver) -> usize {
    q.type_count() * q.vertex_count()
}

/// The cycle rule over closed walks of total length at most `max_len`, to a fixed point.
///
/// The positive and negative parts of a walk are read from its basic flow, so a connector walked
/// out and back cancels. A missing arrow b is then forced exactly when b, followed by a walk with
/// backward steps only along present arrows, closes up with type zero; whenever the running type
/// lies in Π the walk is closed and may restart at any vertex. This is searched once per round by
/// a breadth-first search backwards from the type-zero states.
pub fn closure_bruteforce(q: &Quiver, s: &Configuration, max_len: usize) -> Configuration {
    let na = q.arrow_count();
    let mut closed = s.mask(na);
    loop {
        let reach = ClosingWalks::new(q, &closed, max_len.saturating_sub(1));
        let fresh: Vec<usize> = (0..na)
            .filter(|&b| !closed[b])
            .filter(|&b| {
                let a = q.arrow(b);
                let mut t = vec![0i32; q.type_count()];
                t[a.kind] = 1;
                reach.contains(a.tail, &t)
            })
            .collect();
        if fresh.is_empty() {
            return Configuration::from_mask(&closed);
        }
        for b in fresh {
            closed[b] = true;
        }
    }
}

/// States `(anchor, running type)` from which a type-zero closure is reachable.
struct ClosingWalks {
    nverts: usize,
    depth: i32,
    side: usize,
    seen: Vec<bool>,
}

impl ClosingWalks {
    fn new(q: &Quiver, closed: &[bool], depth: usize) -> Self {
        let n = q.type_count();
        let nverts = q.vertex_count();
        let side = 2 * depth + 1;
        let cells = side.pow(n as u32);
        let strides: Vec<usize> = (0..n).map(|i| side.pow((n - 1 - i) as u32)).collect();
        // Predecessor moves per vertex: (type, +1 for a forward step undone / −1 for a backward one, vertex).
        let moves: Vec<Vec<(usize, bool, usize)>> = (0..nverts)
            .map(|x| {
                let mut m: Vec<(usize, bool, usize)> =
                    (0..n).map(|i| (i, false, q.add(x, q.shift(i)))).collect();
                m.extend(
                    q.outgoing(x)
                        .filter(|&e| closed[e])
                        .map(|e| (q.arrow(e).kind, true, q.arrow(e).head)),
                );
                m
            })
            .collect();
        let mut seen = vec![false; cells * nverts];
        let origin: usize = strides.iter().map(|s| s * depth).sum();
        let mut queue: VecDeque<(usize, usize, usize, usize)> = VecDeque::new();
        for a in 0..nverts {
            seen[origin * nverts + a] = true;
            queue.push_back((a, origin, a, 0));
        }
        while let Some((anchor, cell, x, d)) = queue.pop_front() {
            if d == depth {
                continue;
            }
            for &(i, up, y) in &moves[x] {
                let coord = cell / strides[i] % side;
                let p = if up {
                    if coord + 1 == side {
                        continue;
                    }
                    cell + strides[i]
                } else {
                    if coord == 0 {
                        continue;
                    }
                    cell - strides[i]
                };
                if std::mem::replace(&mut seen[p * nverts + anchor], true) {
                    continue;
                }
                queue.push_back((anchor, p, y, d + 1));
                if y == anchor {
                    // A closed prefix: the same running type is available from every anchor.
                    for other in 0..nverts {
                        if !std::mem::replace(&mut seen[p * nverts + other], true) {
                            queue.push_back((other, p, other, d + 1));
                        }
                    }
                }
            }
        }
        ClosingWalks {
            nverts,
            depth: depth as i32,
            side,
            seen,
        }
    }

    fn contains(&self, anchor: usize, t: &[i32]) -> bool {
        let cell = t.iter().try_fold(0usize, |acc, &x| {
            (x.abs() <= self.depth).then(|| acc * self.side + (x + self.depth) as usize)
        });
        cell.is_some_and(|c| self.seen[c * self.nverts + anchor])
    }
}

/// Net positive and negative parts of every type-zero closed walk up to a length bound.
pub struct TypeZeroCycles {
    narrows: usize,
    parts: Vec<(Vec<usize>, Vec<usize>)>,
}

impl TypeZeroCycles {
    pub fn new(q: &Quiver, max_len: usize) -> Self {
        let parts = enumerate_cycles(q, max_len)
            .into_iter()
            .filter(|c| c.cycle_type(q).iter().all(|&x| x == 0))
            .map(|c| {
                let f = c.basic_flow(q);
                let plus = (0..f.len()).filter(|&a| f[a].is_positive()).collect();
                let minus = (0..f.len()).filter(|&a| f[a].is_negative()).collect();
                (plus, minus)
            })
            .collect();
        TypeZeroCycles {
            narrows: q.arrow_count(),
            parts,
        }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The cycle rule applied to the listed walks, to a fixed point.
    pub fn closure(&self, s: &Configuration) -> Configuration {
        let mut closed = s.mask(self.narrows);
        loop {
            let mut changed = false;
            for (plus, minus) in &self.parts {
                let has_plus = plus.iter().all(|&a| closed[a]);
                let has_minus = minus.iter().all(|&a| closed[a]);
                if has_plus != has_minus {
                    for &a in plus.iter().chain(minus) {
                        changed |= !closed[a];
                        closed[a] = true;
                    }
                }
            }
            if !changed {
                return Configuration::from_mask(&closed);
            }
        }
    }
}

/// The cycle rule applied to an explicit list of closed walks (small quivers only).
pub fn closure_by_cycle_list(q: &Quiver, s: &Configuration, max_len: usize) -> Configuration {
    TypeZeroCycles::new(q, max_len).closure(s)
}

/// `{x : a·x ≥ b for each inequality, a·x = b for each equation}` in `ℚ^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    inequalities: Vec<(Vec<Rat>, Rat)>,
    equations: Vec<(Vec<Rat>, Rat)>,
}

impl HPolytope {
    pub fn new(dim: usize) -> Self {
        HPolytope {
            dim,
            inequalities: Vec::new(),
            equations: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[(Vec<Rat>, Rat)] {
        &self.inequalities
    }

    pub fn equations(&self) -> &[(Vec<Rat>, Rat)] {
        &self.equations
    }

    pub fn add_ge(&mut self, a: Vec<Rat>, b: Rat) {
        assert_eq!(a.len(), self.dim, "inequality width mismatch");
        self.inequalities.push((a, b));
    }

    pub fn add_eq(&mut self, a: Vec<Rat>, b: Rat) {
        assert_eq!(a.len(), self.dim, "equation width mismatch");
        self.equations.push((a, b));
    }

    /// `F_ζ = {f ≥ 0 : ∂f = ζ}` over the arrows of `q`.
    pub fn zeta_flows(q: &Quiver, zeta: &ZetaVector) -> Result<Self> {
        let zeta = zeta.clone().for_quiver(q)?;
        let na = q.arrow_count();
        let mut p = HPolytope::new(na);
        for a in 0..na {
            p.add_ge(unit(na, a), Rat::zero());
        }
        for v in 0..q.vertex_count() {
            let mut row = vec![Rat::zero(); na];
            for &a in q.incoming(v) {
                row[a] += Rat::one();
            }
            for a in q.outgoing(v) {
                row[a] -= Rat::one();
            }
            p.add_eq(row, zeta.values()[v].clone());
        }
        Ok(p)
    }

    /// The standard simplex `{x ≥ 0 : Σ xᵢ ≤ 1}`.
    pub fn standard_simplex(dim: usize) -> Self {
        let mut p = HPolytope::new(dim);
        for i in 0..dim {
            p.add_ge(unit(dim, i), Rat::zero());
        }
        p.add_ge(vec![-Rat::one(); dim], -Rat::one());
        p
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.inequalities.iter().all(|(a, b)| dot(a, x) >= *b)
            && self.equations.iter().all(|(a, b)| dot(a, x) == *b)
    }
}

fn unit(dim: usize, i: usize) -> Vec<Rat> {
    let mut e = vec![Rat::zero(); dim];
    e[i] = Rat::one();
    e
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive_rat(v: &[Rat]) -> Vec<Rat> {
    primitive(v).into_iter().map(Rat::from_integer).collect()
}

/// Vertices, extreme recession rays (primitive) and lineality of a polyhedron, each sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
    pub lines: Vec<Vec<Rat>>,
}

/// Double description of the homogenisation `{(t, x) : t ≥ 0, a·x ≥ b t, a·x = b t}`.
pub fn vertices_dd(p: &HPolytope) -> VertexSet {
    let d = p.dim + 1;
    let lift = |(a, b): &(Vec<Rat>, Rat)| -> Vec<Rat> {
        std::iter::once(-b.clone())
            .chain(a.iter().cloned())
            .collect()
    };
    let mut ineqs: Vec<Vec<Rat>> = p.inequalities.iter().map(lift).collect();
    ineqs.push(unit(d, 0));
    let eqs: Vec<Vec<Rat>> = p.equations.iter().map(lift).collect();
    let cone = cone_from_constraints(d, &ineqs, &eqs);
    let mut vertices = BTreeSet::new();
    let mut rays = BTreeSet::new();
    for r in cone.rays {
        if r[0].is_zero() {
            rays.insert(primitive_rat(&r[1..]));
        } else {
            vertices.insert(r[1..].iter().map(|x| x / &r[0]).collect::<Vec<Rat>>());
        }
    }
    let (lin, _) = rref(
        &cone
            .lineality
            .iter()
            .map(|l| l[1..].to_vec())
            .collect::<Vec<_>>(),
        p.dim,
    );
    VertexSet {
        vertices: vertices.into_iter().collect(),
        rays: rays.into_iter().collect(),
        lines: lin.iter().map(|l| primitive_rat(l)).collect(),
    }
}

/// Basic feasible solutions: every choice of tight inequalities that, with the equations, pins a
/// unique point which satisfies the rest. Sorted.
pub fn vertices_basic(p: &HPolytope) -> Vec<Vec<Rat>> {
    let eq_rows: Vec<Vec<Rat>> = p.equations.iter().map(|(a, _)| a.clone()).collect();
    let k = p.dim - mat_rank(&eq_rows, p.dim);
    let mut out = BTreeSet::new();
    for tight in (0..p.inequalities.len()).combinations(k) {
        let aug: Vec<Vec<Rat>> = p
            .equations
            .iter()
            .chain(tight.iter().map(|&i| &p.inequalities[i]))
            .map(|(a, b)| a.iter().chain(std::iter::once(b)).cloned().collect())
            .collect();
        let (m, pivots) = rref(&aug, p.dim + 1);
        if pivots.len() != p.dim || pivots.last() == Some(&p.dim) {
            continue;
        }
        let x: Vec<Rat> = m.iter().map(|row| row[p.dim].clone()).collect();
        if p.contains(&x) {
            out.insert(x);
        }
    }
    out.into_iter().collect()
}

/// Vertices and recession data by double description, with the vertex set cross-checked against
/// basic-feasible-solution enumeration.
pub fn vertices_bruteforce(p: &HPolytope) -> Result<VertexSet> {
    let dd = vertices_dd(p);
    if !dd.lines.is_empty() {
        return Ok(dd);
    }
    let basic = vertices_basic(p);
    if basic != dd.vertices {
        return Err(Error::OracleMismatch(format!(
            "double description found {} vertices, basic solutions {}",
            dd.vertices.len(),
            basic.len()
        )));
    }
    Ok(dd)
}

/// A facet `normal·x ≥ offset`, with the vertices and rays lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
    pub vertices: Vec<usize>,
    pub rays: Vec<usize>,
}

/// A non-empty face: vertex and ray indices it contains.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub rays: Vec<usize>,
}

/// `conv(vertices) + cone(rays)` by both descriptions, with the face lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull {
    pub dim: usize,
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
    pub lines: Vec<Vec<Rat>>,
    /// Equations `a·x = b` of the affine hull, in reduced echelon form.
    pub equations: Vec<(Vec<Rat>, Rat)>,
    pub facets: Vec<Facet>,
    /// All non-empty faces, the polyhedron itself included, sorted by dimension.
    pub faces: Vec<Face>,
}

impl Hull {
    /// Faces of dimension one through the given vertex.
    pub fn edges_at(&self, vertex: usize) -> Vec<&Face> {
        self.faces
            .iter()
            .filter(|f| f.dim == 1 && f.vertices.contains(&vertex))
            .collect()
    }

    pub fn vertex_index(&self, x: &[Rat]) -> Option<usize> {
        self.vertices.iter().position(|v| v.as_slice() == x)
    }

    pub fn to_json(&self) -> HullJson {
        let strings = |v: &Vec<Rat>| v.iter().map(rat_string).collect::<Vec<_>>();
        HullJson {
            dim: self.dim,
            vertices: self.vertices.iter().map(strings).collect(),
            rays: self.rays.iter().map(strings).collect(),
            lines: self.lines.iter().map(strings).collect(),
            equations: self
                .equations
                .iter()
                .map(|(a, b)| HalfspaceJson {
                    normal: strings(a),
                    offset: rat_string(b),
                })
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetJson {
                    normal: strings(&f.normal),
                    offset: rat_string(&f.offset),
                    vertices: f.vertices.clone(),
                    rays: f.rays.clone(),
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceJson {
                    dim: f.dim,
                    vertices: f.vertices.clone(),
                    rays: f.rays.clone(),
                })
                .collect(),
        }
    }

    /// `self ∩ {Σ xᵢ ≤ bound}` as a hull in its own right.
    pub fn truncated(&self, bound: &Rat) -> Hull {
        let mut p = HPolytope::new(self.dim);
        for f in &self.facets {
            p.add_ge(f.normal.clone(), f.offset.clone());
        }
        for (a, b) in &self.equations {
            p.add_eq(a.clone(), b.clone());
        }
        p.add_ge(vec![-Rat::one(); self.dim], -bound.clone());
        let v = vertices_dd(&p);
        let identity: Vec<Vec<Rat>> = (0..self.dim).map(|i| unit(self.dim, i)).collect();
        project_and_hull(&v.vertices, &v.rays, &identity)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HalfspaceJson {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetJson {
    pub normal: Vec<String>,
    pub offset: String,
    pub vertices: Vec<usize>,
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceJson {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HullJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
    pub lines: Vec<Vec<String>>,
    pub equations: Vec<HalfspaceJson>,
    pub facets: Vec<FacetJson>,
    pub faces: Vec<FaceJson>,
}

/// Reduces `c` against echelon rows so that it is canonical modulo their span.
fn reduce_mod(c: &[Rat], rows: &[Vec<Rat>], pivots: &[usize]) -> Vec<Rat> {
    let mut c = c.to_vec();
    for (row, &p) in rows.iter().zip(pivots) {
        if !c[p].is_zero() {
            let k = c[p].clone();
            for (x, y) in c.iter_mut().zip(row) {
                *x -= &k * y;
            }
        }
    }
    c
}

/// Image of `conv(points) + cone(rays)` under the linear map with matrix `proj` (one row per
/// output coordinate), described by vertices, rays, facets and faces.
pub fn project_and_hull(points: &[Vec<Rat>], rays: &[Vec<Rat>], proj: &[Vec<Rat>]) -> Hull {
    let n = proj.len();
    let apply = |x: &Vec<Rat>| -> Vec<Rat> { proj.iter().map(|row| dot(row, x)).collect() };
    let lifted: BTreeSet<Vec<Rat>> = points
        .iter()
        .map(|p| std::iter::once(Rat::one()).chain(apply(p)).collect())
        .chain(rays.iter().map(|r| {
            std::iter::once(Rat::zero())
                .chain(primitive_rat(&apply(r)))
                .collect()
        }))
        .filter(|v: &Vec<Rat>| v.iter().any(|x| !x.is_zero()))
        .collect();
    let lifted: Vec<Vec<Rat>> = lifted.into_iter().collect();
    let gens = ConeGenerators {
        rays: lifted,
        lineality: Vec::new(),
    };
    let dual = dual_cone(n + 1, &gens);
    let cone = dual_cone(n + 1, &dual);
    let mut vertices = BTreeSet::new();
    let mut out_rays = BTreeSet::new();
    for r in &cone.rays {
        if r[0].is_zero() {
            out_rays.insert(primitive_rat(&r[1..]));
        } else {
            vertices.insert(r[1..].iter().map(|x| x / &r[0]).collect::<Vec<Rat>>());
        }
    }
    let vertices: Vec<Vec<Rat>> = vertices.into_iter().collect();
    let out_rays: Vec<Vec<Rat>> = out_rays.into_iter().collect();
    let (lines, _) = rref(
        &cone
            .lineality
            .iter()
            .map(|l| l[1..].to_vec())
            .collect::<Vec<_>>(),
        n,
    );
    let lines: Vec<Vec<Rat>> = lines.iter().map(|l| primitive_rat(l)).collect();

    // Affine hull: (−b, a) in the dual lineality means a·x = b.
    let (eq_rows, eq_pivots) = rref(
        &dual
            .lineality
            .iter()
            .map(|l| l[1..].to_vec())
            .collect::<Vec<_>>(),
        n,
    );
    let equations: Vec<(Vec<Rat>, Rat)> = eq_rows
        .iter()
        .map(|a| {
            let b = vertices.first().map_or_else(Rat::zero, |v| dot(a, v));
            (a.clone(), b)
        })
        .collect();

    let mut facets: Vec<Facet> = dual
        .rays
        .iter()
        .filter_map(|y| {
            let normal = reduce_mod(&y[1..], &eq_rows, &eq_pivots);
            if normal.iter().all(Zero::is_zero) {
                return None;
            }
            let scale = {
                let p = primitive(&normal);
                let i = normal
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("non-zero normal");
                Rat::from_integer(p[i].clone()) / &normal[i]
            };
            let normal: Vec<Rat> = normal.iter().map(|x| x * &scale).collect();
            let offset = match vertices.first() {
                Some(_) => vertices
                    .iter()
                    .map(|v| dot(&normal, v))
                    .min()
                    .expect("vertices"),
                None => Rat::zero(),
            };
            let on_v = (0..vertices.len())
                .filter(|&i| dot(&normal, &vertices[i]) == offset)
                .collect();
            let on_r = (0..out_rays.len())
                .filter(|&i| dot(&normal, &out_rays[i]).is_zero())
                .collect();
            Some(Facet {
                normal,
                offset,
                vertices: on_v,
                rays: on_r,
            })
        })
        .collect();
    facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    facets.dedup_by(|a, b| a.normal == b.normal && a.offset == b.offset);

    let face_dim = |vs: &[usize], rs: &[usize]| -> usize {
        let Some(&v0) = vs.first() else { return 0 };
        let dirs: Vec<Vec<Rat>> = vs[1..]
            .iter()
            .map(|&i| {
                vertices[i]
                    .iter()
                    .zip(&vertices[v0])
                    .map(|(x, y)| x - y)
                    .collect()
            })
            .chain(rs.iter().map(|&i| out_rays[i].clone()))
            .chain(lines.iter().cloned())
            .collect();
        mat_rank(&dirs, n)
    };
    let whole = (
        (0..vertices.len()).collect::<Vec<usize>>(),
        (0..out_rays.len()).collect::<Vec<usize>>(),
    );
    let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
    let mut frontier = Vec::new();
    if !vertices.is_empty() {
        seen.insert(whole.clone());
        frontier.push(whole);
    }
    while let Some((vs, rs)) = frontier.pop() {
        for f in &facets {
            let v2: Vec<usize> = vs
                .iter()
                .copied()
                .filter(|i| f.vertices.contains(i))
                .collect();
            if v2.is_empty() {
                continue;
            }
            let r2: Vec<usize> = rs.iter().copied().filter(|i| f.rays.contains(i)).collect();
            let key = (v2, r2);
            if seen.insert(key.clone()) {
                frontier.push(key);
            }
        }
    }
    let mut faces: Vec<Face> = seen
        .into_iter()
        .map(|(vs, rs)| Face {
            dim: face_dim(&vs, &rs),
            vertices: vs,
            rays: rs,
        })
        .collect();
    faces.sort();
    Hull {
        dim: n,
        vertices,
        rays: out_rays,
        lines,
        equations,
        facets,
        faces,
    }
}
