//! Oracle-versus-fast-path comparisons for one ζ or a grid of integral ζ.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::closure::{cycle_closure, Configuration};
use crate::error::Result;
use crate::flow::{quiver_ref, type_of, ZetaVector};
use crate::oracle::{
    closure_bruteforce, default_max_len, project_and_hull, vertices_basic, vertices_dd, HPolytope,
    VertexSet,
};
use crate::quiver::Quiver;
use crate::scalar::rat_string;
use crate::toric::{build_fan, extreme_points, tangent_cone, vertex_points};
use crate::trees::{admissible_cone, enumerate_spanning_trees, is_ic_tree, spanning_tree_count};
use crate::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub name: String,
    pub ok: bool,
    pub skipped: bool,
    pub detail: String,
}

impl Comparison {
    fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Comparison {
            name: name.into(),
            ok,
            skipped: false,
            detail: detail.into(),
        }
    }

    fn skipped(name: &str, detail: impl Into<String>) -> Self {
        Comparison {
            name: name.into(),
            ok: true,
            skipped: true,
            detail: detail.into(),
        }
    }
}

/// Every spanning tree with its admissible forms as small integers and its IC flag.
pub struct TreeTable {
    pub trees: Vec<Configuration>,
    forms: Vec<Vec<(usize, Vec<i64>)>>,
    pub ic: Vec<bool>,
}

/// Spanning-tree counts above this skip the tree-side comparisons.
pub const TREE_TABLE_LIMIT: u64 = 250_000;

impl TreeTable {
    pub fn new(q: &Quiver) -> Result<Self> {
        let trees = enumerate_spanning_trees(q)?;
        let forms = trees
            .par_iter()
            .map(|t| {
                Ok(admissible_cone(q, t)?
                    .forms
                    .into_iter()
                    .map(|f| (f.arrow, f.coeffs))
                    .collect())
            })
            .collect::<Result<_>>()?;
        let ic = trees
            .par_iter()
            .map(|t| is_ic_tree(q, t))
            .collect::<Result<_>>()?;
        Ok(TreeTable { trees, forms, ic })
    }

    /// `(tree index, flow)` for every tree whose flow at the integral `zeta` is non-negative.
    pub fn admissible_flows(&self, narrows: usize, zeta: &[i64]) -> Vec<(usize, Vec<i64>)> {
        self.forms
            .iter()
            .enumerate()
            .filter_map(|(i, forms)| {
                let mut f = vec![0i64; narrows];
                for (a, c) in forms {
                    let x: i64 = c.iter().zip(zeta).map(|(c, z)| c * z).sum();
                    if x < 0 {
                        return None;
                    }
                    f[*a] = x;
                }
                Some((i, f))
            })
            .collect()
    }
}

fn rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_integer(x.into())).collect()
}

fn type_matrix_rows(q: &Quiver) -> Vec<Vec<Rat>> {
    (0..q.type_count())
        .map(|i| {
            q.arrows()
                .iter()
                .map(|a| if a.kind == i { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

fn describe(v: &[Rat]) -> String {
    format!(
        "({})",
        v.iter().map(rat_string).collect::<Vec<_>>().join(",")
    )
}

fn set_diff(
    name: &str,
    left: &BTreeSet<Vec<Rat>>,
    right: &BTreeSet<Vec<Rat>>,
    what: (&str, &str),
) -> Comparison {
    if left == right {
        return Comparison::new(name, true, format!("{} points agree", left.len()));
    }
    let only_left: Vec<String> = left
        .difference(right)
        .take(3)
        .map(|v| describe(v))
        .collect();
    let only_right: Vec<String> = right
        .difference(left)
        .take(3)
        .map(|v| describe(v))
        .collect();
    Comparison::new(
        name,
        false,
        format!(
            "{} {} vs {} {}; only {}: {:?}; only {}: {:?}",
            left.len(),
            what.0,
            right.len(),
            what.1,
            what.0,
            only_left,
            what.1,
            only_right
        ),
    )
}

/// Vertices of `F_ζ` by double description against flows of admissible spanning trees.
pub fn classical_comparison(
    q: &Quiver,
    table: &TreeTable,
    zeta: &[i64],
    dd: &VertexSet,
) -> Comparison {
    let trees: BTreeSet<Vec<Rat>> = table
        .admissible_flows(q.arrow_count(), zeta)
        .into_iter()
        .map(|(_, f)| rats(&f))
        .collect();
    let vertices: BTreeSet<Vec<Rat>> = dd.vertices.iter().cloned().collect();
    set_diff(
        "vertices-of-F-vs-tree-flows",
        &vertices,
        &trees,
        ("double-description", "tree"),
    )
}

/// Vertices of `π F_ζ` by projection and hull against images of admissible IC-trees.
pub fn generalized_comparison(
    q: &Quiver,
    table: &TreeTable,
    zeta: &[i64],
    dd: &VertexSet,
) -> (Comparison, BTreeSet<Vec<Rat>>) {
    let hull = project_and_hull(&dd.vertices, &dd.rays, &type_matrix_rows(q));
    let hull_vertices: BTreeSet<Vec<Rat>> = hull.vertices.into_iter().collect();
    let images: BTreeSet<Vec<Rat>> = table
        .admissible_flows(q.arrow_count(), zeta)
        .into_iter()
        .filter(|(i, _)| table.ic[*i])
        .map(|(_, f)| {
            let mut t = vec![0i64; q.type_count()];
            for a in q.arrows() {
                t[a.kind] += f[a.id];
            }
            rats(&t)
        })
        .collect();
    (
        set_diff(
            "vertices-of-pi-F-vs-ic-tree-images",
            &hull_vertices,
            &images,
            ("hull", "ic-tree"),
        ),
        hull_vertices,
    )
}

/// Tight-set combinations above this skip the basic-solution enumeration.
pub const BASIC_SOLUTION_LIMIT: u64 = 20_000;

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

pub fn basic_solution_comparison(q: &Quiver, p: &HPolytope, dd: &VertexSet) -> Comparison {
    let name = "double-description-vs-basic-solutions";
    let m = p.inequalities().len() as u64;
    let k = (q.arrow_count() + 1 - q.vertex_count()) as u64;
    let combos = binomial(m, k);
    if combos > BASIC_SOLUTION_LIMIT {
        return Comparison::skipped(
            name,
            format!("{combos} tight sets exceed the limit {BASIC_SOLUTION_LIMIT}"),
        );
    }
    let basic: BTreeSet<Vec<Rat>> = vertices_basic(p).into_iter().collect();
    let vertices: BTreeSet<Vec<Rat>> = dd.vertices.iter().cloned().collect();
    set_diff(name, &vertices, &basic, ("double-description", "basic"))
}

/// LP closure against the bounded walk search, retrying once at twice the bound.
pub fn closure_comparison(q: &Quiver, sets: &[Configuration]) -> Comparison {
    let ml = default_max_len(q);
    for s in sets {
        let lp = cycle_closure(q, s);
        if closure_bruteforce(q, s, ml) != lp && closure_bruteforce(q, s, 2 * ml) != lp {
            return Comparison::new(
                "closure-lp-vs-walk-search",
                false,
                format!(
                    "S = {:?} disagrees at maxLen {} and {}",
                    s.arrows(),
                    ml,
                    2 * ml
                ),
            );
        }
    }
    Comparison::new(
        "closure-lp-vs-walk-search",
        true,
        format!("{} configurations, maxLen {ml}", sets.len()),
    )
}

/// The smallest positive multiple of `zeta` with integer entries.
pub fn integral_multiple(zeta: &ZetaVector) -> Vec<i64> {
    let l = zeta
        .values()
        .iter()
        .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    zeta.values()
        .iter()
        .map(|x| {
            let v = (x * Rat::from_integer(l.clone())).to_integer();
            i64::try_from(v).expect("zeta entries fit in i64")
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub action: String,
    pub zeta: Vec<String>,
    pub comparisons: Vec<Comparison>,
    pub passed: bool,
}

/// Every oracle comparison available at one ζ. Comparisons are run at the smallest integral
/// multiple of ζ, which scales `F_ζ` and `C_ζ` without changing their combinatorics.
pub fn check_zeta(q: &Quiver, zeta: &ZetaVector) -> Result<CheckReport> {
    let zeta = zeta.clone().for_quiver(q)?;
    let zi = integral_multiple(&zeta);
    let z = ZetaVector::from_ints(&zi)?;
    let mut comparisons = Vec::new();

    let p = HPolytope::zeta_flows(q, &z)?;
    let dd = vertices_dd(&p);
    comparisons.push(basic_solution_comparison(q, &p, &dd));

    let lp_points: BTreeSet<Vec<Rat>> = vertex_points(q, &z)?.into_iter().collect();
    let count = spanning_tree_count(q);
    let hull = if count <= Int::from(TREE_TABLE_LIMIT) {
        let table = TreeTable::new(q)?;
        comparisons.push(classical_comparison(q, &table, &zi, &dd));
        let (c, hull) = generalized_comparison(q, &table, &zi, &dd);
        comparisons.push(c);
        hull
    } else {
        let skip = format!("{count} spanning trees exceed the limit {TREE_TABLE_LIMIT}");
        comparisons.push(Comparison::skipped(
            "vertices-of-F-vs-tree-flows",
            skip.clone(),
        ));
        comparisons.push(Comparison::skipped(
            "vertices-of-pi-F-vs-ic-tree-images",
            skip,
        ));
        project_and_hull(&dd.vertices, &dd.rays, &type_matrix_rows(q))
            .vertices
            .into_iter()
            .collect()
    };
    comparisons.push(set_diff(
        "hull-vs-lp-extreme-points",
        &hull,
        &lp_points,
        ("hull", "lp"),
    ));

    let points = extreme_points(q, &z)?;
    let trees_ok = points.iter().all(|p| match &p.tree {
        Some(t) => {
            let f = crate::trees::tree_flow(q, t, &z);
            f.is_ok_and(|f| type_of(q, &f) == p.point) && tangent_cone(q, t) == p.cone
        }
        None => false,
    });
    comparisons.push(Comparison::new(
        "representative-trees",
        trees_ok,
        "each vertex has an IC-tree with that image and the same tangent cone",
    ));

    let mut sets: Vec<Configuration> = points.iter().map(|p| p.support.clone()).collect();
    for i in 0..points.len() {
        for j in i + 1..points.len().min(i + 3) {
            sets.push(points[i].support.union(&points[j].support));
        }
    }
    comparisons.push(closure_comparison(q, &sets));

    let fan = build_fan(q, &z)?;
    comparisons.push(Comparison::new(
        "fan-cones-meet-in-faces",
        fan.check_intersections(),
        format!(
            "{} maximal cones, {} rays",
            fan.maximal.len(),
            fan.rays.len()
        ),
    ));

    let passed = comparisons.iter().all(|c| c.ok);
    Ok(CheckReport {
        action: quiver_ref(q),
        zeta: zeta.to_strings(),
        comparisons,
        passed,
    })
}

/// All integral ζ with entries in `lo..=hi` summing to zero, in lexicographic order.
pub fn zeta_grid(nv: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![lo; nv.saturating_sub(1)];
    if nv == 0 {
        return out;
    }
    loop {
        let last = -cur.iter().sum::<i64>();
        if (lo..=hi).contains(&last) {
            let mut z = cur.clone();
            z.push(last);
            out.push(z);
        }
        let Some(i) = (0..cur.len()).rev().find(|&i| cur[i] < hi) else {
            return out;
        };
        cur[i] += 1;
        for x in &mut cur[i + 1..] {
            *x = lo;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepFailure {
    pub zeta: Vec<i64>,
    pub comparison: Comparison,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub action: String,
    pub range: (i64, i64),
    pub grid_points: usize,
    pub classical_checked: usize,
    pub generalized_checked: usize,
    pub basic_checked: usize,
    pub failures: Vec<SweepFailure>,
    pub passed: bool,
}

/// Both vertex characterisations at every grid point, with the basic-solution oracle on every
/// `basic_stride`-th point.
pub fn sweep(q: &Quiver, lo: i64, hi: i64, basic_stride: usize) -> Result<SweepReport> {
    let table = TreeTable::new(q)?;
    let grid = zeta_grid(q.vertex_count(), lo, hi);
    let results: Vec<(Vec<Comparison>, bool)> = grid
        .par_iter()
        .enumerate()
        .map(|(k, zi)| {
            let z = ZetaVector::from_ints(zi)?;
            let p = HPolytope::zeta_flows(q, &z)?;
            let dd = vertices_dd(&p);
            let mut cs = vec![
                classical_comparison(q, &table, zi, &dd),
                generalized_comparison(q, &table, zi, &dd).0,
            ];
            let basic = basic_stride > 0 && k % basic_stride == 0;
            if basic {
                cs.push(basic_solution_comparison(q, &p, &dd));
            }
            Ok((cs, basic))
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut basic_checked = 0;
    for (zi, (cs, basic)) in grid.iter().zip(results) {
        basic_checked += usize::from(basic && !cs.last().is_some_and(|c| c.skipped));
        failures.extend(
            cs.into_iter()
                .filter(|c| !c.ok)
                .map(|comparison| SweepFailure {
                    zeta: zi.clone(),
                    comparison,
                }),
        );
    }
    Ok(SweepReport {
        action: quiver_ref(q),
        range: (lo, hi),
        grid_points: grid.len(),
        classical_checked: grid.len(),
        generalized_checked: grid.len(),
        basic_checked,
        passed: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(zeta_grid(2, -3, 3).len(), 7);
        assert_eq!(zeta_grid(3, -3, 3).len(), 37);
        assert_eq!(zeta_grid(5, -3, 3).len(), 1451);
        assert!(zeta_grid(4, -1, 1)
            .iter()
            .all(|z| z.iter().sum::<i64>() == 0));
    }

    #[test]
    fn two_vertex_sweep_passes() {
        let q = Quiver::from_weights(2, &[1, 1]).unwrap();
        let r = sweep(&q, -3, 3, 1).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(r.basic_checked, 7);
    }

    #[test]
    fn rational_zeta_is_checked_at_an_integral_multiple() {
        let z = ZetaVector::parse("1/2,-1/3,-1/6").unwrap();
        assert_eq!(integral_multiple(&z), vec![3, -2, -1]);
    }
}
