//! Grouping stability parameters ζ by the combinatorial type of `C_ζ`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::closure::{cycle_closure, Configuration};
use crate::error::{Error, Result};
use crate::flow::ZetaVector;
use crate::lp::{LinearProgram, Relation};
use crate::quiver::Quiver;
use crate::toric::{classify_cone, extreme_points, ConeClass};
use crate::trees::{admissible_cone, enumerate_ic_trees};
use crate::{Int, Rat};

/// Vertex count and singularity summary of one `C_ζ`, keyed by the closures of its vertex supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub key: Vec<Configuration>,
    pub vertices: usize,
    /// Count of vertex cones per classification kind.
    pub kinds: BTreeMap<String, usize>,
    pub singular: Vec<ConeClass>,
}

impl Profile {
    pub fn is_smooth(&self) -> bool {
        self.singular.is_empty()
    }
}

pub fn profile(q: &Quiver, zeta: &ZetaVector) -> Result<Profile> {
    let points = extreme_points(q, zeta)?;
    let mut key: Vec<Configuration> = points
        .iter()
        .map(|p| cycle_closure(q, &p.support))
        .collect();
    key.sort();
    let mut kinds = BTreeMap::new();
    let mut singular = Vec::new();
    for p in &points {
        let class = classify_cone(&p.cone).class;
        *kinds.entry(class.kind().to_string()).or_insert(0) += 1;
        if class != ConeClass::Smooth {
            singular.push(class);
        }
    }
    Ok(Profile {
        key,
        vertices: points.len(),
        kinds,
        singular,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub profile: Profile,
    /// Indices into the sample list, ascending.
    pub samples: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberReport {
    /// In order of first sample.
    pub chambers: Vec<Chamber>,
    pub non_generic: Vec<usize>,
}

/// Groups samples by the set of closures of vertex supports of `C_ζ`.
pub fn chamber_scan(q: &Quiver, samples: &[ZetaVector]) -> Result<ChamberReport> {
    let samples: Vec<ZetaVector> = samples
        .iter()
        .map(|z| z.clone().for_quiver(q))
        .collect::<Result<_>>()?;
    let profiles: Vec<Profile> = samples
        .par_iter()
        .map(|z| profile(q, z))
        .collect::<Result<_>>()?;
    let mut chambers: Vec<Chamber> = Vec::new();
    let mut index: BTreeMap<Vec<Configuration>, usize> = BTreeMap::new();
    for (i, p) in profiles.into_iter().enumerate() {
        match index.get(&p.key) {
            Some(&c) => chambers[c].samples.push(i),
            None => {
                index.insert(p.key.clone(), chambers.len());
                chambers.push(Chamber {
                    profile: p,
                    samples: vec![i],
                });
            }
        }
    }
    let non_generic = (0..samples.len())
        .filter(|&i| !samples[i].is_generic())
        .collect();
    Ok(ChamberReport {
        chambers,
        non_generic,
    })
}

/// An open cell of the arrangement of admissible-cone walls in `Λ^{0,0}_ℝ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// Side of each wall, `+1` or `-1`.
    pub signs: Vec<i8>,
    /// An integral interior point.
    pub sample: ZetaVector,
}

/// Walls `Σ_{v∈A} ζ(v) = 0` carried by the admissible cones of IC-trees, one per subset `A`
/// containing vertex 0, as indicator vectors; sorted.
pub fn admissible_walls(q: &Quiver) -> Result<Vec<Vec<i64>>> {
    let catalog = enumerate_ic_trees(q, false)?;
    let mut walls = BTreeSet::new();
    for t in &catalog.trees {
        for f in admissible_cone(q, &t.tree)?.forms {
            let inside = f.coeffs[0] != 0;
            let w: Vec<i64> = f
                .coeffs
                .iter()
                .map(|&c| i64::from((c != 0) == inside))
                .collect();
            walls.insert(w);
        }
    }
    Ok(walls.into_iter().collect())
}

/// Largest-margin point with `signs[i]·wall_i(ζ) ≥ t`, `Σζ = 0`, `t ≤ 1`; `None` unless `t > 0`.
fn cell_point(walls: &[Vec<i64>], signs: &[i8], nv: usize) -> Option<Vec<Rat>> {
    let t = nv;
    let mut lp: LinearProgram<Rat> = LinearProgram::new(nv + 1);
    for j in 0..nv {
        lp.set_free(j);
    }
    lp.add_sparse(
        &(0..nv).map(|j| (j, Rat::one())).collect::<Vec<_>>(),
        Relation::Eq,
        Rat::zero(),
    );
    for (w, &s) in walls.iter().zip(signs) {
        let mut terms: Vec<(usize, Rat)> = (0..nv)
            .filter(|&j| w[j] != 0)
            .map(|j| (j, Rat::from_integer(Int::from(s))))
            .collect();
        terms.push((t, -Rat::one()));
        lp.add_sparse(&terms, Relation::Ge, Rat::zero());
    }
    lp.add_sparse(&[(t, Rat::one())], Relation::Le, Rat::one());
    let mut objective = vec![Rat::zero(); nv + 1];
    objective[t] = Rat::one();
    let x = lp.maximize(&objective).point()?;
    x[t].is_positive().then(|| x[..nv].to_vec())
}

fn integral(v: &[Rat]) -> Vec<Rat> {
    let l = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x * Rat::from_integer(l.clone())).collect()
}

/// Open cells of the wall arrangement, by adding one wall at a time and splitting cells with
/// linear programs. Limited to at most five vertices.
pub fn arrangement_cells(q: &Quiver) -> Result<Vec<Cell>> {
    let nv = q.vertex_count();
    if nv > 5 {
        return Err(Error::Invalid(format!(
            "arrangement cells are only enumerated for at most 5 vertices, got {nv}"
        )));
    }
    let walls = admissible_walls(q)?;
    let mut cells: Vec<Vec<i8>> = vec![Vec::new()];
    for k in 0..walls.len() {
        cells = cells
            .par_iter()
            .flat_map_iter(|c| {
                [1i8, -1].into_iter().filter_map(|s| {
                    let mut signs = c.clone();
                    signs.push(s);
                    cell_point(&walls[..=k], &signs, nv).map(|_| signs)
                })
            })
            .collect();
    }
    cells.sort();
    cells
        .into_iter()
        .map(|signs| {
            let x = cell_point(&walls, &signs, nv).expect("cell is non-empty");
            let x = if x.iter().all(Zero::is_zero) {
                x
            } else {
                integral(&x)
            };
            Ok(Cell {
                signs,
                sample: ZetaVector::new(x)?,
            })
        })
        .collect()
}
