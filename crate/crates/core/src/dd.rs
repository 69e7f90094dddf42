//! Double description method: polyhedral cones between H- and V-representation.

use crate::linalg::dot;
use crate::scalar::Scalar;

/// `cone(rays) + span(lineality)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeGenerators<F> {
    pub rays: Vec<Vec<F>>,
    pub lineality: Vec<Vec<F>>,
}

impl<F: Scalar> ConeGenerators<F> {
    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        if i / 64 >= self.0.len() {
            self.0.resize(i / 64 + 1, 0);
        }
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn contains(&self, sub: &Bits) -> bool {
        sub.0.iter().enumerate().all(|(i, s)| {
            let w = self.0.get(i).copied().unwrap_or(0);
            s & !w == 0
        })
    }
}

fn combine<F: Scalar>(a: &F, x: &[F], b: &F, y: &[F]) -> Vec<F> {
    x.iter()
        .zip(y)
        .map(|(u, v)| a.clone() * u.clone() + b.clone() * v.clone())
        .collect()
}

/// Generators of `{x ∈ R^dim : A x ≥ 0, E x = 0}`.
pub fn cone_from_constraints<F: Scalar>(
    dim: usize,
    inequalities: &[Vec<F>],
    equalities: &[Vec<F>],
) -> ConeGenerators<F> {
    let mut lineality: Vec<Vec<F>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { F::one() } else { F::zero() })
                .collect()
        })
        .collect();
    let mut rays: Vec<(Vec<F>, Bits)> = Vec::new();
    let mut processed: Vec<usize> = Vec::new();
    let nineq = inequalities.len();
    let rows = inequalities
        .iter()
        .enumerate()
        .map(|(k, a)| (a, Some(k)))
        .chain(equalities.iter().map(|a| (a, None)));
    // Equalities first keeps intermediate cones small.
    let mut ordered: Vec<(&Vec<F>, Option<usize>)> = rows.collect();
    ordered.sort_by_key(|(_, k)| k.is_some());
    for (a, tag) in ordered {
        let vals: Vec<F> = lineality.iter().map(|l| dot(a, l)).collect();
        if let Some(p) = vals.iter().position(|v| !v.is_zero_s()) {
            let mut l0 = lineality.remove(p);
            let mut a0 = vals[p].clone();
            if a0.is_neg() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                a0 = -a0;
            }
            let rest: Vec<F> = vals
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != p)
                .map(|(_, v)| v.clone())
                .collect();
            for (l, v) in lineality.iter_mut().zip(rest) {
                if !v.is_zero_s() {
                    *l = combine(&F::one(), l, &(-v / a0.clone()), &l0);
                }
            }
            for (r, _) in rays.iter_mut() {
                let v = dot(a, r);
                if !v.is_zero_s() {
                    *r = combine(&F::one(), r, &(-v / a0.clone()), &l0);
                    F::normalize_ray(r);
                }
            }
            if let Some(k) = tag {
                for (_, z) in rays.iter_mut() {
                    z.set(k);
                }
                F::normalize_ray(&mut l0);
                let mut z = Bits::new(nineq);
                for &j in &processed {
                    z.set(j);
                }
                rays.push((l0, z));
                processed.push(k);
            }
            continue;
        }
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut zero = Vec::new();
        for (i, (r, _)) in rays.iter().enumerate() {
            let v = dot(a, r);
            match v.sign() {
                std::cmp::Ordering::Greater => plus.push((i, v)),
                std::cmp::Ordering::Less => minus.push((i, v)),
                std::cmp::Ordering::Equal => zero.push(i),
            }
        }
        let mut next: Vec<(Vec<F>, Bits)> = Vec::new();
        for (pi, pv) in &plus {
            for (mi, mv) in &minus {
                let common = rays[*pi].1.and(&rays[*mi].1);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(j, (_, zj))| j == *pi || j == *mi || !zj.contains(&common));
                if !adjacent {
                    continue;
                }
                let mut nr = combine(pv, &rays[*mi].0, &(-mv.clone()), &rays[*pi].0);
                F::normalize_ray(&mut nr);
                let mut z = common;
                if let Some(k) = tag {
                    z.set(k);
                }
                next.push((nr, z));
            }
        }
        let mut kept: Vec<(Vec<F>, Bits)> = Vec::new();
        for i in zero {
            let (r, mut z) = rays[i].clone();
            if let Some(k) = tag {
                z.set(k);
            }
            kept.push((r, z));
        }
        if tag.is_some() {
            for (i, _) in &plus {
                kept.push(rays[*i].clone());
            }
        }
        kept.extend(next);
        rays = kept;
        if let Some(k) = tag {
            processed.push(k);
        }
    }
    for l in lineality.iter_mut() {
        F::normalize_ray(l);
    }
    ConeGenerators {
        rays: rays.into_iter().map(|(r, _)| r).collect(),
        lineality,
    }
}

/// `K^∨ = {y : ⟨x, y⟩ ≥ 0 for all x ∈ K}` in generator form.
pub fn dual_cone<F: Scalar>(dim: usize, k: &ConeGenerators<F>) -> ConeGenerators<F> {
    cone_from_constraints(dim, &k.rays, &k.lineality)
}

/// Extreme rays and lineality of the cone generated by `gens`.
pub fn minimal_generators<F: Scalar>(dim: usize, gens: &ConeGenerators<F>) -> ConeGenerators<F> {
    let d = dual_cone(dim, gens);
    dual_cone(dim, &d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;
    use num_rational::BigRational;

    fn v(x: &[i64]) -> Vec<BigRational> {
        x.iter().map(|&a| rat_int(a)).collect()
    }

    fn sorted(mut rays: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
        rays.sort();
        rays
    }

    #[test]
    fn orthant() {
        let c = cone_from_constraints(3, &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], &[]);
        assert!(c.is_pointed());
        assert_eq!(
            sorted(c.rays),
            vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]
        );
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // Cone over the square |x| <= z, |y| <= z.
        let ineq = vec![v(&[1, 0, 1]), v(&[-1, 0, 1]), v(&[0, 1, 1]), v(&[0, -1, 1])];
        let c = cone_from_constraints(3, &ineq, &[]);
        assert_eq!(
            sorted(c.rays),
            vec![
                v(&[-1, -1, 1]),
                v(&[-1, 1, 1]),
                v(&[1, -1, 1]),
                v(&[1, 1, 1])
            ]
        );
    }

    #[test]
    fn half_space_has_lineality() {
        let c = cone_from_constraints(3, &[v(&[1, 0, 0])], &[]);
        assert_eq!(c.rays, vec![v(&[1, 0, 0])]);
        assert_eq!(c.lineality.len(), 2);
    }

    #[test]
    fn equality_cuts_dimension() {
        let c = cone_from_constraints(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])], &[v(&[1, 1, -1])]);
        assert!(c.is_pointed());
        assert_eq!(sorted(c.rays), vec![v(&[0, 1, 1]), v(&[1, 0, 1])]);
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let g = ConeGenerators {
            rays: vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[2, 1])],
            lineality: vec![],
        };
        let m = minimal_generators(2, &g);
        assert_eq!(sorted(m.rays), vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn opposite_generators_become_lineality() {
        let g = ConeGenerators {
            rays: vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])],
            lineality: vec![],
        };
        let m = minimal_generators(2, &g);
        assert_eq!(m.lineality.len(), 1);
        assert_eq!(m.rays, vec![v(&[0, 1])]);
    }
}
