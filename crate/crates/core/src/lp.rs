//! Two-phase primal simplex with Bland's rule over an exact (or tolerant) [`Scalar`] field.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<F> {
    pub coeffs: Vec<F>,
    pub relation: Relation,
    pub rhs: F,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult<F> {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<F>, value: F },
}

impl<F> LpResult<F> {
    pub fn point(self) -> Option<Vec<F>> {
        match self {
            LpResult::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

/// Variables are non-negative unless flagged free.
#[derive(Clone, Debug)]
pub struct LinearProgram<F> {
    nvars: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint<F>>,
}

impl<F: Scalar> LinearProgram<F> {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            free: vec![false; nvars],
            constraints: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<F>, relation: Relation, rhs: F) {
        assert_eq!(coeffs.len(), self.nvars, "constraint width mismatch");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn add_sparse(&mut self, terms: &[(usize, F)], relation: Relation, rhs: F) {
        let mut coeffs = vec![F::zero(); self.nvars];
        for (j, c) in terms {
            coeffs[*j] = coeffs[*j].clone() + c.clone();
        }
        self.add(coeffs, relation, rhs);
    }

    pub fn feasible_point(&self) -> Option<Vec<F>> {
        self.minimize(&vec![F::zero(); self.nvars]).point()
    }

    pub fn minimize(&self, objective: &[F]) -> LpResult<F> {
        Tableau::build(self).solve(self, objective)
    }

    pub fn maximize(&self, objective: &[F]) -> LpResult<F> {
        let neg: Vec<F> = objective.iter().map(|c| -c.clone()).collect();
        match self.minimize(&neg) {
            LpResult::Optimal { x, value } => LpResult::Optimal { x, value: -value },
            other => other,
        }
    }

    /// Lexicographic minimum: each objective is minimised over the optimal face of the previous ones.
    pub fn lexmin(&self, objectives: &[Vec<F>]) -> LpResult<F> {
        let mut lp = self.clone();
        let mut last = None;
        for c in objectives {
            match lp.minimize(c) {
                LpResult::Optimal { x, value } => {
                    lp.add(c.clone(), Relation::Eq, value.clone());
                    last = Some(LpResult::Optimal { x, value });
                }
                other => return other,
            }
        }
        last.unwrap_or_else(|| match lp.feasible_point() {
            Some(x) => LpResult::Optimal {
                x,
                value: F::zero(),
            },
            None => LpResult::Infeasible,
        })
    }
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    basis: Vec<usize>,
    ncols: usize,
    nstruct: usize,
    column_of: Vec<(usize, Option<usize>)>,
}

impl<F: Scalar> Tableau<F> {
    fn build(lp: &LinearProgram<F>) -> Self {
        let mut column_of = Vec::with_capacity(lp.nvars);
        let mut ncol = 0;
        for j in 0..lp.nvars {
            if lp.free[j] {
                column_of.push((ncol, Some(ncol + 1)));
                ncol += 2;
            } else {
                column_of.push((ncol, None));
                ncol += 1;
            }
        }
        let nslack = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let m = lp.constraints.len();
        let nstruct = ncol + nslack;
        let ncols = nstruct + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = ncol;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![F::zero(); ncols + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                if a.is_zero_s() {
                    continue;
                }
                let (p, n) = column_of[j];
                row[p] = a.clone();
                if let Some(n) = n {
                    row[n] = -a.clone();
                }
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = F::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -F::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[ncols] = c.rhs.clone();
            if row[ncols].is_neg() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[nstruct + i] = F::one();
            rows.push(row);
            basis.push(nstruct + i);
        }
        Tableau {
            rows,
            basis,
            ncols,
            nstruct,
            column_of,
        }
    }

    fn pivot(&mut self, obj: &mut [F], r: usize, c: usize) {
        let inv = F::one() / self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero_s() {
                *x = x.clone() * inv.clone();
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero_s()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_s() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] = row[j].clone() - prow[j].clone() * f.clone();
            }
        }
        if !obj[c].is_zero_s() {
            let f = obj[c].clone();
            for &j in &nz {
                obj[j] = obj[j].clone() - prow[j].clone() * f.clone();
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule over the allowed columns; `false` signals unboundedness.
    fn optimize(&mut self, obj: &mut [F], allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| obj[j].is_neg()) else {
                return true;
            };
            let rhs = self.ncols;
            let mut best: Option<(usize, F)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_pos() {
                    continue;
                }
                let ratio = row[rhs].clone() / row[c].clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => match ratio.cmp_s(br) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => self.basis[i] < self.basis[*bi],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(obj, r, c);
        }
    }

    fn reduced_objective(&self, costs: &[F]) -> Vec<F> {
        let mut obj = costs.to_vec();
        obj.push(F::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if obj[b].is_zero_s() {
                continue;
            }
            let f = obj[b].clone();
            for (j, x) in self.rows[i].iter().enumerate() {
                if !x.is_zero_s() {
                    obj[j] = obj[j].clone() - x.clone() * f.clone();
                }
            }
        }
        obj
    }

    fn solve(mut self, lp: &LinearProgram<F>, objective: &[F]) -> LpResult<F> {
        let mut phase1 = vec![F::zero(); self.ncols];
        for j in self.nstruct..self.ncols {
            phase1[j] = F::one();
        }
        let mut obj = self.reduced_objective(&phase1);
        self.optimize(&mut obj, self.ncols);
        if !obj[self.ncols].is_zero_s() {
            return LpResult::Infeasible;
        }
        // Drive remaining artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.nstruct {
                match (0..self.nstruct).find(|&j| !self.rows[i][j].is_zero_s()) {
                    Some(c) => {
                        let mut dummy = vec![F::zero(); self.ncols + 1];
                        self.pivot(&mut dummy, i, c);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        let mut costs = vec![F::zero(); self.ncols];
        for (j, c) in objective.iter().enumerate() {
            let (p, n) = self.column_of[j];
            costs[p] = c.clone();
            if let Some(n) = n {
                costs[n] = -c.clone();
            }
        }
        let mut obj = self.reduced_objective(&costs);
        if !self.optimize(&mut obj, self.nstruct) {
            return LpResult::Unbounded;
        }
        let mut col_val = vec![F::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            col_val[b] = self.rows[i][self.ncols].clone();
        }
        let x: Vec<F> = (0..lp.nvars)
            .map(|j| {
                let (p, n) = self.column_of[j];
                match n {
                    Some(n) => col_val[p].clone() - col_val[n].clone(),
                    None => col_val[p].clone(),
                }
            })
            .collect();
        let value = x
            .iter()
            .zip(objective)
            .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        LpResult::Optimal { x, value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use num_rational::BigRational;

    #[test]
    fn small_max() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6
        let mut lp = LinearProgram::<BigRational>::new(2);
        lp.add(vec![rat_int(1), rat_int(2)], Relation::Le, rat_int(4));
        lp.add(vec![rat_int(3), rat_int(1)], Relation::Le, rat_int(6));
        match lp.maximize(&[rat_int(1), rat_int(1)]) {
            LpResult::Optimal { x, value } => {
                assert_eq!(x, vec![rat(8, 5), rat(6, 5)]);
                assert_eq!(value, rat(14, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::<BigRational>::new(1);
        lp.add(vec![rat_int(1)], Relation::Ge, rat_int(2));
        lp.add(vec![rat_int(1)], Relation::Le, rat_int(1));
        assert_eq!(lp.feasible_point(), None);
        let mut lp = LinearProgram::<BigRational>::new(2);
        lp.set_free(1);
        lp.add(vec![rat_int(1), rat_int(1)], Relation::Eq, rat_int(0));
        assert_eq!(lp.minimize(&[rat_int(0), rat_int(1)]), LpResult::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        let mut lp = LinearProgram::<BigRational>::new(2);
        lp.set_free(0);
        lp.set_free(1);
        lp.add(vec![rat_int(1), rat_int(-1)], Relation::Eq, rat_int(-3));
        lp.add(vec![rat_int(1), rat_int(1)], Relation::Eq, rat_int(1));
        assert_eq!(lp.feasible_point(), Some(vec![rat_int(-1), rat_int(2)]));
    }

    #[test]
    fn lexmin_picks_vertex() {
        // Square [0,1]^2, minimise 0 then x then y: vertex (0,0).
        let mut lp = LinearProgram::<BigRational>::new(2);
        lp.add(vec![rat_int(1), rat_int(0)], Relation::Le, rat_int(1));
        lp.add(vec![rat_int(0), rat_int(1)], Relation::Le, rat_int(1));
        let res = lp.lexmin(&[
            vec![rat_int(0), rat_int(0)],
            vec![rat_int(-1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ]);
        assert_eq!(res.point(), Some(vec![rat_int(1), rat_int(0)]));
    }

    #[test]
    fn float_instance_agrees() {
        let mut lp = LinearProgram::<f64>::new(2);
        lp.add(vec![1.0, 2.0], Relation::Le, 4.0);
        lp.add(vec![3.0, 1.0], Relation::Le, 6.0);
        let x = lp.maximize(&[1.0, 1.0]).point().unwrap();
        assert!((x[0] - 1.6).abs() < 1e-9 && (x[1] - 1.2).abs() < 1e-9);
    }
}
