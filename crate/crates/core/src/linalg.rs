//! Dense linear algebra over a [`Scalar`] field and over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row echelon form; returns the reduced rows (zero rows dropped) and pivot columns.
pub fn rref<F: Scalar>(rows: &[Vec<F>], ncols: usize) -> (Matrix<F>, Vec<usize>) {
    let mut m: Matrix<F> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero_s()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero_s() {
                let factor = m[i][c].clone();
                for j in 0..ncols {
                    if !m[r][j].is_zero_s() {
                        let t = m[r][j].clone() * factor.clone();
                        m[i][j] = m[i][j].clone() - t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<F: Scalar>(rows: &[Vec<F>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace<F: Scalar>(rows: &[Vec<F>], ncols: usize) -> Matrix<F> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); ncols];
            v[fc] = F::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[fc].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `A x = b`, if one exists.
pub fn solve<F: Scalar>(rows: &[Vec<F>], rhs: &[F], ncols: usize) -> Option<Vec<F>> {
    let aug: Matrix<F> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let (m, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![F::zero(); ncols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

pub fn transpose<T: Clone>(m: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn mat_vec<F: Scalar>(m: &[Vec<F>], v: &[F]) -> Vec<F> {
    m.iter().map(|r| dot(r, v)).collect()
}

pub fn det<F: Scalar>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero_s()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = d * a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero_s() {
                continue;
            }
            let f = a[i][c].clone() / a[c][c].clone();
            for j in c..n {
                let t = a[c][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
    d
}

pub fn inverse<F: Scalar>(m: &[Vec<F>]) -> Option<Matrix<F>> {
    let n = m.len();
    let aug: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            v
        })
        .collect();
    let (red, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows dropped.
pub fn hnf(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if !m[i][c].is_zero() && best.is_none_or(|b| m[i][c].abs() < m[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if !q.is_zero() {
                    let pr = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

/// Basis (in Hermite form) of `{x ∈ Z^ncols : A x = 0}`.
pub fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let m = rows.len();
    // Work on [Aᵀ | I]: unimodular row operations on the left block expose kernel vectors on the right.
    let mut t: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut v: Vec<BigInt> = rows.iter().map(|r| r[j].clone()).collect();
            v.extend((0..ncols).map(|k| {
                if k == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            v
        })
        .collect();
    let mut r = 0;
    for c in 0..m {
        if r == t.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..t.len() {
                if !t[i][c].is_zero() && best.is_none_or(|b| t[i][c].abs() < t[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            t.swap(r, b);
            let mut done = true;
            for i in r + 1..t.len() {
                if t[i][c].is_zero() {
                    continue;
                }
                let q = t[i][c].div_floor(&t[r][c]);
                let pr = t[r].clone();
                for (x, y) in t[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !t[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                r += 1;
                break;
            }
        }
    }
    let kernel: Vec<Vec<BigInt>> = t[r..]
        .iter()
        .filter(|row| row[..m].iter().all(|x| x.is_zero()))
        .map(|row| row[m..].to_vec())
        .collect();
    hnf(&kernel, ncols)
}

/// Diagonal of the Smith normal form (non-zero invariant factors, ascending by divisibility).
pub fn smith_diagonal(rows: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Smallest non-zero entry in the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                let pr = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..ncols {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                for i in 0..nrows {
                    let y = a[i][t].clone();
                    a[i][j] -= &q * y;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // Divisibility: fold any entry not divisible by the pivot back into the pivot row.
        let p = a[t][t].clone();
        let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !(&a[i][j] % &p).is_zero()));
        if let Some(i) = bad {
            let ri = a[i].clone();
            for (x, y) in a[t].iter_mut().zip(&ri) {
                *x += y;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// Determinant of an integer matrix (fraction-free Bareiss elimination).
pub fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use num_rational::BigRational;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rref_and_nullspace() {
        let a = vec![
            vec![rat_int(1), rat_int(2), rat_int(3)],
            vec![rat_int(2), rat_int(4), rat_int(6)],
        ];
        assert_eq!(rank(&a, 3), 1);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&a, v).iter().all(|x| x == &BigRational::zero()));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = vec![vec![rat_int(2), rat_int(1)], vec![rat_int(1), rat_int(3)]];
        let x = solve(&a, &[rat_int(3), rat_int(4)], 2).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(1)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], rat(3, 5));
        assert_eq!(det(&a), rat_int(5));
        assert!(solve(&[vec![rat_int(0)]], &[rat_int(1)], 1).is_none());
    }

    #[test]
    fn hnf_canonical() {
        let a = to_big(&[vec![2, 4], vec![1, 3]]);
        let h = hnf(&a, 2);
        assert_eq!(h, vec![big(&[1, 1]), big(&[0, 2])]);
        let b = to_big(&[vec![1, 3], vec![1, 1], vec![3, 5]]);
        assert_eq!(hnf(&b, 2), h);
    }

    #[test]
    fn kernel_of_weight_row() {
        let k = integer_kernel(&to_big(&[vec![1, 2, 3, 5]]), 4);
        assert_eq!(k.len(), 3);
        for v in &k {
            let s: BigInt = &v[0] + &v[1] * 2 + &v[2] * 3 + &v[3] * 5;
            assert!(s.is_zero());
        }
    }

    #[test]
    fn smith_and_det() {
        let a = to_big(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_diagonal(&a, 2), big(&[1, 6]));
        assert_eq!(int_det(&a), BigInt::from(6));
        let b = to_big(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(smith_diagonal(&b, 3), big(&[2, 6, 12]));
        assert_eq!(int_det(&b).abs(), BigInt::from(144));
    }
}
