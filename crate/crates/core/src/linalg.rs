//! Dense exact linear algebra over ℚ(ζ_N).

use crate::scalars::CycNum;

pub type Matrix = Vec<Vec<CycNum>>;

/// Incremental row-echelon basis used to pick the first independent vectors.
pub struct Echelon {
    /// Reduced rows with their pivot columns.
    rows: Vec<(usize, Vec<CycNum>)>,
}

impl Default for Echelon {
    fn default() -> Self {
        Echelon::new()
    }
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[CycNum]) -> Vec<CycNum> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent of the rows so far; returns whether it was.
    pub fn insert(&mut self, v: &[CycNum]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inverse().expect("nonzero pivot");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Indices of the first linearly independent rows, in order.
pub fn row_pivots(m: &Matrix) -> Vec<usize> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (i, row) in m.iter().enumerate() {
        if e.insert(row) {
            out.push(i);
        }
    }
    out
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn rank(m: &Matrix) -> usize {
    row_pivots(m).len()
}

/// Inverse of a square matrix by Gauss–Jordan elimination.
pub fn inverse(m: &Matrix, ord: u32) -> Option<Matrix> {
    let n = m.len();
    let mut a: Vec<Vec<CycNum>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { CycNum::one(ord) } else { CycNum::zero(ord) }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inverse().ok()?;
        for x in a[col].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &Matrix, b: &Matrix, ord: u32) -> Matrix {
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    let mut acc = CycNum::zero(ord);
                    for t in 0..k {
                        if !row[t].is_zero() && !b[t][j].is_zero() {
                            acc = &acc + &(&row[t] * &b[t][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[CycNum], m: &Matrix, ord: u32) -> Vec<CycNum> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut out = vec![CycNum::zero(ord); cols];
    for (t, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for j in 0..cols {
            if !m[t][j].is_zero() {
                out[j] = &out[j] + &(x * &m[t][j]);
            }
        }
    }
    out
}

/// Matrix times column vector.
pub fn mat_vec(m: &Matrix, v: &[CycNum], ord: u32) -> Vec<CycNum> {
    m.iter()
        .map(|row| {
            let mut acc = CycNum::zero(ord);
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form whose pivot in each row is the rightmost nonzero
/// column, processed from the right. Returns (pivot column, normalized row).
pub fn rref_rightmost(rows: Vec<Vec<CycNum>>) -> Vec<(usize, Vec<CycNum>)> {
    let mut basis: Vec<(usize, Vec<CycNum>)> = Vec::new();
    for row in rows {
        let mut r = row;
        for (p, b) in &basis {
            if !r[*p].is_zero() {
                let f = r[*p].clone();
                for (x, y) in r.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        let Some(p) = r.iter().rposition(|x| !x.is_zero()) else {
            continue;
        };
        let inv = r[p].inverse().expect("nonzero pivot");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, b) in basis.iter_mut() {
            if !b[p].is_zero() {
                let f = b[p].clone();
                for (x, y) in b.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        basis.push((p, r));
    }
    basis.sort_by_key(|(p, _)| *p);
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::make_root;

    fn m(ord: u32, v: &[&[i64]]) -> Matrix {
        v.iter().map(|r| r.iter().map(|&x| CycNum::from_int(ord, x)).collect()).collect()
    }

    #[test]
    fn inverse_and_pivots() {
        let a = m(1, &[&[2, 1], &[1, 1]]);
        let inv = inverse(&a, 1).unwrap();
        assert_eq!(mat_mul(&a, &inv, 1), m(1, &[&[1, 0], &[0, 1]]));
        let s = m(1, &[&[1, 2], &[2, 4], &[0, 1]]);
        assert_eq!(row_pivots(&s), vec![0, 2]);
        assert!(inverse(&m(1, &[&[1, 2], &[2, 4]]), 1).is_none());
        let z = make_root(5, 1);
        let c = vec![vec![CycNum::one(5), z.clone()], vec![z.clone(), CycNum::one(5)]];
        let ci = inverse(&c, 5).unwrap();
        assert_eq!(mat_mul(&ci, &c, 5), vec![vec![CycNum::one(5), CycNum::zero(5)], vec![CycNum::zero(5), CycNum::one(5)]]);
    }

    #[test]
    fn rightmost_rref() {
        let rows = m(1, &[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1]]);
        let r = rref_rightmost(rows);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].0, 1);
        assert_eq!(r[1].0, 2);
        assert!(r[1].1[1].is_zero());
    }
}
