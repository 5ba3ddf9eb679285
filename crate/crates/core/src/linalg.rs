//! Dense linear algebra over any [`FieldOps`] field.
//!
//! Matrices are `Vec<Vec<Elem>>` in row-major order. These routines serve
//! the code-level computations; subspaces of `F_q^n` use the packed rows in
//! [`crate::lattice`].

use crate::field::{Elem, FieldOps};

/// Reduced row echelon form in place; zero rows are dropped.
/// Returns the pivot column of each remaining row.
pub fn rref<F: FieldOps + ?Sized>(f: &F, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv(rows[r][c]).expect("nonzero pivot");
        if inv != Elem::ONE {
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

#[must_use]
pub fn rank<F: FieldOps + ?Sized>(f: &F, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of `{ v : rows * v^T = 0 }` for vectors of length `ncols`.
#[must_use]
pub fn kernel<F: FieldOps + ?Sized>(f: &F, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m: Vec<Vec<Elem>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let pivots = rref(f, &mut m);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Elem::ZERO; ncols];
        v[free] = Elem::ONE;
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

/// Inverse of a square matrix, if it is invertible.
#[must_use]
pub fn inverse<F: FieldOps + ?Sized>(f: &F, a: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Elem>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row vector times matrix.
#[must_use]
pub fn vec_mat<F: FieldOps + ?Sized>(f: &F, v: &[Elem], m: &[Vec<Elem>]) -> Vec<Elem> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut out = vec![Elem::ZERO; ncols];
    for (&c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

#[must_use]
pub fn mat_mul<F: FieldOps + ?Sized>(f: &F, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    a.iter().map(|row| vec_mat(f, row, b)).collect()
}

#[must_use]
pub fn transpose(a: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let ncols = a.first().map_or(0, Vec::len);
    (0..ncols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}
