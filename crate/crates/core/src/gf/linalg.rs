//! Gaussian elimination over any [`Arith`] field. Matrices are row-major
//! `Vec<Vec<E>>`.

use super::poly::Arith;

/// Row-reduces in place; returns the pivot column of each pivot row.
pub(crate) fn row_reduce<F: Arith>(f: &F, m: &mut [Vec<F::E>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, sel);
        let inv = f.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c];
                for j in 0..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank<F: Arith>(f: &F, mut m: Vec<Vec<F::E>>) -> usize {
    row_reduce(f, &mut m).len()
}

/// Inverse of a square matrix, or `None` when singular.
pub(crate) fn invert<F: Arith>(f: &F, m: &[Vec<F::E>]) -> Option<Vec<Vec<F::E>>> {
    let n = m.len();
    let mut aug: Vec<Vec<F::E>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) fn mat_vec<F: Arith>(f: &F, m: &[Vec<F::E>], v: &[F::E]) -> Vec<F::E> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
        })
        .collect()
}

pub(crate) fn transpose<E: Copy>(m: &[Vec<E>]) -> Vec<Vec<E>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}
