//! Dense exact Gaussian elimination over the rationals.
//!
//! Pivots are chosen in column order, first nonzero row from the top, so the
//! results are deterministic.

use crate::scalar::Scalar;

pub type Dense = Vec<Vec<Scalar>>;

pub struct Echelon {
    /// Reduced row echelon form; the first `pivots.len()` rows are nonzero.
    pub rref: Dense,
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
}

pub fn zeros(rows: usize, cols: usize) -> Dense {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Dense {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn rref(matrix: &Dense, ncols: usize) -> Echelon {
    let mut m = matrix.clone();
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(p * &f);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { rref: m, pivots }
}

pub fn rank(matrix: &Dense, ncols: usize) -> usize {
    rref(matrix, ncols).pivots.len()
}

/// Basis of the kernel of `matrix` (rows × ncols), one vector per free
/// column, in increasing order of free column.
pub fn nullspace(matrix: &Dense, ncols: usize) -> Vec<Vec<Scalar>> {
    let e = rref(matrix, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); ncols];
            v[f] = Scalar::one();
            for (r, &p) in e.pivots.iter().enumerate() {
                v[p] = -&e.rref[r][f];
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(matrix: &Dense) -> Option<Dense> {
    let n = matrix.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Dense = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let e = rref(&aug, n);
    if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(e.rref.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Greedily extends `base` (assumed independent) by those `candidates` that
/// keep the family independent; returns the chosen candidate vectors.
pub fn extend_to_independent(base: &[Vec<Scalar>], candidates: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
    let mut current: Dense = base.to_vec();
    let mut chosen = Vec::new();
    let mut r = rank(&current, dim);
    for c in candidates {
        current.push(c.clone());
        let r2 = rank(&current, dim);
        if r2 > r {
            r = r2;
            chosen.push(c.clone());
        } else {
            current.pop();
        }
    }
    chosen
}

pub fn mat_mul(a: &Dense, b: &Dense, inner: usize, cols: usize) -> Dense {
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &(&row[k] * &b[k][j]);
                }
            }
        }
    }
    out
}
