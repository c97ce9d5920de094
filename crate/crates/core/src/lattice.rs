//! Exact integer linear algebra on small dense matrices.
//!
//! Matrices are row-major `Vec<Vec<i64>>`. Intermediate values are carried in
//! `i128` and checked on the way back down.

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| gcd(g, x))
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &IntMatrix, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose(m: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols)
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

pub(crate) fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<i64> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .ok_or(Error::Overflow)?;
                a[i][j] = num / prev;
            }
        }
        prev = a[k][k];
    }
    narrow(sign * a[n - 1][n - 1])
}

/// Inverse of a square matrix with determinant ±1, via the adjugate.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<Option<IntMatrix>> {
    let n = m.len();
    let det = determinant(m)?;
    if det.abs() != 1 {
        return Ok(None);
    }
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: IntMatrix = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let cof = determinant(&minor)?;
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            // adj[j][i] = cofactor(i, j)
            inv[j][i] = sign * cof * det;
        }
    }
    Ok(Some(inv))
}

/// Invariant factors of an integer matrix (diagonal of its Smith normal form,
/// nonzero entries only, each dividing the next).
pub fn invariant_factors(m: &IntMatrix) -> Result<Vec<i64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: nonzero entry of least absolute value in the trailing block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility condition against the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/column t onto the diagonal
            let best_row = (t..rows)
                .filter(|&i| a[i][t] != 0)
                .min_by_key(|&i| a[i][t].abs())
                .unwrap_or(t);
            let best_col = (t..cols)
                .filter(|&j| a[t][j] != 0)
                .min_by_key(|&j| a[t][j].abs())
                .unwrap_or(t);
            if a[best_row][t].abs() <= a[t][best_col].abs() {
                a.swap(t, best_row);
            } else {
                for row in a.iter_mut() {
                    row.swap(t, best_col);
                }
            }
        }
        diag.push(narrow(a[t][t].abs())?);
        t += 1;
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&vec![vec![1, 2], vec![3, 4]]).unwrap(), -2);
        assert_eq!(
            determinant(&vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap(),
            1
        );
        assert_eq!(determinant(&vec![vec![2, 4], vec![1, 2]]).unwrap(), 0);
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = vec![vec![-1, 3], vec![0, 1]];
        let inv = unimodular_inverse(&m).unwrap().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e: i64 = (0..2).map(|k| m[i][k] * inv[k][j]).sum();
                assert_eq!(e, i64::from(i == j));
            }
        }
        assert!(unimodular_inverse(&vec![vec![2, 0], vec![0, 1]])
            .unwrap()
            .is_none());
    }

    #[test]
    fn smith_factors() {
        assert_eq!(
            invariant_factors(&vec![vec![2, 4], vec![6, 8]]).unwrap(),
            vec![2, 4]
        );
        assert_eq!(
            invariant_factors(&vec![vec![-1, -1], vec![1, 0], vec![0, 1]]).unwrap(),
            vec![1, 1]
        );
        assert_eq!(invariant_factors(&vec![vec![2], vec![3]]).unwrap(), vec![1]);
        assert_eq!(
            invariant_factors(&vec![vec![0, 0]]).unwrap(),
            Vec::<i64>::new()
        );
    }
}
