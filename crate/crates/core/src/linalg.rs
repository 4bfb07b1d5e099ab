//! Small dense linear algebra over exact and float coefficients.

use crate::scalars::{Coeff, Rational, Relations};
use serde::Serialize;

/// Rank by fraction-free elimination over the rationals.
pub fn rank_exact(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pivot = pivot_row[col].clone();
        for i in (rank + 1)..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone() / pivot.clone();
            for j in col..ncols {
                let delta = factor.clone() * pivot_row[j].clone();
                rows[i][j] -= delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank of a float matrix with pivot diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloatRank {
    pub rank: usize,
    /// Pivot ratios relative to the largest pivot, in elimination order.
    pub pivot_ratios: Vec<f64>,
    /// Smallest accepted ratio (1 when nothing was accepted).
    pub smallest_accepted: f64,
    /// Largest ratio that fell below the threshold (0 when none).
    pub largest_rejected: f64,
    pub threshold: f64,
}

impl FloatRank {
    pub fn empty() -> Self {
        FloatRank { rank: 0, pivot_ratios: vec![], smallest_accepted: 1.0, largest_rejected: 0.0, threshold: 0.0 }
    }
}

/// Gaussian elimination with full pivoting; a pivot counts if it is at least
/// `threshold` times the first (largest) pivot.
pub fn rank_float(mut rows: Vec<Vec<f64>>, threshold: f64) -> FloatRank {
    let m = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut ratios = Vec::new();
    let mut first = 0.0f64;
    let mut rank = 0;
    let mut largest_rejected = 0.0f64;
    let mut active_cols: Vec<usize> = (0..n).collect();
    for step in 0..m.min(n) {
        let mut best = (0.0f64, step, 0usize);
        for (i, row) in rows.iter().enumerate().skip(step) {
            for (ci, &c) in active_cols.iter().enumerate() {
                if row[c].abs() > best.0 {
                    best = (row[c].abs(), i, ci);
                }
            }
        }
        if step == 0 {
            first = best.0;
        }
        if first == 0.0 {
            break;
        }
        let ratio = best.0 / first;
        ratios.push(ratio);
        if ratio < threshold {
            largest_rejected = ratio;
            break;
        }
        rows.swap(step, best.1);
        let col = active_cols.remove(best.2);
        let pivot_row = rows[step].clone();
        for row in rows.iter_mut().skip(step + 1) {
            let factor = row[col] / pivot_row[col];
            if factor == 0.0 {
                continue;
            }
            for &c in &active_cols {
                row[c] -= factor * pivot_row[c];
            }
            row[col] = 0.0;
        }
        rank += 1;
    }
    let smallest_accepted = ratios.iter().take(rank).copied().fold(1.0, f64::min);
    FloatRank { rank, pivot_ratios: ratios, smallest_accepted, largest_rejected, threshold }
}

/// Determinant by cofactor expansion; works in any commutative ring.
pub fn det<C: Coeff>(m: &[Vec<C>], rel: &Relations) -> C {
    let n = m.len();
    let cols: Vec<usize> = (0..n).collect();
    det_minor(m, 0, &cols, rel)
}

fn det_minor<C: Coeff>(m: &[Vec<C>], row: usize, cols: &[usize], rel: &Relations) -> C {
    if cols.is_empty() {
        return C::one();
    }
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = C::zero();
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_minor(m, row + 1, &rest, rel);
        let term = (entry.clone() * minor).reduce_mod(rel);
        acc = if k % 2 == 0 { acc + term } else { acc - term };
    }
    acc.reduce_mod(rel)
}

/// Inverse via the adjugate; `None` when the determinant is not a unit.
pub fn inverse<C: Coeff>(m: &[Vec<C>], rel: &Relations) -> Option<Vec<Vec<C>>> {
    let n = m.len();
    let d = det(m, rel);
    let dinv = d.try_inv_mod(rel)?;
    let mut out = vec![vec![C::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // Cofactor of entry (j, i) gives inverse entry (i, j).
            let minor: Vec<Vec<C>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let cof = det(&minor, rel);
            let cof = if (i + j) % 2 == 0 { cof } else { -cof };
            out[i][j] = (cof * dinv.clone()).reduce_mod(rel);
        }
    }
    Some(out)
}

pub fn mat_mul<C: Coeff>(a: &[Vec<C>], b: &[Vec<C>], rel: &Relations) -> Vec<Vec<C>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![C::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut s = C::zero();
            for l in 0..k {
                if a[i][l].is_zero() || b[l][j].is_zero() {
                    continue;
                }
                s = s + a[i][l].clone() * b[l][j].clone();
            }
            out[i][j] = s.reduce_mod(rel);
        }
    }
    out
}

pub fn transpose<C: Coeff>(a: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.len();
    let m = a.first().map(|r| r.len()).unwrap_or(0);
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn identity<C: Coeff>(n: usize) -> Vec<Vec<C>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { C::one() } else { C::zero() }).collect()).collect()
}

/// Row-reduced basis of the span of the given rational vectors.
pub fn row_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = vectors.to_vec();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        let pivot_row: Vec<Rational> = rows[rank].iter().map(|x| x.clone() / pivot.clone()).collect();
        rows[rank] = pivot_row.clone();
        for i in 0..rows.len() {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for j in 0..ncols {
                let delta = factor.clone() * pivot_row[j].clone();
                rows[i][j] -= delta;
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Poly};

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|x| rat(*x, 1)).collect()).collect()
    }

    #[test]
    fn exact_rank_and_det() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank_exact(m.clone()), 2);
        assert_eq!(det(&m, &Relations::new()), rat(0, 1));
        let a = q(&[&[2, 1], &[7, 4]]);
        let inv = inverse(&a, &Relations::new()).unwrap();
        assert_eq!(mat_mul(&a, &inv, &Relations::new()), identity(2));
    }

    #[test]
    fn float_rank_diagnostics() {
        let m = vec![vec![1.0, 0.0], vec![0.0, 1e-12]];
        let r = rank_float(m.clone(), 1e-8);
        assert_eq!(r.rank, 1);
        assert!(r.largest_rejected > 0.0 && r.largest_rejected < 1e-8);
        assert_eq!(rank_float(m, 1e-14).rank, 2);
    }

    #[test]
    fn symbolic_inverse_with_radicals() {
        let rel = Relations::new().with("s2", Poly::from_i64(2));
        let s2 = Poly::var("s2");
        let r = Poly::var("r");
        let m = vec![vec![s2.clone() * r.clone(), Poly::zero()], vec![Poly::one(), Poly::one() + s2.clone()]];
        let inv = inverse(&m, &rel).unwrap();
        assert_eq!(mat_mul(&m, &inv, &rel), identity(2));
    }
}
