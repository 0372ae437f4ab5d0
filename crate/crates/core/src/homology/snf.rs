//! Smith normal form over the integers.
//!
//! Unit pivots are eliminated sparsely first (each contributes an invariant
//! factor 1); whatever is left is reduced densely.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ring::Integers;
use super::sparse::{eliminate, SparseIntMatrix};

type Dense = Vec<Vec<BigInt>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors `d1 | d2 | …`, all positive.
    pub invariants: Vec<BigInt>,
    /// Unimodular `U`, `V` with `U M V` diagonal with the invariants, when requested.
    pub transforms: Option<(Dense, Dense)>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariants
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_normal_form(m: &SparseIntMatrix, with_transforms: bool) -> SmithForm {
    if with_transforms {
        let (d, u, v) = dense_snf(m.to_dense(), true);
        return SmithForm {
            invariants: d,
            transforms: Some((u.unwrap(), v.unwrap())),
        };
    }
    let e = eliminate(&Integers, m.ring_rows(&Integers), m.cols(), None);
    let mut invariants = vec![BigInt::one(); e.rank()];
    if !e.remainder.is_empty() {
        let mut cols: Vec<u32> = e.remainder.iter().flatten().map(|(c, _)| *c).collect();
        cols.sort_unstable();
        cols.dedup();
        let mut dense = vec![vec![BigInt::zero(); cols.len()]; e.remainder.len()];
        for (i, row) in e.remainder.iter().enumerate() {
            for (c, v) in row {
                dense[i][cols.binary_search(c).unwrap()] = v.clone();
            }
        }
        invariants.extend(dense_snf(dense, false).0);
    }
    invariants.sort();
    // Units from the sparse phase come first; the dense part already forms a chain
    // and every entry of it is divisible by 1, so sorting keeps divisibility.
    SmithForm {
        invariants,
        transforms: None,
    }
}

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Dense Smith normal form by repeated minimal-pivot reduction.
pub fn dense_snf(mut a: Dense, track: bool) -> (Vec<BigInt>, Option<Dense>, Option<Dense>) {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut u = track.then(|| identity(m));
    let mut v = track.then(|| identity(n));
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry of the trailing block.
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() {
                    let abs = a[i][j].abs();
                    if best.as_ref().map_or(true, |b| abs < b.0) {
                        best = Some((abs, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap(t, pi);
        }
        swap_cols(&mut a, t, pj);
        if let Some(v) = v.as_mut() {
            swap_cols(v, t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                if let Some(u) = u.as_mut() {
                    row_axpy(u, i, t, &q);
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                    if a[i][t].abs() < a[t][t].abs() {
                        a.swap(t, i);
                        if let Some(u) = u.as_mut() {
                            u.swap(t, i);
                        }
                    }
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                if let Some(v) = v.as_mut() {
                    col_axpy(v, j, t, &q);
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                    if a[t][j].abs() < a[t][t].abs() {
                        swap_cols(&mut a, t, j);
                        if let Some(v) = v.as_mut() {
                            swap_cols(v, t, j);
                        }
                    }
                }
            }
            if dirty {
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let offender =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offender {
                Some(i) => {
                    let one = -BigInt::one();
                    row_axpy(&mut a, t, i, &one);
                    if let Some(u) = u.as_mut() {
                        row_axpy(u, t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(u) = u.as_mut() {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        t += 1;
    }
    let d = (0..t).map(|i| a[i][i].clone()).collect();
    (d, u, v)
}

/// `row[i] -= q * row[k]`.
fn row_axpy(a: &mut Dense, i: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = a[k].clone();
    for (x, s) in a[i].iter_mut().zip(&src) {
        if !s.is_zero() {
            *x -= q * s;
        }
    }
}

/// `col[j] -= q * col[k]`.
fn col_axpy(a: &mut Dense, j: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[k].is_zero() {
            let d = q * &row[k];
            row[j] -= d;
        }
    }
}

fn swap_cols(a: &mut Dense, i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

pub fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn examples() {
        let id = SparseIntMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(smith_normal_form(&id, false).invariants, ints(&[1, 1, 1]));
        let m = SparseIntMatrix::from_dense(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(smith_normal_form(&m, false).invariants, ints(&[2, 4]));
        assert!(smith_normal_form(&SparseIntMatrix::zeros(3, 2), false)
            .invariants
            .is_empty());
    }

    #[test]
    fn transforms_diagonalize() {
        let m = SparseIntMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&m, true);
        assert_eq!(s.invariants, ints(&[2, 6, 12]));
        let (u, v) = s.transforms.unwrap();
        let d = dense_mul(&dense_mul(&u, &m.to_dense()), &v);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j {
                    s.invariants[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(*x, want);
            }
        }
    }
}
