//! Sparse integer matrices and Markowitz-style elimination over a [`Ring`].

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ring::Ring;

/// Coordinate-list integer matrix, sorted by `(row, col)`, without duplicate
/// coordinates or stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, BigInt)>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// Builds a matrix from triplets; duplicate coordinates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, BigInt)>,
    ) -> Self {
        for t in &triplets {
            assert!(
                t.0 < rows && t.1 < cols,
                "entry ({}, {}) outside {rows}x{cols}",
                t.0,
                t.1
            );
        }
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut entries: Vec<(usize, usize, BigInt)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !e.2.is_zero());
        SparseIntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_i64_triplets(rows: usize, cols: usize, triplets: Vec<(usize, usize, i64)>) -> Self {
        Self::from_triplets(
            rows,
            cols,
            triplets
                .into_iter()
                .map(|(r, c, v)| (r, c, v.into()))
                .collect(),
        )
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut t = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_i64_triplets(rows.len(), cols, t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, BigInt)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.entries
                .iter()
                .map(|(r, c, v)| (*c, *r, v.clone()))
                .collect(),
        )
    }

    /// Applies `row_perm[i]` as the new index of row `i` and likewise for columns.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self::from_triplets(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .map(|(r, c, v)| (row_perm[*r], col_perm[*c], v.clone()))
                .collect(),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            by_row[*r].push((*c, v));
        }
        let mut t = Vec::new();
        for (r, k, a) in &self.entries {
            for (c, b) in &by_row[*k] {
                t.push((*r, *c, a * *b));
            }
        }
        Self::from_triplets(self.rows, other.cols, t)
    }

    /// Rows as sorted sparse vectors over `ring`.
    pub fn ring_rows<R: Ring>(&self, ring: &R) -> Vec<SparseRow<R::E>> {
        let mut rows: Vec<SparseRow<R::E>> = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            let e = ring.from_int(v);
            if !ring.is_zero(&e) {
                rows[*r].push((*c as u32, e));
            }
        }
        rows
    }
}

pub type SparseRow<E> = Vec<(u32, E)>;

/// Outcome of elimination. Pivot rows are frozen at the moment they were
/// chosen, so they only mention their own pivot column and columns that were
/// still active at that time.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub cols: usize,
    /// `(column, frozen row)` in elimination order.
    pub pivots: Vec<(u32, SparseRow<E>)>,
    /// Rows that never became pivots, after elimination; they contain no pivot column.
    pub remainder: Vec<SparseRow<E>>,
}

impl<E: Clone> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        let mut c: Vec<u32> = self.pivots.iter().map(|p| p.0).collect();
        c.sort_unstable();
        c
    }
}

fn find<E>(row: &[(u32, E)], col: u32) -> Option<usize> {
    row.binary_search_by_key(&col, |e| e.0).ok()
}

/// Eliminates `rows` (each sorted by column) with a minimum-degree pivot rule:
/// the active column with fewest entries first, then its shortest row holding a
/// unit. Column `protected`, if any, is never used as a pivot; it carries a
/// right-hand side. Over the integers, columns with no unit entry are left for
/// a dense finish.
pub fn eliminate<R: Ring>(
    ring: &R,
    mut rows: Vec<SparseRow<R::E>>,
    cols: usize,
    protected: Option<u32>,
) -> Echelon<R::E> {
    let n = rows.len();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); cols + 1];
    let mut count: Vec<u32> = vec![0; cols + 1];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_rows[*c as usize].push(i as u32);
            count[*c as usize] += 1;
        }
    }
    let mut active = vec![true; n];
    let mut done = vec![false; cols + 1];
    if let Some(p) = protected {
        done[p as usize] = true;
    }
    let mut queue: BTreeSet<(u32, u32)> = (0..cols as u32)
        .filter(|&c| count[c as usize] > 0 && !done[c as usize])
        .map(|c| (count[c as usize], c))
        .collect();
    let mut pivots = Vec::new();

    let bump =
        |queue: &mut BTreeSet<(u32, u32)>, count: &mut [u32], done: &[bool], c: u32, delta: i32| {
            let ci = c as usize;
            if !done[ci] {
                queue.remove(&(count[ci], c));
            }
            count[ci] = (count[ci] as i64 + delta as i64) as u32;
            if !done[ci] && count[ci] > 0 {
                queue.insert((count[ci], c));
            }
        };

    while let Some(&(cnt, col)) = queue.iter().next() {
        queue.remove(&(cnt, col));
        let ci = col as usize;
        // Refresh the row list of this column and choose the pivot row.
        let mut holders: Vec<u32> = Vec::new();
        let mut best: Option<(usize, u32)> = None;
        let mut seen = std::mem::take(&mut col_rows[ci]);
        seen.sort_unstable();
        seen.dedup();
        for &r in &seen {
            let ru = r as usize;
            if !active[ru] {
                continue;
            }
            if let Some(k) = find(&rows[ru], col) {
                holders.push(r);
                if ring.is_unit(&rows[ru][k].1) {
                    let key = (rows[ru].len(), r);
                    if best.map_or(true, |b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        col_rows[ci] = holders.clone();
        done[ci] = true;
        let Some((_, prow)) = best else {
            continue;
        };
        let pr = prow as usize;
        active[pr] = false;
        let pivot_row = std::mem::take(&mut rows[pr]);
        let pk = find(&pivot_row, col).unwrap();
        let pinv = ring.inv(&pivot_row[pk].1);
        for (c, _) in &pivot_row {
            bump(&mut queue, &mut count, &done, *c, -1);
        }
        for &r in &holders {
            if r == prow {
                continue;
            }
            let ru = r as usize;
            let k = find(&rows[ru], col).unwrap();
            let factor = ring.mul(&rows[ru][k].1, &pinv);
            let old = std::mem::take(&mut rows[ru]);
            let mut merged: SparseRow<R::E> = Vec::with_capacity(old.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < pivot_row.len() {
                let take_old = j >= pivot_row.len() || (i < old.len() && old[i].0 < pivot_row[j].0);
                let take_piv = i >= old.len() || (j < pivot_row.len() && pivot_row[j].0 < old[i].0);
                if take_old {
                    merged.push(old[i].clone());
                    i += 1;
                } else if take_piv {
                    let c = pivot_row[j].0;
                    let v = ring.neg(&ring.mul(&factor, &pivot_row[j].1));
                    if !ring.is_zero(&v) {
                        merged.push((c, v));
                        bump(&mut queue, &mut count, &done, c, 1);
                        col_rows[c as usize].push(r);
                    }
                    j += 1;
                } else {
                    let c = old[i].0;
                    let v = ring.sub(&old[i].1, &ring.mul(&factor, &pivot_row[j].1));
                    if ring.is_zero(&v) {
                        bump(&mut queue, &mut count, &done, c, -1);
                    } else {
                        merged.push((c, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            rows[ru] = merged;
        }
        pivots.push((col, pivot_row));
    }
    let remainder = rows
        .into_iter()
        .enumerate()
        .filter(|(i, r)| active[*i] && !r.is_empty())
        .map(|(_, r)| r)
        .collect();
    Echelon {
        cols,
        pivots,
        remainder,
    }
}

/// Rank over a field.
pub fn rank<R: Ring>(ring: &R, m: &SparseIntMatrix) -> usize {
    eliminate(ring, m.ring_rows(ring), m.cols(), None).rank()
}

/// Back substitution through frozen pivot rows. `rhs` is the protected column,
/// `free` assigns the non-pivot columns.
fn back_substitute<R: Ring>(
    ring: &R,
    e: &Echelon<R::E>,
    rhs: Option<u32>,
    free: &[(u32, R::E)],
) -> Vec<R::E> {
    let mut x = vec![ring.zero(); e.cols];
    for (c, v) in free {
        x[*c as usize] = v.clone();
    }
    for (col, row) in e.pivots.iter().rev() {
        let mut acc = ring.zero();
        let mut piv = None;
        for (c, v) in row {
            if *c == *col {
                piv = Some(v);
            } else if Some(*c) == rhs {
                acc = ring.add(&acc, v);
            } else {
                acc = ring.sub(&acc, &ring.mul(v, &x[*c as usize]));
            }
        }
        x[*col as usize] = ring.mul(&acc, &ring.inv(piv.expect("pivot entry")));
    }
    x
}

/// Solves `A x = b` over a field. `None` when the system is inconsistent.
pub fn solve<R: Ring>(ring: &R, a: &SparseIntMatrix, b: &[R::E]) -> Option<Vec<R::E>> {
    assert_eq!(b.len(), a.rows());
    let mut rows = a.ring_rows(ring);
    let rhs = a.cols() as u32;
    for (row, v) in rows.iter_mut().zip(b) {
        if !ring.is_zero(v) {
            row.push((rhs, v.clone()));
        }
    }
    let e = eliminate(ring, rows, a.cols(), Some(rhs));
    if e.remainder.iter().any(|r| r.iter().any(|(c, _)| *c == rhs)) {
        return None;
    }
    Some(back_substitute(ring, &e, Some(rhs), &[]))
}

/// A basis of the right null space of `A` over a field.
pub fn nullspace<R: Ring>(ring: &R, a: &SparseIntMatrix) -> Vec<Vec<R::E>> {
    let e = eliminate(ring, a.ring_rows(ring), a.cols(), None);
    let pivots = e.pivot_columns();
    (0..a.cols() as u32)
        .filter(|c| pivots.binary_search(c).is_err())
        .map(|c| back_substitute(ring, &e, None, &[(c, ring.one())]))
        .collect()
}

/// `A x` for a vector over `ring`.
pub fn apply<R: Ring>(ring: &R, a: &SparseIntMatrix, x: &[R::E]) -> Vec<R::E> {
    let mut out = vec![ring.zero(); a.rows()];
    for (r, c, v) in a.entries() {
        if !ring.is_zero(&x[*c]) {
            out[*r] = ring.add(&out[*r], &ring.mul(&ring.from_int(v), &x[*c]));
        }
    }
    out
}
