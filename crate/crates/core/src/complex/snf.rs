//! Smith normal form of integer matrices.
//!
//! Boundary matrices of simplicial complexes are sparse with ±1 entries, so
//! the first phase pivots on unit entries directly in sparse storage with
//! checked `i64` arithmetic, choosing among a column's unit entries the one
//! whose row is shortest. Whatever is left without a unit entry is reduced
//! densely over arbitrary-precision integers. If the sparse phase ever
//! overflows, the whole matrix is redone in the dense big-integer path.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    nrows: usize,
    ncols: usize,
    /// Per column, `(row, value)` sorted by row, no zeros.
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Builds from per-column entry lists; zeros are dropped and duplicate
    /// rows within a column are summed.
    pub fn from_columns(nrows: usize, columns: Vec<Vec<(usize, i64)>>) -> Self {
        let ncols = columns.len();
        let cols = columns
            .into_iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for (r, v) in col {
                    assert!(r < nrows, "row {r} out of range");
                    *acc.entry(r).or_default() += v;
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        Self { nrows, ncols, cols }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let columns = (0..ncols)
            .map(|j| (0..nrows).map(|i| (i, rows[i][j])).collect())
            .collect();
        Self::from_columns(nrows, columns)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.cols[j]
            .binary_search_by_key(&i, |&(r, _)| r)
            .map_or(0, |p| self.cols[j][p].1)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// `self · rhs` with checked arithmetic; `None` on overflow or shape mismatch.
    pub fn checked_mul(&self, rhs: &SparseIntMatrix) -> Option<SparseIntMatrix> {
        if self.ncols != rhs.nrows {
            return None;
        }
        let mut cols = Vec::with_capacity(rhs.ncols);
        for rcol in &rhs.cols {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, b) in rcol {
                for &(i, a) in &self.cols[k] {
                    let e = acc.entry(i).or_default();
                    *e = e.checked_add(a.checked_mul(b)?)?;
                }
            }
            cols.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        Some(SparseIntMatrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            cols,
        })
    }

    fn to_dense_big(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.ncols]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                d[i][j] = BigInt::from(v);
            }
        }
        d
    }
}

/// Invariant factors d_1 | d_2 | … | d_r of a matrix (nonzero ones only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigUint>,
    /// The sparse phase overflowed and the big-integer path was used.
    pub bigint_fallback: bool,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigUint> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_form(m: &SparseIntMatrix) -> SmithForm {
    match unit_phase(m) {
        Some((units, rest)) => {
            let mut invariant_factors = vec![BigUint::one(); units];
            invariant_factors.extend(dense_smith(rest));
            SmithForm {
                invariant_factors,
                bigint_fallback: false,
            }
        }
        None => SmithForm {
            invariant_factors: dense_smith(m.to_dense_big()),
            bigint_fallback: true,
        },
    }
}

/// Eliminates on unit pivots. Returns the number of pivots and the leftover
/// nonzero block as a dense matrix, or `None` on overflow.
fn unit_phase(m: &SparseIntMatrix) -> Option<(usize, Vec<Vec<BigInt>>)> {
    let mut cols: Vec<BTreeMap<usize, i64>> =
        m.cols.iter().map(|c| c.iter().copied().collect()).collect();
    let mut rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.nrows];
    for (j, col) in m.cols.iter().enumerate() {
        for &(i, _) in col {
            rows[i].insert(j);
        }
    }
    let mut units = 0;
    loop {
        let mut progress = false;
        for c in 0..cols.len() {
            let pick = cols[c]
                .iter()
                .filter(|&(_, &v)| v == 1 || v == -1)
                .min_by_key(|&(&r, _)| (rows[r].len(), r))
                .map(|(&r, &v)| (r, v));
            let Some((r, p)) = pick else {
                continue;
            };
            let pivot: Vec<(usize, i64)> = cols[c].iter().map(|(&i, &v)| (i, v)).collect();
            let others: Vec<usize> = rows[r].iter().copied().filter(|&j| j != c).collect();
            for j in others {
                // col_j -= (a / p) · col_c, and a / p = a · p for p = ±1
                let factor = cols[j][&r] * p;
                for &(i, v) in &pivot {
                    let cur = cols[j].get(&i).copied().unwrap_or(0);
                    let new = cur.checked_sub(factor.checked_mul(v)?)?;
                    if new == 0 {
                        cols[j].remove(&i);
                        rows[i].remove(&j);
                    } else {
                        cols[j].insert(i, new);
                        rows[i].insert(j);
                    }
                }
            }
            // Row r now meets only column c; dropping both leaves the rest unchanged.
            for &(i, _) in &pivot {
                rows[i].remove(&c);
            }
            cols[c].clear();
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j].is_empty()).collect();
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let row_pos: BTreeMap<usize, usize> =
        live_rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut rest = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (q, &j) in live_cols.iter().enumerate() {
        for (&i, &v) in &cols[j] {
            rest[row_pos[&i]][q] = BigInt::from(v);
        }
    }
    Some((units, rest))
}

/// Dense Smith normal form over ℤ. Returns the nonzero invariant factors in
/// divisibility order.
pub(crate) fn dense_smith(mut a: Vec<Vec<BigInt>>) -> Vec<BigUint> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag: Vec<BigInt> = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&a, t..m, t..n) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let (upper, lower) = a.split_at_mut(i);
                    for (x, p) in lower[0][t..].iter_mut().zip(&upper[t][t..]) {
                        *x -= &q * p;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if clean {
                break;
            }
            // a smaller remainder now sits in row t or column t; make it the pivot
            let (pi, pj) = min_abs_entry_cross(&a, t).expect("pivot row/column nonzero");
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
        }
        diag.push(a[t][t].abs());
    }
    normalize_chain(diag)
}

fn min_abs_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_entry_cross(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let m = a.len();
    let n = a[0].len();
    let cells = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
    cells
        .filter(|&(i, j)| !a[i][j].is_zero())
        .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
}

/// Turns any diagonal into a divisibility chain via (a, b) ↦ (gcd, lcm).
fn normalize_chain(mut d: Vec<BigInt>) -> Vec<BigUint> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d.into_iter()
        .map(|x| {
            let (sign, mag) = x.into_parts();
            debug_assert!(sign != Sign::Minus);
            mag
        })
        .collect()
}
