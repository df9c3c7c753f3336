//! Smith normal form of integer matrices.
//!
//! Boundary matrices of simplicial complexes are sparse with entries ±1 and
//! most of their rank can be peeled off by unit pivots without any
//! coefficient growth. [`smith_normal_form`] eliminates unit pivots on a
//! sparse copy in checked `i64` arithmetic (fewest-fill pivot first), then
//! finishes the small remaining block with the dense gcd algorithm over
//! arbitrary-precision integers. If an `i64` operation overflows, the whole
//! matrix is redone densely with big integers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix stored by rows, entries sorted by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let entries =
            m.iter().map(|r| r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c, v)).collect()).collect();
        SparseMatrix { rows, cols, entries }
    }

    /// Adds `value` at `(row, col)`; entries may be pushed in any order.
    pub fn push(&mut self, row: usize, col: usize, value: i64) {
        if value == 0 {
            return;
        }
        let r = &mut self.entries[row];
        match r.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(k) => {
                r[k].1 += value;
                if r[k].1 == 0 {
                    r.remove(k);
                }
            }
            Err(k) => r.insert(k, (col, value)),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        let r = &self.entries[row];
        r.binary_search_by_key(&col, |&(c, _)| c).map_or(0, |k| r[k].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (i, r) in self.entries.iter().enumerate() {
            for &(c, v) in r {
                out[i][c] = v;
            }
        }
        out
    }

    /// `self * other`, with overflow reported as `None`.
    pub fn checked_mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (i, r) in self.entries.iter().enumerate() {
            let mut acc = vec![0i64; other.cols];
            for &(k, a) in r {
                for &(j, b) in &other.entries[k] {
                    acc[j] = acc[j].checked_add(a.checked_mul(b)?)?;
                }
            }
            out.entries[i] = acc.into_iter().enumerate().filter(|(_, v)| *v != 0).collect();
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }
}

/// Invariant factors `d_1 | d_2 | ... | d_r` (all positive) and the rank `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Factors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one())
    }
}

pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    match unit_pivot_reduce(m) {
        Some((units, rest)) => {
            let mut factors = vec![BigInt::one(); units];
            factors.extend(dense_diagonal(rest, None, None));
            SmithForm { rank: factors.len(), invariant_factors: factors }
        }
        None => {
            let dense = to_big(&m.to_dense());
            let factors = dense_diagonal(dense, None, None);
            SmithForm { rank: factors.len(), invariant_factors: factors }
        }
    }
}

pub fn smith_normal_form_dense(m: &[Vec<i64>]) -> SmithForm {
    smith_normal_form(&SparseMatrix::from_dense(m))
}

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

/// Eliminates ±1 pivots. Returns the number of pivots and the remaining
/// block (rows and columns that still hold entries), or `None` on overflow.
fn unit_pivot_reduce(m: &SparseMatrix) -> Option<(usize, Vec<Vec<BigInt>>)> {
    let mut rows: Vec<Vec<(usize, i64)>> = m.entries.clone();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            col_rows[c].insert(i);
        }
    }
    let mut active = vec![true; m.rows];
    let mut units = 0;
    loop {
        // Unit pivot with the smallest Markowitz cost.
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            if !active[i] {
                continue;
            }
            for &(c, v) in r {
                if v == 1 || v == -1 {
                    let cost = (r.len() - 1) * (col_rows[c].len() - 1);
                    if best.is_none_or(|(_, _, b)| cost < b) {
                        best = Some((i, c, cost));
                    }
                }
            }
        }
        let Some((pi, pc, _)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pi]);
        let pv = pivot_row.iter().find(|&&(c, _)| c == pc).unwrap().1;
        let targets: Vec<usize> = col_rows[pc].iter().copied().filter(|&r| r != pi).collect();
        for r in targets {
            let a = rows[r].iter().find(|&&(c, _)| c == pc).unwrap().1;
            // row_r -= (a / pv) * pivot_row, and a / pv = a * pv for units
            let factor = a.checked_mul(pv)?;
            let merged = axpy(&rows[r], &pivot_row, factor)?;
            for &(c, _) in &rows[r] {
                col_rows[c].remove(&r);
            }
            for &(c, _) in &merged {
                col_rows[c].insert(r);
            }
            rows[r] = merged;
        }
        for &(c, _) in &pivot_row {
            col_rows[c].remove(&pi);
        }
        active[pi] = false;
        units += 1;
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&i| active[i] && !rows[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| !col_rows[c].is_empty()).collect();
    let mut block = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (bi, &i) in live_rows.iter().enumerate() {
        for &(c, v) in &rows[i] {
            let bj = live_cols.binary_search(&c).unwrap();
            block[bi][bj] = BigInt::from(v);
        }
    }
    Some((units, block))
}

/// `x - factor * y` over sorted sparse rows.
fn axpy(x: &[(usize, i64)], y: &[(usize, i64)], factor: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(usize::MAX, |e| e.0);
        let cy = y.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if cx < cy {
            i += 1;
            (cx, x[i - 1].1)
        } else if cy < cx {
            j += 1;
            (cy, 0i64.checked_sub(factor.checked_mul(y[j - 1].1)?)?)
        } else {
            i += 1;
            j += 1;
            (cx, x[i - 1].1.checked_sub(factor.checked_mul(y[j - 1].1)?)?)
        };
        if v != 0 {
            out.push((c, v));
        }
    }
    Some(out)
}

/// Full decomposition `U * M * V = D` with unimodular `U`, `V`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

/// Dense Smith decomposition with transforms; intended for small matrices
/// and for checking the fast path.
pub fn smith_decomposition(m: &[Vec<i64>]) -> SmithDecomposition {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = to_big(m);
    let mut u = identity(rows);
    let mut v = identity(cols);
    dense_diagonal_in_place(&mut a, Some(&mut u), Some(&mut v));
    SmithDecomposition { u, d: a, v }
}

pub(crate) fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn dense_diagonal(
    mut a: Vec<Vec<BigInt>>,
    u: Option<&mut Vec<Vec<BigInt>>>,
    v: Option<&mut Vec<Vec<BigInt>>>,
) -> Vec<BigInt> {
    dense_diagonal_in_place(&mut a, u, v);
    let k = a.len().min(a.first().map_or(0, Vec::len));
    (0..k).map(|i| a[i][i].clone()).take_while(|x| !x.is_zero()).collect()
}

fn row_axpy(a: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let (t, s) = if target < source {
        let (lo, hi) = a.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_axpy(a: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    for r in a.iter_mut() {
        if !r[source].is_zero() {
            let d = q * &r[source];
            r[target] -= d;
        }
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    for r in a.iter_mut() {
        r.swap(i, j);
    }
}

/// Classical elimination: smallest-magnitude pivot, Euclidean reduction of
/// its row and column, then a divisibility fix-up so that each diagonal
/// entry divides the next.
fn dense_diagonal_in_place(
    a: &mut [Vec<BigInt>],
    mut u: Option<&mut Vec<Vec<BigInt>>>,
    mut v: Option<&mut Vec<Vec<BigInt>>>,
) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(a, t) else { return };
        a.swap(t, pi);
        if let Some(u) = u.as_deref_mut() {
            u.swap(t, pi);
        }
        swap_cols(a, t, pj);
        if let Some(v) = v.as_deref_mut() {
            swap_cols(v, t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(a, i, t, &q);
                if let Some(u) = u.as_deref_mut() {
                    row_axpy(u, i, t, &q);
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    if let Some(u) = u.as_deref_mut() {
                        u.swap(t, i);
                    }
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(a, j, t, &q);
                if let Some(v) = v.as_deref_mut() {
                    col_axpy(v, j, t, &q);
                }
                if !a[t][j].is_zero() {
                    swap_cols(a, t, j);
                    if let Some(v) = v.as_deref_mut() {
                        swap_cols(v, t, j);
                    }
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let p = a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
            match offender {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into row t.
                    let minus_one = -BigInt::one();
                    row_axpy(a, t, i, &minus_one);
                    if let Some(u) = u.as_deref_mut() {
                        row_axpy(u, t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(u) = u.as_deref_mut() {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
}

fn smallest_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, r) in a.iter().enumerate().skip(t) {
        for (j, x) in r.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form_dense(m).invariant_factors.iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = b.first().map_or(0, Vec::len);
        a.iter().map(|r| (0..n).map(|j| r.iter().zip(b.iter()).map(|(x, row)| x * &row[j]).sum()).collect()).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(factors(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), vec![1, 1, 1]);
        assert_eq!(factors(&[vec![2, 0], vec![0, 4]]), vec![2, 4]);
        // gcd of entries is 2; determinant -8 gives 2 * 4.
        assert_eq!(factors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_normal_form_dense(&[vec![0, 0], vec![0, 0]]).rank, 0);
        assert_eq!(smith_normal_form_dense(&[]).rank, 0);
    }

    #[test]
    fn decomposition_reassembles() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let dec = smith_decomposition(&m);
        let lhs = mul(&mul(&dec.u, &to_big(&m)), &dec.v);
        assert_eq!(lhs, dec.d);
        assert_eq!(dec.diagonal(), vec![2.into(), 6.into(), 12.into()]);
        assert_eq!(factors(&m), vec![2, 6, 12]);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 2 + 7;
        let m = vec![vec![1, big, big], vec![big, 3, 1], vec![big, big, 5]];
        let fast = smith_normal_form_dense(&m);
        let dec = smith_decomposition(&m);
        assert_eq!(fast.invariant_factors, dec.diagonal());
    }
}
