use std::borrow::Cow;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::sparse::SparseMatrix;

/// Entry type for elimination. The `i64` implementation reports overflow by
/// returning `None`, which makes the caller restart in `BigInt`.
trait Entry: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn magnitude_key(&self) -> u128;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn into_big(self) -> BigInt;
}

impl Entry for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn magnitude_key(&self) -> u128 {
        self.unsigned_abs() as u128
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Entry for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn magnitude_key(&self) -> u128 {
        let bits = self.bits();
        if bits >= 127 {
            u128::MAX
        } else {
            u128::try_from(self.abs()).unwrap_or(u128::MAX)
        }
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn into_big(self) -> BigInt {
        self
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Unimodular row operations only; pivots must be `±1`.
    Integer,
    /// Any nonzero pivot, fraction-free updates.
    Rational,
}

struct Overflow;

struct Outcome<T> {
    pivots: usize,
    remainder: Vec<Vec<(u32, T)>>,
}

struct Eliminator<T> {
    rows: Vec<Vec<(u32, T)>>,
    /// Rows that (may) have an entry in each column; stale entries are
    /// filtered when read.
    col_rows: Vec<Vec<u32>>,
    alive: Vec<bool>,
    version: Vec<u32>,
    mode: Mode,
    pivots: usize,
}

impl<T: Entry> Eliminator<T> {
    fn new(m: &SparseMatrix, mode: Mode) -> Self {
        let rows: Vec<Vec<(u32, T)>> = m
            .columns()
            .iter()
            .map(|c| c.iter().map(|&(i, v)| (i, T::from_i64(v))).collect())
            .collect();
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.nrows()];
        for (r, row) in rows.iter().enumerate() {
            for &(c, _) in row {
                col_rows[c as usize].push(r as u32);
            }
        }
        let alive = rows.iter().map(|r| !r.is_empty()).collect();
        Eliminator {
            version: vec![0; rows.len()],
            rows,
            col_rows,
            alive,
            mode,
            pivots: 0,
        }
    }

    fn entry(&self, r: usize, c: u32) -> Option<&T> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|p| &row[p].1)
    }

    /// Eliminates column `c` using row `r`, then retires row `r`. Returns the
    /// rows that changed.
    fn pivot(&mut self, r: usize, c: u32) -> Result<Vec<u32>, Overflow> {
        let p = self.entry(r, c).expect("pivot entry").clone();
        self.alive[r] = false;
        self.pivots += 1;
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let targets = std::mem::take(&mut self.col_rows[c as usize]);
        let mut touched = Vec::new();
        for k in targets {
            let k = k as usize;
            if !self.alive[k] {
                continue;
            }
            let Some(a) = self.entry(k, c).cloned() else {
                continue;
            };
            let (merged, fresh) = combine(&p, &self.rows[k], &a, &pivot_row, self.mode)?;
            self.rows[k] = merged;
            for col in fresh {
                self.col_rows[col as usize].push(k as u32);
            }
            self.version[k] += 1;
            if self.rows[k].is_empty() {
                self.alive[k] = false;
            } else {
                touched.push(k as u32);
            }
        }
        Ok(touched)
    }

    /// Pivots on columns with a single live entry. Such pivots change no
    /// other row, so column counts stay exact throughout.
    fn singleton_phase(&mut self) {
        let mut count: Vec<usize> = self.col_rows.iter().map(Vec::len).collect();
        let mut stack: Vec<u32> = (0..count.len() as u32).filter(|&c| count[c as usize] == 1).collect();
        while let Some(c) = stack.pop() {
            if count[c as usize] != 1 {
                continue;
            }
            let Some(&r) = self.col_rows[c as usize].iter().find(|&&k| self.alive[k as usize]) else {
                continue;
            };
            let r = r as usize;
            if self.mode == Mode::Integer && !self.entry(r, c).is_some_and(T::is_unit) {
                continue;
            }
            self.alive[r] = false;
            self.pivots += 1;
            for (col, _) in std::mem::take(&mut self.rows[r]) {
                count[col as usize] -= 1;
                if count[col as usize] == 1 {
                    stack.push(col);
                }
            }
        }
    }

    /// Row-driven pass for whatever the column pass left (in integer mode,
    /// rows whose unit entries appeared late).
    fn row_phase(&mut self) -> Result<(), Overflow> {
        let mut heap: BinaryHeap<Reverse<(usize, u32, u32)>> = (0..self.rows.len())
            .filter(|&r| self.alive[r])
            .map(|r| Reverse((self.rows[r].len(), r as u32, self.version[r])))
            .collect();
        while let Some(Reverse((_, r, ver))) = heap.pop() {
            let r = r as usize;
            if !self.alive[r] || self.version[r] != ver {
                continue;
            }
            let Some(pos) = choose_pivot(&self.rows[r], &self.col_rows, self.mode) else {
                continue;
            };
            let c = self.rows[r][pos].0;
            for k in self.pivot(r, c)? {
                let k = k as usize;
                heap.push(Reverse((self.rows[k].len(), k as u32, self.version[k])));
            }
        }
        Ok(())
    }
}

/// Sparse Gaussian elimination whose working rows are the shorter side of
/// `m` (rank and invariant factors are unchanged by transposing).
fn eliminate<T: Entry>(m: &SparseMatrix, mode: Mode) -> Result<Outcome<T>, Overflow> {
    let transposed;
    let m = if m.nrows() < m.ncols() {
        transposed = m.transpose();
        &transposed
    } else {
        m
    };
    let mut e = Eliminator::<T>::new(m, mode);
    e.singleton_phase();
    e.row_phase()?;
    let remainder = e
        .rows
        .into_iter()
        .zip(e.alive)
        .filter(|(row, a)| *a && !row.is_empty())
        .map(|(row, _)| row)
        .collect();
    Ok(Outcome {
        pivots: e.pivots,
        remainder,
    })
}

fn choose_pivot<T: Entry>(row: &[(u32, T)], col_rows: &[Vec<u32>], mode: Mode) -> Option<usize> {
    let units = row
        .iter()
        .enumerate()
        .filter(|(_, (_, v))| v.is_unit())
        .min_by_key(|(_, (c, _))| col_rows[*c as usize].len())
        .map(|(i, _)| i);
    match mode {
        Mode::Integer => units,
        Mode::Rational => units.or_else(|| {
            row.iter()
                .enumerate()
                .min_by_key(|(_, (c, v))| (v.magnitude_key(), col_rows[*c as usize].len()))
                .map(|(i, _)| i)
        }),
    }
}

/// `p·target − a·pivot`, content-reduced in rational mode. Also returns the
/// columns that are new in the target row.
#[allow(clippy::type_complexity)]
fn combine<T: Entry>(
    p: &T,
    target: &[(u32, T)],
    a: &T,
    pivot: &[(u32, T)],
    mode: Mode,
) -> Result<(Vec<(u32, T)>, Vec<u32>), Overflow> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let mut fresh = Vec::new();
    let (mut i, mut j) = (0, 0);
    let zero = T::from_i64(0);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(u32::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
        let (col, x, y) = if ci < cj {
            i += 1;
            (ci, &target[i - 1].1, &zero)
        } else if cj < ci {
            j += 1;
            fresh.push(cj);
            (cj, &zero, &pivot[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (ci, &target[i - 1].1, &pivot[j - 1].1)
        };
        let v = p
            .mul(x)
            .ok_or(Overflow)?
            .sub(&a.mul(y).ok_or(Overflow)?)
            .ok_or(Overflow)?;
        if !v.is_nil() {
            out.push((col, v));
        }
    }
    if mode == Mode::Rational && !out.is_empty() {
        let g = out.iter().fold(T::from_i64(0), |g, (_, v)| g.gcd(v));
        if !g.is_unit() {
            for e in &mut out {
                e.1 = e.1.div_exact(&g);
            }
        }
    }
    Ok((out, fresh))
}

fn with_fallback<R>(fast: impl FnOnce() -> Result<R, Overflow>, slow: impl FnOnce() -> R) -> R {
    fast().unwrap_or_else(|_| slow())
}

/// Rank over ℚ.
pub fn rank(m: &SparseMatrix) -> usize {
    split_blocks(m).par_iter().map(|b| block_rank(b.as_ref())).sum()
}

fn block_rank(m: &SparseMatrix) -> usize {
    with_fallback(
        || eliminate::<i64>(m, Mode::Rational).map(|o| o.pivots),
        || {
            eliminate::<BigInt>(m, Mode::Rational)
                .map(|o| o.pivots)
                .unwrap_or_else(|_| unreachable!())
        },
    )
}

/// Nonzero invariant factors `d_1 | d_2 | ⋯ | d_r` of the Smith normal form
/// over ℤ (all positive; `r` is the rank).
pub fn smith_normal_form(m: &SparseMatrix) -> Vec<BigInt> {
    let all: Vec<BigInt> = split_blocks(m)
        .par_iter()
        .flat_map_iter(|b| block_snf(b.as_ref()))
        .collect();
    merge_invariants(all)
}

fn block_snf(m: &SparseMatrix) -> Vec<BigInt> {
    let (pivots, remainder) = with_fallback(
        || eliminate::<i64>(m, Mode::Integer).map(|o| (o.pivots, to_big(o.remainder))),
        || {
            let o = eliminate::<BigInt>(m, Mode::Integer).unwrap_or_else(|_| unreachable!());
            (o.pivots, o.remainder)
        },
    );
    let mut out = vec![BigInt::one(); pivots];
    out.extend(dense_remainder_snf(remainder));
    out
}

/// Splits `m` into the diagonal blocks given by the connected components of
/// its row/column incidence graph (up to row and column permutation).
fn split_blocks(m: &SparseMatrix) -> Vec<Cow<'_, SparseMatrix>> {
    let mut parent: Vec<u32> = (0..m.nrows() as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for col in m.columns() {
        if let Some(&(first, _)) = col.first() {
            let a = find(&mut parent, first);
            for &(r, _) in &col[1..] {
                let b = find(&mut parent, r);
                if a != b {
                    parent[b as usize] = a;
                }
            }
        }
    }
    let mut block_of_root: HashMap<u32, usize> = HashMap::new();
    let mut cols: Vec<Vec<usize>> = Vec::new();
    for (j, col) in m.columns().iter().enumerate() {
        if let Some(&(first, _)) = col.first() {
            let root = find(&mut parent, first);
            let next = cols.len();
            let b = *block_of_root.entry(root).or_insert(next);
            if b == next {
                cols.push(Vec::new());
            }
            cols[b].push(j);
        }
    }
    if cols.len() <= 1 {
        return vec![Cow::Borrowed(m)];
    }
    cols.into_iter()
        .map(|js| {
            let mut rows: Vec<u32> = js.iter().flat_map(|&j| m.column(j).iter().map(|e| e.0)).collect();
            rows.sort_unstable();
            rows.dedup();
            let renumbered = js
                .iter()
                .map(|&j| {
                    m.column(j)
                        .iter()
                        .map(|&(r, v)| (rows.binary_search(&r).unwrap() as u32, v))
                        .collect()
                })
                .collect();
            Cow::Owned(SparseMatrix::from_columns(rows.len(), renumbered))
        })
        .collect()
}

/// Invariant factors (in divisibility order, units included) of the direct
/// sum of cyclic groups `⊕ ℤ/d` over the given `d ≥ 1`.
pub fn merge_invariants(all: Vec<BigInt>) -> Vec<BigInt> {
    let total = all.len();
    let mut by_prime: BTreeMap<BigInt, Vec<BigInt>> = BTreeMap::new();
    for d in &all {
        for (p, q) in prime_powers(d) {
            by_prime.entry(p).or_default().push(q);
        }
    }
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
    }
    let slots = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<BigInt> = (0..slots)
        .map(|slot| by_prime.values().filter_map(|pw| pw.get(slot)).product())
        .collect();
    out.reverse();
    let mut padded = vec![BigInt::one(); total - out.len()];
    padded.extend(out);
    padded
}

fn prime_powers(d: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let mut n = d.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            let mut q = BigInt::one();
            while n.is_multiple_of(&p) {
                n /= &p;
                q *= &p;
            }
            out.push((p.clone(), q));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n.clone(), n));
    }
    out
}

fn to_big<T: Entry>(rows: Vec<Vec<(u32, T)>>) -> Vec<Vec<(u32, BigInt)>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, v.into_big())).collect())
        .collect()
}

fn dense_remainder_snf(rows: Vec<Vec<(u32, BigInt)>>) -> Vec<BigInt> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<u32> = rows.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
    cols.sort_unstable();
    cols.dedup();
    let mut dense = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
    for (i, row) in rows.into_iter().enumerate() {
        for (c, v) in row {
            dense[i][cols.binary_search(&c).unwrap()] = v;
        }
    }
    smith_normal_form_dense(dense)
}

/// Smith normal form of a dense integer matrix; returns the nonzero
/// invariant factors in divisibility order.
pub fn smith_normal_form_dense(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs(&a, t, t..m, t..n) else {
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
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in tail[0][t..].iter_mut().zip(&head[t][t..]) {
                        *x -= &q * y;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a[t..].iter_mut() {
                        let y = row[t].clone();
                        row[j] -= &q * y;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                let (pi, pj) = min_abs_cross(&a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t][t..].iter_mut().zip(&tail[0][t..]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_abs(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let n = a[0].len();
    let cells = (t..a.len()).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
    cells
        .filter(|&(i, j)| !a[i][j].is_zero())
        .min_by_key(|&(i, j)| a[i][j].abs())
        .expect("pivot cross is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_snf() {
        let m = SparseMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(smith_normal_form(&m), big(&[2, 6, 12]));
        assert_eq!(rank(&m), 3);
        let d = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_normal_form(&d), big(&[1, 6]));
    }

    #[test]
    fn rank_deficient() {
        let m = SparseMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(smith_normal_form(&m), big(&[1, 2]));
        assert_eq!(rank(&SparseMatrix::zeros(3, 4)), 0);
        assert!(smith_normal_form(&SparseMatrix::zeros(0, 4)).is_empty());
    }

    #[test]
    fn block_diagonal_invariants_recombine() {
        let m = SparseMatrix::from_dense(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 0]]);
        assert_eq!(smith_normal_form(&m), big(&[1, 6]));
        assert_eq!(rank(&m), 2);
        assert_eq!(merge_invariants(big(&[1, 4, 2, 3, 1])), big(&[1, 1, 1, 2, 12]));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big_entry = i64::MAX / 3;
        let m = SparseMatrix::from_dense(&[vec![big_entry, 7], vec![5, big_entry - 1]]);
        let expected = {
            let d = BigInt::from(big_entry) * BigInt::from(big_entry - 1) - BigInt::from(35);
            d.abs()
        };
        let inv = smith_normal_form(&m);
        assert_eq!(inv.len(), 2);
        assert_eq!(&inv[0] * &inv[1], expected);
        assert_eq!(rank(&m), 2);
    }
}
