use std::fmt;

/// Sparse integer matrix in compressed-column form.
///
/// Columns are indexed by the domain basis, rows by the codomain basis, so a
/// boundary map `C_n → C_{n-1}` has one column per `n`-chain generator.
/// Entries are small (structure constants of chain maps); arithmetic panics
/// on `i64` overflow rather than wrapping.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            cols: (0..n).map(|i| vec![(i as u32, 1)]).collect(),
        }
    }

    /// Builds a matrix from unsorted columns; duplicate rows are summed and
    /// zeros dropped.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(u32, i64)>>) -> Self {
        let cols = cols.into_iter().map(normalize).collect::<Vec<_>>();
        debug_assert!(cols.iter().flatten().all(|&(r, _)| (r as usize) < nrows));
        SparseMatrix { nrows, cols }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|j| {
                (0..nrows)
                    .filter(|&i| rows[i][j] != 0)
                    .map(|i| (i as u32, rows[i][j]))
                    .collect()
            })
            .collect();
        SparseMatrix { nrows, cols }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.ncols()]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                out[i as usize][j] = v;
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        let col = &self.cols[j];
        col.binary_search_by_key(&(i as u32), |&(r, _)| r)
            .map_or(0, |p| col[p].1)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                cols[i as usize].push((j as u32, v));
            }
        }
        SparseMatrix {
            nrows: self.ncols(),
            cols,
        }
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), rhs.nrows, "dimension mismatch in product");
        let cols = rhs
            .cols
            .iter()
            .map(|rcol| {
                let mut acc: Vec<(u32, i64)> = Vec::new();
                for &(k, b) in rcol {
                    for &(i, a) in &self.cols[k as usize] {
                        acc.push((i, a.checked_mul(b).expect("matrix entry overflow")));
                    }
                }
                normalize(acc)
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            cols,
        }
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.combine(rhs, 1)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.combine(rhs, -1)
    }

    pub fn scale(&self, c: i64) -> SparseMatrix {
        SparseMatrix::from_columns(
            self.nrows,
            self.cols
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|&(i, v)| (i, v.checked_mul(c).expect("matrix entry overflow")))
                        .collect()
                })
                .collect(),
        )
    }

    fn combine(&self, rhs: &SparseMatrix, sign: i64) -> SparseMatrix {
        assert_eq!(
            (self.nrows, self.ncols()),
            (rhs.nrows, rhs.ncols()),
            "dimension mismatch in sum"
        );
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| {
                let mut acc = a.clone();
                acc.extend(b.iter().map(|&(i, v)| (i, v * sign)));
                normalize(acc)
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            cols,
        }
    }
}

fn normalize(mut col: Vec<(u32, i64)>) -> Vec<(u32, i64)> {
    col.sort_unstable_by_key(|&(r, _)| r);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 = last.1.checked_add(v).expect("matrix entry overflow"),
            _ => out.push((r, v)),
        }
    }
    out.retain(|&(_, v)| v != 0);
    out
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, nnz={})", self.nrows, self.ncols(), self.nnz())?;
        if self.nrows * self.ncols() <= 64 {
            for row in self.to_dense() {
                write!(f, "\n  {row:?}")?;
            }
        }
        Ok(())
    }
}

/// Assembles a matrix out of rectangular blocks placed at row/column
/// offsets.
pub struct BlockBuilder {
    nrows: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

impl BlockBuilder {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        BlockBuilder {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn place(&mut self, row_offset: usize, col_offset: usize, block: &SparseMatrix) {
        assert!(row_offset + block.nrows() <= self.nrows && col_offset + block.ncols() <= self.cols.len());
        for (j, col) in block.columns().iter().enumerate() {
            let target = &mut self.cols[col_offset + j];
            target.extend(col.iter().map(|&(i, v)| (i + row_offset as u32, v)));
        }
    }

    pub fn build(self) -> SparseMatrix {
        SparseMatrix::from_columns(self.nrows, self.cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![3, 4]]);
        let b = SparseMatrix::from_dense(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b).to_dense(), vec![vec![2, 1], vec![4, 3]]);
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 3], vec![2, 4]]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.get(1, 0), 3);
    }

    #[test]
    fn blocks() {
        let mut bb = BlockBuilder::new(3, 3);
        bb.place(1, 1, &SparseMatrix::identity(2));
        bb.place(0, 0, &SparseMatrix::from_dense(&[vec![5]]));
        assert_eq!(bb.build().to_dense(), vec![vec![5, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }
}
