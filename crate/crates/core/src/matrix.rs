//! Column-compressed sparse integer matrices.

use crate::scalar::{convert, Coefficient};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    /// Per column, `(row, value)` sorted by row, no zeros.
    data: Vec<Vec<(usize, T)>>,
}

impl<T: Coefficient> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); cols],
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, T)>>(rows: usize, cols: usize, triplets: I) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in triplets {
            m.add_to(r, c, v);
        }
        m
    }

    pub fn from_dense(dense: &[Vec<T>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        Self::from_triplets(
            rows,
            cols,
            dense
                .iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, T)] {
        &self.data[c]
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: T) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let col = &mut self.data[c];
        match col.binary_search_by_key(&r, |(row, _)| *row) {
            Ok(i) => {
                let sum = col[i].1.clone() + v;
                if sum.is_zero() {
                    col.remove(i);
                } else {
                    col[i].1 = sum;
                }
            }
            Err(i) => col.insert(i, (r, v)),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        match self.data[c].binary_search_by_key(&r, |(row, _)| *row) {
            Ok(i) => self.data[c][i].1.clone(),
            Err(_) => T::zero(),
        }
    }

    /// Nonzero entries in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.rows];
        for (r, c, v) in self.triplets() {
            data[r].push((c, v.clone()));
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = SparseMatrix::zeros(self.rows, rhs.cols);
        for (c, col) in rhs.data.iter().enumerate() {
            for (k, b) in col {
                for (r, a) in &self.data[*k] {
                    out.add_to(*r, c, a.clone() * b.clone());
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch in sum");
        let mut out = self.clone();
        for (r, c, v) in rhs.triplets() {
            out.add_to(r, c, v.clone());
        }
        out
    }

    /// Applies `vector` (indexed by column) and returns the image (by row).
    pub fn apply(&self, vector: &[T]) -> Vec<T> {
        assert_eq!(vector.len(), self.cols);
        let mut out = vec![T::zero(); self.rows];
        for (c, x) in vector.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, v) in &self.data[c] {
                out[*r] = out[*r].clone() + v.clone() * x.clone();
            }
        }
        out
    }

    /// Reorders rows and columns: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.triplets().map(|(r, c, v)| (row_perm[r], col_perm[c], v.clone())),
        )
    }

    /// Coefficient type conversion; `None` if some entry does not fit.
    pub fn try_convert<U: Coefficient>(&self) -> Option<SparseMatrix<U>> {
        let data = self
            .data
            .iter()
            .map(|col| col.iter().map(|(r, v)| convert(v).map(|u| (*r, u))).collect())
            .collect::<Option<Vec<_>>>()?;
        Some(SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::<i64>::from_dense(&[vec![1, 2], vec![0, -1]]);
        let b = SparseMatrix::<i64>::from_dense(&[vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(a.mul(&b).to_dense(), vec![vec![3, 2, 1], vec![-1, -1, 0]]);
        assert_eq!(b.transpose().to_dense(), vec![vec![1, 1], vec![0, 1], vec![1, 0]]);
        assert_eq!(b.transpose().transpose(), b);
    }

    #[test]
    fn duplicates_sum_and_zeros_vanish() {
        let m = SparseMatrix::<i64>::from_triplets(2, 2, [(0, 0, 1), (0, 0, -1), (1, 1, 2), (1, 1, 3)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), 5);
        assert_eq!(m.get(0, 0), 0);
    }

    #[test]
    fn conversion_detects_overflow() {
        let m = SparseMatrix::<i128>::from_triplets(1, 1, [(0, 0, i128::from(i64::MAX) * 4)]);
        assert!(m.try_convert::<i64>().is_none());
        assert!(m.try_convert::<num_bigint::BigInt>().is_some());
    }
}
