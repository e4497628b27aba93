use std::fmt;

use num_traits::{One, Zero};

use super::{SparseVec, Q};
use crate::error::{Error, Result};

/// Sparse matrix over ℚ acting on column vectors, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for (r, c, v) in self.triplets() {
            write!(f, " ({r},{c})={v}")?;
        }
        write!(f, " ]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        QMatrix { rows: n, cols: n, data: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn scalar(n: usize, a: &Q) -> Self {
        let mut m = Self::identity(n);
        m.scale(a);
        m
    }

    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, Q)>>(
        rows: usize,
        cols: usize,
        triplets: I,
    ) -> Result<Self> {
        let mut per_row: Vec<Vec<(usize, Q)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            per_row[r].push((c, v));
        }
        Ok(QMatrix { rows, cols, data: per_row.into_iter().map(SparseVec::from_pairs).collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .map(|r| SparseVec::from_dense(&r.iter().map(|&x| Q::from_integer(x.into())).collect::<Vec<_>>()))
            .collect();
        QMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.max_index().is_none_or(|i| i < cols)));
        QMatrix { rows: rows.len(), cols, data: rows }
    }

    /// Columns given as sparse vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut per_row: Vec<Vec<(usize, Q)>> = vec![Vec::new(); rows];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter() {
                per_row[*r].push((c, v.clone()));
            }
        }
        QMatrix { rows, cols: columns.len(), data: per_row.into_iter().map(SparseVec::from_pairs).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        let mut pairs = std::mem::take(&mut self.data[r]).into_pairs();
        pairs.retain(|(j, _)| *j != c);
        pairs.push((c, v));
        self.data[r] = SparseVec::from_pairs(pairs);
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SparseVec::is_zero)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> QMatrix {
        let mut per_row: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.triplets() {
            per_row[c].push((r, v.clone()));
        }
        QMatrix {
            rows: self.cols,
            cols: self.rows,
            data: per_row.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn column(&self, c: usize) -> SparseVec {
        SparseVec::from_pairs(
            self.data.iter().enumerate().filter_map(|(r, row)| {
                let v = row.get(c);
                (!v.is_zero()).then_some((r, v))
            }),
        )
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = SparseVec::new();
                for (k, a) in row.iter() {
                    acc.axpy(a, &other.data[*k]);
                }
                acc
            })
            .collect();
        QMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_pairs(self.data.iter().enumerate().filter_map(|(r, row)| {
            let x = row.dot(v);
            (!x.is_zero()).then_some((r, x))
        }))
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        let one = Q::one();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.axpy(&one, b);
                s
            })
            .collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        let mut neg = other.clone();
        neg.scale(&-Q::one());
        self.add(&neg)
    }

    pub fn scale(&mut self, a: &Q) {
        for row in &mut self.data {
            row.scale(a);
        }
    }

    pub fn scaled(&self, a: &Q) -> QMatrix {
        let mut m = self.clone();
        m.scale(a);
        m
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        let one = Q::one();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.axpy(&one, &b.shifted(self.cols));
                s
            })
            .collect();
        QMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &QMatrix) -> QMatrix {
        let mut data: Vec<SparseVec> = self.data.clone();
        data.extend(other.data.iter().map(|r| r.shifted(self.cols)));
        QMatrix { rows: self.rows + other.rows, cols: self.cols + other.cols, data }
    }

    /// Submatrix of selected rows and columns, in the given orders.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut col_pos = vec![usize::MAX; self.cols];
        for (new, &old) in cols.iter().enumerate() {
            col_pos[old] = new;
        }
        let data = rows
            .iter()
            .map(|&r| {
                SparseVec::from_pairs(
                    self.data[r]
                        .iter()
                        .filter(|(c, _)| col_pos[*c] != usize::MAX)
                        .map(|(c, v)| (col_pos[*c], v.clone())),
                )
            })
            .collect();
        QMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Whether every entry is `0`, `1` or `-1`.
    pub fn is_signed_01(&self) -> bool {
        let one = Q::one();
        self.triplets().all(|(_, _, v)| *v == one || *v == -one.clone())
    }

    pub fn rank(&self) -> usize {
        super::echelon::rank(self)
    }
}
