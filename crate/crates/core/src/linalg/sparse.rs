use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::{Rational, Vector};
use crate::{Error, Result};

/// Column-compressed sparse matrix over the rationals.
///
/// Each column is a list of `(row, value)` pairs sorted by row with no stored
/// zeros; all indices are within bounds.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (j, col) in m.columns.iter_mut().enumerate() {
            col.push((j, Rational::from_integer(1.into())));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed
    /// and zeros dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut columns: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) out of bounds");
            columns[c].push((r, v));
        }
        for col in &mut columns {
            normalize_column(col);
        }
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    /// Builds a matrix from sparse columns (entries in any order).
    pub fn from_columns(rows: usize, mut columns: Vec<Vec<(usize, Rational)>>) -> Self {
        for col in &mut columns {
            assert!(
                col.iter().all(|(r, _)| *r < rows),
                "column entry out of bounds"
            );
            normalize_column(col);
        }
        SparseMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let triplets = rows.iter().enumerate().flat_map(|(i, row)| {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(j, v)| (i, j, v.clone()))
        });
        Self::from_triplets(nrows, ncols, triplets)
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

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, j: usize) -> &[(usize, Rational)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<(usize, Rational)>] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(pos) => self.columns[c][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Iterates stored entries as `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        let triplets = self.entries().map(|(i, j, v)| (j, i, v.clone()));
        Self::from_triplets(self.cols, self.rows, triplets)
    }

    pub fn column_dense(&self, j: usize) -> Vector {
        let mut out = vec![Rational::zero(); self.rows];
        for (i, v) in &self.columns[j] {
            out[*i] = v.clone();
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length does not match columns");
        let mut out = vec![Rational::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, a) in col {
                out[*i] += a * &v[j];
            }
        }
        out
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut columns = Vec::with_capacity(other.cols);
        let mut acc: Vec<Rational> = vec![Rational::zero(); self.rows];
        let mut touched: Vec<usize> = Vec::new();
        for col in &other.columns {
            for (k, b) in col {
                for (i, a) in &self.columns[*k] {
                    if acc[*i].is_zero() {
                        touched.push(*i);
                    }
                    acc[*i] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut out = Vec::with_capacity(touched.len());
            for &i in &touched {
                let v = core::mem::replace(&mut acc[i], Rational::zero());
                if !v.is_zero() {
                    out.push((i, v));
                }
            }
            touched.clear();
            columns.push(out);
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::invalid("matrix sum of different shapes"));
        }
        let triplets = self
            .entries()
            .chain(other.entries())
            .map(|(i, j, v)| (i, j, v.clone()));
        Ok(Self::from_triplets(self.rows, self.cols, triplets))
    }

    pub fn scale(&self, s: &Rational) -> SparseMatrix {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(i, v)| (*i, v * s)).collect())
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    pub fn neg(&self) -> SparseMatrix {
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(i, v)| (*i, -v)).collect())
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    /// Assembles a block matrix. `blocks[r][c]` is `None` for a zero block;
    /// `row_dims` and `col_dims` fix block shapes.
    pub fn block(
        row_dims: &[usize],
        col_dims: &[usize],
        blocks: &[Vec<Option<&SparseMatrix>>],
    ) -> Result<SparseMatrix> {
        let rows: usize = row_dims.iter().sum();
        let cols: usize = col_dims.iter().sum();
        let mut triplets = Vec::new();
        let mut r0 = 0;
        for (bi, &rd) in row_dims.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cd) in col_dims.iter().enumerate() {
                if let Some(Some(m)) = blocks.get(bi).and_then(|row| row.get(bj)) {
                    if m.shape() != (rd, cd) {
                        return Err(Error::invalid("block shape mismatch"));
                    }
                    triplets.extend(m.entries().map(|(i, j, v)| (r0 + i, c0 + j, v.clone())));
                }
                c0 += cd;
            }
            r0 += rd;
        }
        Ok(Self::from_triplets(rows, cols, triplets))
    }

    /// Rows `rows` × columns `cols` submatrix (indices are taken in the order
    /// given).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut row_pos = vec![usize::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            row_pos[r] = k;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                self.columns[c]
                    .iter()
                    .filter(|(i, _)| row_pos[*i] != usize::MAX)
                    .map(|(i, v)| (row_pos[*i], v.clone()))
                    .collect()
            })
            .collect();
        Self::from_columns(rows.len(), columns)
    }

    /// First stored entry where `self` and `other` differ, if any.
    pub fn first_difference(&self, other: &SparseMatrix) -> Option<(usize, usize, Rational)> {
        if self.shape() != other.shape() {
            return Some((self.rows, self.cols, Rational::zero()));
        }
        let diff = self.add(&other.neg()).ok()?;
        let first = diff.entries().next().map(|(i, j, v)| (i, j, v.clone()));
        first
    }

    pub fn rank(&self) -> usize {
        super::rank(self)
    }
}

fn normalize_column(col: &mut Vec<(usize, Rational)>) {
    col.sort_by_key(|(r, _)| *r);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(col.len());
    for (r, v) in col.drain(..) {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    *col = out;
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for (i, j, v) in self.entries() {
            write!(f, " ({i},{j})={v}")?;
        }
        write!(f, " ]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            [
                (0, 0, rat(1)),
                (0, 0, rat(-1)),
                (1, 1, rat(3)),
                (1, 1, rat(2)),
            ],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), rat(5));
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![rat(1), rat(2)], vec![rat(0), rat(1)]]);
        let b = a.transpose();
        let p = a.mul(&b).unwrap();
        assert_eq!(
            p.to_dense(),
            vec![vec![rat(5), rat(2)], vec![rat(2), rat(1)]]
        );
    }
}
