use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{ChainComplex, Differential};
use crate::linalg::SparseMatrix;
use crate::{Error, Result};

/// How the squares of a double complex are declared to commute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareConvention {
    /// `d_h d_v = d_v d_h`; the total differential is `d_v + (−1)^q d_h`.
    Commuting,
    /// `d_h d_v + d_v d_h = 0`; the total differential is `d_h + d_v`.
    Anticommuting,
}

/// A bounded double complex with components `C_{p,q}`, horizontal
/// differentials `C_{p,q} → C_{p−1,q}` and vertical ones `C_{p,q} → C_{p,q−1}`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    dims: BTreeMap<(i64, i64), usize>,
    dh: BTreeMap<(i64, i64), SparseMatrix>,
    dv: BTreeMap<(i64, i64), SparseMatrix>,
    convention: SquareConvention,
}

impl DoubleComplex {
    /// Missing differentials are zero. Differentials are keyed by their
    /// source bidegree.
    pub fn new(
        dims: BTreeMap<(i64, i64), usize>,
        dh: BTreeMap<(i64, i64), SparseMatrix>,
        dv: BTreeMap<(i64, i64), SparseMatrix>,
        convention: SquareConvention,
    ) -> Result<Self> {
        let dim = |pq: &(i64, i64)| dims.get(pq).copied().unwrap_or(0);
        for (&(p, q), m) in &dh {
            if m.shape() != (dim(&(p - 1, q)), dim(&(p, q))) {
                return Err(Error::invalid(format!(
                    "horizontal differential at ({p},{q}) has wrong shape"
                )));
            }
        }
        for (&(p, q), m) in &dv {
            if m.shape() != (dim(&(p, q - 1)), dim(&(p, q))) {
                return Err(Error::invalid(format!(
                    "vertical differential at ({p},{q}) has wrong shape"
                )));
            }
        }
        Ok(DoubleComplex {
            dims,
            dh,
            dv,
            convention,
        })
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    fn h(&self, p: i64, q: i64) -> SparseMatrix {
        self.dh
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(p - 1, q), self.dim(p, q)))
    }

    fn v(&self, p: i64, q: i64) -> SparseMatrix {
        self.dv
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(p, q - 1), self.dim(p, q)))
    }

    /// Checks `d_h² = 0`, `d_v² = 0` and the declared square relation.
    pub fn validate(&self) -> Result<()> {
        for &(p, q) in self.dims.keys() {
            let zero = |m: SparseMatrix, what: &str| {
                if m.is_zero() {
                    Ok(())
                } else {
                    Err(Error::violation(format!("{what} nonzero at ({p},{q})")))
                }
            };
            zero(self.h(p - 1, q).mul(&self.h(p, q))?, "d_h²")?;
            zero(self.v(p, q - 1).mul(&self.v(p, q))?, "d_v²")?;
            let hv = self.h(p, q - 1).mul(&self.v(p, q))?;
            let vh = self.v(p - 1, q).mul(&self.h(p, q))?;
            let rel = match self.convention {
                SquareConvention::Commuting => hv.add(&vh.neg())?,
                SquareConvention::Anticommuting => hv.add(&vh)?,
            };
            zero(rel, "square relation")?;
        }
        Ok(())
    }

    /// Total complex `Tot_n = ⊕_{p+q=n} C_{p,q}`, summands ordered by `p`.
    pub fn total_complex(&self) -> Result<ChainComplex> {
        self.validate()?;
        let nonzero: Vec<(i64, i64)> = self
            .dims
            .iter()
            .filter(|(_, d)| **d > 0)
            .map(|(pq, _)| *pq)
            .collect();
        if nonzero.is_empty() {
            return ChainComplex::new(0, alloc::vec![0], Vec::new());
        }
        let n_min = nonzero.iter().map(|(p, q)| p + q).min().unwrap();
        let n_max = nonzero.iter().map(|(p, q)| p + q).max().unwrap();
        let summands = |n: i64| -> Vec<(i64, i64)> {
            nonzero
                .iter()
                .copied()
                .filter(|(p, q)| p + q == n)
                .collect()
        };
        let offsets = |n: i64| -> BTreeMap<(i64, i64), usize> {
            let mut off = 0;
            summands(n)
                .into_iter()
                .map(|pq| {
                    let o = off;
                    off += self.dim(pq.0, pq.1);
                    (pq, o)
                })
                .collect()
        };
        let total_dim = |n: i64| {
            summands(n)
                .iter()
                .map(|(p, q)| self.dim(*p, *q))
                .sum::<usize>()
        };
        let dims: Vec<usize> = (n_min..=n_max).map(total_dim).collect();
        let mut diffs = Vec::new();
        for n in n_min + 1..=n_max {
            let src = offsets(n);
            let tgt = offsets(n - 1);
            let mut triplets = Vec::new();
            for (&(p, q), &so) in &src {
                let sign_h = match self.convention {
                    SquareConvention::Commuting if q.rem_euclid(2) == 1 => -1,
                    _ => 1,
                };
                if let Some(&to) = tgt.get(&(p - 1, q)) {
                    for (i, j, v) in self.h(p, q).entries() {
                        let v = if sign_h < 0 { -v.clone() } else { v.clone() };
                        triplets.push((to + i, so + j, v));
                    }
                }
                if let Some(&to) = tgt.get(&(p, q - 1)) {
                    for (i, j, v) in self.v(p, q).entries() {
                        triplets.push((to + i, so + j, v.clone()));
                    }
                }
            }
            let m = SparseMatrix::from_triplets(total_dim(n - 1), total_dim(n), triplets);
            diffs.push(Differential::from_sparse(m));
        }
        ChainComplex::new(n_min, dims, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn single_row_is_its_row() {
        let dims = [((0, 0), 2), ((1, 0), 2)].into_iter().collect();
        let dh = [((1, 0), m(&[&[1, 1], &[1, 1]]))].into_iter().collect();
        let dc =
            DoubleComplex::new(dims, dh, BTreeMap::new(), SquareConvention::Anticommuting).unwrap();
        let t = dc.total_complex().unwrap();
        let h = t.homology_dims().unwrap();
        assert_eq!((h[&0].dim, h[&1].dim), (1, 1));
    }

    #[test]
    fn vertical_identity_is_acyclic() {
        let dims = [((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1)]
            .into_iter()
            .collect();
        let dh = [((1, 0), m(&[&[1]])), ((1, 1), m(&[&[1]]))]
            .into_iter()
            .collect();
        let dv = [((0, 1), m(&[&[1]])), ((1, 1), m(&[&[1]]))]
            .into_iter()
            .collect();
        let dc = DoubleComplex::new(dims, dh, dv, SquareConvention::Commuting).unwrap();
        let t = dc.total_complex().unwrap();
        assert!(t.validate().is_ok());
        assert!(t.homology_dims().unwrap().values().all(|d| d.dim == 0));
    }

    #[test]
    fn wrong_convention_is_rejected() {
        let dims = [((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1)]
            .into_iter()
            .collect();
        let dh = [((1, 0), m(&[&[1]])), ((1, 1), m(&[&[1]]))]
            .into_iter()
            .collect();
        let dv = [((0, 1), m(&[&[1]])), ((1, 1), m(&[&[1]]))]
            .into_iter()
            .collect();
        let dc = DoubleComplex::new(dims, dh, dv, SquareConvention::Anticommuting).unwrap();
        assert!(dc.validate().is_err());
    }
}
