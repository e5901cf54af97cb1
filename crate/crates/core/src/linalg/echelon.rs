use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{Rational, SparseMatrix, Vector};
use crate::{Error, Result};

/// Sparse rational vector keyed by coordinate index.
pub type SparseVec = BTreeMap<usize, Rational>;

fn axpy(target: &mut SparseVec, coef: &Rational, x: &SparseVec) {
    for (i, v) in x {
        let entry = target.entry(*i).or_insert_with(Rational::zero);
        *entry -= coef * v;
        if entry.is_zero() {
            target.remove(i);
        }
    }
}

/// Incremental echelon basis of a subspace of `Q^dim`.
///
/// Every stored vector has its largest nonzero index (its *pivot*) distinct
/// from all others and normalised to 1. Optionally tracks, for each stored
/// vector, its expression as a combination of the vectors that were offered
/// to [`Echelon::insert`].
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    basis: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    pivot: BTreeMap<usize, usize>,
    offered: usize,
    track: bool,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Self::with_tracking(dim, false)
    }

    pub fn with_tracking(dim: usize, track: bool) -> Self {
        Echelon {
            dim,
            basis: Vec::new(),
            combos: Vec::new(),
            pivot: BTreeMap::new(),
            offered: 0,
            track,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the span.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn offered(&self) -> usize {
        self.offered
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    /// Reduces by pivots until the leading index is not a pivot. Returns the
    /// remainder and, when tracking, minus the combination of offered vectors
    /// that was subtracted.
    fn reduce_low(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut combo = SparseVec::new();
        while let Some((&low, coef)) = v.last_key_value() {
            let Some(&idx) = self.pivot.get(&low) else {
                break;
            };
            let coef = coef.clone();
            axpy(&mut v, &coef, &self.basis[idx]);
            if self.track {
                axpy(&mut combo, &coef, &self.combos[idx]);
            }
        }
        (v, combo)
    }

    /// Fully reduced remainder of `v` modulo the span (canonical
    /// representative of the coset) together with the subtracted
    /// combination as in [`Self::reduce_low`].
    pub fn reduce_full(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut combo = SparseVec::new();
        let mut cursor: Option<usize> = None;
        loop {
            let next = match cursor {
                None => v.keys().next_back().copied(),
                Some(c) => v.range(..c).next_back().map(|(k, _)| *k),
            };
            let Some(k) = next else { break };
            if let Some(&idx) = self.pivot.get(&k) {
                let coef = v[&k].clone();
                axpy(&mut v, &coef, &self.basis[idx]);
                if self.track {
                    axpy(&mut combo, &coef, &self.combos[idx]);
                }
            }
            cursor = Some(k);
        }
        (v, combo)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_low(v.clone()).0.is_empty()
    }

    /// Offers `v`; returns `true` if it enlarged the span. When the vector is
    /// dependent and tracking is on, the dependency (a kernel vector of the
    /// offered family) is returned through [`Self::insert_tracked`].
    pub fn insert(&mut self, v: SparseVec) -> bool {
        self.insert_tracked(v).is_ok()
    }

    /// Like [`Self::insert`], but on dependence returns the relation
    /// `e_new − Σ c_i e_i` among offered vectors (empty when not tracking).
    pub fn insert_tracked(&mut self, v: SparseVec) -> core::result::Result<(), SparseVec> {
        let me = self.offered;
        self.offered += 1;
        let (mut rem, combo) = self.reduce_low(v);
        let mut relation = SparseVec::new();
        if self.track {
            relation.insert(me, Rational::one());
            for (i, c) in combo {
                // combo holds −Σ c_i e_i
                relation.insert(i, c);
            }
        }
        if rem.is_empty() {
            return Err(relation);
        }
        let (&low, lead) = rem.last_key_value().expect("nonempty");
        let inv = lead.recip();
        if !inv.is_one() {
            for x in rem.values_mut() {
                *x *= &inv;
            }
            for x in relation.values_mut() {
                *x *= &inv;
            }
        }
        self.pivot.insert(low, self.basis.len());
        self.basis.push(rem);
        self.combos.push(relation);
        Ok(())
    }

    /// Coefficients `x` with `v = Σ x_i · offered_i`, if `v` is in the span.
    /// Requires tracking.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "express requires a tracking echelon basis");
        let (rem, combo) = self.reduce_low(v.clone());
        if !rem.is_empty() {
            return None;
        }
        // v − (−combo)... reduce_low subtracted Σ coef·basis_idx and recorded
        // −Σ coef·combos_idx, so v = −combo in terms of offered vectors.
        Some(combo.into_iter().map(|(i, c)| (i, -c)).collect())
    }
}

pub fn to_sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(v: &SparseVec, dim: usize) -> Vector {
    let mut out = vec![Rational::zero(); dim];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

fn column_sparse(m: &SparseMatrix, j: usize) -> SparseVec {
    m.column(j).iter().cloned().collect()
}

/// Rank and a basis of the right kernel of `m`.
///
/// Kernel vectors satisfy `m·v = 0` exactly and are linearly independent.
pub fn rank_and_kernel(m: &SparseMatrix) -> (usize, Vec<Vector>) {
    let mut ech = Echelon::with_tracking(m.rows(), true);
    let mut kernel = Vec::new();
    for j in 0..m.cols() {
        if let Err(rel) = ech.insert_tracked(column_sparse(m, j)) {
            kernel.push(to_dense(&rel, m.cols()));
        }
    }
    (ech.rank(), kernel)
}

/// Some exact solution of `m·x = b`, or `None` when the system is
/// inconsistent.
pub fn solve_linear(m: &SparseMatrix, b: &[Rational]) -> Result<Option<Vector>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let mut ech = Echelon::with_tracking(m.rows(), true);
    for j in 0..m.cols() {
        let _ = ech.insert_tracked(column_sparse(m, j));
    }
    Ok(ech.express(&to_sparse(b)).map(|x| to_dense(&x, m.cols())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_zero_vec, rat};

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let (r, k) = rank_and_kernel(&SparseMatrix::identity(3));
        assert_eq!(r, 3);
        assert!(k.is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let (r, k) = rank_and_kernel(&SparseMatrix::zeros(2, 2));
        assert_eq!(r, 0);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn proportional_rows() {
        let m = dense(&[&[1, 2], &[2, 4]]);
        let (r, k) = rank_and_kernel(&m);
        assert_eq!(r, 1);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&m.mul_vec(&k[0])));
        // spanned by (2, -1)
        assert_eq!(&k[0][0] * rat(-1), &k[0][1] * rat(2));
    }

    #[test]
    fn solve_identity_and_underdetermined() {
        let b = vec![rat(3), rat(-7)];
        assert_eq!(
            solve_linear(&SparseMatrix::identity(2), &b)
                .unwrap()
                .unwrap(),
            b
        );
        let z = solve_linear(&SparseMatrix::zeros(2, 2), &[rat(0), rat(0)])
            .unwrap()
            .unwrap();
        assert!(is_zero_vec(&z));
        let m = dense(&[&[1, 1]]);
        let x = solve_linear(&m, &[rat(1)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), vec![rat(1)]);
        assert!(solve_linear(&dense(&[&[1, 1], &[1, 1]]), &[rat(1), rat(2)])
            .unwrap()
            .is_none());
        assert!(solve_linear(&m, &[rat(1), rat(1)]).is_err());
    }
}
