//! The reduced `(b, B)` complex of a finite-dimensional algebra.
//!
//! `CC_0 = A` and `CC_k = Ã ⊗ A^{⊗k}` for `k ≥ 1`, where the first leg lives
//! in `Ã = A ⊕ Q·1̃`. Basis tensors are indexed lexicographically with the
//! first leg ordered as (basis of `A`, then `1̃`), so the unit-led tensors
//! form the last block of every `CC_k`. Degree 0 only has the `A` block.

mod homology;
mod trace;

pub use homology::{
    bar_acyclicity_probe, cyclic_complex, cyclic_homology, hochschild_complex, hochschild_homology,
    is_bu_boundary, periodic_cyclic_homology, BarReport, HpReport, HpRun, DEFAULT_CAP,
};
pub use trace::{
    generalized_trace, inclusion_map, inclusion_matrix, trace_chain_map, trace_matrix,
};

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Mul, Neg};

use num_traits::Zero;
use rand::Rng;

use crate::algebra::FDAlgebra;
use crate::complex::Differential;
use crate::linalg::{rat, IntColumns, Rational, SparseMatrix};
use crate::{Error, Result};

/// Indexing of the basis tensors of `CC_k` over an algebra of dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorBasis {
    pub d: usize,
}

impl TensorBasis {
    pub fn new(d: usize) -> Self {
        TensorBasis { d }
    }

    /// Index of the adjoined unit in the first leg.
    pub fn unit(&self) -> usize {
        self.d
    }

    /// `dim CC_k`; `None` on overflow.
    pub fn len(&self, k: usize) -> Option<usize> {
        let tail = self.d.checked_pow(k as u32)?;
        if k == 0 {
            Some(self.d)
        } else {
            tail.checked_mul(self.d + 1)
        }
    }

    pub fn encode(&self, legs: &[usize]) -> usize {
        legs.iter().fold(0, |acc, l| acc * self.d + l)
    }

    pub fn decode(&self, mut idx: usize, k: usize, legs: &mut Vec<usize>) {
        legs.clear();
        legs.resize(k + 1, 0);
        for pos in (1..=k).rev() {
            legs[pos] = idx % self.d;
            idx /= self.d;
        }
        legs[0] = idx;
    }
}

/// A chain in `CC_k`: sparse coefficients on basis tensors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorChain {
    pub degree: usize,
    pub terms: BTreeMap<usize, Rational>,
}

impl TensorChain {
    pub fn zero(degree: usize) -> Self {
        TensorChain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, idx: usize, c: Rational) {
        let e = self.terms.entry(idx).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn add(&self, other: &TensorChain) -> Result<TensorChain> {
        if self.degree != other.degree {
            return Err(Error::invalid("adding chains of different degrees"));
        }
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> TensorChain {
        let mut out = TensorChain::zero(self.degree);
        if !s.is_zero() {
            out.terms = self.terms.iter().map(|(i, c)| (*i, c * s)).collect();
        }
        out
    }

    /// A chain of `terms` random basis tensors with small integer
    /// coefficients in `[-3, 3]`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        d: usize,
        degree: usize,
        terms: usize,
    ) -> TensorChain {
        let basis = TensorBasis::new(d);
        let n = basis.len(degree).unwrap_or(0);
        let mut out = TensorChain::zero(degree);
        if n == 0 {
            return out;
        }
        for _ in 0..terms {
            let idx = rng.gen_range(0..n);
            out.add_term(idx, rat(rng.gen_range(-3..=3)));
        }
        out
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); len];
        for (i, c) in &self.terms {
            v[*i] = c.clone();
        }
        v
    }

    pub fn from_dense(degree: usize, v: &[Rational]) -> TensorChain {
        TensorChain {
            degree,
            terms: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }
}

/// Coefficient type for the operator kernels.
pub(crate) trait Coef: Clone + Neg<Output = Self> + Mul<Output = Self> {
    fn one() -> Self;
}

impl Coef for i64 {
    fn one() -> Self {
        1
    }
}

impl Coef for Rational {
    fn one() -> Self {
        rat(1)
    }
}

type Table<T> = Vec<Vec<Vec<(usize, T)>>>;

fn signed<T: Coef>(c: T, negative: bool) -> T {
    if negative {
        -c
    } else {
        c
    }
}

/// `b` on one basis tensor of degree `k ≥ 1`.
pub(crate) fn b_basis<T: Coef>(
    tbl: &Table<T>,
    d: usize,
    legs: &[usize],
    scratch: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], T),
) {
    let k = legs.len() - 1;
    if k == 0 {
        return;
    }
    for i in 0..k {
        let neg = i % 2 == 1;
        if i == 0 && legs[0] == d {
            emit(&legs[1..], T::one());
            continue;
        }
        for (m, c) in &tbl[legs[i]][legs[i + 1]] {
            scratch.clear();
            scratch.extend_from_slice(&legs[..i]);
            scratch.push(*m);
            scratch.extend_from_slice(&legs[i + 2..]);
            emit(scratch, signed(c.clone(), neg));
        }
    }
    let neg = k % 2 == 1;
    if legs[0] == d {
        scratch.clear();
        scratch.push(legs[k]);
        scratch.extend_from_slice(&legs[1..k]);
        emit(scratch, signed(T::one(), neg));
    } else {
        for (m, c) in &tbl[legs[k]][legs[0]] {
            scratch.clear();
            scratch.push(*m);
            scratch.extend_from_slice(&legs[1..k]);
            emit(scratch, signed(c.clone(), neg));
        }
    }
}

/// Connes' `B` on one basis tensor: zero on unit-led tensors, otherwise
/// `Σ_i (−1)^{ik} 1̃ ⊗ a_i ⊗ … ⊗ a_k ⊗ a_0 ⊗ … ⊗ a_{i−1}`.
pub(crate) fn big_b_basis<T: Coef>(
    d: usize,
    legs: &[usize],
    scratch: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], T),
) {
    let k = legs.len() - 1;
    if legs[0] == d {
        return;
    }
    for i in 0..=k {
        scratch.clear();
        scratch.push(d);
        scratch.extend_from_slice(&legs[i..]);
        scratch.extend_from_slice(&legs[..i]);
        emit(scratch, signed(T::one(), (i * k) % 2 == 1));
    }
}

/// `b′` on a bar tensor `a_0 ⊗ … ⊗ a_k` (all legs in `A`).
pub(crate) fn b_prime_basis<T: Coef>(
    tbl: &Table<T>,
    legs: &[usize],
    scratch: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], T),
) {
    let k = legs.len() - 1;
    for i in 0..k {
        for (m, c) in &tbl[legs[i]][legs[i + 1]] {
            scratch.clear();
            scratch.extend_from_slice(&legs[..i]);
            scratch.push(*m);
            scratch.extend_from_slice(&legs[i + 2..]);
            emit(scratch, signed(c.clone(), i % 2 == 1));
        }
    }
}

/// Which operator a matrix represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    /// `b : CC_k → CC_{k−1}`
    B,
    /// `B : CC_k → CC_{k+1}`
    Connes,
}

/// Operator kernels bound to one algebra.
pub struct CyclicOps<'a> {
    pub algebra: &'a FDAlgebra,
    basis: TensorBasis,
    rat_table: Table<Rational>,
    int_table: Option<Table<i64>>,
    cap: usize,
}

impl<'a> CyclicOps<'a> {
    pub fn new(algebra: &'a FDAlgebra) -> Self {
        Self::with_cap(algebra, DEFAULT_CAP)
    }

    pub fn with_cap(algebra: &'a FDAlgebra, cap: usize) -> Self {
        let d = algebra.dim();
        let rat_table = (0..d)
            .map(|i| (0..d).map(|j| algebra.product(i, j).clone()).collect())
            .collect();
        CyclicOps {
            algebra,
            basis: TensorBasis::new(d),
            rat_table,
            int_table: algebra.integer_table(),
            cap,
        }
    }

    pub fn basis(&self) -> TensorBasis {
        self.basis
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `dim CC_k`, refusing anything above the resource cap.
    pub fn dim(&self, k: usize) -> Result<usize> {
        match self.basis.len(k) {
            Some(n) if n <= self.cap => Ok(n),
            n => Err(Error::ResourceLimit {
                what: "tensor space dimension".into(),
                requested: n.unwrap_or(usize::MAX),
                cap: self.cap,
            }),
        }
    }

    fn apply_rational(&self, op: Op, c: &TensorChain) -> TensorChain {
        let k = c.degree;
        let out_deg = match op {
            Op::B => k.saturating_sub(1),
            Op::Connes => k + 1,
        };
        let mut out = TensorChain::zero(out_deg);
        if op == Op::B && k == 0 {
            return out;
        }
        let d = self.basis.d;
        let mut legs = Vec::new();
        let mut scratch = Vec::new();
        for (idx, coef) in &c.terms {
            self.basis.decode(*idx, k, &mut legs);
            let mut emit = |l: &[usize], v: Rational| {
                out.add_term(self.basis.encode(l), v * coef.clone());
            };
            match op {
                Op::B => b_basis(&self.rat_table, d, &legs, &mut scratch, &mut emit),
                Op::Connes => big_b_basis(d, &legs, &mut scratch, &mut emit),
            }
        }
        out
    }

    /// Hochschild boundary `b`.
    pub fn apply_b(&self, c: &TensorChain) -> TensorChain {
        self.apply_rational(Op::B, c)
    }

    /// Connes' operator `B`.
    #[allow(non_snake_case)]
    pub fn apply_B(&self, c: &TensorChain) -> TensorChain {
        self.apply_rational(Op::Connes, c)
    }

    /// The bar differential `b′` on `A^{⊗(k+1)}` (chains indexed with every
    /// leg in `A`).
    pub fn apply_b_prime(&self, c: &TensorChain) -> TensorChain {
        let k = c.degree;
        let mut out = TensorChain::zero(k.saturating_sub(1));
        if k == 0 {
            return out;
        }
        let d = self.basis.d;
        let mut legs = Vec::new();
        let mut scratch = Vec::new();
        for (idx, coef) in &c.terms {
            decode_bar(d, *idx, k, &mut legs);
            b_prime_basis(
                &self.rat_table,
                &legs,
                &mut scratch,
                &mut |l: &[usize], v: Rational| {
                    out.add_term(encode_bar(d, l), v * coef.clone());
                },
            );
        }
        out
    }

    /// Matrix of `op` out of `CC_k`, integral when the structure constants
    /// are.
    pub(crate) fn matrix(&self, op: Op, k: usize) -> Result<Differential> {
        let src = self.dim(k)?;
        let tgt = match op {
            Op::B if k == 0 => return Ok(Differential::zero(0, src)),
            Op::B => self.dim(k - 1)?,
            Op::Connes => self.dim(k + 1)?,
        };
        let d = self.basis.d;
        let mut legs = Vec::new();
        let mut scratch = Vec::new();
        if let Some(tbl) = &self.int_table {
            if tgt <= u32::MAX as usize {
                let mut out = IntColumns::new(tgt);
                let mut col: Vec<(u32, i64)> = Vec::new();
                for j in 0..src {
                    self.basis.decode(j, k, &mut legs);
                    col.clear();
                    let mut emit = |l: &[usize], v: i64| col.push((self.basis.encode(l) as u32, v));
                    match op {
                        Op::B => b_basis(tbl, d, &legs, &mut scratch, &mut emit),
                        Op::Connes => big_b_basis(d, &legs, &mut scratch, &mut emit),
                    }
                    out.push(core::mem::take(&mut col));
                }
                return Ok(Differential::Integer(out));
            }
        }
        let mut cols = Vec::with_capacity(src);
        for j in 0..src {
            self.basis.decode(j, k, &mut legs);
            let mut col = Vec::new();
            let mut emit = |l: &[usize], v: Rational| col.push((self.basis.encode(l), v));
            match op {
                Op::B => b_basis(&self.rat_table, d, &legs, &mut scratch, &mut emit),
                Op::Connes => big_b_basis(d, &legs, &mut scratch, &mut emit),
            }
            cols.push(col);
        }
        Ok(Differential::from_sparse(SparseMatrix::from_columns(
            tgt, cols,
        )))
    }

    /// Matrix of `b′ : A^{⊗(k+1)} → A^{⊗k}`.
    pub(crate) fn bar_matrix(&self, k: usize) -> Result<Differential> {
        let d = self.basis.d;
        let dim = |k: usize| -> Result<usize> {
            match d.checked_pow(k as u32 + 1) {
                Some(n) if n <= self.cap => Ok(n),
                n => Err(Error::ResourceLimit {
                    what: "bar tensor dimension".into(),
                    requested: n.unwrap_or(usize::MAX),
                    cap: self.cap,
                }),
            }
        };
        let src = dim(k)?;
        if k == 0 {
            return Ok(Differential::zero(0, src));
        }
        let tgt = dim(k - 1)?;
        let mut legs = Vec::new();
        let mut scratch = Vec::new();
        let mut cols = Vec::with_capacity(src);
        for j in 0..src {
            decode_bar(d, j, k, &mut legs);
            let mut col = Vec::new();
            b_prime_basis(
                &self.rat_table,
                &legs,
                &mut scratch,
                &mut |l: &[usize], v: Rational| col.push((encode_bar(d, l), v)),
            );
            cols.push(col);
        }
        Ok(Differential::from_sparse(SparseMatrix::from_columns(
            tgt, cols,
        )))
    }
}

pub(crate) fn encode_bar(d: usize, legs: &[usize]) -> usize {
    legs.iter().fold(0, |acc, l| acc * d + l)
}

pub(crate) fn decode_bar(d: usize, mut idx: usize, k: usize, legs: &mut Vec<usize>) {
    legs.clear();
    legs.resize(k + 1, 0);
    for pos in (0..=k).rev() {
        legs[pos] = idx % d;
        idx /= d;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain(ops: &CyclicOps, legs: &[usize], c: i64) -> TensorChain {
        let mut t = TensorChain::zero(legs.len() - 1);
        t.add_term(ops.basis().encode(legs), rat(c));
        t
    }

    #[test]
    fn b_of_unit_led_degree_one_vanishes() {
        for a in [ground_field(), dual_numbers(), matrices(2)] {
            let ops = CyclicOps::new(&a);
            for x in 0..a.dim() {
                assert!(ops.apply_b(&chain(&ops, &[a.dim(), x], 1)).is_zero());
            }
        }
    }

    #[test]
    fn b_on_matrix_units() {
        // E11 ⊗ E12: b = E11 E12 − E12 E11 = E12
        let a = matrices(2);
        let ops = CyclicOps::new(&a);
        let (e11, e12) = (0, 1);
        let out = ops.apply_b(&chain(&ops, &[e11, e12], 1));
        assert_eq!(out, chain(&ops, &[e12], 1));
    }

    #[test]
    fn connes_b_examples() {
        let a = dual_numbers();
        let ops = CyclicOps::new(&a);
        let out = ops.apply_B(&chain(&ops, &[1], 1));
        assert_eq!(out, chain(&ops, &[2, 1], 1));
        assert!(ops.apply_B(&chain(&ops, &[2, 1, 0], 1)).is_zero());
    }

    #[test]
    fn identities_on_random_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for a in [dual_numbers(), matrices(2)] {
            let ops = CyclicOps::new(&a);
            for k in 0..5 {
                for _ in 0..10 {
                    let c = TensorChain::random(&mut rng, a.dim(), k, 6);
                    assert!(ops.apply_b(&ops.apply_b(&c)).is_zero());
                    assert!(ops.apply_B(&ops.apply_B(&c)).is_zero());
                    let lhs = ops.apply_b(&ops.apply_B(&c));
                    let rhs = ops.apply_B(&ops.apply_b(&c));
                    if k > 0 {
                        assert!(lhs.add(&rhs).unwrap().is_zero());
                    } else {
                        assert!(lhs.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn matrices_agree_with_chain_operators() {
        let a = dual_numbers();
        let ops = CyclicOps::new(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 1..4 {
            let m = ops.matrix(Op::B, k).unwrap().to_sparse();
            let big = ops.matrix(Op::Connes, k).unwrap().to_sparse();
            let c = TensorChain::random(&mut rng, a.dim(), k, 5);
            let v = c.to_dense(ops.dim(k).unwrap());
            assert_eq!(
                TensorChain::from_dense(k - 1, &m.mul_vec(&v)),
                ops.apply_b(&c)
            );
            assert_eq!(
                TensorChain::from_dense(k + 1, &big.mul_vec(&v)),
                ops.apply_B(&c)
            );
        }
    }
}
