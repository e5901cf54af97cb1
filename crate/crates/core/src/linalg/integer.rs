//! Integer matrices and Smith normal form.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Sparse integer matrix: no stored zeros, indices in bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.entries.iter().map(|((i, j), v)| (*i, *j, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            t.set(j, i, v.clone());
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigInt)>> = BTreeMap::new();
        for (k, j, v) in other.entries() {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (i, k, a) in self.entries() {
            if let Some(row) = by_row.get(&k) {
                for (j, b) in row {
                    *acc.entry((i, *j)).or_default() += a * *b;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(IntegerMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![BigInt::zero(); self.rows];
        for (i, j, a) in self.entries() {
            out[i] += a * &v[j];
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact determinant of a square matrix (fraction-free Bareiss).
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, each nonzero
/// diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | …`, all positive.
    pub invariant_factors: Vec<BigInt>,
    pub diagonal: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

struct Snf {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
}

impl Snf {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    /// row_i ← row_i − q·row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.n {
            let t = &self.a[j][c] * q;
            self.a[i][c] -= t;
        }
        for c in 0..self.m {
            let t = &self.u[j][c] * q;
            self.u[i][c] -= t;
        }
    }

    /// col_i ← col_i − q·col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.m {
            let t = &self.a[r][j] * q;
            self.a[r][i] -= t;
        }
        for r in 0..self.n {
            let t = &self.v[r][j] * q;
            self.v[r][i] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        for x in &mut self.u[i] {
            *x = -&*x;
        }
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                if self.a[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= self.a[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let mut t = 0;
        while t < self.m.min(self.n) {
            let Some((pi, pj)) = self.smallest_in(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.row_sub(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.col_sub(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    let (pi, pj) = self.smallest_in_cross(t);
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                // Divisibility: fold an offending row into the pivot row.
                let piv = self.a[t][t].clone();
                let offending = (t + 1..self.m)
                    .find(|&i| (t + 1..self.n).any(|j| !self.a[i][j].is_multiple_of(&piv)));
                match offending {
                    Some(i) => {
                        let minus_one = -BigInt::one();
                        self.row_sub(t, i, &minus_one);
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }

    /// Smallest nonzero entry in row `t` / column `t` from the pivot on.
    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_abs = self.a[t][t].abs();
        for i in t + 1..self.m {
            let x = self.a[i][t].abs();
            if !x.is_zero() && (best_abs.is_zero() || x < best_abs) {
                best = (i, t);
                best_abs = x;
            }
        }
        for j in t + 1..self.n {
            let x = self.a[t][j].abs();
            if !x.is_zero() && (best_abs.is_zero() || x < best_abs) {
                best = (t, j);
                best_abs = x;
            }
        }
        best
    }
}

fn dense_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut s = Snf {
        a: m.to_dense(),
        u: dense_identity(m.rows()),
        v: dense_identity(m.cols()),
        m: m.rows(),
        n: m.cols(),
    };
    let r = s.run();
    let invariant_factors = (0..r).map(|i| s.a[i][i].clone()).collect();
    SmithForm {
        invariant_factors,
        diagonal: IntegerMatrix::from_dense(&s.a),
        u: IntegerMatrix::from_dense(&s.u),
        v: IntegerMatrix::from_dense(&s.v),
    }
}

/// Row Hermite normal form of the lattice spanned by `rows`: nonzero rows
/// only, each with a positive pivot strictly right of the previous one and
/// entries above every pivot reduced into `[0, pivot)`.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut top = 0;
    for c in 0..ncols {
        while let Some(p) = (top..a.len())
            .filter(|&i| !a[i][c].is_zero())
            .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()))
        {
            a.swap(top, p);
            let mut done = true;
            for i in top + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[top][c]);
                for k in c..ncols {
                    let t = &a[top][k] * &q;
                    a[i][k] -= t;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top >= a.len() || a[top][c].is_zero() {
            continue;
        }
        if a[top][c].is_negative() {
            for x in &mut a[top] {
                *x = -&*x;
            }
        }
        for i in 0..top {
            let q = a[i][c].div_floor(&a[top][c]);
            if !q.is_zero() {
                for k in c..ncols {
                    let t = &a[top][k] * &q;
                    a[i][k] -= t;
                }
            }
        }
        top += 1;
    }
    a.truncate(top);
    a
}
