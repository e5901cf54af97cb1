//! Fraction-free integer elimination for exact ranks.
//!
//! Columns are cleared of denominators, split into connected components of
//! the row/column incidence graph (graded complexes split into many small
//! blocks this way), and each block is reduced with integer row operations
//! `x ← (p/g)·x − (a/g)·pivot` followed by content normalisation. Entries are
//! kept in `i64` while they fit; a block that overflows is redone over
//! `BigInt`.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SparseMatrix;

/// Integer columns: `cols[j]` lists `(row, value)` with nonzero values.
#[derive(Clone, Debug, Default)]
pub struct IntColumns {
    pub rows: usize,
    pub cols: Vec<Vec<(u32, i64)>>,
}

impl IntColumns {
    pub fn new(rows: usize) -> Self {
        IntColumns {
            rows,
            cols: Vec::new(),
        }
    }

    pub fn push(&mut self, mut col: Vec<(u32, i64)>) {
        col.sort_unstable_by_key(|(r, _)| *r);
        let mut out: Vec<(u32, i64)> = Vec::with_capacity(col.len());
        for (r, v) in col {
            debug_assert!((r as usize) < self.rows);
            match out.last_mut() {
                Some((lr, lv)) if *lr == r => *lv += v,
                _ => out.push((r, v)),
            }
        }
        out.retain(|(_, v)| *v != 0);
        self.cols.push(out);
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn rank(&self) -> usize {
        rank_of_columns(self.rows, &self.cols)
    }

    pub fn transpose(&self) -> IntColumns {
        let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r as usize].push((j as u32, *v));
            }
        }
        IntColumns {
            rows: self.cols.len(),
            cols,
        }
    }

    /// Integer view of a rational matrix, if every entry is an integer that
    /// fits in `i64` and the row count fits in `u32`.
    pub fn from_sparse(m: &SparseMatrix) -> Option<IntColumns> {
        if m.rows() > u32::MAX as usize {
            return None;
        }
        let cols = m
            .columns()
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, v)| super::to_i64(v).map(|x| (*r as u32, x)))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(IntColumns {
            rows: m.rows(),
            cols,
        })
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix::from_columns(
            self.rows,
            self.cols
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|(r, v)| (*r as usize, super::rat(*v)))
                        .collect()
                })
                .collect(),
        )
    }
}

/// Exact rank of a rational sparse matrix.
pub fn rank(m: &SparseMatrix) -> usize {
    let (rows, cols) = m.shape();
    // Work on the orientation with fewer columns to shorten the pivot list.
    let source = if cols > rows * 4 {
        m.transpose()
    } else {
        m.clone()
    };
    let mut big_cols: Vec<Vec<(u32, BigInt)>> = Vec::with_capacity(source.cols());
    for col in source.columns() {
        let mut lcm = <BigInt as One>::one();
        for (_, v) in col {
            lcm = lcm.lcm(v.denom());
        }
        big_cols.push(
            col.iter()
                .map(|(r, v)| (*r as u32, (v.numer() * (&lcm / v.denom()))))
                .collect(),
        );
    }
    let small: Option<Vec<Vec<(u32, i64)>>> = big_cols
        .iter()
        .map(|col| {
            col.iter()
                .map(|(r, v)| v.to_i64().map(|x| (*r, x)))
                .collect::<Option<Vec<_>>>()
        })
        .collect();
    match small {
        Some(cols) => rank_of_columns(source.rows(), &cols),
        None => rank_components(source.rows(), &big_cols),
    }
}

/// Exact rank of integer columns (`i64` fast path with `BigInt` fallback).
pub fn rank_of_columns(rows: usize, cols: &[Vec<(u32, i64)>]) -> usize {
    let comps = components(rows, cols.iter().map(|c| c.iter().map(|(r, _)| *r)));
    let mut total = 0;
    for comp in comps {
        let local: Vec<Vec<(u32, i64)>> = comp
            .cols
            .iter()
            .map(|&j| {
                cols[j]
                    .iter()
                    .map(|(r, v)| (comp.row_index[r], *v))
                    .collect()
            })
            .collect();
        total += match eliminate::<i64>(comp.n_rows, local.clone()) {
            Some(r) => r,
            None => {
                let big: Vec<Vec<(u32, BigInt)>> = local
                    .into_iter()
                    .map(|c| c.into_iter().map(|(r, v)| (r, BigInt::from(v))).collect())
                    .collect();
                eliminate::<BigInt>(comp.n_rows, big).expect("bigint elimination cannot overflow")
            }
        };
    }
    total
}

fn rank_components(rows: usize, cols: &[Vec<(u32, BigInt)>]) -> usize {
    let comps = components(rows, cols.iter().map(|c| c.iter().map(|(r, _)| *r)));
    comps
        .into_iter()
        .map(|comp| {
            let local: Vec<Vec<(u32, BigInt)>> = comp
                .cols
                .iter()
                .map(|&j| {
                    cols[j]
                        .iter()
                        .map(|(r, v)| (comp.row_index[r], v.clone()))
                        .collect()
                })
                .collect();
            eliminate::<BigInt>(comp.n_rows, local).expect("bigint elimination cannot overflow")
        })
        .sum()
}

struct Component {
    n_rows: usize,
    cols: Vec<usize>,
    row_index: alloc::collections::BTreeMap<u32, u32>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn components<I, R>(rows: usize, cols: I) -> Vec<Component>
where
    I: Iterator<Item = R>,
    R: Iterator<Item = u32>,
{
    let col_rows: Vec<Vec<u32>> = cols.map(|c| c.collect()).collect();
    let mut parent: Vec<usize> = (0..rows + col_rows.len()).collect();
    for (j, rs) in col_rows.iter().enumerate() {
        let cj = rows + j;
        for &r in rs {
            let a = find(&mut parent, cj);
            let b = find(&mut parent, r as usize);
            if a != b {
                // Smaller root wins so grouping is deterministic.
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut by_root: alloc::collections::BTreeMap<usize, Component> = Default::default();
    for (j, rs) in col_rows.iter().enumerate() {
        if rs.is_empty() {
            continue;
        }
        let root = find(&mut parent, rows + j);
        let comp = by_root.entry(root).or_insert_with(|| Component {
            n_rows: 0,
            cols: Vec::new(),
            row_index: Default::default(),
        });
        comp.cols.push(j);
        for &r in rs {
            let next = comp.row_index.len() as u32;
            comp.row_index.entry(r).or_insert(next);
        }
    }
    by_root
        .into_values()
        .map(|mut c| {
            c.n_rows = c.row_index.len();
            c
        })
        .collect()
}

trait ElimScalar: Clone + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn gcd_abs(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    /// `a·x − b·y`, `None` on overflow.
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
}

impl ElimScalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn gcd_abs(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        let v = (*a as i128) * (*x as i128) - (*b as i128) * (*y as i128);
        i64::try_from(v).ok().filter(|v| *v != i64::MIN)
    }
}

impl ElimScalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn is_unit(&self) -> bool {
        One::is_one(&self.abs())
    }
    fn gcd_abs(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
}

/// Rank of one connected block. Returns `None` if `T` overflows.
///
/// Columns are processed in order of increasing length; a reduced column's
/// pivot is its entry in the row with the fewest structural nonzeros
/// (lowest row index on ties). Stored pivot columns are kept reduced with
/// respect to all earlier pivots, so eliminating in storage order terminates.
fn eliminate<T: ElimScalar>(n_rows: usize, mut cols: Vec<Vec<(u32, T)>>) -> Option<usize> {
    let mut row_count = vec![0u32; n_rows];
    for c in &cols {
        for (r, _) in c {
            row_count[*r as usize] += 1;
        }
    }
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&j| (cols[j].len(), j));

    let mut pivot_of_row: Vec<u32> = vec![u32::MAX; n_rows];
    let mut stored: Vec<Vec<(u32, T)>> = Vec::new();
    let mut work: Vec<T> = vec![T::zero(); n_rows];
    let mut present: Vec<bool> = vec![false; n_rows];
    let mut touched: Vec<u32> = Vec::new();
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = BinaryHeap::new();
    let mut queued: Vec<bool> = vec![false; n_rows];

    for j in order {
        let col = core::mem::take(&mut cols[j]);
        for (r, v) in col {
            let ri = r as usize;
            work[ri] = v;
            present[ri] = true;
            touched.push(r);
            if pivot_of_row[ri] != u32::MAX && !queued[ri] {
                queued[ri] = true;
                heap.push(Reverse((pivot_of_row[ri], r)));
            }
        }
        let mut overflow = false;
        while let Some(Reverse((slot, r))) = heap.pop() {
            let ri = r as usize;
            queued[ri] = false;
            if work[ri].is_zero() {
                continue;
            }
            let piv = &stored[slot as usize];
            let pv = piv
                .iter()
                .find(|(pr, _)| *pr == r)
                .map(|(_, v)| v.clone())
                .expect("pivot entry present");
            let a = work[ri].clone();
            let g = pv.gcd_abs(&a);
            let (pm, am) = (pv.div_exact(&g), a.div_exact(&g));
            // work ← pm·work − am·piv
            if !pm.is_one() {
                for &t in &touched {
                    let ti = t as usize;
                    if !work[ti].is_zero() {
                        match T::mul_sub(&pm, &work[ti], &T::zero(), &T::zero()) {
                            Some(v) => work[ti] = v,
                            None => {
                                overflow = true;
                                break;
                            }
                        }
                    }
                }
                if overflow {
                    break;
                }
            }
            let one = T::one();
            for (pr, pval) in piv {
                let pi = *pr as usize;
                let cur = if present[pi] {
                    work[pi].clone()
                } else {
                    T::zero()
                };
                match T::mul_sub(&one, &cur, &am, pval) {
                    Some(v) => work[pi] = v,
                    None => {
                        overflow = true;
                        break;
                    }
                }
                if !present[pi] {
                    present[pi] = true;
                    touched.push(*pr);
                }
                if pivot_of_row[pi] != u32::MAX
                    && pivot_of_row[pi] > slot
                    && !queued[pi]
                    && !work[pi].is_zero()
                {
                    queued[pi] = true;
                    heap.push(Reverse((pivot_of_row[pi], *pr)));
                }
            }
            if overflow {
                break;
            }
        }
        if overflow {
            return None;
        }
        heap.clear();
        let mut reduced: Vec<(u32, T)> = Vec::new();
        for &t in &touched {
            let ti = t as usize;
            if present[ti] {
                present[ti] = false;
                queued[ti] = false;
                let v = core::mem::replace(&mut work[ti], T::zero());
                if !v.is_zero() {
                    reduced.push((t, v));
                }
            }
        }
        touched.clear();
        if reduced.is_empty() {
            continue;
        }
        reduced.sort_unstable_by_key(|(r, _)| *r);
        let mut content = reduced[0].1.gcd_abs(&reduced[0].1);
        for (_, v) in &reduced[1..] {
            if content.is_unit() {
                break;
            }
            content = content.gcd_abs(v);
        }
        if !content.is_unit() {
            for (_, v) in &mut reduced {
                *v = v.div_exact(&content);
            }
        }
        let (prow, _) = reduced
            .iter()
            .min_by_key(|(r, _)| (row_count[*r as usize], *r))
            .expect("nonempty");
        pivot_of_row[*prow as usize] = stored.len() as u32;
        stored.push(reduced);
    }
    Some(stored.len())
}
