//! Bounded chain complexes, chain maps, mapping cones, double complexes and
//! spectral sequences of filtered complexes.
//!
//! Every complex lives on an explicit window of degrees. A side of the window
//! is either *closed* (the complex really is zero beyond it) or *truncated*
//! (it continues, but we did not build it). Homology in a degree next to a
//! truncated side is reported as uncertified.

mod double;
mod map;
mod spectral;

pub use double::{DoubleComplex, SquareConvention};
pub use map::{cone_quasi_iso_test, ChainMap, ConeReport};
pub use spectral::{spectral_sequence_pages, FilteredComplex, Page, PageEntry, SpectralSequence};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{IntColumns, Rational, SparseMatrix};
use crate::{Error, Result};

/// A differential `C_k → C_{k−1}`, stored compactly when it is integral.
#[derive(Clone, Debug)]
pub enum Differential {
    Rational(SparseMatrix),
    Integer(IntColumns),
}

impl Differential {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Differential::Integer(IntColumns {
            rows,
            cols: vec![Vec::new(); cols],
        })
    }

    /// Wraps a rational matrix, switching to the integer form when possible.
    pub fn from_sparse(m: SparseMatrix) -> Self {
        match IntColumns::from_sparse(&m) {
            Some(ic) => Differential::Integer(ic),
            None => Differential::Rational(m),
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            Differential::Rational(m) => m.rows(),
            Differential::Integer(m) => m.rows,
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Differential::Rational(m) => m.cols(),
            Differential::Integer(m) => m.ncols(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Differential::Rational(m) => m.rank(),
            Differential::Integer(m) => {
                if m.ncols() > 4 * m.rows.max(1) {
                    m.transpose().rank()
                } else {
                    m.rank()
                }
            }
        }
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        match self {
            Differential::Rational(m) => m.clone(),
            Differential::Integer(m) => m.to_sparse(),
        }
    }

    /// First nonzero entry `(row, col, value)` of `next ∘ self`, where
    /// `next` is the differential one degree lower.
    pub fn first_composite_entry(&self, next: &Differential) -> Option<(usize, usize, Rational)> {
        if let (Differential::Integer(a), Differential::Integer(b)) = (self, next) {
            return int_composite_entry(a, b);
        }
        let p = next.to_sparse().mul(&self.to_sparse()).ok()?;
        let first = p.entries().next().map(|(i, j, v)| (i, j, v.clone()));
        first
    }
}

fn int_composite_entry(a: &IntColumns, b: &IntColumns) -> Option<(usize, usize, Rational)> {
    let mut acc = vec![0i128; b.rows];
    let mut touched: Vec<usize> = Vec::new();
    for (j, col) in a.cols.iter().enumerate() {
        for (k, x) in col {
            for (i, y) in &b.cols[*k as usize] {
                let i = *i as usize;
                if acc[i] == 0 {
                    touched.push(i);
                }
                acc[i] += (*x as i128) * (*y as i128);
            }
        }
        touched.sort_unstable();
        let mut found = None;
        for &i in &touched {
            if acc[i] != 0 && found.is_none() {
                found = Some((i, j, Rational::from_integer(acc[i].into())));
            }
            acc[i] = 0;
        }
        touched.clear();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Why a chain complex failed validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexViolation {
    /// `d_k` has the wrong shape for `C_k → C_{k−1}`.
    Shape {
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// `d_{k−1} ∘ d_k` has a nonzero entry.
    SquareNonzero {
        degree: i64,
        row: usize,
        col: usize,
        value: Rational,
    },
}

impl fmt::Display for ComplexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexViolation::Shape {
                degree,
                expected,
                found,
            } => write!(
                f,
                "d_{degree} has shape {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            ComplexViolation::SquareNonzero {
                degree,
                row,
                col,
                value,
            } => write!(
                f,
                "d_{} d_{degree} has entry {value} at ({row}, {col})",
                degree - 1
            ),
        }
    }
}

/// Homology dimension in one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomologyDim {
    pub dim: usize,
    pub certified: bool,
}

/// A chain complex `… → C_k → C_{k−1} → …` on the window `[min, max]`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    min_deg: i64,
    dims: Vec<usize>,
    /// `diffs[i]` is `d_{min+i+1} : C_{min+i+1} → C_{min+i}`.
    diffs: Vec<Differential>,
    closed_below: bool,
    closed_above: bool,
    labels: Option<Vec<Vec<String>>>,
}

impl ChainComplex {
    /// `dims[i] = dim C_{min_deg+i}`, `diffs[i] = d_{min_deg+i+1}`. Both
    /// sides start closed.
    pub fn new(min_deg: i64, dims: Vec<usize>, diffs: Vec<Differential>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::invalid("chain complex with empty window"));
        }
        if diffs.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len() - 1,
                found: diffs.len(),
            });
        }
        Ok(ChainComplex {
            min_deg,
            dims,
            diffs,
            closed_below: true,
            closed_above: true,
            labels: None,
        })
    }

    /// Convenience constructor from rational matrices.
    pub fn from_matrices(min_deg: i64, dims: Vec<usize>, diffs: Vec<SparseMatrix>) -> Result<Self> {
        Self::new(
            min_deg,
            dims,
            diffs.into_iter().map(Differential::from_sparse).collect(),
        )
    }

    /// Marks which window sides are genuine (the complex vanishes beyond
    /// them) as opposed to truncations.
    pub fn with_closed_sides(mut self, below: bool, above: bool) -> Self {
        self.closed_below = below;
        self.closed_above = above;
        self
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.dims.len()
            || labels.iter().zip(&self.dims).any(|(l, d)| l.len() != *d)
        {
            return Err(Error::invalid(
                "basis labels do not match component dimensions",
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn min_degree(&self) -> i64 {
        self.min_deg
    }

    pub fn max_degree(&self) -> i64 {
        self.min_deg + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_deg..=self.max_degree()
    }

    pub fn closed_below(&self) -> bool {
        self.closed_below
    }

    pub fn closed_above(&self) -> bool {
        self.closed_above
    }

    fn index(&self, k: i64) -> Option<usize> {
        (k >= self.min_deg && k <= self.max_degree()).then(|| (k - self.min_deg) as usize)
    }

    /// `dim C_k`, or `None` if `k` is beyond a truncated side.
    pub fn dim(&self, k: i64) -> Option<usize> {
        match self.index(k) {
            Some(i) => Some(self.dims[i]),
            None if k < self.min_deg && self.closed_below => Some(0),
            None if k > self.max_degree() && self.closed_above => Some(0),
            None => None,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d_k : C_k → C_{k−1}` when it lies inside the window.
    pub fn differential(&self, k: i64) -> Option<&Differential> {
        let i = self.index(k)?;
        if i == 0 {
            return None;
        }
        Some(&self.diffs[i - 1])
    }

    /// `d_k` as a rational matrix; zero outside the window on closed sides.
    pub fn differential_matrix(&self, k: i64) -> Option<SparseMatrix> {
        if let Some(d) = self.differential(k) {
            return Some(d.to_sparse());
        }
        let (src, tgt) = (self.dim(k)?, self.dim(k - 1)?);
        Some(SparseMatrix::zeros(tgt, src))
    }

    pub fn labels(&self, k: i64) -> Option<&[String]> {
        let i = self.index(k)?;
        self.labels.as_ref().map(|l| l[i].as_slice())
    }

    /// Homology in degree `k` is certified when both adjacent differentials
    /// are known.
    pub fn is_certified(&self, k: i64) -> bool {
        self.index(k).is_some()
            && (k > self.min_deg || self.closed_below)
            && (k < self.max_degree() || self.closed_above)
    }

    /// Checks shapes and `d² = 0`; reports the first failing degree and entry.
    pub fn validate(&self) -> core::result::Result<(), ComplexViolation> {
        for (i, d) in self.diffs.iter().enumerate() {
            let expected = (self.dims[i], self.dims[i + 1]);
            let found = (d.rows(), d.cols());
            if expected != found {
                return Err(ComplexViolation::Shape {
                    degree: self.min_deg + i as i64 + 1,
                    expected,
                    found,
                });
            }
        }
        for i in 1..self.diffs.len() {
            if let Some((row, col, value)) = self.diffs[i].first_composite_entry(&self.diffs[i - 1])
            {
                return Err(ComplexViolation::SquareNonzero {
                    degree: self.min_deg + i as i64 + 1,
                    row,
                    col,
                    value,
                });
            }
        }
        Ok(())
    }

    /// Ranks of all differentials inside the window, by degree.
    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.diffs
            .iter()
            .enumerate()
            .map(|(i, d)| (self.min_deg + i as i64 + 1, d.rank()))
            .collect()
    }

    /// `dim H_k = dim C_k − rank d_k − rank d_{k+1}` for every degree of the
    /// window, flagged certified or not.
    pub fn homology_dims(&self) -> Result<BTreeMap<i64, HomologyDim>> {
        self.validate()
            .map_err(|v| Error::violation(format!("{v}")))?;
        Ok(self.homology_dims_unchecked())
    }

    /// As [`Self::homology_dims`] without the `d² = 0` check (callers that
    /// build the complex from verified operators).
    pub fn homology_dims_unchecked(&self) -> BTreeMap<i64, HomologyDim> {
        let ranks: Vec<usize> = self.diffs.iter().map(Differential::rank).collect();
        homology_from_ranks(self, &ranks)
    }
}

pub(crate) fn homology_from_ranks(c: &ChainComplex, ranks: &[usize]) -> BTreeMap<i64, HomologyDim> {
    let n = c.dims.len();
    (0..n)
        .map(|i| {
            let k = c.min_deg + i as i64;
            let out = if i > 0 { ranks[i - 1] } else { 0 };
            let inc = if i + 1 < n { ranks[i] } else { 0 };
            (
                k,
                HomologyDim {
                    dim: c.dims[i] - out - inc,
                    certified: c.is_certified(k),
                },
            )
        })
        .collect()
}
