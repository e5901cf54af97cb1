use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::ChainComplex;
use crate::linalg::echelon::{to_dense, SparseVec};
use crate::linalg::{rank_and_kernel, Echelon, Rational, SparseMatrix};
use crate::{Error, Result};

/// A chain complex with an increasing filtration `F_p` given by a level per
/// basis vector: `F_p C_n` is spanned by basis vectors of level `≤ p`, and
/// the differential never raises the level.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: ChainComplex,
    levels: Vec<Vec<i64>>,
}

impl FilteredComplex {
    /// `levels[i]` lists the levels of the basis of `C_{min+i}`.
    pub fn new(complex: ChainComplex, levels: Vec<Vec<i64>>) -> Result<Self> {
        if levels.len() != complex.dims().len()
            || levels
                .iter()
                .zip(complex.dims())
                .any(|(l, d)| l.len() != *d)
        {
            return Err(Error::invalid(
                "filtration levels do not match component dimensions",
            ));
        }
        let f = FilteredComplex { complex, levels };
        for n in f.complex.degrees() {
            if let Some(d) = f.complex.differential(n) {
                for (i, j, _) in d.to_sparse().entries() {
                    let (src, tgt) = (f.level(n, j), f.level(n - 1, i));
                    if tgt > src {
                        return Err(Error::violation(format!(
                            "differential raises filtration in degree {n}: basis {j} (level {src}) hits basis {i} (level {tgt})"
                        )));
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    fn level(&self, n: i64, i: usize) -> i64 {
        self.levels[(n - self.complex.min_degree()) as usize][i]
    }

    fn dim(&self, n: i64) -> usize {
        if n < self.complex.min_degree() || n > self.complex.max_degree() {
            0
        } else {
            self.complex.dims()[(n - self.complex.min_degree()) as usize]
        }
    }

    fn level_range(&self) -> Option<(i64, i64)> {
        let all = self.levels.iter().flatten();
        Some((*all.clone().min()?, *all.max()?))
    }

    fn d(&self, n: i64) -> SparseMatrix {
        self.complex
            .differential(n)
            .map(|d| d.to_sparse())
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(n - 1), self.dim(n)))
    }
}

/// One bigraded slot `E^r_{p}` in total degree `n`.
#[derive(Clone, Debug)]
pub struct PageEntry {
    pub p: i64,
    pub n: i64,
    pub dim: usize,
    /// Representatives in `C_n` of a basis of the slot.
    pub reps: Vec<SparseVec>,
    /// Denominator vectors followed by `reps`, tracked, for reducing cycles
    /// to page coordinates.
    reducer: Echelon,
    den_count: usize,
}

impl PageEntry {
    /// Coordinates in the basis `reps` of the class of `v ∈ Z^r_p`, or
    /// `None` if `v` is not in `Z^r_p` modulo the denominator.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        let x = self.reducer.express(v)?;
        let mut out = alloc::vec![Rational::from_integer(0.into()); self.dim];
        for (i, c) in x {
            if i >= self.den_count {
                out[i - self.den_count] = c;
            }
        }
        Some(out)
    }
}

/// Page `E^r` with its differential `d_r : E^r_{p,n} → E^r_{p−r,n−1}`.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    pub entries: BTreeMap<(i64, i64), PageEntry>,
    /// Keyed by the source slot `(p, n)`.
    pub differentials: BTreeMap<(i64, i64), SparseMatrix>,
}

impl Page {
    pub fn dim(&self, p: i64, n: i64) -> usize {
        self.entries.get(&(p, n)).map_or(0, |e| e.dim)
    }

    /// Total dimension of the page in degree `n`.
    pub fn total_dim(&self, n: i64) -> usize {
        self.entries
            .iter()
            .filter(|((_, m), _)| *m == n)
            .map(|(_, e)| e.dim)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|e| e.dim == 0)
    }
}

/// Pages `E^0 … E^{r_max}` with bookkeeping checks.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub pages: Vec<Page>,
    /// `E^{r+1} = H(E^r, d_r)` held on every computed page.
    pub consistent: bool,
    /// First `r` from which all pages agree with the last one.
    pub stable_from: usize,
}

impl SpectralSequence {
    pub fn last(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }
}

struct Engine<'a> {
    f: &'a FilteredComplex,
    z_cache: BTreeMap<(i64, i64, i64), Vec<SparseVec>>,
}

impl<'a> Engine<'a> {
    /// Basis of `F_p C_n` as coordinate vectors.
    fn filtered(&self, n: i64, p: i64) -> Vec<SparseVec> {
        (0..self.f.dim(n))
            .filter(|&i| self.f.level(n, i) <= p)
            .map(|i| {
                [(i, Rational::from_integer(1.into()))]
                    .into_iter()
                    .collect()
            })
            .collect()
    }

    /// Basis of `Z^r_p C_n = {x ∈ F_p : dx ∈ F_{p−r}}`.
    fn z(&mut self, n: i64, p: i64, r: i64) -> Vec<SparseVec> {
        if let Some(z) = self.z_cache.get(&(n, p, r)) {
            return z.clone();
        }
        let out = if r <= 0 || self.f.dim(n) == 0 {
            self.filtered(n, p)
        } else {
            let cols: Vec<usize> = (0..self.f.dim(n))
                .filter(|&j| self.f.level(n, j) <= p)
                .collect();
            let rows: Vec<usize> = (0..self.f.dim(n - 1))
                .filter(|&i| self.f.level(n - 1, i) > p - r)
                .collect();
            let sub = self.f.d(n).select(&rows, &cols);
            let (_, ker) = rank_and_kernel(&sub);
            ker.into_iter()
                .map(|v| {
                    v.into_iter()
                        .enumerate()
                        .filter(|(_, x)| *x != Rational::from_integer(0.into()))
                        .map(|(k, x)| (cols[k], x))
                        .collect()
                })
                .collect()
        };
        self.z_cache.insert((n, p, r), out.clone());
        out
    }

    fn apply_d(&self, n: i64, v: &SparseVec) -> SparseVec {
        let dim = self.f.dim(n);
        let dense = to_dense(v, dim);
        let img = self.f.d(n).mul_vec(&dense);
        crate::linalg::echelon::to_sparse(&img)
    }

    fn entry(&mut self, r: i64, p: i64, n: i64) -> PageEntry {
        let mut den: Vec<SparseVec> = self.z(n, p - 1, r - 1);
        if self.f.dim(n + 1) > 0 {
            for x in self.z(n + 1, p + r - 1, r - 1) {
                let y = self.apply_d(n + 1, &x);
                if !y.is_empty() {
                    den.push(y);
                }
            }
        }
        let mut reducer = Echelon::with_tracking(self.f.dim(n), true);
        for v in &den {
            let _ = reducer.insert_tracked(v.clone());
        }
        let den_count = reducer.offered();
        let mut probe = reducer.clone();
        let mut reps = Vec::new();
        for v in self.z(n, p, r) {
            if probe.insert(v.clone()) {
                reps.push(v);
            }
        }
        for v in &reps {
            let _ = reducer.insert_tracked(v.clone());
        }
        PageEntry {
            p,
            n,
            dim: reps.len(),
            reps,
            reducer,
            den_count,
        }
    }
}

/// Pages `E^0, …, E^{r_max}` of the spectral sequence of the filtration,
/// computed from explicit subquotients
/// `E^r_p = Z^r_p / (Z^{r−1}_{p−1} + d Z^{r−1}_{p+r−1})`.
pub fn spectral_sequence_pages(f: &FilteredComplex, r_max: usize) -> Result<SpectralSequence> {
    let mut eng = Engine {
        f,
        z_cache: BTreeMap::new(),
    };
    let Some((pmin, pmax)) = f.level_range() else {
        return Ok(SpectralSequence {
            pages: Vec::new(),
            consistent: true,
            stable_from: 0,
        });
    };
    let degrees: Vec<i64> = f.complex.degrees().collect();
    let mut pages = Vec::new();
    for r in 0..=r_max as i64 {
        let mut entries = BTreeMap::new();
        for &n in &degrees {
            for p in pmin..=pmax {
                let e = eng.entry(r, p, n);
                if e.dim > 0 {
                    entries.insert((p, n), e);
                }
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(p, n), e) in &entries {
            let target = entries.get(&(p - r, n - 1));
            let rows = target.map_or(0, |t| t.dim);
            let mut triplets = Vec::new();
            for (j, x) in e.reps.iter().enumerate() {
                let y = eng.apply_d(n, x);
                if y.is_empty() {
                    continue;
                }
                let Some(t) = target else { continue };
                let coords = t.coordinates(&y).ok_or_else(|| {
                    Error::violation(format!(
                        "d_{r} image of ({p},{n}) is not a cycle of the target slot"
                    ))
                })?;
                for (i, c) in coords.into_iter().enumerate() {
                    triplets.push((i, j, c));
                }
            }
            differentials.insert((p, n), SparseMatrix::from_triplets(rows, e.dim, triplets));
        }
        pages.push(Page {
            r: r as usize,
            entries,
            differentials,
        });
    }
    let consistent = pages.windows(2).all(|w| next_page_matches(&w[0], &w[1]));
    let last = pages.len() - 1;
    let mut stable_from = last;
    while stable_from > 0 && same_dims(&pages[stable_from - 1], &pages[last]) {
        stable_from -= 1;
    }
    Ok(SpectralSequence {
        pages,
        consistent,
        stable_from,
    })
}

fn same_dims(a: &Page, b: &Page) -> bool {
    let dims = |p: &Page| -> BTreeMap<(i64, i64), usize> {
        p.entries.iter().map(|(k, e)| (*k, e.dim)).collect()
    };
    dims(a) == dims(b)
}

fn next_page_matches(cur: &Page, next: &Page) -> bool {
    let r = cur.r as i64;
    let mut slots: Vec<(i64, i64)> = cur.entries.keys().copied().collect();
    slots.extend(next.entries.keys().copied());
    slots.sort_unstable();
    slots.dedup();
    slots.into_iter().all(|(p, n)| {
        let out = cur.differentials.get(&(p, n)).map_or(0, SparseMatrix::rank);
        let inc = cur
            .differentials
            .get(&(p + r, n + 1))
            .map_or(0, SparseMatrix::rank);
        cur.dim(p, n) >= out + inc && cur.dim(p, n) - out - inc == next.dim(p, n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::triangle_boundary;
    use alloc::vec;

    #[test]
    fn single_level_gives_homology() {
        let c = triangle_boundary();
        let f = FilteredComplex::new(c, vec![vec![0; 3], vec![0; 3]]).unwrap();
        let ss = spectral_sequence_pages(&f, 3).unwrap();
        assert!(ss.consistent);
        assert_eq!(ss.pages[1].total_dim(0), 1);
        assert_eq!(ss.pages[1].total_dim(1), 1);
        assert_eq!(ss.stable_from, 1);
    }

    #[test]
    fn two_step_cone_of_identity() {
        let c =
            ChainComplex::from_matrices(0, vec![1, 1], vec![SparseMatrix::identity(1)]).unwrap();
        let f = FilteredComplex::new(c, vec![vec![0], vec![1]]).unwrap();
        let ss = spectral_sequence_pages(&f, 3).unwrap();
        assert!(ss.consistent);
        assert!(!ss.pages[1].is_zero());
        assert!(ss.pages[2].is_zero());
        assert_eq!(ss.pages[1].differentials[&(1, 1)].rank(), 1);
    }

    #[test]
    fn rejects_filtration_raising_differential() {
        let c =
            ChainComplex::from_matrices(0, vec![1, 1], vec![SparseMatrix::identity(1)]).unwrap();
        assert!(FilteredComplex::new(c, vec![vec![1], vec![0]]).is_err());
    }
}
