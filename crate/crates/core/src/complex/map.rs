use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{ChainComplex, Differential, HomologyDim};
use crate::linalg::{IntColumns, SparseMatrix};
use crate::{Error, Result};

/// A degree-0 map of chain complexes `f_k : C_k → D_k`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    components: BTreeMap<i64, Differential>,
}

impl ChainMap {
    /// Components missing from `components` are zero maps.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: BTreeMap<i64, Differential>,
    ) -> Result<Self> {
        for (k, f) in &components {
            let (Some(s), Some(t)) = (source.dim(*k), target.dim(*k)) else {
                return Err(Error::invalid(format!(
                    "chain map component in unknown degree {k}"
                )));
            };
            if (f.rows(), f.cols()) != (t, s) {
                return Err(Error::invalid(format!(
                    "chain map component f_{k} has shape {}x{}, expected {t}x{s}",
                    f.rows(),
                    f.cols()
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            components,
        })
    }

    /// Identity map of a complex.
    pub fn identity(c: &ChainComplex) -> Self {
        let components = c
            .degrees()
            .map(|k| {
                let n = c.dim(k).unwrap_or(0);
                (k, Differential::from_sparse(SparseMatrix::identity(n)))
            })
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components,
        }
    }

    pub fn component(&self, k: i64) -> Option<&Differential> {
        self.components.get(&k)
    }

    fn component_or_zero(&self, k: i64) -> Option<Differential> {
        if let Some(f) = self.components.get(&k) {
            return Some(f.clone());
        }
        Some(Differential::zero(self.target.dim(k)?, self.source.dim(k)?))
    }

    /// Checks `f_{k−1} d_k = d_k f_k` in every degree where both sides are
    /// known; returns the first failing degree.
    pub fn validate(&self) -> core::result::Result<(), i64> {
        let lo = self.source.min_degree().max(self.target.min_degree()) + 1;
        let hi = self.source.max_degree().min(self.target.max_degree());
        for k in lo..=hi {
            let (Some(ds), Some(dt)) = (
                self.source.differential_matrix(k),
                self.target.differential_matrix(k),
            ) else {
                continue;
            };
            let (Some(fk), Some(fk1)) = (self.component_or_zero(k), self.component_or_zero(k - 1))
            else {
                continue;
            };
            let left = fk1.to_sparse().mul(&ds);
            let right = dt.mul(&fk.to_sparse());
            match (left, right) {
                (Ok(l), Ok(r)) if l == r => {}
                _ => return Err(k),
            }
        }
        Ok(())
    }

    /// Mapping cone: `cone_k = C_{k−1} ⊕ D_k`, `d(c, x) = (−d c, f c + d x)`.
    pub fn cone(&self) -> Result<ChainComplex> {
        let (c, d) = (&self.source, &self.target);
        let lo = (c.min_degree() + 1).min(d.min_degree());
        let hi = (c.max_degree() + 1).max(d.max_degree());
        let known = |k: i64| c.dim(k - 1).is_some() && d.dim(k).is_some();
        let mut k_lo = lo;
        while k_lo <= hi && !known(k_lo) {
            k_lo += 1;
        }
        let mut k_hi = k_lo;
        while k_hi < hi && known(k_hi + 1) {
            k_hi += 1;
        }
        if k_lo > hi {
            return Err(Error::WindowTooSmall(
                "mapping cone has no known degree".into(),
            ));
        }
        let split = |k: i64| (c.dim(k - 1).unwrap(), d.dim(k).unwrap());
        let dims: Vec<usize> = (k_lo..=k_hi).map(|k| split(k).0 + split(k).1).collect();
        let mut diffs = Vec::new();
        for k in k_lo + 1..=k_hi {
            let (cs, ds) = split(k);
            let (ct, dt) = split(k - 1);
            let dc = match c.differential(k - 1) {
                Some(m) => m.clone(),
                None => Differential::zero(ct, cs),
            };
            let dd = d
                .differential(k)
                .cloned()
                .unwrap_or_else(|| Differential::zero(dt, ds));
            let f = self
                .component_or_zero(k - 1)
                .ok_or_else(|| Error::WindowTooSmall(format!("chain map component f_{}", k - 1)))?;
            diffs.push(cone_block(&dc, &f, &dd, (cs, ds), (ct, dt)));
        }
        let closed_below = c.closed_below() && d.closed_below() && k_lo == lo;
        let closed_above = c.closed_above() && d.closed_above() && k_hi == hi;
        Ok(ChainComplex::new(k_lo, dims, diffs)?.with_closed_sides(closed_below, closed_above))
    }
}

/// `[[−dc, 0], [f, dd]]` with the `C` block first.
fn cone_block(
    dc: &Differential,
    f: &Differential,
    dd: &Differential,
    (cs, ds): (usize, usize),
    (ct, dt): (usize, usize),
) -> Differential {
    if let (Differential::Integer(a), Differential::Integer(b), Differential::Integer(e)) =
        (dc, f, dd)
    {
        let mut out = IntColumns::new(ct + dt);
        for j in 0..cs {
            let mut col: Vec<(u32, i64)> = a.cols[j].iter().map(|(r, v)| (*r, -*v)).collect();
            col.extend(b.cols[j].iter().map(|(r, v)| (*r + ct as u32, *v)));
            out.push(col);
        }
        for j in 0..ds {
            out.push(
                e.cols[j]
                    .iter()
                    .map(|(r, v)| (*r + ct as u32, *v))
                    .collect(),
            );
        }
        return Differential::Integer(out);
    }
    let neg = dc.to_sparse().neg();
    let (fs, es) = (f.to_sparse(), dd.to_sparse());
    let m = SparseMatrix::block(
        &[ct, dt],
        &[cs, ds],
        &[
            alloc::vec![Some(&neg), None],
            alloc::vec![Some(&fs), Some(&es)],
        ],
    )
    .expect("cone block shapes are consistent");
    Differential::from_sparse(m)
}

/// Outcome of a mapping-cone quasi-isomorphism test.
#[derive(Clone, Debug)]
pub struct ConeReport {
    pub cone_homology: BTreeMap<i64, HomologyDim>,
    /// Degrees `k` where `H_k(f)` is known to be an isomorphism (or not):
    /// both `H_k` and `H_{k+1}` of the cone are certified.
    pub certified_degrees: Vec<i64>,
    /// Certified degrees where the cone has homology.
    pub failing_degrees: Vec<i64>,
}

impl ConeReport {
    pub fn is_quasi_iso(&self) -> bool {
        self.failing_degrees.is_empty()
    }
}

/// Tests whether `f` induces isomorphisms on homology in every degree the
/// window certifies, via acyclicity of the mapping cone.
pub fn cone_quasi_iso_test(f: &ChainMap) -> Result<ConeReport> {
    let cone = f.cone()?;
    let h = cone.homology_dims_unchecked();
    let mut certified = Vec::new();
    let mut failing = Vec::new();
    for k in f.source.degrees().chain(f.target.degrees()) {
        if certified.contains(&k) {
            continue;
        }
        let (Some(a), Some(b)) = (h.get(&k), h.get(&(k + 1))) else {
            continue;
        };
        if a.certified && b.certified {
            certified.push(k);
            if a.dim != 0 || b.dim != 0 {
                failing.push(k);
            }
        }
    }
    certified.sort_unstable();
    failing.sort_unstable();
    if certified.is_empty() {
        return Err(Error::WindowTooSmall(
            "no degree of the mapping cone is certified".into(),
        ));
    }
    Ok(ConeReport {
        cone_homology: h,
        certified_degrees: certified,
        failing_degrees: failing,
    })
}
