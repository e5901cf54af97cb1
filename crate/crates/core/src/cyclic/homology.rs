use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{CyclicOps, Op, TensorChain};
use crate::algebra::FDAlgebra;
use crate::complex::{ChainComplex, Differential, HomologyDim};
use crate::linalg::{solve_linear, IntColumns, Rational, SparseMatrix};
use crate::{Error, Result};

/// Default ceiling on the dimension of any single tensor space.
pub const DEFAULT_CAP: usize = 2_000_000;

/// The Hochschild complex `(CC_•, b)` on degrees `0..=max_deg`; the top
/// side is a truncation.
pub fn hochschild_complex(ops: &CyclicOps, max_deg: usize) -> Result<ChainComplex> {
    let dims = (0..=max_deg)
        .map(|k| ops.dim(k))
        .collect::<Result<Vec<_>>>()?;
    let diffs = (1..=max_deg)
        .map(|k| ops.matrix(Op::B, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainComplex::new(0, dims, diffs)?.with_closed_sides(true, false))
}

/// `dim HH_k(A)` for `0 ≤ k ≤ max_deg`; only `k < max_deg` is certified.
pub fn hochschild_homology(
    a: &FDAlgebra,
    max_deg: usize,
    cap: usize,
) -> Result<BTreeMap<usize, HomologyDim>> {
    let ops = CyclicOps::with_cap(a, cap);
    let c = hochschild_complex(&ops, max_deg)?;
    Ok(c.homology_dims_unchecked()
        .into_iter()
        .map(|(k, h)| (k as usize, h))
        .collect())
}

/// Components `u^j CC_{n+2j}` of total degree `n` with `j ≤ jmax`,
/// ascending in `j`.
fn components(n: i64, jmax: i64) -> Vec<(i64, usize)> {
    let jmin = (-n).div_euclid(2) + ((-n).rem_euclid(2) != 0) as i64;
    (jmin..=jmax).map(|j| (j, (n + 2 * j) as usize)).collect()
}

struct Layout {
    comps: Vec<(i64, usize)>,
    offsets: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(ops: &CyclicOps, n: i64, jmax: i64) -> Result<Layout> {
        let comps = components(n, jmax);
        let mut offsets = Vec::with_capacity(comps.len());
        let mut total = 0usize;
        for (_, m) in &comps {
            offsets.push(total);
            total += ops.dim(*m)?;
        }
        Ok(Layout {
            comps,
            offsets,
            total,
        })
    }

    fn offset_of(&self, j: i64) -> Option<usize> {
        self.comps
            .iter()
            .position(|(jj, _)| *jj == j)
            .map(|p| self.offsets[p])
    }
}

/// Matrix of `b + uB` from total degree `n` to `n − 1` of
/// `CC ⊗ Q[u^{±1}] / u^{jmax+1}`, restricted to source components with
/// `j ≥ jsrc_min`.
fn bu_matrix(ops: &CyclicOps, n: i64, jmax: i64, jsrc_min: i64) -> Result<(usize, Differential)> {
    let src = Layout::new(ops, n, jmax)?;
    let tgt = Layout::new(ops, n - 1, jmax)?;
    let mut blocks: Vec<(usize, usize, Differential)> = Vec::new();
    let mut ncols = 0usize;
    let mut col_offsets = Vec::new();
    for (p, (j, m)) in src.comps.iter().enumerate() {
        if *j < jsrc_min {
            continue;
        }
        col_offsets.push((p, ncols));
        ncols += ops.dim(*m)?;
        if *m >= 1 {
            if let Some(o) = tgt.offset_of(*j) {
                blocks.push((o, col_offsets.last().unwrap().1, ops.matrix(Op::B, *m)?));
            }
        }
        if *j < jmax {
            if let Some(o) = tgt.offset_of(j + 1) {
                blocks.push((
                    o,
                    col_offsets.last().unwrap().1,
                    ops.matrix(Op::Connes, *m)?,
                ));
            }
        }
    }
    let all_int = blocks
        .iter()
        .all(|(_, _, d)| matches!(d, Differential::Integer(_)));
    if all_int && tgt.total <= u32::MAX as usize {
        let mut cols: Vec<Vec<(u32, i64)>> = alloc::vec![Vec::new(); ncols];
        for (ro, co, d) in &blocks {
            if let Differential::Integer(m) = d {
                for (j, col) in m.cols.iter().enumerate() {
                    cols[co + j].extend(col.iter().map(|(r, v)| (r + *ro as u32, *v)));
                }
            }
        }
        let mut out = IntColumns::new(tgt.total);
        for c in cols {
            out.push(c);
        }
        return Ok((src.total, Differential::Integer(out)));
    }
    let mut triplets = Vec::new();
    for (ro, co, d) in &blocks {
        for (i, j, v) in d.to_sparse().entries() {
            triplets.push((ro + i, co + j, v.clone()));
        }
    }
    Ok((
        src.total,
        Differential::from_sparse(SparseMatrix::from_triplets(tgt.total, ncols, triplets)),
    ))
}

/// Whether the total-degree-`n` element with components `u^j CC_{n+2j}`
/// (keyed by `j`) is a `(b + uB)`-boundary in `CC ⊗ Q[u^{±1}] / u^{jmax+1}`.
pub fn is_bu_boundary(
    ops: &CyclicOps,
    n: i64,
    jmax: i64,
    comps: &BTreeMap<i64, TensorChain>,
) -> Result<bool> {
    let tgt = Layout::new(ops, n, jmax)?;
    let mut rhs = alloc::vec![Rational::zero(); tgt.total];
    for (j, c) in comps {
        if *j > jmax {
            continue;
        }
        let o = tgt
            .offset_of(*j)
            .ok_or_else(|| Error::invalid("component outside the total degree"))?;
        if c.degree as i64 != n + 2 * j {
            return Err(Error::invalid("component has the wrong tensor degree"));
        }
        for (i, v) in &c.terms {
            rhs[o + i] += v;
        }
    }
    if rhs.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    let (_, d) = bu_matrix(ops, n + 1, jmax, i64::MIN)?;
    Ok(solve_linear(&d.to_sparse(), &rhs)?.is_some())
}

/// `(CC ⊗ Q[u^{±1}] / u^{jmax+1}, b + uB)` on total degrees `lo..=hi`.
fn truncated_complex(ops: &CyclicOps, lo: i64, hi: i64, jmax: i64) -> Result<ChainComplex> {
    let dims = (lo..=hi)
        .map(|n| Layout::new(ops, n, jmax).map(|l| l.total))
        .collect::<Result<Vec<_>>>()?;
    let diffs = (lo + 1..=hi)
        .map(|n| bu_matrix(ops, n, jmax, i64::MIN).map(|(_, d)| d))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(lo, dims, diffs)
}

/// The cyclic complex `(CC ⊗ Q[u^{-1}], b + uB)` on total degrees
/// `0..=max_deg` (top side truncated).
pub fn cyclic_complex(ops: &CyclicOps, max_deg: usize) -> Result<ChainComplex> {
    Ok(truncated_complex(ops, 0, max_deg as i64, 0)?.with_closed_sides(true, false))
}

/// `dim HC_n(A)` for `0 ≤ n ≤ max_deg`, all certified (one extra degree is
/// built so the top is exact).
pub fn cyclic_homology(
    a: &FDAlgebra,
    max_deg: usize,
    cap: usize,
) -> Result<BTreeMap<usize, HomologyDim>> {
    let ops = CyclicOps::with_cap(a, cap);
    let c = cyclic_complex(&ops, max_deg + 1)?;
    Ok(c.homology_dims_unchecked()
        .into_iter()
        .filter(|(k, _)| *k <= max_deg as i64)
        .map(|(k, h)| (k as usize, h))
        .collect())
}

/// One truncation level of the periodic computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpRun {
    /// Quotient by `u^{depth}`: components `u^j` with `j < depth`.
    pub depth: i64,
    /// Largest tensor degree touched by this run.
    pub max_tensor_degree: usize,
    /// Homology of the truncated complex in total degrees 0 and 1.
    pub truncated_dims: [usize; 2],
    /// Rank of the map on homology induced by dropping one more `u`-power.
    pub one_step_image: [usize; 2],
    /// Same for two more `u`-powers.
    pub two_step_image: [usize; 2],
}

/// Periodic cyclic homology with its stabilization certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpReport {
    /// `dim HP_even`, when stabilized.
    pub even: Option<usize>,
    /// `dim HP_odd`, when stabilized.
    pub odd: Option<usize>,
    pub runs: [HpRun; 2],
}

impl HpReport {
    pub fn is_stabilized(&self) -> bool {
        self.even.is_some() && self.odd.is_some()
    }
}

/// Rank of `H_n(Q_{depth+steps}) → H_n(Q_{depth})` for the quotient map
/// of `u`-truncations, from ranks only:
/// `dim π(Z') − dim B = (dim Z' − dim Z'∩K) − rank d_{n+1}` where `K` is the
/// kernel of the projection.
fn image_rank(ops: &CyclicOps, n: i64, depth: i64, steps: i64) -> Result<usize> {
    let big = depth + steps - 1;
    let (dim_big, d_big) = bu_matrix(ops, n, big, i64::MIN)?;
    let (_, d_k) = bu_matrix(ops, n, big, depth)?;
    let (_, d_small_up) = bu_matrix(ops, n + 1, depth - 1, i64::MIN)?;
    let z_big = dim_big - d_big.rank();
    let z_k = d_k.cols() - d_k.rank();
    Ok(z_big - z_k - d_small_up.rank())
}

fn run(ops: &CyclicOps, depth: i64) -> Result<HpRun> {
    let mut truncated = [0usize; 2];
    let mut one = [0usize; 2];
    let mut two = [0usize; 2];
    for n in 0..2i64 {
        let c = truncated_complex(ops, n - 1, n + 1, depth - 1)?;
        truncated[n as usize] = c.homology_dims_unchecked()[&n].dim;
        one[n as usize] = image_rank(ops, n, depth, 1)?;
        two[n as usize] = image_rank(ops, n, depth, 2)?;
    }
    Ok(HpRun {
        depth,
        max_tensor_degree: (2 * depth + 3) as usize,
        truncated_dims: truncated,
        one_step_image: one,
        two_step_image: two,
    })
}

/// `HP_even`, `HP_odd` as the stable images of the `u`-truncated cyclic
/// homologies. Two runs are made, the second using tensor degrees two
/// higher than the first; a parity is reported only when in both runs the
/// one- and two-step images agree and the runs agree with each other.
pub fn periodic_cyclic_homology(
    a: &FDAlgebra,
    max_tensor_deg: usize,
    cap: usize,
) -> Result<HpReport> {
    if max_tensor_deg < 7 {
        return Err(Error::WindowTooSmall(
            "periodic cyclic homology needs tensor degrees up to at least 7".into(),
        ));
    }
    let ops = CyclicOps::with_cap(a, cap);
    let depth = ((max_tensor_deg - 5) / 2) as i64;
    let first = run(&ops, depth)?;
    let second = run(&ops, depth + 1)?;
    let stable = |p: usize| -> Option<usize> {
        let v = first.two_step_image[p];
        (first.one_step_image[p] == v
            && second.one_step_image[p] == v
            && second.two_step_image[p] == v)
            .then_some(v)
    };
    Ok(HpReport {
        even: stable(0),
        odd: stable(1),
        runs: [first, second],
    })
}

/// Homology of the bar complex `(A^{⊗(k+1)}, b′)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarReport {
    pub homology: BTreeMap<usize, HomologyDim>,
}

impl BarReport {
    /// Degrees that are certified and exact.
    pub fn exact_degrees(&self) -> Vec<usize> {
        self.homology
            .iter()
            .filter(|(_, h)| h.certified && h.dim == 0)
            .map(|(k, _)| *k)
            .collect()
    }

    /// Every certified degree is exact.
    pub fn is_exact(&self) -> bool {
        self.homology.values().all(|h| !h.certified || h.dim == 0)
    }
}

/// Exactness of `b′` on degrees `0..max_deg` (degree `max_deg` is the
/// truncation and uncertified).
pub fn bar_acyclicity_probe(a: &FDAlgebra, max_deg: usize, cap: usize) -> Result<BarReport> {
    let ops = CyclicOps::with_cap(a, cap);
    let d = a.dim();
    let dims = (0..=max_deg)
        .map(|k| {
            d.checked_pow(k as u32 + 1).ok_or(Error::ResourceLimit {
                what: "bar tensor dimension".into(),
                requested: usize::MAX,
                cap,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let diffs = (1..=max_deg)
        .map(|k| ops.bar_matrix(k))
        .collect::<Result<Vec<_>>>()?;
    let c = ChainComplex::new(0, dims, diffs)?.with_closed_sides(true, false);
    Ok(BarReport {
        homology: c
            .homology_dims_unchecked()
            .into_iter()
            .map(|(k, h)| (k as usize, h))
            .collect(),
    })
}
