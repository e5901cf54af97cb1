//! `(Ω ⊗ Q[u, u⁻¹], u·d − u²·c)` with `u` of degree −2: the component
//! `u^j ⊗ Ω^p` sits in total degree `p − 2j`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::CDGAModel;
use crate::complex::{
    ChainComplex, ChainMap, Differential, FilteredComplex, HomologyDim, SpectralSequence,
};
use crate::linalg::echelon::SparseVec;
use crate::linalg::{factorial, Rational, SparseMatrix, Vector};
use crate::{Error, Result};

/// Range `jmin ≤ j ≤ jmax` of `u`-exponents kept. The kept part is a
/// subcomplex (`j ≥ jmin`) of a quotient (`j ≤ jmax`) of the Laurent
/// complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub jmin: i64,
    pub jmax: i64,
}

impl Window {
    pub fn new(jmin: i64, jmax: i64) -> Result<Self> {
        if jmin > jmax {
            return Err(Error::invalid(format!("empty u-window [{jmin}, {jmax}]")));
        }
        Ok(Window { jmin, jmax })
    }

    /// `−w ≤ j ≤ w`.
    pub fn symmetric(w: i64) -> Result<Self> {
        Window::new(-w, w)
    }

    pub fn widened(self) -> Window {
        Window {
            jmin: self.jmin - 1,
            jmax: self.jmax + 1,
        }
    }
}

/// The truncated twisted complex with its coordinate layout.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub complex: ChainComplex,
    pub window: Window,
    top: usize,
    /// Per total degree, `(j, basis index)` of each coordinate.
    layout: BTreeMap<i64, Vec<(i64, usize)>>,
}

impl TwistedComplex {
    pub fn layout(&self, n: i64) -> &[(i64, usize)] {
        self.layout.get(&n).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, n: i64, j: i64, b: usize) -> Option<usize> {
        self.layout.get(&n)?.iter().position(|x| *x == (j, b))
    }

    /// Every Laurent component `u^j Ω^{n+2j}` of degree `n` is inside the
    /// window.
    pub fn is_covered(&self, n: i64) -> bool {
        let lo = (-n).div_euclid(2) + i64::from((-n).rem_euclid(2) != 0);
        let hi = (self.top as i64 - n).div_euclid(2);
        lo > hi || (lo >= self.window.jmin && hi <= self.window.jmax)
    }

    /// Homology in degree `n` equals that of the full Laurent complex.
    pub fn is_exact_degree(&self, n: i64) -> bool {
        self.is_covered(n - 1) && self.is_covered(n) && self.is_covered(n + 1)
    }
}

fn check_inputs(m: &CDGAModel, c: &[Rational]) -> Result<()> {
    m.validate()
        .map_err(|v| Error::violation(format!("model: {v}")))?;
    if c.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: c.len(),
        });
    }
    if !m.is_homogeneous(c, 3) {
        return Err(Error::invalid("twist must be homogeneous of degree 3"));
    }
    if m.d(c).iter().any(|x| !x.is_zero()) {
        return Err(Error::violation("twist is not closed: dc != 0"));
    }
    Ok(())
}

fn build_layout(m: &CDGAModel, w: Window) -> BTreeMap<i64, Vec<(i64, usize)>> {
    let top = m.top_degree() as i64;
    let mut layout = BTreeMap::new();
    for n in -2 * w.jmax..=top - 2 * w.jmin {
        let mut v = Vec::new();
        for j in w.jmin..=w.jmax {
            let p = n + 2 * j;
            if (0..=top).contains(&p) {
                v.extend(m.basis_of_degree(p as usize).into_iter().map(|b| (j, b)));
            }
        }
        layout.insert(n, v);
    }
    layout
}

/// Matrix of "multiply by `u^shift · x`" from degree `n` to `n − deg(x) + 2·shift`,
/// for homogeneous `x`, inside the window.
#[allow(clippy::too_many_arguments)]
fn multiplication_block(
    m: &CDGAModel,
    layout: &BTreeMap<i64, Vec<(i64, usize)>>,
    n: i64,
    tgt_n: i64,
    x: &[Rational],
    shift: i64,
    jmax: i64,
    scale: &Rational,
    trip: &mut Vec<(usize, usize, Rational)>,
) {
    let (Some(src), Some(tgt)) = (layout.get(&n), layout.get(&tgt_n)) else {
        return;
    };
    for (col, (j, b)) in src.iter().enumerate() {
        if j + shift > jmax {
            continue;
        }
        let prod = m.mul(x, &m.basis_vector(*b));
        for (k, v) in prod.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let row = tgt
                .iter()
                .position(|t| *t == (j + shift, k))
                .expect("target component in layout");
            trip.push((row, col, v * scale));
        }
    }
}

/// The complex `u·d − u²·c` on the window (total degrees `−2·jmax` to
/// `top − 2·jmin`).
pub fn twisted_complex(m: &CDGAModel, c: &[Rational], w: Window) -> Result<TwistedComplex> {
    check_inputs(m, c)?;
    let layout = build_layout(m, w);
    let lo = *layout.keys().next().expect("nonempty");
    let hi = *layout.keys().next_back().expect("nonempty");
    let one = Rational::from_integer(1.into());
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let (src, tgt) = (&layout[&n], &layout[&(n - 1)]);
        let mut trip = Vec::new();
        for (col, (j, b)) in src.iter().enumerate() {
            if *j < w.jmax {
                for (k, v) in m.d_basis(*b) {
                    let row = tgt
                        .iter()
                        .position(|t| *t == (j + 1, *k))
                        .expect("target component in layout");
                    trip.push((row, col, v.clone()));
                }
            }
        }
        multiplication_block(m, &layout, n, n - 1, c, 2, w.jmax, &-one.clone(), &mut trip);
        diffs.push(Differential::from_sparse(SparseMatrix::from_triplets(
            tgt.len(),
            src.len(),
            trip,
        )));
    }
    let dims = layout.values().map(|v| v.len()).collect();
    let complex = ChainComplex::new(lo, dims, diffs)?;
    Ok(TwistedComplex {
        complex,
        window: w,
        top: m.top_degree(),
        layout,
    })
}

/// Twisted cohomology dimensions per total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCohomology {
    pub window: Window,
    /// Certified when every Laurent component of degrees `n − 1, n, n + 1`
    /// lies in the window and the once-widened window gives the same
    /// dimension.
    pub dims: BTreeMap<i64, HomologyDim>,
}

impl TwistedCohomology {
    pub fn certified(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.dims
            .iter()
            .filter(|(_, h)| h.certified)
            .map(|(n, h)| (*n, h.dim))
    }
}

pub fn twisted_cohomology(m: &CDGAModel, c: &[Rational], w: Window) -> Result<TwistedCohomology> {
    let tc = twisted_complex(m, c, w)?;
    let wide = twisted_complex(m, c, w.widened())?;
    let h = tc.complex.homology_dims()?;
    let hw = wide.complex.homology_dims()?;
    let dims = h
        .into_iter()
        .map(|(n, x)| {
            let agree = hw.get(&n).map(|y| y.dim) == Some(x.dim);
            (
                n,
                HomologyDim {
                    dim: x.dim,
                    certified: agree && tc.is_exact_degree(n),
                },
            )
        })
        .collect();
    Ok(TwistedCohomology { window: w, dims })
}

/// Terms `β^m / m!` of `e^{uβ}` up to nilpotency.
fn exp_terms(m: &CDGAModel, beta: &[Rational]) -> Vec<Vector> {
    let mut out = alloc::vec![m.unit()];
    let mut power = m.unit();
    for k in 1.. {
        power = m.mul(&power, beta);
        if power.iter().all(Zero::is_zero) {
            break;
        }
        let inv = Rational::from_integer(1.into()) / factorial(k);
        out.push(power.iter().map(|x| x * &inv).collect());
    }
    out
}

/// Multiplication by `e^{uβ}` from the `c`-twisted complex to the
/// `(c + dβ)`-twisted complex on the same window.
pub fn gauge_transform(
    m: &CDGAModel,
    c: &[Rational],
    beta: &[Rational],
    w: Window,
) -> Result<ChainMap> {
    if beta.len() != m.dim() || !m.is_homogeneous(beta, 2) {
        return Err(Error::invalid(
            "gauge parameter must be homogeneous of degree 2",
        ));
    }
    let src = twisted_complex(m, c, w)?;
    let c2: Vector = c.iter().zip(m.d(beta)).map(|(a, b)| a + b).collect();
    let tgt = twisted_complex(m, &c2, w)?;
    let one = Rational::from_integer(1.into());
    let terms = exp_terms(m, beta);
    let mut components = BTreeMap::new();
    for n in src.complex.degrees() {
        let mut trip = Vec::new();
        for (k, t) in terms.iter().enumerate() {
            multiplication_block(m, &src.layout, n, n, t, k as i64, w.jmax, &one, &mut trip);
        }
        let (rows, cols) = (tgt.layout(n).len(), src.layout(n).len());
        components.insert(
            n,
            Differential::from_sparse(SparseMatrix::from_triplets(rows, cols, trip)),
        );
    }
    ChainMap::new(src.complex, tgt.complex, components)
}

/// The filtration by form degree of the twisted complex and the checks
/// made on its pages.
#[derive(Clone, Debug)]
pub struct USpectralReport {
    pub ss: SpectralSequence,
    /// `dim E₂^{p,q}` with `p` the form degree and `q = n − p`, over
    /// certified total degrees `n`.
    pub e2: BTreeMap<(usize, i64), usize>,
    pub e2_matches_cohomology: bool,
    /// `d₃` agrees with `[x] ↦ [−u²·c·x]` on every page-3 slot.
    pub d3_matches_cup: bool,
    pub even_differentials_vanish: bool,
    /// Pages from `E₄` on all agree with the last computed page.
    pub e4_is_e_infinity: bool,
    pub e_infinity_matches_twisted: bool,
    pub certified_degrees: Vec<i64>,
}

/// Spectral sequence of the filtration `F_ℓ` spanned by components of form
/// degree `≥ −ℓ`: `d₁ = u·d`, `E₂ = H(Ω, d)` on `u`-lines, `d₃ = −u²c`.
pub fn u_filtration_spectral_sequence(
    m: &CDGAModel,
    c: &[Rational],
    w: Window,
    r_max: usize,
) -> Result<USpectralReport> {
    if r_max < 4 {
        return Err(Error::invalid(
            "need at least four pages to compare E₄ with E_∞",
        ));
    }
    let tc = twisted_complex(m, c, w)?;
    let levels = tc
        .complex
        .degrees()
        .map(|n| {
            tc.layout(n)
                .iter()
                .map(|(_, b)| -(m.degree(*b) as i64))
                .collect()
        })
        .collect();
    let f = FilteredComplex::new(tc.complex.clone(), levels)?;
    let ss = crate::complex::spectral_sequence_pages(&f, r_max)?;
    let tw = twisted_cohomology(m, c, w)?;
    let certified: Vec<i64> = tw.certified().map(|(n, _)| n).collect();
    let coh = m.cohomology_dims();

    let page = |r: usize| ss.pages.iter().find(|p| p.r == r);
    let mut e2 = BTreeMap::new();
    let mut e2_ok = true;
    if let Some(p2) = page(2) {
        for &n in &certified {
            for p in 0..=m.top_degree() {
                let dim = p2.dim(-(p as i64), n);
                let j2 = p as i64 - n;
                let expected = if j2.rem_euclid(2) == 0 && (w.jmin..=w.jmax).contains(&(j2 / 2)) {
                    coh[p]
                } else {
                    0
                };
                e2_ok &= dim == expected;
                e2.insert((p, n - p as i64), dim);
            }
        }
    } else {
        e2_ok = false;
    }

    let mut d3_ok = page(3).is_some();
    if let Some(p3) = page(3) {
        let neg_one = -Rational::from_integer(1.into());
        for ((lvl, n), entry) in &p3.entries {
            if entry.dim == 0 {
                continue;
            }
            let target = p3.entries.get(&(lvl - 3, n - 1)).filter(|e| e.dim > 0);
            let engine = p3.differentials.get(&(*lvl, *n));
            for (col, rep) in entry.reps.iter().enumerate() {
                let mut y = SparseVec::new();
                for (idx, coef) in rep {
                    let (j, b) = tc.layout(*n)[*idx];
                    if -(m.degree(b) as i64) != *lvl || j + 2 > w.jmax {
                        continue;
                    }
                    let prod = m.mul(c, &m.basis_vector(b));
                    for (k, v) in prod.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        let row = tc.index_of(n - 1, j + 2, k).expect("target in layout");
                        let e = y.entry(row).or_insert_with(Rational::zero);
                        *e += &neg_one * coef * v;
                    }
                }
                y.retain(|_, v| !v.is_zero());
                let Some(t) = target else { continue };
                let cup = t.coordinates(&y);
                let eng: Option<Vec<Rational>> =
                    engine.map(|mat| (0..t.dim).map(|r| mat.get(r, col)).collect());
                let eng = eng.unwrap_or_else(|| alloc::vec![Rational::zero(); t.dim]);
                d3_ok &= cup.as_ref() == Some(&eng);
            }
        }
    }

    let even_ok = ss
        .pages
        .iter()
        .filter(|p| p.r >= 2 && p.r % 2 == 0)
        .all(|p| p.differentials.values().all(|d| d.is_zero()));
    let last = ss.last();
    let degrees: Vec<i64> = tc.complex.degrees().collect();
    let e4_ok = ss.consistent
        && page(4).is_some_and(|p4| {
            degrees
                .iter()
                .all(|&n| p4.total_dim(n) == last.total_dim(n))
        })
        && ss
            .pages
            .iter()
            .filter(|p| p.r >= 4)
            .all(|p| p.differentials.values().all(|d| d.is_zero()));
    let einf_ok = tw.certified().all(|(n, dim)| last.total_dim(n) == dim);
    Ok(USpectralReport {
        ss,
        e2,
        e2_matches_cohomology: e2_ok,
        d3_matches_cup: d3_ok,
        even_differentials_vanish: even_ok,
        e4_is_e_infinity: e4_ok,
        e_infinity_matches_twisted: einf_ok,
        certified_degrees: certified,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::complex::cone_quasi_iso_test;
    use crate::linalg::rat;

    fn scaled(v: Vector, k: i64) -> Vector {
        v.into_iter().map(|x| x * rat(k)).collect()
    }

    #[test]
    fn sphere_twist_kills_everything() {
        let m = sphere3();
        let x3 = m.element_by_label("x3").unwrap();
        let w = Window::symmetric(3).unwrap();
        let tc = twisted_complex(&m, &x3, w).unwrap();
        assert!(tc.complex.validate().is_ok());
        // D(u^j ⊗ 1) = −u^{j+2} ⊗ x₃
        let d = tc.complex.differential_matrix(0).unwrap();
        let src = tc.index_of(0, 0, 0).unwrap();
        let tgt = tc.index_of(-1, 2, 1).unwrap();
        assert_eq!(d.get(tgt, src), rat(-1));
        let h = twisted_cohomology(&m, &x3, w).unwrap();
        assert!(h.certified().count() >= 4);
        assert!(h.certified().all(|(_, d)| d == 0));
        let h0 = twisted_cohomology(&m, &m.zero_vector(), w).unwrap();
        assert!(h0.certified().all(|(_, d)| d == 1));
    }

    #[test]
    fn s2_s3_twists() {
        let m = s2_times_s3();
        let b3 = m.element_by_label("b3").unwrap();
        let w = Window::symmetric(3).unwrap();
        for k in [1, 2] {
            let h = twisted_cohomology(&m, &scaled(b3.clone(), k), w).unwrap();
            assert!(h.certified().count() >= 4);
            assert!(h.certified().all(|(_, d)| d == 0));
        }
        let h = twisted_cohomology(&m, &m.zero_vector(), w).unwrap();
        assert!(h.certified().all(|(_, d)| d == 2));
        // D(a₂) = −k·u²·a₂b₃
        let tc = twisted_complex(&m, &scaled(b3, 2), w).unwrap();
        let a2 = m.labels().iter().position(|l| l == "a2").unwrap();
        let a2b3 = m.labels().iter().position(|l| l == "a2b3").unwrap();
        let d = tc.complex.differential_matrix(2).unwrap();
        assert_eq!(
            d.get(
                tc.index_of(1, 2, a2b3).unwrap(),
                tc.index_of(2, 0, a2).unwrap()
            ),
            rat(-2)
        );
    }

    #[test]
    fn open_twist_is_rejected() {
        let m = torus3_transgression();
        let f = m.element_by_label("f").unwrap();
        let w = Window::symmetric(2).unwrap();
        assert!(matches!(twisted_complex(&m, &f, w), Err(Error::Invalid(_))));
        assert!(twisted_complex(&m, &m.element_by_label("e1f").unwrap(), w).is_ok());
        let mut b = crate::cdga::MonomialBuilder::new();
        let x = b.generator("x", 3);
        let y = b.generator("y", 4);
        b.set_differential(x, &[(1, &[(y, 1)])]);
        b.kill(&[(y, 2)]);
        let open = b.build().unwrap();
        let x = open.element_by_label("x").unwrap();
        assert!(matches!(
            twisted_complex(&open, &x, w),
            Err(Error::Violation(_))
        ));
    }

    #[test]
    fn gauge_map_is_an_invertible_chain_map() {
        let m = torus3_transgression();
        let w = Window::symmetric(3).unwrap();
        let mut beta = m.element_by_label("f").unwrap();
        beta[m.labels().iter().position(|l| l == "e1e2").unwrap()] = rat(3);
        let g = gauge_transform(&m, &m.zero_vector(), &beta, w).unwrap();
        assert_eq!(g.validate(), Ok(()));
        let c2 = m.d(&beta);
        let neg: Vector = beta.iter().map(|x| -x).collect();
        let inv = gauge_transform(&m, &c2, &neg, w).unwrap();
        for n in g.source.degrees() {
            let (a, b) = (
                g.component(n).unwrap().to_sparse(),
                inv.component(n).unwrap().to_sparse(),
            );
            assert_eq!(b.mul(&a).unwrap(), SparseMatrix::identity(a.cols()));
        }
        let report = cone_quasi_iso_test(&g).unwrap();
        assert!(report.is_quasi_iso());
        let h1 = twisted_cohomology(&m, &m.zero_vector(), w).unwrap();
        let h2 = twisted_cohomology(&m, &c2, w).unwrap();
        assert_eq!(h1, h2);
    }

    #[test]
    fn spectral_sequence_on_s2_s3() {
        let m = s2_times_s3();
        let b3 = m.element_by_label("b3").unwrap();
        let w = Window::symmetric(3).unwrap();
        let rep = u_filtration_spectral_sequence(&m, &b3, w, 7).unwrap();
        assert!(rep.ss.consistent);
        assert!(rep.e2_matches_cohomology);
        assert!(rep.d3_matches_cup);
        assert!(rep.even_differentials_vanish);
        assert!(rep.e4_is_e_infinity);
        assert!(rep.e_infinity_matches_twisted);
        for ((_, q), dim) in &rep.e2 {
            if q.rem_euclid(2) == 1 {
                assert_eq!(*dim, 0);
            }
        }
        for n in &rep.certified_degrees {
            assert_eq!(rep.ss.last().total_dim(*n), 0);
        }
    }

    #[test]
    fn spectral_sequence_untwisted_and_sphere() {
        let m = sphere3();
        let w = Window::symmetric(2).unwrap();
        let zero = u_filtration_spectral_sequence(&m, &m.zero_vector(), w, 6).unwrap();
        assert!(
            zero.e2_matches_cohomology && zero.e4_is_e_infinity && zero.e_infinity_matches_twisted
        );
        let twisted =
            u_filtration_spectral_sequence(&m, &m.element_by_label("x3").unwrap(), w, 6).unwrap();
        assert!(twisted.d3_matches_cup && twisted.e_infinity_matches_twisted);
    }
}
