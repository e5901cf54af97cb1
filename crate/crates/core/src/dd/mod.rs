//! The Čech route from projective transition data to an integral
//! 3-cocycle: lifts `ĝ_{ij}`, the scalar 2-cocycle `ε_{ijk}`, logarithms
//! `w_{ijk}` and `n_{ijkl} = (δw)_{ijkl}`, with classes read off by Smith
//! normal form.
//!
//! Projective unitaries are modelled by monomial matrices whose nonzero
//! entries are `N`-th roots of unity, stored as exponents.

mod nerve;

pub use nerve::{describe_group, ClassCoordinates, CohomologyGroup, Nerve};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::{Error, Result};

/// `M e_j = ζ^{exps[j]} e_{perm[j]}` with `ζ = e^{2πi/N}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialUnitary {
    pub modulus: u64,
    pub perm: Vec<usize>,
    pub exps: Vec<u64>,
}

impl MonomialUnitary {
    pub fn new(modulus: u64, perm: Vec<usize>, exps: Vec<u64>) -> Result<Self> {
        let n = perm.len();
        if modulus == 0 || exps.len() != n {
            return Err(Error::invalid(
                "monomial unitary needs N ≥ 1 and one exponent per column",
            ));
        }
        let mut seen = alloc::vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::invalid("monomial unitary needs a permutation"));
            }
            seen[p] = true;
        }
        Ok(MonomialUnitary {
            modulus,
            perm,
            exps: exps.into_iter().map(|e| e % modulus).collect(),
        })
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        Self::scalar(modulus, n, 0)
    }

    /// `ζ^s · 1`.
    pub fn scalar(modulus: u64, n: usize, s: u64) -> Self {
        MonomialUnitary {
            modulus,
            perm: (0..n).collect(),
            exps: alloc::vec![s % modulus; n],
        }
    }

    /// Clock `C e_j = ζ^j e_j` of size `N`.
    pub fn clock(modulus: u64) -> Self {
        let n = modulus as usize;
        MonomialUnitary {
            modulus,
            perm: (0..n).collect(),
            exps: (0..modulus).collect(),
        }
    }

    /// Shift `S e_j = e_{j+1 mod N}` of size `N`.
    pub fn shift(modulus: u64) -> Self {
        let n = modulus as usize;
        MonomialUnitary {
            modulus,
            perm: (0..n).map(|j| (j + 1) % n).collect(),
            exps: alloc::vec![0; n],
        }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn mul(&self, other: &MonomialUnitary) -> MonomialUnitary {
        MonomialUnitary {
            modulus: self.modulus,
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
            exps: other
                .perm
                .iter()
                .zip(&other.exps)
                .map(|(&j, e)| (e + self.exps[j]) % self.modulus)
                .collect(),
        }
    }

    pub fn inverse(&self) -> MonomialUnitary {
        let n = self.size();
        let mut perm = alloc::vec![0; n];
        let mut exps = alloc::vec![0; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            exps[self.perm[j]] = (self.modulus - self.exps[j]) % self.modulus;
        }
        MonomialUnitary {
            modulus: self.modulus,
            perm,
            exps,
        }
    }

    /// `ζ^s · M`.
    pub fn times_scalar(&self, s: u64) -> MonomialUnitary {
        let mut out = self.clone();
        for e in &mut out.exps {
            *e = (*e + s) % self.modulus;
        }
        out
    }

    /// The `s` with `self = ζ^s · other`, if the two agree projectively.
    pub fn scalar_ratio(&self, other: &MonomialUnitary) -> Option<u64> {
        if self.perm != other.perm || self.modulus != other.modulus || self.size() == 0 {
            return None;
        }
        let m = self.modulus;
        let s = (self.exps[0] + m - other.exps[0]) % m;
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| (a + m - b) % m == s)
            .then_some(s)
    }

    /// The representative whose first column entry has exponent 0.
    pub fn canonical(&self) -> MonomialUnitary {
        match self.exps.first() {
            Some(&e0) => self.times_scalar(self.modulus - e0),
            None => self.clone(),
        }
    }
}

/// Transition data on the edges `i < j` of a nerve, each an element of the
/// monomial group modulo scalars; `g_{ji} = g_{ij}⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveCocycle {
    pub nerve: Nerve,
    pub modulus: u64,
    pub size: usize,
    pub edges: BTreeMap<(usize, usize), MonomialUnitary>,
}

impl ProjectiveCocycle {
    pub fn new(
        nerve: Nerve,
        modulus: u64,
        size: usize,
        edges: BTreeMap<(usize, usize), MonomialUnitary>,
    ) -> Result<Self> {
        for e in nerve.simplices(1) {
            let g = edges.get(&(e[0], e[1])).ok_or_else(|| {
                Error::invalid(alloc::format!("edge {}-{} has no transition", e[0], e[1]))
            })?;
            if g.modulus != modulus || g.size() != size {
                return Err(Error::invalid(alloc::format!(
                    "edge {}-{} has the wrong N or size",
                    e[0],
                    e[1]
                )));
            }
        }
        if edges
            .keys()
            .any(|(i, j)| nerve.index_of(&[*i, *j]).is_none())
        {
            return Err(Error::invalid("transition on a pair that is not an edge"));
        }
        Ok(ProjectiveCocycle {
            nerve,
            modulus,
            size,
            edges,
        })
    }

    /// `g_{ij} = h_i h_j⁻¹` on every edge: always a cocycle, and genuinely
    /// liftable.
    pub fn from_vertex_data(nerve: Nerve, h: &[MonomialUnitary]) -> Result<Self> {
        if h.len() != nerve.vertex_count() || h.is_empty() {
            return Err(Error::invalid("need one element per vertex"));
        }
        let edges = nerve
            .simplices(1)
            .iter()
            .map(|e| ((e[0], e[1]), h[e[0]].mul(&h[e[1]].inverse())))
            .collect();
        ProjectiveCocycle::new(nerve, h[0].modulus, h[0].size(), edges)
    }

    fn edge(&self, i: usize, j: usize) -> &MonomialUnitary {
        &self.edges[&(i, j)]
    }
}

/// The first triangle on which `g_{ij} g_{jk} ≠ g_{ik}` projectively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuViolation {
    pub triangle: [usize; 3],
}

impl fmt::Display for PuViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k] = self.triangle;
        write!(f, "g_{i}{j} g_{j}{k} differs from g_{i}{k} modulo scalars")
    }
}

pub fn check_pu_cocycle(g: &ProjectiveCocycle) -> core::result::Result<(), PuViolation> {
    for t in g.nerve.simplices(2) {
        let (i, j, k) = (t[0], t[1], t[2]);
        if g.edge(i, j)
            .mul(g.edge(j, k))
            .scalar_ratio(g.edge(i, k))
            .is_none()
        {
            return Err(PuViolation {
                triangle: [i, j, k],
            });
        }
    }
    Ok(())
}

/// How to choose `ĝ_{ij}` from the projective class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftRule {
    /// First column entry normalized to exponent 0.
    Canonical,
    /// The stored representatives as given.
    AsGiven,
    /// Canonical lift times `ζ^{s_{ij}}`; missing edges get `s = 0`.
    Shifted(BTreeMap<(usize, usize), u64>),
}

impl LiftRule {
    /// A canonical lift re-chosen by a random scalar on every edge.
    pub fn random_shift<R: Rng + ?Sized>(rng: &mut R, g: &ProjectiveCocycle) -> Self {
        LiftRule::Shifted(
            g.edges
                .keys()
                .map(|e| (*e, rng.gen_range(0..g.modulus)))
                .collect(),
        )
    }

    fn lift(&self, edge: (usize, usize), g: &MonomialUnitary) -> MonomialUnitary {
        match self {
            LiftRule::Canonical => g.canonical(),
            LiftRule::AsGiven => g.clone(),
            LiftRule::Shifted(s) => g
                .canonical()
                .times_scalar(s.get(&edge).copied().unwrap_or(0)),
        }
    }
}

/// A `Z/N`-valued Čech cochain of degree `degree`, indexed like the
/// nerve's simplices of that dimension, values in `[0, N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZnCochain {
    pub modulus: u64,
    pub degree: usize,
    pub values: Vec<u64>,
}

impl ZnCochain {
    pub fn is_cocycle(&self, nerve: &Nerve) -> bool {
        nerve
            .coboundary_mod(self.degree, &self.values, self.modulus)
            .iter()
            .all(|&x| x == 0)
    }

    /// `self + δη` for a `Z/N` cochain `η` of one degree lower.
    pub fn add_coboundary(&self, nerve: &Nerve, eta: &[u64]) -> ZnCochain {
        let d = nerve.coboundary_mod(self.degree - 1, eta, self.modulus);
        ZnCochain {
            values: self
                .values
                .iter()
                .zip(d)
                .map(|(a, b)| (a + b) % self.modulus)
                .collect(),
            ..self.clone()
        }
    }
}

/// `ε_{ijk}` from `ĝ_{ij} ĝ_{jk} = ĝ_{ik} ε_{ijk}`; checks that every
/// discrepancy is scalar and that `δε = 0`.
pub fn epsilon_from_lifts(g: &ProjectiveCocycle, rule: &LiftRule) -> Result<ZnCochain> {
    let lifts: BTreeMap<(usize, usize), MonomialUnitary> = g
        .edges
        .iter()
        .map(|(e, u)| (*e, rule.lift(*e, u)))
        .collect();
    for (e, l) in &lifts {
        if l.scalar_ratio(&g.edges[e]).is_none() {
            return Err(Error::violation(
                "lift is not projectively equal to the transition",
            ));
        }
    }
    let values = g
        .nerve
        .simplices(2)
        .iter()
        .map(|t| {
            let (i, j, k) = (t[0], t[1], t[2]);
            lifts[&(i, j)]
                .mul(&lifts[&(j, k)])
                .scalar_ratio(&lifts[&(i, k)])
                .ok_or_else(|| {
                    Error::violation(alloc::format!(
                        "non-scalar discrepancy on triangle {i}{j}{k}"
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let eps = ZnCochain {
        modulus: g.modulus,
        degree: 2,
        values,
    };
    if !eps.is_cocycle(&g.nerve) {
        return Err(Error::violation("ε is not a cocycle"));
    }
    Ok(eps)
}

/// A basis of the `Z/p` cocycles of degree `degree`, for `p` prime.
pub fn cocycle_basis_mod_prime(nerve: &Nerve, degree: usize, prime: u64) -> Vec<ZnCochain> {
    let count = nerve.count(degree);
    let d = nerve.coboundary_matrix(degree).to_dense();
    let reduce = |x: &num_bigint::BigInt| -> u64 {
        let r = x % num_bigint::BigInt::from(prime);
        let r = i64::try_from(r).expect("residue fits");
        r.rem_euclid(prime as i64) as u64
    };
    let inverse = |a: u64| -> u64 {
        let (mut acc, mut base, mut e) = (1u64, a % prime, prime - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % prime;
            }
            base = base * base % prime;
            e >>= 1;
        }
        acc
    };
    let mut rows: Vec<Vec<u64>> = d.iter().map(|r| r.iter().map(reduce).collect()).collect();
    let mut pivots = Vec::new();
    for c in 0..count {
        let top = pivots.len();
        let Some(p) = (top..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(top, p);
        let inv = inverse(rows[top][c]);
        rows[top].iter_mut().for_each(|x| *x = *x * inv % prime);
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != top && row[c] != 0 {
                let f = row[c];
                row.iter_mut()
                    .zip(&pivot_row)
                    .for_each(|(a, b)| *a = (*a + prime - f * b % prime) % prime);
            }
        }
        pivots.push(c);
    }
    (0..count)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = alloc::vec![0u64; count];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (prime - rows[r][f]) % prime;
            }
            ZnCochain {
                modulus: prime,
                degree,
                values: v,
            }
        })
        .collect()
}

/// `n_{ijkl} = w_{jkl} − w_{ikl} + w_{ijl} − w_{ijk}` for the logarithm
/// branch `w = ε̄/N` with `ε̄ ∈ [0, N)`; integral because `δε ≡ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechThreeCocycle {
    pub values: Vec<i64>,
}

pub fn dd_cocycle(nerve: &Nerve, eps: &ZnCochain) -> Result<CechThreeCocycle> {
    if eps.degree != 2 || eps.values.len() != nerve.count(2) {
        return Err(Error::invalid("ε must be a 2-cochain on the nerve"));
    }
    if !eps.is_cocycle(nerve) {
        return Err(Error::violation("ε is not a cocycle"));
    }
    let lifted: Vec<i64> = eps.values.iter().map(|&x| x as i64).collect();
    let n = eps.modulus as i64;
    let values = nerve
        .coboundary(2, &lifted)
        .into_iter()
        .map(|x| {
            debug_assert_eq!(x % n, 0);
            x / n
        })
        .collect();
    let out = CechThreeCocycle { values };
    if nerve.coboundary(3, &out.values).iter().any(|&x| x != 0) {
        return Err(Error::violation("n is not a cocycle"));
    }
    Ok(out)
}

/// Outcome of [`class_compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassComparison {
    pub equal: bool,
    pub first: ClassCoordinates,
    pub second: ClassCoordinates,
}

pub fn class_compare(
    nerve: &Nerve,
    a: &CechThreeCocycle,
    b: &CechThreeCocycle,
) -> Result<ClassComparison> {
    let h = nerve.cohomology(3);
    let first = h.class_of(&a.values)?;
    let second = h.class_of(&b.values)?;
    let diff: Vec<i64> = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
    let equal = h.is_coboundary(&diff)?;
    debug_assert_eq!(equal, first == second);
    Ok(ClassComparison {
        equal,
        first,
        second,
    })
}

/// Named nerves and transition data.
pub mod fixtures {
    use super::*;

    /// The 6-vertex projective plane.
    pub fn projective_plane() -> Nerve {
        let t = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [2, 4, 5],
            [1, 3, 5],
        ];
        Nerve::new(6, &t.iter().map(|s| s.to_vec()).collect::<Vec<_>>())
            .expect("valid triangulation")
    }

    /// Suspension of the 6-vertex projective plane, with cone points 6
    /// and 7; `H³ ≅ Z/2`.
    pub fn suspended_projective_plane() -> Nerve {
        let base = projective_plane();
        let maximal: Vec<Vec<usize>> = base
            .simplices(2)
            .iter()
            .flat_map(|t| [6, 7].map(|c| [t.as_slice(), &[c]].concat()))
            .collect();
        Nerve::new(8, &maximal).expect("valid suspension")
    }

    /// A single triangle with `g₀₁ = C`, `g₁₂ = S`, `g₀₂ = CS`.
    pub fn clock_shift_triangle(modulus: u64) -> ProjectiveCocycle {
        let (c, s) = (
            MonomialUnitary::clock(modulus),
            MonomialUnitary::shift(modulus),
        );
        let edges = BTreeMap::from([
            ((0, 1), c.clone()),
            ((1, 2), s.clone()),
            ((0, 2), c.mul(&s)),
        ]);
        ProjectiveCocycle::new(Nerve::simplex(2), modulus, modulus as usize, edges).expect("valid")
    }

    /// The same triangle with `g₀₂ = C`, which breaks the cocycle condition.
    pub fn broken_triangle(modulus: u64) -> ProjectiveCocycle {
        let (c, s) = (
            MonomialUnitary::clock(modulus),
            MonomialUnitary::shift(modulus),
        );
        let edges = BTreeMap::from([((0, 1), c.clone()), ((1, 2), s), ((0, 2), c)]);
        ProjectiveCocycle::new(Nerve::simplex(2), modulus, modulus as usize, edges)
            .expect("valid shape")
    }

    /// Heisenberg transition data on `∂Δ⁴`: `g_{ij} = h_i h_j⁻¹` with
    /// `h = (1, C, S, CS, C²S)`.
    pub fn heisenberg_boundary(modulus: u64) -> ProjectiveCocycle {
        let (c, s) = (
            MonomialUnitary::clock(modulus),
            MonomialUnitary::shift(modulus),
        );
        let h = [
            MonomialUnitary::identity(modulus, modulus as usize),
            c.clone(),
            s.clone(),
            c.mul(&s),
            c.mul(&c).mul(&s),
        ];
        ProjectiveCocycle::from_vertex_data(Nerve::boundary_of_simplex(4), &h).expect("valid")
    }

    /// Identity transitions on `nerve`.
    pub fn trivial(nerve: Nerve, modulus: u64, size: usize) -> ProjectiveCocycle {
        let h = alloc::vec![MonomialUnitary::identity(modulus, size); nerve.vertex_count()];
        ProjectiveCocycle::from_vertex_data(nerve, &h).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Dense 3×3 complex-free check: `(CS)_{ab}` and `(SC)_{ab}` as root
    /// exponents, entry by entry.
    fn dense(m: &MonomialUnitary) -> Vec<Vec<Option<u64>>> {
        let n = m.size();
        let mut out = alloc::vec![alloc::vec![None; n]; n];
        for j in 0..n {
            out[m.perm[j]][j] = Some(m.exps[j]);
        }
        out
    }

    fn dense_mul(
        a: &[Vec<Option<u64>>],
        b: &[Vec<Option<u64>>],
        modulus: u64,
    ) -> Vec<Vec<Option<u64>>> {
        let n = a.len();
        let mut out = alloc::vec![alloc::vec![None; n]; n];
        for r in 0..n {
            for c in 0..n {
                for k in 0..n {
                    if let (Some(x), Some(y)) = (a[r][k], b[k][c]) {
                        assert!(out[r][c].is_none());
                        out[r][c] = Some((x + y) % modulus);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn monomial_product_matches_dense() {
        let (c, s) = (MonomialUnitary::clock(3), MonomialUnitary::shift(3));
        assert_eq!(dense(&c.mul(&s)), dense_mul(&dense(&c), &dense(&s), 3));
        assert_eq!(dense(&s.mul(&c)), dense_mul(&dense(&s), &dense(&c), 3));
        assert_eq!(c.mul(&s).scalar_ratio(&s.mul(&c)), Some(1));
        assert_eq!(c.mul(&c.inverse()), MonomialUnitary::identity(3, 3));
    }

    #[test]
    fn clock_shift_triangle_has_epsilon_one() {
        let g = clock_shift_triangle(3);
        assert_eq!(check_pu_cocycle(&g), Ok(()));
        let eps = epsilon_from_lifts(&g, &LiftRule::Canonical).unwrap();
        assert_eq!(eps.values, [1]);
    }

    #[test]
    fn broken_triangle_is_reported() {
        let g = broken_triangle(3);
        assert_eq!(
            check_pu_cocycle(&g),
            Err(PuViolation {
                triangle: [0, 1, 2]
            })
        );
        assert!(epsilon_from_lifts(&g, &LiftRule::Canonical).is_err());
    }

    #[test]
    fn trivial_data_has_zero_class() {
        let g = trivial(Nerve::boundary_of_simplex(4), 3, 2);
        let eps = epsilon_from_lifts(&g, &LiftRule::Canonical).unwrap();
        assert!(eps.values.iter().all(|&x| x == 0));
        let n = dd_cocycle(&g.nerve, &eps).unwrap();
        assert!(n.values.iter().all(|&x| x == 0));
    }

    #[test]
    fn relifts_and_coboundaries_keep_the_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = heisenberg_boundary(3);
        let eps = epsilon_from_lifts(&g, &LiftRule::Canonical).unwrap();
        let n = dd_cocycle(&g.nerve, &eps).unwrap();
        for _ in 0..10 {
            let e2 = epsilon_from_lifts(&g, &LiftRule::random_shift(&mut rng, &g)).unwrap();
            let n2 = dd_cocycle(&g.nerve, &e2).unwrap();
            assert!(class_compare(&g.nerve, &n, &n2).unwrap().equal);
            let eta: Vec<u64> = (0..g.nerve.count(1)).map(|_| rng.gen_range(0..3)).collect();
            let n3 = dd_cocycle(&g.nerve, &eps.add_coboundary(&g.nerve, &eta)).unwrap();
            assert!(class_compare(&g.nerve, &n, &n3).unwrap().equal);
        }
    }

    #[test]
    fn torsion_bound() {
        let g = heisenberg_boundary(3);
        let eps = epsilon_from_lifts(&g, &LiftRule::Canonical).unwrap();
        let n = dd_cocycle(&g.nerve, &eps).unwrap();
        let scaled: Vec<i64> = n.values.iter().map(|x| 3 * x).collect();
        assert!(g.nerve.cohomology(3).is_coboundary(&scaled).unwrap());
    }

    #[test]
    fn mod_prime_cocycles_on_the_sphere() {
        let s3 = Nerve::boundary_of_simplex(4);
        let basis = cocycle_basis_mod_prime(&s3, 2, 3);
        assert_eq!(basis.len(), 6);
        assert!(basis
            .iter()
            .all(|e| e.is_cocycle(&s3) && e.values.iter().any(|&v| v != 0)));
    }

    #[test]
    fn bockstein_class_on_suspended_projective_plane() {
        let x = suspended_projective_plane();
        let h3 = x.cohomology(3);
        assert_eq!((h3.rank, h3.torsion.clone()), (0, alloc::vec![2.into()]));
        let mut found = false;
        for eps in cocycle_basis_mod_prime(&x, 2, 2) {
            assert!(eps.is_cocycle(&x));
            let n = dd_cocycle(&x, &eps).unwrap();
            if !h3.class_of(&n.values).unwrap().is_zero() {
                found = true;
                let doubled: Vec<i64> = n.values.iter().map(|v| 2 * v).collect();
                assert!(h3.is_coboundary(&doubled).unwrap());
                break;
            }
        }
        assert!(found);
    }
}
