use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::{hermite_rows, smith_normal_form, IntegerMatrix};
use crate::{Error, Result};

/// A finite simplicial complex on vertices `0..vertices`, closed under
/// faces, with simplices stored as strictly increasing vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    vertices: usize,
    maximal: Vec<Vec<usize>>,
    by_dim: Vec<Vec<Vec<usize>>>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl Nerve {
    pub fn new(vertices: usize, maximal: &[Vec<usize>]) -> Result<Self> {
        let mut all: BTreeSet<Vec<usize>> = (0..vertices).map(|v| vec![v]).collect();
        let mut tops = Vec::new();
        for s in maximal {
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() || t.is_empty() {
                return Err(Error::invalid("simplex with repeated or no vertices"));
            }
            if t.iter().any(|&v| v >= vertices) {
                return Err(Error::invalid("simplex vertex out of range"));
            }
            for mask in 1u64..(1u64 << t.len()) {
                let face: Vec<usize> = (0..t.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| t[i])
                    .collect();
                all.insert(face);
            }
            tops.push(t);
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(1);
        let mut by_dim = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        let index = by_dim
            .iter()
            .flat_map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        Ok(Nerve {
            vertices,
            maximal: tops,
            by_dim,
            index,
        })
    }

    /// `∂Δ^n`: every proper face of the `n`-simplex.
    pub fn boundary_of_simplex(n: usize) -> Self {
        let maximal: Vec<Vec<usize>> = (0..=n)
            .map(|skip| (0..=n).filter(|&v| v != skip).collect())
            .collect();
        Nerve::new(n + 1, &maximal).expect("faces of a simplex are valid")
    }

    /// The full `n`-simplex.
    pub fn simplex(n: usize) -> Self {
        Nerve::new(n + 1, &[(0..=n).collect()]).expect("a simplex is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn maximal_simplices(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    pub fn dimension(&self) -> usize {
        self.by_dim.len() - 1
    }

    /// Simplices of dimension `p`, in lexicographic order.
    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        self.by_dim.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices(p).len()
    }

    /// Position of a simplex within its dimension.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// The Čech coboundary `δ: C^p → C^{p+1}`,
    /// `(δf)(v₀…v_{p+1}) = Σ (−1)^i f(v₀…v̂_i…v_{p+1})`.
    pub fn coboundary_matrix(&self, p: usize) -> IntegerMatrix {
        let (rows, cols) = (self.count(p + 1), self.count(p));
        let mut m = IntegerMatrix::zeros(rows, cols);
        for (r, s) in self.simplices(p + 1).iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let c = self.index[&face];
                m.set(r, c, BigInt::from(if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        m
    }

    /// `δf` on integer cochains.
    pub fn coboundary(&self, p: usize, f: &[i64]) -> Vec<i64> {
        self.simplices(p + 1)
            .iter()
            .map(|s| {
                (0..s.len())
                    .map(|i| {
                        let mut face = s.clone();
                        face.remove(i);
                        let v = f[self.index[&face]];
                        if i % 2 == 0 {
                            v
                        } else {
                            -v
                        }
                    })
                    .sum()
            })
            .collect()
    }

    /// `δf` on `Z/N` cochains, reduced into `[0, N)`.
    pub fn coboundary_mod(&self, p: usize, f: &[u64], modulus: u64) -> Vec<u64> {
        let lifted: Vec<i64> = f.iter().map(|&x| x as i64).collect();
        self.coboundary(p, &lifted)
            .into_iter()
            .map(|x| x.rem_euclid(modulus as i64) as u64)
            .collect()
    }

    /// `H^p(X; Z)` with a basis adapted to class coordinates.
    pub fn cohomology(&self, p: usize) -> CohomologyGroup {
        CohomologyGroup::new(self, p)
    }
}

/// Coordinates of a class in `H^p(X; Z) ≅ Z^r ⊕ ⊕ Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub free: Vec<BigInt>,
    /// Residues modulo the torsion orders, in the order of
    /// [`CohomologyGroup::torsion`].
    pub torsion: Vec<BigInt>,
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }
}

/// `H^p = ker δ_p / im δ_{p−1}` via the Smith form of `δ_{p−1}`: in the
/// coordinates `y = U z` the image is `⊕ d_i Z`, so the torsion part reads
/// `y_i mod d_i` and the free part lives on the coordinates past the rank,
/// where cocycles span a saturated lattice with a Hermite basis.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: usize,
    /// Orders of the cyclic torsion summands (all > 1).
    pub torsion: Vec<BigInt>,
    pub rank: usize,
    u: IntegerMatrix,
    factors: Vec<BigInt>,
    free_basis: Vec<Vec<BigInt>>,
    delta_p: IntegerMatrix,
}

impl CohomologyGroup {
    fn new(nerve: &Nerve, p: usize) -> Self {
        let cp = nerve.count(p);
        let (u, factors) = if p == 0 {
            (IntegerMatrix::identity(cp), Vec::new())
        } else {
            let s = smith_normal_form(&nerve.coboundary_matrix(p - 1));
            (s.u, s.invariant_factors)
        };
        let r = factors.len();
        let delta_p = nerve.coboundary_matrix(p);
        let kernel: Vec<Vec<BigInt>> = if delta_p.rows() == 0 {
            (0..cp)
                .map(|i| (0..cp).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect()
        } else {
            let s = smith_normal_form(&delta_p);
            let v = s.v.to_dense();
            (s.rank()..cp)
                .map(|j| (0..cp).map(|i| v[i][j].clone()).collect())
                .collect()
        };
        let projected: Vec<Vec<BigInt>> =
            kernel.iter().map(|k| u.mul_vec(k)[r..].to_vec()).collect();
        let free_basis = hermite_rows(&projected);
        let torsion = factors
            .iter()
            .filter(|d| **d > BigInt::from(1))
            .cloned()
            .collect();
        CohomologyGroup {
            degree: p,
            torsion,
            rank: free_basis.len(),
            u,
            factors,
            free_basis,
            delta_p,
        }
    }

    pub fn is_cocycle(&self, z: &[i64]) -> bool {
        let big: Vec<BigInt> = z.iter().map(|&x| BigInt::from(x)).collect();
        self.delta_p.rows() == 0 || self.delta_p.mul_vec(&big).iter().all(Zero::is_zero)
    }

    /// Class of an integral cocycle.
    pub fn class_of(&self, z: &[i64]) -> Result<ClassCoordinates> {
        if z.len() != self.u.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.u.cols(),
                found: z.len(),
            });
        }
        if !self.is_cocycle(z) {
            return Err(Error::violation("cochain is not a cocycle"));
        }
        let y = self
            .u
            .mul_vec(&z.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let r = self.factors.len();
        let torsion = self
            .factors
            .iter()
            .zip(&y)
            .filter(|(d, _)| **d > BigInt::from(1))
            .map(|(d, yi)| yi.mod_floor(d))
            .collect();
        let mut rest: Vec<BigInt> = y[r..].to_vec();
        let mut free = Vec::with_capacity(self.free_basis.len());
        for b in &self.free_basis {
            let pivot = b
                .iter()
                .position(|x| !x.is_zero())
                .expect("Hermite rows are nonzero");
            let (q, rem) = rest[pivot].div_rem(&b[pivot]);
            if !rem.is_zero() {
                return Err(Error::violation("cocycle outside the cocycle lattice"));
            }
            for (x, bx) in rest.iter_mut().zip(b) {
                *x -= &q * bx;
            }
            free.push(q);
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Err(Error::violation("cocycle outside the cocycle lattice"));
        }
        Ok(ClassCoordinates { free, torsion })
    }

    /// Whether an integral cocycle is a coboundary.
    pub fn is_coboundary(&self, z: &[i64]) -> Result<bool> {
        Ok(self.class_of(z)?.is_zero())
    }
}

/// Invariant-factor description for display: `Z^rank ⊕ Z/t₁ ⊕ …`.
pub fn describe_group(g: &CohomologyGroup) -> alloc::string::String {
    use alloc::string::ToString;
    let mut parts: Vec<alloc::string::String> = Vec::new();
    match g.rank {
        0 => {}
        1 => parts.push("Z".into()),
        r => parts.push(alloc::format!("Z^{r}")),
    }
    parts.extend(g.torsion.iter().map(|t| alloc::format!("Z/{}", t.abs())));
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
