//! Finite graded-commutative differential graded algebras.

mod builder;
mod twisted;

pub use builder::MonomialBuilder;
pub use twisted::{
    gauge_transform, twisted_cohomology, twisted_complex, u_filtration_spectral_sequence,
    TwistedCohomology, TwistedComplex, USpectralReport, Window,
};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{FDAlgebra, Product};
use crate::linalg::{Rational, Vector};
use crate::{Error, Result};

/// A unital graded-commutative algebra with a degree-one differential, on a
/// homogeneous basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CDGAModel {
    algebra: FDAlgebra,
    degrees: Vec<usize>,
    d: Vec<Product>,
}

/// First failure found by [`CDGAModel::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CdgaViolation {
    Associativity { triple: (usize, usize, usize) },
    Unit { basis: usize },
    ProductDegree { pair: (usize, usize) },
    DifferentialDegree { basis: usize },
    GradedCommutativity { pair: (usize, usize) },
    Leibniz { pair: (usize, usize) },
    SquareZero { basis: usize },
}

impl core::fmt::Display for CdgaViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CdgaViolation::Associativity { triple: (i, j, k) } => {
                write!(f, "associativity fails on basis triple ({i}, {j}, {k})")
            }
            CdgaViolation::Unit { basis } => write!(f, "unit law fails on basis {basis}"),
            CdgaViolation::ProductDegree { pair: (i, j) } => {
                write!(
                    f,
                    "product of basis {i} and {j} is not homogeneous of the summed degree"
                )
            }
            CdgaViolation::DifferentialDegree { basis } => {
                write!(
                    f,
                    "d of basis {basis} is not homogeneous of one degree higher"
                )
            }
            CdgaViolation::GradedCommutativity { pair: (i, j) } => {
                write!(f, "graded commutativity fails on basis pair ({i}, {j})")
            }
            CdgaViolation::Leibniz { pair: (i, j) } => {
                write!(f, "Leibniz rule fails on basis pair ({i}, {j})")
            }
            CdgaViolation::SquareZero { basis } => write!(f, "d² is nonzero on basis {basis}"),
        }
    }
}

fn sign(neg: bool) -> Rational {
    if neg {
        -Rational::from_integer(1.into())
    } else {
        Rational::from_integer(1.into())
    }
}

impl CDGAModel {
    /// `products[i][j] = e_i e_j`, `differential[i] = d e_i`; the unit is
    /// required. Axioms are checked by [`Self::validate`].
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<usize>,
        products: Vec<Vec<Product>>,
        unit: Vector,
        differential: Vec<Product>,
    ) -> Result<Self> {
        let n = labels.len();
        if degrees.len() != n || differential.len() != n {
            return Err(Error::invalid(
                "degrees and differential must have one entry per basis element",
            ));
        }
        if differential.iter().flatten().any(|(k, _)| *k >= n) {
            return Err(Error::invalid("differential index out of range"));
        }
        let algebra = FDAlgebra::new(labels, products, Some(unit))?;
        let d = differential
            .into_iter()
            .map(|mut p| {
                p.sort_by_key(|(k, _)| *k);
                p.retain(|(_, c)| !c.is_zero());
                p
            })
            .collect();
        Ok(CDGAModel {
            algebra,
            degrees,
            d,
        })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn algebra(&self) -> &FDAlgebra {
        &self.algebra
    }

    pub fn labels(&self) -> &[String] {
        self.algebra.labels()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Basis indices of degree `p`.
    pub fn basis_of_degree(&self, p: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == p).collect()
    }

    pub fn unit(&self) -> Vector {
        self.algebra.unit().expect("models are unital").clone()
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        self.algebra.basis_vector(i)
    }

    pub fn zero_vector(&self) -> Vector {
        vec![Rational::zero(); self.dim()]
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vector {
        self.algebra.mul(x, y)
    }

    /// Differential on the basis.
    pub fn d_basis(&self, i: usize) -> &Product {
        &self.d[i]
    }

    pub fn d(&self, x: &[Rational]) -> Vector {
        let mut out = self.zero_vector();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, c) in &self.d[i] {
                out[*k] += xi * c;
            }
        }
        out
    }

    /// The degree of a nonzero homogeneous element; `None` for zero or
    /// mixed elements.
    pub fn degree_of(&self, x: &[Rational]) -> Option<usize> {
        let mut deg = None;
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(self.degrees[i]),
                Some(p) if p != self.degrees[i] => return None,
                _ => {}
            }
        }
        deg
    }

    /// `true` if `x` is zero or homogeneous of degree `p`.
    pub fn is_homogeneous(&self, x: &[Rational], p: usize) -> bool {
        x.iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.degrees[i] == p)
    }

    /// Checks associativity, unit, homogeneity, graded commutativity,
    /// Leibniz and `d² = 0` on all basis pairs and triples.
    pub fn validate(&self) -> core::result::Result<(), CdgaViolation> {
        use crate::algebra::AlgebraViolation as A;
        match self.algebra.validate() {
            Ok(()) => {}
            Err(A::Associativity { triple }) => {
                return Err(CdgaViolation::Associativity { triple })
            }
            Err(A::LeftUnit { basis } | A::RightUnit { basis }) => {
                return Err(CdgaViolation::Unit { basis })
            }
        }
        let n = self.dim();
        for i in 0..n {
            if !self.d[i]
                .iter()
                .all(|(k, _)| self.degrees[*k] == self.degrees[i] + 1)
            {
                return Err(CdgaViolation::DifferentialDegree { basis: i });
            }
            if self
                .d(&self.d(&self.basis_vector(i)))
                .iter()
                .any(|c| !c.is_zero())
            {
                return Err(CdgaViolation::SquareZero { basis: i });
            }
        }
        for i in 0..n {
            let (ei, di) = (self.basis_vector(i), self.d(&self.basis_vector(i)));
            for j in 0..n {
                let (p, q) = (self.degrees[i], self.degrees[j]);
                if !self
                    .algebra
                    .product(i, j)
                    .iter()
                    .all(|(k, _)| self.degrees[*k] == p + q)
                {
                    return Err(CdgaViolation::ProductDegree { pair: (i, j) });
                }
                let s = sign(p * q % 2 == 1);
                let flipped: Product = self
                    .algebra
                    .product(j, i)
                    .iter()
                    .map(|(k, c)| (*k, c * &s))
                    .collect();
                if *self.algebra.product(i, j) != flipped {
                    return Err(CdgaViolation::GradedCommutativity { pair: (i, j) });
                }
                let ej = self.basis_vector(j);
                let lhs = self.d(&self.mul(&ei, &ej));
                let mut rhs = self.mul(&di, &ej);
                let right = self.mul(&ei, &self.d(&ej));
                let s = sign(p % 2 == 1);
                for (r, x) in rhs.iter_mut().zip(right) {
                    *r += &s * x;
                }
                if lhs != rhs {
                    return Err(CdgaViolation::Leibniz { pair: (i, j) });
                }
            }
        }
        Ok(())
    }

    /// Dimensions of `H^p(Ω, d)` for `p = 0..=top`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let top = self.top_degree();
        let rank_out = |p: usize| -> usize {
            let src = self.basis_of_degree(p);
            let tgt = self.basis_of_degree(p + 1);
            let trip: Vec<_> = src
                .iter()
                .enumerate()
                .flat_map(|(col, &i)| {
                    let tgt = &tgt;
                    self.d[i].iter().map(move |(k, c)| {
                        (
                            tgt.iter().position(|t| t == k).expect("homogeneous d"),
                            col,
                            c.clone(),
                        )
                    })
                })
                .collect();
            crate::linalg::SparseMatrix::from_triplets(tgt.len(), src.len(), trip).rank()
        };
        let ranks: Vec<usize> = (0..=top).map(rank_out).collect();
        (0..=top)
            .map(|p| {
                self.basis_of_degree(p).len() - ranks[p] - if p > 0 { ranks[p - 1] } else { 0 }
            })
            .collect()
    }

    /// The degree-0 part as an algebra, with the model indices of its basis.
    pub fn degree_zero_part(&self) -> Result<(FDAlgebra, Vec<usize>)> {
        let embed = self.basis_of_degree(0);
        let pos = |i: usize| embed.iter().position(|&e| e == i);
        let mut table = vec![vec![Vec::new(); embed.len()]; embed.len()];
        for (a, &i) in embed.iter().enumerate() {
            for (b, &j) in embed.iter().enumerate() {
                table[a][b] = self
                    .algebra
                    .product(i, j)
                    .iter()
                    .map(|(k, c)| {
                        pos(*k)
                            .map(|p| (p, c.clone()))
                            .ok_or_else(|| Error::invalid("degree-0 product leaves degree 0"))
                    })
                    .collect::<Result<Product>>()?;
            }
        }
        let unit = self.unit();
        let unit0 = embed.iter().map(|&i| unit[i].clone()).collect();
        let labels = embed.iter().map(|&i| self.labels()[i].clone()).collect();
        let alg = FDAlgebra::new(labels, table, Some(unit0))?;
        Ok((alg, embed))
    }

    /// Basis vector with the given label.
    pub fn element_by_label(&self, label: &str) -> Option<Vector> {
        let i = self.labels().iter().position(|l| l == label)?;
        Some(self.basis_vector(i))
    }
}

/// Named finite models.
pub mod fixtures {
    use super::{CDGAModel, MonomialBuilder};

    /// `Λ(x₃)`: cohomology of `S³`.
    pub fn sphere3() -> CDGAModel {
        let mut b = MonomialBuilder::new();
        b.generator("x3", 3);
        b.build().expect("fixture")
    }

    /// `Q[a₂]/(a₂²) ⊗ Λ(b₃)`: cohomology of `S² × S³`.
    pub fn s2_times_s3() -> CDGAModel {
        let mut b = MonomialBuilder::new();
        let a = b.generator("a2", 2);
        b.generator("b3", 3);
        b.kill(&[(a, 2)]);
        b.build().expect("fixture")
    }

    /// `Λ(e₁, e₂, e₃)` with zero differential: forms on `T³` with
    /// constant coefficients.
    pub fn torus3() -> CDGAModel {
        let mut b = MonomialBuilder::new();
        for l in ["e1", "e2", "e3"] {
            b.generator(l, 1);
        }
        b.build().expect("fixture")
    }

    /// `T³` with a degree-2 generator `f` transgressing the volume form:
    /// `df = e₁e₂e₃`, `f² = f·e₁e₂e₃ = 0`. Here `e₁e₂e₃` is exact, so a
    /// twist `c = −dφ` with `φ = f` is nonzero.
    pub fn torus3_transgression() -> CDGAModel {
        let mut b = MonomialBuilder::new();
        let e: alloc::vec::Vec<usize> = ["e1", "e2", "e3"]
            .iter()
            .map(|l| b.generator(l, 1))
            .collect();
        let f = b.generator("f", 2);
        b.set_differential(f, &[(1, &[(e[0], 1), (e[1], 1), (e[2], 1)])]);
        b.kill(&[(f, 2)]);
        b.kill(&[(f, 1), (e[0], 1), (e[1], 1), (e[2], 1)]);
        b.build().expect("fixture")
    }

    /// Polynomial forms on `Q^m` modulo weight `≥ w`, where `x_i` and
    /// `dx_i` both have weight one. The differential preserves weight, so
    /// the truncation is a dg-ideal; degree 0 is `Q[x₁…x_m]/(x)^w`.
    pub fn truncated_de_rham(m: usize, w: u32) -> CDGAModel {
        let mut b = MonomialBuilder::new();
        let xs: alloc::vec::Vec<usize> = (1..=m)
            .map(|i| b.generator(&alloc::format!("x{i}"), 0))
            .collect();
        let dxs: alloc::vec::Vec<usize> = (1..=m)
            .map(|i| b.generator(&alloc::format!("dx{i}"), 1))
            .collect();
        for (x, dx) in xs.iter().zip(&dxs) {
            b.set_differential(*x, &[(1, &[(*dx, 1)])]);
        }
        let gens = 2 * m;
        let mut exps = alloc::vec![0u32; gens];
        fn rec(
            b: &mut MonomialBuilder,
            exps: &mut alloc::vec::Vec<u32>,
            pos: usize,
            left: u32,
            m: usize,
        ) {
            if pos == exps.len() {
                if left == 0 {
                    let mono: alloc::vec::Vec<(usize, u32)> = exps
                        .iter()
                        .enumerate()
                        .filter(|(_, k)| **k > 0)
                        .map(|(g, k)| (g, *k))
                        .collect();
                    b.kill(&mono);
                }
                return;
            }
            let cap = if pos >= m { left.min(1) } else { left };
            for k in 0..=cap {
                exps[pos] = k;
                rec(b, exps, pos + 1, left - k, m);
            }
            exps[pos] = 0;
        }
        rec(&mut b, &mut exps, 0, w, m);
        b.build().expect("fixture")
    }

    /// De Rham model of the dual numbers `Q[x]/(x²)`: basis `1, x, dx`
    /// with `x·dx = 0`.
    pub fn dual_numbers_de_rham() -> CDGAModel {
        truncated_de_rham(1, 2)
    }
}
