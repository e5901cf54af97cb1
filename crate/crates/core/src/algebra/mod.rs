//! Finite-dimensional associative algebras given by structure constants.

mod kaehler;

pub use kaehler::{kaehler_differentials, KaehlerModule};

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::linalg::{rat, Rational, Vector};
use crate::{Error, Result};

/// Sparse product `e_i · e_j` as `(k, coefficient)` pairs.
pub type Product = Vec<(usize, Rational)>;

/// Integer structure constants, `table[i][j]` the sparse product `e_i e_j`.
pub type IntegerTable = Vec<Vec<Vec<(usize, i64)>>>;

/// Recorded when an algebra is built as `M_n(B)`: basis element
/// `(r·n + c)·dim B + a` is `E_{rc} ⊗ b_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixInfo {
    pub n: usize,
    pub base: Box<FDAlgebra>,
}

/// A finite-dimensional associative algebra over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct FDAlgebra {
    labels: Vec<String>,
    table: Vec<Vec<Product>>,
    unit: Option<Vector>,
    matrix: Option<MatrixInfo>,
}

/// First failure found by [`FDAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraViolation {
    Associativity { triple: (usize, usize, usize) },
    LeftUnit { basis: usize },
    RightUnit { basis: usize },
}

impl core::fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AlgebraViolation::Associativity { triple: (i, j, k) } => {
                write!(f, "(e{i} e{j}) e{k} != e{i} (e{j} e{k})")
            }
            AlgebraViolation::LeftUnit { basis } => write!(f, "1 · e{basis} != e{basis}"),
            AlgebraViolation::RightUnit { basis } => write!(f, "e{basis} · 1 != e{basis}"),
        }
    }
}

fn normalize(mut v: Product) -> Product {
    v.sort_by_key(|(k, _)| *k);
    let mut out: Product = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc += c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl FDAlgebra {
    /// `products[i][j]` is `e_i e_j`. Shapes are checked; associativity is
    /// left to [`Self::validate`].
    pub fn new(
        labels: Vec<String>,
        products: Vec<Vec<Product>>,
        unit: Option<Vector>,
    ) -> Result<Self> {
        let d = labels.len();
        if products.len() != d || products.iter().any(|row| row.len() != d) {
            return Err(Error::invalid(
                "structure constants must form a dim × dim table",
            ));
        }
        if products.iter().flatten().flatten().any(|(k, _)| *k >= d) {
            return Err(Error::invalid("structure constant index out of range"));
        }
        if let Some(u) = &unit {
            if u.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: u.len(),
                });
            }
        }
        let table = products
            .into_iter()
            .map(|row| row.into_iter().map(normalize).collect())
            .collect();
        Ok(FDAlgebra {
            labels,
            table,
            unit,
            matrix: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn matrix_info(&self) -> Option<&MatrixInfo> {
        self.matrix.as_ref()
    }

    /// `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> &Product {
        &self.table[i][j]
    }

    /// Structure constants as `i64`, when all of them are integers that fit.
    pub fn integer_table(&self) -> Option<IntegerTable> {
        self.table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        p.iter()
                            .map(|(k, c)| crate::linalg::to_i64(c).map(|x| (*k, x)))
                            .collect::<Option<Vec<_>>>()
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect()
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }

    /// Product of two elements in coordinates.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// Checks associativity on all basis triples and the unit axioms.
    pub fn validate(&self) -> core::result::Result<(), AlgebraViolation> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = normalize(
                        self.table[i][j]
                            .iter()
                            .flat_map(|(m, c)| {
                                self.table[*m][k].iter().map(move |(t, x)| (*t, c * x))
                            })
                            .collect(),
                    );
                    let right = normalize(
                        self.table[j][k]
                            .iter()
                            .flat_map(|(m, c)| {
                                self.table[i][*m].iter().map(move |(t, x)| (*t, c * x))
                            })
                            .collect(),
                    );
                    if left != right {
                        return Err(AlgebraViolation::Associativity { triple: (i, j, k) });
                    }
                }
            }
        }
        if let Some(u) = &self.unit {
            for i in 0..d {
                let e = self.basis_vector(i);
                if self.mul(u, &e) != e {
                    return Err(AlgebraViolation::LeftUnit { basis: i });
                }
                if self.mul(&e, u) != e {
                    return Err(AlgebraViolation::RightUnit { basis: i });
                }
            }
        }
        Ok(())
    }

    /// Exhaustive check of `e_i e_j = e_j e_i`.
    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (i + 1..d).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// `Ã = A ⊕ Q·1` with `(a, λ)(b, μ) = (ab + λb + μa, λμ)`; the adjoined
    /// unit is the last basis vector.
    pub fn unitization(&self) -> FDAlgebra {
        let d = self.dim();
        let mut labels = self.labels.clone();
        labels.push("1~".to_string());
        let mut table = vec![vec![Vec::new(); d + 1]; d + 1];
        for i in 0..d {
            for j in 0..d {
                table[i][j] = self.table[i][j].clone();
            }
            table[i][d] = vec![(i, Rational::one())];
            table[d][i] = vec![(i, Rational::one())];
        }
        table[d][d] = vec![(d, Rational::one())];
        let mut unit = vec![Rational::zero(); d + 1];
        unit[d] = Rational::one();
        FDAlgebra {
            labels,
            table,
            unit: Some(unit),
            matrix: None,
        }
    }

    /// `M_n(A)` via `E_{ij} E_{kl} = δ_{jk} E_{il}`.
    pub fn matrix_algebra(&self, n: usize) -> Result<FDAlgebra> {
        if n == 0 {
            return Err(Error::invalid("matrix size must be at least 1"));
        }
        let d = self.dim();
        let idx = |r: usize, c: usize, a: usize| (r * n + c) * d + a;
        let mut labels = Vec::with_capacity(n * n * d);
        for r in 0..n {
            for c in 0..n {
                for a in 0..d {
                    labels.push(if n == 1 {
                        self.labels[a].clone()
                    } else {
                        format!("E{}{}*{}", r + 1, c + 1, self.labels[a])
                    });
                }
            }
        }
        let mut table = vec![vec![Vec::new(); n * n * d]; n * n * d];
        for r in 0..n {
            for c in 0..n {
                for a in 0..d {
                    for c2 in 0..n {
                        for b in 0..d {
                            table[idx(r, c, a)][idx(c, c2, b)] = self.table[a][b]
                                .iter()
                                .map(|(k, v)| (idx(r, c2, *k), v.clone()))
                                .collect();
                        }
                    }
                }
            }
        }
        let unit = self.unit.as_ref().map(|u| {
            let mut out = vec![Rational::zero(); n * n * d];
            for r in 0..n {
                for (a, x) in u.iter().enumerate() {
                    out[idx(r, r, a)] = x.clone();
                }
            }
            out
        });
        Ok(FDAlgebra {
            labels,
            table,
            unit,
            matrix: Some(MatrixInfo {
                n,
                base: Box::new(self.clone()),
            }),
        })
    }

    /// Direct product `A₁ × A₂` (basis of `A₁` first).
    pub fn product_algebra(&self, other: &FDAlgebra) -> FDAlgebra {
        let (d1, d2) = (self.dim(), other.dim());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| format!("{l}'")));
        let mut table = vec![vec![Vec::new(); d1 + d2]; d1 + d2];
        for i in 0..d1 {
            for j in 0..d1 {
                table[i][j] = self.table[i][j].clone();
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                table[d1 + i][d1 + j] = other.table[i][j]
                    .iter()
                    .map(|(k, v)| (d1 + k, v.clone()))
                    .collect();
            }
        }
        let unit = match (&self.unit, &other.unit) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        FDAlgebra {
            labels,
            table,
            unit,
            matrix: None,
        }
    }
}

/// Stock algebras.
pub mod fixtures {
    use super::*;

    fn one_coef() -> Rational {
        Rational::one()
    }

    /// The ground field, basis `1`.
    pub fn ground_field() -> FDAlgebra {
        FDAlgebra::new(
            vec!["1".to_string()],
            vec![vec![vec![(0, one_coef())]]],
            Some(vec![one_coef()]),
        )
        .expect("valid table")
    }

    /// `Q[x]/(x² − s)` with basis `1, x`.
    pub fn quadratic(s: i64) -> FDAlgebra {
        FDAlgebra::new(
            vec!["1".to_string(), "x".to_string()],
            vec![
                vec![vec![(0, one_coef())], vec![(1, one_coef())]],
                vec![vec![(1, one_coef())], vec![(0, rat(s))]],
            ],
            Some(vec![one_coef(), Rational::zero()]),
        )
        .expect("valid table")
    }

    /// Dual numbers `Q[x]/(x²)`.
    pub fn dual_numbers() -> FDAlgebra {
        quadratic(0)
    }

    /// The non-unital algebra `span{x}` with `x² = 0`.
    pub fn square_zero_line() -> FDAlgebra {
        FDAlgebra::new(vec!["x".to_string()], vec![vec![Vec::new()]], None).expect("valid table")
    }

    /// `M_n(Q)`.
    pub fn matrices(n: usize) -> FDAlgebra {
        ground_field().matrix_algebra(n).expect("n >= 1")
    }
}
