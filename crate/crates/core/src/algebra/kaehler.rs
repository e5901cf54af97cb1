use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::FDAlgebra;
use crate::linalg::{Echelon, Rational, SparseVec, Vector};
use crate::{Error, Result};

/// `Ω^k_A` presented as the free module on `e_a de_S` (`S` an increasing
/// `k`-subset of basis indices) modulo `e_a R_{ij} ∧ de_{S'}`, where
/// `R_{ij} = d(e_i e_j) − e_i de_j − e_j de_i`.
#[derive(Clone, Debug)]
pub struct KaehlerModule {
    pub k: usize,
    pub dim: usize,
    /// `dim I/I²` for `I = ker(A ⊗ A → A)`, computed independently when `k = 1`.
    pub dim_via_ideal: Option<usize>,
    base_dim: usize,
    subsets: Vec<Vec<usize>>,
    subset_index: BTreeMap<Vec<usize>, usize>,
    relations: Echelon,
    free: Vec<usize>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Sorts a wedge word, returning the sign, or `None` on a repeated index.
fn sort_wedge(word: &[usize]) -> Option<(i32, Vec<usize>)> {
    let mut w = word.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((sign, w))
}

impl KaehlerModule {
    fn gen_index(&self, a: usize, s: usize) -> usize {
        a * self.subsets.len() + s
    }

    /// Adds `coef · x · de_{word}` to `v`, with `x ∈ A` in coordinates.
    fn add_term(&self, v: &mut SparseVec, coef: &Rational, x: &[Rational], word: &[usize]) {
        let Some((sign, sorted)) = sort_wedge(word) else {
            return;
        };
        let s = self.subset_index[&sorted];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let g = self.gen_index(a, s);
            let e = v.entry(g).or_insert_with(Rational::zero);
            *e += coef * xa * Rational::from_integer(sign.into());
            if e.is_zero() {
                v.remove(&g);
            }
        }
    }

    /// `a₀ da₁ ∧ … ∧ da_k` in generator coordinates (legs in the basis of A).
    pub fn form(&self, a0: &[Rational], legs: &[Vector]) -> Result<SparseVec> {
        if legs.len() != self.k {
            return Err(Error::invalid(
                "number of differentials does not match the form degree",
            ));
        }
        let mut out = SparseVec::new();
        let d = self.base_dim;
        let mut idx = vec![0usize; self.k];
        loop {
            let coef = idx
                .iter()
                .zip(legs)
                .fold(Rational::one(), |acc, (i, l)| acc * &l[*i]);
            if !coef.is_zero() {
                self.add_term(&mut out, &coef, a0, &idx);
            }
            let mut pos = 0;
            while pos < self.k {
                idx[pos] += 1;
                if idx[pos] < d {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == self.k {
                break;
            }
        }
        Ok(out)
    }

    /// Coordinates of the class of `v` in the quotient basis.
    pub fn class_of(&self, v: &SparseVec) -> Vector {
        let (rem, _) = self.relations.reduce_full(v.clone());
        let mut out = vec![Rational::zero(); self.dim];
        for (pos, g) in self.free.iter().enumerate() {
            if let Some(x) = rem.get(g) {
                out[pos] = x.clone();
            }
        }
        out
    }

    pub fn generator_count(&self) -> usize {
        self.base_dim * self.subsets.len()
    }
}

/// Kähler `k`-forms of a commutative unital algebra, with `Ω¹` cross-checked
/// against `I/I²`.
pub fn kaehler_differentials(a: &FDAlgebra, k: usize) -> Result<KaehlerModule> {
    if !a.is_commutative() {
        return Err(Error::NonCommutative(
            "Kähler differentials need a commutative algebra".into(),
        ));
    }
    if !a.is_unital() {
        return Err(Error::invalid("Kähler differentials need a unital algebra"));
    }
    let d = a.dim();
    let subs = subsets(d, k);
    let subset_index = subs
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let mut m = KaehlerModule {
        k,
        dim: 0,
        dim_via_ideal: None,
        base_dim: d,
        subsets: subs,
        subset_index,
        relations: Echelon::new(0),
        free: Vec::new(),
    };
    let ngen = m.generator_count();
    let mut rel = Echelon::new(ngen);
    if k >= 1 {
        let lower = subsets(d, k - 1);
        for ea in 0..d {
            let x = a.basis_vector(ea);
            for i in 0..d {
                for j in 0..d {
                    let ij = a.mul(&a.basis_vector(i), &a.basis_vector(j));
                    let xi = a.mul(&x, &a.basis_vector(i));
                    let xj = a.mul(&x, &a.basis_vector(j));
                    for s in &lower {
                        let mut v = SparseVec::new();
                        for (mi, c) in ij.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let mut w = vec![mi];
                            w.extend_from_slice(s);
                            m.add_term(&mut v, c, &x, &w);
                        }
                        let mut wj = vec![j];
                        wj.extend_from_slice(s);
                        m.add_term(&mut v, &-Rational::one(), &xi, &wj);
                        let mut wi = vec![i];
                        wi.extend_from_slice(s);
                        m.add_term(&mut v, &-Rational::one(), &xj, &wi);
                        if !v.is_empty() {
                            rel.insert(v);
                        }
                    }
                }
            }
        }
    }
    let pivots: alloc::collections::BTreeSet<usize> = rel
        .basis()
        .iter()
        .map(|v| *v.keys().next_back().expect("nonzero basis vector"))
        .collect();
    m.free = (0..ngen).filter(|g| !pivots.contains(g)).collect();
    m.dim = m.free.len();
    m.relations = rel;
    if k == 1 {
        m.dim_via_ideal = Some(ideal_quotient_dim(a));
    }
    Ok(m)
}

/// `dim I/I²` for the kernel `I` of multiplication `A ⊗ A → A`.
fn ideal_quotient_dim(a: &FDAlgebra) -> usize {
    let d = a.dim();
    let n = d * d;
    // Kernel of μ: A⊗A → A.
    let mut mu_cols = Vec::with_capacity(n);
    for i in 0..d {
        for j in 0..d {
            mu_cols.push(
                a.product(i, j)
                    .iter()
                    .map(|(k, c)| (*k, c.clone()))
                    .collect::<Vec<_>>(),
            );
        }
    }
    let mu = crate::linalg::SparseMatrix::from_columns(d, mu_cols);
    let (_, ideal) = crate::linalg::rank_and_kernel(&mu);
    let tensor_mul = |x: &[Rational], y: &[Rational]| -> Vector {
        let mut out = vec![Rational::zero(); n];
        for (p, xp) in x.iter().enumerate() {
            if xp.is_zero() {
                continue;
            }
            let (i, j) = (p / d, p % d);
            for (q, yq) in y.iter().enumerate() {
                if yq.is_zero() {
                    continue;
                }
                let (k, l) = (q / d, q % d);
                let c = xp * yq;
                for (s, cs) in a.product(i, k) {
                    for (t, ct) in a.product(j, l) {
                        out[s * d + t] += &c * cs * ct;
                    }
                }
            }
        }
        out
    };
    let mut sq = Echelon::new(n);
    for x in &ideal {
        for y in &ideal {
            sq.insert(crate::linalg::echelon::to_sparse(&tensor_mul(x, y)));
        }
    }
    ideal.len() - sq.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;

    #[test]
    fn ground_field_has_no_forms() {
        for k in 1..4 {
            assert_eq!(kaehler_differentials(&ground_field(), k).unwrap().dim, 0);
        }
        assert_eq!(kaehler_differentials(&ground_field(), 0).unwrap().dim, 1);
    }

    #[test]
    fn etale_quadratic() {
        let m = kaehler_differentials(&quadratic(1), 1).unwrap();
        assert_eq!(m.dim, 0);
        assert_eq!(m.dim_via_ideal, Some(0));
    }

    #[test]
    fn dual_numbers_one_forms() {
        let a = dual_numbers();
        let m = kaehler_differentials(&a, 1).unwrap();
        assert_eq!(m.dim, 1);
        assert_eq!(m.dim_via_ideal, Some(1));
        assert_eq!(kaehler_differentials(&a, 2).unwrap().dim, 0);
        // x dx = 0 since 2x dx = d(x²) = 0; dx itself survives
        let x = a.basis_vector(1);
        let one = a.basis_vector(0);
        let xdx = m.form(&x, core::slice::from_ref(&x)).unwrap();
        assert!(m.class_of(&xdx).iter().all(Zero::is_zero));
        let dx = m.form(&one, &[x]).unwrap();
        assert!(m.class_of(&dx).iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn noncommutative_rejected() {
        assert!(matches!(
            kaehler_differentials(&matrices(2), 1),
            Err(Error::NonCommutative(_))
        ));
    }
}
