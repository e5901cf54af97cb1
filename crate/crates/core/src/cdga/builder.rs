use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::CDGAModel;
use crate::algebra::Product;
use crate::linalg::{rat, Rational, Vector};
use crate::{Error, Result};

/// A coefficient times a monomial given by `(generator, exponent)` pairs.
type Term = (i64, Vec<(usize, u32)>);

const MAX_MONOMIALS: usize = 100_000;

/// Free graded-commutative algebra on generators modulo monomial
/// relations, with a differential given on generators and extended by the
/// Leibniz rule.
#[derive(Clone, Debug, Default)]
pub struct MonomialBuilder {
    labels: Vec<String>,
    degrees: Vec<usize>,
    differentials: Vec<Vec<Term>>,
    killed: Vec<Vec<u32>>,
}

impl MonomialBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn generator(&mut self, label: &str, degree: usize) -> usize {
        self.labels.push(label.into());
        self.degrees.push(degree);
        self.differentials.push(Vec::new());
        self.labels.len() - 1
    }

    /// `d(g) = Σ coef · monomial`, each monomial a list of
    /// `(generator, exponent)` read left to right.
    pub fn set_differential(&mut self, g: usize, terms: &[(i64, &[(usize, u32)])]) {
        self.differentials[g] = terms.iter().map(|(c, m)| (*c, m.to_vec())).collect();
    }

    /// Declares a monomial zero (together with all its multiples).
    pub fn kill(&mut self, monomial: &[(usize, u32)]) {
        let mut e = vec![0u32; self.labels.len()];
        for (g, k) in monomial {
            e[*g] += k;
        }
        self.killed.push(e);
    }

    fn is_odd(&self, g: usize) -> bool {
        self.degrees[g] % 2 == 1
    }

    fn admissible(&self, e: &[u32]) -> bool {
        if (0..e.len()).any(|g| self.is_odd(g) && e[g] > 1) {
            return false;
        }
        !self
            .killed
            .iter()
            .any(|k| k.iter().zip(e).all(|(a, b)| b >= a))
    }

    fn label(&self, e: &[u32]) -> String {
        let mut s = String::new();
        for (g, k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => s.push_str(&self.labels[g]),
                _ => s.push_str(&format!("{}^{}", self.labels[g], k)),
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// Sign of `m₁ · m₂` brought to canonical generator order.
    fn koszul(&self, e1: &[u32], e2: &[u32]) -> bool {
        let mut neg = false;
        for i in 0..e1.len() {
            if e1[i] == 0 || !self.is_odd(i) {
                continue;
            }
            for j in 0..i {
                if e2[j] > 0 && self.is_odd(j) {
                    neg = !neg;
                }
            }
        }
        neg
    }

    pub fn build(&self) -> Result<CDGAModel> {
        let ngen = self.labels.len();
        for (g, d) in self.differentials.iter().enumerate() {
            for (_, m) in d {
                let deg: usize = m.iter().map(|(h, k)| self.degrees[*h] * *k as usize).sum();
                if m.iter().any(|(h, _)| *h >= ngen) || deg != self.degrees[g] + 1 {
                    return Err(Error::invalid(format!(
                        "differential of generator {} is not homogeneous of degree {}",
                        self.labels[g],
                        self.degrees[g] + 1
                    )));
                }
            }
        }
        let zero = vec![0u32; ngen];
        let mut seen: BTreeMap<Vec<u32>, ()> = BTreeMap::new();
        let mut queue = VecDeque::from([zero.clone()]);
        seen.insert(zero, ());
        while let Some(e) = queue.pop_front() {
            for g in 0..ngen {
                let mut f = e.clone();
                f[g] += 1;
                if self.admissible(&f) && !seen.contains_key(&f) {
                    if seen.len() >= MAX_MONOMIALS {
                        return Err(Error::ResourceLimit {
                            what: "monomial basis".into(),
                            requested: seen.len() + 1,
                            cap: MAX_MONOMIALS,
                        });
                    }
                    seen.insert(f.clone(), ());
                    queue.push_back(f);
                }
            }
        }
        let deg = |e: &[u32]| -> usize {
            e.iter()
                .zip(&self.degrees)
                .map(|(k, d)| *k as usize * d)
                .sum()
        };
        let mut basis: Vec<Vec<u32>> = seen.into_keys().collect();
        basis.sort_by(|a, b| deg(a).cmp(&deg(b)).then(b.cmp(a)));
        let index: BTreeMap<Vec<u32>, usize> = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let n = basis.len();
        let mut products: Vec<Vec<Product>> = vec![vec![Vec::new(); n]; n];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if !self.admissible(&s) {
                    continue;
                }
                let c = if self.koszul(a, b) {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                products[i][j] = vec![(index[&s], c)];
            }
        }
        let mut unit = vec![Rational::zero(); n];
        unit[index[&vec![0u32; ngen]]] = Rational::one();
        let labels = basis.iter().map(|e| self.label(e)).collect();
        let degrees = basis.iter().map(|e| deg(e)).collect();
        let bare = CDGAModel::new(labels, degrees, products, unit, vec![Vec::new(); n])?;
        let gen_vec = |g: usize| -> Vector {
            let mut e = vec![0u32; ngen];
            e[g] = 1;
            index
                .get(&e)
                .map_or_else(|| bare.zero_vector(), |&i| bare.basis_vector(i))
        };
        let d_gen: Vec<Vector> = (0..ngen)
            .map(|g| {
                let mut out = bare.zero_vector();
                for (c, m) in &self.differentials[g] {
                    let mut term = bare.unit();
                    for (h, k) in m {
                        for _ in 0..*k {
                            term = bare.mul(&term, &gen_vec(*h));
                        }
                    }
                    for (o, t) in out.iter_mut().zip(term) {
                        *o += rat(*c) * t;
                    }
                }
                out
            })
            .collect();
        let differential = basis
            .iter()
            .map(|e| {
                let word: Vec<usize> = (0..ngen)
                    .flat_map(|g| core::iter::repeat_n(g, e[g] as usize))
                    .collect();
                let mut out = bare.zero_vector();
                let mut prefix = bare.unit();
                let mut prefix_deg = 0usize;
                for (pos, &g) in word.iter().enumerate() {
                    let mut term = bare.mul(&prefix, &d_gen[g]);
                    for &h in &word[pos + 1..] {
                        term = bare.mul(&term, &gen_vec(h));
                    }
                    let s = if prefix_deg % 2 == 1 {
                        -Rational::one()
                    } else {
                        Rational::one()
                    };
                    for (o, t) in out.iter_mut().zip(term) {
                        *o += &s * t;
                    }
                    prefix = bare.mul(&prefix, &gen_vec(g));
                    prefix_deg += self.degrees[g];
                }
                out.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect::<Product>()
            })
            .collect();
        let n = bare.dim();
        let products = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| bare.algebra().product(i, j).clone())
                    .collect()
            })
            .collect();
        CDGAModel::new(
            bare.labels().to_vec(),
            bare.degrees().to_vec(),
            products,
            bare.unit(),
            differential,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_algebra_signs() {
        let mut b = MonomialBuilder::new();
        let x = b.generator("x", 1);
        let y = b.generator("y", 1);
        let m = b.build().unwrap();
        assert_eq!(m.dim(), 4);
        let (vx, vy) = (
            m.element_by_label("x").unwrap(),
            m.element_by_label("y").unwrap(),
        );
        let xy = m.mul(&vx, &vy);
        let yx = m.mul(&vy, &vx);
        assert_eq!(xy, m.element_by_label("xy").unwrap());
        assert_eq!(yx.iter().map(|c| -c).collect::<Vec<_>>(), xy);
        assert_eq!(m.mul(&vx, &vx), m.zero_vector());
        let _ = (x, y);
    }

    #[test]
    fn unbounded_generator_hits_the_cap() {
        let mut b = MonomialBuilder::new();
        b.generator("t", 0);
        assert!(b.build().unwrap_err().is_resource_limit());
    }

    #[test]
    fn relations_must_form_a_dg_ideal() {
        // d(a) = b, a² = 0 forces d(a²) = 2ab = 0 as well
        let mut bld = MonomialBuilder::new();
        let a = bld.generator("a", 2);
        let b = bld.generator("b", 3);
        bld.set_differential(a, &[(1, &[(b, 1)])]);
        bld.kill(&[(a, 2)]);
        let m = bld.build().unwrap();
        assert!(matches!(
            m.validate(),
            Err(super::super::CdgaViolation::Leibniz { .. })
        ));
        bld.kill(&[(a, 1), (b, 1)]);
        let m = bld.build().unwrap();
        assert_eq!(m.validate(), Ok(()));
        assert_eq!(m.cohomology_dims(), [1, 0, 0, 0]);
    }
}
