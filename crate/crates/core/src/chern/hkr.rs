use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{kaehler_differentials, FDAlgebra, KaehlerModule};
use crate::cdga::CDGAModel;
use crate::cyclic::{TensorBasis, TensorChain};
use crate::linalg::{factorial, Rational, SparseVec, Vector};
use crate::{Error, Result};

/// `φ_k(a₀ ⊗ a₁ ⊗ … ⊗ a_k) = (1/k!) a₀ da₁ ∧ … ∧ da_k` into Kähler forms, for
/// a commutative unital algebra, on tensor degrees up to `max_deg`.
#[derive(Clone, Debug)]
pub struct Hkr {
    algebra: FDAlgebra,
    modules: Vec<KaehlerModule>,
}

impl Hkr {
    pub fn new(a: &FDAlgebra, max_deg: usize) -> Result<Self> {
        let modules = (0..=max_deg)
            .map(|k| kaehler_differentials(a, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Hkr {
            algebra: a.clone(),
            modules,
        })
    }

    pub fn module(&self, k: usize) -> Option<&KaehlerModule> {
        self.modules.get(k)
    }

    /// Coordinates of `φ_k(c)` in the quotient basis of `Ω^k`.
    pub fn apply(&self, c: &TensorChain) -> Result<Vector> {
        let k = c.degree;
        let module = self
            .modules
            .get(k)
            .ok_or_else(|| Error::invalid("tensor degree beyond the prepared range"))?;
        let a = &self.algebra;
        let d = a.dim();
        let basis = TensorBasis::new(d);
        let unit = a
            .unit()
            .cloned()
            .ok_or_else(|| Error::invalid("algebra is not unital"))?;
        let scale = factorial(k).recip();
        let mut acc = SparseVec::new();
        let mut legs = Vec::new();
        for (idx, coef) in &c.terms {
            basis.decode(*idx, k, &mut legs);
            let a0 = if legs[0] == d {
                unit.clone()
            } else {
                a.basis_vector(legs[0])
            };
            let ds: Vec<Vector> = legs[1..].iter().map(|&l| a.basis_vector(l)).collect();
            for (g, v) in module.form(&a0, &ds)? {
                let e = acc.entry(g).or_insert_with(Rational::zero);
                *e += v * coef * &scale;
                if e.is_zero() {
                    acc.remove(&g);
                }
            }
        }
        Ok(module.class_of(&acc))
    }
}

/// `φ_k(c)` for a single chain over a commutative unital algebra.
pub fn hkr_map(a: &FDAlgebra, c: &TensorChain) -> Result<Vector> {
    Hkr::new(a, c.degree)?.apply(c)
}

/// `φ_k` realized inside a model: `c` is a chain over the degree-0 part of
/// `m`, whose basis sits at the model indices `embed`, and the image is
/// `(1/k!) a₀ da₁ ⋯ da_k` computed with the model's product and
/// differential.
pub fn hkr_into_model(m: &CDGAModel, embed: &[usize], c: &TensorChain) -> Result<Vector> {
    let d = embed.len();
    let k = c.degree;
    let basis = TensorBasis::new(d);
    let lift = |i: usize| -> Vector {
        if i == d {
            m.unit()
        } else {
            m.basis_vector(embed[i])
        }
    };
    let scale = factorial(k).recip();
    let mut out = vec![Rational::zero(); m.dim()];
    let mut legs = Vec::new();
    for (idx, coef) in &c.terms {
        basis.decode(*idx, k, &mut legs);
        let mut w = lift(legs[0]);
        for &l in &legs[1..] {
            w = m.mul(&w, &m.d(&lift(l)));
        }
        let s = coef * &scale;
        for (o, x) in out.iter_mut().zip(w) {
            *o += &s * x;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::linalg::rat;

    #[test]
    fn dual_numbers_hkr() {
        let a = dual_numbers();
        let h = Hkr::new(&a, 2).unwrap();
        assert_eq!(h.module(1).unwrap().dim, 1);
        // 1̃ ⊗ x ↦ dx, the generator of Ω¹
        let mut c = TensorChain::zero(1);
        c.add_term(2 * 2 + 1, rat(1));
        assert_eq!(h.apply(&c).unwrap(), vec![rat(1)]);
        // x ⊗ x ↦ x dx = ½ d(x²) = 0
        let mut c = TensorChain::zero(1);
        c.add_term(2 + 1, rat(1));
        assert_eq!(h.apply(&c).unwrap(), vec![rat(0)]);
        assert_eq!(h.module(2).unwrap().dim, 0);
    }

    #[test]
    fn hkr_vanishes_on_boundaries() {
        use crate::cyclic::CyclicOps;
        use rand::SeedableRng;
        let a = quadratic(3).product_algebra(&dual_numbers());
        let h = Hkr::new(&a, 2).unwrap();
        let ops = CyclicOps::new(&a);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for k in 1..=2 {
            let c = TensorChain::random(&mut rng, a.dim(), k + 1, 6);
            let image = h.apply(&ops.apply_b(&c)).unwrap();
            assert!(image.iter().all(Zero::is_zero));
        }
    }
}
