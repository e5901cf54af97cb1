use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{TensorBasis, TensorChain};
use crate::algebra::FDAlgebra;
use crate::complex::{ChainMap, Differential};
use crate::linalg::IntColumns;
use crate::{Error, Result};

/// Image of a basis tensor over `M_n(B)` under the generalized trace: the
/// matrix indices must close up around the cycle, `c_i = r_{i+1}` and
/// `c_k = r_0`; the adjoined unit acts as the identity matrix.
fn trace_basis(n: usize, db: usize, legs: &[usize], out: &mut Vec<usize>) -> bool {
    let dm = n * n * db;
    out.clear();
    let split = |x: usize| ((x / db) / n, (x / db) % n, x % db);
    let k = legs.len() - 1;
    let unit_led = legs[0] == dm;
    let start = if unit_led { 1 } else { 0 };
    if unit_led {
        out.push(db);
    }
    if unit_led && k == 0 {
        return true;
    }
    let cycle: Vec<(usize, usize, usize)> = legs[start..].iter().map(|&x| split(x)).collect();
    for i in 0..cycle.len() {
        let next = &cycle[(i + 1) % cycle.len()];
        if cycle[i].1 != next.0 {
            return false;
        }
        out.push(cycle[i].2);
    }
    true
}

fn matrix_params(a: &FDAlgebra) -> Result<(usize, usize)> {
    let info = a
        .matrix_info()
        .ok_or_else(|| Error::invalid("generalized trace needs an algebra built as M_n(B)"))?;
    Ok((info.n, info.base.dim()))
}

/// The generalized trace `CC_k(M_n(B)) → CC_k(B)`.
pub fn generalized_trace(a: &FDAlgebra, c: &TensorChain) -> Result<TensorChain> {
    let (n, db) = matrix_params(a)?;
    let src = TensorBasis::new(a.dim());
    let tgt = TensorBasis::new(db);
    let mut out = TensorChain::zero(c.degree);
    let (mut legs, mut image) = (Vec::new(), Vec::new());
    for (idx, coef) in &c.terms {
        src.decode(*idx, c.degree, &mut legs);
        if trace_basis(n, db, &legs, &mut image) {
            out.add_term(tgt.encode(&image), coef.clone());
        }
    }
    Ok(out)
}

/// Matrix of the generalized trace in degree `k`.
pub fn trace_matrix(a: &FDAlgebra, k: usize, cap: usize) -> Result<Differential> {
    let (n, db) = matrix_params(a)?;
    let src = super::CyclicOps::with_cap(a, cap);
    let base = a.matrix_info().expect("checked").base.as_ref();
    let tgt = super::CyclicOps::with_cap(base, cap);
    let (ns, nt) = (src.dim(k)?, tgt.dim(k)?);
    let mut out = IntColumns::new(nt);
    let (mut legs, mut image) = (Vec::new(), Vec::new());
    for j in 0..ns {
        src.basis().decode(j, k, &mut legs);
        if trace_basis(n, db, &legs, &mut image) {
            out.push(alloc::vec![(tgt.basis().encode(&image) as u32, 1)]);
        } else {
            out.push(Vec::new());
        }
    }
    Ok(Differential::Integer(out))
}

/// The generalized trace as a map of Hochschild complexes
/// `(CC_•(M_n(B)), b) → (CC_•(B), b)` on degrees `0..=max_deg`.
pub fn trace_chain_map(a: &FDAlgebra, max_deg: usize, cap: usize) -> Result<ChainMap> {
    matrix_params(a)?;
    let base = a.matrix_info().expect("checked").base.as_ref();
    let source = super::hochschild_complex(&super::CyclicOps::with_cap(a, cap), max_deg)?;
    let target = super::hochschild_complex(&super::CyclicOps::with_cap(base, cap), max_deg)?;
    let components = (0..=max_deg)
        .map(|k| Ok((k as i64, trace_matrix(a, k, cap)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    ChainMap::new(source, target, components)
}

/// `a ↦ a·E₁₁` on every `A`-leg; the adjoined unit goes to the adjoined unit.
pub fn inclusion_map(base: &FDAlgebra, c: &TensorChain, n: usize) -> Result<TensorChain> {
    if n == 0 {
        return Err(Error::invalid("matrix size must be at least 1"));
    }
    let db = base.dim();
    let src = TensorBasis::new(db);
    let tgt = TensorBasis::new(n * n * db);
    let mut out = TensorChain::zero(c.degree);
    let mut legs = Vec::new();
    for (idx, coef) in &c.terms {
        src.decode(*idx, c.degree, &mut legs);
        if legs[0] == db {
            legs[0] = n * n * db;
        }
        out.add_term(tgt.encode(&legs), coef.clone());
    }
    Ok(out)
}

/// Matrix of [`inclusion_map`] in degree `k`.
pub fn inclusion_matrix(base: &FDAlgebra, n: usize, k: usize, cap: usize) -> Result<Differential> {
    let db = base.dim();
    let src = super::CyclicOps::with_cap(base, cap);
    let tgt_basis = TensorBasis::new(n * n * db);
    let nt = tgt_basis
        .len(k)
        .filter(|x| *x <= cap)
        .ok_or(Error::ResourceLimit {
            what: "tensor space dimension".into(),
            requested: tgt_basis.len(k).unwrap_or(usize::MAX),
            cap,
        })?;
    let mut out = IntColumns::new(nt);
    let mut legs = Vec::new();
    for j in 0..src.dim(k)? {
        src.basis().decode(j, k, &mut legs);
        if legs[0] == db {
            legs[0] = n * n * db;
        }
        out.push(alloc::vec![(tgt_basis.encode(&legs) as u32, 1)]);
    }
    Ok(Differential::Integer(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::cyclic::{CyclicOps, DEFAULT_CAP};
    use crate::linalg::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trace_of_e11_tensor_e11() {
        let m = matrices(2);
        let ops = CyclicOps::new(&m);
        let mut c = TensorChain::zero(1);
        c.add_term(ops.basis().encode(&[0, 0]), rat(1));
        let t = generalized_trace(&m, &c).unwrap();
        let mut expect = TensorChain::zero(1);
        expect.add_term(TensorBasis::new(1).encode(&[0, 0]), rat(1));
        assert_eq!(t, expect);
    }

    #[test]
    fn trace_after_inclusion_and_chain_map() {
        let base = dual_numbers();
        let m = base.matrix_algebra(2).unwrap();
        let (ob, om) = (CyclicOps::new(&base), CyclicOps::new(&m));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..4 {
            for _ in 0..10 {
                let c = TensorChain::random(&mut rng, base.dim(), k, 5);
                let inc = inclusion_map(&base, &c, 2).unwrap();
                assert_eq!(generalized_trace(&m, &inc).unwrap(), c);
                assert_eq!(
                    om.apply_B(&inc),
                    inclusion_map(&base, &ob.apply_B(&c), 2).unwrap()
                );
                let x = TensorChain::random(&mut rng, m.dim(), k, 5);
                let tx = generalized_trace(&m, &x).unwrap();
                assert_eq!(
                    generalized_trace(&m, &om.apply_b(&x)).unwrap(),
                    ob.apply_b(&tx)
                );
                assert_eq!(
                    generalized_trace(&m, &om.apply_B(&x)).unwrap(),
                    ob.apply_B(&tx)
                );
            }
        }
    }

    #[test]
    fn trace_is_a_quasi_isomorphism() {
        for base in [ground_field(), dual_numbers()] {
            let m = base.matrix_algebra(2).unwrap();
            let f = trace_chain_map(&m, 4, DEFAULT_CAP).unwrap();
            assert!(f.validate().is_ok());
            let r = crate::complex::cone_quasi_iso_test(&f).unwrap();
            assert!(r.is_quasi_iso(), "{:?}", r.failing_degrees);
            assert!(r.certified_degrees.contains(&2));
        }
    }
}
