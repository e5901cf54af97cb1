use hcyc_core::algebra::fixtures::{dual_numbers, ground_field, matrices, quadratic};
use hcyc_core::cdga::fixtures::{s2_times_s3, sphere3, torus3, torus3_transgression};
use hcyc_core::cyclic::{generalized_trace, inclusion_map, CyclicOps, TensorChain};
use hcyc_core::dd::fixtures::heisenberg_boundary;
use hcyc_core::dd::{class_compare, dd_cocycle, epsilon_from_lifts, LiftRule, Nerve};
use hcyc_core::linalg::{rank, rank_and_kernel, rat, smith_normal_form, IntegerMatrix};
use hcyc_core::{Rational, SparseMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn rational(m: &[Vec<i64>]) -> SparseMatrix {
    SparseMatrix::from_dense(
        &m.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

/// Product of random elementary integer operations.
fn unimodular(n: usize, seed: u64) -> IntegerMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            m[i].iter_mut().for_each(|x| *x = -x.clone());
        } else {
            let k = BigInt::from(rng.gen_range(-2i64..=2));
            let row = m[j].clone();
            for (a, b) in m[i].iter_mut().zip(row) {
                *a += &k * b;
            }
        }
    }
    IntegerMatrix::from_dense(&m)
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(m in int_matrix()) {
        let a = rational(&m);
        prop_assert_eq!(rank(&a), rank(&a.transpose()));
        prop_assert_eq!(rank(&a), smith_normal_form(&IntegerMatrix::from_i64(&m)).rank());
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in int_matrix()) {
        let a = rational(&m);
        let (r, kernel) = rank_and_kernel(&a);
        prop_assert_eq!(r + kernel.len(), a.cols());
        for k in &kernel {
            prop_assert!(a.mul_vec(k).iter().all(Zero::is_zero));
            prop_assert!(k.iter().any(|x| !x.is_zero()));
        }
    }

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(m in int_matrix()) {
        let a = IntegerMatrix::from_i64(&m);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.diagonal.clone());
        prop_assert!(s.u.determinant().unwrap().abs().is_one());
        prop_assert!(s.v.determinant().unwrap().abs().is_one());
        for w in s.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert_eq!(s.rank(), rank(&rational(&m)));
    }

    #[test]
    fn smith_factors_survive_unimodular_change_of_basis(m in int_matrix(), seed in any::<u64>()) {
        let a = IntegerMatrix::from_i64(&m);
        let p = unimodular(a.rows(), seed);
        let q = unimodular(a.cols(), seed.wrapping_add(1));
        let moved = p.mul(&a).unwrap().mul(&q).unwrap();
        prop_assert_eq!(smith_normal_form(&moved).invariant_factors, smith_normal_form(&a).invariant_factors);
    }

    #[test]
    fn operator_identities(which in 0usize..5, degree in 1usize..6, seed in any::<u64>()) {
        let a = match which {
            0 => ground_field(),
            1 => dual_numbers(),
            2 => quadratic(1),
            3 => matrices(2),
            _ => dual_numbers().matrix_algebra(2).unwrap(),
        };
        let ops = CyclicOps::new(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = TensorChain::random(&mut rng, a.dim(), degree, 5);
        prop_assert!(ops.apply_b(&ops.apply_b(&x)).is_zero());
        prop_assert!(ops.apply_B(&ops.apply_B(&x)).is_zero());
        prop_assert!(ops.apply_b(&ops.apply_B(&x)).add(&ops.apply_B(&ops.apply_b(&x))).unwrap().is_zero());
    }

    #[test]
    fn trace_inverts_inclusion(degree in 0usize..5, n in 2usize..4, seed in any::<u64>()) {
        let base = dual_numbers();
        let m = base.matrix_algebra(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = TensorChain::random(&mut rng, base.dim(), degree, 5);
        prop_assert_eq!(generalized_trace(&m, &inclusion_map(&base, &x, n).unwrap()).unwrap(), x);
    }

    #[test]
    fn model_differentials_square_to_zero_and_obey_leibniz(which in 0usize..4, seed in any::<u64>()) {
        let m = [sphere3(), s2_times_s3(), torus3(), torus3_transgression()][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = rng.gen_range(0..m.dim());
        let j = rng.gen_range(0..m.dim());
        let (x, y) = (m.basis_vector(i), m.basis_vector(j));
        prop_assert!(m.d(&m.d(&x)).iter().all(Zero::is_zero));
        let sign = if m.degree(i).is_multiple_of(2) { rat(1) } else { rat(-1) };
        let lhs = m.d(&m.mul(&x, &y));
        let rhs: Vec<Rational> = m
            .mul(&m.d(&x), &y)
            .into_iter()
            .zip(m.mul(&x, &m.d(&y)))
            .map(|(a, b)| a + &sign * b)
            .collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dd_class_ignores_the_lift(seed in any::<u64>()) {
        let g = heisenberg_boundary(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = dd_cocycle(&g.nerve, &epsilon_from_lifts(&g, &LiftRule::Canonical).unwrap()).unwrap();
        let rule = LiftRule::random_shift(&mut rng, &g);
        let other = dd_cocycle(&g.nerve, &epsilon_from_lifts(&g, &rule).unwrap()).unwrap();
        prop_assert!(class_compare(&g.nerve, &base, &other).unwrap().equal);
    }
}

#[test]
fn boundary_of_a_simplex_is_a_sphere() {
    for n in 2..=5 {
        let nv = Nerve::boundary_of_simplex(n);
        for p in 0..n {
            let h = nv.cohomology(p);
            let expect = (p == 0 || p == n - 1) as usize;
            assert_eq!((h.rank, h.torsion.len()), (expect, 0), "∂Δ^{n}, H^{p}");
        }
        for p in 0..n - 1 {
            let f: Vec<i64> = (0..nv.count(p)).map(|i| i as i64 % 5 - 2).collect();
            let dd = nv.coboundary(p + 1, &nv.coboundary(p, &f));
            assert!(dd.iter().all(|&x| x == 0));
        }
    }
}
