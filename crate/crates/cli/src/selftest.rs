//! The property suite behind `hcyc selftest`, at sizes that run in seconds.

use hcyc_core::algebra::fixtures::{dual_numbers, ground_field, matrices, quadratic};
use hcyc_core::algebra::FDAlgebra;
use hcyc_core::cdga::fixtures::{s2_times_s3, sphere3, torus3, torus3_transgression};
use hcyc_core::cdga::Window;
use hcyc_core::chern::{
    homotopy_check, jlo_chain_map_check, random_connection_form, ConnectionDatum, ConnectionPath,
    MatrixContext,
};
use hcyc_core::cyclic::{
    cyclic_homology, generalized_trace, hochschild_homology, inclusion_map, CyclicOps, TensorChain,
    DEFAULT_CAP,
};
use hcyc_core::dd::fixtures::{heisenberg_boundary, suspended_projective_plane, trivial};
use hcyc_core::dd::{cocycle_basis_mod_prime, dd_cocycle, LiftRule, Nerve};
use hcyc_core::linalg::rat;
use hcyc_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{
    chern, dd, gauge_check, hp, random_chains, rows, spectral, three_cocycle, twisted,
};
use crate::{CliError, Parity, Report};

fn operator_identities<R: Rng>(r: &mut Report, name: &str, a: &FDAlgebra, rng: &mut R) {
    let ops = CyclicOps::new(a);
    for i in 0..8 {
        let x = TensorChain::random(rng, a.dim(), 1 + i % 4, 4);
        let bb = ops.apply_b(&ops.apply_b(&x));
        let big = ops.apply_B(&ops.apply_B(&x));
        let anti = ops
            .apply_b(&ops.apply_B(&x))
            .add(&ops.apply_B(&ops.apply_b(&x)))
            .map(|c| c.is_zero())
            .unwrap_or(false);
        r.record(
            &format!("operators_{name}"),
            bb.is_zero() && big.is_zero() && anti,
        );
    }
}

fn dims(
    h: &std::collections::BTreeMap<usize, hcyc_core::complex::HomologyDim>,
    upto: usize,
) -> Vec<usize> {
    (0..=upto).map(|n| h[&n].dim).collect()
}

fn twisted_zero(
    m: &hcyc_core::cdga::CDGAModel,
    c: &[Rational],
    w: Window,
) -> Result<bool, CliError> {
    let tw = hcyc_core::cdga::twisted_cohomology(m, c, w)?;
    Ok(tw.certified().count() > 0 && tw.certified().all(|(_, d)| d == 0))
}

fn scaled(v: Vec<Rational>, k: i64) -> Vec<Rational> {
    v.into_iter().map(|x| x * rat(k)).collect()
}

pub(crate) fn run(r: &mut Report, seed: u64) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let m2_dual = dual_numbers().matrix_algebra(2)?;
    for (name, a) in [
        ("C", ground_field()),
        ("dual_numbers", dual_numbers()),
        ("split_quadratic", quadratic(1)),
        ("M2", matrices(2)),
        ("M2_dual_numbers", m2_dual),
    ] {
        operator_identities(r, name, &a, &mut rng);
    }

    let hh_m2 = hochschild_homology(&matrices(2), 4, DEFAULT_CAP)?;
    r.record("hh_matrices", dims(&hh_m2, 3) == [1, 0, 0, 0]);
    r.table("HH(M2)", &["n"], rows(&hh_m2));
    let hh_dual = hochschild_homology(&dual_numbers(), 4, DEFAULT_CAP)?;
    r.record("hh_dual_numbers", dims(&hh_dual, 3) == [2, 1, 1, 1]);
    r.table("HH(dual_numbers)", &["n"], rows(&hh_dual));
    let hc = cyclic_homology(&ground_field(), 6, DEFAULT_CAP)?;
    r.record("hc_ground_field", dims(&hc, 6) == [1, 0, 1, 0, 1, 0, 1]);
    r.table("HC(C)", &["n"], rows(&hc));
    let mut sub = Report::new(Default::default(), seed);
    hp(&mut sub, &ground_field(), 9, DEFAULT_CAP)?;
    let hp_rows = &sub.tables[0].rows;
    r.record(
        "hp_ground_field",
        hp_rows.iter().all(|x| x.certified) && hp_rows[0].dim == 1 && hp_rows[1].dim == 0,
    );

    for _ in 0..5 {
        let base = dual_numbers();
        let k = rng.gen_range(0..4);
        let x = TensorChain::random(&mut rng, base.dim(), k, 4);
        let m = base.matrix_algebra(2)?;
        let back = generalized_trace(&m, &inclusion_map(&base, &x, 2)?)?;
        r.record("trace_after_inclusion", back == x);
    }

    let w = Window::symmetric(3)?;
    let s3 = sphere3();
    r.record(
        "twisted_sphere",
        twisted_zero(&s3, &s3.element_by_label("x3").unwrap_or_default(), w)?,
    );
    let s2s3 = s2_times_s3();
    for k in [1, 2] {
        let c = scaled(s2s3.element_by_label("b3").unwrap_or_default(), k);
        r.record("twisted_s2_s3", twisted_zero(&s2s3, &c, w)?);
    }
    twisted(r, &s3, &s3.element_by_label("x3").unwrap_or_default(), w)?;

    let t3 = torus3();
    let vol = t3.element_by_label("e1e2e3").unwrap_or_default();
    let twos = t3.basis_of_degree(2);
    for _ in 0..2 {
        let mut beta = t3.zero_vector();
        for &i in &twos {
            beta[i] = rat(rng.gen_range(-2..=2));
        }
        r.record("gauge_invariance", gauge_check(&t3, &vol, &beta, w)?);
    }

    let mut ss = Report::new(Default::default(), seed);
    spectral(
        &mut ss,
        &s2s3,
        &s2s3.element_by_label("b3").unwrap_or_default(),
        w,
        6,
    )?;
    r.record("spectral_sequence", ss.failures() == 0);

    let ctx = MatrixContext::new(&dual_numbers(), 2)?;
    chern(r, &ctx, Parity::Even, 3, 4, &mut rng)?;
    chern(r, &ctx, Parity::Odd, 3, 3, &mut rng)?;

    let m = torus3_transgression();
    let phi: Vec<Rational> = m
        .element_by_label("f")
        .unwrap_or_default()
        .into_iter()
        .map(|x| -x)
        .collect();
    let theta = random_connection_form(&mut rng, &m, 2);
    let datum = ConnectionDatum::new(&m, 2, theta, phi)?;
    r.record("connection_axioms", datum.check_axioms().is_ok());
    r.record("twist_nonzero", datum.twist().iter().any(|x| *x != rat(0)));
    let chains = random_chains(&mut rng, &datum, 6, 2);
    let rep = jlo_chain_map_check(&datum, &chains);
    r.tally(
        "jlo_chain_map",
        rep.chains_checked - rep.failures,
        rep.failures,
    );
    let alpha = random_connection_form(&mut rng, &m, 2);
    let beta = vec![m.element_by_label("f").unwrap_or_default()];
    let path = ConnectionPath::new(datum, alpha, beta)?;
    let chains = random_chains(&mut rng, &path.start, 2, 1);
    let rep = homotopy_check(&path, &chains)?;
    r.tally(
        "homotopy_formula",
        rep.chains_checked - rep.failures,
        rep.failures,
    );

    let mut heis = Report::new(Default::default(), seed);
    dd(
        &mut heis,
        &heisenberg_boundary(3),
        &LiftRule::Canonical,
        3,
        &mut rng,
    )?;
    r.record("dd_heisenberg_cocycles", heis.failures() == 0);
    let trivial_class = three_cocycle(
        &trivial(Nerve::boundary_of_simplex(4), 3, 2),
        &LiftRule::Canonical,
    )?;
    let h3 = Nerve::boundary_of_simplex(4).cohomology(3);
    r.record(
        "dd_trivial_class_zero",
        h3.class_of(&trivial_class.values)?.is_zero(),
    );
    let susp = suspended_projective_plane();
    let h3 = susp.cohomology(3);
    let mut nonzero = false;
    for eps in cocycle_basis_mod_prime(&susp, 2, 2) {
        nonzero |= !h3.class_of(&dd_cocycle(&susp, &eps)?.values)?.is_zero();
    }
    r.record("dd_torsion_class_nonzero", nonzero);
    Ok(())
}
