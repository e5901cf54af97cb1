//! Acceptance suite: one pass/fail line per criterion, runtime limits pinned
//! below. Exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use hcyc_core::algebra::fixtures::{dual_numbers, ground_field, matrices, quadratic};
use hcyc_core::algebra::{kaehler_differentials, FDAlgebra};
use hcyc_core::cdga::fixtures::{
    s2_times_s3, sphere3, torus3, torus3_transgression, truncated_de_rham,
};
use hcyc_core::cdga::{
    gauge_transform, twisted_cohomology, u_filtration_spectral_sequence, CDGAModel, Window,
};
use hcyc_core::chern::{
    chern_even, chern_odd, hkr_into_model, homotopy_check, jlo_chain_map_check, jlo_character,
    random_connection_form, random_idempotent_pair, random_invertible, random_unipotent,
    ConnectionDatum, ConnectionPath, Hkr, MatrixContext,
};
use hcyc_core::complex::{cone_quasi_iso_test, HomologyDim};
use hcyc_core::cyclic::{
    cyclic_homology, generalized_trace, hochschild_homology, inclusion_map,
    periodic_cyclic_homology, trace_chain_map, CyclicOps, TensorChain, DEFAULT_CAP,
};
use hcyc_core::dd::fixtures::{clock_shift_triangle, heisenberg_boundary, trivial};
use hcyc_core::dd::{
    check_pu_cocycle, class_compare, dd_cocycle, epsilon_from_lifts, LiftRule, Nerve,
    ProjectiveCocycle,
};
use hcyc_core::linalg::rat;
use hcyc_core::Rational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

const LIMIT_OPERATORS: Duration = Duration::from_secs(30);
const LIMIT_SCHATTEN: Duration = Duration::from_secs(120);
const LIMIT_MORITA: Duration = Duration::from_secs(300);
const LIMIT_TWISTED: Duration = Duration::from_secs(10);
const LIMIT_JLO: Duration = Duration::from_secs(120);
const LIMIT_DD: Duration = Duration::from_secs(10);

const CHAINS_PER_ALGEBRA: usize = 100;
const OPERATOR_MAX_DEGREE: usize = 6;
const HKR_CHAINS: usize = 50;
const GAUGE_SAMPLES: usize = 5;
const JLO_CHAINS: usize = 50;
const HOMOTOPY_CHAINS: usize = 20;
const CHERN_SAMPLES: usize = 20;
const DD_SAMPLES: usize = 10;
/// Degree 6 of `M_2(C[x]/(x²))` spans 9·8⁶ tensors.
const MORITA_CAP: usize = 3_000_000;

type Outcome = Result<(), String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    check(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn dims(h: &BTreeMap<usize, HomologyDim>, upto: usize) -> Result<Vec<usize>, String> {
    (0..=upto)
        .map(|n| match h.get(&n) {
            Some(d) if d.certified => Ok(d.dim),
            _ => Err(format!("degree {n} is not certified")),
        })
        .collect()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn operators() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let algebras = [
        ("C", ground_field()),
        ("C[x]/(x^2)", dual_numbers()),
        ("C[x]/(x^2-1)", quadratic(1)),
        ("M2(C)", matrices(2)),
        (
            "M2(C[x]/(x^2))",
            dual_numbers().matrix_algebra(2).map_err(err)?,
        ),
    ];
    for (name, a) in &algebras {
        let ops = CyclicOps::new(a);
        for i in 0..CHAINS_PER_ALGEBRA {
            let deg = i % (OPERATOR_MAX_DEGREE + 1);
            let x = TensorChain::random(&mut rng, a.dim(), deg, 4);
            let bx = ops.apply_b(&x);
            let big = ops.apply_B(&x);
            check(deg == 0 || ops.apply_b(&bx).is_zero(), || {
                format!("b² ≠ 0 on {name}")
            })?;
            check(ops.apply_B(&big).is_zero(), || format!("B² ≠ 0 on {name}"))?;
            let anti = if deg == 0 {
                ops.apply_b(&big)
            } else {
                ops.apply_b(&big).add(&ops.apply_B(&bx)).map_err(err)?
            };
            check(anti.is_zero(), || {
                format!("bB + Bb ≠ 0 on {name} in degree {deg}")
            })?;
        }
    }
    within(start, LIMIT_OPERATORS)
}

fn schatten() -> Outcome {
    let start = Instant::now();
    for k in [2, 3] {
        let hh = dims(
            &hochschild_homology(&matrices(k), 5, DEFAULT_CAP).map_err(err)?,
            4,
        )?;
        check(hh == [1, 0, 0, 0, 0], || format!("HH(M{k}) = {hh:?}"))?;
    }
    let hc = dims(
        &cyclic_homology(&ground_field(), 9, DEFAULT_CAP).map_err(err)?,
        8,
    )?;
    let expect: Vec<usize> = (0..=8).map(|n| (n % 2 == 0) as usize).collect();
    check(hc == expect, || format!("HC(C) = {hc:?}"))?;
    let hp = periodic_cyclic_homology(&ground_field(), 9, DEFAULT_CAP).map_err(err)?;
    check(hp.is_stabilized(), || "HP(C) did not stabilize".into())?;
    check(hp.even == Some(1) && hp.odd == Some(0), || {
        format!("HP(C) = ({:?}, {:?})", hp.even, hp.odd)
    })?;
    within(start, LIMIT_SCHATTEN)
}

fn morita() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for base in [ground_field(), dual_numbers()] {
        let m = base.matrix_algebra(2).map_err(err)?;
        for k in 0..=4 {
            for _ in 0..10 {
                let x = TensorChain::random(&mut rng, base.dim(), k, 5);
                let back = generalized_trace(&m, &inclusion_map(&base, &x, 2).map_err(err)?)
                    .map_err(err)?;
                check(back == x, || format!("tr∘inc ≠ id in degree {k}"))?;
            }
        }
        let f = trace_chain_map(&m, 6, MORITA_CAP).map_err(err)?;
        check(f.validate().is_ok(), || "trace is not a chain map".into())?;
        let cone = cone_quasi_iso_test(&f).map_err(err)?;
        check(cone.is_quasi_iso(), || {
            format!("cone has homology in {:?}", cone.failing_degrees)
        })?;
        check((0..=4).all(|k| cone.certified_degrees.contains(&k)), || {
            format!("certified only {:?}", cone.certified_degrees)
        })?;
    }
    within(start, LIMIT_MORITA)
}

/// Rank over Q by dense Gaussian elimination.
fn dense_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= p * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Unnormalized Hochschild boundary `A^{⊗(n+1)} → A^{⊗n}` from structure
/// constants, as a dense matrix.
#[allow(clippy::needless_range_loop)]
fn dense_boundary(a: &FDAlgebra, n: usize) -> Vec<Vec<Rational>> {
    let d = a.dim();
    let table: Vec<Vec<Vec<Rational>>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| a.mul(&a.basis_vector(i), &a.basis_vector(j)))
                .collect()
        })
        .collect();
    let (src, tgt) = (d.pow(n as u32 + 1), d.pow(n as u32));
    let mut m = vec![vec![Rational::zero(); src]; tgt];
    let digits = |mut x: usize, len: usize| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = x % d;
            x /= d;
        }
        v
    };
    let encode = |v: &[usize]| v.iter().fold(0, |acc, &x| acc * d + x);
    for col in 0..src {
        let legs = digits(col, n + 1);
        for i in 0..n {
            let sign = if i % 2 == 0 {
                Rational::one()
            } else {
                -Rational::one()
            };
            for (k, c) in table[legs[i]][legs[i + 1]].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut t = legs[..i].to_vec();
                t.push(k);
                t.extend_from_slice(&legs[i + 2..]);
                m[encode(&t)][col] += &sign * c;
            }
        }
        let sign = if n.is_multiple_of(2) {
            Rational::one()
        } else {
            -Rational::one()
        };
        for (k, c) in table[legs[n]][legs[0]].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut t = vec![k];
            t.extend_from_slice(&legs[1..n]);
            m[encode(&t)][col] += &sign * c;
        }
    }
    m
}

fn oracle_hh(a: &FDAlgebra, upto: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (1..=upto + 1)
        .map(|n| dense_rank(dense_boundary(a, n)))
        .collect();
    (0..=upto)
        .map(|n| {
            let into = if n == 0 { 0 } else { ranks[n - 1] };
            a.dim().pow(n as u32 + 1) - into - ranks[n]
        })
        .collect()
}

fn dual_oracle() -> Outcome {
    let a = dual_numbers();
    let engine = dims(&hochschild_homology(&a, 5, DEFAULT_CAP).map_err(err)?, 4)?;
    let oracle = oracle_hh(&a, 4);
    check(engine == [2, 1, 1, 1, 1], || {
        format!("engine HH = {engine:?}")
    })?;
    check(oracle == engine, || {
        format!("oracle {oracle:?} vs engine {engine:?}")
    })
}

fn hkr() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for a in [dual_numbers(), quadratic(1)] {
        let ops = CyclicOps::new(&a);
        let h = Hkr::new(&a, 4).map_err(err)?;
        for i in 0..HKR_CHAINS {
            let k = i % 4;
            let x = TensorChain::random(&mut rng, a.dim(), k + 1, 4);
            let image = h.apply(&ops.apply_b(&x)).map_err(err)?;
            check(image.iter().all(Zero::is_zero), || {
                format!("φ_{k}(b x) ≠ 0")
            })?;
        }
    }
    let omega = |a: &FDAlgebra, n| kaehler_differentials(a, n).map(|m| m.dim).map_err(err);
    let smooth = quadratic(1);
    let hh = dims(
        &hochschild_homology(&smooth, 5, DEFAULT_CAP).map_err(err)?,
        4,
    )?;
    let om = (0..=4)
        .map(|n| omega(&smooth, n))
        .collect::<Result<Vec<_>, _>>()?;
    check(hh == om && hh == [2, 0, 0, 0, 0], || {
        format!("C[x]/(x²−1): HH {hh:?}, Ω {om:?}")
    })?;
    let dual = dual_numbers();
    let hh = dims(&hochschild_homology(&dual, 3, DEFAULT_CAP).map_err(err)?, 2)?;
    let (o1, o2) = (omega(&dual, 1)?, omega(&dual, 2)?);
    check(hh[1] == 1 && o1 == 1, || {
        format!("HH_1 = {}, Ω¹ = {o1}", hh[1])
    })?;
    check(hh[2] == 1 && o2 == 0, || {
        format!("HH_2 = {}, Ω² = {o2}", hh[2])
    })
}

fn scaled(v: Vec<Rational>, k: i64) -> Vec<Rational> {
    v.into_iter().map(|x| x * rat(k)).collect()
}

fn label(m: &CDGAModel, l: &str) -> Result<Vec<Rational>, String> {
    m.element_by_label(l)
        .ok_or_else(|| format!("no basis element {l}"))
}

fn all_zero(m: &CDGAModel, c: &[Rational], w: Window, name: &str) -> Outcome {
    let tw = twisted_cohomology(m, c, w).map_err(err)?;
    let certified: Vec<(i64, usize)> = tw.certified().collect();
    check(
        !certified.is_empty() && certified.iter().all(|x| x.1 == 0),
        || format!("{name}: {certified:?}"),
    )
}

/// With `c = 0`, `H^n = ⊕ H^p` over form degrees `p ≡ n` whose `u`-power
/// `(p − n)/2` lies in the window.
fn untwisted(m: &CDGAModel, w: Window, name: &str) -> Outcome {
    let tw = twisted_cohomology(m, &m.zero_vector(), w).map_err(err)?;
    let coh = m.cohomology_dims();
    let mut seen = 0;
    for (n, d) in tw.certified() {
        let expect: usize = coh
            .iter()
            .enumerate()
            .filter(|(p, _)| {
                let j2 = *p as i64 - n;
                j2 % 2 == 0 && (w.jmin..=w.jmax).contains(&(j2 / 2))
            })
            .map(|(_, h)| h)
            .sum();
        check(d == expect, || {
            format!("{name}: H^{n} = {d}, de Rham gives {expect}")
        })?;
        seen += 1;
    }
    check(seen > 0, || format!("{name}: nothing certified"))
}

fn gauge(m: &CDGAModel, c: &[Rational], beta: &[Rational], w: Window) -> Outcome {
    let before = twisted_cohomology(m, c, w).map_err(err)?;
    let c2: Vec<Rational> = c.iter().zip(m.d(beta)).map(|(a, b)| a + b).collect();
    let after = twisted_cohomology(m, &c2, w).map_err(err)?;
    check(before.certified().eq(after.certified()), || {
        "gauge changed the dimensions".into()
    })?;
    let cone = cone_quasi_iso_test(&gauge_transform(m, c, beta, w).map_err(err)?).map_err(err)?;
    let quasi = before
        .certified()
        .all(|(n, _)| !cone.failing_degrees.contains(&n));
    check(quasi, || {
        format!("e^(uβ) fails in {:?}", cone.failing_degrees)
    })
}

fn random_two_form<R: Rng>(rng: &mut R, m: &CDGAModel) -> Vec<Rational> {
    let mut beta = m.zero_vector();
    for i in m.basis_of_degree(2) {
        beta[i] = rat(rng.gen_range(-3..=3));
    }
    beta
}

fn twisted() -> Outcome {
    let start = Instant::now();
    let w = Window::symmetric(4).map_err(err)?;
    let s3 = sphere3();
    all_zero(&s3, &label(&s3, "x3")?, w, "S³")?;
    let s2s3 = s2_times_s3();
    for k in [1, 2] {
        all_zero(&s2s3, &scaled(label(&s2s3, "b3")?, k), w, "S²×S³")?;
    }
    untwisted(&s3, w, "S³")?;
    untwisted(&s2s3, w, "S²×S³")?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let t3 = torus3();
    let vol = label(&t3, "e1e2e3")?;
    let tg = torus3_transgression();
    for _ in 0..GAUGE_SAMPLES {
        gauge(&t3, &vol, &random_two_form(&mut rng, &t3), w)?;
        gauge(&tg, &tg.zero_vector(), &random_two_form(&mut rng, &tg), w)?;
    }
    within(start, LIMIT_TWISTED)
}

fn spectral() -> Outcome {
    let m = s2_times_s3();
    let rep = u_filtration_spectral_sequence(
        &m,
        &label(&m, "b3")?,
        Window::symmetric(4).map_err(err)?,
        6,
    )
    .map_err(err)?;
    check(!rep.certified_degrees.is_empty(), || {
        "no certified degree".into()
    })?;
    check(rep.e2_matches_cohomology, || "E₂ ≠ de Rham".into())?;
    check(rep.d3_matches_cup, || "d₃ ≠ cup with [c]".into())?;
    check(rep.even_differentials_vanish, || {
        "an even differential is nonzero".into()
    })?;
    check(rep.e4_is_e_infinity, || "E₄ ≠ E_∞".into())?;
    check(rep.e_infinity_matches_twisted, || {
        "E_∞ ≠ twisted cohomology".into()
    })
}

fn chains<R: Rng>(
    rng: &mut R,
    datum: &ConnectionDatum,
    count: usize,
    max_degree: usize,
) -> Vec<TensorChain> {
    let d = datum.chain_algebra().dim();
    (0..count)
        .map(|i| TensorChain::random(rng, d, i % (max_degree + 1), 3))
        .collect()
}

fn jlo() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let m = torus3_transgression();
    let phi: Vec<Rational> = label(&m, "f")?.into_iter().map(|x| -x).collect();
    let datum =
        ConnectionDatum::new(&m, 2, random_connection_form(&mut rng, &m, 2), phi).map_err(err)?;
    datum.check_axioms().map_err(err)?;
    check(datum.twist().iter().any(|x| !x.is_zero()), || {
        "twist vanishes".into()
    })?;
    let rep = jlo_chain_map_check(&datum, &chains(&mut rng, &datum, JLO_CHAINS, 3));
    check(
        rep.chains_checked >= JLO_CHAINS && rep.failures == 0,
        || format!("{rep:?}"),
    )?;

    let flat = truncated_de_rham(2, 3);
    let zero = ConnectionDatum::new(
        &flat,
        2,
        vec![Rational::zero(); 4 * flat.dim()],
        flat.zero_vector(),
    )
    .map_err(err)?;
    for x in chains(&mut rng, &zero, 20, 2) {
        let ch = jlo_character(&zero, &x);
        check(ch.components.keys().all(|j| *j == 0), || {
            "trivial Ch has u-powers".into()
        })?;
        let got = ch
            .components
            .get(&0)
            .cloned()
            .unwrap_or_else(|| flat.zero_vector());
        let tr = generalized_trace(zero.chain_algebra(), &x).map_err(err)?;
        let expect = hkr_into_model(&flat, zero.degree_zero_embedding(), &tr).map_err(err)?;
        check(got == expect, || {
            format!("trivial Ch ≠ φ∘tr in degree {}", x.degree)
        })?;
    }

    let alpha = random_connection_form(&mut rng, &m, 2);
    let path = ConnectionPath::new(datum, alpha, vec![label(&m, "f")?]).map_err(err)?;
    let sample = chains(&mut rng, &path.start, HOMOTOPY_CHAINS, 1);
    let rep = homotopy_check(&path, &sample).map_err(err)?;
    check(
        rep.chains_checked >= HOMOTOPY_CHAINS && rep.failures == 0,
        || format!("{rep:?}"),
    )?;
    within(start, LIMIT_JLO)
}

fn factorial(m: usize) -> Rational {
    (1..=m as i64).fold(rat(1), |acc, k| acc * rat(k))
}

fn chern() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let ctx = MatrixContext::new(&dual_numbers(), 2).map_err(err)?;
    for _ in 0..CHERN_SAMPLES {
        let pair = random_idempotent_pair(&mut rng, &ctx).map_err(err)?;
        let ch = chern_even(&ctx, &pair, 4).map_err(err)?;
        check(ch.closed, || "even character not closed".into())?;
        let diff: Vec<Rational> = pair.p.iter().zip(&pair.q).map(|(p, q)| p - q).collect();
        let t0 = ctx.trace_tensor(&[diff]).map_err(err)?;
        let c0 = ch
            .chain
            .components
            .get(&0)
            .cloned()
            .unwrap_or_else(|| TensorChain::zero(0));
        check(c0 == t0, || "degree 0 ≠ tr(P − Q)".into())?;
    }
    let x = |r, c| ctx.entry(r, c, &[rat(0), rat(1)]);
    let nil = [
        x(0, 0),
        x(0, 1),
        x(1, 0),
        x(1, 1),
        ctx.entry(0, 1, &[rat(1), rat(0)]),
    ];
    let mut substituted = 0;
    for i in 0..CHERN_SAMPLES {
        let u = if i % 2 == 0 {
            random_unipotent(&mut rng, &ctx, &nil)
        } else {
            random_invertible(&mut rng, &ctx)
        }
        .map_err(err)?;
        let ch = chern_odd(&ctx, &u, 5).map_err(err)?;
        check(ch.closed, || {
            format!("odd character not closed under {:?}", ch.used)
        })?;
        if ch.substituted() {
            substituted += 1;
            check(!ch.printed_closed, || {
                "substituted a schedule that already closes".into()
            })?;
            let alternating = ch
                .used
                .iter()
                .enumerate()
                .all(|(m, c)| *c == factorial(m) * rat(if m % 2 == 0 { 1 } else { -1 }));
            check(alternating, || {
                format!("unexpected substitute {:?}", ch.used)
            })?;
        } else {
            check(ch.printed_closed && ch.used == ch.printed, || {
                "schedule not documented".into()
            })?;
        }
    }
    println!(
        "    odd schedule: (−1)^m m! substituted for m! on {substituted} of {CHERN_SAMPLES} inputs"
    );
    Ok(())
}

fn three_cocycle(
    g: &ProjectiveCocycle,
    rule: &LiftRule,
) -> Result<hcyc_core::dd::CechThreeCocycle, String> {
    check_pu_cocycle(g).map_err(err)?;
    dd_cocycle(&g.nerve, &epsilon_from_lifts(g, rule).map_err(err)?).map_err(err)
}

fn dixmier_douady() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let sphere = Nerve::boundary_of_simplex(4);
    let fixtures = [
        ("heisenberg", heisenberg_boundary(3)),
        ("trivial", trivial(sphere.clone(), 3, 2)),
        ("clock_shift_triangle", clock_shift_triangle(3)),
    ];
    for (name, g) in &fixtures {
        let nv = &g.nerve;
        check_pu_cocycle(g).map_err(err)?;
        let eps = epsilon_from_lifts(g, &LiftRule::Canonical).map_err(err)?;
        check(eps.is_cocycle(nv), || format!("{name}: δε ≠ 0"))?;
        let n = dd_cocycle(nv, &eps).map_err(err)?;
        check(nv.coboundary(3, &n.values).iter().all(|&x| x == 0), || {
            format!("{name}: δn ≠ 0")
        })?;
        for _ in 0..DD_SAMPLES {
            let relift = three_cocycle(g, &LiftRule::random_shift(&mut rng, g))?;
            check(class_compare(nv, &n, &relift).map_err(err)?.equal, || {
                format!("{name}: re-lift moved the class")
            })?;
            let eta: Vec<u64> = (0..nv.count(1))
                .map(|_| rng.gen_range(0..g.modulus))
                .collect();
            let shifted = dd_cocycle(nv, &eps.add_coboundary(nv, &eta)).map_err(err)?;
            check(class_compare(nv, &n, &shifted).map_err(err)?.equal, || {
                format!("{name}: ε-coboundary moved the class")
            })?;
        }
    }
    let h3 = sphere.cohomology(3);
    check(h3.rank == 1 && h3.torsion.is_empty(), || {
        "H³(∂Δ⁴; Z) ≠ Z".into()
    })?;
    let zero = three_cocycle(&fixtures[1].1, &LiftRule::Canonical)?;
    check(h3.class_of(&zero.values).map_err(err)?.is_zero(), || {
        "trivial class ≠ 0".into()
    })?;
    within(start, LIMIT_DD)?;
    let heis = three_cocycle(&fixtures[0].1, &LiftRule::Canonical)?;
    let class = h3.class_of(&heis.values).map_err(err)?;
    check(!class.is_zero(), || {
        format!(
            "Heisenberg class on ∂Δ⁴ is {:?}, expected nonzero",
            class.free
        )
    })
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hcyc"))
            .args(["selftest", "--seed", "7"])
            .output()
            .map_err(err)
    };
    let (a, b) = (run()?, run()?);
    check(a.status.success(), || {
        String::from_utf8_lossy(&a.stderr).into_owned()
    })?;
    check(!a.stdout.is_empty() && a.stdout == b.stdout, || {
        "selftest reports differ".into()
    })
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("1  operator identities b² = B² = bB + Bb = 0", operators),
        ("2  HH(M_k), HC(C), HP(C)", schatten),
        ("3  tr∘inc = id, trace is a quasi-isomorphism", morita),
        ("4  HH(C[x]/(x²)) against a dense oracle", dual_oracle),
        ("5  HKR map and smoothness", hkr),
        ("6  twisted cohomology and gauge invariance", twisted),
        ("7  u-filtration spectral sequence", spectral),
        ("8  JLO chain map, trivial reduction, homotopy", jlo),
        ("9  Chern character closedness", chern),
        ("10 Dixmier-Douady pipeline", dixmier_douady),
        ("11 selftest determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        match f() {
            Ok(()) => println!("PASS  {name}  ({:.1?})", start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL  {name}: {e}");
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
