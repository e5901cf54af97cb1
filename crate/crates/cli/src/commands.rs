//! One function per subcommand, each filling a [`Report`].

use std::collections::BTreeMap;

use hcyc_core::cdga::{
    gauge_transform, twisted_cohomology, u_filtration_spectral_sequence, CDGAModel, Window,
};
use hcyc_core::chern::{
    chern_even, chern_odd, homotopy_check, jlo_chain_map_check, random_connection_form,
    random_idempotent_pair, random_invertible, ChernCharacter, ConnectionDatum, ConnectionPath,
    MatrixContext,
};
use hcyc_core::complex::{cone_quasi_iso_test, HomologyDim};
use hcyc_core::cyclic::{
    cyclic_homology, hochschild_homology, periodic_cyclic_homology, TensorChain,
};
use hcyc_core::dd::{
    check_pu_cocycle, class_compare, dd_cocycle, describe_group, epsilon_from_lifts,
    CechThreeCocycle, ClassCoordinates, LiftRule, Nerve, ProjectiveCocycle,
};
use hcyc_core::{Error, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::schema::{load_algebra, load_cdga, load_cocycle, load_nerve, parse_element};
use crate::{selftest, CliError, Command, ConnectionInput, Lift, Parity, Report, Row, RunConfig};

pub(crate) fn dispatch(cfg: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let cap = cfg.cap as usize;
    let max_degree = |default: usize| cfg.max_degree.map_or(default, |d| d as usize);
    let window = || Window::symmetric(cfg.window.map_or(4, |w| w as i64));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match &cfg.command {
        Command::Hh(a) => {
            let alg = load_algebra(&a.algebra)?;
            let h = hochschild_homology(&alg, max_degree(4), cap)?;
            r.table("HH", &["n"], rows(&h));
        }
        Command::Hc(a) => {
            let alg = load_algebra(&a.algebra)?;
            let h = cyclic_homology(&alg, max_degree(4), cap)?;
            r.table("HC", &["n"], rows(&h));
        }
        Command::Hp(a) => {
            let alg = load_algebra(&a.algebra)?;
            hp(r, &alg, max_degree(9), cap)?;
        }
        Command::Twisted(t) => {
            let m = load_cdga(&t.cdga)?;
            let c = parse_element(&m, &t.twist)?;
            twisted(r, &m, &c, window()?)?;
        }
        Command::Ss { input, pages } => {
            let m = load_cdga(&input.cdga)?;
            let c = parse_element(&m, &input.twist)?;
            spectral(r, &m, &c, window()?, *pages)?;
        }
        Command::Chern {
            input,
            size,
            parity,
            samples,
        } => {
            let alg = load_algebra(&input.algebra)?;
            let ctx = MatrixContext::new(&alg, *size)?;
            chern(r, &ctx, *parity, *samples, max_degree(4), &mut rng)?;
        }
        Command::Jlo(j) => {
            let (m, datum) = connection(j, &mut rng)?;
            let chains = random_chains(&mut rng, &datum, j.samples, max_degree(3));
            let rep = jlo_chain_map_check(&datum, &chains);
            r.tally(
                "jlo_chain_map",
                rep.chains_checked - rep.failures,
                rep.failures,
            );
            r.fact("max_discrepancy", rep.max_discrepancy.to_string(), true);
            r.fact("twist", element(&m, datum.twist()), true);
        }
        Command::Homotopy { input, beta } => {
            let (m, datum) = connection(input, &mut rng)?;
            let alpha = random_connection_form(&mut rng, &m, input.size);
            let beta = beta
                .iter()
                .map(|b| parse_element(&m, b))
                .collect::<Result<Vec<_>, _>>()?;
            let path = ConnectionPath::new(datum, alpha, beta)?;
            let chains = random_chains(&mut rng, &path.start, input.samples, max_degree(2));
            let rep = homotopy_check(&path, &chains)?;
            r.tally(
                "homotopy_formula",
                rep.chains_checked - rep.failures,
                rep.failures,
            );
            r.fact("max_discrepancy", rep.max_discrepancy.to_string(), true);
        }
        Command::Dd {
            nerve,
            cocycle,
            lift,
            samples,
        } => {
            let nv = load_nerve(nerve)?;
            let g = load_cocycle(cocycle, &nv)?;
            let rule = match lift {
                Lift::Canonical => LiftRule::Canonical,
                Lift::AsGiven => LiftRule::AsGiven,
            };
            dd(r, &g, &rule, *samples, &mut rng)?;
        }
        Command::ClassCompare {
            nerve,
            first,
            second,
        } => {
            let nv = load_nerve(nerve)?;
            let a = three_cocycle(&load_cocycle(first, &nv)?, &LiftRule::Canonical)?;
            let b = three_cocycle(&load_cocycle(second, &nv)?, &LiftRule::Canonical)?;
            let cmp = class_compare(&nv, &a, &b)?;
            r.fact("H3", describe_group(&nv.cohomology(3)), true);
            r.fact("first_class", coordinates(&cmp.first), true);
            r.fact("second_class", coordinates(&cmp.second), true);
            r.fact("equal", cmp.equal, true);
        }
        Command::Selftest => selftest::run(r, cfg.seed)?,
    }
    Ok(())
}

pub(crate) fn rows(h: &BTreeMap<usize, HomologyDim>) -> Vec<Row> {
    h.iter()
        .map(|(n, d)| Row {
            index: vec![*n as i64],
            dim: d.dim,
            certified: d.certified,
        })
        .collect()
}

pub(crate) fn signed_rows(h: &BTreeMap<i64, HomologyDim>) -> Vec<Row> {
    h.iter()
        .map(|(n, d)| Row {
            index: vec![*n],
            dim: d.dim,
            certified: d.certified,
        })
        .collect()
}

pub(crate) fn hp(
    r: &mut Report,
    alg: &hcyc_core::algebra::FDAlgebra,
    max_degree: usize,
    cap: usize,
) -> Result<(), CliError> {
    let hp = periodic_cyclic_homology(alg, max_degree, cap)?;
    let last = &hp.runs[1];
    let row = |p: usize, v: Option<usize>| Row {
        index: vec![p as i64],
        dim: v.unwrap_or(last.two_step_image[p]),
        certified: v.is_some(),
    };
    r.table("HP", &["parity"], vec![row(0, hp.even), row(1, hp.odd)]);
    r.fact("stabilized", hp.is_stabilized(), true);
    r.fact(
        "runs",
        Value::Array(
            hp.runs
                .iter()
                .map(|run| {
                    json!({
                        "depth": run.depth,
                        "max_tensor_degree": run.max_tensor_degree,
                        "truncated_dims": run.truncated_dims,
                        "one_step_image": run.one_step_image,
                        "two_step_image": run.two_step_image,
                    })
                })
                .collect(),
        ),
        true,
    );
    Ok(())
}

pub(crate) fn twisted(
    r: &mut Report,
    m: &CDGAModel,
    c: &[Rational],
    w: Window,
) -> Result<(), CliError> {
    let tw = twisted_cohomology(m, c, w)?;
    r.table("H_twisted", &["n"], signed_rows(&tw.dims));
    r.fact("u_window", json!([w.jmin, w.jmax]), true);
    Ok(())
}

pub(crate) fn spectral(
    r: &mut Report,
    m: &CDGAModel,
    c: &[Rational],
    w: Window,
    pages: usize,
) -> Result<(), CliError> {
    let rep = u_filtration_spectral_sequence(m, c, w, pages)?;
    let e2 = rep
        .e2
        .iter()
        .map(|((p, q), d)| Row {
            index: vec![*p as i64, *q],
            dim: *d,
            certified: true,
        })
        .collect();
    r.table("E2", &["p", "q"], e2);
    let last = rep.ss.last();
    let mut einf: Vec<Row> = last
        .entries
        .iter()
        .map(|((p, n), e)| Row {
            index: vec![-p, *n],
            dim: e.dim,
            certified: rep.certified_degrees.contains(n),
        })
        .collect();
    einf.sort_by(|a, b| a.index.cmp(&b.index));
    r.table("E_infinity", &["p", "n"], einf);
    for (name, ok) in [
        ("e2_matches_cohomology", rep.e2_matches_cohomology),
        ("d3_matches_cup", rep.d3_matches_cup),
        ("even_differentials_vanish", rep.even_differentials_vanish),
        ("e4_is_e_infinity", rep.e4_is_e_infinity),
        ("e_infinity_matches_twisted", rep.e_infinity_matches_twisted),
    ] {
        r.record(name, ok);
    }
    r.fact("stable_from_page", rep.ss.stable_from, true);
    r.fact("certified_degrees", rep.certified_degrees.clone(), true);
    Ok(())
}

/// Closedness tallies over random inputs; each character's coefficient
/// schedule goes into the facts.
pub(crate) fn chern<R: Rng>(
    r: &mut Report,
    ctx: &MatrixContext,
    parity: Parity,
    samples: usize,
    max_degree: usize,
    rng: &mut R,
) -> Result<(), CliError> {
    let tag = if parity == Parity::Even {
        "even"
    } else {
        "odd"
    };
    let mut schedules = Vec::new();
    for _ in 0..samples {
        let ch = match parity {
            Parity::Even => {
                let pair = random_idempotent_pair(rng, ctx)?;
                let ch = chern_even(ctx, &pair, max_degree)?;
                let mut diff = pair.p.clone();
                for (x, q) in diff.iter_mut().zip(&pair.q) {
                    *x -= q;
                }
                let t0 = ctx.trace_tensor(&[diff])?;
                let c0 = ch
                    .chain
                    .components
                    .get(&0)
                    .cloned()
                    .unwrap_or_else(|| TensorChain::zero(0));
                r.record("chern_even_degree0_is_trace", c0 == t0);
                ch
            }
            Parity::Odd => chern_odd(ctx, &random_invertible(rng, ctx)?, max_degree)?,
        };
        r.record(&format!("chern_{tag}_closed"), ch.closed);
        schedules.push(schedule(&ch));
    }
    r.fact(
        &format!("chern_{tag}_schedules"),
        Value::Array(schedules),
        true,
    );
    Ok(())
}

fn schedule(ch: &ChernCharacter) -> Value {
    let s = |v: &[Rational]| v.iter().map(Rational::to_string).collect::<Vec<_>>();
    json!({
        "printed": s(&ch.printed),
        "used": s(&ch.used),
        "printed_closed": ch.printed_closed,
        "substituted": ch.substituted(),
    })
}

fn connection<R: Rng>(
    j: &ConnectionInput,
    rng: &mut R,
) -> Result<(CDGAModel, ConnectionDatum), CliError> {
    let m = load_cdga(&j.cdga)?;
    let phi = parse_element(&m, &j.phi)?;
    let theta = random_connection_form(rng, &m, j.size);
    let datum = ConnectionDatum::new(&m, j.size, theta, phi)?;
    datum
        .check_axioms()
        .map_err(|v| Error::violation(format!("connection datum: {v}")))?;
    Ok((m, datum))
}

pub(crate) fn random_chains<R: Rng>(
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

fn element(m: &CDGAModel, v: &[Rational]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Rational::from_integer(0.into()))
        .map(|(i, c)| format!("{c}*{}", m.labels()[i]))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub(crate) fn three_cocycle(
    g: &ProjectiveCocycle,
    rule: &LiftRule,
) -> Result<CechThreeCocycle, CliError> {
    check_pu_cocycle(g).map_err(|v| Error::violation(v.to_string()))?;
    let eps = epsilon_from_lifts(g, rule)?;
    Ok(dd_cocycle(&g.nerve, &eps)?)
}

pub(crate) fn coordinates(c: &ClassCoordinates) -> Value {
    fn s<T: ToString>(v: &[T]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }
    json!({ "free": s(&c.free), "torsion": s(&c.torsion) })
}

pub(crate) fn cohomology_rows(nv: &Nerve) -> Vec<Row> {
    (0..=nv.dimension())
        .map(|p| Row {
            index: vec![p as i64],
            dim: nv.cohomology(p).rank,
            certified: true,
        })
        .collect()
}

/// Class of the data, `δε = 0` and `δn = 0`, and invariance under random
/// re-lifts and `ε`-coboundaries.
pub(crate) fn dd<R: Rng>(
    r: &mut Report,
    g: &ProjectiveCocycle,
    rule: &LiftRule,
    samples: usize,
    rng: &mut R,
) -> Result<(), CliError> {
    check_pu_cocycle(g).map_err(|v| Error::violation(v.to_string()))?;
    let nv = &g.nerve;
    let eps = epsilon_from_lifts(g, rule)?;
    r.record("delta_epsilon_zero", eps.is_cocycle(nv));
    let n = dd_cocycle(nv, &eps)?;
    let delta_n = nv.coboundary(3, &n.values).iter().all(|&x| x == 0);
    r.record("delta_n_zero", delta_n);
    let h3 = nv.cohomology(3);
    let class = h3.class_of(&n.values)?;
    r.table("H_integral", &["p"], cohomology_rows(nv));
    r.fact("H3", describe_group(&h3), true);
    r.fact("class", coordinates(&class), true);
    r.fact("class_is_zero", class.is_zero(), true);
    r.fact("n", n.values.clone(), true);
    for _ in 0..samples {
        let relift = three_cocycle(g, &LiftRule::random_shift(rng, g))?;
        r.record("relift_invariance", class_compare(nv, &n, &relift)?.equal);
        let eta: Vec<u64> = (0..nv.count(1))
            .map(|_| rng.gen_range(0..g.modulus))
            .collect();
        let shifted = dd_cocycle(nv, &eps.add_coboundary(nv, &eta))?;
        r.record(
            "coboundary_invariance",
            class_compare(nv, &n, &shifted)?.equal,
        );
    }
    Ok(())
}

/// Dimensions of `c`- and `(c + dβ)`-twisted cohomology agree, and
/// `e^{uβ}` is a quasi-isomorphism on the common certified range.
pub(crate) fn gauge_check(
    m: &CDGAModel,
    c: &[Rational],
    beta: &[Rational],
    w: Window,
) -> Result<bool, CliError> {
    let before = twisted_cohomology(m, c, w)?;
    let c2: Vec<Rational> = c.iter().zip(m.d(beta)).map(|(a, b)| a + b).collect();
    let after = twisted_cohomology(m, &c2, w)?;
    let dims_agree = before.certified().eq(after.certified());
    let cone = cone_quasi_iso_test(&gauge_transform(m, c, beta, w)?)?;
    let certified: Vec<i64> = before.certified().map(|(n, _)| n).collect();
    let quasi = certified.iter().all(|n| !cone.failing_degrees.contains(n));
    Ok(dims_agree && quasi)
}
