use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::axpy;
use crate::algebra::FDAlgebra;
use crate::cdga::CDGAModel;
use crate::cyclic::{CyclicOps, TensorBasis, TensorChain};
use crate::linalg::{factorial, frac, rat, solve_linear, Rational, SparseMatrix, Vector};
use crate::{Error, Result};

/// An element of `Ω ⊗ Q[u]` of fixed total degree: components
/// `u^j Ω^{total+2j}`, keyed by `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UFormChain {
    pub total_degree: i64,
    pub components: BTreeMap<i64, Vector>,
}

impl UFormChain {
    pub fn zero(total_degree: i64) -> Self {
        UFormChain {
            total_degree,
            components: BTreeMap::new(),
        }
    }

    fn add_at(&mut self, j: i64, s: &Rational, v: &[Rational]) {
        if s.is_zero() || v.iter().all(Zero::is_zero) {
            return;
        }
        let e = self
            .components
            .entry(j)
            .or_insert_with(|| vec![Rational::zero(); v.len()]);
        axpy(e, s, v);
        if e.iter().all(Zero::is_zero) {
            self.components.remove(&j);
        }
    }

    fn add_chain(&mut self, shift: i64, s: &Rational, other: &UFormChain) {
        for (j, v) in &other.components {
            self.add_at(j + shift, s, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `self − other`.
    pub fn sub(&self, other: &UFormChain) -> UFormChain {
        let mut out = self.clone();
        out.add_chain(0, &-Rational::one(), other);
        out
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> Rational {
        self.components
            .values()
            .flatten()
            .map(|c| c.abs())
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }
}

/// `(ud − u²c) x`.
pub fn twisted_boundary(m: &CDGAModel, c: &[Rational], x: &UFormChain) -> UFormChain {
    let mut out = UFormChain::zero(x.total_degree - 1);
    for (j, w) in &x.components {
        out.add_at(j + 1, &Rational::one(), &m.d(w));
        out.add_at(j + 2, &-Rational::one(), &m.mul(c, w));
    }
    out
}

/// `e^{s·uβ} x` for an even closed-or-not `β ∈ Ω²`.
fn exp_u(m: &CDGAModel, beta: &[Rational], s: &Rational, x: &UFormChain) -> UFormChain {
    let mut out = x.clone();
    let mut term = x.clone();
    let mut k = 1usize;
    loop {
        let mut next = UFormChain::zero(x.total_degree);
        for (j, w) in &term.components {
            next.add_at(j + 1, &(s / rat(k as i64)), &m.mul(beta, w));
        }
        if next.is_zero() {
            return out;
        }
        out.add_chain(0, &Rational::one(), &next);
        term = next;
        k += 1;
    }
}

/// A failed connection axiom, on the first offending basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectionViolation {
    /// `∇²w ≠ [F, w]`.
    Curvature { basis: usize },
    /// `∇(Fw) ≠ F∇w − c·w`.
    Bianchi { basis: usize },
    /// `tr ∇w ≠ d tr w`.
    TraceDerivation { basis: usize },
    /// `tr(vw) ≠ (−1)^{|v||w|} tr(wv)`.
    TraceCyclicity { pair: (usize, usize) },
}

impl fmt::Display for ConnectionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Curvature { basis } => {
                write!(f, "∇² differs from [F, -] on basis element {basis}")
            }
            Self::Bianchi { basis } => {
                write!(f, "∇(Fw) differs from F∇w − cw on basis element {basis}")
            }
            Self::TraceDerivation { basis } => {
                write!(f, "tr ∇w differs from d tr w on basis element {basis}")
            }
            Self::TraceCyclicity { pair } => {
                write!(f, "trace is not graded cyclic on basis pair {pair:?}")
            }
        }
    }
}

/// `∇ = d + [θ, −]` on `M_n(Ω)` with `F = dθ + θ² + φ` and `c = −dφ`.
#[derive(Clone, Debug)]
pub struct ConnectionDatum {
    model: CDGAModel,
    n: usize,
    mat: FDAlgebra,
    mat_degrees: Vec<usize>,
    chain_algebra: FDAlgebra,
    embed: Vec<usize>,
    theta: Vector,
    phi: Vector,
    curvature: Vector,
    twist: Vector,
    f_powers: Vec<Vector>,
}

impl ConnectionDatum {
    /// `theta ∈ M_n(Ω¹)` in the coordinates of `M_n(Ω)` (index
    /// `(r·n + c)·dim Ω + a`), `phi ∈ Ω²`.
    pub fn new(model: &CDGAModel, n: usize, theta: Vector, phi: Vector) -> Result<Self> {
        model
            .validate()
            .map_err(|v| Error::invalid(alloc::format!("model is not a CDGA: {v}")))?;
        Self::build(model, n, theta, phi)
    }

    fn build(model: &CDGAModel, n: usize, theta: Vector, phi: Vector) -> Result<Self> {
        let mat = model.algebra().matrix_algebra(n)?;
        let dm = model.dim();
        let mat_degrees: Vec<usize> = (0..n * n * dm).map(|i| model.degree(i % dm)).collect();
        if theta.len() != mat.dim() || phi.len() != dm {
            return Err(Error::invalid(
                "connection form or scalar has the wrong length",
            ));
        }
        if theta
            .iter()
            .zip(&mat_degrees)
            .any(|(x, p)| !x.is_zero() && *p != 1)
        {
            return Err(Error::invalid("θ must be a matrix of 1-forms"));
        }
        if !model.is_homogeneous(&phi, 2) {
            return Err(Error::invalid("φ must be a 2-form"));
        }
        let (deg0, embed) = model.degree_zero_part()?;
        let chain_algebra = deg0.matrix_algebra(n)?;
        let mut datum = ConnectionDatum {
            model: model.clone(),
            n,
            mat,
            mat_degrees,
            chain_algebra,
            embed,
            theta,
            phi,
            curvature: Vec::new(),
            twist: Vec::new(),
            f_powers: Vec::new(),
        };
        let mut f = datum.d(&datum.theta);
        axpy(
            &mut f,
            &Rational::one(),
            &datum.mat.mul(&datum.theta, &datum.theta),
        );
        axpy(&mut f, &Rational::one(), &datum.scalar(&datum.phi));
        datum.twist = datum.model.d(&datum.phi).into_iter().map(|x| -x).collect();
        let mut powers = vec![datum.identity()];
        loop {
            let next = datum.mat.mul(powers.last().expect("nonempty"), &f);
            if next.iter().all(Zero::is_zero) {
                break;
            }
            powers.push(next);
        }
        datum.curvature = f;
        datum.f_powers = powers;
        Ok(datum)
    }

    pub fn model(&self) -> &CDGAModel {
        &self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `M_n(Ω⁰)`, the algebra the character is defined on.
    pub fn chain_algebra(&self) -> &FDAlgebra {
        &self.chain_algebra
    }

    /// Model indices of the basis of `Ω⁰`.
    pub fn degree_zero_embedding(&self) -> &[usize] {
        &self.embed
    }

    pub fn theta(&self) -> &[Rational] {
        &self.theta
    }

    pub fn phi(&self) -> &[Rational] {
        &self.phi
    }

    pub fn curvature(&self) -> &[Rational] {
        &self.curvature
    }

    /// `c = −dφ`.
    pub fn twist(&self) -> &[Rational] {
        &self.twist
    }

    fn idx(&self, r: usize, c: usize, a: usize) -> usize {
        (r * self.n + c) * self.model.dim() + a
    }

    fn identity(&self) -> Vector {
        self.scalar(&self.model.unit())
    }

    /// `w · 1` for `w ∈ Ω`.
    fn scalar(&self, w: &[Rational]) -> Vector {
        let mut out = vec![Rational::zero(); self.mat.dim()];
        for r in 0..self.n {
            for (a, x) in w.iter().enumerate() {
                out[self.idx(r, r, a)] = x.clone();
            }
        }
        out
    }

    fn trace(&self, x: &[Rational]) -> Vector {
        let mut out = self.model.zero_vector();
        for r in 0..self.n {
            for (a, o) in out.iter_mut().enumerate() {
                *o += &x[self.idx(r, r, a)];
            }
        }
        out
    }

    fn d(&self, x: &[Rational]) -> Vector {
        let dm = self.model.dim();
        let mut out = vec![Rational::zero(); self.mat.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let base = i - i % dm;
            for (k, c) in self.model.d_basis(i % dm) {
                out[base + k] += xi * c;
            }
        }
        out
    }

    fn homogeneous_parts(&self, x: &[Rational]) -> BTreeMap<usize, Vector> {
        let mut parts: BTreeMap<usize, Vector> = BTreeMap::new();
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                parts
                    .entry(self.mat_degrees[i])
                    .or_insert_with(|| vec![Rational::zero(); x.len()])[i] = xi.clone();
            }
        }
        parts
    }

    /// Graded commutator `[x, y] = xy − (−1)^{|x||y|} yx`.
    fn commutator(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = vec![Rational::zero(); self.mat.dim()];
        let yp = self.homogeneous_parts(y);
        for (p, xp) in self.homogeneous_parts(x) {
            for (q, yq) in &yp {
                axpy(&mut out, &Rational::one(), &self.mat.mul(&xp, yq));
                let s = if p * q % 2 == 1 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                axpy(&mut out, &s, &self.mat.mul(yq, &xp));
            }
        }
        out
    }

    fn nabla(&self, x: &[Rational]) -> Vector {
        let mut out = self.d(x);
        axpy(&mut out, &Rational::one(), &self.commutator(&self.theta, x));
        out
    }

    /// Checks `∇² = [F, −]`, `∇(F·) = F∇ − c`, `tr ∘ ∇ = d ∘ tr` on every basis
    /// element and graded cyclicity of the trace on every basis pair.
    pub fn check_axioms(&self) -> core::result::Result<(), ConnectionViolation> {
        let m = self.mat.dim();
        let c1 = self.scalar(&self.twist);
        for b in 0..m {
            let w = self.mat.basis_vector(b);
            let nw = self.nabla(&w);
            if self.nabla(&nw) != self.commutator(&self.curvature, &w) {
                return Err(ConnectionViolation::Curvature { basis: b });
            }
            let mut rhs = self.mat.mul(&self.curvature, &nw);
            axpy(&mut rhs, &-Rational::one(), &self.mat.mul(&c1, &w));
            if self.nabla(&self.mat.mul(&self.curvature, &w)) != rhs {
                return Err(ConnectionViolation::Bianchi { basis: b });
            }
            if self.trace(&nw) != self.model.d(&self.trace(&w)) {
                return Err(ConnectionViolation::TraceDerivation { basis: b });
            }
        }
        for v in 0..m {
            for w in 0..m {
                let vw = self.trace(
                    &self
                        .mat
                        .mul(&self.mat.basis_vector(v), &self.mat.basis_vector(w)),
                );
                let mut wv = self.trace(
                    &self
                        .mat
                        .mul(&self.mat.basis_vector(w), &self.mat.basis_vector(v)),
                );
                if self.mat_degrees[v] * self.mat_degrees[w] % 2 == 1 {
                    wv.iter_mut().for_each(|x| *x = -x.clone());
                }
                if vw != wv {
                    return Err(ConnectionViolation::TraceCyclicity { pair: (v, w) });
                }
            }
        }
        Ok(())
    }

    /// A chain leg (basis of `M_n(Ω⁰)`, or the adjoined unit) in `M_n(Ω)`.
    fn lift(&self, leg: usize) -> Vector {
        let d0 = self.embed.len();
        if leg == self.n * self.n * d0 {
            return self.identity();
        }
        let (rc, a) = (leg / d0, leg % d0);
        let mut out = vec![Rational::zero(); self.mat.dim()];
        out[self.idx(rc / self.n, rc % self.n, self.embed[a])] = Rational::one();
        out
    }

    /// `Σ_μ (−u)^{|μ|} / (r + |μ|)! · tr(Y₀ F^{μ₀} Y₁ F^{μ₁} ⋯ Y_r F^{μ_r})`,
    /// which is the integral of `tr(Y₀ e^{−s₀uF} ⋯ Y_r e^{−s_r uF})` over the
    /// `r`-simplex, as `u`-power → form.
    fn simplex_integral(&self, legs: &[Vector]) -> BTreeMap<i64, Vector> {
        let r = legs.len() - 1;
        let mut acc: BTreeMap<usize, Vector> = BTreeMap::from([(0, legs[0].clone())]);
        for i in 0..=r {
            let mut spread: BTreeMap<usize, Vector> = BTreeMap::new();
            for (s, v) in &acc {
                for (mu, fp) in self.f_powers.iter().enumerate() {
                    let p = if mu == 0 {
                        v.clone()
                    } else {
                        self.mat.mul(v, fp)
                    };
                    if p.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let e = spread
                        .entry(s + mu)
                        .or_insert_with(|| vec![Rational::zero(); p.len()]);
                    axpy(e, &Rational::one(), &p);
                }
            }
            acc = spread;
            if i < r {
                acc = acc
                    .into_iter()
                    .map(|(s, v)| (s, self.mat.mul(&v, &legs[i + 1])))
                    .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
                    .collect();
            }
        }
        acc.into_iter()
            .map(|(s, v)| {
                let sign = if s % 2 == 1 {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                let coef = sign / factorial(r + s);
                let t: Vector = self.trace(&v).into_iter().map(|x| x * &coef).collect();
                (s as i64, t)
            })
            .collect()
    }

    fn legs_of(
        &self,
        idx: usize,
        k: usize,
        basis: &TensorBasis,
        scratch: &mut Vec<usize>,
    ) -> Vec<Vector> {
        basis.decode(idx, k, scratch);
        scratch
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if i == 0 {
                    self.lift(l)
                } else {
                    self.nabla(&self.lift(l))
                }
            })
            .collect()
    }
}

/// The twisted JLO character of a chain over `M_n(Ω⁰)`: a total-degree-`k`
/// element of `(Ω[u], ud − u²c)`.
pub fn jlo_character(datum: &ConnectionDatum, chain: &TensorChain) -> UFormChain {
    let k = chain.degree;
    let basis = TensorBasis::new(datum.chain_algebra.dim());
    let mut out = UFormChain::zero(k as i64);
    let mut scratch = Vec::new();
    for (idx, coef) in &chain.terms {
        let legs = datum.legs_of(*idx, k, &basis, &mut scratch);
        for (j, w) in datum.simplex_integral(&legs) {
            out.add_at(j, coef, &w);
        }
    }
    out
}

/// Outcome of comparing two sides of an identity on a batch of chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JloReport {
    pub chains_checked: usize,
    pub failures: usize,
    /// Largest absolute coordinate of any discrepancy; zero on success.
    pub max_discrepancy: Rational,
}

impl JloReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Records one discrepancy into the running report.
fn tally(report: &mut JloReport, diff: &UFormChain) {
    report.chains_checked += 1;
    if !diff.is_zero() {
        report.failures += 1;
        let m = diff.max_abs();
        if m > report.max_discrepancy {
            report.max_discrepancy = m;
        }
    }
}

fn empty_report() -> JloReport {
    JloReport {
        chains_checked: 0,
        failures: 0,
        max_discrepancy: Rational::zero(),
    }
}

/// Checks `Ch ∘ (b + uB) = (ud − u²c) ∘ Ch` on each chain.
pub fn jlo_chain_map_check(datum: &ConnectionDatum, chains: &[TensorChain]) -> JloReport {
    let ops = CyclicOps::new(&datum.chain_algebra);
    let mut report = empty_report();
    for x in chains {
        let mut lhs = UFormChain::zero(x.degree as i64 - 1);
        if x.degree >= 1 {
            lhs = jlo_character(datum, &ops.apply_b(x));
        }
        lhs.add_chain(1, &Rational::one(), &jlo_character(datum, &ops.apply_B(x)));
        let rhs = twisted_boundary(&datum.model, &datum.twist, &jlo_character(datum, x));
        tally(&mut report, &lhs.sub(&rhs));
    }
    report
}

/// The straight-line family `θ_t = θ + tα`, `φ_t = φ − β_t` with
/// `β_t = Σ_{i≥1} t^i β_i`, so `c_t = c + dβ_t`.
#[derive(Clone, Debug)]
pub struct ConnectionPath {
    pub start: ConnectionDatum,
    pub alpha: Vector,
    /// `β₁, β₂, …`, coefficients of `t, t², …`.
    pub beta: Vec<Vector>,
}

/// Result of [`homotopy_check`].
pub type HomotopyReport = JloReport;

impl ConnectionPath {
    pub fn new(start: ConnectionDatum, alpha: Vector, beta: Vec<Vector>) -> Result<Self> {
        if alpha.len() != start.mat.dim()
            || alpha
                .iter()
                .zip(&start.mat_degrees)
                .any(|(x, p)| !x.is_zero() && *p != 1)
        {
            return Err(Error::invalid("α must be a matrix of 1-forms"));
        }
        if beta
            .iter()
            .any(|b| !start.model.is_homogeneous(b, 2) || b.len() != start.model.dim())
        {
            return Err(Error::invalid("β coefficients must be 2-forms"));
        }
        Ok(ConnectionPath { start, alpha, beta })
    }

    pub fn beta_at(&self, t: &Rational) -> Vector {
        let mut out = self.start.model.zero_vector();
        let mut tp = t.clone();
        for b in &self.beta {
            axpy(&mut out, &tp, b);
            tp *= t;
        }
        out
    }

    pub fn at(&self, t: &Rational) -> Result<ConnectionDatum> {
        let s = &self.start;
        let mut theta = s.theta.clone();
        axpy(&mut theta, t, &self.alpha);
        let mut phi = s.phi.clone();
        axpy(&mut phi, &-Rational::one(), &self.beta_at(t));
        ConnectionDatum::build(&s.model, s.n, theta, phi)
    }

    /// Degree in `t` bounding every integrand.
    fn t_degree(&self) -> usize {
        self.start.model.top_degree().max(1) * self.beta.len().max(1)
    }

    /// `K(x) = −Σ_i (−1)^i ∫₀¹ e^{−uβ_t} ∫_{Δ^{k+1}} tr(… ∇_t a_i e^{−s uF_t} α e^{−s′ uF_t} ∇_t a_{i+1} …) dt`,
    /// with the `t`-integral done by exact interpolatory quadrature.
    pub fn homotopy(&self, chain: &TensorChain) -> Result<UFormChain> {
        let deg = self.t_degree();
        let nodes: Vec<Rational> = (0..=deg).map(|i| frac(i as i64, deg as i64)).collect();
        let weights = quadrature_weights(&nodes)?;
        let k = chain.degree;
        let basis = TensorBasis::new(self.start.chain_algebra.dim());
        let mut out = UFormChain::zero(k as i64 + 1);
        let mut scratch = Vec::new();
        for (t, w) in nodes.iter().zip(&weights) {
            let datum = self.at(t)?;
            let mut at_t = UFormChain::zero(k as i64 + 1);
            for (idx, coef) in &chain.terms {
                let legs = datum.legs_of(*idx, k, &basis, &mut scratch);
                for i in 0..=k {
                    let mut ext = legs[..=i].to_vec();
                    ext.push(self.alpha.clone());
                    ext.extend_from_slice(&legs[i + 1..]);
                    let s = if i % 2 == 0 {
                        -coef.clone()
                    } else {
                        coef.clone()
                    };
                    for (j, v) in datum.simplex_integral(&ext) {
                        at_t.add_at(j, &s, &v);
                    }
                }
            }
            let gauged = exp_u(
                &self.start.model,
                &self.beta_at(t),
                &-Rational::one(),
                &at_t,
            );
            out.add_chain(0, w, &gauged);
        }
        Ok(out)
    }
}

/// Weights `w_i` with `Σ w_i p(t_i) = ∫₀¹ p` for all polynomials of degree
/// below the number of nodes.
/// A random `n × n` matrix of degree-one forms with entries in `[−2, 2]`.
pub fn random_connection_form<R: Rng + ?Sized>(rng: &mut R, m: &CDGAModel, n: usize) -> Vector {
    let ones = m.basis_of_degree(1);
    let mut th = vec![Rational::zero(); n * n * m.dim()];
    for rc in 0..n * n {
        for &a in &ones {
            th[rc * m.dim() + a] = rat(rng.gen_range(-2..=2));
        }
    }
    th
}

fn quadrature_weights(nodes: &[Rational]) -> Result<Vec<Rational>> {
    let n = nodes.len();
    let mut trip = Vec::new();
    for (i, t) in nodes.iter().enumerate() {
        let mut p = Rational::one();
        for m in 0..n {
            trip.push((m, i, p.clone()));
            p *= t;
        }
    }
    let rhs: Vec<Rational> = (0..n).map(|m| frac(1, m as i64 + 1)).collect();
    solve_linear(&SparseMatrix::from_triplets(n, n, trip), &rhs)?
        .ok_or_else(|| Error::invalid("quadrature nodes must be distinct"))
}

/// Checks `e^{−uβ₁} Ch(∇₁) − Ch(∇₀) = K(b + uB) + (ud − u²c₀)K` on each chain.
pub fn homotopy_check(path: &ConnectionPath, chains: &[TensorChain]) -> Result<HomotopyReport> {
    let end = path.at(&Rational::one())?;
    let start = &path.start;
    let beta1 = path.beta_at(&Rational::one());
    let ops = CyclicOps::new(&start.chain_algebra);
    let mut report = empty_report();
    for x in chains {
        let lhs = exp_u(
            &start.model,
            &beta1,
            &-Rational::one(),
            &jlo_character(&end, x),
        )
        .sub(&jlo_character(start, x));
        let mut rhs = twisted_boundary(&start.model, &start.twist, &path.homotopy(x)?);
        if x.degree >= 1 {
            rhs.add_chain(0, &Rational::one(), &path.homotopy(&ops.apply_b(x))?);
        }
        rhs.add_chain(1, &Rational::one(), &path.homotopy(&ops.apply_B(x))?);
        tally(&mut report, &lhs.sub(&rhs));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::fixtures::*;
    use crate::chern::hkr_into_model;
    use crate::cyclic::generalized_trace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn transgression_datum(seed: u64) -> ConnectionDatum {
        let m = torus3_transgression();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = random_connection_form(&mut rng, &m, 2);
        let phi: Vector = m
            .element_by_label("f")
            .unwrap()
            .into_iter()
            .map(|x| -x)
            .collect();
        ConnectionDatum::new(&m, 2, theta, phi).unwrap()
    }

    #[test]
    fn quadrature_is_exact() {
        let nodes: Vec<Rational> = (0..=4).map(|i| frac(i, 4)).collect();
        let w = quadrature_weights(&nodes).unwrap();
        let integral: Rational = nodes.iter().zip(&w).map(|(t, w)| w * t * t * t * t).sum();
        assert_eq!(integral, frac(1, 5));
    }

    #[test]
    fn axioms_hold_and_twist_is_nonzero() {
        let d = transgression_datum(1);
        assert_eq!(d.check_axioms(), Ok(()));
        assert_eq!(
            d.twist(),
            d.model().element_by_label("e1e2e3").unwrap().as_slice()
        );
    }

    #[test]
    fn chain_map_identity() {
        let d = transgression_datum(3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let chains: Vec<TensorChain> = (0..8)
            .map(|i| TensorChain::random(&mut rng, d.chain_algebra().dim(), 1 + i % 3, 3))
            .collect();
        let r = jlo_chain_map_check(&d, &chains);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn trivial_datum_is_trace_then_hkr() {
        let m = truncated_de_rham(2, 3);
        let zero_theta = vec![Rational::zero(); 4 * m.dim()];
        let d = ConnectionDatum::new(&m, 2, zero_theta, m.zero_vector()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 0..=2 {
            let x = TensorChain::random(&mut rng, d.chain_algebra().dim(), k, 4);
            let ch = jlo_character(&d, &x);
            assert!(ch.components.keys().all(|j| *j == 0));
            let got = ch
                .components
                .get(&0)
                .cloned()
                .unwrap_or_else(|| m.zero_vector());
            let tr = generalized_trace(d.chain_algebra(), &x).unwrap();
            let expect = hkr_into_model(&m, d.degree_zero_embedding(), &tr).unwrap();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn homotopy_identity() {
        let d = transgression_datum(5);
        let m = d.model().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let alpha = random_connection_form(&mut rng, &m, 2);
        let beta = vec![
            m.element_by_label("f").unwrap(),
            m.element_by_label("e2e3").unwrap(),
        ];
        let path = ConnectionPath::new(d, alpha, beta).unwrap();
        let chains: Vec<TensorChain> = (0..3)
            .map(|i| TensorChain::random(&mut rng, path.start.chain_algebra().dim(), i, 2))
            .collect();
        let r = homotopy_check(&path, &chains).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn central_shift_is_absorbed_by_the_gauge() {
        let d = transgression_datum(7);
        let m = d.model().clone();
        let alpha = vec![Rational::zero(); 4 * m.dim()];
        let path =
            ConnectionPath::new(d, alpha, vec![m.element_by_label("e1e3").unwrap()]).unwrap();
        let x = TensorChain::random(
            &mut ChaCha8Rng::seed_from_u64(8),
            path.start.chain_algebra().dim(),
            2,
            3,
        );
        assert!(path.homotopy(&x).unwrap().is_zero());
        assert!(homotopy_check(&path, &[x]).unwrap().passed());
    }
}
