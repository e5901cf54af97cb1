//! Chern characters of idempotents and invertibles in `(CC, b + uB)`, the
//! Hochschild–Kostant–Rosenberg map, and the twisted JLO character.

mod hkr;
mod jlo;

pub use hkr::{hkr_into_model, hkr_map, Hkr};
pub use jlo::{
    homotopy_check, jlo_chain_map_check, jlo_character, random_connection_form, twisted_boundary,
    ConnectionDatum, ConnectionPath, ConnectionViolation, HomotopyReport, JloReport, UFormChain,
};

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::FDAlgebra;
use crate::cyclic::{is_bu_boundary, CyclicOps, TensorBasis, TensorChain};
use crate::linalg::{factorial, frac, rat, solve_linear, Rational, SparseMatrix, Vector};
use crate::{Error, Result};

pub(crate) fn axpy(out: &mut [Rational], s: &Rational, x: &[Rational]) {
    if s.is_zero() {
        return;
    }
    for (o, v) in out.iter_mut().zip(x) {
        if !v.is_zero() {
            *o += s * v;
        }
    }
}

pub(crate) fn sub(x: &[Rational], y: &[Rational]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// `M_n(Ã)` for a finite-dimensional algebra `A`, with helpers for the
/// generalized trace into the reduced complex of `A`.
#[derive(Clone, Debug)]
pub struct MatrixContext {
    base: FDAlgebra,
    n: usize,
    alg: FDAlgebra,
}

impl MatrixContext {
    pub fn new(base: &FDAlgebra, n: usize) -> Result<Self> {
        let alg = base.unitization().matrix_algebra(n)?;
        Ok(MatrixContext {
            base: base.clone(),
            n,
            alg,
        })
    }

    pub fn base(&self) -> &FDAlgebra {
        &self.base
    }

    pub fn algebra(&self) -> &FDAlgebra {
        &self.alg
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Coordinate of `E_{rc} ⊗ e_a`; `a = dim A` is the adjoined unit.
    pub fn index(&self, r: usize, c: usize, a: usize) -> usize {
        (r * self.n + c) * (self.base.dim() + 1) + a
    }

    pub fn zero(&self) -> Vector {
        vec![Rational::zero(); self.dim()]
    }

    pub fn identity(&self) -> Vector {
        self.alg.unit().cloned().unwrap_or_default()
    }

    /// `E_{rc} ⊗ 1̃`.
    pub fn unit_entry(&self, r: usize, c: usize) -> Vector {
        let mut v = self.zero();
        v[self.index(r, c, self.base.dim())] = Rational::one();
        v
    }

    /// `E_{rc} ⊗ x` for `x ∈ A`.
    pub fn entry(&self, r: usize, c: usize, x: &[Rational]) -> Vector {
        let mut v = self.zero();
        for (a, xa) in x.iter().enumerate() {
            v[self.index(r, c, a)] = xa.clone();
        }
        v
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vector {
        self.alg.mul(x, y)
    }

    /// Whether every adjoined-unit coordinate vanishes, i.e. `x ∈ M_n(A)`.
    pub fn lies_in_base(&self, x: &[Rational]) -> bool {
        let d = self.base.dim();
        (0..self.n * self.n).all(|rc| x[rc * (d + 1) + d].is_zero())
    }

    /// Two-sided inverse, if it exists.
    pub fn invert(&self, x: &[Rational]) -> Result<Option<Vector>> {
        let m = self.dim();
        let cols: Vec<Vec<(usize, Rational)>> = (0..m)
            .map(|j| {
                self.mul(x, &self.alg.basis_vector(j))
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            })
            .collect();
        let lmul = SparseMatrix::from_columns(m, cols);
        let Some(y) = solve_linear(&lmul, &self.identity())? else {
            return Ok(None);
        };
        Ok((self.mul(&y, x) == self.identity()).then_some(y))
    }

    /// `tr(X₀ ⊗ X₁ ⊗ … ⊗ X_k) ∈ CC_k(A)`. The first leg keeps its
    /// adjoined-unit part (as `1̃`); later legs are projected to `M_n(A)`,
    /// as in the normalized complex. In degree 0 the leg must lie in
    /// `M_n(A)`.
    pub fn trace_tensor(&self, legs: &[Vector]) -> Result<TensorChain> {
        let k = legs
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::invalid("empty tensor"))?;
        let d = self.base.dim();
        let n = self.n;
        if k == 0 && !self.lies_in_base(&legs[0]) {
            return Err(Error::invalid("degree-0 trace needs an element of M_n(A)"));
        }
        let basis = TensorBasis::new(d);
        // state: (first row, current column) → partial tensor index → coefficient
        let mut states: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
        for r in 0..n {
            for c in 0..n {
                for a in 0..=d {
                    let x = &legs[0][self.index(r, c, a)];
                    if !x.is_zero() {
                        *states
                            .entry((r, c))
                            .or_default()
                            .entry(a)
                            .or_insert_with(Rational::zero) += x;
                    }
                }
            }
        }
        for leg in &legs[1..] {
            let mut next: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
            for ((r0, c), partial) in &states {
                for c2 in 0..n {
                    for a in 0..d {
                        let x = &leg[self.index(*c, c2, a)];
                        if x.is_zero() {
                            continue;
                        }
                        let slot = next.entry((*r0, c2)).or_default();
                        for (idx, v) in partial {
                            *slot.entry(idx * d + a).or_insert_with(Rational::zero) += v * x;
                        }
                    }
                }
            }
            states = next;
        }
        let mut out = TensorChain::zero(k);
        for ((r0, c), partial) in states {
            if r0 != c {
                continue;
            }
            for (idx, v) in partial {
                out.add_term(idx, v);
            }
        }
        debug_assert!(out.terms.keys().all(|i| Some(*i) < basis.len(k)));
        Ok(out)
    }
}

/// A pair of idempotents `P, Q ∈ M_n(Ã)` with `P − Q ∈ M_n(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentPair {
    pub p: Vector,
    pub q: Vector,
}

impl IdempotentPair {
    pub fn new(ctx: &MatrixContext, p: Vector, q: Vector) -> Result<Self> {
        for (name, e) in [("P", &p), ("Q", &q)] {
            if e.len() != ctx.dim() {
                return Err(Error::DimensionMismatch {
                    expected: ctx.dim(),
                    found: e.len(),
                });
            }
            if ctx.mul(e, e) != *e {
                return Err(Error::invalid(alloc::format!("{name} is not idempotent")));
            }
        }
        if !ctx.lies_in_base(&sub(&p, &q)) {
            return Err(Error::invalid("P − Q does not lie in M_n(A)"));
        }
        Ok(IdempotentPair { p, q })
    }
}

/// An invertible `U ∈ M_n(Ã)` with `U − 1 ∈ M_n(A)`, together with its
/// inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvertibleElement {
    pub u: Vector,
    pub u_inv: Vector,
}

impl InvertibleElement {
    pub fn new(ctx: &MatrixContext, u: Vector) -> Result<Self> {
        if u.len() != ctx.dim() {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim(),
                found: u.len(),
            });
        }
        if !ctx.lies_in_base(&sub(&u, &ctx.identity())) {
            return Err(Error::invalid("U − 1 does not lie in M_n(A)"));
        }
        let u_inv = ctx
            .invert(&u)?
            .ok_or_else(|| Error::invalid("U is not invertible"))?;
        Ok(InvertibleElement { u, u_inv })
    }
}

/// An element of `CC ⊗ Q[u]` of fixed total degree: components
/// `u^j CC_{total+2j}`, keyed by tensor degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ULaurentChain {
    pub total_degree: i64,
    pub components: BTreeMap<usize, TensorChain>,
}

impl ULaurentChain {
    pub fn zero(total_degree: i64) -> Self {
        ULaurentChain {
            total_degree,
            components: BTreeMap::new(),
        }
    }

    pub fn u_power(&self, tensor_degree: usize) -> i64 {
        (tensor_degree as i64 - self.total_degree) / 2
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(TensorChain::is_zero)
    }

    /// Components keyed by `u`-power, as consumed by [`is_bu_boundary`].
    pub fn by_u_power(&self) -> BTreeMap<i64, TensorChain> {
        self.components
            .iter()
            .map(|(k, c)| (self.u_power(*k), c.clone()))
            .collect()
    }

    pub fn sub(&self, other: &ULaurentChain) -> Result<ULaurentChain> {
        if self.total_degree != other.total_degree {
            return Err(Error::invalid(
                "subtracting chains of different total degree",
            ));
        }
        let mut out = self.clone();
        for (k, c) in &other.components {
            let e = out
                .components
                .entry(*k)
                .or_insert_with(|| TensorChain::zero(*k));
            *e = e.add(&c.scale(&-Rational::one()))?;
        }
        out.components.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// `(b + uB)` applied componentwise, without truncation.
    pub fn boundary(&self, ops: &CyclicOps) -> ULaurentChain {
        let mut out = ULaurentChain::zero(self.total_degree - 1);
        let mut put = |c: TensorChain| {
            let k = c.degree;
            let e = out
                .components
                .entry(k)
                .or_insert_with(|| TensorChain::zero(k));
            for (i, v) in c.terms {
                e.add_term(i, v);
            }
        };
        for c in self.components.values() {
            if c.degree >= 1 {
                put(ops.apply_b(c));
            }
            put(ops.apply_B(c));
        }
        out.components.retain(|_, c| !c.is_zero());
        out
    }
}

/// A Chern character together with the coefficient schedule that made it
/// closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernCharacter {
    pub chain: ULaurentChain,
    /// The unnormalized traces `T_m`, one per `u`-power.
    pub traces: Vec<TensorChain>,
    /// Coefficients `c_m` of the printed normalization.
    pub printed: Vec<Rational>,
    /// Coefficients actually used: `chain = Σ c_m u^m T_m`.
    pub used: Vec<Rational>,
    /// Whether `printed` already gave a cycle.
    pub printed_closed: bool,
    /// Whether `(b + uB) chain` vanishes in every tensor degree below the
    /// top computed one.
    pub closed: bool,
}

impl ChernCharacter {
    pub fn substituted(&self) -> bool {
        self.printed != self.used
    }
}

fn defect(
    ops: &CyclicOps,
    traces: &[TensorChain],
    coefs: &[Rational],
    m: usize,
) -> Result<TensorChain> {
    let mut out = if m == 0 {
        TensorChain::zero(traces[0].degree.saturating_sub(1))
    } else {
        ops.apply_B(&traces[m - 1]).scale(&coefs[m - 1])
    };
    if traces[m].degree >= 1 {
        out = out.add(&ops.apply_b(&traces[m]).scale(&coefs[m]))?;
    }
    Ok(out)
}

/// Fixes each coefficient in turn from the previous one, keeping the
/// printed value whenever it already closes the chain.
fn schedule(
    ops: &CyclicOps,
    traces: Vec<TensorChain>,
    printed: Vec<Rational>,
    total: i64,
) -> Result<ChernCharacter> {
    let all_closed = |coefs: &[Rational]| -> Result<bool> {
        for m in 0..traces.len() {
            if !defect(ops, &traces, coefs, m)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let printed_closed = all_closed(&printed)?;
    let mut used = printed.clone();
    for m in 1..traces.len() {
        if defect(ops, &traces, &used, m)?.is_zero() {
            continue;
        }
        let bt = if traces[m].degree >= 1 {
            ops.apply_b(&traces[m])
        } else {
            TensorChain::zero(0)
        };
        let bp = ops.apply_B(&traces[m - 1]).scale(&used[m - 1]);
        let fixed = bt.terms.iter().next().and_then(|(i, v)| {
            let lambda = -bp.terms.get(i).cloned().unwrap_or_else(Rational::zero) / v;
            bt.scale(&lambda).add(&bp).ok()?.is_zero().then_some(lambda)
        });
        if let Some(lambda) = fixed {
            used[m] = lambda;
        }
    }
    let closed = all_closed(&used)?;
    let mut chain = ULaurentChain::zero(total);
    for (t, c) in traces.iter().zip(&used) {
        let s = t.scale(c);
        if !s.is_zero() {
            chain.components.insert(t.degree, s);
        }
    }
    Ok(ChernCharacter {
        chain,
        traces,
        printed,
        used,
        printed_closed,
        closed,
    })
}

/// `ch(P) − ch(Q) = tr(P − Q) + Σ_{m≥1} c_m u^m [tr((P − ½) ⊗ P^{⊗2m}) − (same for Q)]`
/// with printed `c_m = (−1)^m (2m)!/m!`, on tensor degrees `≤ max_deg`.
pub fn chern_even(
    ctx: &MatrixContext,
    pair: &IdempotentPair,
    max_deg: usize,
) -> Result<ChernCharacter> {
    let half = frac(1, 2);
    let shifted = |e: &Vector| -> Vector {
        let mut s = e.clone();
        axpy(&mut s, &-half.clone(), &ctx.identity());
        s
    };
    let mut traces = vec![ctx.trace_tensor(&[sub(&pair.p, &pair.q)])?];
    let mut printed = vec![Rational::one()];
    for m in 1..=max_deg / 2 {
        let legs = |e: &Vector| -> Vec<Vector> {
            let mut l = vec![shifted(e)];
            l.extend(core::iter::repeat_n(e.clone(), 2 * m));
            l
        };
        let t = ctx
            .trace_tensor(&legs(&pair.p))?
            .add(&ctx.trace_tensor(&legs(&pair.q))?.scale(&-Rational::one()))?;
        traces.push(t);
        let sign = if m % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        };
        printed.push(sign * factorial(2 * m) / factorial(m));
    }
    let ops = CyclicOps::new(ctx.base());
    schedule(&ops, traces, printed, 0)
}

/// `ch(U) = Σ_{m≥0} c_m u^m tr(U⁻¹ ⊗ U ⊗ U⁻¹ ⊗ … ⊗ U)` with `2m + 2` legs and
/// printed `c_m = m!`, on tensor degrees `≤ max_deg`. The first leg is
/// `U⁻¹ − 1` in degree 1 and `U⁻¹` above it; later legs enter through
/// their `M_n(A)` parts. Here `b(T_m) = B(T_{m−1})/m`, so a general `U`
/// closes only under `(−1)^m m!`, which the schedule substitutes.
pub fn chern_odd(
    ctx: &MatrixContext,
    u: &InvertibleElement,
    max_deg: usize,
) -> Result<ChernCharacter> {
    let one = ctx.identity();
    let (x, y) = (sub(&u.u_inv, &one), sub(&u.u, &one));
    let mut traces = Vec::new();
    let mut printed = Vec::new();
    for m in 0..max_deg.div_ceil(2) {
        let mut legs = vec![if m == 0 { x.clone() } else { u.u_inv.clone() }];
        for i in 1..2 * m + 2 {
            legs.push(if i % 2 == 1 { y.clone() } else { x.clone() });
        }
        traces.push(ctx.trace_tensor(&legs)?);
        printed.push(factorial(m));
    }
    let ops = CyclicOps::new(ctx.base());
    schedule(&ops, traces, printed, 1)
}

/// Whether `x − y` is a `(b + uB)`-boundary in `CC ⊗ Q[u] / u^{jmax+1}`.
pub fn is_homologous(
    ops: &CyclicOps,
    x: &ULaurentChain,
    y: &ULaurentChain,
    jmax: i64,
) -> Result<bool> {
    let diff = x.sub(y)?;
    is_bu_boundary(ops, diff.total_degree, jmax, &diff.by_u_power())
}

fn random_base_matrix<R: Rng + ?Sized>(rng: &mut R, ctx: &MatrixContext, density: f64) -> Vector {
    let d = ctx.base().dim();
    let mut v = ctx.zero();
    for r in 0..ctx.n() {
        for c in 0..ctx.n() {
            for a in 0..d {
                if rng.gen_bool(density) {
                    v[ctx.index(r, c, a)] = rat(rng.gen_range(-2..=2));
                }
            }
        }
    }
    v
}

/// A random invertible `V = 1 + N` with `N ∈ M_n(A)` small-integer valued.
pub fn random_invertible<R: Rng + ?Sized>(
    rng: &mut R,
    ctx: &MatrixContext,
) -> Result<InvertibleElement> {
    for _ in 0..64 {
        let mut v = random_base_matrix(rng, ctx, 0.9);
        axpy(&mut v, &Rational::one(), &ctx.identity());
        if let Ok(inv) = InvertibleElement::new(ctx, v) {
            return Ok(inv);
        }
    }
    Err(Error::invalid("no invertible element found in 64 draws"))
}

/// `P = V (E₁₁ ⊗ 1̃) V⁻¹` and `Q = E₁₁ ⊗ 1̃` for a random invertible `V`.
pub fn random_idempotent_pair<R: Rng + ?Sized>(
    rng: &mut R,
    ctx: &MatrixContext,
) -> Result<IdempotentPair> {
    let v = random_invertible(rng, ctx)?;
    let q = ctx.unit_entry(0, 0);
    let p = ctx.mul(&ctx.mul(&v.u, &q), &v.u_inv);
    IdempotentPair::new(ctx, p, q)
}

/// `U = 1 + N` with `N` a random combination of the given elements of
/// `M_n(A)`; when they span a nilpotent subalgebra `U` is unipotent.
pub fn random_unipotent<R: Rng + ?Sized>(
    rng: &mut R,
    ctx: &MatrixContext,
    nilpotent: &[Vector],
) -> Result<InvertibleElement> {
    let mut u = ctx.identity();
    for e in nilpotent {
        axpy(&mut u, &rat(rng.gen_range(-2..=2)), e);
    }
    InvertibleElement::new(ctx, u)
}
