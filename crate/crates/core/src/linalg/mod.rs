//! Exact rational and integral linear algebra.
//!
//! Ranks of large sparse integer-like matrices go through a fraction-free
//! integer elimination ([`rank`]); kernels, solves and subspace bookkeeping
//! go through an exact rational echelon basis ([`Echelon`]). Integer Smith
//! normal form lives in [`integer`].

pub mod echelon;
mod elim;
pub mod integer;
mod sparse;

pub use echelon::{rank_and_kernel, solve_linear, Echelon, SparseVec};
pub use elim::{rank, rank_of_columns, IntColumns};
pub use integer::{hermite_rows, smith_normal_form, IntegerMatrix, SmithForm};
pub use sparse::SparseMatrix;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact rational scalar: arbitrary precision, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Dense rational vector.
pub type Vector = alloc::vec::Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// Converts a rational to `i64` when it is an integer that fits.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    i64::try_from(q.numer()).ok()
}

/// `M·v` for a dense vector.
pub fn mat_vec(m: &SparseMatrix, v: &[Rational]) -> Vector {
    m.mul_vec(v)
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}
