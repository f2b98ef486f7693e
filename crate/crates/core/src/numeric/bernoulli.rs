//! Bernoulli numbers and harmonic numbers.

use std::sync::OnceLock;

use rug::{Integer, Rational};

use crate::budget::Context;
use crate::error::{Error, Result};
use crate::real::Real;

use super::sum::Accumulator;

/// Largest tabulated index.
pub const MAX_BERNOULLI_INDEX: usize = 64;

fn table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut b: Vec<Rational> = Vec::with_capacity(MAX_BERNOULLI_INDEX + 1);
        b.push(Rational::from(1));
        for m in 1..=MAX_BERNOULLI_INDEX {
            let mut acc = Rational::new();
            for (j, bj) in b.iter().enumerate() {
                let c = Integer::from(Integer::binomial_u(m as u32 + 1, j as u32));
                acc += Rational::from(c) * bj;
            }
            acc /= -(Rational::from(m as u32 + 1));
            b.push(acc);
        }
        b
    })
}

/// Exact `B_k` (with `B_1 = -1/2`) for `k <= 64`.
pub(crate) fn bernoulli_rational(k: usize) -> &'static Rational {
    &table()[k]
}

/// `B_k` for even `2 <= k <= 64`, exact rational rounded to the working precision.
pub fn bernoulli(ctx: &Context, k: usize) -> Result<Real> {
    if k % 2 != 0 || !(2..=MAX_BERNOULLI_INDEX).contains(&k) {
        return Err(Error::domain(
            "bernoulli",
            format!("index must be even and in [2, {MAX_BERNOULLI_INDEX}], got {k}"),
        ));
    }
    Ok(Real::from_rational(ctx.bits(), bernoulli_rational(k)))
}

/// `B_{2k} / (2k)!` at `prec` bits.
pub(crate) fn bernoulli_over_factorial(prec: u32, two_k: usize) -> Real {
    let fact = Integer::from(Integer::factorial(two_k as u32));
    let q = Rational::from(bernoulli_rational(two_k) / Rational::from(fact));
    Real::from_rational(prec, &q)
}

/// `B_{2k} / (2k)` at `prec` bits: the digamma asymptotic coefficients.
pub(crate) fn bernoulli_over_index(prec: u32, two_k: usize) -> Real {
    let q = Rational::from(bernoulli_rational(two_k) / Rational::from(two_k as u32));
    Real::from_rational(prec, &q)
}

/// `ζ(-m) = -B_{m+1}/(m+1)` for `m >= 1`, `ζ(0) = -1/2`.
pub(crate) fn zeta_nonpositive_integer(prec: u32, m: usize) -> Result<Real> {
    if m == 0 {
        return Ok(Real::from_f64(prec, -0.5));
    }
    if m + 1 > MAX_BERNOULLI_INDEX {
        return Err(Error::domain("riemann_zeta", format!("ζ(-{m}) exceeds the Bernoulli table")));
    }
    let q = -Rational::from(bernoulli_rational(m + 1) / Rational::from(m as u32 + 1));
    Ok(Real::from_rational(prec, &q))
}

/// `H_n = 1 + 1/2 + ... + 1/n`, `H_0 = 0`.
pub fn harmonic(ctx: &Context, n: u64) -> Real {
    if n <= 256 {
        let mut h = Rational::new();
        for k in 1..=n {
            h += Rational::from((1, k));
        }
        return Real::from_rational(ctx.bits(), &h);
    }
    let mut acc = Accumulator::new(ctx.bits());
    for k in 1..=n {
        acc.add(&(1 / ctx.int(k as i64)));
    }
    acc.value()
}
