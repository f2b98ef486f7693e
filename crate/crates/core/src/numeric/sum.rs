//! Deterministic compensated accumulation.

use rug::Float;

use crate::budget::{Context, EvalOutcome};
use crate::error::Result;
use crate::real::Real;

/// Extra bits carried by the running sum.
const ACC_EXTRA_BITS: u32 = 64;
/// Ulps of relative error charged to every accumulated term.
const ULPS_PER_TERM: f64 = 16.0;

/// Ascending-order accumulator with a wide running sum.
///
/// Also tracks the absolute mass `Σ|term|`, from which a rounding allowance
/// for the final error bound is derived.
#[derive(Debug, Clone)]
pub struct Accumulator {
    sum: Float,
    prec: u32,
    mass: f64,
    count: usize,
}

impl Accumulator {
    pub fn new(prec: u32) -> Self {
        Accumulator { sum: Float::new(prec + ACC_EXTRA_BITS), prec, mass: 0.0, count: 0 }
    }

    pub fn add(&mut self, term: &Real) {
        self.sum += term.as_float();
        self.mass += term.to_f64().abs();
        self.count += 1;
    }

    pub fn sub(&mut self, term: &Real) {
        self.sum -= term.as_float();
        self.mass += term.to_f64().abs();
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn value(&self) -> Real {
        Real::from_float(Float::with_val(self.prec, &self.sum))
    }

    /// Rounding allowance `16 · 2^-prec · Σ|term|`.
    pub fn rounding_bound(&self) -> f64 {
        self.mass * ULPS_PER_TERM * (-(self.prec as f64)).exp2()
    }
}

/// Assembles an [`EvalOutcome`], checking finiteness and the convergence
/// criterion `err_bound <= target`.
pub(crate) fn finish(ctx: &Context, what: &str, value: Real, err_bound: Real, terms_used: usize) -> Result<EvalOutcome> {
    let value = value.finite(what)?;
    let err_bound = err_bound.finite(what)?;
    let converged = &err_bound <= ctx.target();
    Ok(EvalOutcome { value, err_bound, terms_used, converged })
}

/// Shorthand for an f64 error contribution lifted to the context precision.
pub(crate) fn bound(ctx: &Context, v: f64) -> Real {
    Real::from_f64(ctx.bits(), v)
}

/// `log10 |v|` without underflow for tiny targets.
pub(crate) fn log10(v: &Real) -> f64 {
    v.abs().ln().to_f64() / std::f64::consts::LN_10
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulates_with_wide_register() {
        let p = 53;
        let mut acc = Accumulator::new(p);
        acc.add(&Real::from_f64(p, 1.0));
        for _ in 0..1000 {
            acc.add(&Real::from_f64(p, 1e-17));
        }
        acc.sub(&Real::from_f64(p, 1.0));
        let v = acc.value().to_f64();
        assert!((v - 1e-14).abs() < 1e-20, "{v}");
        assert_eq!(acc.count(), 1002);
        assert!(acc.rounding_bound() > 0.0);
    }
}
