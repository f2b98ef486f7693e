//! Accuracy budgets, evaluation outcomes and the evaluation context.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{Precision, Real};

/// Per-evaluation error contract.
#[derive(Debug, Clone)]
pub struct AccuracyBudget {
    target_abs_err: Real,
    max_terms: usize,
    em_order: usize,
}

impl AccuracyBudget {
    /// Upper limit on `em_order`; Bernoulli numbers are tabulated to B_64.
    pub const MAX_EM_ORDER: usize = 31;

    pub fn new(target_abs_err: Real, max_terms: usize, em_order: usize) -> Result<Self> {
        if !(target_abs_err > 0.0) || !target_abs_err.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "target_abs_err must be positive, got {target_abs_err}"
            )));
        }
        if max_terms == 0 {
            return Err(Error::InvalidArgument("max_terms must be at least 1".into()));
        }
        if em_order == 0 || em_order % 2 != 0 || em_order > Self::MAX_EM_ORDER {
            return Err(Error::InvalidArgument(format!(
                "em_order must be a positive even integer <= {}, got {em_order}",
                Self::MAX_EM_ORDER
            )));
        }
        Ok(Self { target_abs_err, max_terms, em_order })
    }

    pub fn target_abs_err(&self) -> &Real {
        &self.target_abs_err
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Number K of Bernoulli correction pairs used in Euler–Maclaurin tails
    /// and in the digamma asymptotic series.
    pub fn em_order(&self) -> usize {
        self.em_order
    }
}

/// Result of a budgeted evaluation.
#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub value: Real,
    pub err_bound: Real,
    pub terms_used: usize,
    pub converged: bool,
}

impl EvalOutcome {
    pub fn exact(value: Real) -> Self {
        let prec = value.prec();
        EvalOutcome { value, err_bound: Real::zero(prec), terms_used: 0, converged: true }
    }

    /// Rendering with every number as a decimal string.
    pub fn render(&self, digits: u32) -> RenderedOutcome {
        RenderedOutcome {
            value: self.value.to_decimal_string(digits),
            err_bound: self.err_bound.to_decimal_string(6),
            terms_used: self.terms_used,
            converged: self.converged,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RenderedOutcome {
    pub value: String,
    pub err_bound: String,
    pub terms_used: usize,
    pub converged: bool,
}

/// Precision plus budget: everything an evaluation depends on besides its
/// arguments. Immutable and cheap to clone.
#[derive(Debug, Clone)]
pub struct Context {
    precision: Precision,
    budget: AccuracyBudget,
}

impl Context {
    pub const DEFAULT_MAX_TERMS: usize = 200_000;
    pub const DEFAULT_EM_ORDER: usize = 8;

    pub fn new(precision: Precision, budget: AccuracyBudget) -> Self {
        Context { precision, budget }
    }

    /// Default budget for `digits` of precision: target 10^-digits.
    pub fn with_digits(digits: u32) -> Result<Self> {
        let precision = Precision::new(digits)?;
        let target = Real::from_i64(precision.bits(), 10).powi(-(digits as i32));
        let budget = AccuracyBudget::new(target, Self::DEFAULT_MAX_TERMS, Self::DEFAULT_EM_ORDER)?;
        Ok(Context { precision, budget })
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn bits(&self) -> u32 {
        self.precision.bits()
    }

    pub fn budget(&self) -> &AccuracyBudget {
        &self.budget
    }

    pub fn target(&self) -> &Real {
        &self.budget.target_abs_err
    }

    pub fn em_order(&self) -> usize {
        self.budget.em_order
    }

    pub fn max_terms(&self) -> usize {
        self.budget.max_terms
    }

    pub fn real(&self, v: f64) -> Real {
        Real::from_f64(self.bits(), v)
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_i64(self.bits(), v)
    }

    pub fn zero(&self) -> Real {
        Real::zero(self.bits())
    }

    pub fn one(&self) -> Real {
        Real::one(self.bits())
    }

    pub fn pi(&self) -> Real {
        Real::pi(self.bits())
    }

    pub fn euler_gamma(&self) -> Real {
        Real::euler_gamma(self.bits())
    }

    pub fn parse(&self, s: &str) -> Result<Real> {
        Real::parse(self.bits(), s)
    }

    /// Same precision, target scaled by `factor` (a sub-evaluation's share of
    /// the error budget).
    pub fn scaled(&self, factor: f64) -> Context {
        let mut budget = self.budget.clone();
        budget.target_abs_err = &budget.target_abs_err * factor;
        Context { precision: self.precision, budget }
    }

    /// Same precision, explicit absolute target.
    pub fn with_target(&self, target: Real) -> Context {
        let mut budget = self.budget.clone();
        budget.target_abs_err = target;
        Context { precision: self.precision, budget }
    }

    pub fn with_em_order(&self, em_order: usize) -> Result<Context> {
        let budget = AccuracyBudget::new(self.budget.target_abs_err.clone(), self.budget.max_terms, em_order)?;
        Ok(Context { precision: self.precision, budget })
    }

    /// Same budget at `extra` more decimal digits of working precision.
    pub fn with_extra_digits(&self, extra: u32) -> Result<Context> {
        let precision = Precision::new(self.precision.digits() + extra)?;
        let budget = AccuracyBudget { target_abs_err: self.budget.target_abs_err.with_prec(precision.bits()), ..self.budget.clone() };
        Ok(Context { precision, budget })
    }

    /// Context whose binary precision is raised by `extra_bits`, target unchanged.
    /// Used where an intermediate suffers known cancellation.
    pub fn elevated(&self, extra_bits: u32) -> ElevatedContext<'_> {
        ElevatedContext { base: self, bits: self.bits() + extra_bits }
    }
}

impl Default for Context {
    fn default() -> Self {
        Context::with_digits(Precision::DEFAULT_DIGITS).expect("default precision is valid")
    }
}

/// A context view at raised binary precision.
#[derive(Debug, Clone, Copy)]
pub struct ElevatedContext<'a> {
    base: &'a Context,
    bits: u32,
}

impl ElevatedContext<'_> {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn base(&self) -> &Context {
        self.base
    }

    pub fn lift(&self, v: &Real) -> Real {
        v.with_prec(self.bits)
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_i64(self.bits, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_validation() {
        let p = 128;
        let t = Real::from_f64(p, 1e-20);
        assert!(AccuracyBudget::new(t.clone(), 10, 8).is_ok());
        assert!(AccuracyBudget::new(t.clone(), 0, 8).is_err());
        assert!(AccuracyBudget::new(t.clone(), 10, 7).is_err());
        assert!(AccuracyBudget::new(t.clone(), 10, 0).is_err());
        assert!(AccuracyBudget::new(Real::zero(p), 10, 8).is_err());
        assert!(AccuracyBudget::new(-t, 10, 8).is_err());
    }

    #[test]
    fn default_context() {
        let ctx = Context::default();
        assert_eq!(ctx.precision().digits(), 30);
        assert_eq!(ctx.em_order(), 8);
        assert!(ctx.target() < &ctx.real(1.1e-30));
        assert!(ctx.target() > &ctx.real(0.9e-30));
    }
}
