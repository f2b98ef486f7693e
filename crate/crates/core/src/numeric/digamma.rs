//! Digamma and polygamma.

use crate::budget::{Context, EvalOutcome};
use crate::error::{Error, Result};
use crate::real::Real;

use super::bernoulli::{bernoulli_over_index, bernoulli_rational};
use super::sum::{finish, log10, Accumulator};
use super::zeta::hurwitz_zeta;

/// Smallest argument at which the `order`-term asymptotic series of ψ has
/// its first omitted term below `target`.
fn asymptotic_threshold(order: usize, log10_target: f64) -> f64 {
    let m = 2 * order + 2;
    let coef = (bernoulli_rational(m).to_f64() / m as f64).abs();
    (coef.log10() - log10_target) / m as f64
}

/// `-Σ_{k=from}^{to} B_{2k}/(2k y^{2k})` and the magnitude of the `k = to+1` term.
fn asym_terms(y: &Real, from: usize, to: usize) -> (Real, Real) {
    let prec = y.prec();
    let inv2 = y.recip().square();
    let mut pow = inv2.powi(from as i32);
    let mut s = Real::zero(prec);
    for k in from..=to {
        s -= &(bernoulli_over_index(prec, 2 * k) * &pow);
        pow = pow * &inv2;
    }
    let bound = (bernoulli_over_index(prec, 2 * to + 2) * &pow).abs();
    (s, bound)
}

/// `-1/(2y) - Σ_{k=1}^{order} B_{2k}/(2k y^{2k})`, i.e. the asymptotic series of
/// `ψ(y) - ln y`, together with the first omitted term's magnitude.
fn asym_series(y: &Real, order: usize) -> (Real, Real) {
    let (s, bound) = asym_terms(y, 1, order);
    (s - y.recip() / 2, bound)
}

/// `ln y - 1/(2y) - Σ_{k=1}^{K} B_{2k}/(2k y^{2k})`.
#[cfg(test)]
pub(crate) fn digamma_asymptotic(y: &Real, order: usize) -> Real {
    asym_series(y, order).0 + y.ln()
}

/// Shared core: ψ(a), or ψ(a) - ln a when `minus_log`.
fn digamma_core(ctx: &Context, a: &Real, order: usize, minus_log: bool) -> Result<EvalOutcome> {
    if !(a > &0.0) {
        return Err(Error::domain("digamma", format!("argument must be positive, got {a}")));
    }
    let a = a.with_prec(ctx.bits());
    let digits = f64::from(ctx.precision().digits());
    let threshold = 10f64
        .max(digits / 2.0)
        .max(10f64.powf(asymptotic_threshold(order, log10(ctx.target()) - 0.3)));
    let af = a.to_f64();
    let mut shift = if af < threshold { (threshold - af).ceil() as usize } else { 0 };
    shift = shift.min(ctx.max_terms());

    let mut acc = Accumulator::new(ctx.bits());
    for k in 0..shift {
        acc.add(&(&a + k as i32).recip());
    }
    let y = &a + shift as i32;
    let (series, bound) = asym_series(&y, order);
    let head = if minus_log {
        if shift == 0 {
            Real::zero(ctx.bits())
        } else {
            (ctx.int(shift as i64) / &a).ln_1p()
        }
    } else {
        y.ln()
    };
    let value = head + series - acc.value();
    let err = bound + super::sum::bound(ctx, acc.rounding_bound());
    finish(ctx, "digamma", value, err, shift + order)
}

/// ψ(a) for `a > 0`: upward recurrence to the asymptotic region, then the
/// `K`-term asymptotic series.
pub fn digamma(ctx: &Context, a: &Real) -> Result<EvalOutcome> {
    digamma_core(ctx, a, ctx.em_order(), false)
}

/// ψ(a) − ln a without forming the two large pieces separately.
pub(crate) fn digamma_minus_log(ctx: &Context, a: &Real) -> Result<EvalOutcome> {
    digamma_core(ctx, a, ctx.em_order(), true)
}

/// ψ(y) minus its `order`-term asymptotic approximation.
///
/// Computed with a longer series so that the difference is resolved rather
/// than rounded to zero for large `y`.
pub(crate) fn digamma_minus_asymptotic(ctx: &Context, y: &Real, order: usize) -> Result<EvalOutcome> {
    let long = (2 * order).clamp(order + 1, 31);
    let y = y.with_prec(ctx.bits());
    let threshold = 10f64.powf(asymptotic_threshold(long, log10(ctx.target()) - 0.3));
    if y.to_f64() >= threshold {
        let (value, bound) = asym_terms(&y, order + 1, long);
        return finish(ctx, "digamma", value, bound, long - order);
    }
    let psi = digamma_core(ctx, &y, long, true)?;
    let (short, _) = asym_series(&y, order);
    let value = psi.value - short;
    finish(ctx, "digamma", value, psi.err_bound, psi.terms_used)
}

/// ψ^{(j)}(a) = (−1)^{j+1} j! ζ(j+1, a) for `j >= 1`.
pub fn polygamma(ctx: &Context, j: u32, a: &Real) -> Result<EvalOutcome> {
    if j == 0 {
        return digamma(ctx, a);
    }
    if !(a > &0.0) {
        return Err(Error::domain("polygamma", format!("argument must be positive, got {a}")));
    }
    let mut fact = ctx.one();
    for i in 2..=j {
        fact = fact * i as i32;
    }
    let sub = ctx.with_target(ctx.target() / &fact);
    let z = hurwitz_zeta(&sub, &ctx.int(i64::from(j) + 1), a)?;
    let sign = if j % 2 == 1 { 1 } else { -1 };
    let value = z.value * &fact * sign;
    let err = z.err_bound * &fact;
    finish(ctx, "polygamma", value, err, z.terms_used)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Real, b: &Real, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn special_values() {
        let ctx = Context::default();
        let g = ctx.euler_gamma();
        let psi1 = digamma(&ctx, &ctx.one()).unwrap();
        assert!(psi1.converged);
        assert!(close(&psi1.value, &-g.clone(), 1e-29));
        // duplication formula: ψ(1/2) = −γ − 2 ln 2
        let half = digamma(&ctx, &ctx.real(0.5)).unwrap();
        let expected = -g - Real::ln2(ctx.bits()) * 2;
        assert!(close(&half.value, &expected, 1e-29));
    }

    #[test]
    fn recurrence() {
        let ctx = Context::default();
        for a in [0.3, 1.0, 7.5, 60.0, 1234.5] {
            let a = ctx.real(a);
            let lo = digamma(&ctx, &a).unwrap();
            let hi = digamma(&ctx, &(&a + 1)).unwrap();
            let diff = hi.value - lo.value - a.recip();
            assert!(diff.abs() < 1e-29, "{diff}");
        }
    }

    #[test]
    fn minus_log_matches_plain() {
        let ctx = Context::default();
        for a in [0.2, 3.0, 80.0] {
            let a = ctx.real(a);
            let d = digamma_minus_log(&ctx, &a).unwrap().value;
            let p = digamma(&ctx, &a).unwrap().value - a.ln();
            assert!(close(&d, &p, 1e-29));
        }
    }

    #[test]
    fn minus_asymptotic_is_small_and_consistent() {
        let ctx = Context::default();
        for y in [0.7, 5.0, 40.0, 300.0] {
            let y = ctx.real(y);
            let d = digamma_minus_asymptotic(&ctx, &y, 8).unwrap();
            let direct = digamma(&ctx, &y).unwrap().value - digamma_asymptotic(&y, 8);
            assert!(close(&d.value, &direct, 2e-30) || y > 50.0);
        }
        // at y = 300 the difference is about B_18/(18 y^18), far below 1e-30,
        // but must still be resolved to a nonzero value
        let d = digamma_minus_asymptotic(&ctx, &ctx.real(300.0), 8).unwrap();
        let expected = -(bernoulli_over_index(ctx.bits(), 18) * ctx.real(300.0).powi(-18));
        assert!(((d.value.clone() - &expected) / &expected).abs() < 1e-3, "{}", d.value);
    }

    #[test]
    fn polygamma_values() {
        let ctx = Context::default();
        let z2 = ctx.pi().square() / 6;
        let p1 = polygamma(&ctx, 1, &ctx.one()).unwrap();
        assert!(close(&p1.value, &z2, 1e-29));
        let p2 = polygamma(&ctx, 2, &ctx.one()).unwrap().value.to_f64();
        assert!((p2 + 2.4041138063191885).abs() < 1e-14);
        assert!(polygamma(&ctx, 1, &ctx.zero()).is_err());
    }

    #[test]
    fn rejects_nonpositive() {
        let ctx = Context::default();
        assert!(digamma(&ctx, &ctx.zero()).is_err());
        assert!(digamma(&ctx, &ctx.real(-1.5)).is_err());
    }
}
