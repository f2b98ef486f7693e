//! Outer sums `Σ_{n>=1} n^{-p} g(n x)` where `g` has a known large-argument
//! expansion: a direct head followed by a tail summed through Hurwitz zeta.

use crate::budget::{Context, EvalOutcome};
use crate::error::Result;
use crate::real::Real;

use super::bernoulli::{bernoulli_over_factorial, bernoulli_over_index};
use super::euler_maclaurin::{asymptotic_tail, smallest_satisfying, AsymTerm};
use super::sum::{bound, finish, log10, Accumulator};

/// `g(y) ~ Σ terms`, with `omitted` the first term left out. The remainder
/// after any prefix must be bounded by the next term (enveloping series).
pub(crate) struct Expansion {
    pub terms: Vec<AsymTerm>,
    pub omitted: AsymTerm,
}

impl Expansion {
    /// ψ(y) − ln y ~ −1/(2y) − Σ B_{2k}/(2k y^{2k}).
    pub fn digamma_minus_log(ctx: &Context) -> Expansion {
        let p = ctx.bits();
        let k = ctx.em_order();
        let mut terms = vec![AsymTerm::new(ctx.real(-0.5), ctx.one())];
        for i in 1..=k {
            terms.push(AsymTerm::new(-bernoulli_over_index(p, 2 * i), ctx.int(2 * i as i64)));
        }
        let omitted = AsymTerm::new(-bernoulli_over_index(p, 2 * k + 2), ctx.int(2 * k as i64 + 2));
        Expansion { terms, omitted }
    }

    /// ψ(y) ~ ln y − 1/(2y) − Σ B_{2k}/(2k y^{2k}).
    pub fn digamma(ctx: &Context) -> Expansion {
        let mut e = Self::digamma_minus_log(ctx);
        e.terms.insert(0, AsymTerm::with_log(ctx.one(), ctx.zero()));
        e
    }

    /// ζ(s, y + δ) for large y, with `half = 1/2 − δ` (δ ∈ {0, 1}):
    /// `[y^{1−s}/(s−1)] + half · y^{−s} + Σ B_{2k}/(2k)! (s)_{2k−1} y^{1−s−2k}`.
    /// The bracketed leading term is included only when `leading` is set.
    pub fn hurwitz(ctx: &Context, s: &Real, half: f64, leading: bool) -> Expansion {
        let p = ctx.bits();
        let k = ctx.em_order();
        let s = s.with_prec(p);
        let mut terms = Vec::with_capacity(k + 2);
        if leading {
            terms.push(AsymTerm::new((&s - 1).recip(), &s - 1));
        }
        terms.push(AsymTerm::new(ctx.real(half), s.clone()));
        let mut rising = s.clone(); // (s)_{2i-1}
        let mut omitted = None;
        for i in 1..=k + 1 {
            let coef = bernoulli_over_factorial(p, 2 * i) * &rising;
            let term = AsymTerm::new(coef, &s + (2 * i - 1) as i32);
            if i <= k {
                terms.push(term);
            } else {
                omitted = Some(term);
            }
            rising = rising * (&s + (2 * i - 1) as i32) * (&s + (2 * i) as i32);
        }
        Expansion { terms, omitted: omitted.expect("loop runs k+1 >= 1 times") }
    }
}

/// Head length `N` such that the omitted term's tail
/// `|c| x^{-α} ζ(p+α, N+1)` (with a log factor if present) stays below
/// `goal` (log10).
pub(crate) fn choose_head(p: f64, x: f64, om: &AsymTerm, goal: f64, max: usize) -> usize {
    let c = log10(&om.coef);
    let alpha = om.alpha.to_f64();
    let s = p + alpha;
    let est = |n: usize| {
        let a = n as f64 + 1.0;
        // ζ(s, a) <= a^{1-s}/(s-1) + a^{-s}
        let z = (a.powf(1.0 - s) / (s - 1.0) + a.powf(-s)).log10();
        let lg = if om.log { ((a * x).ln().abs() + 1.0).log10() } else { 0.0 };
        c - alpha * x.log10() + z + lg
    };
    smallest_satisfying(0, max, |n| est(n) <= goal).unwrap_or(max)
}

/// `Σ_{n>=1} n^{-p} g(n x)`: `g` evaluated directly for `n <= N`, the rest
/// replaced by the expansion summed term by term with Hurwitz zeta.
pub(crate) fn sum_with_expansion(
    ctx: &Context,
    what: &'static str,
    p: &Real,
    x: &Real,
    expansion: &Expansion,
    head: impl Fn(&Context, &Real) -> Result<EvalOutcome>,
) -> Result<EvalOutcome> {
    let p = p.with_prec(ctx.bits());
    let x = x.with_prec(ctx.bits());
    let goal = log10(ctx.target()) - 0.7;
    let n = choose_head(p.to_f64(), x.to_f64(), &expansion.omitted, goal, ctx.max_terms());
    let sub = ctx.with_target(ctx.target() / (4.0 * n.max(1) as f64));

    let mut acc = Accumulator::new(ctx.bits());
    let mut err = ctx.zero();
    let neg_p = -p.clone();
    for k in 1..=n {
        let kr = ctx.int(k as i64);
        let g = head(&sub, &(&kr * &x))?;
        let w = kr.pow(&neg_p);
        err += &(&g.err_bound * &w);
        acc.add(&(g.value * w));
    }
    let tail = asymptotic_tail(&ctx.scaled(0.25), &p, &x, n, &expansion.terms, Some(&expansion.omitted))?;
    let value = acc.value() + &tail.value;
    let err = err + tail.bound + bound(ctx, acc.rounding_bound());
    finish(ctx, what, value, err, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::digamma::digamma_minus_log;

    #[test]
    fn herglotz_type_sum_matches_slow_reference() {
        // Σ (ψ(n x) − ln(n x)) / n at x = 1.5 against a long f64 partial sum
        // with the leading tail −ζ(2, N+1)/(2x) added back.
        let ctx = Context::default();
        let x = ctx.real(1.5);
        let e = Expansion::digamma_minus_log(&ctx);
        let v = sum_with_expansion(&ctx, "t", &ctx.one(), &x, &e, |c, y| digamma_minus_log(c, y)).unwrap();
        assert!(v.converged);

        let mut s = 0.0f64;
        let n_max = 200_000;
        for n in 1..=n_max {
            let y = 1.5 * n as f64;
            // ψ(y) − ln y via its asymptotic series (y >= 1.5 here, 4 terms,
            // refined by recurrence for small y)
            let mut shift = 0.0;
            let mut yy = y;
            while yy < 20.0 {
                shift -= 1.0 / yy;
                yy += 1.0;
            }
            let inv2 = 1.0 / (yy * yy);
            let a = -0.5 / yy - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
            s += ((yy / y).ln() + a + shift) / n as f64;
        }
        let tail = -1.0 / (2.0 * 1.5 * n_max as f64);
        let reference = s + tail;
        assert!((v.value.to_f64() - reference).abs() < 1e-9, "{} vs {reference}", v.value);
    }
}
