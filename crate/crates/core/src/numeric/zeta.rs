//! Hurwitz and Riemann zeta, derivatives, Stieltjes constants.

use crate::budget::{Context, EvalOutcome};
use crate::error::{Error, Result};
use crate::real::Real;

use super::bernoulli::zeta_nonpositive_integer;
use super::euler_maclaurin::{em_bound_log10, em_tail, smallest_satisfying, EmTail, LogPowerTerm};
use super::sum::{bound, finish, log10, Accumulator};

/// Direct part `Σ_{n<N} ln^j(n+a) (n+a)^{-s}` plus the Euler–Maclaurin tail
/// at `b = N + a`, with `N` chosen so the tail bound meets a quarter of the
/// target.
struct Split {
    direct: Accumulator,
    tail: EmTail,
    cutoff: usize,
}

fn split_sum(ctx: &Context, j: usize, s: &Real, a: &Real) -> Split {
    let k = ctx.em_order();
    let goal = log10(ctx.target()) - 0.7;
    let (sf, af) = (s.to_f64(), a.to_f64());
    let max = ctx.max_terms();
    let mut n = smallest_satisfying(0, max, |n| em_bound_log10(sf, j, n as f64 + af, k) <= goal).unwrap_or(max);
    let quarter = ctx.target() / 4;
    let term = LogPowerTerm::log_power(j, s.clone());
    let mut tail = em_tail(&term, &(a + n as f64), k);
    while tail.bound > quarter && n < max {
        n = (2 * n + 8).min(max);
        tail = em_tail(&term, &(a + n as f64), k);
    }
    let mut direct = Accumulator::new(ctx.bits());
    let neg_s = -s;
    for i in 0..n {
        let u = a + i as f64;
        let mut t = u.pow(&neg_s);
        if j > 0 {
            t = t * u.ln().powi(j as i32);
        }
        direct.add(&t);
    }
    Split { direct, tail, cutoff: n }
}

/// Rounding allowance for the direct sum plus `tail_mag` worth of tail.
fn rounding(ctx: &Context, sp: &Split, tail_mag: Real) -> Real {
    bound(ctx, sp.direct.rounding_bound()) + tail_mag * (16.0 * (-(ctx.bits() as f64)).exp2())
}

/// `Σ_{n>=0} ln^j(n+a) (n+a)^{-s}`; at `s = 1` the divergent part
/// `ln^{j+1}(N+a)/(j+1)` is dropped, which yields the generalized Stieltjes
/// constant `γ_j(a)`.
fn log_power_sum(ctx: &Context, what: &'static str, j: usize, s: &Real, a: &Real) -> Result<EvalOutcome> {
    let s = s.with_prec(ctx.bits());
    let a = a.with_prec(ctx.bits());
    let sp = split_sum(ctx, j, &s, &a);
    let value = sp.direct.value() + sp.tail.total();
    let mag = sp.tail.integral.abs() + sp.tail.corrections.abs();
    let err = sp.tail.bound.clone() + rounding(ctx, &sp, mag);
    finish(ctx, what, value, err, sp.cutoff)
}

fn check_a(op: &'static str, a: &Real) -> Result<()> {
    if !(a > &0.0) {
        return Err(Error::domain(op, format!("shift parameter must be positive, got {a}")));
    }
    Ok(())
}

/// ζ(s, a) = Σ_{n>=0} (n+a)^{-s} for `s != 1`, `a > 0`.
pub fn hurwitz_zeta(ctx: &Context, s: &Real, a: &Real) -> Result<EvalOutcome> {
    check_a("hurwitz_zeta", a)?;
    if s == &1.0 {
        return Err(Error::pole("hurwitz_zeta", "s = 1"));
    }
    log_power_sum(ctx, "hurwitz_zeta", 0, s, a)
}

/// ∂ζ(s, a)/∂s = −Σ ln(n+a) (n+a)^{-s}, for `s != 1`.
pub fn hurwitz_zeta_deriv(ctx: &Context, s: &Real, a: &Real) -> Result<EvalOutcome> {
    check_a("hurwitz_zeta_deriv", a)?;
    if s == &1.0 {
        return Err(Error::pole("hurwitz_zeta_deriv", "s = 1"));
    }
    let mut r = log_power_sum(ctx, "hurwitz_zeta_deriv", 1, s, a)?;
    r.value = -r.value;
    Ok(r)
}

/// ζ(z, a) − a^{1−z}/(z−1) for `z > 0`, continuous through `z = 1` where it
/// equals `ln a − ψ(a)`.
///
/// The pole is cancelled analytically: with `b = N + a`,
/// `∫_a^b u^{-z} du = a^{1−z} · expm1((1−z) ln(b/a)) / (1−z)`, so no large
/// terms are ever formed.
pub fn hurwitz_zeta_reg(ctx: &Context, z: &Real, a: &Real) -> Result<EvalOutcome> {
    check_a("hurwitz_zeta_reg", a)?;
    if !(z > &0.0) {
        return Err(Error::domain("hurwitz_zeta_reg", format!("z must be positive, got {z}")));
    }
    let z = z.with_prec(ctx.bits());
    let a = a.with_prec(ctx.bits());
    let sp = split_sum(ctx, 0, &z, &a);
    let b = &a + sp.cutoff as f64;
    let log_ratio = (&b / &a).ln();
    let one_minus_z = 1 - &z;
    // ∫_a^b u^{-z} du
    let integral = if one_minus_z.is_zero() {
        log_ratio
    } else {
        a.pow(&one_minus_z) * (&one_minus_z * &log_ratio).exp_m1() / &one_minus_z
    };
    let mag = integral.abs() + sp.tail.corrections.abs();
    let value = sp.direct.value() - integral + &sp.tail.corrections;
    let err = sp.tail.bound.clone() + rounding(ctx, &sp, mag);
    finish(ctx, "hurwitz_zeta_reg", value, err, sp.cutoff)
}

/// ζ(s). Nonpositive integers are tabulated; other negative arguments use the
/// functional equation; everything else goes through the Hurwitz machinery.
pub fn riemann_zeta(ctx: &Context, s: &Real) -> Result<EvalOutcome> {
    if s == &1.0 {
        return Err(Error::pole("riemann_zeta", "s = 1"));
    }
    if let Some(m) = s.to_integer() {
        if m <= 0 {
            return Ok(EvalOutcome::exact(zeta_nonpositive_integer(ctx.bits(), (-m) as usize)?));
        }
    }
    if s < &0.0 {
        // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
        let s = s.with_prec(ctx.bits());
        let pi = ctx.pi();
        let one_minus_s = 1 - &s;
        let factor = ctx.int(2).pow(&s) * pi.pow(&(&s - 1)) * (&pi * &s / 2).sin() * one_minus_s.gamma();
        let sub = ctx.with_target(ctx.target() / factor.abs().max(ctx.one()));
        let z = hurwitz_zeta(&sub, &one_minus_s, &ctx.one())?;
        let err = z.err_bound * factor.abs();
        return finish(ctx, "riemann_zeta", z.value * &factor, err, z.terms_used);
    }
    hurwitz_zeta(ctx, s, &ctx.one())
}

/// ζ(s) with the convention ζ(1) = γ; defined for `s >= 1`.
pub fn riemann_zeta_conv(ctx: &Context, s: &Real) -> Result<EvalOutcome> {
    if s < &1.0 {
        return Err(Error::domain("riemann_zeta_conv", format!("requires s >= 1, got {s}")));
    }
    if s == &1.0 {
        return Ok(EvalOutcome::exact(ctx.euler_gamma()));
    }
    riemann_zeta(ctx, s)
}

/// ζ′(s) = −Σ ln n / n^s for `s > 1`.
pub fn riemann_zeta_prime(ctx: &Context, s: &Real) -> Result<EvalOutcome> {
    if !(s > &1.0) {
        return Err(Error::domain("riemann_zeta_prime", format!("requires s > 1, got {s}")));
    }
    hurwitz_zeta_deriv(ctx, s, &ctx.one())
}

/// Stieltjes constant γ_n for `n ∈ {0, 1, 2}`.
pub fn stieltjes(ctx: &Context, n: u32) -> Result<Real> {
    if n > 2 {
        return Err(Error::domain("stieltjes", format!("index must be 0, 1 or 2, got {n}")));
    }
    Ok(log_power_sum(ctx, "stieltjes", n as usize, &ctx.one(), &ctx.one())?.value)
}

/// Generalized Stieltjes constant γ_n(a) for `n ∈ {0, 1}`, `a > 0`.
pub fn stieltjes_generalized(ctx: &Context, n: u32, a: &Real) -> Result<Real> {
    if n > 1 {
        return Err(Error::domain("stieltjes_generalized", format!("index must be 0 or 1, got {n}")));
    }
    check_a("stieltjes_generalized", a)?;
    Ok(log_power_sum(ctx, "stieltjes_generalized", n as usize, &ctx.one(), a)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::digamma::digamma;

    fn ctx() -> Context {
        Context::default()
    }

    #[test]
    fn classical_values() {
        let c = ctx();
        let pi = c.pi();
        let z2 = riemann_zeta(&c, &c.int(2)).unwrap();
        assert!(z2.converged);
        assert!((z2.value - pi.square() / 6).abs() < 1e-30);
        let z4 = riemann_zeta(&c, &c.int(4)).unwrap();
        assert!((z4.value - pi.powi(4) / 90).abs() < 1e-30);
        // ζ(3) and ζ(5), 40 digits
        let z3 = riemann_zeta(&c, &c.int(3)).unwrap().value;
        assert!((z3 - c.parse("1.202056903159594285399738161511449990765").unwrap()).abs() < 1e-30);
        let z5 = riemann_zeta_conv(&c, &c.int(5)).unwrap().value;
        assert!((z5 - c.parse("1.036927755143369926331365486457034168057").unwrap()).abs() < 1e-30);
    }

    #[test]
    fn hurwitz_consistency() {
        let c = ctx();
        for s in [2.0, 3.5] {
            let s = c.real(s);
            let h = hurwitz_zeta(&c, &s, &c.one()).unwrap().value;
            let r = riemann_zeta(&c, &s).unwrap().value;
            assert!((h - r).abs() < 1e-30);
        }
        let (s, a) = (c.real(2.5), c.real(0.7));
        let lhs = hurwitz_zeta(&c, &s, &a).unwrap().value - hurwitz_zeta(&c, &s, &(&a + 1)).unwrap().value;
        assert!((lhs - a.pow(&-s)).abs() < 1e-29);
    }

    #[test]
    fn negative_and_critical_strip() {
        let c = ctx();
        let zm1 = riemann_zeta(&c, &c.int(-1)).unwrap().value;
        assert!((zm1 + c.one() / 12).abs() < 1e-30);
        // ζ(1/2) and ζ(−1/2)
        let zh = riemann_zeta(&c, &c.real(0.5)).unwrap().value;
        assert!((zh - c.parse("-1.460354508809586812889499152515298012467").unwrap()).abs() < 1e-29);
        let zmh = riemann_zeta(&c, &c.real(-0.5)).unwrap().value;
        assert!((zmh - c.parse("-0.2078862249773545660173067253970493022263").unwrap()).abs() < 1e-29);
        assert!(riemann_zeta(&c, &c.one()).is_err());
        assert!(hurwitz_zeta(&c, &c.int(2), &c.zero()).is_err());
    }

    #[test]
    fn derivative_values() {
        let c = ctx();
        let d2 = riemann_zeta_prime(&c, &c.int(2)).unwrap().value;
        assert!((d2 - c.parse("-0.9375482543158437537025740945678649778979").unwrap()).abs() < 1e-29);
        let d4 = riemann_zeta_prime(&c, &c.int(4)).unwrap().value.to_f64();
        assert!((d4 + 0.0689112658961254).abs() < 1e-14);
        for s in [2.0, 3.0] {
            let h = c.real(1e-6);
            let s = c.real(s);
            let fd = (riemann_zeta(&c, &(&s + &h)).unwrap().value - riemann_zeta(&c, &(&s - &h)).unwrap().value) / (h * 2);
            let d = riemann_zeta_prime(&c, &s).unwrap().value;
            assert!((fd - d).abs() < 1e-8);
        }
        assert!(riemann_zeta_prime(&c, &c.one()).is_err());
    }

    #[test]
    fn stieltjes_values() {
        let c = ctx();
        let g0 = stieltjes(&c, 0).unwrap();
        assert!((g0 - c.euler_gamma()).abs() < 1e-30);
        let g1 = stieltjes(&c, 1).unwrap();
        assert!((g1.clone() - c.parse("-0.07281584548367672486058637587490131913774").unwrap()).abs() < 1e-29);
        let g2 = stieltjes(&c, 2).unwrap();
        assert!((g2 - c.parse("-0.009690363192872318484530386035217827172").unwrap()).abs() < 1e-29);
        assert!(stieltjes(&c, 3).is_err());
        let g11 = stieltjes_generalized(&c, 1, &c.one()).unwrap();
        assert!((g11 - g1).abs() < 1e-30);
        for a in [1.0, 2.5] {
            let a = c.real(a);
            let g = stieltjes_generalized(&c, 0, &a).unwrap();
            let psi = digamma(&c, &a).unwrap().value;
            assert!((g + psi).abs() < 1e-29);
        }
    }

    #[test]
    fn generalized_stieltjes_matches_laurent_fit() {
        // ζ(s,2) − 1/(s−1) = γ_0(2) − γ_1(2)(s−1) + O((s−1)^2); symmetric
        // differences cancel the even part.
        let c = ctx();
        let a = c.int(2);
        let h = c.real(1e-4);
        let f = |s: Real| hurwitz_zeta(&c, &s, &a).unwrap().value - (&s - 1).recip();
        let slope = (f(1 + h.clone()) - f(1 - h.clone())) / (h * 2);
        let g1 = stieltjes_generalized(&c, 1, &a).unwrap();
        assert!((slope + g1).abs() < 1e-7);
    }

    #[test]
    fn regularized_hurwitz() {
        let c = ctx();
        let g = hurwitz_zeta_reg(&c, &c.one(), &c.one()).unwrap();
        assert!(g.converged);
        assert!((g.value - c.euler_gamma()).abs() < 1e-30);
        let two = hurwitz_zeta_reg(&c, &c.int(2), &c.one()).unwrap().value;
        assert!((two - (c.pi().square() / 6 - 1)).abs() < 1e-30);
        let (z, a) = (c.real(0.5), c.int(2));
        let reg = hurwitz_zeta_reg(&c, &z, &a).unwrap().value;
        let plain = hurwitz_zeta(&c, &z, &a).unwrap().value - a.pow(&(1 - z.clone())) / (z.clone() - 1);
        assert!((reg - plain).abs() < 1e-29);
        // continuity through z = 1: the limit value is ln a − ψ(a)
        let a = c.real(3.3);
        let at1 = hurwitz_zeta_reg(&c, &c.one(), &a).unwrap().value;
        let expect = a.ln() - digamma(&c, &a).unwrap().value;
        assert!((at1.clone() - expect).abs() < 1e-29);
        let eps = c.real(1e-12);
        let near = hurwitz_zeta_reg(&c, &(1 + eps), &a).unwrap();
        assert!(near.converged);
        assert!((near.value - at1).abs() < 1e-11);
        assert!(hurwitz_zeta_reg(&c, &c.zero(), &a).is_err());
    }
}
