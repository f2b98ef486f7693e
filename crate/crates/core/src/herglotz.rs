//! The Herglotz family: F, F_r, Φ, the double zeta function and relatives.

use crate::budget::{Context, EvalOutcome};
use crate::error::{Error, Result};
use crate::numeric::bernoulli::bernoulli_over_index;
use crate::numeric::digamma::{digamma, digamma_minus_asymptotic, digamma_minus_log};
use crate::numeric::euler_maclaurin::AsymTerm;
use crate::numeric::polylog::dilog;
use crate::numeric::series::{choose_head, sum_with_expansion, Expansion};
use crate::numeric::sum::{bound, finish, log10, Accumulator};
use crate::numeric::zeta::{hurwitz_zeta, hurwitz_zeta_reg, riemann_zeta, riemann_zeta_prime, stieltjes};
use crate::real::Real;

pub(crate) fn require_positive(op: &'static str, name: &str, v: &Real) -> Result<()> {
    if !(v > &0.0) {
        return Err(Error::domain(op, format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn require_int(op: &'static str, name: &str, v: u32, min: u32) -> Result<()> {
    if v < min {
        return Err(Error::domain(op, format!("{name} must be an integer >= {min}, got {v}")));
    }
    Ok(())
}

/// F(x) = Σ_{n>=1} (ψ(nx) − ln(nx))/n.
pub fn herglotz_f(ctx: &Context, x: &Real) -> Result<EvalOutcome> {
    require_positive("herglotz_F", "x", x)?;
    let e = Expansion::digamma_minus_log(ctx);
    sum_with_expansion(ctx, "herglotz_F", &ctx.one(), x, &e, digamma_minus_log)
}

/// F_r(x) = Σ_{n>=1} ψ(nx)/n^r, integer `r >= 2`.
///
/// Accelerated form: the `K`-term asymptotic part of ψ is summed in closed
/// form through ζ(r), ζ′(r) and ζ(r+2k); only the small remainders
/// `ψ(nx) − asym_K(nx)` are summed explicitly.
pub fn higher_herglotz_f(ctx: &Context, r: u32, x: &Real) -> Result<EvalOutcome> {
    require_int("higher_herglotz_F", "r", r, 2)?;
    require_positive("higher_herglotz_F", "x", x)?;
    // the closed-form pieces carry coefficients up to x^{-2K} that cancel
    // against the remainder sum; widen the working precision to match
    let k = ctx.em_order();
    let loss = (2 * k) as f64 * (-x.to_f64().log10()).max(0.0);
    let outer = ctx;
    let wide = ctx.with_extra_digits(loss.ceil() as u32 + 2)?;
    let ctx = &wide;
    let x = x.with_prec(ctx.bits());
    let prec = ctx.bits();
    let ri = i64::from(r);
    let n_pieces = (k + 4) as f64;

    // Truncation after N terms of the remainder sum.
    let omitted = AsymTerm::new(bernoulli_over_index(prec, 2 * k + 2), ctx.int(2 * k as i64 + 2));
    let goal = log10(ctx.target()) - 0.7;
    let n = choose_head(f64::from(r), x.to_f64(), &omitted, goal, ctx.max_terms());
    let trunc = bound(ctx, 1.0) * &omitted.coef.abs() * x.powi(-(2 * k as i32 + 2))
        * hurwitz_zeta(&ctx.scaled(0.01), &ctx.int(ri + 2 * k as i64 + 2), &ctx.int(n as i64 + 1))?.value;

    let mut acc = Accumulator::new(prec);
    let mut err = trunc;
    let piece = |c: &Real| ctx.with_target(ctx.target() / (c.abs().max(ctx.one()) * (4.0 * n_pieces)));

    let zr = riemann_zeta(&piece(&x.ln()), &ctx.int(ri))?;
    acc.add(&(x.ln() * &zr.value));
    err += &(x.ln().abs() * &zr.err_bound);
    let dz = riemann_zeta_prime(&ctx.scaled(1.0 / (4.0 * n_pieces)), &ctx.int(ri))?;
    acc.sub(&dz.value);
    err += &dz.err_bound;
    let half = (&x * 2).recip();
    let z1 = riemann_zeta(&piece(&half), &ctx.int(ri + 1))?;
    acc.sub(&(&z1.value * &half));
    err += &(&z1.err_bound * &half);
    let inv2 = x.recip().square();
    let mut pow = inv2.clone();
    for i in 1..=k {
        let c = bernoulli_over_index(prec, 2 * i) * &pow;
        let z = riemann_zeta(&piece(&c), &ctx.int(ri + 2 * i as i64))?;
        acc.sub(&(&c * &z.value));
        err += &(c.abs() * &z.err_bound);
        pow = pow * &inv2;
    }
    let sub = ctx.with_target(ctx.target() / (4.0 * n.max(1) as f64));
    for m in 1..=n {
        let mr = ctx.int(m as i64);
        let d = digamma_minus_asymptotic(&sub, &(&mr * &x), k)?;
        let w = mr.powi(-(r as i32));
        err += &(&d.err_bound * &w);
        acc.add(&(d.value * w));
    }
    err += &bound(ctx, acc.rounding_bound());
    let value = acc.value().with_prec(outer.bits());
    finish(outer, "higher_herglotz_F", value, err.with_prec(outer.bits()), n)
}

/// F_r(x) by direct summation of ψ(nx)/n^r with an asymptotic tail through
/// Hurwitz zeta. Independent of [`higher_herglotz_f`]; used as its oracle.
pub fn higher_herglotz_f_direct(ctx: &Context, r: u32, x: &Real) -> Result<EvalOutcome> {
    require_int("higher_herglotz_F", "r", r, 2)?;
    require_positive("higher_herglotz_F", "x", x)?;
    let e = Expansion::digamma(ctx);
    sum_with_expansion(ctx, "higher_herglotz_F", &ctx.int(i64::from(r)), x, &e, digamma)
}

/// Φ(z, x) = Σ_{n>=1} (ζ(z, nx) − (nx)^{1−z}/(z−1))/n for `z > 0`, `z != 1`.
pub fn phi(ctx: &Context, z: &Real, x: &Real) -> Result<EvalOutcome> {
    require_positive("phi", "z", z)?;
    require_positive("phi", "x", x)?;
    if z == &1.0 {
        return Err(Error::pole("phi", "z = 1 (use phi_limit_at_1)"));
    }
    phi_unchecked(ctx, z, x)
}

fn phi_unchecked(ctx: &Context, z: &Real, x: &Real) -> Result<EvalOutcome> {
    let e = Expansion::hurwitz(ctx, z, 0.5, false);
    let z = z.with_prec(ctx.bits());
    sum_with_expansion(ctx, "phi", &ctx.one(), x, &e, |c, y| hurwitz_zeta_reg(c, &z, y))
}

/// lim_{z→1} Φ(z, x) = −F(x).
pub fn phi_limit_at_1(ctx: &Context, x: &Real) -> Result<EvalOutcome> {
    let mut f = herglotz_f(ctx, x)?;
    f.value = -f.value;
    Ok(f)
}

/// ζ_D(s1, s2) = Σ_{n>=1} ζ(s1, n+1)/n^{s2} for `s1 >= 2`, `s2 >= 1`.
pub fn double_zeta(ctx: &Context, s1: &Real, s2: &Real) -> Result<EvalOutcome> {
    if s1 < &2.0 || s2 < &1.0 {
        return Err(Error::domain("double_zeta", format!("requires s1 >= 2 and s2 >= 1, got ({s1}, {s2})")));
    }
    let e = Expansion::hurwitz(ctx, s1, -0.5, true);
    let s1 = s1.with_prec(ctx.bits());
    sum_with_expansion(ctx, "double_zeta", s2, &ctx.one(), &e, |c, y| hurwitz_zeta(c, &s1, &(y + 1)))
}

/// ζ_D with the divergent value ζ_D(1, r) = −(ζ_D(r, 1) + ζ(r+1) − γζ(r)).
pub fn double_zeta_conv(ctx: &Context, s1: &Real, s2: &Real) -> Result<EvalOutcome> {
    if s1 == &1.0 {
        let r = s2.to_integer().filter(|&r| r >= 2).ok_or_else(|| {
            Error::domain("double_zeta_conv", format!("ζ_D(1, r) needs an integer r >= 2, got {s2}"))
        })?;
        let sub = ctx.scaled(0.25);
        let d = double_zeta(&sub, &ctx.int(r), &ctx.one())?;
        let z1 = riemann_zeta(&sub, &ctx.int(r + 1))?;
        let z0 = riemann_zeta(&sub, &ctx.int(r))?;
        let g = ctx.euler_gamma();
        let value = -(d.value + z1.value - &g * &z0.value);
        let err = d.err_bound + z1.err_bound + z0.err_bound * &g;
        return finish(ctx, "double_zeta_conv", value, err, d.terms_used);
    }
    if s1 < &2.0 {
        return Err(Error::domain("double_zeta_conv", format!("requires s1 = 1 or s1 >= 2, got {s1}")));
    }
    double_zeta(ctx, s1, s2)
}

/// Zagier's P(x, y) = F(x) − F(y) + Li₂(y/x) − π²/6 + ln(x/y)(γ − ½ ln(x−y) + ¼ ln(x/y)).
pub fn zagier_p(ctx: &Context, x: &Real, y: &Real) -> Result<EvalOutcome> {
    require_positive("zagier_P", "y", y)?;
    if !(x > y) {
        return Err(Error::domain("zagier_P", format!("requires x > y, got x = {x}, y = {y}")));
    }
    let x = x.with_prec(ctx.bits());
    let y = y.with_prec(ctx.bits());
    let sub = ctx.scaled(1.0 / 3.0);
    let fx = herglotz_f(&sub, &x)?;
    let fy = herglotz_f(&sub, &y)?;
    let li = dilog(&sub, &(&y / &x))?;
    let lr = (&x / &y).ln();
    let value = &fx.value - &fy.value + &li.value - ctx.pi().square() / 6
        + &lr * &(ctx.euler_gamma() - (&x - &y).ln() / 2 + &lr / 4);
    let err = fx.err_bound + fy.err_bound + li.err_bound;
    finish(ctx, "zagier_P", value, err, fx.terms_used + fy.terms_used)
}

/// Ramanujan's φ(a) = ψ(a) + 1/(2a) − ln a.
pub fn ramanujan_phi(ctx: &Context, a: &Real) -> Result<EvalOutcome> {
    require_positive("ramanujan_phi", "a", a)?;
    let d = digamma_minus_log(ctx, a)?;
    let value = d.value + (a.with_prec(ctx.bits()) * 2).recip();
    finish(ctx, "ramanujan_phi", value, d.err_bound, d.terms_used)
}

/// F(1) = −γ²/2 − π²/12 − γ₁ from constants.
pub fn f1_constant(ctx: &Context) -> Result<Real> {
    let g = ctx.euler_gamma();
    let g1 = stieltjes(ctx, 1)?;
    Ok(-(g.square() / 2) - ctx.pi().square() / 12 - g1)
}

/// Σ_{n>=1} φ(nx).
pub fn ramanujan_series(ctx: &Context, x: &Real) -> Result<EvalOutcome> {
    require_positive("ramanujan_series", "x", x)?;
    let mut e = Expansion::digamma_minus_log(ctx);
    e.terms.remove(0);
    sum_with_expansion(ctx, "ramanujan_series", &ctx.zero(), x, &e, ramanujan_phi)
}

/// Σ_{m>=1} ψ(mx+1)/m^r, integer `r >= 2`.
pub fn digamma_shift_series(ctx: &Context, r: u32, x: &Real) -> Result<EvalOutcome> {
    require_int("digamma_shift_series", "r", r, 2)?;
    require_positive("digamma_shift_series", "x", x)?;
    let mut e = Expansion::digamma(ctx);
    // ψ(y+1) = ψ(y) + 1/y flips the sign of the 1/(2y) term
    e.terms[1].coef = ctx.real(0.5);
    sum_with_expansion(ctx, "digamma_shift_series", &ctx.int(i64::from(r)), x, &e, |c, y| digamma(c, &(y + 1)))
}

/// Σ_{j>=1} ψ^{(m)}(1 + jx) for integer `m >= 2`.
pub fn polygamma_shift_series(ctx: &Context, m: u32, x: &Real) -> Result<EvalOutcome> {
    require_int("polygamma_shift_series", "m", m, 2)?;
    require_positive("polygamma_shift_series", "x", x)?;
    let mut fact = ctx.one();
    for i in 2..=m {
        fact = fact * i as i32;
    }
    let s = ctx.int(i64::from(m) + 1);
    let e = Expansion::hurwitz(ctx, &s, -0.5, true);
    let sub = ctx.with_target(ctx.target() / &fact);
    let z = sum_with_expansion(&sub, "polygamma_shift_series", &ctx.zero(), x, &e, |c, y| {
        hurwitz_zeta(c, &s, &(y + 1))
    })?;
    let sign = if m % 2 == 1 { 1 } else { -1 };
    finish(ctx, "polygamma_shift_series", z.value * &fact * sign, z.err_bound * &fact, z.terms_used)
}

/// Σ_{j>=1} (ψ′(1 + jx) − 1/(jx)).
pub fn trigamma_shift_series(ctx: &Context, x: &Real) -> Result<EvalOutcome> {
    require_positive("trigamma_shift_series", "x", x)?;
    let s = ctx.int(2);
    let e = Expansion::hurwitz(ctx, &s, -0.5, false);
    sum_with_expansion(ctx, "trigamma_shift_series", &ctx.zero(), x, &e, |c, y| {
        let z = hurwitz_zeta(c, &s, &(y + 1))?;
        Ok(EvalOutcome { value: z.value - y.recip(), ..z })
    })
}
