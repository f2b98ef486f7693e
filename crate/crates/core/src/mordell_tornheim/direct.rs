//! Θ straight from its double series: inner sums over `n` with
//! Euler–Maclaurin tails, outer tail over `m` through the large-argument
//! expansion of the inner sum.

use crate::budget::{Context, EvalOutcome};
use crate::error::{Error, Result};
use crate::numeric::bernoulli::{bernoulli_over_factorial, harmonic};
use crate::numeric::digamma::digamma;
use crate::numeric::euler_maclaurin::{asymptotic_tail, em_bound_log10, smallest_satisfying, AsymTerm};
use crate::numeric::sum::{bound, finish, log10, Accumulator};
use crate::numeric::zeta::riemann_zeta;
use crate::real::Real;

use super::ThetaPoint;

/// Default distance from the boundary of the convergence region below which
/// the direct route refuses to run.
pub const DIRECT_MARGIN: f64 = 0.25;

/// Outer terms with `m x` below this are summed directly.
const OUTER_SWITCH: f64 = 24.0;

/// Cap on the length of the large-argument expansion.
const MAX_EXPANSION: usize = 100;

/// Θ(r, s, t, x) by direct summation. Slow but makes no use of any identity.
pub fn theta_direct(ctx: &Context, p: &ThetaPoint) -> Result<EvalOutcome> {
    let margin = p.region_margin();
    if !(margin >= DIRECT_MARGIN) {
        return Err(Error::domain(
            "theta_direct",
            format!("point ({}, {}, {}) is {margin:.3} from the region boundary, need {DIRECT_MARGIN}", p.r, p.s, p.t),
        ));
    }
    let (r, s, t, x) = p.lifted(ctx.bits());
    let m_head = ((OUTER_SWITCH / x.to_f64()).ceil() as usize).clamp(1, ctx.max_terms());

    let (terms, omitted) = large_argument_expansion(ctx, &r, &s, &t, &x, m_head)?;
    let tail = asymptotic_tail(&ctx.scaled(0.25), &s, &x, m_head, &terms, omitted.as_ref())?;

    let mut acc = Accumulator::new(ctx.bits());
    let mut err = ctx.zero();
    let mut used = 0;
    let neg_s = -s.clone();
    let share = ctx.target() / (4 * m_head) as f64;
    for m in 1..=m_head {
        let mr = ctx.int(m as i64);
        let w = mr.pow(&neg_s);
        let sub = ctx.with_target(&share / &w);
        let h = inner_sum(&sub, &r, &t, &(&mr * &x))?;
        used += h.terms_used;
        err += &(&h.err_bound * &w);
        acc.add(&(h.value * &w));
    }
    let value = acc.value() + &tail.value;
    let err = err + tail.bound + bound(ctx, acc.rounding_bound());
    finish(ctx, "theta_direct", value, err, used)
}

/// ζ_MT(r, s, t) = Θ(r, s, t, 1).
pub fn mt_zeta(ctx: &Context, r: &Real, s: &Real, t: &Real) -> Result<EvalOutcome> {
    let p = ThetaPoint::new(r.clone(), s.clone(), t.clone(), ctx.one())?;
    theta_direct(ctx, &p)
}

/// `C(−t, k)` for `k = 0, 1, ...`.
fn neg_binomials(t: &Real, count: usize) -> Vec<Real> {
    let mut out = Vec::with_capacity(count);
    let mut c = Real::one(t.prec());
    for k in 0..count {
        out.push(c.clone());
        c = c * &(-t.clone() - k as i32) / (k as i32 + 1);
    }
    out
}

/// An upper bound for |ζ(σ)|, valid in particular at the trivial zeros.
fn zeta_envelope(ctx: &Context, sigma: &Real) -> Result<Real> {
    if sigma <= &-1.0 {
        // |ζ(1−u)| <= 2 (2π)^{−u} Γ(u) ζ(u) with ζ(u) <= ζ(2) for u >= 2
        let u = 1 - sigma.clone();
        let z2 = ctx.pi().square() / 6;
        return Ok((ctx.pi() * 2).pow(&-u.clone()) * u.gamma() * z2 * 2);
    }
    Ok(riemann_zeta(&ctx.scaled(1e3), sigma)?.value.abs() * 2)
}

/// Large-`y` expansion of `h(y) = Σ_n n^{-r} (n+y)^{-t}`:
///
/// `Σ_k C(−t,k) ζ(r−k) y^{−t−k} + Γ(1−r)Γ(r+t−1)/Γ(t) y^{1−r−t}`,
/// where for integer `r >= 1` the colliding `k = r−1` term and the Γ term
/// merge into `C(−t,r−1) y^{1−r−t} (H_{r−1} − ψ(t+r−1) + ln y)`.
///
/// Terms are kept until the outer tail of the next one, summed over
/// `m > m_head`, drops below the target.
fn large_argument_expansion(
    ctx: &Context,
    r: &Real,
    s: &Real,
    t: &Real,
    x: &Real,
    m_head: usize,
) -> Result<(Vec<AsymTerm>, Option<AsymTerm>)> {
    let mut terms = Vec::new();
    let r_int = r.to_integer();
    let t_nonpos_int = t.to_integer().is_some_and(|k| k <= 0);
    let alpha0 = r + t - 1;

    match r_int {
        Some(ri) if ri >= 1 => {
            let l = neg_binomials(t, ri as usize).pop().expect("ri >= 1");
            if !l.is_zero() {
                let psi = digamma(&ctx.scaled(1e-3), &(t + (ri - 1) as i32))?.value;
                let h = harmonic(ctx, (ri - 1) as u64);
                terms.push(AsymTerm::with_log(l.clone(), alpha0.clone()));
                terms.push(AsymTerm::new(l * (h - psi), alpha0.clone()));
            }
        }
        _ => {
            if !t_nonpos_int {
                let coef = (1 - r.clone()).gamma() * alpha0.gamma() / t.gamma();
                terms.push(AsymTerm::new(coef, alpha0.clone()));
            }
        }
    }

    let a = (m_head + 1) as f64;
    let xf = x.to_f64();
    let sf = s.to_f64();
    let goal = log10(ctx.target()) - 1.5;
    let tail_log10 = |c: &Real, alpha: f64| {
        let q = sf + alpha;
        let z = (a.powf(1.0 - q) / (q - 1.0) + a.powf(-q)).log10();
        log10(c) - alpha * xf.log10() + z
    };

    let mut binom = Real::one(ctx.bits());
    let mut omitted = None;
    for k in 0..=MAX_EXPANSION {
        let alpha = t + k as i32;
        if binom.is_zero() {
            // t is a nonpositive integer: the expansion has terminated
            break;
        }
        let sigma = r - k as i32;
        let collides = r_int.is_some_and(|ri| ri >= 1 && ri - 1 == k as i64);
        if !collides {
            let env = &binom.abs() * &zeta_envelope(ctx, &sigma)?;
            if k > 0 && tail_log10(&env, alpha.to_f64()) <= goal {
                omitted = Some(AsymTerm::new(env * 2, alpha));
                break;
            }
            if k == MAX_EXPANSION {
                omitted = Some(AsymTerm::new(env * 2, alpha));
                break;
            }
            let z = riemann_zeta(&ctx.scaled(1e-3), &sigma)?.value;
            terms.push(AsymTerm::new(&binom * &z, alpha));
        }
        binom = binom * &(-t.clone() - k as i32) / (k as i32 + 1);
    }
    Ok((terms, omitted))
}

/// `h(y) = Σ_{n>=1} n^{-r} (n+y)^{-t}`: direct terms below `N`, then the
/// Euler–Maclaurin tail of `f(u) = u^{-r} (u+y)^{-t}` from `N`.
fn inner_sum(ctx: &Context, r: &Real, t: &Real, y: &Real) -> Result<EvalOutcome> {
    let k = ctx.em_order();
    let goal = log10(ctx.target()) - 0.7;
    let q = (r + t).to_f64();
    let floor = (4.0 * y.to_f64()).ceil().max(2.0) as usize;
    let slack = t.to_f64().abs() * (1.25f64).log10() + 1.0;
    let mut n = smallest_satisfying(floor, ctx.max_terms(), |n| em_bound_log10(q, 0, n as f64, k) + slack <= goal)
        .unwrap_or(ctx.max_terms());
    loop {
        let tail = em_tail_inner(ctx, r, t, y, n)?;
        if &tail.1 <= ctx.target() || n >= ctx.max_terms() {
            let mut acc = Accumulator::new(ctx.bits());
            let neg_r = -r.clone();
            let neg_t = -t.clone();
            for j in 1..n {
                let u = ctx.int(j as i64);
                acc.add(&(u.pow(&neg_r) * (&u + y).pow(&neg_t)));
            }
            let value = acc.value() + tail.0;
            let err = tail.1 + bound(ctx, acc.rounding_bound());
            return finish(ctx, "theta_direct", value, err, n);
        }
        n = (2 * n).min(ctx.max_terms());
    }
}

/// `(Σ_{u>=N} f(u) approximation, error bound)`.
fn em_tail_inner(ctx: &Context, r: &Real, t: &Real, y: &Real, n: usize) -> Result<(Real, Real)> {
    let prec = ctx.bits();
    let k = ctx.em_order();
    let top = 2 * k + 1;
    let u = ctx.int(n as i64);
    let v = &u + y;

    // rising factorials (r)_i, (t)_i and the powers u^{-r-i}, v^{-t-i}
    let mut rise_r = vec![ctx.one()];
    let mut rise_t = vec![ctx.one()];
    let mut pow_u = vec![u.pow(&-r.clone())];
    let mut pow_v = vec![v.pow(&-t.clone())];
    let (ui, vi) = (u.recip(), v.recip());
    for i in 0..top {
        rise_r.push(&rise_r[i] * &(r + i as i32));
        rise_t.push(&rise_t[i] * &(t + i as i32));
        pow_u.push(&pow_u[i] * &ui);
        pow_v.push(&pow_v[i] * &vi);
    }
    let deriv = |d: usize| {
        // f^{(d)} = (−1)^d Σ_i C(d,i) (r)_i (t)_{d−i} u^{−r−i} v^{−t−(d−i)}
        let mut sum = Real::zero(prec);
        let mut c = ctx.one();
        for i in 0..=d {
            sum += &(&c * &rise_r[i] * &rise_t[d - i] * &pow_u[i] * &pow_v[d - i]);
            c = c * (d - i) as i32 / (i as i32 + 1);
        }
        if d % 2 == 1 {
            -sum
        } else {
            sum
        }
    };

    let f0 = &pow_u[0] * &pow_v[0];
    let mut corr = f0 / 2;
    for j in 1..=k {
        corr -= &(bernoulli_over_factorial(prec, 2 * j) * deriv(2 * j - 1));
    }
    let em_bound = (bernoulli_over_factorial(prec, 2 * k + 2) * deriv(top)).abs() * 2;

    // ∫_N^∞ u^{-r} (u+y)^{-t} du = Σ_k C(−t,k) y^k N^{1−r−t−k} / (r+t−1+k)
    let ratio = y / &u;
    let base = u.pow(&(1 - r.clone() - t));
    let alpha = r + t - 1;
    let tf = t.to_f64().abs();
    let fine = ctx.target() / 1000;
    let mut integral = Real::zero(prec);
    let mut c = ctx.one();
    let mut rk = ctx.one();
    let mut j = 0usize;
    let int_bound = loop {
        let term = &c * &rk * &base / &(&alpha + j as i32);
        integral += &term;
        if c.is_zero() {
            break ctx.zero();
        }
        if term.abs() <= fine && j as f64 > tf + 1.0 {
            break term.abs() * 2;
        }
        if j >= ctx.max_terms() {
            break term.abs() * 4;
        }
        c = c * &(-t.clone() - j as i32) / (j as i32 + 1);
        rk = rk * &ratio;
        j += 1;
    };
    Ok((integral + corr, em_bound + int_bound))
}
