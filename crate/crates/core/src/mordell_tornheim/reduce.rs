//! Single-sum reductions of Θ and the structural right-hand sides.

use crate::budget::{Context, EvalOutcome};
use crate::error::{Error, Result};
use crate::herglotz::{phi, require_positive};
use crate::numeric::series::{sum_with_expansion, Expansion};
use crate::numeric::sum::{finish, log10};
use crate::numeric::zeta::{hurwitz_zeta_reg, riemann_zeta, riemann_zeta_prime};
use crate::real::Real;

use super::direct::{theta_direct, DIRECT_MARGIN};
use super::ThetaPoint;

/// Which part of a function with a simple pole in `w` at `w = 1` to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolePart {
    /// The function itself (undefined at the pole).
    Full,
    /// The function minus its principal part `ζ(r)/(w−1)`; finite at `w = 1`.
    Regular,
}

/// Lowest `w` accepted by the single-sum reductions.
const W_FLOOR: f64 = 0.5;

fn sum_combination(ctx: &Context, what: &'static str, parts: &[(Real, EvalOutcome)]) -> Result<EvalOutcome> {
    let mut value = ctx.zero();
    let mut err = ctx.zero();
    let mut used = 0;
    for (c, o) in parts {
        value += &(c * &o.value);
        err += &(c.abs() * &o.err_bound);
        used += o.terms_used;
    }
    finish(ctx, what, value, err, used)
}

/// Θ at `p` by whichever evaluator applies: the direct double sum inside the
/// region with margin, or a single-sum reduction on the `r = 0` / `s = 0`
/// faces.
pub fn theta(ctx: &Context, p: &ThetaPoint) -> Result<EvalOutcome> {
    if p.region_margin() >= DIRECT_MARGIN {
        return theta_direct(ctx, p);
    }
    let r_int = p.r.to_integer();
    let s_int = p.s.to_integer();
    if p.r.is_zero() && s_int.is_some_and(|k| k >= 2) {
        return theta_0r(ctx, &p.t, s_int.unwrap() as u32, &p.x, PolePart::Full);
    }
    if p.s.is_zero() && r_int.is_some_and(|k| k >= 2) {
        let inner = theta_0r(ctx, &p.t, r_int.unwrap() as u32, &p.x.recip(), PolePart::Full)?;
        let f = p.x.with_prec(ctx.bits()).pow(&-p.t.with_prec(ctx.bits()));
        return sum_combination(ctx, "theta", &[(f, inner)]);
    }
    if r_int == Some(1) && s_int == Some(1) && p.t > -1.0 && p.t != 0.0 {
        return theta01_assembled(ctx, &p.t, &p.x);
    }
    Err(Error::domain("theta", format!("no evaluator for ({}, {}, {}, {})", p.r, p.s, p.t, p.x)))
}

/// Θ(r−1, s, t+1, x) + x Θ(r, s−1, t+1, x).
pub fn theta_split_rhs(ctx: &Context, p: &ThetaPoint) -> Result<EvalOutcome> {
    theta_recursion_rhs(ctx, 1, p)
}

/// Σ_{ℓ=0}^{n} C(n, ℓ) x^ℓ Θ(r−n+ℓ, s−ℓ, t+n, x).
pub fn theta_recursion_rhs(ctx: &Context, n: u32, p: &ThetaPoint) -> Result<EvalOutcome> {
    let share = ctx.scaled(1.0 / f64::from(n + 1) / f64::from(1u32 << n.min(20)));
    let x = p.x.with_prec(ctx.bits());
    let mut parts = Vec::with_capacity(n as usize + 1);
    let mut binom = ctx.one();
    let n_i = n as i32;
    for l in 0..=n_i {
        let child = p.shifted(l - n_i, -l, n_i);
        let c = &binom * &x.powi(l);
        let sub = share.with_target(share.target() / c.clone().max(ctx.one()));
        parts.push((c, theta(&sub, &child)?));
        binom = binom * (n_i - l) / (l + 1);
    }
    sum_combination(ctx, "theta_recursion_rhs", &parts)
}

/// Σ_{m>=1} m^{-p} [ζ(w, m x + 1) − (m x)^{1−w}/(w−1)]: each bracket decays
/// like −(m x)^{-w}/2, and is finite through `w = 1`.
fn shifted_hurwitz_series(ctx: &Context, what: &'static str, w: &Real, p: &Real, x: &Real) -> Result<EvalOutcome> {
    let e = Expansion::hurwitz(ctx, w, -0.5, false);
    let w = w.with_prec(ctx.bits());
    sum_with_expansion(ctx, what, p, x, &e, |c, y| {
        let reg = hurwitz_zeta_reg(c, &w, y)?;
        let value = reg.value - y.pow(&-w.clone());
        finish(c, what, value, reg.err_bound, reg.terms_used)
    })
}

/// `(x^{−ε} ζ(p+ε) − ζ(p))/ε` for `p > 1`, with its limit `ζ′(p) − ζ(p) ln x`
/// at `ε = 0`. Extra working digits absorb the cancellation for small `ε`.
fn pole_difference(ctx: &Context, p: &Real, eps: &Real, x: &Real) -> Result<EvalOutcome> {
    let lnx = x.with_prec(ctx.bits()).ln();
    let sub = ctx.scaled(0.25);
    if eps.is_zero() {
        let z = riemann_zeta(&sub, p)?;
        let dz = riemann_zeta_prime(&sub, p)?;
        let value = &dz.value - &z.value * &lnx;
        let err = dz.err_bound + z.err_bound * lnx.abs();
        return finish(ctx, "theta_0r", value, err, z.terms_used + dz.terms_used);
    }
    let extra = (-log10(eps)).max(0.0).ceil() as u32 + 3;
    let wide = ctx.with_extra_digits(extra)?;
    let eps_w = eps.with_prec(wide.bits());
    let sub = wide.with_target(wide.target() * &eps_w.abs() / 4);
    let p_w = p.with_prec(wide.bits());
    let lnx = x.with_prec(wide.bits()).ln();
    let a = riemann_zeta(&sub, &(&p_w + &eps_w))?;
    let b = riemann_zeta(&sub, &p_w)?;
    let value = ((-(&eps_w * &lnx)).exp() * &a.value - &b.value) / &eps_w;
    let err = (a.err_bound + b.err_bound) / eps_w.abs() * 2;
    let out = finish(&wide, "theta_0r", value, err, a.terms_used + b.terms_used)?;
    finish(ctx, "theta_0r", out.value.with_prec(ctx.bits()), out.err_bound.with_prec(ctx.bits()), out.terms_used)
}

/// Θ(0, r, w, x) = Σ_m ζ(w, m x + 1)/m^r for integer `r >= 2`, continued to
/// `w > 1/2`. The pole `ζ(r)/(w−1)` is handled in closed form;
/// [`PolePart::Regular`] returns the value with it removed, which at `w = 1`
/// is `−Σ_m ψ(m x + 1)/m^r`.
pub fn theta_0r(ctx: &Context, w: &Real, r: u32, x: &Real, part: PolePart) -> Result<EvalOutcome> {
    if r < 2 {
        return Err(Error::domain("theta_0r", format!("r must be an integer >= 2, got {r}")));
    }
    require_positive("theta_0r", "x", x)?;
    if !(w > &W_FLOOR) {
        return Err(Error::domain("theta_0r", format!("w must exceed {W_FLOOR}, got {w}")));
    }
    let is_pole = w == &1.0;
    if is_pole && part == PolePart::Full {
        return Err(Error::pole("theta_0r", "w = 1"));
    }
    let prec = ctx.bits();
    let w = w.with_prec(prec);
    let x = x.with_prec(prec);
    let r_real = ctx.int(i64::from(r));
    let sub = ctx.scaled(0.5);
    let series = shifted_hurwitz_series(&sub, "theta_0r", &w, &r_real, &x)?;
    // Σ_m m^{-r} (m x)^{1−w}/(w−1) = x^{1−w} ζ(r+w−1)/(w−1)
    let eps = &w - 1;
    let closed = match part {
        PolePart::Regular => pole_difference(&sub, &r_real, &eps, &x)?,
        PolePart::Full => {
            let z = riemann_zeta(&sub.with_target(sub.target() * &eps.abs()), &(&r_real + &eps))?;
            let f = x.pow(&-eps.clone()) / &eps;
            finish(&sub, "theta_0r", &f * &z.value, f.abs() * &z.err_bound, z.terms_used)?
        }
    };
    sum_combination(ctx, "theta_0r", &[(ctx.one(), series), (ctx.one(), closed)])
}

/// Θ(0, 1, w, x) continued to `w > 1/2`, `w != 1`:
/// Σ_m [ζ(w, m x + 1) − (m x)^{1−w}/(w−1)]/m + x^{1−w} ζ(w)/(w−1).
pub fn theta_01_reg(ctx: &Context, w: &Real, x: &Real) -> Result<EvalOutcome> {
    require_positive("theta_01_reg", "x", x)?;
    if !(w > &W_FLOOR) {
        return Err(Error::domain("theta_01_reg", format!("w must exceed {W_FLOOR}, got {w}")));
    }
    if w == &1.0 {
        return Err(Error::pole("theta_01_reg", "w = 1"));
    }
    let prec = ctx.bits();
    let w = w.with_prec(prec);
    let x = x.with_prec(prec);
    let sub = ctx.scaled(0.5);
    let series = shifted_hurwitz_series(&sub, "theta_01_reg", &w, &ctx.one(), &x)?;
    let eps = &w - 1;
    let z = riemann_zeta(&sub.with_target(sub.target() * &eps.abs()), &w)?;
    let f = x.pow(&-eps.clone()) / &eps;
    let closed = finish(&sub, "theta_01_reg", &f * &z.value, f.abs() * &z.err_bound, z.terms_used)?;
    sum_combination(ctx, "theta_01_reg", &[(ctx.one(), series), (ctx.one(), closed)])
}

/// Θ(1, 1, t, x) = Θ(0, 1, t+1, x) + x^{−t} Θ(0, 1, t+1, 1/x), built from split
/// and inversion only.
pub fn theta01_assembled(ctx: &Context, t: &Real, x: &Real) -> Result<EvalOutcome> {
    require_positive("theta11", "x", x)?;
    let w = t.with_prec(ctx.bits()) + 1;
    let x = x.with_prec(ctx.bits());
    let f = x.pow(&-t.with_prec(ctx.bits()));
    let sub = ctx.scaled(0.5);
    let a = theta_01_reg(&sub, &w, &x)?;
    let b = theta_01_reg(&sub.with_target(sub.target() / f.clone().max(ctx.one())), &w, &x.recip())?;
    sum_combination(ctx, "theta11", &[(ctx.one(), a), (f, b)])
}

/// Θ(1, 1, t, x) through the generalized Herglotz function, `z = t + 1`:
/// Φ(z, x) + x^{1−z} Φ(z, 1/x) + (1 + x^{1−z}) ζ(z)/(z−1) − (x + x^{−z}) ζ(z+1).
pub fn theta11_via_phi(ctx: &Context, t: &Real, x: &Real) -> Result<EvalOutcome> {
    require_positive("theta11_via_phi", "x", x)?;
    if !(t > &-1.0) {
        return Err(Error::domain("theta11_via_phi", format!("t must exceed −1, got {t}")));
    }
    if t.is_zero() {
        return Err(Error::pole("theta11_via_phi", "t = 0"));
    }
    let prec = ctx.bits();
    let t = t.with_prec(prec);
    let x = x.with_prec(prec);
    let z = &t + 1;
    let xt = x.pow(&-t.clone());
    let sub = ctx.scaled(0.2);
    let p1 = phi(&sub, &z, &x)?;
    let p2 = phi(&sub.with_target(sub.target() / xt.clone().max(ctx.one())), &z, &x.recip())?;
    let pole_w = (1 + xt.clone()) / &t;
    let z1 = riemann_zeta(&sub.with_target(sub.target() / pole_w.clone().abs().max(ctx.one())), &z)?;
    let z2 = riemann_zeta(&sub, &(&z + 1))?;
    let c2 = -(&x + x.pow(&-z.clone()));
    sum_combination(ctx, "theta11_via_phi", &[(ctx.one(), p1), (xt, p2), (pole_w, z1), (c2, z2)])
}

/// Θ(r, r, t, x) for `t` near the pole `1 − r`, through
/// Θ(0, r, t+r, x) + S(r, t) + x^{−t} Θ(0, r, t+r, 1/x) with
/// S(r, t) = (1 + (−1)^r) x^{r−1} Θ(r−1, 1, t+r, x)
///         + Σ_{ℓ=1}^{r−2} ((−1)^{ℓ+1} + C(r−1, ℓ)) x^ℓ Θ(ℓ+1, r−ℓ, t+r−1, x).
pub fn theta_rr_near_pole(ctx: &Context, r: u32, t: &Real, x: &Real) -> Result<EvalOutcome> {
    if r < 2 {
        return Err(Error::domain("theta_rr_near_pole", format!("r must be an integer >= 2, got {r}")));
    }
    require_positive("theta_rr_near_pole", "x", x)?;
    let prec = ctx.bits();
    let t = t.with_prec(prec);
    let x = x.with_prec(prec);
    let ri = r as i32;
    let eps = &t + (ri - 1);
    if eps.is_zero() {
        return Err(Error::pole("theta_rr_near_pole", format!("t = {}", 1 - ri)));
    }
    if !(eps.abs() < 0.5) {
        return Err(Error::domain("theta_rr_near_pole", format!("|t − (1−r)| must be below 0.5, got {eps}")));
    }
    let n_parts = f64::from(r + 2);
    let sub = ctx.scaled(1.0 / n_parts);
    let w = &t + ri;
    let xt = x.pow(&-t.clone());
    let mut parts = vec![
        (ctx.one(), theta_0r(&sub, &w, r, &x, PolePart::Full)?),
        (xt.clone(), theta_0r(&sub.with_target(sub.target() / xt.max(ctx.one())), &w, r, &x.recip(), PolePart::Full)?),
    ];
    let r_real = ctx.int(i64::from(r));
    if r % 2 == 0 {
        let c = x.powi(ri - 1) * 2;
        let p = ThetaPoint::new(&r_real - 1, ctx.one(), w.clone(), x.clone())?;
        let sub_c = sub.with_target(sub.target() / c.clone().max(ctx.one()));
        parts.push((c, theta_direct(&sub_c, &p)?));
    }
    let mut binom = ctx.int(i64::from(r) - 1); // C(r−1, ℓ) at ℓ = 1
    for l in 1..=(ri - 2) {
        let sign = if l % 2 == 1 { 1 } else { -1 };
        let c = (&binom + sign) * &x.powi(l);
        binom = binom * (ri - 1 - l) / (l + 1);
        if c.is_zero() {
            continue;
        }
        let p = ThetaPoint::new(ctx.int(i64::from(l) + 1), ctx.int(i64::from(ri - l)), &t + (ri - 1), x.clone())?;
        let sub_c = sub.with_target(sub.target() / c.clone().abs().max(ctx.one()));
        parts.push((c, theta_direct(&sub_c, &p)?));
    }
    sum_combination(ctx, "theta_rr_near_pole", &parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herglotz::digamma_shift_series;

    fn pt(c: &Context, r: f64, s: f64, t: f64, x: f64) -> ThetaPoint {
        ThetaPoint::from_f64(c, r, s, t, x).unwrap()
    }

    fn close(a: &EvalOutcome, b: &EvalOutcome, tol: f64) {
        let d = (&a.value - &b.value).abs();
        assert!(d < tol, "{} vs {} (diff {d})", a.value, b.value);
    }

    #[test]
    fn theta_0r_against_direct() {
        let c = Context::default();
        let a = theta_0r(&c, &c.int(3), 2, &c.one(), PolePart::Full).unwrap();
        let b = theta_direct(&c, &pt(&c, 0.0, 2.0, 3.0, 1.0)).unwrap();
        assert!(a.converged);
        close(&a, &b, 1e-27);
        // inversion: Θ(2, 0, w, x) = x^{−w} Θ(0, 2, w, 1/x) at (w, x) = (2.5, 2)
        let a = theta_0r(&c, &c.real(2.5), 2, &c.real(0.5), PolePart::Full).unwrap();
        let b = theta_direct(&c, &pt(&c, 2.0, 0.0, 2.5, 2.0)).unwrap();
        let scaled = a.value * c.real(2.0).pow(&c.real(-2.5));
        assert!((scaled - b.value).abs() < 1e-27);
    }

    #[test]
    fn theta_0r_regular_part_at_pole() {
        let c = Context::default();
        for x in [1.0, 0.4, 3.0] {
            let x = c.real(x);
            let reg = theta_0r(&c, &c.one(), 2, &x, PolePart::Regular).unwrap();
            let psi = digamma_shift_series(&c, 2, &x).unwrap();
            assert!((&reg.value + &psi.value).abs() < 1e-27);
            // continuity: the regular part near w = 1
            let near = theta_0r(&c, &c.real(1.0 + 1e-12), 2, &x, PolePart::Regular).unwrap();
            assert!((near.value - &reg.value).abs() < 1e-9);
        }
        assert!(theta_0r(&c, &c.one(), 2, &c.one(), PolePart::Full).is_err());
        assert!(theta_0r(&c, &c.real(0.4), 2, &c.one(), PolePart::Full).is_err());
        assert!(theta_0r(&c, &c.real(2.0), 1, &c.one(), PolePart::Full).is_err());
    }

    #[test]
    fn theta_01_against_direct() {
        let c = Context::default();
        let a = theta_01_reg(&c, &c.int(2), &c.one()).unwrap();
        let b = theta_direct(&c, &pt(&c, 0.0, 1.0, 2.0, 1.0)).unwrap();
        close(&a, &b, 1e-27);
        let a = theta01_assembled(&c, &c.real(1.2), &c.real(1.5)).unwrap();
        let b = theta_direct(&c, &pt(&c, 1.0, 1.0, 1.2, 1.5)).unwrap();
        close(&a, &b, 1e-27);
        assert!(theta_01_reg(&c, &c.one(), &c.one()).is_err());
    }

    #[test]
    fn theta11_routes_agree() {
        let c = Context::default();
        let a = theta11_via_phi(&c, &c.real(1.2), &c.real(1.5)).unwrap();
        let b = theta_direct(&c, &pt(&c, 1.0, 1.0, 1.2, 1.5)).unwrap();
        close(&a, &b, 1e-27);
        let a = theta11_via_phi(&c, &c.real(0.3), &c.real(2.0)).unwrap();
        let b = theta01_assembled(&c, &c.real(0.3), &c.real(2.0)).unwrap();
        close(&a, &b, 1e-26);
        assert!(theta11_via_phi(&c, &c.zero(), &c.one()).is_err());
        assert!(theta11_via_phi(&c, &c.real(-1.0), &c.one()).is_err());
    }

    #[test]
    fn split_and_recursion() {
        let c = Context::default();
        for (r, s, t, x) in [(2.0, 2.0, 1.0, 1.3), (2.0, 2.0, 1.0, 1.0), (1.0, 1.0, 1.5, 2.0)] {
            let p = pt(&c, r, s, t, x);
            let lhs = theta_direct(&c, &p).unwrap();
            close(&theta_split_rhs(&c, &p).unwrap(), &lhs, 1e-26);
        }
        let p = pt(&c, 2.0, 2.0, 1.0, 1.5);
        let lhs = theta_direct(&c, &p).unwrap();
        close(&theta_recursion_rhs(&c, 0, &p).unwrap(), &lhs, 1e-28);
        close(&theta_recursion_rhs(&c, 2, &p).unwrap(), &lhs, 1e-26);
    }

    #[test]
    fn near_pole_route_matches_direct_in_overlap() {
        let c = Context::default();
        for x in [0.7, 1.0, 2.0] {
            let a = theta_rr_near_pole(&c, 2, &c.real(-0.7), &c.real(x)).unwrap();
            let b = theta_direct(&c, &pt(&c, 2.0, 2.0, -0.7, x)).unwrap();
            close(&a, &b, 1e-25);
        }
        let a = theta_rr_near_pole(&c, 3, &c.real(-1.7), &c.real(1.3)).unwrap();
        let b = theta_direct(&c, &pt(&c, 3.0, 3.0, -1.7, 1.3)).unwrap();
        close(&a, &b, 1e-25);
        assert!(theta_rr_near_pole(&c, 2, &c.int(-1), &c.one()).is_err());
        assert!(theta_rr_near_pole(&c, 1, &c.real(0.1), &c.one()).is_err());
    }
}
