//! Laurent data of Θ at its poles `t = 0` (for r = s = 1) and `t = 1 − r`
//! (for r = s), plus the sampling checks of those expansions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::budget::{Context, EvalOutcome};
use crate::error::{Error, Result};
use crate::herglotz::{digamma_shift_series, require_positive};
use crate::numeric::sum::finish;
use crate::numeric::zeta::riemann_zeta;
use crate::real::Real;

use super::reduce::{theta01_assembled, theta_rr_near_pole};
use super::LaurentExpansion;

fn require_order(op: &'static str, r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::domain(op, format!("r must be an integer >= 2, got {r}")));
    }
    Ok(())
}

fn zeta_int(ctx: &Context, n: u32) -> Result<Real> {
    Ok(riemann_zeta(&ctx.scaled(0.01), &ctx.int(i64::from(n)))?.value)
}

/// Θ(1, 1, t, x) = 2/t² + (2γ − ln x)/t + γ² − γ ln x − π²/6 + O(t).
pub fn theta11_laurent(ctx: &Context, x: &Real) -> Result<LaurentExpansion> {
    require_positive("theta11_laurent", "x", x)?;
    let g = ctx.euler_gamma();
    let lnx = x.with_prec(ctx.bits()).ln();
    let mut coeffs = BTreeMap::new();
    coeffs.insert(-2, ctx.int(2));
    coeffs.insert(-1, &g * 2 - &lnx);
    coeffs.insert(0, g.square() - &g * &lnx - ctx.pi().square() / 6);
    Ok(LaurentExpansion { variable: "t", center: ctx.zero(), coeffs, remainder_order: 1 })
}

/// Θ(r, r, t, x) around `t = 1 − r`: residue ζ(r)(1 + x^{r−1}) and constant
/// term x^{r−1}ζ(r)(γ − ln x) + γζ(r) + x^{r−1} Σ_{k=1}^{r−2} C(r−1, k) x^{−k} ζ(r−k) ζ(k+1).
pub fn theta_rr_laurent(ctx: &Context, r: u32, x: &Real) -> Result<LaurentExpansion> {
    require_order("theta_rr_laurent", r)?;
    require_positive("theta_rr_laurent", "x", x)?;
    let x = x.with_prec(ctx.bits());
    let g = ctx.euler_gamma();
    let zr = zeta_int(ctx, r)?;
    let xr = x.powi(r as i32 - 1);
    let mut mixed = ctx.zero();
    let mut binom = ctx.one();
    for k in 1..=r.saturating_sub(2) {
        binom = binom * (r - k) as i32 / k as i32;
        mixed += &(&binom * &x.powi(-(k as i32)) * &zeta_int(ctx, r - k)? * &zeta_int(ctx, k + 1)?);
    }
    let mut coeffs = BTreeMap::new();
    coeffs.insert(-1, &zr * &(1 + xr.clone()));
    coeffs.insert(0, &xr * &zr * &(&g - x.ln()) + &g * &zr + &xr * &mixed);
    Ok(LaurentExpansion { variable: "t", center: ctx.int(1 - i64::from(r)), coeffs, remainder_order: 1 })
}

/// Constant term of Θ(r, r, t, x) at `t = 1 − r`, assembled from ψ-series
/// alone:
/// −x^{r−1}ζ(r) ln x − Σ_m ψ(mx+1)/m^r + (−1)^r x^{r−1} Σ_m ψ(m/x+1)/m^r
/// + (1 + (−1)^r) x^{r−1} γζ(r) + Σ_{ℓ=1}^{r−2} ((−1)^{ℓ+1} + C(r−1, ℓ)) x^ℓ ζ(ℓ+1) ζ(r−ℓ).
pub fn klf_constant_series(ctx: &Context, r: u32, x: &Real) -> Result<EvalOutcome> {
    require_order("klf_constant_series", r)?;
    require_positive("klf_constant_series", "x", x)?;
    let x = x.with_prec(ctx.bits());
    let g = ctx.euler_gamma();
    let zr = zeta_int(ctx, r)?;
    let xr = x.powi(r as i32 - 1);
    let even = r % 2 == 0;
    let sub = ctx.scaled(0.25);
    let d = digamma_shift_series(&sub, r, &x)?;
    let d_inv = digamma_shift_series(&sub.with_target(sub.target() / xr.clone().max(ctx.one())), r, &x.recip())?;

    let mut value = -(&xr * &zr * x.ln()) - &d.value;
    let inv_term = &xr * &d_inv.value;
    if even {
        value += &inv_term;
        value += &(&xr * &g * &zr * 2);
    } else {
        value -= &inv_term;
    }
    let mut binom = ctx.one();
    for l in 1..r.saturating_sub(1) {
        binom = binom * (r - l) as i32 / l as i32;
        let sign = if l % 2 == 1 { 1 } else { -1 };
        let c = (&binom + sign) * &x.powi(l as i32);
        value += &(c * zeta_int(ctx, l + 1)? * zeta_int(ctx, r - l)?);
    }
    let err = d.err_bound + d_inv.err_bound * &xr;
    finish(ctx, "klf_constant_series", value, err, d.terms_used + d_inv.terms_used)
}

/// Samples `g(ε)` at offsets `ε` with residuals `g(ε) − limit`, the fitted
/// log-log slope of |residual| against ε, and the linear extrapolation of
/// `g` to `ε = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct RichardsonFit {
    pub eps: Vec<f64>,
    pub samples: Vec<f64>,
    pub residuals: Vec<f64>,
    pub slope: f64,
    pub extrapolated: f64,
}

/// Least-squares slope of `ln|y|` against `ln x`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.abs().ln())).collect();
    linear_fit(&pts).0
}

/// `(slope, intercept)` of the least-squares line.
fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn fit(eps: &[f64], samples: Vec<f64>, limit: f64) -> Result<RichardsonFit> {
    if eps.len() < 2 {
        return Err(Error::InvalidArgument("need at least two offsets".into()));
    }
    let residuals: Vec<f64> = samples.iter().map(|g| g - limit).collect();
    let slope = fit_slope(eps, &residuals);
    let pts: Vec<(f64, f64)> = eps.iter().copied().zip(samples.iter().copied()).collect();
    let extrapolated = linear_fit(&pts).1;
    Ok(RichardsonFit { eps: eps.to_vec(), samples, residuals, slope, extrapolated })
}

/// `ε · Θ(r, r, 1−r+ε, x)` against the residue ζ(r)(1 + x^{r−1}).
pub fn residue_samples(ctx: &Context, r: u32, x: &Real, eps: &[f64]) -> Result<RichardsonFit> {
    let lau = theta_rr_laurent(ctx, r, x)?;
    let residue = lau.coeff(-1).expect("residue present").to_f64();
    let mut samples = Vec::with_capacity(eps.len());
    for &e in eps {
        let e_r = ctx.real(e);
        let th = theta_rr_near_pole(ctx, r, &(&lau.center + &e_r), x)?;
        samples.push((th.value * &e_r).to_f64());
    }
    fit(eps, samples, residue)
}

/// Θ(1, 1, ε, x) minus its principal part, against the constant term; the
/// residual is expected to shrink linearly in ε.
pub fn theta11_samples(ctx: &Context, x: &Real, eps: &[f64]) -> Result<RichardsonFit> {
    let lau = theta11_laurent(ctx, x)?;
    let c0 = lau.coeff(0).expect("constant present").to_f64();
    let mut samples = Vec::with_capacity(eps.len());
    for &e in eps {
        let e_r = ctx.real(e);
        let th = theta01_assembled(ctx, &e_r, x)?;
        let principal = &lau.coeffs[&-2] / &e_r.square() + &lau.coeffs[&-1] / &e_r;
        samples.push((th.value - principal).to_f64());
    }
    fit(eps, samples, c0)
}
