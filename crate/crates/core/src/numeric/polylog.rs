//! Polylogarithm on (0, 1].

use crate::budget::{Context, EvalOutcome};
use crate::error::{Error, Result};
use crate::real::Real;

use super::bernoulli::{harmonic, zeta_nonpositive_integer, MAX_BERNOULLI_INDEX};
use super::sum::{bound, finish, Accumulator};
use super::zeta::riemann_zeta;

/// Below this `y = −ln z` the expansion around `z = 1` is used.
const Y_SWITCH: f64 = 0.5;

/// `Σ_{u>=1} q^u / u^r` for `0 < q < 1`, with a geometric tail bound.
fn direct_series(ctx: &Context, what: &'static str, r: u32, q: &Real) -> Result<EvalOutcome> {
    let mut acc = Accumulator::new(ctx.bits());
    let mut qu = q.clone();
    let tail_factor = (1 - q.clone()).recip();
    let quarter = ctx.target() / 4;
    let mut u = 1usize;
    let err = loop {
        let term = &qu / &ctx.int(u as i64).powi(r as i32);
        acc.add(&term);
        qu = qu * q;
        let next = &qu / &ctx.int(u as i64 + 1).powi(r as i32);
        let tail = next * &tail_factor;
        if tail <= quarter || u >= ctx.max_terms() {
            break tail;
        }
        u += 1;
    };
    let err = err + bound(ctx, acc.rounding_bound());
    finish(ctx, what, acc.value(), err, u)
}

/// Li_r(z) for integer `r >= 1` and `0 < z <= 1`, excluding the divergent
/// `(r, z) = (1, 1)`.
pub fn polylog(ctx: &Context, r: u32, z: &Real) -> Result<EvalOutcome> {
    if r == 0 {
        return Err(Error::domain("polylog", "order must be at least 1"));
    }
    if !(z > &0.0) || z > &1.0 {
        return Err(Error::domain("polylog", format!("argument must lie in (0, 1], got {z}")));
    }
    let z = z.with_prec(ctx.bits());
    if r == 1 {
        if z == 1.0 {
            return Err(Error::pole("polylog", "r = 1, z = 1"));
        }
        return Ok(EvalOutcome::exact(-(-z).ln_1p()));
    }
    if z == 1.0 {
        return riemann_zeta(ctx, &ctx.int(i64::from(r)));
    }
    let y = -z.ln();
    if y >= Y_SWITCH {
        direct_series(ctx, "polylog", r, &z)
    } else {
        polylog_exp(ctx, r, &y)
    }
}

/// Li_r(e^{−y}) for integer `r >= 2`, `y > 0`.
///
/// For small `y` uses the expansion
/// `(−y)^{r−1}/(r−1)! (H_{r−1} − ln y) + Σ_{k≠r−1} ζ(r−k) (−y)^k / k!`.
pub fn polylog_exp(ctx: &Context, r: u32, y: &Real) -> Result<EvalOutcome> {
    if r < 2 {
        return Err(Error::domain("polylog_exp", format!("order must be at least 2, got {r}")));
    }
    if !(y > &0.0) {
        return Err(Error::domain("polylog_exp", format!("y must be positive, got {y}")));
    }
    let y = y.with_prec(ctx.bits());
    if y >= Y_SWITCH {
        return direct_series(ctx, "polylog_exp", r, &(-y).exp());
    }
    match expansion(ctx, r, &y)? {
        Some(out) => Ok(out),
        None => direct_series(ctx, "polylog_exp", r, &(-y).exp()),
    }
}

/// The small-`y` expansion, or `None` when its truncation would need
/// Bernoulli numbers beyond the table.
fn expansion(ctx: &Context, r: u32, y: &Real) -> Result<Option<EvalOutcome>> {
    let prec = ctx.bits();
    let r = r as usize;
    let neg_y = -y.clone();
    let quarter = ctx.target() / 4;
    let ratio = (y / (ctx.pi() * 2)).to_f64();
    let zeta2 = ctx.pi().square() / 6;

    let mut acc = Accumulator::new(prec);
    // k < r: ζ(r−k) with r−k >= 1; k = r−1 is the logarithmic term
    let mut pow = ctx.one(); // (−y)^k / k!
    for k in 0..r {
        if k == r - 1 {
            let h = harmonic(ctx, (r - 1) as u64);
            acc.add(&(&pow * &(h - y.ln())));
        } else {
            let sub = ctx.with_target(&quarter / (r as f64));
            let z = riemann_zeta(&sub, &ctx.int((r - k) as i64))?;
            acc.add(&(&pow * &z.value));
        }
        pow = pow * &neg_y / (k as i32 + 1);
    }
    // k >= r: ζ(r−k) = ζ(−m) with m = k−r >= 0, exact rationals
    let mut k = r;
    let mut fact_m = ctx.one(); // (k−r)!
    let err = loop {
        let m = k - r;
        if m + 1 > MAX_BERNOULLI_INDEX {
            return Ok(None);
        }
        acc.add(&(&pow * &zeta_nonpositive_integer(prec, m)?));
        pow = pow * &neg_y / (k as i32 + 1);
        fact_m = fact_m * (m as i32 + 1);
        k += 1;
        // |ζ(r−k)| ≤ 2ζ(2)(k−r)!/(2π)^{k−r+1}; successive bounds shrink by y/2π
        let next = (&zeta2 * 2) * &fact_m / (ctx.pi() * 2).powi((k - r + 1) as i32) * pow.abs();
        let tail = next / (1.0 - ratio);
        if tail <= quarter {
            break tail;
        }
        if k - r >= ctx.max_terms() {
            break tail;
        }
    };
    let err = err + bound(ctx, acc.rounding_bound());
    Ok(Some(finish(ctx, "polylog_exp", acc.value(), err, k)?))
}

/// Li₂(z) for `0 <= z <= 1`.
pub fn dilog(ctx: &Context, z: &Real) -> Result<EvalOutcome> {
    if z < &0.0 || z > &1.0 {
        return Err(Error::domain("dilog", format!("argument must lie in [0, 1], got {z}")));
    }
    if z.is_zero() {
        return Ok(EvalOutcome::exact(ctx.zero()));
    }
    polylog(ctx, 2, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let c = Context::default();
        let l1 = polylog(&c, 1, &c.real(0.5)).unwrap().value;
        assert!((l1 - Real::ln2(c.bits())).abs() < 1e-30);
        let half = c.real(0.5);
        let l2 = polylog(&c, 2, &half).unwrap();
        let expect = c.pi().square() / 12 - Real::ln2(c.bits()).square() / 2;
        assert!((l2.value - &expect).abs() < 1e-30);
        let d = dilog(&c, &half).unwrap().value;
        assert!((d - expect).abs() < 1e-30);
        for r in [2, 3] {
            let v = polylog(&c, r, &c.one()).unwrap().value;
            let z = riemann_zeta(&c, &c.int(r as i64)).unwrap().value;
            assert!((v - z).abs() < 1e-30);
        }
        assert!(dilog(&c, &c.zero()).unwrap().value.is_zero());
        let d1 = dilog(&c, &c.one()).unwrap().value;
        assert!((d1 - c.pi().square() / 6).abs() < 1e-30);
    }

    #[test]
    fn branches_agree() {
        let c = Context::default();
        for r in [2u32, 3, 5] {
            for y in [0.05, 0.3, 0.5, 0.8, 1.0] {
                let y = c.real(y);
                let a = expansion(&c, r, &y).unwrap().unwrap();
                let b = direct_series(&c, "t", r, &(-y.clone()).exp()).unwrap();
                assert!((a.value.clone() - b.value).abs() < 1e-29, "r={r} y={y}");
                let via = polylog(&c, r, &(-y.clone()).exp()).unwrap().value;
                assert!((via - a.value).abs() < 1e-29);
            }
        }
    }

    #[test]
    fn large_y_and_known_value() {
        let c = Context::default();
        let v = polylog_exp(&c, 3, &c.int(20)).unwrap().value;
        let q = (-c.int(20)).exp();
        let two_term = q.clone() + q.square() / 8;
        assert!(((v - &two_term) / two_term).abs() < 1e-17);
        let v = polylog_exp(&c, 2, &c.real(0.1)).unwrap().value;
        let expect = c.parse("1.31218944574334502317536657122").unwrap();
        assert!((v - expect).abs() < 1e-28);
    }

    #[test]
    fn domain_errors() {
        let c = Context::default();
        assert!(polylog(&c, 1, &c.one()).is_err());
        assert!(polylog(&c, 2, &c.real(1.5)).is_err());
        assert!(polylog(&c, 2, &c.zero()).is_err());
        assert!(polylog_exp(&c, 1, &c.one()).is_err());
        assert!(polylog_exp(&c, 2, &c.zero()).is_err());
        assert!(dilog(&c, &c.real(-0.1)).is_err());
    }
}
