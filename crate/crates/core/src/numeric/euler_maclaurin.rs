//! Euler–Maclaurin tails for sums of `P(log u) · u^{-q}` and asymptotic
//! power-series tails of outer sums.

use crate::budget::Context;
use crate::error::Result;
use crate::real::Real;

use super::bernoulli::bernoulli_over_factorial;
use super::zeta::{hurwitz_zeta, hurwitz_zeta_deriv};

/// `f(u) = (Σ_j c_j · ln(u)^j) · u^{-q}`.
#[derive(Debug, Clone)]
pub(crate) struct LogPowerTerm {
    pub coeffs: Vec<Real>,
    pub q: Real,
}

impl LogPowerTerm {
    #[cfg(test)]
    pub fn power(q: Real) -> Self {
        let one = Real::one(q.prec());
        LogPowerTerm { coeffs: vec![one], q }
    }

    /// `ln(u)^j · u^{-q}` with unit coefficient.
    pub fn log_power(j: usize, q: Real) -> Self {
        let prec = q.prec();
        let mut coeffs = vec![Real::zero(prec); j + 1];
        coeffs[j] = Real::one(prec);
        LogPowerTerm { coeffs, q }
    }

    fn log_degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// The pieces of `Σ_{n>=0} f(b+n)`.
#[derive(Debug, Clone)]
pub(crate) struct EmTail {
    /// Regularized `∫_b^∞ f`, i.e. `-G(b)` for the antiderivative with
    /// `G(∞) = 0` (or `G = ln^{j+1}/(j+1)` when `q = 1`).
    pub integral: Real,
    /// `½ f(b) − Σ_{k=1}^{K} B_{2k}/(2k)! f^{(2k-1)}(b)`.
    pub corrections: Real,
    /// Magnitude of the first omitted correction.
    pub bound: Real,
}

impl EmTail {
    pub fn total(&self) -> Real {
        &self.integral + &self.corrections
    }
}

/// Euler–Maclaurin tail of `Σ_{n>=0} f(b+n)` with `k` Bernoulli pairs.
pub(crate) fn em_tail(f: &LogPowerTerm, b: &Real, k: usize) -> EmTail {
    let prec = b.prec().max(f.q.prec());
    let deg = f.log_degree();
    let ln_b = if deg > 0 || f.q == 1.0 { b.ln() } else { Real::zero(prec) };
    let eval_poly = |c: &[Real]| -> Real {
        // Horner in ln(b)
        let mut acc = Real::zero(prec);
        for cj in c.iter().rev() {
            acc = acc * &ln_b + cj;
        }
        acc
    };
    let b_pow = b.pow(&(-&f.q)); // b^{-q}
    let recip_b = b.recip();

    // Integral part.
    let q_minus_1 = &f.q - 1;
    let integral = if q_minus_1.is_zero() {
        // G_j = ln^{j+1}/(j+1); tail = -Σ c_j G_j(b)
        let mut acc = Real::zero(prec);
        let mut lp = ln_b.clone();
        for (j, cj) in f.coeffs.iter().enumerate() {
            acc -= &(cj * &lp) / (j as i32 + 1);
            lp = lp * &ln_b;
        }
        acc
    } else {
        // -G_j(b) = b^{1-q} Σ_{i=0}^{j} j!/(j-i)! ln^{j-i}(b) / (q-1)^{i+1}
        let b_pow_1 = &b_pow * b;
        let inv = q_minus_1.recip();
        let mut acc = Real::zero(prec);
        for (j, cj) in f.coeffs.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let mut inner = Real::zero(prec);
            let mut falling = Real::one(prec);
            let mut inv_pow = inv.clone();
            for i in 0..=j {
                inner += &(&falling * &inv_pow) * &ln_b.powi((j - i) as i32);
                falling = falling * (j - i) as i32;
                inv_pow = &inv_pow * &inv;
            }
            acc += cj * &inner;
        }
        acc * &b_pow_1
    };

    // Derivatives: f^{(d)}(u) = u^{-q-d} Σ_j c^{(d)}_j ln^j(u),
    // c^{(d+1)}_j = (j+1) c^{(d)}_{j+1} − (q+d) c^{(d)}_j.
    let mut coeffs = f.coeffs.clone();
    let mut scale = b_pow.clone(); // b^{-q-d}
    let mut corrections = (eval_poly(&coeffs) * &scale) / 2;
    let mut bound = Real::zero(prec);
    for d in 0..(2 * k + 1) {
        let qd = &f.q + d as i32;
        let mut next = Vec::with_capacity(coeffs.len());
        for j in 0..coeffs.len() {
            let mut c = -(&qd * &coeffs[j]);
            if j + 1 < coeffs.len() {
                c += &coeffs[j + 1] * (j as i32 + 1);
            }
            next.push(c);
        }
        coeffs = next;
        scale = scale * &recip_b;
        let order = d + 1; // derivative order now held in `coeffs`
        if order % 2 == 1 {
            let two_k = order + 1;
            let deriv = eval_poly(&coeffs) * &scale;
            let term = bernoulli_over_factorial(prec, two_k) * deriv;
            if two_k <= 2 * k {
                corrections -= &term;
            } else {
                bound = term.abs();
            }
        }
    }
    EmTail { integral, corrections, bound }
}

/// Rough `log10` of the first omitted Euler–Maclaurin correction for
/// `ln^j(u) u^{-q}` at base point `b`. Used only to pick cutoffs.
pub(crate) fn em_bound_log10(q: f64, log_degree: usize, b: f64, k: usize) -> f64 {
    let m = 2 * k + 1;
    // |B_{2k+2}|/(2k+2)! ≈ 2/(2π)^{2k+2}
    let mut lg = 2f64.log10() - (m as f64 + 1.0) * (2.0 * std::f64::consts::PI).log10();
    let mut rising = 0.0;
    for i in 0..m {
        let v = (q + i as f64).abs();
        if v == 0.0 {
            return f64::NEG_INFINITY;
        }
        rising += v.log10();
    }
    lg += rising;
    lg -= (q + m as f64) * b.log10();
    let lnb = b.ln().abs().max(1.0);
    lg += log_degree as f64 * (lnb + m as f64).log10();
    lg
}

/// Smallest `n` in `[lo, hi]` satisfying a monotone predicate, or `None`.
pub(crate) fn smallest_satisfying(lo: usize, hi: usize, pred: impl Fn(usize) -> bool) -> Option<usize> {
    if lo > hi {
        return None;
    }
    if pred(lo) {
        return Some(lo);
    }
    let mut bad = lo;
    let mut step = 1usize;
    let good = loop {
        let cand = bad.saturating_add(step).min(hi);
        if pred(cand) {
            break cand;
        }
        if cand == hi {
            return None;
        }
        bad = cand;
        step = step.saturating_mul(2);
    };
    let (mut lo, mut hi) = (bad, good);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// One term `c · (m x)^{-α}` (optionally times `ln(m x)`) of the large-argument
/// expansion of an outer summand.
#[derive(Debug, Clone)]
pub(crate) struct AsymTerm {
    pub coef: Real,
    pub alpha: Real,
    pub log: bool,
}

impl AsymTerm {
    pub fn new(coef: Real, alpha: Real) -> Self {
        AsymTerm { coef, alpha, log: false }
    }

    pub fn with_log(coef: Real, alpha: Real) -> Self {
        AsymTerm { coef, alpha, log: true }
    }
}

/// Value and error bound of an outer-sum tail.
#[derive(Debug, Clone)]
pub(crate) struct TailSum {
    pub value: Real,
    pub bound: Real,
}

/// `Σ_{m>M} m^{-p} Σ_j c_j (m x)^{-α_j} [ln(m x)]`, evaluated term by term as
/// `c_j x^{-α_j} ζ(p+α_j, M+1)` (log terms via `ln x · ζ − ζ'`).
///
/// `omitted` is the first omitted term of the expansion; its tail sum (in
/// absolute value) is charged to the bound.
pub(crate) fn asymptotic_tail(
    ctx: &Context,
    p: &Real,
    x: &Real,
    m: usize,
    terms: &[AsymTerm],
    omitted: Option<&AsymTerm>,
) -> Result<TailSum> {
    let prec = ctx.bits();
    let a = ctx.int(m as i64 + 1);
    let ln_x = x.ln();
    let n_terms = (terms.len() + 1) as f64;
    let mut value = Real::zero(prec);
    let mut bound = Real::zero(prec);
    let one_term = |t: &AsymTerm, abs_only: bool| -> Result<(Real, Real)> {
        if t.coef.is_zero() {
            return Ok((Real::zero(prec), Real::zero(prec)));
        }
        let scale = &t.coef * &x.pow(&(-&t.alpha));
        let s = p + &t.alpha;
        let sub_target = (ctx.target() / scale.abs()) / (4.0 * n_terms);
        let sub = ctx.with_target(sub_target.min(ctx.one()));
        let z = hurwitz_zeta(&sub, &s, &a)?;
        let mut v = &scale * &z.value;
        let mut e = scale.abs() * &z.err_bound;
        if t.log {
            let dz = hurwitz_zeta_deriv(&sub, &s, &a)?;
            v = &scale * &(&ln_x * &z.value - &dz.value);
            e = scale.abs() * &(ln_x.abs() * &z.err_bound + &dz.err_bound);
        }
        if abs_only {
            Ok((Real::zero(prec), v.abs() + e))
        } else {
            Ok((v, e))
        }
    };
    for t in terms {
        let (v, e) = one_term(t, false)?;
        value += &v;
        bound += &e;
    }
    if let Some(t) = omitted {
        let (_, e) = one_term(t, true)?;
        bound += &e;
    }
    Ok(TailSum { value, bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn em_tail_reproduces_zeta2_tail() {
        // Σ_{n>=10} 1/n^2 = ζ(2) − H_9^{(2)}
        let p = 128;
        let f = LogPowerTerm::power(Real::from_i64(p, 2));
        let t = em_tail(&f, &Real::from_i64(p, 10), 8);
        let mut partial = Real::zero(p);
        for n in 1..10 {
            partial += &(Real::one(p) / (n * n));
        }
        let zeta2 = Real::pi(p).square() / 6;
        let expected = zeta2 - partial;
        let err = (t.total() - &expected).abs();
        assert!(err <= t.bound.clone() * 2 + 1e-33, "err {err} bound {}", t.bound);
        assert!(t.bound < 1e-15);
    }

    #[test]
    fn em_tail_log_power_derivatives() {
        // f = ln(u)/u^3 ; compare corrections' first derivative pieces with
        // a finite-difference-free check: total tail vs brute force + tiny tail.
        let p = 160;
        let f = LogPowerTerm::log_power(1, Real::from_i64(p, 3));
        let b = Real::from_i64(p, 20);
        let t = em_tail(&f, &b, 8);
        let brute_to = 20000;
        let mut acc = Real::zero(p);
        for n in 20..brute_to {
            let u = Real::from_i64(p, n);
            acc += &(u.ln() / u.powi(3));
        }
        let rest = em_tail(&f, &Real::from_i64(p, brute_to), 8);
        let expected = acc + rest.total();
        let diff = (t.total() - expected).abs();
        assert!(diff <= t.bound.clone() * 2 + 1e-40, "{diff} vs {}", t.bound);
        assert!(t.bound < 1e-22);
    }

    #[test]
    fn smallest_satisfying_finds_threshold() {
        assert_eq!(smallest_satisfying(1, 1000, |n| n >= 137), Some(137));
        assert_eq!(smallest_satisfying(5, 1000, |_| true), Some(5));
        assert_eq!(smallest_satisfying(1, 100, |n| n > 200), None);
    }

    #[test]
    fn bound_estimate_is_monotone_in_b() {
        let a = em_bound_log10(2.0, 0, 10.0, 8);
        let b = em_bound_log10(2.0, 0, 20.0, 8);
        assert!(b < a);
    }
}
