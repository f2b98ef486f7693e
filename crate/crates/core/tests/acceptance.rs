//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use hzmt_core::herglotz::{f1_constant, herglotz_f, higher_herglotz_f, phi, double_zeta};
use hzmt_core::numeric::{digamma, dilog, hurwitz_zeta, riemann_zeta};
use hzmt_core::verifier::{
    run_identities, verify_decomposition, verify_klf11, verify_klf_rr, CheckResult, GridSpec, IdentityId, TolPolicy,
};
use hzmt_core::{Context, Real};

struct Outcome {
    pass: bool,
    detail: String,
}

fn worst(results: &[CheckResult]) -> String {
    let max = results.iter().map(|r| r.abs_residual.to_f64()).fold(0.0, f64::max);
    let fails = results.iter().filter(|r| !r.pass).count();
    format!("{} checks, {fails} failed, max |residual| {max:.2e}", results.len())
}

fn suite(ctx: &Context, grid: &GridSpec, ids: &[IdentityId], tol: f64) -> (bool, Vec<CheckResult>) {
    let policy = TolPolicy::with_tol(ctx, ctx.real(tol));
    let rep = run_identities(ctx, grid, &policy, ids).expect("valid grid");
    let ok = rep.results.iter().all(|r| r.pass && r.abs_residual.to_f64() <= tol.max(r.tol.to_f64()));
    (ok, rep.results)
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let el = start.elapsed();
    if let Some(l) = limit {
        if el > l {
            out.pass = false;
        }
        out.detail = format!("{} [{:.2}s, limit {}s]", out.detail, el.as_secs_f64(), l.as_secs());
    } else {
        out.detail = format!("{} [{:.2}s]", out.detail, el.as_secs_f64());
    }
    out
}

// f64 oracles written independently of the library

fn psi_f64(mut y: f64) -> f64 {
    let mut acc = 0.0;
    while y < 20.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let i2 = 1.0 / (y * y);
    acc + y.ln() - 0.5 / y
        - i2 * (1.0 / 12.0 - i2 * (1.0 / 120.0 - i2 * (1.0 / 252.0 - i2 * (1.0 / 240.0 - i2 / 132.0))))
}

fn trigamma_f64(mut y: f64) -> f64 {
    let mut acc = 0.0;
    while y < 20.0 {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    let i = 1.0 / y;
    let i2 = i * i;
    acc + i + i2 / 2.0 + i * i2 * (1.0 / 6.0 - i2 * (1.0 / 30.0 - i2 * (1.0 / 42.0 - i2 / 30.0)))
}

/// Neumaier-compensated f64 sum.
#[derive(Default)]
struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.c += (self.s - t) + v;
        } else {
            self.c += (v - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

const BRUTE_N: usize = 100_000;

/// F(x) by partial sum plus the integral of the tail's leading terms.
fn brute_f(x: f64) -> f64 {
    let mut k = Kahan::default();
    for n in 1..=BRUTE_N {
        let y = n as f64 * x;
        k.add((psi_f64(y) - y.ln()) / n as f64);
    }
    let a = BRUTE_N as f64 + 0.5;
    k.value() - 1.0 / (2.0 * x * a) - 1.0 / (24.0 * x * x * a * a)
}

/// F_r(x) likewise; tail from ψ(y) ≈ ln y − 1/(2y).
fn brute_fr(r: i32, x: f64) -> f64 {
    let mut k = Kahan::default();
    for n in 1..=BRUTE_N {
        let nf = n as f64;
        k.add(psi_f64(nf * x) / nf.powi(r));
    }
    let a = BRUTE_N as f64 + 0.5;
    let rm = f64::from(r - 1);
    let log_part = a.powf(-rm) * ((a * x).ln() / rm + 1.0 / (rm * rm));
    k.value() + log_part - a.powi(-r) / (2.0 * x * f64::from(r))
}

/// Φ(2, x) = Σ (ψ′(nx) − 1/(nx))/n.
fn brute_phi2(x: f64) -> f64 {
    let mut k = Kahan::default();
    for n in 1..=BRUTE_N {
        let y = n as f64 * x;
        k.add((trigamma_f64(y) - 1.0 / y) / n as f64);
    }
    let a = BRUTE_N as f64 + 0.5;
    k.value() + 1.0 / (4.0 * x * x * a * a) + 1.0 / (18.0 * x.powi(3) * a.powi(3))
}

/// ζ_D(2, 1) = Σ_{m>=2} H_{m−1}/m² by partial sum plus asymptotic tail.
fn brute_double_zeta_21() -> f64 {
    let m_max = 2_000_000usize;
    let mut k = Kahan::default();
    let mut h = 0.0;
    for m in 2..=m_max {
        h += 1.0 / (m - 1) as f64;
        k.add(h / (m as f64 * m as f64));
    }
    // Σ_{m>M} H_{m−1}/m² with H_{m−1} ≈ ln m + γ − 1/(2m): ≈ ∫_{M+½}^∞ (ln u + γ)/u² du
    let a = m_max as f64 + 0.5;
    let gamma = 0.5772156649015329;
    k.value() + (a.ln() + 1.0 + gamma) / a
}

fn criterion_1() -> Outcome {
    let ctx = Context::with_digits(30).unwrap();
    let f = herglotz_f(&ctx, &ctx.one()).unwrap();
    let k = f1_constant(&ctx).unwrap();
    let d = (f.value - k).abs().to_f64();
    Outcome { pass: d <= 1e-9, detail: format!("|F(1) − closed form| = {d:.2e}") }
}

fn criterion_grid(ids: &[IdentityId], grid: GridSpec) -> Outcome {
    let ctx = Context::default();
    let (ok, res) = suite(&ctx, &grid, ids, 1e-9);
    Outcome { pass: ok, detail: worst(&res) }
}

fn criterion_4() -> Outcome {
    let ctx = Context::default();
    let g2 = GridSpec { r_values: vec![2, 3, 4, 5, 6], ..GridSpec::default() };
    let g3 = GridSpec { r_values: vec![2, 3, 4, 5], ..GridSpec::default() };
    let (ok2, r2) = suite(&ctx, &g2, &[IdentityId::Vz2], 1e-9);
    let (ok3, r3) = suite(&ctx, &g3, &[IdentityId::Vz3], 1e-9);
    Outcome { pass: ok2 && ok3, detail: format!("vz2: {}; vz3: {}", worst(&r2), worst(&r3)) }
}

fn criterion_5() -> Outcome {
    let ctx = Context::default();
    let tol = TolPolicy::default_for(&ctx);
    let eps = [1e-2, 5e-3, 2.5e-3];
    let mut results = Vec::new();
    for r in 2..=6 {
        for x in [0.4, 1.0, 2.5] {
            match verify_klf_rr(&ctx, r, x, &eps, &tol) {
                Ok(c) => results.push(c),
                Err(e) => return Outcome { pass: false, detail: format!("r={r} x={x}: {e}") },
            }
        }
    }
    let ok = results.iter().all(|c| c.pass && c.abs_residual.to_f64() <= 1e-9);
    let slopes: Vec<f64> = results.iter().map(|c| c.diagnostics["slope"].parse().unwrap()).collect();
    let (lo, hi) = slopes.iter().fold((f64::MAX, f64::MIN), |(a, b), s| (a.min(*s), b.max(*s)));
    Outcome { pass: ok, detail: format!("{}; residue slopes in [{lo:.3}, {hi:.3}]", worst(&results)) }
}

fn criterion_6() -> Outcome {
    let ctx = Context::default();
    let tol = TolPolicy::default_for(&ctx);
    let eps = [1e-2, 5e-3, 2.5e-3];
    let mut parts = Vec::new();
    let mut ok = true;
    for x in [0.5, 1.0, 2.0] {
        match verify_klf11(&ctx, x, &eps, &tol) {
            Ok(c) => {
                ok &= c.pass;
                let c_eff = c.abs_residual.to_f64() / 2.5e-3;
                parts.push(format!("x={x}: slope {} C≈{c_eff:.3}", c.diagnostics["slope"]));
            }
            Err(e) => return Outcome { pass: false, detail: format!("x={x}: {e}") },
        }
    }
    Outcome { pass: ok, detail: parts.join(", ") }
}

fn criterion_9() -> Outcome {
    let ctx = Context::default();
    let grid = GridSpec { x_values: vec![0.5, 1.0, 2.0, 3.7], ..GridSpec::default() };
    let ids = [IdentityId::Split, IdentityId::Inversion, IdentityId::Recursion, IdentityId::Decomposition];
    let (ok, res) = suite(&ctx, &grid, &ids, 1e-7);
    let tol = TolPolicy::default_for(&ctx);
    let oracle = verify_decomposition(&ctx, 2.2, 1.5, true, &tol);
    let (oracle_ok, od) = match oracle {
        Ok(c) => (c.abs_residual.to_f64() <= 1e-5, c.abs_residual.to_f64()),
        Err(_) => (false, f64::NAN),
    };
    let by = |id: IdentityId| res.iter().filter(|r| r.id == id).count();
    Outcome {
        pass: ok && oracle_ok,
        detail: format!(
            "{} (split {}, inversion {}, recursion {}, decomposition {}); direct-oracle decomposition {od:.2e}",
            worst(&res),
            by(IdentityId::Split),
            by(IdentityId::Inversion),
            by(IdentityId::Recursion),
            by(IdentityId::Decomposition)
        ),
    }
}

fn criterion_10() -> Outcome {
    let ctx = Context::default();
    let mut notes = Vec::new();
    let mut ok = true;

    let zd = double_zeta(&ctx, &ctx.int(2), &ctx.one()).unwrap().value.to_f64();
    let d = (zd - brute_double_zeta_21()).abs();
    ok &= d <= 1e-8;
    notes.push(format!("ζ_D(2,1) vs brute {d:.1e}"));

    let grid = GridSpec::default();
    let (sok, sres) = suite(&ctx, &grid, &[IdentityId::Stuffle], 1e-10);
    ok &= sok;
    notes.push(format!("stuffle {}", worst(&sres)));

    let xs = [0.5, 1.0, 1.5, 2.0, 3.0];
    // the f64 partial sums carry ~1e-11 of rounding and tail error
    let oracle_err = 1e-9;
    let mut max_f: f64 = 0.0;
    let mut max_fr: f64 = 0.0;
    let mut max_phi: f64 = 0.0;
    for x in xs {
        let xr = ctx.real(x);
        max_f = max_f.max((herglotz_f(&ctx, &xr).unwrap().value.to_f64() - brute_f(x)).abs());
        for r in [2, 3] {
            let v = higher_herglotz_f(&ctx, r, &xr).unwrap().value.to_f64();
            max_fr = max_fr.max((v - brute_fr(r as i32, x)).abs());
        }
        max_phi = max_phi.max((phi(&ctx, &ctx.int(2), &xr).unwrap().value.to_f64() - brute_phi2(x)).abs());
    }
    ok &= max_f <= oracle_err && max_fr <= oracle_err && max_phi <= oracle_err;
    notes.push(format!("F {max_f:.1e}, F_r {max_fr:.1e}, Φ {max_phi:.1e} vs brute (bound {oracle_err:.0e})"));
    Outcome { pass: ok, detail: notes.join("; ") }
}

fn criterion_11() -> Outcome {
    let ctx = Context::with_digits(30).unwrap();
    let z2_closed = ctx.pi().square() / 6;
    let d1 = (digamma(&ctx, &ctx.one()).unwrap().value + ctx.euler_gamma()).abs();
    let z2 = riemann_zeta(&ctx, &ctx.int(2)).unwrap().value;
    let d2 = (&z2 - &z2_closed).abs();
    let d3 = (dilog(&ctx, &ctx.one()).unwrap().value - &z2).abs();
    let (s, a) = (ctx.real(2.5), ctx.real(0.3));
    let h0 = hurwitz_zeta(&ctx, &s, &a).unwrap().value;
    let h1 = hurwitz_zeta(&ctx, &s, &(&a + 1)).unwrap().value;
    let d4 = (h0 - h1 - a.pow(&-s.clone())).abs();
    let worst = [d1, d2, d3, d4].into_iter().map(|d: Real| d.to_f64()).fold(0.0, f64::max);
    Outcome { pass: worst <= 1e-12, detail: format!("max deviation {worst:.1e}") }
}

fn main() {
    let x_grid = GridSpec::default;
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("F(1) closed form", Box::new(|| timed(Some(Duration::from_secs(1)), criterion_1))),
        ("FE2 over x-grid", Box::new(move || timed(Some(Duration::from_secs(5)), || criterion_grid(&[IdentityId::Fe2], x_grid())))),
        ("FE1 over x-grid", Box::new(move || timed(None, || criterion_grid(&[IdentityId::Fe1], x_grid())))),
        ("VZ2 / VZ3", Box::new(|| timed(Some(Duration::from_secs(60)), criterion_4))),
        ("Constant term of Θ(r,r,t,x) at t=1−r and residue slope", Box::new(|| timed(None, criterion_5))),
        ("Θ(1,1,t,x) principal part at t=0", Box::new(|| timed(None, criterion_6))),
        (
            "Guinand (derivative and first form)",
            Box::new(move || timed(None, || criterion_grid(&[IdentityId::GuinandDeriv, IdentityId::GuinandFirst], x_grid()))),
        ),
        ("Ramanujan first equality", Box::new(move || timed(None, || criterion_grid(&[IdentityId::RamanujanFirst], x_grid())))),
        ("Structural identities of Θ", Box::new(|| timed(Some(Duration::from_secs(120)), criterion_9))),
        ("Oracle equivalences", Box::new(|| timed(None, criterion_10))),
        ("Unit constants", Box::new(|| timed(None, criterion_11))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        if !out.pass {
            failed += 1;
        }
        println!("criterion {:>2} {}: {} -- {}", i + 1, if out.pass { "PASS" } else { "FAIL" }, name, out.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
