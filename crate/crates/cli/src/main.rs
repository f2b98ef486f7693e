mod config;
mod functions;
mod output;

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use hzmt_core::mordell_tornheim::{
    klf_constant_series, residue_samples, theta11_laurent, theta11_samples, theta_rr_laurent, LaurentExpansion,
    RichardsonFit,
};
use hzmt_core::verifier::{
    run_identities, verify_decomposition, verify_fe1, verify_fe2, verify_guinand_deriv, verify_guinand_first,
    verify_klf11, verify_klf_rr, verify_ramanujan_first, verify_vz2, verify_vz3, CheckResult, Counts, IdentityId,
    RenderedCheck, TolPolicy,
};
use hzmt_core::{Context, Real};
use indexmap::IndexMap;
use serde::Serialize;

use config::{Config, GlobalOpts};
use functions::Function;
use output::{emit, Report, Table};

/// Anything that ends the run with exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Eval(hzmt_core::Error),
    Io(String),
}

impl From<hzmt_core::Error> for CliError {
    fn from(e: hzmt_core::Error) -> Self {
        CliError::Eval(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Eval(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hzmt", version, about = "Herglotz-type functions, Mordell-Tornheim sums and their identities")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one function: F, Fr, phi, theta, mt, zeta, zetaD, psi,
    /// polygamma, hurwitz, polylog, P, phi_ram.
    Eval {
        function: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
    },
    /// Check an identity (or `all`) over the parameter grid.
    Verify {
        id: String,
        /// x values, comma separated.
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        r: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        z: Vec<u32>,
        /// Offsets from the pole for the Laurent checks.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// Laurent data at a pole of Θ with sampled convergence diagnostics.
    Laurent {
        /// `theta11` or `theta-rr`.
        target: String,
        #[arg(long, default_value = "1")]
        x: String,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// Tabulate a function, or an identity's residual, over a range.
    Scan {
        /// Function name, or an identity id to tabulate its residual.
        #[arg(long)]
        function: String,
        #[arg(long, default_value = "x")]
        var: String,
        /// Arguments of the function; the one equal to `--var` is scanned.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        args: Vec<String>,
        #[arg(long, allow_negative_numbers = true)]
        from: String,
        #[arg(long, allow_negative_numbers = true)]
        to: String,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Fixed r for identity scans.
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// Fixed z for identity scans.
        #[arg(long, default_value_t = 3)]
        z: u32,
    },
}

/// Whether every check in the run passed.
type Verdict = bool;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Verdict, CliError> {
    let mut cfg = Config::resolve(&cli.global)?;
    match cli.command {
        Command::Eval { function, args } => cmd_eval(&cfg, &function, &args),
        Command::Verify { id, x, r, z, eps } => {
            if !x.is_empty() {
                cfg.grid.x_values = x;
            }
            if !r.is_empty() {
                cfg.grid.r_values = r;
            }
            if !z.is_empty() {
                cfg.grid.z_values = z;
            }
            if !eps.is_empty() {
                cfg.grid.epsilon_offsets = eps;
            }
            cmd_verify(&cfg, &id)
        }
        Command::Laurent { target, x, r, eps } => {
            if !eps.is_empty() {
                cfg.grid.epsilon_offsets = eps;
            }
            cmd_laurent(&cfg, &target, &x, r)
        }
        Command::Scan { function, var, args, from, to, points, r, z } => {
            cmd_scan(&cfg, &ScanSpec { function, var, args, from, to, points, r, z })
        }
    }
}

fn setup(cfg: &Config) -> Result<(Context, TolPolicy), CliError> {
    let ctx = cfg.context()?;
    let tol = cfg.tolerances(&ctx)?;
    Ok((ctx, tol))
}

#[derive(Serialize)]
struct EvalRow {
    function: &'static str,
    args: IndexMap<&'static str, String>,
    value: String,
    err_bound: String,
    terms_used: usize,
    converged: bool,
}

#[derive(Serialize)]
struct EvalSummary {
    converged: bool,
}

fn cmd_eval(cfg: &Config, name: &str, args: &[String]) -> Result<Verdict, CliError> {
    let (ctx, tol) = setup(cfg)?;
    let f = Function::parse(name)?;
    let out = f.eval(&ctx, args)?.render(cfg.precision);
    if !out.converged {
        eprintln!("warning: {} did not reach the requested accuracy", f.name());
    }
    let row = EvalRow {
        function: f.name(),
        args: f.params().iter().copied().zip(args.iter().cloned()).collect(),
        value: out.value,
        err_bound: out.err_bound,
        terms_used: out.terms_used,
        converged: out.converged,
    };
    let table = Table {
        header: vec!["quantity", "value"],
        rows: vec![
            vec!["value".into(), row.value.clone()],
            vec!["err_bound".into(), row.err_bound.clone()],
            vec!["terms_used".into(), row.terms_used.to_string()],
            vec!["converged".into(), row.converged.to_string()],
        ],
    };
    let report = Report {
        config: cfg.echo(&ctx, &tol),
        summary: EvalSummary { converged: row.converged },
        results: vec![row],
    };
    emit(cfg.format, cfg.out.as_deref(), &report, &table)?;
    Ok(true)
}

#[derive(Serialize)]
struct VerifySummary {
    all_pass: bool,
    total: usize,
    failed: usize,
    per_identity: IndexMap<IdentityId, Counts>,
    /// Seconds, per identity; varies between runs.
    wall_time: IndexMap<IdentityId, String>,
}

fn check_row(c: &RenderedCheck) -> Vec<String> {
    let params = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
    vec![
        c.id.to_string(),
        params,
        c.lhs.clone(),
        c.rhs.clone(),
        c.abs_residual.clone(),
        c.rel_residual.clone(),
        c.err_bound.clone(),
        c.tol.clone(),
        if c.pass { "PASS" } else { "FAIL" }.into(),
        c.error.clone().unwrap_or_default(),
    ]
}

fn cmd_verify(cfg: &Config, id: &str) -> Result<Verdict, CliError> {
    let ids: Vec<IdentityId> = if id.eq_ignore_ascii_case("all") {
        IdentityId::ALL.to_vec()
    } else {
        vec![IdentityId::from_str(id).map_err(|_| {
            let known = IdentityId::ALL.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(", ");
            CliError::Usage(format!("unknown identity '{id}'; expected all or one of {known}"))
        })?]
    };
    let (ctx, tol) = setup(cfg)?;
    let report = run_identities(&ctx, &cfg.grid, &tol, &ids)?;
    let rendered: Vec<RenderedCheck> = report.results.iter().map(|r| r.render(cfg.precision)).collect();
    let failed = rendered.iter().filter(|r| !r.pass).count();
    for f in rendered.iter().filter(|r| !r.pass) {
        eprintln!("FAIL {} {:?} residual {}", f.id, f.params, f.abs_residual);
    }
    let table = Table {
        header: vec!["id", "params", "lhs", "rhs", "abs_residual", "rel_residual", "err_bound", "tol", "pass", "error"],
        rows: rendered.iter().map(check_row).collect(),
    };
    let summary = VerifySummary {
        all_pass: failed == 0,
        total: rendered.len(),
        failed,
        per_identity: report.summary.clone(),
        wall_time: report.wall_time.iter().map(|(k, v)| (*k, format!("{v:.3}"))).collect(),
    };
    let out = Report { config: cfg.echo(&ctx, &tol), results: rendered, summary };
    emit(cfg.format, cfg.out.as_deref(), &out, &table)?;
    Ok(failed == 0)
}

#[derive(Serialize)]
struct FitOut {
    quantity: &'static str,
    limit: String,
    eps: Vec<String>,
    samples: Vec<String>,
    residuals: Vec<String>,
    slope: String,
    extrapolated: String,
}

impl FitOut {
    fn new(quantity: &'static str, limit: &Real, f: &RichardsonFit) -> Self {
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect();
        FitOut {
            quantity,
            limit: limit.to_decimal_string(17),
            eps: fmt(&f.eps),
            samples: fmt(&f.samples),
            residuals: fmt(&f.residuals),
            slope: format!("{:.6}", f.slope),
            extrapolated: format!("{:e}", f.extrapolated),
        }
    }
}

#[derive(Serialize)]
struct SeriesCheck {
    value: String,
    abs_diff: String,
    pass: bool,
}

#[derive(Serialize)]
struct LaurentOut {
    target: &'static str,
    params: IndexMap<&'static str, String>,
    variable: &'static str,
    center: String,
    coefficients: IndexMap<String, String>,
    remainder_order: i32,
    richardson: FitOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant_term_series: Option<SeriesCheck>,
}

#[derive(Serialize)]
struct LaurentSummary {
    slope_ok: bool,
    pass: bool,
}

fn cmd_laurent(cfg: &Config, target: &str, x_arg: &str, r: u32) -> Result<Verdict, CliError> {
    let (ctx, tol) = setup(cfg)?;
    cfg.grid.validate()?;
    let x = ctx.parse(x_arg)?;
    let eps = &cfg.grid.epsilon_offsets;
    let digits = cfg.precision;
    let (name, exp, fit, limit, series, mut params): (_, LaurentExpansion, _, _, _, IndexMap<&'static str, String>) =
        match target.to_ascii_lowercase().replace('_', "-").as_str() {
            "theta11" => {
                let exp = theta11_laurent(&ctx, &x)?;
                let fit = theta11_samples(&ctx, &x, eps)?;
                let c0 = exp.coeffs[&0].clone();
                ("theta11", exp, FitOut::new("theta_minus_principal_part", &c0, &fit), fit, None, IndexMap::new())
            }
            "theta-rr" => {
                let exp = theta_rr_laurent(&ctx, r, &x)?;
                let fit = residue_samples(&ctx, r, &x, eps)?;
                let res = exp.coeffs[&-1].clone();
                let s = klf_constant_series(&ctx, r, &x)?;
                let diff = (&s.value - &exp.coeffs[&0]).abs();
                let check = SeriesCheck {
                    value: s.value.to_decimal_string(digits),
                    abs_diff: diff.to_decimal_string(6),
                    pass: diff <= tol.tol,
                };
                let mut p = IndexMap::new();
                p.insert("r", r.to_string());
                ("theta-rr", exp, FitOut::new("scaled_theta_vs_residue", &res, &fit), fit, Some(check), p)
            }
            _ => return Err(CliError::Usage(format!("unknown target '{target}'; expected theta11 or theta-rr"))),
        };
    params.insert("x", x_arg.to_string());
    let slope_ok = (limit.slope - 1.0).abs() <= tol.slope_tol;
    let pass = slope_ok && series.as_ref().is_none_or(|s| s.pass);

    let coefficients: IndexMap<String, String> =
        exp.coeffs.iter().map(|(k, v)| (k.to_string(), v.to_decimal_string(digits))).collect();
    let mut rows: Vec<Vec<String>> = coefficients.iter().map(|(k, v)| vec![format!("coeff[{k}]"), v.clone()]).collect();
    rows.push(vec!["center".into(), exp.center.to_decimal_string(digits)]);
    rows.push(vec!["slope".into(), fit.slope.clone()]);
    rows.push(vec!["extrapolated".into(), fit.extrapolated.clone()]);
    if let Some(s) = &series {
        rows.push(vec!["constant_term_series".into(), s.value.clone()]);
        rows.push(vec!["constant_term_abs_diff".into(), s.abs_diff.clone()]);
    }
    let table = Table { header: vec!["quantity", "value"], rows };
    let out = LaurentOut {
        target: name,
        params,
        variable: exp.variable,
        center: exp.center.to_decimal_string(digits),
        coefficients,
        remainder_order: exp.remainder_order,
        richardson: fit,
        constant_term_series: series,
    };
    let report = Report { config: cfg.echo(&ctx, &tol), results: out, summary: LaurentSummary { slope_ok, pass } };
    emit(cfg.format, cfg.out.as_deref(), &report, &table)?;
    Ok(pass)
}

struct ScanSpec {
    function: String,
    var: String,
    args: Vec<String>,
    from: String,
    to: String,
    points: usize,
    r: u32,
    z: u32,
}

#[derive(Serialize)]
struct ScanRow {
    param: String,
    value: String,
    err_bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
}

#[derive(Serialize)]
struct ScanSummary {
    function: String,
    var: String,
    points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    all_pass: Option<bool>,
}

fn scan_grid(ctx: &Context, spec: &ScanSpec) -> Result<Vec<Real>, CliError> {
    let from = ctx.parse(&spec.from)?;
    let to = ctx.parse(&spec.to)?;
    if spec.points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    if spec.points == 1 {
        if from > to {
            return Err(CliError::Usage(format!("--from {} exceeds --to {}", spec.from, spec.to)));
        }
        return Ok(vec![from]);
    }
    if !(from < to) {
        return Err(CliError::Usage(format!("--from {} must be below --to {}", spec.from, spec.to)));
    }
    let step = (&to - &from) / (spec.points - 1) as f64;
    Ok((0..spec.points)
        .map(|i| if i + 1 == spec.points { to.clone() } else { &from + &(&step * i as f64) })
        .collect())
}

fn identity_at(ctx: &Context, id: IdentityId, x: f64, spec: &ScanSpec, tol: &TolPolicy, eps: &[f64]) -> Result<CheckResult, CliError> {
    Ok(match id {
        IdentityId::Fe2 => verify_fe2(ctx, x, tol)?,
        IdentityId::Fe1 => verify_fe1(ctx, x, tol)?,
        IdentityId::Vz2 => verify_vz2(ctx, spec.r, x, tol)?,
        IdentityId::Vz3 => verify_vz3(ctx, spec.r, x, tol)?,
        IdentityId::GuinandDeriv => verify_guinand_deriv(ctx, spec.z, x, tol)?,
        IdentityId::GuinandFirst => verify_guinand_first(ctx, x, tol)?,
        IdentityId::RamanujanFirst => verify_ramanujan_first(ctx, x, tol)?,
        IdentityId::Decomposition => verify_decomposition(ctx, f64::from(spec.z), x, false, tol)?,
        IdentityId::Klf11 => verify_klf11(ctx, x, eps, tol)?,
        IdentityId::KlfRr => verify_klf_rr(ctx, spec.r, x, eps, tol)?,
        other => return Err(CliError::Usage(format!("identity {other} has no x parameter to scan"))),
    })
}

fn cmd_scan(cfg: &Config, spec: &ScanSpec) -> Result<Verdict, CliError> {
    let (ctx, tol) = setup(cfg)?;
    let grid = scan_grid(&ctx, spec)?;
    let digits = cfg.precision;
    let mut rows = Vec::with_capacity(grid.len());
    let mut all_pass = None;

    if let Ok(f) = Function::parse(&spec.function) {
        let template: Vec<String> = if spec.args.is_empty() { vec![spec.var.clone()] } else { spec.args.clone() };
        let slot = template.iter().position(|a| *a == spec.var).ok_or_else(|| {
            CliError::Usage(format!("no argument named '{}' in --args {}", spec.var, template.join(",")))
        })?;
        for p in &grid {
            let mut args = template.clone();
            args[slot] = p.to_decimal_string(digits + 5);
            let out = f.eval(&ctx, &args)?.render(digits);
            rows.push(ScanRow { param: p.to_decimal_string(17), value: out.value, err_bound: out.err_bound, pass: None });
        }
    } else if let Ok(id) = IdentityId::from_str(&spec.function) {
        if spec.var != "x" {
            return Err(CliError::Usage(format!("identity scans run over x, not '{}'", spec.var)));
        }
        cfg.grid.validate()?;
        let mut ok = true;
        for p in &grid {
            let c = identity_at(&ctx, id, p.to_f64(), spec, &tol, &cfg.grid.epsilon_offsets)?;
            ok &= c.pass;
            rows.push(ScanRow {
                param: p.to_decimal_string(17),
                value: c.abs_residual.to_decimal_string(6),
                err_bound: c.err_bound.to_decimal_string(6),
                pass: Some(c.pass),
            });
        }
        all_pass = Some(ok);
    } else {
        return Err(CliError::Usage(format!(
            "unknown function or identity '{}'; functions are {}",
            spec.function,
            functions::NAMES
        )));
    }

    let table = Table {
        header: vec!["param", "value", "err_bound"],
        rows: rows.iter().map(|r| vec![r.param.clone(), r.value.clone(), r.err_bound.clone()]).collect(),
    };
    let summary = ScanSummary { function: spec.function.clone(), var: spec.var.clone(), points: rows.len(), all_pass };
    let report = Report { config: cfg.echo(&ctx, &tol), results: rows, summary };
    emit(cfg.format, cfg.out.as_deref(), &report, &table)?;
    Ok(all_pass.unwrap_or(true))
}
