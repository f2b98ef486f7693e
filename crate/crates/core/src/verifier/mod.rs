//! Numerical verification of the identity catalogue over parameter grids.

mod checks;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Context;
use crate::error::{Error, Result};
use crate::mordell_tornheim::ThetaPoint;
use crate::real::Real;

pub use checks::{
    verify_decomposition, verify_f1_value, verify_fe1, verify_fe2, verify_guinand_deriv, verify_guinand_first,
    verify_inversion, verify_klf11, verify_klf_rr, verify_ramanujan_first, verify_recursion, verify_split,
    verify_stuffle, verify_vz2, verify_vz3,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityId {
    Fe2,
    Fe1,
    Vz2,
    Vz3,
    GuinandDeriv,
    GuinandFirst,
    RamanujanFirst,
    Decomposition,
    Split,
    Inversion,
    Recursion,
    Klf11,
    KlfRr,
    F1Value,
    Stuffle,
}

impl IdentityId {
    pub const ALL: [IdentityId; 15] = [
        IdentityId::Fe2,
        IdentityId::Fe1,
        IdentityId::Vz2,
        IdentityId::Vz3,
        IdentityId::GuinandDeriv,
        IdentityId::GuinandFirst,
        IdentityId::RamanujanFirst,
        IdentityId::Decomposition,
        IdentityId::Split,
        IdentityId::Inversion,
        IdentityId::Recursion,
        IdentityId::Klf11,
        IdentityId::KlfRr,
        IdentityId::F1Value,
        IdentityId::Stuffle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Fe2 => "FE2",
            IdentityId::Fe1 => "FE1",
            IdentityId::Vz2 => "VZ2",
            IdentityId::Vz3 => "VZ3",
            IdentityId::GuinandDeriv => "GUINAND_DERIV",
            IdentityId::GuinandFirst => "GUINAND_FIRST",
            IdentityId::RamanujanFirst => "RAMANUJAN_FIRST",
            IdentityId::Decomposition => "DECOMPOSITION",
            IdentityId::Split => "SPLIT",
            IdentityId::Inversion => "INVERSION",
            IdentityId::Recursion => "RECURSION",
            IdentityId::Klf11 => "KLF11",
            IdentityId::KlfRr => "KLF_RR",
            IdentityId::F1Value => "F1_VALUE",
            IdentityId::Stuffle => "STUFFLE",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    /// Case-insensitive; `-` and `_` are interchangeable.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity '{s}'")))
    }
}

/// A grid parameter value.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Int(i64),
    Real(f64),
    Text(String),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Int(v) => write!(f, "{v}"),
            Param::Real(v) => write!(f, "{v}"),
            Param::Text(v) => f.write_str(v),
        }
    }
}

/// Outcome of one identity at one grid point.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: IdentityId,
    pub params: IndexMap<String, Param>,
    pub lhs: Real,
    pub rhs: Real,
    pub abs_residual: Real,
    pub rel_residual: Real,
    /// Combined error bound of the two sides as reported by the evaluators.
    pub err_bound: Real,
    pub tol: Real,
    pub pass: bool,
    pub routes: Vec<String>,
    pub diagnostics: IndexMap<String, String>,
    /// Set when an evaluation failed; the cell then does not pass.
    pub error: Option<String>,
}

impl CheckResult {
    pub fn new(
        id: IdentityId,
        params: Vec<(&str, Param)>,
        lhs: Real,
        rhs: Real,
        err_bound: Real,
        tol: Real,
        routes: &[&str],
    ) -> Self {
        let abs_residual = (&lhs - &rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_residual = if scale.is_zero() { abs_residual.clone() } else { &abs_residual / &scale };
        let pass = abs_residual <= tol || rel_residual <= tol;
        CheckResult {
            id,
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            err_bound,
            tol,
            pass,
            routes: routes.iter().map(|s| s.to_string()).collect(),
            diagnostics: IndexMap::new(),
            error: None,
        }
    }

    fn failed(ctx: &Context, id: IdentityId, params: Vec<(&str, Param)>, tol: Real, reason: String) -> Self {
        let mut c = CheckResult::new(id, params, ctx.zero(), ctx.zero(), ctx.zero(), tol, &[]);
        c.pass = false;
        c.error = Some(reason);
        c
    }

    /// Adds the requirement that a fitted convergence slope be within
    /// `slope_tol` of 1.
    pub(crate) fn apply_slope(&mut self, slope: f64, slope_tol: f64) {
        let ok = (slope - 1.0).abs() <= slope_tol;
        self.diagnostics.insert("slope".into(), format!("{slope:.4}"));
        self.diagnostics.insert("slope_ok".into(), ok.to_string());
        self.pass &= ok;
    }

    pub fn render(&self, digits: u32) -> RenderedCheck {
        RenderedCheck {
            id: self.id,
            params: self.params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            lhs: self.lhs.to_decimal_string(digits),
            rhs: self.rhs.to_decimal_string(digits),
            abs_residual: self.abs_residual.to_decimal_string(6),
            rel_residual: self.rel_residual.to_decimal_string(6),
            err_bound: self.err_bound.to_decimal_string(6),
            tol: self.tol.to_decimal_string(6),
            pass: self.pass,
            routes: self.routes.clone(),
            diagnostics: self.diagnostics.clone(),
            error: self.error.clone(),
        }
    }
}

/// [`CheckResult`] with every number as a decimal string.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RenderedCheck {
    pub id: IdentityId,
    pub params: IndexMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub abs_residual: String,
    pub rel_residual: String,
    pub err_bound: String,
    pub tol: String,
    pub pass: bool,
    pub routes: Vec<String>,
    pub diagnostics: IndexMap<String, String>,
    pub error: Option<String>,
}

/// Tolerances. A check passes when its absolute or relative residual is
/// within its tolerance.
#[derive(Debug, Clone)]
pub struct TolPolicy {
    /// Analytic identities.
    pub tol: Real,
    /// Split, inversion and recursion, whose sides all come from the slow
    /// double sum.
    pub structural: Real,
    /// Cross-checks against the slow oracle on a reduced route.
    pub oracle: Real,
    pub stuffle: Real,
    /// Allowed deviation of fitted convergence slopes from 1.
    pub slope_tol: f64,
    /// Pole-expansion checks compare at the smallest offset ε against `klf_scale · ε`.
    pub klf_scale: f64,
}

impl TolPolicy {
    pub fn default_for(ctx: &Context) -> Self {
        let tol = if ctx.precision().is_degraded() { 1e-6 } else { 1e-9 };
        Self::with_tol(ctx, ctx.real(tol))
    }

    pub fn with_tol(ctx: &Context, tol: Real) -> Self {
        let tol = tol.with_prec(ctx.bits());
        TolPolicy {
            structural: (&tol * 100.0).max(tol.clone()),
            oracle: ctx.real(1e-5).max(tol.clone()),
            stuffle: &tol / 10,
            tol,
            slope_tol: 0.2,
            klf_scale: 10.0,
        }
    }
}

/// Parameter grids for the suite. Missing fields take their defaults when
/// deserialized.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub x_values: Vec<f64>,
    pub r_values: Vec<u32>,
    pub z_values: Vec<u32>,
    pub epsilon_offsets: Vec<f64>,
    /// `(r, s, t)` interior points for split and inversion, each paired with every x.
    pub theta_points: Vec<[f64; 3]>,
    /// `(r, s, t, x)` points for the recursion, each with every order.
    pub recursion_points: Vec<[f64; 4]>,
    pub recursion_orders: Vec<u32>,
    /// z values for the decomposition check.
    pub decomposition_z: Vec<f64>,
    /// `(a, b)` for the stuffle relation.
    pub stuffle_pairs: Vec<(u32, u32)>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_values: vec![0.25, 0.5, 1.0, 2.0, 4.0, std::f64::consts::PI],
            r_values: vec![2, 3, 4, 5, 6],
            z_values: vec![3, 4, 5],
            epsilon_offsets: vec![1e-2, 5e-3, 2.5e-3],
            theta_points: vec![[2.0, 2.0, 1.0], [1.0, 1.0, 1.5], [2.0, 3.0, 1.5], [1.5, 2.0, 1.25]],
            recursion_points: vec![[3.0, 3.0, 1.0, 1.5], [4.0, 2.0, 2.0, 0.8]],
            recursion_orders: vec![1, 2, 3],
            decomposition_z: vec![1.1, 2.0, 2.5],
            stuffle_pairs: vec![(2, 2), (2, 3), (3, 4), (2, 5)],
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let empty = |name: &str, len: usize| {
            if len == 0 {
                Err(Error::InvalidArgument(format!("grid list '{name}' is empty")))
            } else {
                Ok(())
            }
        };
        empty("x_values", self.x_values.len())?;
        empty("r_values", self.r_values.len())?;
        empty("z_values", self.z_values.len())?;
        empty("epsilon_offsets", self.epsilon_offsets.len())?;
        empty("theta_points", self.theta_points.len())?;
        empty("recursion_points", self.recursion_points.len())?;
        empty("recursion_orders", self.recursion_orders.len())?;
        empty("decomposition_z", self.decomposition_z.len())?;
        empty("stuffle_pairs", self.stuffle_pairs.len())?;
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if let Some(x) = self.x_values.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
            return bad(format!("x values must be positive, got {x}"));
        }
        if let Some(r) = self.r_values.iter().find(|r| **r < 2) {
            return bad(format!("r values must be >= 2, got {r}"));
        }
        if let Some(z) = self.z_values.iter().find(|z| **z < 3) {
            return bad(format!("z values must be >= 3, got {z}"));
        }
        if let Some(e) = self.epsilon_offsets.iter().find(|e| !(**e > 0.0 && **e < 0.5)) {
            return bad(format!("offsets must lie in (0, 0.5), got {e}"));
        }
        if self.epsilon_offsets.len() < 2 {
            return bad("at least two offsets are needed for a slope".into());
        }
        if let Some(z) = self.decomposition_z.iter().find(|z| !(**z > 1.0)) {
            return bad(format!("decomposition z must exceed 1, got {z}"));
        }
        Ok(())
    }
}

/// Pass/fail counts for one identity.
#[derive(Debug, Clone, Copy, Default, Serialize, PartialEq, Eq)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub precision: u32,
    pub results: Vec<CheckResult>,
    pub summary: IndexMap<IdentityId, Counts>,
    /// Seconds of evaluation time per identity, summed over cells.
    pub wall_time: IndexMap<IdentityId, f64>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.pass)
    }
}

type Job<'a> = Box<dyn Fn() -> Result<CheckResult> + Send + Sync + 'a>;

struct Cell<'a> {
    id: IdentityId,
    params: Vec<(&'static str, Param)>,
    job: Job<'a>,
}

fn cells<'a>(ctx: &'a Context, grid: &'a GridSpec, tol: &'a TolPolicy, id: IdentityId) -> Vec<Cell<'a>> {
    let mut out: Vec<Cell<'a>> = Vec::new();
    let mut push = |params: Vec<(&'static str, Param)>, job: Job<'a>| out.push(Cell { id, params, job });
    let xs = &grid.x_values;
    match id {
        IdentityId::Fe2 => xs.iter().for_each(|&x| push(vec![("x", Param::Real(x))], Box::new(move || verify_fe2(ctx, x, tol)))),
        IdentityId::Fe1 => xs.iter().for_each(|&x| push(vec![("x", Param::Real(x))], Box::new(move || verify_fe1(ctx, x, tol)))),
        IdentityId::Vz2 | IdentityId::Vz3 => {
            for &r in &grid.r_values {
                for &x in xs {
                    let params = vec![("r", Param::Int(i64::from(r))), ("x", Param::Real(x))];
                    if id == IdentityId::Vz2 {
                        push(params, Box::new(move || verify_vz2(ctx, r, x, tol)));
                    } else {
                        push(params, Box::new(move || verify_vz3(ctx, r, x, tol)));
                    }
                }
            }
        }
        IdentityId::GuinandDeriv => {
            for &z in &grid.z_values {
                for &x in xs {
                    let params = vec![("z", Param::Int(i64::from(z))), ("x", Param::Real(x))];
                    push(params, Box::new(move || verify_guinand_deriv(ctx, z, x, tol)));
                }
            }
        }
        IdentityId::GuinandFirst => {
            xs.iter().for_each(|&x| push(vec![("x", Param::Real(x))], Box::new(move || verify_guinand_first(ctx, x, tol))))
        }
        IdentityId::RamanujanFirst => {
            xs.iter().for_each(|&x| push(vec![("x", Param::Real(x))], Box::new(move || verify_ramanujan_first(ctx, x, tol))))
        }
        IdentityId::Decomposition => {
            for &z in &grid.decomposition_z {
                for &x in xs {
                    let params = vec![("z", Param::Real(z)), ("x", Param::Real(x))];
                    push(params, Box::new(move || verify_decomposition(ctx, z, x, false, tol)));
                }
            }
            // one cross-check of the reduced route against the slow oracle
            let params = vec![("z", Param::Real(2.2)), ("x", Param::Real(1.5)), ("route", Param::Text("direct".into()))];
            push(params, Box::new(move || verify_decomposition(ctx, 2.2, 1.5, true, tol)));
        }
        IdentityId::Split | IdentityId::Inversion => {
            for p in &grid.theta_points {
                for &x in xs {
                    let [r, s, t] = *p;
                    let params =
                        vec![("r", Param::Real(r)), ("s", Param::Real(s)), ("t", Param::Real(t)), ("x", Param::Real(x))];
                    push(
                        params,
                        Box::new(move || {
                            let pt = ThetaPoint::from_f64(ctx, r, s, t, x)?;
                            if id == IdentityId::Split {
                                verify_split(ctx, &pt, tol)
                            } else {
                                verify_inversion(ctx, &pt, tol)
                            }
                        }),
                    );
                }
            }
        }
        IdentityId::Recursion => {
            for p in &grid.recursion_points {
                for &n in &grid.recursion_orders {
                    let [r, s, t, x] = *p;
                    let params = vec![
                        ("n", Param::Int(i64::from(n))),
                        ("r", Param::Real(r)),
                        ("s", Param::Real(s)),
                        ("t", Param::Real(t)),
                        ("x", Param::Real(x)),
                    ];
                    push(
                        params,
                        Box::new(move || verify_recursion(ctx, n, &ThetaPoint::from_f64(ctx, r, s, t, x)?, tol)),
                    );
                }
            }
        }
        IdentityId::Klf11 => {
            let eps = &grid.epsilon_offsets;
            xs.iter().for_each(|&x| push(vec![("x", Param::Real(x))], Box::new(move || verify_klf11(ctx, x, eps, tol))))
        }
        IdentityId::KlfRr => {
            let eps = &grid.epsilon_offsets;
            for &r in &grid.r_values {
                for &x in xs {
                    let params = vec![("r", Param::Int(i64::from(r))), ("x", Param::Real(x))];
                    push(params, Box::new(move || verify_klf_rr(ctx, r, x, eps, tol)));
                }
            }
        }
        IdentityId::F1Value => push(vec![], Box::new(move || verify_f1_value(ctx, tol))),
        IdentityId::Stuffle => {
            for &(a, b) in &grid.stuffle_pairs {
                let params = vec![("a", Param::Int(i64::from(a))), ("b", Param::Int(i64::from(b)))];
                push(params, Box::new(move || verify_stuffle(ctx, a, b, tol)));
            }
        }
    }
    out
}

/// Runs the given identities over the grid. Cells run in parallel; results
/// are ordered by identity, then grid position. Evaluation errors mark the
/// cell failed and never abort the run.
pub fn run_identities(ctx: &Context, grid: &GridSpec, tol: &TolPolicy, ids: &[IdentityId]) -> Result<SuiteReport> {
    grid.validate()?;
    let all: Vec<Cell<'_>> = ids.iter().flat_map(|&id| cells(ctx, grid, tol, id)).collect();
    let done: Vec<(CheckResult, f64)> = all
        .par_iter()
        .map(|cell| {
            let start = Instant::now();
            let res = match (cell.job)() {
                Ok(r) => r,
                Err(e) => CheckResult::failed(ctx, cell.id, cell.params.clone(), tol.tol.clone(), e.to_string()),
            };
            (res, start.elapsed().as_secs_f64())
        })
        .collect();

    let mut summary: IndexMap<IdentityId, Counts> = IndexMap::new();
    let mut wall_time: IndexMap<IdentityId, f64> = IndexMap::new();
    for &id in ids {
        summary.entry(id).or_default();
        wall_time.entry(id).or_default();
    }
    let mut results = Vec::with_capacity(done.len());
    for (r, secs) in done {
        let c = summary.entry(r.id).or_default();
        if r.pass {
            c.pass += 1;
        } else {
            c.fail += 1;
        }
        *wall_time.entry(r.id).or_default() += secs;
        results.push(r);
    }
    Ok(SuiteReport { precision: ctx.precision().digits(), results, summary, wall_time })
}

/// Every identity over the grid.
pub fn run_suite(ctx: &Context, grid: &GridSpec, tol: &TolPolicy) -> Result<SuiteReport> {
    run_identities(ctx, grid, tol, &IdentityId::ALL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
            assert_eq!(id.as_str().to_lowercase().replace('_', "-").parse::<IdentityId>().unwrap(), id);
        }
        assert!("bogus".parse::<IdentityId>().is_err());
    }

    #[test]
    fn pass_policy_is_abs_or_rel() {
        let c = Context::default();
        let r = CheckResult::new(IdentityId::Fe2, vec![], c.real(1e6), c.real(1e6 + 1e-4), c.zero(), c.real(1e-9), &[]);
        assert!(r.pass);
        let r = CheckResult::new(IdentityId::Fe2, vec![], c.real(1.0), c.real(1.1), c.zero(), c.real(1e-9), &[]);
        assert!(!r.pass);
    }

    #[test]
    fn empty_grid_is_rejected() {
        let c = Context::default();
        let grid = GridSpec { x_values: vec![], ..GridSpec::default() };
        assert!(run_suite(&c, &grid, &TolPolicy::default_for(&c)).is_err());
    }

    #[test]
    fn single_point_grid_cardinality() {
        let c = Context::default();
        let grid = GridSpec { x_values: vec![1.0], ..GridSpec::default() };
        let ids = [IdentityId::Fe2, IdentityId::Fe1, IdentityId::GuinandFirst, IdentityId::RamanujanFirst];
        let rep = run_identities(&c, &grid, &TolPolicy::default_for(&c), &ids).unwrap();
        assert_eq!(rep.results.len(), 4);
        assert!(rep.all_pass(), "{:?}", rep.failures().map(|r| r.render(10)).collect::<Vec<_>>());
        for id in ids {
            assert_eq!(rep.summary[&id], Counts { pass: 1, fail: 0 });
        }
    }
}
