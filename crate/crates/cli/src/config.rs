//! Effective configuration: flags > environment > config file > defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hzmt_core::verifier::{GridSpec, TolPolicy};
use hzmt_core::{AccuracyBudget, Context, Precision, Real};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Working precision in decimal digits (15 runs in hardware doubles).
    #[arg(long, global = true, env = "HZMT_PRECISION")]
    pub precision: Option<u32>,
    /// Pass tolerance for identity checks.
    #[arg(long, global = true, env = "HZMT_TOL")]
    pub tol: Option<String>,
    #[arg(long, global = true, env = "HZMT_MAX_TERMS")]
    pub max_terms: Option<usize>,
    /// Bernoulli correction pairs in Euler-Maclaurin tails.
    #[arg(long, global = true, env = "HZMT_EM_ORDER")]
    pub em_order: Option<usize>,
    #[arg(long, global = true, env = "HZMT_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, env = "HZMT_OUT")]
    pub out: Option<PathBuf>,
    /// JSON config file.
    #[arg(long, global = true, env = "HZMT_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum NumberOrString {
    Number(f64),
    Text(String),
}

impl NumberOrString {
    fn into_string(self) -> String {
        match self {
            NumberOrString::Number(v) => format!("{v:e}"),
            NumberOrString::Text(s) => s,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    precision: Option<u32>,
    tol: Option<NumberOrString>,
    max_terms: Option<usize>,
    em_order: Option<usize>,
    format: Option<Format>,
    grid: Option<GridSpec>,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

#[derive(Debug, Clone)]
pub struct Config {
    pub precision: u32,
    pub tol: Option<String>,
    pub max_terms: usize,
    pub em_order: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub grid: GridSpec,
}

impl Config {
    pub fn resolve(opts: &GlobalOpts) -> Result<Self, CliError> {
        let file = match &opts.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        Ok(Config {
            precision: opts.precision.or(file.precision).unwrap_or(Precision::DEFAULT_DIGITS),
            tol: opts.tol.clone().or(file.tol.map(NumberOrString::into_string)),
            max_terms: opts.max_terms.or(file.max_terms).unwrap_or(Context::DEFAULT_MAX_TERMS),
            em_order: opts.em_order.or(file.em_order).unwrap_or(Context::DEFAULT_EM_ORDER),
            format: opts.format.or(file.format).unwrap_or(Format::Json),
            out: opts.out.clone(),
            grid: file.grid.unwrap_or_default(),
        })
    }

    pub fn context(&self) -> Result<Context, CliError> {
        let precision = Precision::new(self.precision)?;
        let target = Real::from_i64(precision.bits(), 10).powi(-(self.precision as i32));
        let budget = AccuracyBudget::new(target, self.max_terms, self.em_order)?;
        Ok(Context::new(precision, budget))
    }

    pub fn tolerances(&self, ctx: &Context) -> Result<TolPolicy, CliError> {
        match &self.tol {
            None => Ok(TolPolicy::default_for(ctx)),
            Some(s) => {
                let t = ctx.parse(s)?;
                if !(t > 0.0) || !t.is_finite() {
                    return Err(CliError::Usage(format!("--tol must be positive, got {s}")));
                }
                Ok(TolPolicy::with_tol(ctx, t))
            }
        }
    }

    /// What every artifact echoes back.
    pub fn echo(&self, ctx: &Context, tol: &TolPolicy) -> ConfigEcho {
        ConfigEcho {
            precision: self.precision,
            bits: ctx.bits(),
            degraded: ctx.precision().is_degraded(),
            tolerance: tol.tol.to_decimal_string(6),
            max_terms: self.max_terms,
            em_order: self.em_order,
            format: self.format,
            grid: self.grid.clone(),
            versions: Versions { hzmt_core: hzmt_core::VERSION, hzmt_cli: env!("CARGO_PKG_VERSION") },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Versions {
    pub hzmt_core: &'static str,
    pub hzmt_cli: &'static str,
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub precision: u32,
    pub bits: u32,
    pub degraded: bool,
    pub tolerance: String,
    pub max_terms: usize,
    pub em_order: usize,
    pub format: Format,
    pub grid: GridSpec,
    pub versions: Versions,
}
