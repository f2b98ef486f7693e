//! Named functions reachable from `eval` and `scan`.

use hzmt_core::herglotz::{double_zeta, herglotz_f, higher_herglotz_f, phi, ramanujan_phi, zagier_p};
use hzmt_core::mordell_tornheim::{mt_zeta, theta, ThetaPoint};
use hzmt_core::numeric::{digamma, hurwitz_zeta, polygamma, polylog, riemann_zeta};
use hzmt_core::{Context, EvalOutcome, Real};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    F,
    Fr,
    Phi,
    Theta,
    Mt,
    Zeta,
    ZetaD,
    Psi,
    Polygamma,
    Hurwitz,
    Polylog,
    P,
    PhiRam,
}

pub const NAMES: &str = "F, Fr, phi, theta, mt, zeta, zetaD, psi, polygamma, hurwitz, polylog, P, phi_ram";

impl Function {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        use Function::*;
        // F/Fr and P are distinguished from phi and psi by case only.
        Ok(match name {
            "F" => F,
            "Fr" => Fr,
            "P" => P,
            _ => match name.to_ascii_lowercase().replace('-', "_").as_str() {
                "phi" => Phi,
                "theta" => Theta,
                "mt" => Mt,
                "zeta" => Zeta,
                "zetad" => ZetaD,
                "psi" => Psi,
                "polygamma" => Polygamma,
                "hurwitz" => Hurwitz,
                "polylog" => Polylog,
                "phi_ram" => PhiRam,
                _ => return Err(CliError::Usage(format!("unknown function '{name}'; expected one of {NAMES}"))),
            },
        })
    }

    pub fn name(self) -> &'static str {
        use Function::*;
        match self {
            F => "F",
            Fr => "Fr",
            Phi => "phi",
            Theta => "theta",
            Mt => "mt",
            Zeta => "zeta",
            ZetaD => "zetaD",
            Psi => "psi",
            Polygamma => "polygamma",
            Hurwitz => "hurwitz",
            Polylog => "polylog",
            P => "P",
            PhiRam => "phi_ram",
        }
    }

    /// Argument names, in order.
    pub fn params(self) -> &'static [&'static str] {
        use Function::*;
        match self {
            F | Psi => &["x"],
            PhiRam => &["a"],
            Zeta => &["s"],
            Fr => &["r", "x"],
            Phi => &["z", "x"],
            Theta => &["r", "s", "t", "x"],
            Mt => &["r", "s", "t"],
            ZetaD => &["s1", "s2"],
            Polygamma => &["j", "x"],
            Hurwitz => &["s", "a"],
            Polylog => &["r", "z"],
            P => &["x", "y"],
        }
    }

    pub fn eval(self, ctx: &Context, args: &[String]) -> Result<EvalOutcome, CliError> {
        use Function::*;
        let params = self.params();
        if args.len() != params.len() {
            return Err(CliError::Usage(format!(
                "{} takes {} argument(s) ({}), got {}",
                self.name(),
                params.len(),
                params.join(", "),
                args.len()
            )));
        }
        let real = |i: usize| -> Result<Real, CliError> {
            ctx.parse(&args[i]).map_err(|e| CliError::Usage(format!("argument {}: {e}", params[i])))
        };
        let int = |i: usize| -> Result<u32, CliError> {
            args[i].trim().parse::<u32>().map_err(|_| {
                CliError::Usage(format!("argument {} must be a non-negative integer, got '{}'", params[i], args[i]))
            })
        };
        let out = match self {
            F => herglotz_f(ctx, &real(0)?)?,
            Fr => higher_herglotz_f(ctx, int(0)?, &real(1)?)?,
            Phi => phi(ctx, &real(0)?, &real(1)?)?,
            Theta => theta(ctx, &ThetaPoint::new(real(0)?, real(1)?, real(2)?, real(3)?)?)?,
            Mt => mt_zeta(ctx, &real(0)?, &real(1)?, &real(2)?)?,
            Zeta => riemann_zeta(ctx, &real(0)?)?,
            ZetaD => double_zeta(ctx, &real(0)?, &real(1)?)?,
            Psi => digamma(ctx, &real(0)?)?,
            Polygamma => polygamma(ctx, int(0)?, &real(1)?)?,
            Hurwitz => hurwitz_zeta(ctx, &real(0)?, &real(1)?)?,
            Polylog => polylog(ctx, int(0)?, &real(1)?)?,
            P => zagier_p(ctx, &real(0)?, &real(1)?)?,
            PhiRam => ramanujan_phi(ctx, &real(0)?)?,
        };
        Ok(out)
    }
}
