//! Configurable-precision real scalar backed by MPFR.
//!
//! Every value carries its own binary precision; binary operations produce a
//! result at the larger of the two operand precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Guard bits added on top of the requested decimal precision.
const GUARD_BITS: u32 = 16;

/// Working precision in significant decimal digits.
///
/// `digits == 15` selects the degraded binary64 mode (53-bit mantissa, no
/// guard bits); anything larger maps to `ceil(digits * log2(10)) + 16` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 15;
    pub const DEFAULT_DIGITS: u32 = 30;
    pub const MAX_DIGITS: u32 = 1000;

    pub fn new(digits: u32) -> Result<Self> {
        if !(Self::MIN_DIGITS..=Self::MAX_DIGITS).contains(&digits) {
            return Err(Error::InvalidArgument(format!(
                "precision must be between {} and {} digits, got {digits}",
                Self::MIN_DIGITS,
                Self::MAX_DIGITS
            )));
        }
        Ok(Self { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// True for the binary64-equivalent mode where default tolerances are
    /// relaxed by a factor of 10^3.
    pub fn is_degraded(self) -> bool {
        self.digits <= Self::MIN_DIGITS
    }

    pub fn bits(self) -> u32 {
        if self.is_degraded() {
            53
        } else {
            (f64::from(self.digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self { digits: Self::DEFAULT_DIGITS }
    }
}

/// A real number at a fixed binary precision.
#[derive(Clone)]
pub struct Real(Float);

impl Real {
    pub fn from_float(f: Float) -> Self {
        Real(f)
    }

    pub fn zero(prec: u32) -> Self {
        Real(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Real(Float::with_val(prec, 1))
    }

    pub fn from_f64(prec: u32, v: f64) -> Self {
        Real(Float::with_val(prec, v))
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        Real(Float::with_val(prec, v))
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Real(Float::with_val(prec, q))
    }

    /// Parses a decimal literal such as `"2.5"`, `"-1e-3"` or `"pi"`.
    pub fn parse(prec: u32, s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "pi" | "π" => return Ok(Real::pi(prec)),
            "e" => return Ok(Real::one(prec).exp()),
            "gamma" | "γ" => return Ok(Real::euler_gamma(prec)),
            _ => {}
        }
        if let Some((num, den)) = t.split_once('/') {
            let n = Real::parse(prec, num)?;
            let d = Real::parse(prec, den)?;
            return n.checked_div(&d);
        }
        let parsed = Float::parse(t).map_err(|e| Error::Parse(format!("{t:?}: {e}")))?;
        let v = Real(Float::with_val(prec, parsed));
        if !v.is_finite() {
            return Err(Error::Parse(format!("{t:?} is not a finite number")));
        }
        Ok(v)
    }

    pub fn pi(prec: u32) -> Self {
        Real(Float::with_val(prec, Constant::Pi))
    }

    /// Euler's constant γ.
    pub fn euler_gamma(prec: u32) -> Self {
        Real(Float::with_val(prec, Constant::Euler))
    }

    pub fn ln2(prec: u32) -> Self {
        Real(Float::with_val(prec, Constant::Log2))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    /// Same value rounded (or exactly widened) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Real {
        Real(Float::with_val(prec, &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an `i64` when it is an integer of moderate size.
    pub fn to_integer(&self) -> Option<i64> {
        if self.0.is_integer() && self.0.clone().abs() < 1u64 << 53 {
            self.0.to_integer().and_then(|z| z.to_i64())
        } else {
            None
        }
    }

    pub fn abs(&self) -> Real {
        Real(self.0.clone().abs())
    }

    pub fn ln(&self) -> Real {
        Real(self.0.clone().ln())
    }

    pub fn ln_1p(&self) -> Real {
        Real(self.0.clone().ln_1p())
    }

    pub fn exp(&self) -> Real {
        Real(self.0.clone().exp())
    }

    pub fn exp_m1(&self) -> Real {
        Real(self.0.clone().exp_m1())
    }

    pub fn sqrt(&self) -> Real {
        Real(self.0.clone().sqrt())
    }

    pub fn sin(&self) -> Real {
        Real(self.0.clone().sin())
    }

    pub fn gamma(&self) -> Real {
        Real(self.0.clone().gamma())
    }

    pub fn recip(&self) -> Real {
        Real(self.0.clone().recip())
    }

    pub fn square(&self) -> Real {
        Real(self.0.clone().square())
    }

    pub fn powi(&self, n: i32) -> Real {
        Real(Float::with_val(self.prec(), (&self.0).pow(n)))
    }

    /// `self^e`; integral exponents of moderate size take the cheaper
    /// integer-power path.
    pub fn pow(&self, e: &Real) -> Real {
        if let Some(k) = e.to_integer() {
            if k.abs() <= i64::from(i32::MAX) {
                return self.powi(k as i32);
            }
        }
        let prec = self.prec().max(e.prec());
        Real(Float::with_val(prec, (&self.0).pow(&e.0)))
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn checked_div(&self, other: &Real) -> Result<Real> {
        if other.is_zero() {
            return Err(Error::NonFinite("division by zero".into()));
        }
        Ok(self / other)
    }

    /// Fails with [`Error::NonFinite`] if the value is NaN or infinite.
    pub fn finite(self, what: &str) -> Result<Real> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(format!("{what} evaluated to {}", self.0)))
        }
    }

    /// Decimal rendering with `digits` significant digits.
    ///
    /// Plain positional notation for decimal exponents in `[-6, 21)`,
    /// scientific notation (`d.ddde-N`) otherwise. Never locale dependent.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        if !self.0.is_finite() {
            return self.0.to_string();
        }
        let digits = digits.max(1) as usize;
        let (neg, mantissa, exp) = match self.0.to_sign_string_exp_round(10, Some(digits), Round::Nearest) {
            (neg, m, Some(e)) => (neg, m, e),
            (neg, m, None) => (neg, m, 0),
        };
        // value = 0.mantissa * 10^exp
        let mantissa = mantissa.trim_end_matches('0');
        let mantissa = if mantissa.is_empty() { "0" } else { mantissa };
        let sci_exp = exp - 1;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if (-6..21).contains(&sci_exp) {
            if exp <= 0 {
                out.push_str("0.");
                for _ in 0..(-exp) {
                    out.push('0');
                }
                out.push_str(mantissa);
            } else {
                let e = exp as usize;
                if mantissa.len() <= e {
                    out.push_str(mantissa);
                    for _ in mantissa.len()..e {
                        out.push('0');
                    }
                } else {
                    out.push_str(&mantissa[..e]);
                    out.push('.');
                    out.push_str(&mantissa[e..]);
                }
            }
        } else {
            out.push_str(&mantissa[..1]);
            if mantissa.len() > 1 {
                out.push('.');
                out.push_str(&mantissa[1..]);
            }
            out.push('e');
            out.push_str(&sci_exp.to_string());
        }
        out
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal_string(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p as u32).unwrap_or(20);
        f.write_str(&self.to_decimal_string(digits))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl PartialEq<i32> for Real {
    fn eq(&self, other: &i32) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i32> for Real {
    fn partial_cmp(&self, other: &i32) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! binop {
    ($Tr:ident, $m:ident, $TrA:ident, $ma:ident) => {
        impl $Tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let prec = self.prec().max(rhs.prec());
                Real(Float::with_val(prec, (&self.0).$m(&rhs.0)))
            }
        }
        impl $Tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
        impl $Tr<&Real> for Real {
            type Output = Real;
            fn $m(mut self, rhs: &Real) -> Real {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                self.0.$ma(&rhs.0);
                self
            }
        }
        impl $Tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
        impl $TrA<&Real> for Real {
            fn $ma(&mut self, rhs: &Real) {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                self.0.$ma(&rhs.0);
            }
        }
        impl $TrA<Real> for Real {
            fn $ma(&mut self, rhs: Real) {
                self.$ma(&rhs);
            }
        }
        impl $Tr<i32> for Real {
            type Output = Real;
            fn $m(mut self, rhs: i32) -> Real {
                self.0.$ma(rhs);
                self
            }
        }
        impl $Tr<i32> for &Real {
            type Output = Real;
            fn $m(self, rhs: i32) -> Real {
                Real(Float::with_val(self.prec(), (&self.0).$m(rhs)))
            }
        }
        impl $Tr<f64> for Real {
            type Output = Real;
            fn $m(mut self, rhs: f64) -> Real {
                self.0.$ma(rhs);
                self
            }
        }
        impl $Tr<f64> for &Real {
            type Output = Real;
            fn $m(self, rhs: f64) -> Real {
                Real(Float::with_val(self.prec(), (&self.0).$m(rhs)))
            }
        }
        impl $Tr<&Real> for i32 {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real(Float::with_val(rhs.prec(), self.$m(&rhs.0)))
            }
        }
        impl $Tr<Real> for i32 {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
        impl $TrA<i32> for Real {
            fn $ma(&mut self, rhs: i32) {
                self.0.$ma(rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.prec(), -&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bits() {
        assert_eq!(Precision::new(15).unwrap().bits(), 53);
        assert!(Precision::new(15).unwrap().is_degraded());
        assert_eq!(Precision::default().bits(), 100 + GUARD_BITS);
        assert!(Precision::new(14).is_err());
    }

    #[test]
    fn decimal_rendering() {
        let p = 128;
        assert_eq!(Real::from_f64(p, 2.5).to_decimal_string(10), "2.5");
        assert_eq!(Real::from_f64(p, -0.125).to_decimal_string(10), "-0.125");
        assert_eq!(Real::from_i64(p, 1200).to_decimal_string(10), "1200");
        assert_eq!(Real::parse(p, "1e-9").unwrap().to_decimal_string(5), "1e-9");
        assert_eq!(Real::parse(p, "2.0612e-9").unwrap().to_decimal_string(5), "2.0612e-9");
        assert_eq!(Real::pi(p).to_decimal_string(12), "3.14159265359");
        assert_eq!(Real::zero(p).to_decimal_string(12), "0");
    }

    #[test]
    fn parse_accepts_fractions_and_constants() {
        let p = 128;
        let third = Real::parse(p, "1/3").unwrap();
        assert!((third * 3 - 1).abs() < 1e-35);
        assert!(Real::parse(p, "pi").unwrap() > 3.1);
        assert!(Real::parse(p, "abc").is_err());
        assert!(Real::parse(p, "1/0").is_err());
    }

    #[test]
    fn mixed_precision_promotes() {
        let a = Real::from_f64(53, 1.0);
        let b = Real::from_f64(200, 3.0);
        assert_eq!((&a / &b).prec(), 200);
        assert_eq!((a / b).prec(), 200);
    }

    #[test]
    fn integer_pow_fast_path_matches_general() {
        let p = 128;
        let x = Real::from_f64(p, 1.7);
        let e = Real::from_i64(p, -5);
        let general = Real(Float::with_val(p, (&x.0).pow(&e.0)));
        assert!((x.pow(&e) - general).abs() < 1e-36);
    }
}
