//! The Mordell–Tornheim deformation Θ(r, s, t, x) = Σ_{n,m>=1} n^{-r} m^{-s} (n + m x)^{-t}.

mod direct;
mod laurent;
mod reduce;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::budget::Context;
use crate::error::{Error, Result};
use crate::real::Real;

pub use direct::{mt_zeta, theta_direct, DIRECT_MARGIN};
pub use laurent::{
    fit_slope, klf_constant_series, residue_samples, theta11_laurent, theta11_samples, theta_rr_laurent,
    RichardsonFit,
};
pub use reduce::{
    theta, theta01_assembled, theta11_via_phi, theta_01_reg, theta_0r, theta_recursion_rhs, theta_rr_near_pole,
    theta_split_rhs, PolePart,
};

/// A parameter point `(r, s, t, x)` of Θ.
#[derive(Debug, Clone)]
pub struct ThetaPoint {
    pub r: Real,
    pub s: Real,
    pub t: Real,
    pub x: Real,
}

impl ThetaPoint {
    pub fn new(r: Real, s: Real, t: Real, x: Real) -> Result<Self> {
        if !(x > 0.0) {
            return Err(Error::domain("theta", format!("x must be positive, got {x}")));
        }
        Ok(ThetaPoint { r, s, t, x })
    }

    pub fn from_f64(ctx: &Context, r: f64, s: f64, t: f64, x: f64) -> Result<Self> {
        Self::new(ctx.real(r), ctx.real(s), ctx.real(t), ctx.real(x))
    }

    /// `min(r+t−1, s+t−1, r+s+t−2)`: positive exactly inside the region of
    /// absolute convergence.
    pub fn region_margin(&self) -> f64 {
        let (r, s, t) = (self.r.to_f64(), self.s.to_f64(), self.t.to_f64());
        (r + t - 1.0).min(s + t - 1.0).min(r + s + t - 2.0)
    }

    pub fn in_region(&self) -> bool {
        let one = 1.0;
        let rt = &self.r + &self.t;
        let st = &self.s + &self.t;
        let rst = &rt + &self.s;
        rt > one && st > one && rst > 2.0
    }

    /// On one of the singular hyperplanes `r+t = 1−ℓ`, `s+t = 1−ℓ`
    /// (`ℓ = 0, 1, ...`) or `r+s+t = 2`.
    pub fn on_singularity(&self) -> bool {
        let hits = |v: Real| v.to_integer().is_some_and(|k| k <= 1);
        hits(&self.r + &self.t) || hits(&self.s + &self.t) || (&self.r + &self.s + &self.t) == 2.0
    }

    /// `(s, r, t, 1/x)`, the partner point under inversion.
    pub fn inverted(&self) -> ThetaPoint {
        ThetaPoint { r: self.s.clone(), s: self.r.clone(), t: self.t.clone(), x: self.x.recip() }
    }

    pub(crate) fn lifted(&self, prec: u32) -> (Real, Real, Real, Real) {
        (self.r.with_prec(prec), self.s.with_prec(prec), self.t.with_prec(prec), self.x.with_prec(prec))
    }

    pub(crate) fn shifted(&self, dr: i32, ds: i32, dt: i32) -> ThetaPoint {
        ThetaPoint { r: &self.r + dr, s: &self.s + ds, t: &self.t + dt, x: self.x.clone() }
    }
}

/// Laurent data of a function of `t` around `center`: coefficients of
/// `(t − center)^k` for `k < remainder_order`, remainder `O((t − center)^{remainder_order})`.
#[derive(Debug, Clone, Serialize)]
pub struct LaurentExpansion {
    pub variable: &'static str,
    #[serde(serialize_with = "ser_real")]
    pub center: Real,
    #[serde(serialize_with = "ser_coeffs")]
    pub coeffs: BTreeMap<i32, Real>,
    pub remainder_order: i32,
}

impl LaurentExpansion {
    pub fn coeff(&self, order: i32) -> Option<&Real> {
        self.coeffs.get(&order)
    }

    /// Sum of the retained terms at offset `eps = t − center`.
    pub fn eval_offset(&self, eps: &Real) -> Real {
        let mut v = Real::zero(eps.prec());
        for (k, c) in &self.coeffs {
            v += &(c * &eps.powi(*k));
        }
        v
    }
}

fn ser_real<S: serde::Serializer>(v: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_decimal_string(20))
}

fn ser_coeffs<S: serde::Serializer>(m: &BTreeMap<i32, Real>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), &v.to_decimal_string(20))?;
    }
    map.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_predicates() {
        let c = Context::default();
        let p = ThetaPoint::from_f64(&c, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(p.in_region());
        assert!((p.region_margin() - 1.0).abs() < 1e-15);
        assert!(!p.on_singularity());
        let q = ThetaPoint::from_f64(&c, 2.0, 2.0, -1.0, 1.0).unwrap();
        assert!(!q.in_region());
        assert!(q.on_singularity());
        assert!(ThetaPoint::from_f64(&c, 1.0, 1.0, 1.0, 0.0).is_err());
        let inv = ThetaPoint::from_f64(&c, 2.0, 3.0, 1.5, 2.0).unwrap().inverted();
        assert_eq!(inv.r.to_f64(), 3.0);
        assert_eq!(inv.x.to_f64(), 0.5);
    }
}
