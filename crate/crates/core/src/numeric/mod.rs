//! Foundation special functions with explicit truncation-error models.

pub mod bernoulli;
pub(crate) mod euler_maclaurin;
pub mod digamma;
pub mod polylog;
pub(crate) mod series;
pub(crate) mod sum;
pub mod zeta;

pub use bernoulli::{bernoulli, harmonic};
pub use digamma::{digamma, polygamma};
pub use polylog::{dilog, polylog, polylog_exp};
pub use sum::Accumulator;
pub use zeta::{
    hurwitz_zeta, hurwitz_zeta_deriv, hurwitz_zeta_reg, riemann_zeta, riemann_zeta_conv, riemann_zeta_prime, stieltjes,
    stieltjes_generalized,
};
