//! Enclosures of the constants that appear on right-hand sides, cached per
//! precision bucket.

mod bernoulli;
mod cache;
mod expr;
mod fundamental;
mod hurwitz;
mod zeta;

use num_traits::Signed;

pub use bernoulli::bernoulli;
pub use cache::{bucket, ConstKey};
pub use expr::{ConstExpr, MAX_DEPTH};
pub use fundamental::{euler_gamma_bm, pi_agm, pi_machin};

use crate::ball::{ComplexBall, Precision, RealBall};
use crate::error::{Error, Result};
use crate::exact::{Integer, Rational};
use cache::cached;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fundamental {
    Pi,
    EulerGamma,
    Sqrt(Integer),
    Log(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaKind {
    Zeta,
    Beta,
    Lm3,
}

pub fn fundamental(name: &Fundamental, prec: Precision) -> Result<RealBall> {
    match name {
        Fundamental::Pi => Ok(pi(prec)),
        Fundamental::EulerGamma => Ok(euler_gamma(prec)),
        Fundamental::Sqrt(n) => sqrt_int(n, prec),
        Fundamental::Log(q) => log_rational(q, prec),
    }
}

pub fn zeta_like(kind: ZetaKind, s: u32, prec: Precision) -> Result<RealBall> {
    match kind {
        ZetaKind::Zeta => zeta(s, prec),
        ZetaKind::Beta => beta(s, prec),
        ZetaKind::Lm3 => lm3(s, prec),
    }
}

pub fn pi(prec: Precision) -> RealBall {
    cached(ConstKey::Pi, prec, |p| Ok(pi_machin(p))).expect("pi never fails")
}

pub fn euler_gamma(prec: Precision) -> RealBall {
    cached(ConstKey::EulerGamma, prec, |p| Ok(euler_gamma_bm(p))).expect("gamma never fails")
}

pub fn sqrt_int(n: &Integer, prec: Precision) -> Result<RealBall> {
    if !n.is_positive() {
        return Err(Error::DomainViolation(format!("sqrt({n}) needs a positive integer")));
    }
    cached(ConstKey::Sqrt(n.clone()), prec, |p| crate::ball::sqrt(&RealBall::from_integer(n), p))
}

pub fn log_rational(q: &Rational, prec: Precision) -> Result<RealBall> {
    if !q.is_positive() {
        return Err(Error::DomainViolation(format!("log({q}) needs a positive rational")));
    }
    cached(ConstKey::Log(q.clone()), prec, |p| {
        crate::ball::log(&RealBall::from_rational(q, p.plus(16)), p)
    })
}

pub fn zeta(s: u32, prec: Precision) -> Result<RealBall> {
    if s < 2 {
        return Err(Error::DomainViolation(format!("zeta({s}) needs s >= 2")));
    }
    cached(ConstKey::Zeta(s), prec, |p| zeta::riemann_zeta(s, p))
}

pub fn beta(s: u32, prec: Precision) -> Result<RealBall> {
    cached(ConstKey::Beta(s), prec, |p| zeta::dirichlet_beta(s, p))
}

pub fn lm3(s: u32, prec: Precision) -> Result<RealBall> {
    cached(ConstKey::Lm3(s), prec, |p| zeta::l_minus3(s, p))
}

/// Double zeta value sum_{k1 > k2 > 0} k1^-a k2^-b.
pub fn double_zeta(a: u32, b: u32, prec: Precision) -> Result<RealBall> {
    cached(ConstKey::DoubleZeta(a, b), prec, |p| zeta::double_zeta(a, b, p))
}

pub fn zeta53(prec: Precision) -> Result<RealBall> {
    double_zeta(5, 3, prec)
}

pub fn eval_const_expr(e: &ConstExpr, prec: Precision) -> Result<ComplexBall> {
    e.eval(prec)
}
