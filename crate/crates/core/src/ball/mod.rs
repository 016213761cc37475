//! Midpoint-radius interval arithmetic over dyadic midpoints.

mod complex;
mod elementary;
mod format;
mod mag;
mod real;

use num_bigint::BigInt;
use num_traits::Signed;

pub use complex::ComplexBall;
pub use elementary::{exp, log, ln2, sqrt};
pub use format::format_scientific;
pub use mag::Mag;
pub use real::RealBall;

use crate::exact::Rational;

/// Working mantissa size in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Precision {
        Precision(bits.max(Self::MIN_BITS))
    }

    /// Default precision for a target of `digits` decimal digits.
    pub fn from_digits(digits: u32) -> Precision {
        Precision::new(digits.saturating_mul(4).saturating_add(64))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn doubled(self) -> Precision {
        Precision::new(self.0.saturating_mul(2))
    }

    pub fn plus(self, extra: u32) -> Precision {
        Precision::new(self.0.saturating_add(extra))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroCheck {
    ZeroToD,
    NonzeroCertified,
    Indeterminate,
}

fn ten_pow_neg(digits: u32) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(10u8).pow(digits))
}

/// Classifies a ball against the threshold 10^-digits.
pub fn enclosure_check(x: &ComplexBall, digits: u32) -> ZeroCheck {
    let eps = ten_pow_neg(digits);
    let parts = [x.re(), x.im()];
    let upper: Vec<Rational> =
        parts.iter().map(|b| b.mid_rational().abs() + b.rad().to_rational()).collect();
    if upper.iter().all(|u| *u < eps) {
        return ZeroCheck::ZeroToD;
    }
    let certified = parts.iter().any(|b| {
        let lower = b.mid_rational().abs() - b.rad().to_rational();
        lower > eps
    });
    if certified {
        ZeroCheck::NonzeroCertified
    } else {
        ZeroCheck::Indeterminate
    }
}

/// Upper bound on 10^-digits as a magnitude.
pub fn mag_ten_pow_neg(digits: u32) -> Mag {
    Mag::from_rational_up(&ten_pow_neg(digits))
}
