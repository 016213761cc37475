use std::fmt;

use super::{Mag, Precision, RealBall};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Rectangular enclosure `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    re: RealBall,
    im: RealBall,
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> ComplexBall {
        ComplexBall { re, im }
    }

    pub fn zero() -> ComplexBall {
        ComplexBall::from_real(RealBall::zero())
    }

    pub fn one() -> ComplexBall {
        ComplexBall::from_real(RealBall::one())
    }

    pub fn i() -> ComplexBall {
        ComplexBall::new(RealBall::zero(), RealBall::one())
    }

    pub fn from_real(re: RealBall) -> ComplexBall {
        ComplexBall { re, im: RealBall::zero() }
    }

    pub fn from_rational(q: &Rational, prec: Precision) -> ComplexBall {
        ComplexBall::from_real(RealBall::from_rational(q, prec))
    }

    pub fn re(&self) -> &RealBall {
        &self.re
    }

    pub fn im(&self) -> &RealBall {
        &self.im
    }

    pub fn into_parts(self) -> (RealBall, RealBall) {
        (self.re, self.im)
    }

    /// The imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.im.is_exact_zero()
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall::new(self.re.clone(), self.im.neg())
    }

    pub fn add(&self, o: &ComplexBall, prec: Precision) -> ComplexBall {
        ComplexBall::new(self.re.add(&o.re, prec), self.im.add(&o.im, prec))
    }

    pub fn sub(&self, o: &ComplexBall, prec: Precision) -> ComplexBall {
        ComplexBall::new(self.re.sub(&o.re, prec), self.im.sub(&o.im, prec))
    }

    pub fn mul_real(&self, x: &RealBall, prec: Precision) -> ComplexBall {
        ComplexBall::new(self.re.mul(x, prec), self.im.mul(x, prec))
    }

    pub fn mul_rational(&self, q: &Rational, prec: Precision) -> ComplexBall {
        ComplexBall::new(self.re.mul_rational(q, prec), self.im.mul_rational(q, prec))
    }

    pub fn mul_2exp(&self, e: i64) -> ComplexBall {
        ComplexBall::new(self.re.mul_2exp(e), self.im.mul_2exp(e))
    }

    pub fn mul(&self, o: &ComplexBall, prec: Precision) -> ComplexBall {
        if o.is_real() {
            return self.mul_real(&o.re, prec);
        }
        if self.is_real() {
            return o.mul_real(&self.re, prec);
        }
        let re = self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec);
        let im = self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec);
        ComplexBall::new(re, im)
    }

    pub fn div(&self, o: &ComplexBall, prec: Precision) -> Result<ComplexBall> {
        if o.is_real() {
            return Ok(ComplexBall::new(self.re.div(&o.re, prec)?, self.im.div(&o.re, prec)?));
        }
        let den = o.re.sqr(prec).add(&o.im.sqr(prec), prec);
        if den.contains_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let num = self.mul(&o.conj(), prec);
        Ok(ComplexBall::new(num.re.div(&den, prec)?, num.im.div(&den, prec)?))
    }

    pub fn pow(&self, n: i32, prec: Precision) -> Result<ComplexBall> {
        if n < 0 {
            return ComplexBall::one().div(&self.pow(-n, prec)?, prec);
        }
        let mut result = ComplexBall::one();
        let mut base = self.clone();
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, prec);
            }
        }
        Ok(result)
    }

    /// Upper bound on |z| over the rectangle.
    pub fn mag_upper(&self) -> Mag {
        let a = self.re.mag_upper();
        let b = self.im.mag_upper();
        a.mul(a).add(b.mul(b)).sqrt_up()
    }

    /// The largest of the two component radii.
    pub fn max_rad(&self) -> Mag {
        self.re.rad().max(self.im.rad())
    }

    pub fn overlaps(&self, o: &ComplexBall) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn contains(&self, o: &ComplexBall) -> bool {
        self.re.contains(&o.re) && self.im.contains(&o.im)
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        if self.is_real() {
            write!(f, "{:.*}", digits, self.re)
        } else {
            write!(f, "{:.*} + {:.*}i", digits, self.re, digits, self.im)
        }
    }
}
