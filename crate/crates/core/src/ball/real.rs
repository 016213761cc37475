use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::format::format_scientific;
use super::{Mag, Precision};
use crate::error::{Error, Result};
use crate::exact::{Integer, Rational};

/// Midpoint-radius enclosure `[man * 2^exp - rad, man * 2^exp + rad]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBall {
    man: BigInt,
    exp: i64,
    rad: Mag,
}

/// Rounds a dyadic mantissa to at most `prec` bits, returning the error bound.
fn round_mid(man: BigInt, exp: i64, prec: Precision) -> (BigInt, i64, Mag) {
    let bits = man.bits();
    let p = prec.bits() as u64;
    if bits <= p {
        return (man, exp, Mag::zero());
    }
    let shift = bits - p;
    let exact = man.trailing_zeros().unwrap_or(0) >= shift;
    let m = man >> shift as usize;
    let e = exp + shift as i64;
    let err = if exact { Mag::zero() } else { Mag::pow2(e) };
    (m, e, err)
}

impl RealBall {
    pub fn zero() -> RealBall {
        RealBall { man: BigInt::zero(), exp: 0, rad: Mag::zero() }
    }

    pub fn one() -> RealBall {
        RealBall::from_int(1)
    }

    pub fn from_int(v: i64) -> RealBall {
        RealBall { man: BigInt::from(v), exp: 0, rad: Mag::zero() }
    }

    pub fn from_integer(v: &Integer) -> RealBall {
        RealBall { man: v.clone(), exp: 0, rad: Mag::zero() }
    }

    /// Exact dyadic `man * 2^exp`.
    pub fn from_dyadic(man: BigInt, exp: i64) -> RealBall {
        RealBall { man, exp, rad: Mag::zero() }
    }

    /// Enclosure of `q` to within one unit in the last place at `prec`.
    pub fn from_rational(q: &Rational, prec: Precision) -> RealBall {
        let num = q.numer();
        let den = q.denom();
        if num.is_zero() {
            return RealBall::zero();
        }
        if den.is_one() {
            let (m, e, err) = round_mid(num.clone(), 0, prec);
            return RealBall { man: m, exp: e, rad: err };
        }
        let want = prec.bits() as i64 + 2;
        let s = want + den.bits() as i64 - num.bits() as i64;
        let (quot, rem) = if s >= 0 {
            (num << s as usize).div_rem(den)
        } else {
            num.div_rem(&(den << (-s) as usize))
        };
        let exp = -s;
        let err = if rem.is_zero() { Mag::zero() } else { Mag::pow2(exp) };
        let (m, e, err2) = round_mid(quot, exp, prec);
        RealBall { man: m, exp: e, rad: err.add(err2) }
    }

    pub fn from_mid_rad(mid: RealBall, rad: Mag) -> RealBall {
        RealBall { rad: mid.rad.add(rad), ..mid }
    }

    pub fn midpoint(&self) -> RealBall {
        RealBall { man: self.man.clone(), exp: self.exp, rad: Mag::zero() }
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn mid_parts(&self) -> (&BigInt, i64) {
        (&self.man, self.exp)
    }

    pub fn mid_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.man << self.exp as usize)
        } else {
            Rational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn add_error(&self, err: Mag) -> RealBall {
        RealBall { man: self.man.clone(), exp: self.exp, rad: self.rad.add(err) }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.man.is_zero() && self.rad.is_zero()
    }

    pub fn mid_is_negative(&self) -> bool {
        self.man.sign() == Sign::Minus
    }

    /// Upper bound on |mid|.
    pub fn mid_mag_up(&self) -> Mag {
        Mag::from_bigint_up(&self.man, self.exp)
    }

    pub fn mid_mag_down(&self) -> Mag {
        Mag::from_bigint_down(&self.man, self.exp)
    }

    /// Upper bound on every |x| in the ball.
    pub fn mag_upper(&self) -> Mag {
        self.mid_mag_up().add(self.rad)
    }

    /// Lower bound on every |x| in the ball (zero if the ball straddles zero).
    pub fn mag_lower(&self) -> Mag {
        self.mid_mag_down().sub_down(self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.mag_lower().is_zero()
    }

    /// Strictly positive: every point of the ball is > 0.
    pub fn is_positive(&self) -> bool {
        self.man.sign() == Sign::Plus && !self.mag_lower().is_zero()
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        let d = (q - self.mid_rational()).abs();
        d <= self.rad.to_rational()
    }

    /// True when the two enclosures share at least one point.
    pub fn overlaps(&self, other: &RealBall) -> bool {
        let d = (self.mid_rational() - other.mid_rational()).abs();
        d <= self.rad.to_rational() + other.rad.to_rational()
    }

    /// True when `other` lies entirely inside `self`.
    pub fn contains(&self, other: &RealBall) -> bool {
        let d = (self.mid_rational() - other.mid_rational()).abs();
        d + other.rad.to_rational() <= self.rad.to_rational()
    }

    pub fn neg(&self) -> RealBall {
        RealBall { man: -&self.man, exp: self.exp, rad: self.rad }
    }

    pub fn abs(&self) -> RealBall {
        RealBall { man: self.man.abs(), exp: self.exp, rad: self.rad }
    }

    pub fn mul_2exp(&self, e: i64) -> RealBall {
        RealBall { man: self.man.clone(), exp: self.exp + e, rad: self.rad.mul_2exp(e) }
    }

    fn top(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    pub fn add(&self, o: &RealBall, prec: Precision) -> RealBall {
        let rad = self.rad.add(o.rad);
        if o.man.is_zero() {
            let (m, e, err) = round_mid(self.man.clone(), self.exp, prec);
            return RealBall { man: m, exp: e, rad: rad.add(err) };
        }
        if self.man.is_zero() {
            let (m, e, err) = round_mid(o.man.clone(), o.exp, prec);
            return RealBall { man: m, exp: e, rad: rad.add(err) };
        }
        let gap = prec.bits() as i64 + 8;
        if o.top() + gap < self.top() {
            let (m, e, err) = round_mid(self.man.clone(), self.exp, prec);
            return RealBall { man: m, exp: e, rad: rad.add(err).add(o.mid_mag_up()) };
        }
        if self.top() + gap < o.top() {
            let (m, e, err) = round_mid(o.man.clone(), o.exp, prec);
            return RealBall { man: m, exp: e, rad: rad.add(err).add(self.mid_mag_up()) };
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &o.man << (o.exp - e) as usize;
        let (m, e, err) = round_mid(a + b, e, prec);
        RealBall { man: m, exp: e, rad: rad.add(err) }
    }

    pub fn sub(&self, o: &RealBall, prec: Precision) -> RealBall {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &RealBall, prec: Precision) -> RealBall {
        let rad = self
            .mid_mag_up()
            .mul(o.rad)
            .add(o.mid_mag_up().mul(self.rad))
            .add(self.rad.mul(o.rad));
        let (m, e, err) = round_mid(&self.man * &o.man, self.exp + o.exp, prec);
        RealBall { man: m, exp: e, rad: rad.add(err) }
    }

    pub fn mul_int(&self, k: i64, prec: Precision) -> RealBall {
        self.mul(&RealBall::from_int(k), prec)
    }

    pub fn mul_rational(&self, q: &Rational, prec: Precision) -> RealBall {
        if q.denom().is_one() {
            return self.mul(&RealBall::from_integer(q.numer()), prec);
        }
        self.mul(&RealBall::from_integer(q.numer()), prec)
            .div(&RealBall::from_integer(q.denom()), prec)
            .expect("nonzero denominator")
    }

    pub fn sqr(&self, prec: Precision) -> RealBall {
        self.mul(self, prec)
    }

    pub fn div(&self, o: &RealBall, prec: Precision) -> Result<RealBall> {
        let b_lo = o.mid_mag_down();
        let b_gap = b_lo.sub_down(o.rad);
        if b_gap.is_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let rad = if self.rad.is_zero() && o.rad.is_zero() {
            Mag::zero()
        } else {
            let num = self.mid_mag_up().mul(o.rad).add(b_lo.mul(self.rad).max(o.mid_mag_up().mul(self.rad)));
            num.div_up(b_lo.mul_down(b_gap))
        };
        if self.man.is_zero() {
            return Ok(RealBall { man: BigInt::zero(), exp: 0, rad });
        }
        let want = prec.bits() as i64 + 2;
        let s = (want + o.man.bits() as i64 - self.man.bits() as i64).max(0);
        let (q, r) = (&self.man << s as usize).div_rem(&o.man);
        let exp = self.exp - s - o.exp;
        let err = if r.is_zero() { Mag::zero() } else { Mag::pow2(exp) };
        let (m, e, err2) = round_mid(q, exp, prec);
        Ok(RealBall { man: m, exp: e, rad: rad.add(err).add(err2) })
    }

    pub fn recip(&self, prec: Precision) -> Result<RealBall> {
        RealBall::one().div(self, prec)
    }

    pub fn pow(&self, n: i32, prec: Precision) -> Result<RealBall> {
        if n < 0 {
            return self.pow(-n, prec)?.recip(prec);
        }
        let mut result = RealBall::one();
        let mut base = self.clone();
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr(prec);
            }
        }
        Ok(result)
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn mid_decimal(&self, digits: usize) -> String {
        format_scientific(&self.man, self.exp, digits, false)
    }

    pub fn rad_decimal(&self) -> String {
        self.rad.to_string()
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.man.bits() as i64;
        let shift = (bits - 60).max(0);
        let top: f64 = num_traits::ToPrimitive::to_f64(&(&self.man >> shift as usize)).unwrap_or(0.0);
        top * ((self.exp + shift) as f64).exp2()
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "[{} +/- {}]", self.mid_decimal(digits), self.rad_decimal())
    }
}
