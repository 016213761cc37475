use std::sync::Mutex;

use super::{Mag, Precision, RealBall};
use crate::error::{Error, Result};
use crate::exact::Rational;

static LN2: Mutex<Option<RealBall>> = Mutex::new(None);

fn round(x: RealBall, prec: Precision) -> RealBall {
    x.add(&RealBall::zero(), prec)
}

/// Square root. Exact zero maps to exact zero; otherwise the ball must be
/// strictly positive.
pub fn sqrt(x: &RealBall, prec: Precision) -> Result<RealBall> {
    if x.is_exact_zero() {
        return Ok(RealBall::zero());
    }
    if !x.is_positive() {
        return Err(Error::DomainViolation(format!("sqrt of {x:.10}")));
    }
    let (man, exp) = x.mid_parts();
    let want = 2 * (prec.bits() as i64 + 4);
    let mut s = (want - man.bits() as i64).max(0);
    if (exp - s).rem_euclid(2) != 0 {
        s += 1;
    }
    let n = man << s as usize;
    let root = n.sqrt();
    let e = (exp - s) / 2;
    let err = if &root * &root == n { Mag::zero() } else { Mag::pow2(e) };
    let prop = if x.rad().is_zero() {
        Mag::zero()
    } else {
        x.rad().div_up(x.mag_lower().sqrt_down())
    };
    let mid = RealBall::from_dyadic(root, e);
    Ok(round(mid.add_error(err.add(prop)), prec))
}

/// atanh(z) for |z| <= 1/2, with the truncation error folded into the radius.
fn atanh_small(z: &RealBall, prec: Precision) -> RealBall {
    let z2 = z.sqr(prec);
    let stop = Mag::pow2(-(prec.bits() as i64) - 8);
    let mut power = z.clone();
    let mut sum = RealBall::zero();
    let mut j: i64 = 0;
    loop {
        let term = power.div(&RealBall::from_int(2 * j + 1), prec).expect("odd divisor");
        sum = sum.add(&term, prec);
        power = power.mul(&z2, prec);
        j += 1;
        let bound = power.mag_upper();
        if bound < stop {
            // remaining terms are bounded by |z|^{2j+1} / (1 - z^2) <= 2 |z|^{2j+1}
            return sum.add_error(bound.mul_2exp(1));
        }
    }
}

/// Enclosure of log 2, cached at the highest precision computed so far.
pub fn ln2(prec: Precision) -> RealBall {
    {
        let cached = LN2.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = cached.as_ref() {
            if v.rad() <= Mag::pow2(-(prec.bits() as i64) - 4) {
                return round(v.clone(), prec);
            }
        }
    }
    let wp = prec.plus(32);
    let third = RealBall::from_rational(&Rational::new(1.into(), 3.into()), wp);
    let v = atanh_small(&third, wp).mul_2exp(1);
    let out = round(v.clone(), prec);
    *LN2.lock().unwrap_or_else(|e| e.into_inner()) = Some(v);
    out
}

/// Natural logarithm of a strictly positive ball.
pub fn log(x: &RealBall, prec: Precision) -> Result<RealBall> {
    if !x.is_positive() {
        return Err(Error::DomainViolation(format!("log of {x:.10}")));
    }
    let wp = prec.plus(32);
    let (man, exp) = x.mid_parts();
    let mut k = man.bits() as i64 + exp - 1;
    let mut f = x.midpoint().mul_2exp(-k);
    if f.mid_rational() > Rational::new(4.into(), 3.into()) {
        f = f.mul_2exp(-1);
        k += 1;
    }
    let one = RealBall::one();
    let z = f.sub(&one, wp).div(&f.add(&one, wp), wp)?;
    let mut v = atanh_small(&z, wp).mul_2exp(1);
    if k != 0 {
        let kwp = wp.plus(64 - (k.unsigned_abs().leading_zeros()));
        v = v.add(&ln2(kwp).mul_int(k, kwp), wp);
    }
    let prop = if x.rad().is_zero() {
        Mag::zero()
    } else {
        x.rad().div_up(x.mag_lower())
    };
    Ok(round(v.add_error(prop), prec))
}

/// Upper bound on e^r - 1.
fn expm1_bound(r: Mag) -> Mag {
    if r <= Mag::pow2(-1) {
        r.mul_2exp(1)
    } else {
        Mag::from_log2_up(r.to_f64() * std::f64::consts::LOG2_E * (1.0 + 1e-9) + 1e-9)
    }
}

/// Exponential function.
pub fn exp(x: &RealBall, prec: Precision) -> Result<RealBall> {
    let m = x.midpoint();
    let mf = m.to_f64();
    if !mf.is_finite() || mf.abs() > 1e15 {
        return Err(Error::DomainViolation(format!("exp argument {x:.10} out of range")));
    }
    let k = (mf / std::f64::consts::LN_2).round() as i64;
    let r = ((prec.bits() as f64).sqrt() / 2.0) as i64 + 1;
    let wp = prec.plus(32 + r as u32);
    let t = if k == 0 {
        m
    } else {
        let kwp = wp.plus(64 - k.unsigned_abs().leading_zeros());
        m.sub(&ln2(kwp).mul_int(k, kwp), wp)
    };
    let t = t.mul_2exp(-r);
    let stop = Mag::pow2(-(wp.bits() as i64) - 8);
    let mut sum = RealBall::one();
    let mut term = RealBall::one();
    let mut j = 1i64;
    loop {
        term = term.mul(&t, wp).div(&RealBall::from_int(j), wp)?;
        sum = sum.add(&term, wp);
        j += 1;
        let bound = term.mag_upper();
        if bound < stop {
            // |t| < 1/2 so the remaining terms sum to less than the last one
            sum = sum.add_error(bound);
            break;
        }
    }
    for _ in 0..r {
        sum = sum.sqr(wp);
    }
    let mut v = sum.mul_2exp(k);
    if !x.rad().is_zero() {
        let extra = v.mag_upper().mul(expm1_bound(x.rad()));
        v = v.add_error(extra);
    }
    Ok(round(v, prec))
}
