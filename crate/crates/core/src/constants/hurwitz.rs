use num_traits::{One, Signed, Zero};

use super::bernoulli::bernoulli;
use crate::ball::{log, Mag, Precision, RealBall};
use crate::error::{Error, Result};
use crate::exact::{Integer, Rational};

/// Number of Euler-Maclaurin correction terms for a given precision.
pub(crate) fn em_order(prec: Precision) -> usize {
    prec.bits() as usize / 10 + 2
}

fn rising(s: u32, n: usize) -> Integer {
    (0..n as u32).fold(Integer::one(), |acc, i| acc * (s + i))
}

fn factorial(n: usize) -> Integer {
    (1..=n as u64).fold(Integer::one(), |acc, i| acc * i)
}

fn rpow(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        Rational::new(num_traits::pow(x.numer().clone(), e as usize), num_traits::pow(x.denom().clone(), e as usize))
    } else {
        Rational::new(num_traits::pow(x.denom().clone(), (-e) as usize), num_traits::pow(x.numer().clone(), (-e) as usize))
    }
}

/// Sum over i of w_i * sum_{k>=0} (k + x_i)^{-s}, evaluated entirely by the
/// Euler-Maclaurin formula at the points x_i (which must be large compared to
/// `m`). For s = 1 the weights must sum to zero.
pub(crate) fn em_tail(s: u32, pts: &[(Rational, Rational)], m: usize, prec: Precision) -> Result<RealBall> {
    let wp = prec.plus(32);
    let mut exact = Rational::zero();
    let mut value = RealBall::zero();
    if s == 1 {
        let total: Rational = pts.iter().map(|(w, _)| w.clone()).sum();
        if !total.is_zero() {
            return Err(Error::DomainViolation("divergent combination at s = 1".into()));
        }
        for (w, x) in pts {
            let lx = log(&RealBall::from_rational(x, wp), wp)?;
            value = value.sub(&lx.mul_rational(w, wp), wp);
        }
    } else {
        for (w, x) in pts {
            exact += w * rpow(x, 1 - s as i64) / Rational::from_integer((s - 1).into());
        }
    }
    for (w, x) in pts {
        exact += w * rpow(x, -(s as i64)) / Rational::from_integer(2.into());
    }
    for j in 1..=m {
        let coeff = bernoulli(2 * j) * Rational::from_integer(rising(s, 2 * j - 1))
            / Rational::from_integer(factorial(2 * j));
        let mut inner = Rational::zero();
        for (w, x) in pts {
            inner += w * rpow(x, -(s as i64) - 2 * j as i64 + 1);
        }
        exact += coeff * inner;
    }
    let rem_coeff = bernoulli(2 * m).abs() * Rational::from_integer(rising(s, 2 * m - 1))
        / Rational::from_integer(factorial(2 * m));
    let mut rem = Rational::zero();
    for (w, x) in pts {
        rem += w.abs() * rpow(x, -(s as i64) - 2 * m as i64 + 1);
    }
    let err = Mag::from_rational_up(&(rem_coeff * rem));
    Ok(value.add(&RealBall::from_rational(&exact, wp), wp).add_error(err))
}

/// Sum over i of w_i * zeta(s, a_i) for positive rational shifts a_i.
pub(crate) fn hurwitz_combination(s: u32, terms: &[(Rational, Rational)], prec: Precision) -> Result<RealBall> {
    if s == 0 {
        return Err(Error::DomainViolation("Hurwitz zeta needs s >= 1".into()));
    }
    if terms.iter().any(|(_, a)| !a.is_positive()) {
        return Err(Error::DomainViolation("Hurwitz shift must be positive".into()));
    }
    let m = em_order(prec);
    let n = 4 * m;
    let mut head = Rational::zero();
    for k in 0..n {
        let k = Rational::from_integer((k as i64).into());
        for (w, a) in terms {
            head += w * rpow(&(&k + a), -(s as i64));
        }
    }
    let nn = Rational::from_integer((n as i64).into());
    let pts: Vec<(Rational, Rational)> = terms.iter().map(|(w, a)| (w.clone(), &nn + a)).collect();
    let wp = prec.plus(32);
    let tail = em_tail(s, &pts, m, prec)?;
    Ok(tail.add(&RealBall::from_rational(&head, wp), wp))
}

/// Hurwitz tail sum_{k>=0} (k + x)^{-s} for a large integer x.
pub(crate) fn zeta_tail(s: u32, x: u64, m: usize, prec: Precision) -> Result<RealBall> {
    let pts = [(Rational::one(), Rational::from_integer(x.into()))];
    em_tail(s, &pts, m, prec)
}
