use num_traits::{One, Zero};

use super::bernoulli::bernoulli;
use super::hurwitz::{em_order, hurwitz_combination, zeta_tail};
use crate::ball::{Mag, Precision, RealBall};
use crate::error::{Error, Result};
use crate::exact::{harmonic, HarmonicStream, Integer, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn inv_pow(base: i64, s: u32) -> Rational {
    Rational::new(Integer::one(), num_traits::pow(Integer::from(base), s as usize))
}

pub(crate) fn riemann_zeta(s: u32, prec: Precision) -> Result<RealBall> {
    if s < 2 {
        return Err(Error::DomainViolation(format!("zeta({s}) is not defined here; need s >= 2")));
    }
    hurwitz_combination(s, &[(Rational::one(), Rational::one())], prec)
}

pub(crate) fn dirichlet_beta(s: u32, prec: Precision) -> Result<RealBall> {
    if s < 1 {
        return Err(Error::DomainViolation("beta(s) needs s >= 1".into()));
    }
    let w = inv_pow(4, s);
    hurwitz_combination(s, &[(w.clone(), q(1, 4)), (-w, q(3, 4))], prec)
}

pub(crate) fn l_minus3(s: u32, prec: Precision) -> Result<RealBall> {
    if s < 1 {
        return Err(Error::DomainViolation("L_-3(s) needs s >= 1".into()));
    }
    let w = inv_pow(3, s);
    hurwitz_combination(s, &[(w.clone(), q(1, 3)), (-w, q(2, 3))], prec)
}

fn rising(s: u32, n: usize) -> Integer {
    (0..n as u32).fold(Integer::one(), |acc, i| acc * (s + i))
}

fn factorial(n: usize) -> Integer {
    (1..=n as u64).fold(Integer::one(), |acc, i| acc * i)
}

/// Double zeta value sum_{k1 > k2 > 0} k1^-a k2^-b for a, b >= 2.
///
/// Uses zeta(a,b) = zeta(a) zeta(b) - sum_m m^-a t_b(m) with t_b(m) = sum_{j>=m} j^-b.
/// The outer sum is split at N: the head is exact up to one factor of zeta(b),
/// and for m >= N the Euler-Maclaurin expansion of t_b(m) turns the tail into a
/// finite combination of Hurwitz tails zeta(e, N).
pub(crate) fn double_zeta(a: u32, b: u32, prec: Precision) -> Result<RealBall> {
    if a < 2 || b < 2 {
        return Err(Error::DomainViolation(format!("double zeta({a},{b}) needs a, b >= 2")));
    }
    let wp = prec.plus(32);
    let m = em_order(wp);
    let n = 4 * m as u64;
    let zb = riemann_zeta(b, wp)?;
    let za = riemann_zeta(a, wp)?;

    // head: sum_{k<N} k^-a (zeta(b) - H_{k-1}^(b))
    let ha = harmonic(n - 1, a);
    let mut inner = HarmonicStream::new(b);
    let mut cross = Rational::zero();
    for k in 1..n {
        let kk = Rational::from_integer(k.into());
        cross += inner.value() / num_traits::pow(kk, a as usize);
        inner.advance();
    }
    let head = zb.mul_rational(&ha, wp).sub(&RealBall::from_rational(&cross, wp), wp);

    // tail: t_b(k) = k^{1-b}/(b-1) + k^-b/2 + sum_j c_j k^{-b-2j+1} + R_J(k)
    let mut tail = zeta_tail(a + b - 1, n, m, wp)?.mul_rational(&q(1, b as i64 - 1), wp);
    tail = tail.add(&zeta_tail(a + b, n, m, wp)?.mul_2exp(-1), wp);
    let jmax = m;
    for j in 1..=jmax {
        let c = bernoulli(2 * j) * Rational::from_integer(rising(b, 2 * j - 1))
            / Rational::from_integer(factorial(2 * j));
        let e = a + b + 2 * j as u32 - 1;
        tail = tail.add(&zeta_tail(e, n, m, wp)?.mul_rational(&c, wp), wp);
    }
    let rem_coeff = bernoulli(2 * jmax)
        * Rational::from_integer(rising(b, 2 * jmax - 1))
        / Rational::from_integer(factorial(2 * jmax));
    let rem_sum = zeta_tail(a + b + 2 * jmax as u32 - 1, n, m, wp)?;
    let rem = Mag::from_rational_up(&rem_coeff).mul(rem_sum.mag_upper());
    let tail = tail.add_error(rem);

    let s = head.add(&tail, wp);
    Ok(za.mul(&zb, wp).sub(&s, wp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::mag_ten_pow_neg;
    use crate::constants::pi;

    fn close(x: &RealBall, y: &RealBall, digits: u32) -> bool {
        let p = Precision::from_digits(digits + 10);
        x.sub(y, p).mag_upper() < mag_ten_pow_neg(digits)
    }

    #[test]
    fn even_zeta_closed_forms() {
        let p = Precision::from_digits(60);
        let pi = pi(p);
        let denoms = [6, 90, 945, 9450];
        for (i, d) in denoms.iter().enumerate() {
            let n = i as i32 + 1;
            let expected = pi.pow(2 * n, p).unwrap().mul_rational(&q(1, *d), p);
            let z = riemann_zeta(2 * n as u32, p).unwrap();
            assert!(z.overlaps(&expected), "zeta({})", 2 * n);
            assert!(close(&z, &expected, 55));
        }
    }

    /// Alternating character sums with the alternating-series remainder bound.
    fn slow_character_sum(s: u32, modulus: i64) -> (f64, f64) {
        let terms = 200_000i64;
        let mut sum = 0.0f64;
        for k in 0..terms {
            let (a, b) = (modulus * k + 1, modulus * k + modulus - 1);
            sum += (a as f64).powi(-(s as i32)) - (b as f64).powi(-(s as i32));
        }
        let next = ((modulus * terms + 1) as f64).powi(-(s as i32));
        (sum, next + 1e-13)
    }

    #[test]
    fn beta_and_lm3_against_partial_sums() {
        let p = Precision::from_digits(30);
        for s in 1..=6 {
            let (b, berr) = slow_character_sum(s, 4);
            let beta = dirichlet_beta(s, p).unwrap();
            assert!((beta.to_f64() - b).abs() <= berr.max(1e-10), "beta({s})");
            let (l, lerr) = slow_character_sum(s, 3);
            let lm3 = l_minus3(s, p).unwrap();
            assert!((lm3.to_f64() - l).abs() <= lerr.max(1e-10), "L3({s})");
        }
    }

    #[test]
    fn leibniz_and_lm3_at_one() {
        let p = Precision::from_digits(50);
        let pi = pi(p);
        assert!(close(&dirichlet_beta(1, p).unwrap(), &pi.mul_2exp(-2), 45));
        let sqrt3 = crate::ball::sqrt(&RealBall::from_int(3), p).unwrap();
        let expected = pi.div(&sqrt3.mul_int(3, p), p).unwrap();
        assert!(close(&l_minus3(1, p).unwrap(), &expected, 45));
    }

    #[test]
    fn zeta_one_rejected() {
        assert!(riemann_zeta(1, Precision::new(64)).is_err());
    }

    #[test]
    fn double_zeta_naive_sum() {
        // sum_{k1 <= 4000} k1^-5 H_{k1-1}^(3), tail below zeta(3)/(4 * 4000^4)
        let mut h3 = 0.0f64;
        let mut total = 0.0f64;
        for k in 1..=4000u32 {
            let kf = k as f64;
            total += h3 / kf.powi(5);
            h3 += 1.0 / kf.powi(3);
        }
        let z = double_zeta(5, 3, Precision::from_digits(30)).unwrap();
        assert!((z.to_f64() - total).abs() < 1e-10);
        assert!(z.mid_decimal(3).starts_with("3.77e-2"));
    }

    #[test]
    fn stuffle_relation() {
        let p = Precision::from_digits(40);
        let z53 = double_zeta(5, 3, p).unwrap();
        let z35 = double_zeta(3, 5, p).unwrap();
        let z8 = riemann_zeta(8, p).unwrap();
        let lhs = z53.add(&z35, p).add(&z8, p);
        let rhs = riemann_zeta(3, p).unwrap().mul(&riemann_zeta(5, p).unwrap(), p);
        assert!(lhs.overlaps(&rhs));
        assert!(close(&lhs, &rhs, 30));
    }
}
