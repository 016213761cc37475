use crate::ball::{log, sqrt, Mag, Precision, RealBall};
use crate::exact::Rational;

/// atan(1/x) for an integer x >= 2 by the alternating Gregory series.
fn atan_inv(x: i64, prec: Precision) -> RealBall {
    let x2 = RealBall::from_int(x * x);
    let stop = Mag::pow2(-(prec.bits() as i64) - 8);
    let mut power = RealBall::one().div(&RealBall::from_int(x), prec).expect("nonzero");
    let mut sum = RealBall::zero();
    let mut j = 0i64;
    loop {
        let term = power.div(&RealBall::from_int(2 * j + 1), prec).expect("nonzero");
        sum = if j % 2 == 0 { sum.add(&term, prec) } else { sum.sub(&term, prec) };
        power = power.div(&x2, prec).expect("nonzero");
        j += 1;
        let bound = power.mag_upper();
        if bound < stop {
            // alternating with decreasing terms: the first omitted term bounds the rest
            return sum.add_error(bound);
        }
    }
}

/// pi = 16 atan(1/5) - 4 atan(1/239).
pub fn pi_machin(prec: Precision) -> RealBall {
    let wp = prec.plus(32);
    let a = atan_inv(5, wp).mul_2exp(4);
    let b = atan_inv(239, wp).mul_2exp(2);
    a.sub(&b, wp).add(&RealBall::zero(), prec)
}

/// pi by the Gauss-Legendre arithmetic-geometric mean iteration.
pub fn pi_agm(prec: Precision) -> RealBall {
    let wp = prec.plus(64);
    let mut a = RealBall::one();
    let mut b = sqrt(&RealBall::from_rational(&Rational::new(1.into(), 2.into()), wp), wp).expect("positive");
    let mut t = RealBall::from_rational(&Rational::new(1.into(), 4.into()), wp);
    let mut p = 0i64;
    let mut n = 0i64;
    loop {
        let a1 = a.add(&b, wp).mul_2exp(-1);
        let b1 = sqrt(&a.mul(&b, wp), wp).expect("positive");
        let d = a.sub(&a1, wp);
        t = t.sub(&d.sqr(wp).mul_2exp(p), wp);
        p += 1;
        a = a1;
        b = b1;
        n += 1;
        // |pi - p_n| <= pi^2 2^{n+4} e^{-pi 2^{n+1}} / agm^2, with pi^2 / agm^2 < 16
        let log2_err = (n + 8) as f64 - std::f64::consts::PI * (2f64).powi(n as i32 + 1) * std::f64::consts::LOG2_E;
        if log2_err < -(wp.bits() as f64) {
            let approx = a.add(&b, wp).sqr(wp).div(&t.mul_2exp(2), wp).expect("t > 0");
            return approx.add_error(Mag::from_log2_up(log2_err)).add(&RealBall::zero(), prec);
        }
    }
}

/// Euler's constant by the Brent-McMillan formula:
/// gamma = A/B - log n with A = sum (n^k/k!)^2 H_k, B = sum (n^k/k!)^2,
/// and |error| < pi e^{-4n}.
pub fn euler_gamma_bm(prec: Precision) -> RealBall {
    let target = prec.bits() as f64 + 8.0;
    let n = (target * std::f64::consts::LN_2 / 4.0).ceil() as i64 + 1;
    // 4.9706... solves alpha (log alpha - 1) = 3
    let kmax = (4.970_626 * n as f64).ceil() as i64 + 1;
    let growth = (2.0 * n as f64 * std::f64::consts::LOG2_E).ceil() as u32;
    let wp = prec.plus(32 + growth + 64 - (kmax as u64).leading_zeros());
    let n2 = RealBall::from_int(n * n);
    let mut u = RealBall::one();
    let mut h = RealBall::zero();
    let mut a = RealBall::zero();
    let mut b = RealBall::one();
    for k in 1..=kmax {
        u = u.mul(&n2, wp).div(&RealBall::from_int(k * k), wp).expect("nonzero");
        h = h.add(&RealBall::one().div(&RealBall::from_int(k), wp).expect("nonzero"), wp);
        a = a.add(&u.mul(&h, wp), wp);
        b = b.add(&u, wp);
    }
    // beyond kmax the terms shrink by a factor below (n/k)^2 < 1/24 each step
    let next = u.mul(&n2, wp).div(&RealBall::from_int((kmax + 1) * (kmax + 1)), wp).expect("nonzero");
    let hn = h.add(&RealBall::one(), wp);
    a = a.add_error(next.mul(&hn, wp).mag_upper().mul_2exp(1));
    b = b.add_error(next.mag_upper().mul_2exp(1));
    let logn = log(&RealBall::from_int(n), wp).expect("positive");
    let g = a.div(&b, wp).expect("b > 1").sub(&logn, wp);
    let err = Mag::from_log2_up(std::f64::consts::PI.log2() - 4.0 * n as f64 * std::f64::consts::LOG2_E);
    g.add_error(err).add(&RealBall::zero(), prec)
}
