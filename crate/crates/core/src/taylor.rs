//! Derivatives of gamma-quotient functions at positive integers via truncated
//! Taylor series.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::ball::{ComplexBall, Precision, RealBall};
use crate::constants::{self, ConstExpr};
use crate::error::{Error, Result};
use crate::exact::{HarmonicTable, Integer, Rational, RationalFunction};

pub const MAX_ORDER: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum Factor {
    /// Gamma(a x + b)^e
    GammaPower { a: u32, b: i64, e: i32 },
    RationalFactor(RationalFunction),
    /// e^(pi i x)
    ExpPiIX,
    /// c0 + c1 psi^(r)(a x + b)
    PolygammaAffine {
        r: u32,
        a: u32,
        b: i64,
        #[serde(with = "crate::serde_big::const_expr")]
        c0: ConstExpr,
        #[serde(with = "crate::serde_big::rational")]
        c1: Rational,
    },
}

/// scale * product of factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionExpr {
    #[serde(with = "crate::serde_big::rational", default = "Rational::one")]
    pub scale: Rational,
    pub factors: Vec<Factor>,
}

impl FunctionExpr {
    pub fn new(factors: Vec<Factor>) -> Self {
        FunctionExpr { scale: Rational::one(), factors }
    }

    pub fn is_real(&self) -> bool {
        !self.factors.iter().any(|f| matches!(f, Factor::ExpPiIX))
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.scale.is_zero() {
            return Err("scale must be nonzero".into());
        }
        for f in &self.factors {
            match f {
                Factor::GammaPower { a, .. } | Factor::PolygammaAffine { a, .. } if *a == 0 => {
                    return Err("gamma and polygamma arguments need a >= 1".into())
                }
                Factor::RationalFactor(r) if r.den.is_zero() => return Err("zero denominator polynomial".into()),
                Factor::PolygammaAffine { c0, .. } => c0.validate()?,
                _ => {}
            }
        }
        Ok(())
    }

    /// Largest zeta index touched by an order-m expansion.
    fn zeta_reach(&self, m: u32) -> u32 {
        let mut reach = m.max(2);
        for f in &self.factors {
            if let Factor::PolygammaAffine { r, .. } = f {
                reach = reach.max(r + m + 1);
            }
        }
        reach
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativeSeriesSpec {
    pub fexpr: FunctionExpr,
    pub order: u32,
    pub start: u64,
}

impl DerivativeSeriesSpec {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.order > MAX_ORDER {
            return Err(format!("derivative order {} exceeds {MAX_ORDER}", self.order));
        }
        if self.start == 0 {
            return Err("start index must be positive".into());
        }
        self.fexpr.validate()
    }

    /// Stream of f^(m)(k) for k = start, start + 1, ...
    pub fn terms(&self, prec: Precision) -> Result<impl Iterator<Item = Result<ComplexBall>> + '_> {
        self.validate().map_err(Error::DomainViolation)?;
        let sv = SpecialValues::new(self.fexpr.zeta_reach(self.order), prec);
        let mut ev = Evaluator::new(sv);
        Ok((self.start..).map(move |k| ev.derivative(&self.fexpr, k, self.order)))
    }
}

/// Enclosures of gamma, pi and zeta(2..=reach) shared by every term.
#[derive(Clone, Debug)]
pub struct SpecialValues {
    pub prec: Precision,
    pub gamma: RealBall,
    pub pi: RealBall,
    zeta: Vec<RealBall>,
}

impl SpecialValues {
    pub fn new(reach: u32, prec: Precision) -> Self {
        let zeta = (0..=reach.max(2))
            .map(|j| if j < 2 { RealBall::zero() } else { constants::zeta(j, prec).expect("zeta(j >= 2)") })
            .collect();
        SpecialValues { prec, gamma: constants::euler_gamma(prec), pi: constants::pi(prec), zeta }
    }

    /// Replaces the Euler constant, for checking that it cancels.
    pub fn with_gamma(mut self, gamma: RealBall) -> Self {
        self.gamma = gamma;
        self
    }

    fn zeta(&mut self, j: u32) -> &RealBall {
        while self.zeta.len() <= j as usize {
            let s = self.zeta.len() as u32;
            self.zeta.push(constants::zeta(s, self.prec).expect("zeta(j >= 2)"));
        }
        &self.zeta[j as usize]
    }
}

fn factorial(n: u64) -> Integer {
    (1..=n).fold(Integer::one(), |acc, i| acc * i)
}

/// Evaluator state: special values plus harmonic tables grown incrementally
/// across consecutive k.
struct Evaluator {
    sv: SpecialValues,
    harmonics: Vec<HarmonicTable>,
}

impl Evaluator {
    fn new(sv: SpecialValues) -> Self {
        Evaluator { sv, harmonics: Vec::new() }
    }

    fn harmonic(&mut self, n: u64, order: u32) -> Rational {
        while self.harmonics.len() <= order as usize {
            let o = self.harmonics.len() as u32;
            self.harmonics.push(HarmonicTable::new(o.max(1)));
        }
        self.harmonics[order as usize].get(n).clone()
    }

    /// psi^(r)(n) = exact + coef * K with K = -gamma (r = 0) or zeta(r + 1).
    fn polygamma_parts(&mut self, r: u32, n: u64) -> (Rational, Rational) {
        if r == 0 {
            return (self.harmonic(n - 1, 1), Rational::one());
        }
        let sign = if r % 2 == 1 { Integer::one() } else { -Integer::one() };
        let c = Rational::from_integer(sign * factorial(r as u64));
        (-&c * self.harmonic(n - 1, r + 1), c)
    }

    fn polygamma(&mut self, r: u32, n: u64) -> RealBall {
        let prec = self.sv.prec;
        let (q, c) = self.polygamma_parts(r, n);
        let k = if r == 0 { self.sv.gamma.neg() } else { self.sv.zeta(r + 1).clone() };
        RealBall::from_rational(&q, prec).add(&k.mul_rational(&c, prec), prec)
    }

    fn derivative(&mut self, f: &FunctionExpr, k: u64, m: u32) -> Result<ComplexBall> {
        if m > MAX_ORDER {
            return Err(Error::DomainViolation(format!("derivative order {m} exceeds {MAX_ORDER}")));
        }
        let prec = self.sv.prec;
        let len = m as usize + 1;
        let ki = k as i64;

        // exact part: scale * rational factors * Gamma values
        let mut exact = vec![Rational::zero(); len];
        exact[0] = f.scale.clone();
        // log-series: exact coefficient, coefficient of -gamma (j = 1) or zeta(j)
        let mut log_q = vec![Rational::zero(); len];
        let mut log_c = vec![Rational::zero(); len];
        let mut pi_i = 0i64;
        let mut odd = false;
        let mut poly_factors = Vec::new();

        for fac in &f.factors {
            match fac {
                Factor::GammaPower { a, b, e } => {
                    let n = gamma_arg(*a, *b, ki)?;
                    let g = Rational::from_integer(factorial(n - 1));
                    let v = if *e >= 0 { num_traits::pow(g, *e as usize) } else { num_traits::pow(g.recip(), (-*e) as usize) };
                    for c in exact.iter_mut() {
                        *c *= &v;
                    }
                    // log Gamma(n + a t) = log Gamma(n) + sum_j psi^(j-1)(n) a^j t^j / j!
                    let mut aj = Rational::one();
                    for j in 1..len {
                        aj *= Rational::from_integer((*a).into());
                        let w = &aj * Rational::from_integer((*e).into()) / Rational::from_integer(factorial(j as u64));
                        let (q, c) = self.polygamma_parts(j as u32 - 1, n);
                        log_q[j] += &w * q;
                        log_c[j] += w * c;
                    }
                }
                Factor::RationalFactor(r) => {
                    let kk = Integer::from(ki);
                    let num = r.num.taylor_at(&kk, m as usize);
                    let den = r.den.taylor_at(&kk, m as usize);
                    if den[0].is_zero() {
                        return Err(Error::PoleAtPoint { k: ki });
                    }
                    let q = series_div(&num, &den);
                    exact = series_mul_exact(&exact, &q);
                }
                Factor::ExpPiIX => {
                    pi_i += 1;
                    odd ^= k % 2 == 1;
                }
                Factor::PolygammaAffine { r, a, b, c0, c1 } => {
                    let n = gamma_arg(*a, *b, ki)?;
                    poly_factors.push((*r, *a, n, c0, c1));
                }
            }
        }

        let wp = prec.plus(16 + 4 * m);
        let mut total: Vec<ComplexBall> = exact.iter().map(|q| ComplexBall::from_rational(q, wp)).collect();

        if len > 1 {
            let mut l = vec![ComplexBall::zero(); len];
            for j in 1..len {
                let k_val = if j == 1 { self.sv.gamma.neg() } else { self.sv.zeta(j as u32).clone() };
                let re = RealBall::from_rational(&log_q[j], wp).add(&k_val.mul_rational(&log_c[j], wp), wp);
                l[j] = ComplexBall::from_real(re);
            }
            if pi_i != 0 {
                let im = self.sv.pi.mul_int(pi_i, wp);
                l[1] = ComplexBall::new(l[1].re().clone(), im);
            }
            total = series_mul(&total, &series_exp(&l, wp), wp);
        }

        for (r, a, n, c0, c1) in poly_factors {
            let mut q = vec![ComplexBall::zero(); len];
            let mut aj = Rational::one();
            for (j, slot) in q.iter_mut().enumerate() {
                let w = c1 * &aj / Rational::from_integer(factorial(j as u64));
                *slot = ComplexBall::from_real(self.polygamma(r + j as u32, n).mul_rational(&w, wp));
                aj *= Rational::from_integer(a.into());
            }
            q[0] = q[0].add(&c0.eval(wp)?, wp);
            total = series_mul(&total, &q, wp);
        }

        let mut out = total[m as usize].mul_rational(&Rational::from_integer(factorial(m as u64)), prec);
        if odd {
            out = out.neg();
        }
        Ok(out)
    }
}

fn gamma_arg(a: u32, b: i64, k: i64) -> Result<u64> {
    let n = a as i64 * k + b;
    if n < 1 {
        return Err(Error::DomainViolation(format!("gamma argument {a}*{k}{b:+} = {n} is below 1")));
    }
    Ok(n as u64)
}

fn series_div(num: &[Rational], den: &[Rational]) -> Vec<Rational> {
    let mut q: Vec<Rational> = Vec::with_capacity(num.len());
    for j in 0..num.len() {
        let mut s = num[j].clone();
        for i in 1..=j {
            s -= &den[i] * &q[j - i];
        }
        q.push(s / &den[0]);
    }
    q
}

fn series_mul_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    (0..a.len()).map(|j| (0..=j).fold(Rational::zero(), |s, i| s + &a[i] * &b[j - i])).collect()
}

fn series_mul(a: &[ComplexBall], b: &[ComplexBall], prec: Precision) -> Vec<ComplexBall> {
    (0..a.len())
        .map(|j| (0..=j).fold(ComplexBall::zero(), |s, i| s.add(&a[i].mul(&b[j - i], prec), prec)))
        .collect()
}

/// exp of a series with zero constant term.
fn series_exp(l: &[ComplexBall], prec: Precision) -> Vec<ComplexBall> {
    let mut e = vec![ComplexBall::one()];
    for n in 1..l.len() {
        let mut s = ComplexBall::zero();
        for j in 1..=n {
            s = s.add(&l[j].mul(&e[n - j], prec).mul_rational(&Rational::from_integer(j.into()), prec), prec);
        }
        e.push(s.mul_rational(&Rational::new(1.into(), (n as i64).into()), prec));
    }
    e
}

/// psi^(r)(n) at a positive integer, from gamma, zeta and harmonic numbers.
pub fn polygamma_int(r: u32, n: u64, prec: Precision) -> Result<RealBall> {
    if n == 0 {
        return Err(Error::DomainViolation("polygamma needs a positive integer argument".into()));
    }
    let mut ev = Evaluator::new(SpecialValues::new(r + 1, prec));
    Ok(ev.polygamma(r, n))
}

/// f^(m)(k).
pub fn derivative_at(f: &FunctionExpr, k: u64, m: u32, prec: Precision) -> Result<ComplexBall> {
    let sv = SpecialValues::new(f.zeta_reach(m), prec);
    derivative_with(f, k, m, sv)
}

/// f^(m)(k) using caller-supplied special values.
pub fn derivative_with(f: &FunctionExpr, k: u64, m: u32, sv: SpecialValues) -> Result<ComplexBall> {
    f.validate().map_err(Error::DomainViolation)?;
    Evaluator::new(sv).derivative(f, k, m)
}

/// f^(m)(k) exactly, when f is a rational function times a constant.
pub fn derivative_rational(f: &FunctionExpr, k: u64, m: u32) -> Result<Option<Rational>> {
    let mut acc = vec![Rational::zero(); m as usize + 1];
    acc[0] = f.scale.clone();
    for fac in &f.factors {
        let Factor::RationalFactor(r) = fac else { return Ok(None) };
        let kk = Integer::from(k);
        let den = r.den.taylor_at(&kk, m as usize);
        if den[0].is_zero() {
            return Err(Error::PoleAtPoint { k: k as i64 });
        }
        acc = series_mul_exact(&acc, &series_div(&r.num.taylor_at(&kk, m as usize), &den));
    }
    Ok(Some(&acc[m as usize] * Rational::from_integer(factorial(m as u64))))
}

/// Sum over Gamma factors of a * e; zero means the Euler constant cancels
/// from every derivative.
pub fn gamma_balance(f: &FunctionExpr) -> i64 {
    f.factors
        .iter()
        .map(|fac| match fac {
            Factor::GammaPower { a, e, .. } => *a as i64 * *e as i64,
            _ => 0,
        })
        .sum()
}
