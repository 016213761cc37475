//! Exact integer and rational kernels: binomials, generalized central
//! trinomial coefficients, harmonic numbers and integer polynomials.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Binomial coefficient C(n, k); zero when `k` lies outside `[0, n]`.
pub fn binomial(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return Integer::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = Integer::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Parameters `(b, c)` of T_n(b, c), the coefficient of x^n in (x^2 + bx + c)^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrinomialParams {
    pub b: Integer,
    pub c: Integer,
}

impl TrinomialParams {
    pub fn new(b: impl Into<Integer>, c: impl Into<Integer>) -> Self {
        TrinomialParams { b: b.into(), c: c.into() }
    }

    /// b^2 - 4c. Zero means T_n(b, c) degenerates to b^n C(2n, n) / 2^n.
    pub fn discriminant(&self) -> Integer {
        &self.b * &self.b - Integer::from(4) * &self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrinomialMode {
    Direct,
    Recurrence,
}

/// T_n(b, c) by the requested method. Both methods agree.
pub fn trinomial(n: u64, params: &TrinomialParams, mode: TrinomialMode) -> Integer {
    match mode {
        TrinomialMode::Direct => trinomial_direct(n, params),
        TrinomialMode::Recurrence => trinomial_prefix(n, params).pop().unwrap_or_else(Integer::one),
    }
}

/// Sum over j of C(n, 2j) C(2j, j) b^(n-2j) c^j.
pub fn trinomial_direct(n: u64, params: &TrinomialParams) -> Integer {
    let mut total = Integer::zero();
    let mut c_pow = Integer::one();
    let mut central = Integer::one(); // C(2j, j)
    let mut outer = Integer::one(); // C(n, 2j)
    for j in 0..=n / 2 {
        if j > 0 {
            c_pow *= &params.c;
            central = central * (2 * j) * (2 * j - 1) / (j * j);
            outer = outer * (n - 2 * j + 2) * (n - 2 * j + 1) / ((2 * j - 1) * (2 * j));
        }
        let b_pow = num_traits::pow(params.b.clone(), (n - 2 * j) as usize);
        total += &outer * &central * b_pow * &c_pow;
    }
    total
}

/// The whole prefix T_0..=T_n via (k+1)T_{k+1} = (2k+1) b T_k - k (b^2 - 4c) T_{k-1}.
pub fn trinomial_prefix(n: u64, params: &TrinomialParams) -> Vec<Integer> {
    let mut seq = TrinomialSeq::new(params.clone());
    seq.ensure(n as usize);
    seq.values.truncate(n as usize + 1);
    seq.values
}

/// Growable prefix of T_k(b, c), extended on demand by the three-term recurrence.
#[derive(Debug, Clone)]
pub struct TrinomialSeq {
    params: TrinomialParams,
    disc: Integer,
    values: Vec<Integer>,
}

impl TrinomialSeq {
    pub fn new(params: TrinomialParams) -> Self {
        let disc = params.discriminant();
        let values = vec![Integer::one(), params.b.clone()];
        TrinomialSeq { params, disc, values }
    }

    pub fn ensure(&mut self, n: usize) {
        while self.values.len() <= n {
            let k = self.values.len() - 1;
            let next = (Integer::from(2 * k + 1) * &self.params.b * &self.values[k]
                - Integer::from(k) * &self.disc * &self.values[k - 1])
                / Integer::from(k + 1);
            self.values.push(next);
        }
    }

    pub fn get(&mut self, n: usize) -> &Integer {
        self.ensure(n);
        &self.values[n]
    }
}

/// H_n^{(order)} = sum_{0<k<=n} k^{-order}.
pub fn harmonic(n: u64, order: u32) -> Rational {
    let mut s = HarmonicStream::new(order);
    while s.index() < n {
        s.advance();
    }
    s.value().clone()
}

/// Incrementally extended H_n^{(order)}.
#[derive(Debug, Clone)]
pub struct HarmonicStream {
    order: u32,
    n: u64,
    value: Rational,
}

impl HarmonicStream {
    pub fn new(order: u32) -> Self {
        assert!(order >= 1, "harmonic order must be positive");
        HarmonicStream { order, n: 0, value: Rational::zero() }
    }

    pub fn index(&self) -> u64 {
        self.n
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    /// Moves from H_n to H_{n+1}.
    pub fn advance(&mut self) -> &Rational {
        self.n += 1;
        let den = num_traits::pow(Integer::from(self.n), self.order as usize);
        self.value += Rational::new(Integer::one(), den);
        &self.value
    }
}

/// Cached table H_0..H_n of one order, grown on demand.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    stream: HarmonicStream,
    values: Vec<Rational>,
}

impl HarmonicTable {
    pub fn new(order: u32) -> Self {
        HarmonicTable { stream: HarmonicStream::new(order), values: vec![Rational::zero()] }
    }

    pub fn get(&mut self, n: u64) -> &Rational {
        while (self.values.len() as u64) <= n {
            let v = self.stream.advance().clone();
            self.values.push(v);
        }
        &self.values[n as usize]
    }
}

/// Integer-coefficient polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(#[serde(with = "crate::serde_big::int_vec")] pub Vec<Integer>);

impl Poly {
    pub fn new<I: Into<Integer>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        let mut p = Poly(coeffs.into_iter().map(Into::into).collect());
        p.trim();
        p
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        Poly::new([c.into()])
    }

    /// The monomial x^d.
    pub fn monomial(d: usize) -> Self {
        let mut v = vec![Integer::zero(); d + 1];
        v[d] = Integer::one();
        Poly(v)
    }

    fn trim(&mut self) {
        while self.0.len() > 1 && self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        self.0.iter().rev().fold(Integer::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> Integer {
        self.eval(&Integer::from(x))
    }

    pub fn eval_mod(&self, x: u64, modulus: u64) -> u64 {
        let m = Integer::from(modulus);
        let mut acc: u64 = 0;
        for c in self.0.iter().rev() {
            let cm = c.mod_floor(&m).to_u64().unwrap_or(0);
            acc = ((acc as u128 * x as u128 + cm as u128) % modulus as u128) as u64;
        }
        acc
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Integer::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Coefficients of p(k + t) as a polynomial in t, truncated to degree `order`.
    pub fn taylor_at(&self, k: &Integer, order: usize) -> Vec<Rational> {
        let n = self.0.len();
        (0..=order)
            .map(|j| {
                if j >= n {
                    return Rational::zero();
                }
                let mut s = Integer::zero();
                for (i, c) in self.0.iter().enumerate().skip(j) {
                    s += c * binomial(i as u64, j as i64) * num_traits::pow(k.clone(), i - j);
                }
                Rational::from_integer(s)
            })
            .collect()
    }
}

/// Quotient of two integer polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalFunction {
    pub num: Poly,
    #[serde(default = "Poly::one_poly")]
    pub den: Poly,
}

impl Poly {
    fn one_poly() -> Poly {
        Poly::constant(1)
    }
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Self {
        RationalFunction { num, den }
    }

    /// `None` when the denominator vanishes at `x`.
    pub fn eval(&self, x: i64) -> Option<Rational> {
        let d = self.den.eval_i64(x);
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(self.num.eval_i64(x), d))
    }
}

/// Approximate log2 |x| for a nonzero big integer (about 50 correct bits).
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 60 {
        return x.to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 60;
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    top.log2() + shift as f64
}

/// Approximate log2 |q|; negative infinity for zero.
pub fn log2_abs_rational(q: &Rational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_biguint(q.numer().magnitude()) - log2_biguint(q.denom().magnitude())
}

/// Bit size of numerator plus denominator.
pub fn rational_bits(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

/// Parses "p", "-p" or "p/q" into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().ok()?;
            let d: Integer = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<Integer>().ok().map(Rational::from_integer),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// (-1)^k as an integer sign.
pub fn sign_pow(k: i64) -> i32 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn is_negative(x: &Integer) -> bool {
    x.sign() == Sign::Minus
}

pub fn abs_int(x: &Integer) -> Integer {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(6, 3), int(20));
        assert_eq!(binomial(10, 5), int(252));
        assert_eq!(binomial(5, 7), int(0));
        assert_eq!(binomial(5, -1), int(0));
        assert_eq!(binomial(0, 0), int(1));
    }

    #[test]
    fn trinomial_examples() {
        for mode in [TrinomialMode::Direct, TrinomialMode::Recurrence] {
            assert_eq!(trinomial(0, &TrinomialParams::new(7, 3), mode), int(1));
            assert_eq!(trinomial(3, &TrinomialParams::new(2, 1), mode), int(20));
            assert_eq!(trinomial(2, &TrinomialParams::new(1, -12), mode), int(-23));
            assert_eq!(trinomial(1, &TrinomialParams::new(19, -20), mode), int(19));
        }
    }

    #[test]
    fn trinomial_matches_polynomial_expansion() {
        // coefficient of x^n in (x^2 + bx + c)^n by repeated multiplication
        for (b, c) in [(1, -12), (8, -3), (0, 5), (3, 0)] {
            let base = Poly::new([int(c), int(b), int(1)]);
            let mut acc = Poly::constant(1);
            for n in 0..12u64 {
                let expected = acc.0.get(n as usize).cloned().unwrap_or_default();
                assert_eq!(trinomial_direct(n, &TrinomialParams::new(b, c)), expected);
                acc = acc.mul(&base);
            }
        }
    }

    #[test]
    fn central_binomial_special_case() {
        let p = TrinomialParams::new(2, 1);
        let prefix = trinomial_prefix(200, &p);
        for n in 0..=200u64 {
            assert_eq!(prefix[n as usize], binomial(2 * n, n as i64));
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(0, 1), Rational::zero());
        assert_eq!(harmonic(3, 1), Rational::new(int(11), int(6)));
        assert_eq!(harmonic(4, 2), Rational::new(int(205), int(144)));
    }

    #[test]
    fn harmonic_table_consistent_with_stream() {
        let mut t = HarmonicTable::new(3);
        assert_eq!(t.get(5).clone(), harmonic(5, 3));
        assert_eq!(t.get(2).clone(), harmonic(2, 3));
    }

    #[test]
    fn polynomial_taylor_shift() {
        // p(x) = 3x^2 - 2x + 1 at k = 2: p(2+t) = 9 + 10t + 3t^2
        let p = Poly::new([int(1), int(-2), int(3)]);
        let t = p.taylor_at(&int(2), 3);
        let expect: Vec<Rational> = [9, 10, 3, 0].iter().map(|&v| Rational::from_integer(int(v))).collect();
        assert_eq!(t, expect);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6"), Some(Rational::new(int(-1), int(2))));
        assert_eq!(parse_rational("17"), Some(Rational::from_integer(int(17))));
        assert_eq!(parse_rational("1/0"), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn trinomial_direct_equals_recurrence(b in -50i64..=50, c in -50i64..=50) {
            let p = TrinomialParams::new(b, c);
            let prefix = trinomial_prefix(200, &p);
            for n in 0..=200u64 {
                prop_assert_eq!(&prefix[n as usize], &trinomial_direct(n, &p));
            }
        }

        #[test]
        fn pascal_identity(n in 1u64..=500, k in -3i64..=503) {
            prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }

        #[test]
        fn harmonic_increment(n in 1u64..=60, m in 1u32..=6) {
            let diff = harmonic(n, m) - harmonic(n - 1, m);
            let expect = Rational::new(int(1), num_traits::pow(int(n as i64), m as usize));
            prop_assert_eq!(diff, expect);
        }
    }
}
