use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{binomial, Integer, Poly, Rational, TrinomialParams, TrinomialSeq};
use crate::report::{Verdict, VerificationReport};

pub const DEFAULT_N_MAX: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Divisor {
    /// n C(2n, n)
    NCentral,
    /// 2n C(2n, n)
    TwoNCentral,
    /// n C(2n-1, n-1)
    NCentralShifted,
}

impl Divisor {
    pub fn at(self, n: u64) -> Integer {
        match self {
            Divisor::NCentral => binomial(2 * n, n as i64) * n,
            Divisor::TwoNCentral => binomial(2 * n, n as i64) * (2 * n),
            Divisor::NCentralShifted => binomial(2 * n - 1, n as i64 - 1) * n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityPattern {
    AlwaysOdd,
    /// odd iff n = 2^a + 1 with a >= 0
    OddIffPowerOfTwoPlusOne,
    /// odd iff n = 2^a with a >= 1
    OddIffPowerOfTwo,
}

impl ParityPattern {
    pub fn expects_odd(self, n: u64) -> bool {
        match self {
            ParityPattern::AlwaysOdd => true,
            ParityPattern::OddIffPowerOfTwoPlusOne => n >= 2 && (n - 1).is_power_of_two(),
            ParityPattern::OddIffPowerOfTwo => n >= 2 && n.is_power_of_two(),
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            ParityPattern::AlwaysOdd => "always odd",
            ParityPattern::OddIffPowerOfTwoPlusOne => "odd iff n in {2^a+1 : a >= 0}",
            ParityPattern::OddIffPowerOfTwo => "odd iff n in {2^a : a >= 1}",
        }
    }
}

/// numerator / divisor(n) * sum_{k<n} s_k w(k) base^(2(n-1-k)) C(2k,k) T_k(b,c) T_2k(b*,c*)
/// with s_k = (-1)^k when `alternating`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegralitySpec {
    pub weight: Poly,
    #[serde(default)]
    pub alternating: bool,
    #[serde(with = "crate::serde_big::int")]
    pub base: Integer,
    #[serde(with = "crate::serde_big::int")]
    pub b: Integer,
    #[serde(with = "crate::serde_big::int")]
    pub c: Integer,
    #[serde(with = "crate::serde_big::int")]
    pub b_star: Integer,
    #[serde(with = "crate::serde_big::int")]
    pub c_star: Integer,
    #[serde(with = "crate::serde_big::rational", default = "Rational::one")]
    pub numerator: Rational,
    pub divisor: Divisor,
    #[serde(default = "one_u64")]
    pub min_n: u64,
    #[serde(default = "yes")]
    pub claims_positive: bool,
    pub parity: ParityPattern,
}

fn one_u64() -> u64 {
    1
}

fn yes() -> bool {
    true
}

impl IntegralitySpec {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.min_n == 0 {
            return Err("min_n must be positive".into());
        }
        if self.numerator.is_zero() || self.base.is_zero() {
            return Err("numerator and base must be nonzero".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub n: u64,
    pub is_integer: bool,
    pub is_positive: bool,
    /// None when the quotient is not an integer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd: Option<bool>,
    pub expected_odd: bool,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn report_for(spec: &IntegralitySpec, n: u64, sum: &Integer) -> IntegralityReport {
    let q = &spec.numerator * Rational::new(sum.clone(), spec.divisor.at(n));
    let is_integer = q.is_integer();
    let is_positive = q.is_positive();
    let odd = is_integer.then(|| q.to_integer().is_odd());
    let expected_odd = spec.parity.expects_odd(n);
    let matches = is_integer && (is_positive || !spec.claims_positive) && odd == Some(expected_odd);
    IntegralityReport { n, is_integer, is_positive, odd, expected_odd, matches }
}

/// Reports for n = min_n..=n_max; S(n+1) = base^2 S(n) + term(n).
pub fn check_integrality_range(spec: &IntegralitySpec, n_max: u64) -> Vec<IntegralityReport> {
    let mut t1 = TrinomialSeq::new(TrinomialParams::new(spec.b.clone(), spec.c.clone()));
    let mut t2 = TrinomialSeq::new(TrinomialParams::new(spec.b_star.clone(), spec.c_star.clone()));
    let base2 = &spec.base * &spec.base;
    let mut sum = Integer::zero();
    let mut out = Vec::new();
    for n in 1..=n_max {
        let k = n - 1;
        let mut term = spec.weight.eval_i64(k as i64) * binomial(2 * k, k as i64);
        term *= t1.get(k as usize);
        term *= t2.get(2 * k as usize);
        if spec.alternating && k % 2 == 1 {
            term = -term;
        }
        sum = &sum * &base2 + term;
        if n >= spec.min_n {
            out.push(report_for(spec, n, &sum));
        }
    }
    out
}

pub fn check_integrality(spec: &IntegralitySpec, n: u64) -> IntegralityReport {
    check_integrality_range(spec, n).pop().unwrap_or(IntegralityReport {
        n,
        is_integer: false,
        is_positive: false,
        odd: None,
        expected_odd: spec.parity.expects_odd(n),
        matches: false,
    })
}

pub fn integrality_report(id: &str, spec: &IntegralitySpec, n_max: u64) -> VerificationReport {
    let rows = check_integrality_range(spec, n_max);
    let bad: Vec<String> = rows.iter().filter(|r| !r.matches).map(|r| r.n.to_string()).collect();
    let verdict = if rows.is_empty() {
        Verdict::Skip { reason: format!("no n in {}..={n_max}", spec.min_n) }
    } else if bad.is_empty() {
        Verdict::Pass { digits: None }
    } else {
        Verdict::Fail { digits: None }
    };
    let mut rep = VerificationReport::new(id, verdict);
    let mut detail = format!("n = {}..={n_max}, parity pattern: {}", spec.min_n, spec.parity.describe());
    if !bad.is_empty() {
        detail.push_str(&format!("; mismatches at n = {}", bad.join(", ")));
    }
    rep.detail = Some(detail);
    rep.indices = rows;
    rep
}
