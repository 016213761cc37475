use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{HarmonicTable, Integer, Poly, Rational, RationalFunction, TrinomialParams, TrinomialSeq};

/// Central-type binomial coefficient C(a k, b k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinomialPattern {
    #[serde(rename = "C2k_k")]
    C2kK,
    #[serde(rename = "C3k_k")]
    C3kK,
    #[serde(rename = "C4k_2k")]
    C4k2k,
    #[serde(rename = "C6k_3k")]
    C6k3k,
}

impl BinomialPattern {
    /// (a, b) with the pattern equal to C(a k, b k).
    pub fn shape(self) -> (u64, u64) {
        match self {
            BinomialPattern::C2kK => (2, 1),
            BinomialPattern::C3kK => (3, 1),
            BinomialPattern::C4k2k => (4, 2),
            BinomialPattern::C6k3k => (6, 3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinomialFactor {
    pub pattern: BinomialPattern,
    pub exponent: i32,
}

/// T_{j k}(b, c)^exponent with j = index_multiplier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrinomialFactor {
    pub index_multiplier: u32,
    #[serde(with = "crate::serde_big::int")]
    pub b: Integer,
    #[serde(with = "crate::serde_big::int")]
    pub c: Integer,
    pub exponent: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HarmonicArg {
    #[serde(rename = "k")]
    K,
    #[serde(rename = "k-1")]
    KMinus1,
    #[serde(rename = "2k")]
    TwoK,
    #[serde(rename = "2k-1")]
    TwoKMinus1,
    #[serde(rename = "3k")]
    ThreeK,
    #[serde(rename = "3k-1")]
    ThreeKMinus1,
    #[serde(rename = "4k")]
    FourK,
}

impl HarmonicArg {
    pub fn at(self, k: i64) -> i64 {
        match self {
            HarmonicArg::K => k,
            HarmonicArg::KMinus1 => k - 1,
            HarmonicArg::TwoK => 2 * k,
            HarmonicArg::TwoKMinus1 => 2 * k - 1,
            HarmonicArg::ThreeK => 3 * k,
            HarmonicArg::ThreeKMinus1 => 3 * k - 1,
            HarmonicArg::FourK => 4 * k,
        }
    }
}

/// coefficient * H_{argument}^{(order)}
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicTerm {
    pub argument: HarmonicArg,
    pub order: u32,
    #[serde(with = "crate::serde_big::rational")]
    pub coefficient: Rational,
}

/// A linear combination of harmonic numbers plus rational functions of k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicGroup {
    pub terms: Vec<HarmonicTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub offset: Vec<RationalFunction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioMode {
    /// value^-k
    InversePower,
    /// value^(k-1)
    PowerKMinus1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioBase {
    #[serde(with = "crate::serde_big::rational")]
    pub value: Rational,
    pub mode: RatioMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtraSign {
    /// (-1)^k
    Alternating,
    /// (-1)^(k-1)
    AlternatingShifted,
}

fn one_poly() -> Poly {
    Poly::constant(1)
}

fn is_one_poly(p: &Poly) -> bool {
    *p == one_poly()
}

/// The k-th summand is
///
/// sign(k) * ratio(k) * prefactor(k) * prod binomials * prod trinomials
///   * (weight(k) * prod_groups G_g(k) + sum offset(k))
///
/// where each group G_g is a combination of harmonic numbers plus rational
/// functions of k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandSpec {
    pub start_index: u64,
    #[serde(default = "one_poly", skip_serializing_if = "is_one_poly")]
    pub polynomial_weight: Poly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_prefactor: Option<RationalFunction>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub binomial_factors: Vec<BinomialFactor>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trinomial_factors: Vec<TrinomialFactor>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub harmonic_groups: Vec<HarmonicGroup>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub offset: Vec<RationalFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_base: Option<RatioBase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_sign: Option<ExtraSign>,
}

impl SummandSpec {
    /// A spec with weight 1 and no factors.
    pub fn new(start_index: u64) -> SummandSpec {
        SummandSpec {
            start_index,
            polynomial_weight: one_poly(),
            rational_prefactor: None,
            binomial_factors: Vec::new(),
            trinomial_factors: Vec::new(),
            harmonic_groups: Vec::new(),
            offset: Vec::new(),
            ratio_base: None,
            extra_sign: None,
        }
    }

    /// Checks that every factor is defined from the start index on.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.start_index > 1 {
            return Err(format!("start_index must be 0 or 1, got {}", self.start_index));
        }
        if let Some(r) = &self.ratio_base {
            if r.value.is_zero() {
                return Err("ratio_base must be nonzero".into());
            }
        }
        for t in &self.trinomial_factors {
            if t.index_multiplier != 1 && t.index_multiplier != 2 {
                return Err(format!("trinomial index_multiplier must be 1 or 2, got {}", t.index_multiplier));
            }
        }
        let k0 = self.start_index as i64;
        for g in &self.harmonic_groups {
            if g.terms.is_empty() && g.offset.is_empty() {
                return Err("empty harmonic group".into());
            }
            for t in &g.terms {
                if t.order == 0 {
                    return Err("harmonic order must be positive".into());
                }
                if t.argument.at(k0) < 0 {
                    return Err(format!("harmonic argument {:?} is negative at k = {k0}", t.argument));
                }
            }
        }
        let rfs = self.rational_prefactor.iter().chain(&self.offset).chain(self.harmonic_groups.iter().flat_map(|g| &g.offset));
        for rf in rfs {
            if rf.den.is_zero() {
                return Err("rational function with zero denominator".into());
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> SummandStream<'_> {
        SummandStream::new(self)
    }
}

fn pow_rational(x: &Rational, e: i32, k: i64) -> Result<Rational> {
    if e >= 0 {
        return Ok(num_traits::pow(x.clone(), e as usize));
    }
    if x.is_zero() {
        return Err(Error::PoleAtPoint { k });
    }
    Ok(num_traits::pow(x.recip(), e.unsigned_abs() as usize))
}

/// Incrementally maintained C(a k, b k).
#[derive(Clone, Debug)]
struct BinomialState {
    a: u64,
    b: u64,
    k: u64,
    value: Integer,
}

impl BinomialState {
    fn new(pattern: BinomialPattern) -> Self {
        let (a, b) = pattern.shape();
        BinomialState { a, b, k: 0, value: Integer::one() }
    }

    fn advance_to(&mut self, k: u64) {
        while self.k < k {
            let (a, b, c) = (self.a, self.b, self.a - self.b);
            let n = self.k;
            let mut num = Integer::one();
            for i in 1..=a {
                num *= a * n + i;
            }
            let mut den = Integer::one();
            for i in 1..=b {
                den *= b * n + i;
            }
            for i in 1..=c {
                den *= c * n + i;
            }
            self.value = &self.value * num / den;
            self.k += 1;
        }
    }
}

/// Exact term stream t_{k0}, t_{k0+1}, ...
pub struct SummandStream<'a> {
    spec: &'a SummandSpec,
    k: u64,
    binomials: Vec<BinomialState>,
    trinomials: Vec<TrinomialSeq>,
    harmonics: Vec<(u32, HarmonicTable)>,
    ratio_pow: Rational,
}

impl<'a> SummandStream<'a> {
    fn new(spec: &'a SummandSpec) -> Self {
        let binomials = spec.binomial_factors.iter().map(|f| BinomialState::new(f.pattern)).collect();
        let trinomials = spec
            .trinomial_factors
            .iter()
            .map(|t| TrinomialSeq::new(TrinomialParams::new(t.b.clone(), t.c.clone())))
            .collect();
        let mut harmonics: Vec<(u32, HarmonicTable)> = Vec::new();
        for g in &spec.harmonic_groups {
            for t in &g.terms {
                if !harmonics.iter().any(|(o, _)| *o == t.order) {
                    harmonics.push((t.order, HarmonicTable::new(t.order)));
                }
            }
        }
        let k = spec.start_index;
        let ratio_pow = match &spec.ratio_base {
            None => Rational::one(),
            Some(r) => {
                let e = match r.mode {
                    RatioMode::InversePower => -(k as i32),
                    RatioMode::PowerKMinus1 => k as i32 - 1,
                };
                pow_rational(&r.value, e, k as i64).expect("nonzero ratio base")
            }
        };
        SummandStream { spec, k, binomials, trinomials, harmonics, ratio_pow }
    }

    pub fn index(&self) -> u64 {
        self.k
    }

    fn harmonic(&mut self, order: u32, n: i64) -> Rational {
        let table = &mut self.harmonics.iter_mut().find(|(o, _)| *o == order).expect("table registered").1;
        table.get(n as u64).clone()
    }

    fn eval_rf(rf: &RationalFunction, k: i64) -> Result<Rational> {
        rf.eval(k).ok_or(Error::PoleAtPoint { k })
    }

    /// Computes t_k for the current k and moves to k + 1.
    pub fn next_term(&mut self) -> Result<Rational> {
        let spec = self.spec;
        let k = self.k as i64;
        let mut t = self.ratio_pow.clone();
        match spec.extra_sign {
            Some(ExtraSign::Alternating) if k % 2 == 1 => t = -t,
            Some(ExtraSign::AlternatingShifted) if k % 2 == 0 => t = -t,
            _ => {}
        }
        if let Some(rf) = &spec.rational_prefactor {
            t *= Self::eval_rf(rf, k)?;
        }
        for (state, f) in self.binomials.iter_mut().zip(&spec.binomial_factors) {
            state.advance_to(k as u64);
            t *= pow_rational(&Rational::from_integer(state.value.clone()), f.exponent, k)?;
        }
        for (seq, f) in self.trinomials.iter_mut().zip(&spec.trinomial_factors) {
            let v = seq.get(f.index_multiplier as usize * k as usize).clone();
            t *= pow_rational(&Rational::from_integer(v), f.exponent, k)?;
        }
        let mut body = Rational::from_integer(spec.polynomial_weight.eval_i64(k));
        for g in &spec.harmonic_groups {
            let mut gv = Rational::zero();
            for term in &g.terms {
                gv += &term.coefficient * self.harmonic(term.order, term.argument.at(k));
            }
            for rf in &g.offset {
                gv += Self::eval_rf(rf, k)?;
            }
            body *= gv;
        }
        for rf in &spec.offset {
            body += Self::eval_rf(rf, k)?;
        }
        t *= body;

        if let Some(r) = &spec.ratio_base {
            match r.mode {
                RatioMode::InversePower => self.ratio_pow /= &r.value,
                RatioMode::PowerKMinus1 => self.ratio_pow *= &r.value,
            }
        }
        self.k += 1;
        Ok(t)
    }
}

impl Iterator for SummandStream<'_> {
    type Item = Result<Rational>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_term())
    }
}
