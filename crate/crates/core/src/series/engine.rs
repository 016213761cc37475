use std::collections::VecDeque;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ball::{mag_ten_pow_neg, ComplexBall, Mag, Precision};
use crate::error::{Error, Result};
use crate::exact::{log2_abs_rational, rational_bits, Rational};

pub const WINDOW: usize = 8;
pub const MAX_RATIO: f64 = 0.9;
pub const MIN_TERMS: usize = 2 * WINDOW;

/// One summand: exact for hypergeometric-type series, a ball for derivative series.
#[derive(Clone, Debug)]
pub enum Term {
    Exact(Rational),
    Ball(ComplexBall),
}

impl Term {
    fn log2_abs(&self) -> f64 {
        match self {
            Term::Exact(q) => log2_abs_rational(q),
            Term::Ball(b) => b.mag_upper().log2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnostics {
    pub terms_used: usize,
    /// Geometric decay rate of the term envelope over the last window.
    pub last_ratio: f64,
    /// Radius added for the truncated tail (ratio-bounded, not certified).
    pub tail_bound: String,
    pub precision_bits: u32,
}

/// Tracks log2 |t_k| and estimates a geometric envelope for the tail.
///
/// Single-term ratios are useless for series whose terms oscillate (complex
/// conjugate roots behind T_k(b, c) with c < 0 make |t_{k+1}/t_k| spike
/// arbitrarily), so the rate is taken from the maxima of two consecutive
/// windows: rho = 2^((E_cur - E_prev) / WINDOW).
#[derive(Debug, Default)]
struct Envelope {
    history: VecDeque<f64>,
}

impl Envelope {
    fn push(&mut self, log2_abs: f64) {
        self.history.push_back(log2_abs);
        if self.history.len() > 2 * WINDOW {
            self.history.pop_front();
        }
    }

    /// (rho, log2 of tail bound); None until two full windows are available.
    fn tail(&self) -> Option<(f64, f64)> {
        if self.history.len() < 2 * WINDOW {
            return None;
        }
        let max = |it: &mut dyn Iterator<Item = &f64>| it.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let prev = max(&mut self.history.iter().take(WINDOW));
        let cur = max(&mut self.history.iter().skip(WINDOW));
        if cur == f64::NEG_INFINITY {
            return Some((0.0, f64::NEG_INFINITY));
        }
        if prev == f64::NEG_INFINITY {
            return Some((f64::INFINITY, f64::INFINITY));
        }
        let rho = ((cur - prev) / WINDOW as f64).exp2();
        if rho >= 1.0 {
            return Some((rho, f64::INFINITY));
        }
        Some((rho, cur + (rho / (1.0 - rho)).log2()))
    }
}

/// Sums a term stream until the ratio-bounded tail drops below 10^-(digits+5).
pub fn sum_terms<I>(terms: I, digits: u32, max_terms: usize, prec: Precision) -> Result<(ComplexBall, SeriesDiagnostics)>
where
    I: IntoIterator<Item = Result<Term>>,
{
    if max_terms < MIN_TERMS {
        return Err(Error::MaxTermsExceeded { terms: max_terms });
    }
    let stop_log2 = mag_ten_pow_neg(digits + 5).log2();
    let flush_bits = 64 * prec.bits() as u64;
    let mut exact = Rational::zero();
    let mut acc = ComplexBall::zero();
    let mut env = Envelope::default();
    let mut used = 0usize;
    let mut last_rho = f64::NAN;
    // the tail of a real-valued stream is real, so its imaginary part stays exactly zero
    let mut complex = false;
    for term in terms.into_iter() {
        if used >= max_terms {
            break;
        }
        let term = term?;
        env.push(term.log2_abs());
        match term {
            Term::Exact(q) => {
                exact += q;
                if rational_bits(&exact) > flush_bits {
                    acc = acc.add(&ComplexBall::from_rational(&exact, prec), prec);
                    exact = Rational::zero();
                }
            }
            Term::Ball(b) => {
                complex |= !b.is_real();
                acc = acc.add(&b, prec);
            }
        }
        used += 1;
        if let Some((rho, tail_log2)) = env.tail() {
            last_rho = rho;
            if rho <= MAX_RATIO && tail_log2 < stop_log2 {
                let tail = Mag::from_log2_up(tail_log2);
                let sum = acc.add(&ComplexBall::from_rational(&exact, prec), prec);
                let (re, im) = sum.into_parts();
                let im = if complex { im.add_error(tail) } else { im };
                let out = ComplexBall::new(re.add_error(tail), im);
                let diag = SeriesDiagnostics {
                    terms_used: used,
                    last_ratio: rho,
                    tail_bound: tail.to_string(),
                    precision_bits: prec.bits(),
                };
                return Ok((out, diag));
            }
        }
    }
    if last_rho.is_nan() || last_rho <= MAX_RATIO {
        Err(Error::MaxTermsExceeded { terms: used })
    } else {
        Err(Error::RatioNotContracting { ratio: last_rho, terms: used })
    }
}
