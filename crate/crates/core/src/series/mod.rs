//! Term streams, ratio-bounded summation and numerical verdicts.

mod engine;
mod summand;

pub use engine::{sum_terms, SeriesDiagnostics, Term, MAX_RATIO, MIN_TERMS, WINDOW};
pub use summand::{
    BinomialFactor, BinomialPattern, ExtraSign, HarmonicArg, HarmonicGroup, HarmonicTerm, RatioBase, RatioMode,
    SummandSpec, SummandStream, TrinomialFactor,
};

use crate::ball::{enclosure_check, ComplexBall, Precision, ZeroCheck};
use crate::constants::ConstExpr;
use crate::error::{Error, Result};
use crate::report::{Verdict, VerificationReport};
use crate::taylor::DerivativeSeriesSpec;

pub const DEFAULT_MAX_TERMS: usize = 20_000;
pub const MAX_RETRIES: u32 = 4;

#[derive(Clone, Copy, Debug)]
pub enum SeriesRef<'a> {
    Summand(&'a SummandSpec),
    Derivative(&'a DerivativeSeriesSpec),
}

/// Encloses the infinite sum, stopping once the tail estimate is below
/// 10^-(digits+5).
pub fn sum_series(
    spec: SeriesRef<'_>,
    digits: u32,
    max_terms: usize,
    prec: Precision,
) -> Result<(ComplexBall, SeriesDiagnostics)> {
    match spec {
        SeriesRef::Summand(s) => sum_terms(s.terms().map(|t| t.map(Term::Exact)), digits, max_terms, prec),
        SeriesRef::Derivative(d) => {
            let terms = d.terms(prec.plus(32))?;
            sum_terms(terms.map(|t| t.map(Term::Ball)), digits, max_terms, prec)
        }
    }
}

fn fold_error(e: &Error) -> Verdict {
    match e {
        Error::RatioNotContracting { ratio, terms } => Verdict::Inconclusive {
            reason: format!("term ratio {ratio:.3} above {MAX_RATIO} after {terms} terms"),
        },
        Error::MaxTermsExceeded { terms } => Verdict::Inconclusive { reason: format!("no convergence within {terms} terms") },
        other => Verdict::Inconclusive { reason: other.to_string() },
    }
}

/// Compares the series against `rhs` to `digits` digits, doubling the working
/// precision on an indeterminate comparison up to MAX_RETRIES times.
pub fn verify_series(
    id: &str,
    spec: SeriesRef<'_>,
    rhs: &ConstExpr,
    digits: u32,
    max_terms: usize,
) -> VerificationReport {
    verify_series_with(id, spec, |p| rhs.eval(p), digits, max_terms)
}

/// As `verify_series`, with the right side given by an evaluator at a precision.
pub fn verify_series_with(
    id: &str,
    spec: SeriesRef<'_>,
    rhs: impl Fn(Precision) -> Result<ComplexBall>,
    digits: u32,
    max_terms: usize,
) -> VerificationReport {
    let mut prec = Precision::from_digits(digits);
    let mut report = VerificationReport::new(id, Verdict::Inconclusive { reason: String::new() });
    for attempt in 0..=MAX_RETRIES {
        let (lhs, diag) = match sum_series(spec, digits, max_terms, prec) {
            Ok(v) => v,
            Err(e) => {
                report.verdict = fold_error(&e);
                return report;
            }
        };
        let rhs_val = match rhs(prec) {
            Ok(v) => v,
            Err(e) => {
                report.verdict = Verdict::Inconclusive { reason: format!("right-hand side: {e}") };
                return report;
            }
        };
        let diff = lhs.sub(&rhs_val, prec);
        let shown = digits as usize + 3;
        report.lhs = Some(format!("{lhs:.shown$}"));
        report.rhs = Some(format!("{rhs_val:.shown$}"));
        report.diff_bound = Some(diff.re().mag_upper().max(diff.im().mag_upper()).to_string());
        report.diagnostics = Some(diag);
        match enclosure_check(&diff, digits) {
            ZeroCheck::ZeroToD => {
                report.verdict = Verdict::Pass { digits: Some(digits) };
                return report;
            }
            ZeroCheck::NonzeroCertified => {
                report.verdict = Verdict::Fail { digits: Some(digits) };
                return report;
            }
            ZeroCheck::Indeterminate => {
                report.verdict = Verdict::Inconclusive {
                    reason: format!("enclosure straddles 10^-{digits} after {} precision doublings", attempt),
                };
                prec = prec.doubled();
            }
        }
    }
    report
}
