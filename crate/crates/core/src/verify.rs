//! Runs a catalog entry through the matching engine.

use std::time::Instant;

use crate::congruence::{check_congruence_range, integrality_report, DEFAULT_N_MAX, DEFAULT_PRIME_MAX};
use crate::registry::{ConjectureEntry, Payload};
use crate::report::{Verdict, VerificationReport};
use crate::series::{verify_series_with, SeriesRef, DEFAULT_MAX_TERMS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub digits: u32,
    pub max_terms: usize,
    pub prime_max: u64,
    pub n_max: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { digits: 25, max_terms: DEFAULT_MAX_TERMS, prime_max: DEFAULT_PRIME_MAX, n_max: DEFAULT_N_MAX }
    }
}

pub fn verify_entry(entry: &ConjectureEntry, cfg: &RunConfig) -> VerificationReport {
    let start = Instant::now();
    let mut rep = match (&entry.payload, &entry.rhs) {
        (Payload::Series(s), Some(rhs)) => {
            verify_series_with(&entry.id, SeriesRef::Summand(s), |p| rhs.eval(p), cfg.digits, cfg.max_terms)
        }
        (Payload::DerivativeSeries(d), Some(rhs)) => {
            verify_series_with(&entry.id, SeriesRef::Derivative(d), |p| rhs.eval(p), cfg.digits, cfg.max_terms)
        }
        (Payload::Congruence(c), _) => check_congruence_range(&entry.id, c, cfg.prime_max),
        (Payload::Integrality(i), _) => integrality_report(&entry.id, i, cfg.n_max),
        (_, None) => VerificationReport::new(
            &entry.id,
            Verdict::Inconclusive { reason: "series entry without a right-hand side".into() },
        ),
    };
    rep.anomalies = entry.anomalies.clone();
    rep.elapsed_ms = start.elapsed().as_millis();
    rep
}
