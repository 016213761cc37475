//! Supercongruences for Type X sums mod p^e and integrality of the
//! associated weighted partial sums.

mod form;
mod formula;
mod integrality;
pub mod modular;

use serde::{Deserialize, Serialize};

pub use form::{all_representations, represent_form, SideConstraint};
pub use formula::{Formula, Vars};
pub use integrality::{
    check_integrality, check_integrality_range, integrality_report, Divisor, IntegralityReport, IntegralitySpec, ParityPattern,
    DEFAULT_N_MAX,
};
pub use modular::{jacobi, jacobi_i64, primes_upto};

use crate::error::{Error, Result};
use crate::exact::{Integer, Poly};
use crate::report::{Verdict, VerificationReport};
use modular::{inv_mod, mul_mod, rational_mod, trinomials_mod};

pub const DEFAULT_PRIME_MAX: u64 = 300;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Atom {
    /// p mod modulus lies in `residues`.
    ResidueClass { modulus: u64, residues: Vec<u64> },
    /// The Jacobi-symbol formula (e.g. `J(-15,p)`) takes `value`.
    JacobiEquals { symbol: Formula, value: i32 },
    /// multiplier * p = alpha x^2 + beta y^2 has a solution obeying the constraints;
    /// the first one found becomes the witness (x, y).
    FormRep {
        #[serde(default = "one_i64")]
        multiplier: i64,
        alpha: i64,
        beta: i64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        constraints: Vec<SideConstraint>,
    },
}

fn one_i64() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub label: String,
    /// Conjunction; empty means always.
    #[serde(default)]
    pub when: Vec<Atom>,
    pub rhs: Formula,
}

/// lhs_factor * sum_{k<p} w(k) C(2k,k) T_k(b,c) T_2k(b*,c*) / m^k mod p^modulus_power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruenceSpec {
    #[serde(default = "unit_poly")]
    pub weight: Poly,
    #[serde(with = "crate::serde_big::int")]
    pub b: Integer,
    #[serde(with = "crate::serde_big::int")]
    pub c: Integer,
    #[serde(with = "crate::serde_big::int")]
    pub b_star: Integer,
    #[serde(with = "crate::serde_big::int")]
    pub c_star: Integer,
    #[serde(with = "crate::serde_big::int")]
    pub m: Integer,
    pub modulus_power: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs_factor: Option<Formula>,
    #[serde(default = "three")]
    pub min_prime: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded_primes: Vec<u64>,
    /// Extra restriction on p for the claim to apply at all.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub applies_when: Vec<Atom>,
    pub cases: Vec<Case>,
}

fn unit_poly() -> Poly {
    Poly::constant(1)
}

fn three() -> u64 {
    3
}

impl CongruenceSpec {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(1..=2).contains(&self.modulus_power) {
            return Err("modulus_power must be 1 or 2".into());
        }
        if self.cases.is_empty() {
            return Err("at least one case is required".into());
        }
        if self.m == Integer::from(0) {
            return Err("m must be nonzero".into());
        }
        for (i, c) in self.cases.iter().enumerate() {
            let reps = c.when.iter().filter(|a| matches!(a, Atom::FormRep { .. })).count();
            if reps > 1 {
                return Err(format!("case {i}: at most one form representation per case"));
            }
            if reps == 0 && c.rhs.uses_witness() {
                return Err(format!("case {i}: rhs uses x or y without a form representation"));
            }
            for a in &c.when {
                if let Atom::FormRep { alpha, beta, multiplier, .. } = a {
                    if *alpha < 1 || *beta < 1 || *multiplier < 1 {
                        return Err(format!("case {i}: form coefficients must be positive"));
                    }
                }
                if let Atom::ResidueClass { modulus: 0, .. } = a {
                    return Err(format!("case {i}: zero modulus"));
                }
            }
        }
        Ok(())
    }

    fn excluded(&self, p: u64) -> bool {
        p < self.min_prime || self.excluded_primes.contains(&p)
    }
}

/// Residue of the sum mod p^modulus_power (without lhs_factor).
pub fn congruence_sum(spec: &CongruenceSpec, p: u64) -> Result<u64> {
    if p < 3 || !modular::is_prime(p) {
        return Err(Error::BadPrime { p, reason: "not an odd prime".into() });
    }
    if spec.excluded(p) {
        return Err(Error::BadPrime { p, reason: "excluded by the claim".into() });
    }
    let modulus = p.pow(spec.modulus_power);
    let inv_m = inv_mod(&spec.m, modulus).ok_or_else(|| Error::BadPrime { p, reason: format!("p divides m = {}", spec.m) })?;
    let n = p as usize - 1;
    let params = [(spec.b.clone(), spec.c.clone()), (spec.b_star.clone(), spec.c_star.clone())];
    let t = trinomials_mod(&params, 2 * n, modulus);
    let mut s = 0u64;
    let mut ratio = 1 % modulus;
    for k in 0..=n {
        let w = spec.weight.eval_mod(k as u64, modulus);
        let term = mul_mod(mul_mod(w, t.central[k], modulus), mul_mod(t.values[0][k], t.values[1][2 * k], modulus), modulus);
        s = (s + mul_mod(term, ratio, modulus)) % modulus;
        ratio = mul_mod(ratio, inv_m, modulus);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PrimeVerdict {
    Pass,
    Fail,
    Skip,
    NoCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub p: u64,
    pub verdict: PrimeVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    /// Whether the witness with y negated would also have matched.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flipped_sign_matches: Option<bool>,
}

impl CaseReport {
    fn skip(p: u64, why: &str) -> Self {
        CaseReport {
            p,
            verdict: PrimeVerdict::Skip,
            case: Some(why.to_string()),
            witness: None,
            lhs: None,
            rhs: None,
            modulus: None,
            flipped_sign_matches: None,
        }
    }
}

fn atom_holds(a: &Atom, p: u64, witness: &mut Option<(i64, i64)>) -> Result<bool> {
    Ok(match a {
        Atom::ResidueClass { modulus, residues } => residues.contains(&(p % modulus)),
        Atom::JacobiEquals { symbol, value } => {
            let v = symbol
                .eval(Vars { p, x: None, y: None })
                .ok_or_else(|| Error::DomainViolation(format!("cannot evaluate {symbol} at p = {p}")))?;
            v == crate::exact::Rational::from_integer((*value).into())
        }
        Atom::FormRep { multiplier, alpha, beta, constraints } => {
            match represent_form(multiplier * p as i64, *alpha, *beta, constraints) {
                Some(w) => {
                    *witness = Some(w);
                    true
                }
                None => false,
            }
        }
    })
}

/// Checks one prime: picks the first case whose condition holds.
pub fn check_congruence(spec: &CongruenceSpec, p: u64) -> Result<CaseReport> {
    if spec.excluded(p) {
        return Ok(CaseReport::skip(p, "excluded prime"));
    }
    let mut none = None;
    for a in &spec.applies_when {
        if !atom_holds(a, p, &mut none)? {
            return Ok(CaseReport::skip(p, "claim does not apply"));
        }
    }
    let modulus = p.pow(spec.modulus_power);
    let factor = match &spec.lhs_factor {
        Some(f) => f.eval(Vars { p, x: None, y: None }),
        None => Some(crate::exact::Rational::from_integer(1.into())),
    }
    .and_then(|q| rational_mod(&q, modulus))
    .ok_or_else(|| Error::DomainViolation(format!("lhs factor not defined mod {modulus}")))?;
    let lhs = mul_mod(factor, congruence_sum(spec, p)?, modulus);

    for case in &spec.cases {
        let mut witness = None;
        let mut all = true;
        for a in &case.when {
            if !atom_holds(a, p, &mut witness)? {
                all = false;
                break;
            }
        }
        if !all {
            continue;
        }
        let at = |y_sign: i64| {
            let vars = Vars { p, x: witness.map(|w| w.0), y: witness.map(|w| y_sign * w.1) };
            case.rhs.eval(vars).and_then(|q| rational_mod(&q, modulus))
        };
        let rhs = at(1).ok_or_else(|| Error::DomainViolation(format!("{} not defined mod {modulus}", case.rhs)))?;
        let flipped = match witness {
            Some((_, y)) if y != 0 && case.rhs.uses_witness() => at(-1).map(|r| r == lhs),
            _ => None,
        };
        return Ok(CaseReport {
            p,
            verdict: if lhs == rhs { PrimeVerdict::Pass } else { PrimeVerdict::Fail },
            case: Some(case.label.clone()),
            witness,
            lhs: Some(lhs),
            rhs: Some(rhs),
            modulus: Some(modulus),
            flipped_sign_matches: flipped,
        });
    }
    Ok(CaseReport {
        p,
        verdict: PrimeVerdict::NoCase,
        case: None,
        witness: None,
        lhs: Some(lhs),
        rhs: None,
        modulus: Some(modulus),
        flipped_sign_matches: None,
    })
}

/// Runs every odd prime up to `prime_max` and folds the per-prime outcomes.
pub fn check_congruence_range(id: &str, spec: &CongruenceSpec, prime_max: u64) -> VerificationReport {
    let mut primes = Vec::new();
    for p in primes_upto(prime_max).into_iter().filter(|&p| p > 2) {
        match check_congruence(spec, p) {
            Ok(r) => primes.push(r),
            Err(e) => {
                let mut rep = VerificationReport::new(id, Verdict::Inconclusive { reason: format!("p = {p}: {e}") });
                rep.primes = primes;
                return rep;
            }
        }
    }
    let count = |v: PrimeVerdict| primes.iter().filter(|r| r.verdict == v).count();
    let (pass, fail, skip, nocase) =
        (count(PrimeVerdict::Pass), count(PrimeVerdict::Fail), count(PrimeVerdict::Skip), count(PrimeVerdict::NoCase));
    let failed: Vec<String> = primes.iter().filter(|r| r.verdict == PrimeVerdict::Fail).map(|r| r.p.to_string()).collect();
    let verdict = if fail > 0 {
        Verdict::Fail { digits: None }
    } else if nocase > 0 {
        let first = primes.iter().find(|r| r.verdict == PrimeVerdict::NoCase).map(|r| r.p).unwrap_or(0);
        Verdict::Inconclusive { reason: Error::NoCaseMatched { p: first }.to_string() }
    } else if pass == 0 {
        Verdict::Skip { reason: format!("no admissible prime up to {prime_max}") }
    } else {
        Verdict::Pass { digits: None }
    };
    let mut rep = VerificationReport::new(id, verdict);
    let mut detail = format!("p <= {prime_max}: {pass} pass, {fail} fail, {skip} skip");
    if nocase > 0 {
        detail.push_str(&format!(", {nocase} without a matching case"));
    }
    if !failed.is_empty() {
        detail.push_str(&format!("; failing p = {}", failed.join(", ")));
    }
    rep.detail = Some(detail);
    rep.primes = primes;
    rep
}
