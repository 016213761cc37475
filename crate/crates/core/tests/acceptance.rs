//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria whose failure is a property of the catalogued claims themselves are
//! listed in KNOWN_RED together with the exact failing items. The process exits
//! non-zero when the observed outcome differs from that list in any way.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use conjseries::ball::{exp, log, ComplexBall, Mag, Precision, RealBall};
use conjseries::congruence::{check_congruence, congruence_sum, CongruenceSpec, PrimeVerdict};
use conjseries::constants::{self, ConstExpr};
use conjseries::exact::{binomial, trinomial_direct, trinomial_prefix, Poly, Rational, TrinomialParams};
use conjseries::registry::{builtin, Catalog, ConjectureEntry, Kind, Payload, Rhs, Status};
use conjseries::report::Verdict;
use conjseries::taylor::{derivative_at, derivative_rational, Factor, FunctionExpr};
use conjseries::verify::{verify_entry, RunConfig};

/// Criterion number and the item ids expected to fail in it.
const KNOWN_RED: &[(u32, &[&str])] = &[
    // P(k) as printed (k^2 coefficient 480) does not give the stated value; 408 does.
    (1, &["R3.11"]),
    // The claim for primes p = 3 (mod 4) fails at p = 3, where the sum is 2 mod 3.
    (3, &["G2.9b"]),
];

struct Outcome {
    summary: String,
    /// Ids (or short descriptions) of failing items; empty means PASS.
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn main() {
    let catalog = builtin();
    let criteria: Vec<(u32, fn(&Catalog) -> Outcome)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
    ];
    let mut mismatches = Vec::new();
    let mut passed = 0;
    for (n, run) in criteria {
        let o = run(&catalog);
        println!("criterion {n}: {}  {}", if o.ok() { "PASS" } else { "FAIL" }, o.summary);
        for f in &o.failures {
            println!("    failing: {f}");
        }
        for note in &o.notes {
            println!("    {note}");
        }
        if o.ok() {
            passed += 1;
        }
        let expected: BTreeSet<String> = KNOWN_RED
            .iter()
            .find(|(c, _)| *c == n)
            .map(|(_, ids)| ids.iter().map(|s| s.to_string()).collect())
            .unwrap_or_default();
        let observed: BTreeSet<String> = o.failures.iter().cloned().collect();
        if expected != observed {
            mismatches.push(format!("criterion {n}: expected failures {expected:?}, observed {observed:?}"));
        }
    }
    println!("acceptance: {passed} of 6 criteria PASS");
    if mismatches.is_empty() {
        println!("acceptance: outcome matches the documented discrepancies exactly");
    } else {
        for m in &mismatches {
            println!("acceptance: UNEXPECTED {m}");
        }
        std::process::exit(1);
    }
}

fn rhs_of(e: &ConjectureEntry) -> &Rhs {
    e.rhs.as_ref().expect("series entries carry an rhs")
}

fn within(elapsed: Duration, limit_s: u64, what: &str, o: &mut Outcome) {
    o.notes.push(format!("{what} took {:.1}s (limit {limit_s}s)", elapsed.as_secs_f64()));
    if elapsed.as_secs() > limit_s {
        o.failures.push(format!("runtime above {limit_s}s"));
    }
}

// 1. Proven references at 30 digits, and a 1e-10 perturbation of each must FAIL at 12.
fn criterion_1(cat: &Catalog) -> Outcome {
    let start = Instant::now();
    let refs: Vec<&ConjectureEntry> = cat.entries.iter().filter(|e| e.status == Status::ProvenReference).collect();
    let mut o = Outcome { summary: String::new(), failures: Vec::new(), notes: Vec::new() };
    let cfg = RunConfig { digits: 30, ..RunConfig::default() };
    let mut pass = 0;
    for e in &refs {
        let r = verify_entry(e, &cfg);
        if r.verdict.is_pass() {
            pass += 1;
        } else {
            o.failures.push(e.id.clone());
            o.notes.push(format!(
                "{} {}: lhs {} rhs {} |diff| <= {}",
                e.id,
                r.verdict,
                r.lhs.unwrap_or_default(),
                r.rhs.unwrap_or_default(),
                r.diff_bound.unwrap_or_default()
            ));
        }
    }
    let eps = ConstExpr::Rational(Rational::new(One::one(), BigInt::from(10u64).pow(10)));
    let cfg12 = RunConfig { digits: 12, ..RunConfig::default() };
    let mut flipped = 0;
    for e in &refs {
        let mut p = (*e).clone();
        let rhs = rhs_of(e);
        p.rhs = Some(Rhs { re: ConstExpr::Add(vec![rhs.re.clone(), eps.clone()]), im: rhs.im.clone() });
        if verify_entry(&p, &cfg12).verdict.is_fail() {
            flipped += 1;
        } else {
            o.failures.push(format!("{}~perturbed", e.id));
        }
    }
    within(start.elapsed(), 300, "reference suite", &mut o);
    o.summary = format!(
        "{pass}/{} proven references PASS at 30 digits; {flipped}/{} perturbed right sides FAIL at 12 digits",
        refs.len(),
        refs.len()
    );
    o
}

// 2. Conjectured series at 25 digits (20 for derivative order >= 5).
fn criterion_2(cat: &Catalog) -> Outcome {
    let start = Instant::now();
    let mut o = Outcome { summary: String::new(), failures: Vec::new(), notes: Vec::new() };
    let entries: Vec<&ConjectureEntry> = cat
        .entries
        .iter()
        .filter(|e| e.status == Status::Conjecture && matches!(e.kind(), Kind::Series | Kind::DerivativeSeries))
        .collect();
    let (mut pass, mut errata) = (0, Vec::new());
    for e in &entries {
        let digits = match &e.payload {
            Payload::DerivativeSeries(d) if d.order >= 5 => 20,
            _ => 25,
        };
        let r = verify_entry(e, &RunConfig { digits, ..RunConfig::default() });
        match &r.verdict {
            Verdict::Pass { .. } => pass += 1,
            Verdict::Fail { .. } => {
                let full = r.lhs.is_some() && r.rhs.is_some() && r.diff_bound.is_some() && r.diagnostics.is_some();
                if !full {
                    o.failures.push(format!("{} (FAIL without diagnostics)", e.id));
                }
                errata.push(format!(
                    "{} FAIL({digits}): lhs {} vs rhs {}, terms={} [{}]",
                    e.id,
                    r.lhs.unwrap_or_default(),
                    r.rhs.unwrap_or_default(),
                    r.diagnostics.map(|d| d.terms_used).unwrap_or(0),
                    e.anomalies.join(", ")
                ));
            }
            Verdict::Inconclusive { reason } => {
                if reason.is_empty() {
                    o.failures.push(format!("{} (INCONCLUSIVE without reason)", e.id));
                }
                errata.push(format!("{} INCONCLUSIVE: {reason}", e.id));
            }
            Verdict::Skip { .. } => o.failures.push(format!("{} (skipped)", e.id)),
        }
    }
    within(start.elapsed(), 1200, "conjecture series suite", &mut o);
    o.summary = format!(
        "{pass}/{} conjectured series PASS; {} surfaced as possible errata with full diagnostics",
        entries.len(),
        errata.len()
    );
    o.notes.extend(errata.into_iter().map(|s| format!("possible erratum: {s}")));
    o
}

// 3. Congruences for every admissible p <= 300, plus an independent big-integer oracle.
fn criterion_3(cat: &Catalog) -> Outcome {
    let mut o = Outcome { summary: String::new(), failures: Vec::new(), notes: Vec::new() };
    let specs: Vec<(&str, &CongruenceSpec)> = cat
        .entries
        .iter()
        .filter_map(|e| match &e.payload {
            Payload::Congruence(c) => Some((e.id.as_str(), c)),
            _ => None,
        })
        .collect();
    let mut checked = 0;
    for (id, spec) in &specs {
        let mut bad = Vec::new();
        let mut witnesses = Vec::new();
        for p in odd_primes(300) {
            let Ok(rep) = check_congruence(spec, p) else { continue };
            match rep.verdict {
                PrimeVerdict::Skip => continue,
                PrimeVerdict::Pass => {}
                PrimeVerdict::Fail | PrimeVerdict::NoCase => bad.push(format!("p={p} {:?}", rep.verdict)),
            }
            checked += 1;
            if let Some((x, y)) = rep.witness {
                witnesses.push(format!("{p}:({x},{y})"));
            }
        }
        if !bad.is_empty() {
            o.failures.push(id.to_string());
            o.notes.push(format!("{id}: {}", bad.join(", ")));
        }
        if !witnesses.is_empty() {
            o.notes.push(format!("{id} witnesses {}", witnesses.join(" ")));
        }
    }
    let mut oracle_checks = 0;
    for (id, spec) in &specs {
        for p in [3u64, 7, 11, 13] {
            let Ok(fast) = congruence_sum(spec, p) else { continue };
            let slow = oracle_sum_mod(spec, p);
            oracle_checks += 1;
            if fast != slow {
                o.failures.push(format!("{id}@p={p}~oracle"));
                o.notes.push(format!("{id} p={p}: congruence_sum {fast} but exact sum gives {slow}"));
            }
        }
    }
    o.summary = format!(
        "{} congruence entries, {checked} (entry, prime) checks; oracle agreement on {oracle_checks} sums at p in {{3,7,11,13}}",
        specs.len()
    );
    o
}

fn odd_primes(n: u64) -> Vec<u64> {
    (3..=n).step_by(2).filter(|&q| (3..).step_by(2).take_while(|d| d * d <= q).all(|d| q % d != 0)).collect()
}

/// Coefficient of x^n in (x^2 + b x + c)^n by repeated polynomial multiplication.
fn trinomial_by_expansion(n: usize, b: &BigInt, c: &BigInt) -> BigInt {
    let mut poly = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); poly.len() + 2];
        for (i, a) in poly.iter().enumerate() {
            next[i] += a * c;
            next[i + 1] += a * b;
            next[i + 2] += a;
        }
        poly = next;
    }
    poly[n].clone()
}

/// sum_{k<p} w(k) C(2k,k) T_k(b,c) T_2k(b*,c*) / m^k as an exact rational, reduced mod p^e.
fn oracle_sum_mod(spec: &CongruenceSpec, p: u64) -> u64 {
    let mut s = Rational::zero();
    let mut fact = vec![BigInt::one()];
    for i in 1..=2 * p as usize {
        let next = &fact[i - 1] * BigInt::from(i);
        fact.push(next);
    }
    for k in 0..p as usize {
        let central = &fact[2 * k] / (&fact[k] * &fact[k]);
        let w = spec.weight.eval_i64(k as i64);
        let t1 = trinomial_by_expansion(k, &spec.b, &spec.c);
        let t2 = trinomial_by_expansion(2 * k, &spec.b_star, &spec.c_star);
        s += Rational::new(w * central * t1 * t2, spec.m.pow(k as u32));
    }
    let m = BigInt::from(p.pow(spec.modulus_power));
    let inv = s.denom().modpow(&(&m - BigInt::from(p.pow(spec.modulus_power - 1)) - 1), &m);
    let v = (s.numer().mod_floor(&m) * inv).mod_floor(&m);
    v.to_u64().unwrap()
}

// 4. Integrality and parity for n <= 64.
fn criterion_4(cat: &Catalog) -> Outcome {
    let mut o = Outcome { summary: String::new(), failures: Vec::new(), notes: Vec::new() };
    let mut n_entries = 0;
    for e in cat.entries.iter().filter(|e| e.kind() == Kind::Integrality) {
        n_entries += 1;
        let r = verify_entry(e, &RunConfig { n_max: 64, ..RunConfig::default() });
        let odd: Vec<String> =
            r.indices.iter().filter(|i| i.odd == Some(true)).map(|i| i.n.to_string()).collect();
        o.notes.push(format!("{} {}: odd at n = {}", e.id, r.verdict, odd.join(",")));
        let all_int = r.indices.iter().all(|i| i.is_integer);
        if !r.verdict.is_pass() || !all_int {
            o.failures.push(e.id.clone());
        }
    }
    o.summary = format!("{n_entries} integrality entries checked for n <= 64");
    o
}

// 5. Kernel properties.
fn criterion_5(cat: &Catalog) -> Outcome {
    let start = Instant::now();
    let mut o = Outcome { summary: String::new(), failures: Vec::new(), notes: Vec::new() };
    let checks: Vec<(&str, Box<dyn Fn() -> Result<String, String>>)> = vec![
        ("trinomial direct vs recurrence, n <= 200", Box::new(check_trinomials)),
        ("T_n(2,1) = C(2n,n), n <= 200", Box::new(check_trinomial_central)),
        ("ball containment, 10^4 random rational ops", Box::new(check_containment)),
        ("zeta(2n) closed forms", Box::new(check_even_zeta)),
        ("polygamma finite differences", Box::new(move || check_finite_differences(cat))),
        ("power-function derivative identity", Box::new(check_power_function)),
        ("zeta(5,3) stuffle at 30 digits", Box::new(check_stuffle)),
        ("zeta(5,3) naive double sum to 8 digits", Box::new(check_naive_double_sum)),
    ];
    for (name, f) in &checks {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => o.notes.push(format!("ok   {name}: {msg} ({secs:.1}s)")),
            Err(msg) => {
                o.notes.push(format!("FAIL {name}: {msg}"));
                o.failures.push(name.to_string());
            }
        }
    }
    within(start.elapsed(), 120, "kernel suites", &mut o);
    o.summary = format!("{} kernel property checks", checks.len());
    o
}

fn check_trinomials() -> Result<String, String> {
    let params = [(1, -12), (8, -3), (19, -20), (9, -5), (25, 24), (14, -3), (-3, 7), (0, 1)];
    for (b, c) in params {
        let tp = TrinomialParams::new(b, c);
        let rec = trinomial_prefix(200, &tp);
        for (n, t) in rec.iter().enumerate() {
            if *t != trinomial_direct(n as u64, &tp) {
                return Err(format!("T_{n}({b},{c}) differs"));
            }
        }
    }
    Ok(format!("{} parameter pairs", params.len()))
}

fn check_trinomial_central() -> Result<String, String> {
    let tp = TrinomialParams::new(2, 1);
    let rec = trinomial_prefix(200, &tp);
    for n in 0..=200u64 {
        if rec[n as usize] != binomial(2 * n, n as i64) || trinomial_direct(n, &tp) != binomial(2 * n, n as i64) {
            return Err(format!("n = {n}"));
        }
    }
    Ok("both methods".into())
}

fn check_containment() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let q = |rng: &mut StdRng| {
        let num: i64 = rng.gen_range(-1_000_000_000..=1_000_000_000);
        let den: i64 = rng.gen_range(1..=1_000_000);
        Rational::new(num.into(), den.into())
    };
    for i in 0..10_000 {
        let prec = Precision::new(rng.gen_range(64..=320));
        let (a, b) = (q(&mut rng), q(&mut rng));
        let (x, y) = (RealBall::from_rational(&a, prec), RealBall::from_rational(&b, prec));
        let (ball, exact) = match i % 4 {
            0 => (x.add(&y, prec), &a + &b),
            1 => (x.sub(&y, prec), &a - &b),
            2 => (x.mul(&y, prec), &a * &b),
            _ => {
                if b.is_zero() {
                    continue;
                }
                (x.div(&y, prec).map_err(|e| e.to_string())?, &a / &b)
            }
        };
        if !ball.contains_rational(&exact) {
            return Err(format!("op {} on {a} and {b} at {} bits", i % 4, prec.bits()));
        }
    }
    Ok("add, sub, mul, div at 64..320 bits".into())
}

/// Bernoulli numbers by the Akiyama-Tanigawa algorithm (B_1 = +1/2; only even indices are used).
fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::new(One::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    out
}

fn check_even_zeta() -> Result<String, String> {
    let prec = Precision::from_digits(100);
    let bern = bernoulli_table(24);
    let pi = constants::pi(prec);
    for n in 1..=12u32 {
        let two_n = 2 * n as usize;
        let mut fact = BigInt::one();
        for j in 1..=two_n {
            fact *= j;
        }
        // |B_2n| (2 pi)^2n / (2 (2n)!)
        let coef = bern[two_n].abs() * Rational::new(BigInt::one() << two_n, fact * 2);
        let closed = pi.pow(two_n as i32, prec).map_err(|e| e.to_string())?.mul_rational(&coef, prec);
        let z = constants::zeta(2 * n, prec).map_err(|e| e.to_string())?;
        let diff = z.sub(&closed, prec);
        if !z.overlaps(&closed) || diff.mag_upper().log2() > -(prec.bits() as f64) + 24.0 {
            return Err(format!("zeta({})", 2 * n));
        }
    }
    Ok(format!("zeta(2)..zeta(24) at {} bits", prec.bits()))
}

/// Test-only evaluation of f and f' at real points from Stirling series.
struct RealPointOracle {
    prec: Precision,
    bern: Vec<Rational>,
    pi: RealBall,
    half_ln_2pi: RealBall,
}

const STIRLING_TERMS: usize = 40;
const STIRLING_SHIFT: i64 = 64;

impl RealPointOracle {
    fn new(prec: Precision) -> Self {
        let pi = constants::pi(prec);
        let two_pi = pi.mul_int(2, prec);
        let half_ln_2pi = log(&two_pi, prec).unwrap().mul_2exp(-1);
        RealPointOracle { prec, bern: bernoulli_table(2 * STIRLING_TERMS + 2), pi, half_ln_2pi }
    }

    fn ball(&self, q: &Rational) -> RealBall {
        RealBall::from_rational(q, self.prec)
    }

    fn shift(x: &Rational) -> i64 {
        (STIRLING_SHIFT - x.floor().to_integer().to_i64().unwrap()).max(0)
    }

    fn ln_gamma(&self, x: &Rational) -> RealBall {
        let p = self.prec;
        let n = Self::shift(x);
        let z = x + Rational::from_integer(n.into());
        let zb = self.ball(&z);
        let zinv = self.ball(&z.recip());
        let zinv2 = zinv.sqr(p);
        // sum_k B_2k / (2k (2k-1) z^(2k-1))
        let coef = |k: usize| &self.bern[2 * k] / Rational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let (series, bound) = self.asymptotic_sum(zinv.clone(), &zinv2, coef);
        let half = Rational::new(1.into(), 2.into());
        let main = zb
            .sub(&self.ball(&half), p)
            .mul(&log(&zb, p).unwrap(), p)
            .sub(&zb, p)
            .add(&self.half_ln_2pi, p)
            .add(&series, p)
            .add_error(bound);
        let mut prod = Rational::one();
        for j in 0..n {
            prod *= x + Rational::from_integer(j.into());
        }
        main.sub(&log(&self.ball(&prod), p).unwrap(), p)
    }

    /// sum_{k=1..STIRLING_TERMS} coef(k) first step^(k-1), bounded by the first omitted term.
    fn asymptotic_sum(&self, first: RealBall, step: &RealBall, coef: impl Fn(usize) -> Rational) -> (RealBall, Mag) {
        let p = self.prec;
        let mut pow = first;
        let mut s = RealBall::zero();
        for k in 1..=STIRLING_TERMS {
            s = s.add(&pow.mul_rational(&coef(k), p), p);
            pow = pow.mul(step, p);
        }
        let bound = Mag::from_rational_up(&coef(STIRLING_TERMS + 1).abs()).mul(pow.mag_upper());
        (s, bound)
    }

    fn digamma(&self, x: &Rational) -> RealBall {
        let p = self.prec;
        let n = Self::shift(x);
        let z = x + Rational::from_integer(n.into());
        let zinv = self.ball(&z.recip());
        let zinv2 = zinv.sqr(p);
        // log z - 1/(2z) - sum_k B_2k / (2k z^2k)
        let coef = |k: usize| -&self.bern[2 * k] / Rational::from_integer(BigInt::from(2 * k));
        let (series, bound) = self.asymptotic_sum(zinv2.clone(), &zinv2, coef);
        let mut s = log(&self.ball(&z), p).unwrap().sub(&zinv.mul_2exp(-1), p).add(&series, p).add_error(bound);
        for j in 0..n {
            s = s.sub(&self.ball(&(x + Rational::from_integer(j.into()))).recip(p).unwrap(), p);
        }
        s
    }

    fn factorial(n: usize) -> Rational {
        Rational::from_integer((1..=n).fold(BigInt::one(), |a, b| a * b))
    }

    /// psi^(r)(x) for r >= 1.
    fn polygamma(&self, r: u32, x: &Rational) -> RealBall {
        if r == 0 {
            return self.digamma(x);
        }
        let p = self.prec;
        let r = r as usize;
        let n = Self::shift(x);
        let z = x + Rational::from_integer(n.into());
        let zinv = self.ball(&z.recip());
        let zinv2 = zinv.sqr(p);
        let zr = zinv.pow(r as i32, p).unwrap();
        // (r-1)!/z^r + r!/(2 z^(r+1)) + sum_k B_2k (2k+r-1)!/((2k)! z^(2k+r))
        let coef = |k: usize| &self.bern[2 * k] * Self::factorial(2 * k + r - 1) / Self::factorial(2 * k);
        let (series, bound) = self.asymptotic_sum(zr.mul(&zinv2, p), &zinv2, coef);
        let mut s = zr
            .mul_rational(&Self::factorial(r - 1), p)
            .add(&zr.mul(&zinv, p).mul_rational(&(Self::factorial(r) / Rational::from_integer(2.into())), p), p)
            .add(&series, p)
            .add_error(bound);
        let rf = Self::factorial(r);
        for j in 0..n {
            let y = self.ball(&(x + Rational::from_integer(j.into()))).recip(p).unwrap();
            s = s.add(&y.pow(r as i32 + 1, p).unwrap().mul_rational(&rf, p), p);
        }
        if r % 2 == 1 {
            s
        } else {
            s.neg()
        }
    }

    /// e^(pi i t) for tiny rational t, by its Taylor series.
    fn small_phase(&self, t: &Rational) -> ComplexBall {
        let theta = self.pi.mul_rational(t, self.prec);
        let (mut c, mut s) = (RealBall::one(), RealBall::zero());
        let mut term = RealBall::one();
        for j in 1..=16i64 {
            term = term.mul(&theta, self.prec).mul_rational(&Rational::new(1.into(), j.into()), self.prec);
            let signed = if (j / 2) % 2 == 1 { term.neg() } else { term.clone() };
            if j % 2 == 0 {
                c = c.add(&signed, self.prec);
            } else {
                s = s.add(&signed, self.prec);
            }
        }
        let tail = Mag::pow2(-(self.prec.bits() as i64) - 64);
        ComplexBall::new(c.add_error(tail), s.add_error(tail))
    }

    fn poly_eval(p: &Poly, x: &Rational) -> Rational {
        p.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    }

    fn poly_deriv_eval(p: &Poly, x: &Rational) -> Rational {
        p.0.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Rational::zero(), |acc, (j, c)| acc * x + Rational::from_integer(c * BigInt::from(j)))
    }

    /// (f(x), f'(x)/f(x)) at x = k + t.
    fn value_and_log_derivative(&self, f: &FunctionExpr, k: i64, t: &Rational) -> (ComplexBall, ComplexBall) {
        let p = self.prec;
        let x = Rational::from_integer(k.into()) + t;
        let mut real = self.ball(&f.scale);
        let mut log_gamma = RealBall::zero();
        let mut ld = ComplexBall::zero();
        let mut extra = ComplexBall::one();
        for factor in &f.factors {
            match factor {
                Factor::GammaPower { a, b, e } => {
                    let y = Rational::from_integer(BigInt::from(*a)) * &x + Rational::from_integer(BigInt::from(*b));
                    log_gamma = log_gamma.add(&self.ln_gamma(&y).mul_int(*e as i64, p), p);
                    let d = self.digamma(&y).mul_int(*e as i64 * *a as i64, p);
                    ld = ld.add(&ComplexBall::from_real(d), p);
                }
                Factor::RationalFactor(rf) => {
                    let (nv, dv) = (Self::poly_eval(&rf.num, &x), Self::poly_eval(&rf.den, &x));
                    real = real.mul_rational(&(&nv / &dv), p);
                    let q = Self::poly_deriv_eval(&rf.num, &x) / &nv - Self::poly_deriv_eval(&rf.den, &x) / &dv;
                    ld = ld.add(&ComplexBall::from_rational(&q, p), p);
                }
                Factor::ExpPiIX => {
                    let mut ph = self.small_phase(t);
                    if k % 2 == 1 {
                        ph = ph.neg();
                    }
                    extra = extra.mul(&ph, p);
                    ld = ld.add(&ComplexBall::new(RealBall::zero(), self.pi.clone()), p);
                }
                Factor::PolygammaAffine { r, a, b, c0, c1 } => {
                    let y = Rational::from_integer(BigInt::from(*a)) * &x + Rational::from_integer(BigInt::from(*b));
                    let val = c0.eval(p).unwrap().add(&ComplexBall::from_real(self.polygamma(*r, &y).mul_rational(c1, p)), p);
                    let dval = self.polygamma(r + 1, &y).mul_rational(&(c1 * Rational::from_integer(BigInt::from(*a))), p);
                    ld = ld.add(&ComplexBall::from_real(dval).div(&val, p).unwrap(), p);
                    extra = extra.mul(&val, p);
                }
            }
        }
        let value = ComplexBall::from_real(real.mul(&exp(&log_gamma, p).unwrap(), p)).mul(&extra, p);
        (value, ld)
    }

    /// f^(m-1)(k + t) for m in {1, 2}.
    fn lower_derivative(&self, f: &FunctionExpr, k: i64, t: &Rational, m: u32) -> ComplexBall {
        let (v, ld) = self.value_and_log_derivative(f, k, t);
        if m == 1 {
            v
        } else {
            v.mul(&ld, self.prec)
        }
    }
}

fn check_finite_differences(cat: &Catalog) -> Result<String, String> {
    let mut fns: Vec<(&str, &FunctionExpr)> = Vec::new();
    for e in cat.entries.iter().filter(|e| e.status == Status::Conjecture) {
        if let Payload::DerivativeSeries(d) = &e.payload {
            if !fns.iter().any(|(_, f)| *f == &d.fexpr) {
                fns.push((e.id.as_str(), &d.fexpr));
            }
        }
    }
    if fns.len() != 14 {
        return Err(format!("expected 14 function classes, found {}", fns.len()));
    }
    let prec = Precision::from_digits(60);
    let oracle = RealPointOracle::new(prec);
    let h = Rational::new(1.into(), BigInt::from(10u64).pow(15));
    let two_h = &h * Rational::from_integer(2.into());
    let mut worst = 0f64;
    for (id, f) in &fns {
        for k in [2i64, 3, 5] {
            for m in [1u32, 2] {
                let up = oracle.lower_derivative(f, k, &h, m);
                let down = oracle.lower_derivative(f, k, &-h.clone(), m);
                let fd = up.sub(&down, prec).mul_rational(&(Rational::one() / &two_h), prec);
                let exact = derivative_at(f, k as u64, m, prec).map_err(|e| format!("{id}: {e}"))?;
                let err = fd.sub(&exact, prec);
                let scale = exact.re().to_f64().hypot(exact.im().to_f64()).max(1e-30);
                let rel = err.re().to_f64().hypot(err.im().to_f64()) / scale;
                worst = worst.max(rel);
                if rel > 1e-8 {
                    return Err(format!("{id} k={k} m={m}: relative error {rel:e}"));
                }
            }
        }
    }
    Ok(format!("{} functions, k in {{2,3,5}}, m in {{1,2}}, h = 1e-15, worst relative error {worst:.1e}", fns.len()))
}

fn check_power_function() -> Result<String, String> {
    for s in [2usize, 3] {
        let f = FunctionExpr::new(vec![Factor::RationalFactor(conjseries::exact::RationalFunction::new(
            Poly::constant(1),
            Poly::monomial(s),
        ))]);
        for m in 1..=3u32 {
            let rising: i64 = (0..m as i64).map(|j| s as i64 + j).product();
            let sign = if m % 2 == 1 { -1 } else { 1 };
            for k in 1..=20i64 {
                let want = Rational::new(BigInt::from(sign * rising), BigInt::from(k).pow(s as u32 + m));
                let got = derivative_rational(&f, k as u64, m).map_err(|e| e.to_string())?;
                if got.as_ref() != Some(&want) {
                    return Err(format!("s={s} m={m} k={k}: {got:?} vs {want}"));
                }
            }
            // summed form against zeta(s+m), with the tail sum_{k>N} k^-(s+m) <= N^-(s+m-1)/(s+m-1)
            let prec = Precision::new(128);
            let n = 2000i64;
            let mut partial = RealBall::zero();
            for k in 1..=n {
                let t = derivative_rational(&f, k as u64, m).map_err(|e| e.to_string())?.unwrap();
                partial = partial.add(&RealBall::from_rational(&t, prec), prec);
            }
            let closed = constants::zeta(s as u32 + m, prec).map_err(|e| e.to_string())?.mul_int(sign * rising, prec);
            let diff = closed.sub(&partial, prec).abs();
            let e = (s as u32 + m - 1) as i32;
            let tail = rising as f64 * (n as f64).powi(-e) / e as f64;
            if diff.to_f64() > tail * 1.0001 {
                return Err(format!("s={s} m={m}: partial sum off by {}", diff.to_f64()));
            }
        }
    }
    Ok("s in {2,3}, m <= 3, k <= 20 exact; summed form within its tail bound".into())
}

fn check_stuffle() -> Result<String, String> {
    let prec = Precision::from_digits(30);
    let z = |s| constants::zeta(s, prec).map_err(|e| e.to_string());
    let lhs = z(3)?.mul(&z(5)?, prec);
    let rhs = constants::zeta53(prec)
        .map_err(|e| e.to_string())?
        .add(&constants::double_zeta(3, 5, prec).map_err(|e| e.to_string())?, prec)
        .add(&z(8)?, prec);
    let diff = lhs.sub(&rhs, prec);
    if !diff.contains_zero() || diff.mag_upper().log2() > -30.0 * std::f64::consts::LOG2_10 {
        return Err(format!("zeta(3)zeta(5) - (zeta(5,3)+zeta(3,5)+zeta(8)) encloses {}", diff.mag_upper()));
    }
    Ok(format!("|difference| <= {}", diff.mag_upper()))
}

fn check_naive_double_sum() -> Result<String, String> {
    // zeta(5,3) = sum_{k1 > k2 >= 1} k1^-5 k2^-3
    let n = 4000u32;
    let (mut h3, mut s) = (0f64, 0f64);
    for k1 in 1..=n {
        let k = k1 as f64;
        s += h3 / k.powi(5);
        h3 += 1.0 / k.powi(3);
    }
    let tail = 1.2020569031595942 / (4.0 * (n as f64).powi(4));
    let v = constants::zeta53(Precision::new(128)).map_err(|e| e.to_string())?.to_f64();
    let d = (v - s).abs();
    if d > tail + 1e-13 || d / v > 1e-8 {
        return Err(format!("naive {s} vs {v}"));
    }
    Ok(format!("naive {s:.12} vs {v:.12}, tail bound {tail:.1e}"))
}

// 6. Cold then warm cache runs of `verify --all --format json` are byte-identical.
fn criterion_6(cat: &Catalog) -> Outcome {
    let mut o = Outcome { summary: String::new(), failures: Vec::new(), notes: Vec::new() };
    let dir = tempfile::tempdir().expect("temp dir");
    let run = || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = conjseries::cli::run_with(
            ["conjseries", "verify", "--all", "--format", "json"],
            &mut out,
            &mut err,
            Some(dir.path().to_path_buf()),
        );
        (code, out)
    };
    let t0 = Instant::now();
    let (c1, cold) = run();
    let t_cold = t0.elapsed();
    let t1 = Instant::now();
    let (c2, warm) = run();
    let t_warm = t1.elapsed();
    let n_series = cat.entries.iter().filter(|e| matches!(e.kind(), Kind::Series | Kind::DerivativeSeries)).count();
    let cached = std::fs::read_dir(dir.path()).map(|d| d.count()).unwrap_or(0);
    if cold != warm || c1 != c2 {
        o.failures.push("json reports differ".into());
    }
    if cached != n_series {
        o.failures.push(format!("{cached} cache files for {n_series} entries"));
    }
    o.summary = format!(
        "cold {:.1}s and warm {:.2}s runs give identical {}-byte reports (exit {c1})",
        t_cold.as_secs_f64(),
        t_warm.as_secs_f64(),
        cold.len()
    );
    o
}
