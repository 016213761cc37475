//! Command-line driver: argument parsing, result cache and report output.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ball::Precision;
use crate::congruence::PrimeVerdict;
use crate::constants::ConstExpr;
use crate::registry::{load_catalog, Catalog, ConjectureEntry, Kind, Status};
use crate::report::{Verdict, VerificationReport};
use crate::verify::{verify_entry, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const CACHE_ENV: &str = "CONJSERIES_CACHE";
const ENGINE: &str = concat!("conjseries ", env!("CARGO_PKG_VERSION"));

#[derive(Parser, Debug)]
#[command(name = "conjseries", version, about = "Verify conjectured series identities, congruences and integrality claims")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Series,
    DerivativeSeries,
    Congruence,
    Integrality,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Series => Kind::Series,
            KindArg::DerivativeSeries => Kind::DerivativeSeries,
            KindArg::Congruence => Kind::Congruence,
            KindArg::Integrality => Kind::Integrality,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatusArg {
    Conjecture,
    ProvenReference,
}

impl From<StatusArg> for Status {
    fn from(s: StatusArg) -> Status {
        match s {
            StatusArg::Conjecture => Status::Conjecture,
            StatusArg::ProvenReference => Status::ProvenReference,
        }
    }
}

#[derive(Args, Debug)]
struct Selection {
    /// Entry ids or group names (e.g. X1, 3.1, D4.6-m3).
    #[arg(required_unless_present = "all")]
    ids: Vec<String>,
    /// Every entry of the relevant kind.
    #[arg(long, conflicts_with = "ids")]
    all: bool,
}

#[derive(Args, Debug)]
struct SeriesOpts {
    /// Decimal digits that |lhs - rhs| must vanish to.
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u32).range(5..=2000))]
    digits: u32,
    #[arg(long, default_value_t = crate::series::DEFAULT_MAX_TERMS)]
    max_terms: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog entries.
    List {
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long, value_enum)]
        status: Option<StatusArg>,
    },
    /// Check series identities numerically (--all selects every series entry).
    Verify {
        #[command(flatten)]
        sel: Selection,
        #[command(flatten)]
        opts: SeriesOpts,
    },
    /// Check congruences for all admissible primes up to --pmax.
    Cong {
        #[command(flatten)]
        sel: Selection,
        #[arg(long, default_value_t = crate::congruence::DEFAULT_PRIME_MAX)]
        pmax: u64,
        /// Print one line per prime with the matched case and witness.
        #[arg(long)]
        show_primes: bool,
    },
    /// Check integrality and parity claims for n up to --nmax.
    Integrality {
        #[command(flatten)]
        sel: Selection,
        #[arg(long, default_value_t = crate::congruence::DEFAULT_N_MAX)]
        nmax: u64,
    },
    /// Print the special constants used by right-hand sides.
    Constants {
        #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u32).range(5..=5000))]
        digits: u32,
    },
    /// Run every entry of every kind.
    Report {
        #[command(flatten)]
        opts: SeriesOpts,
        #[arg(long, default_value_t = crate::congruence::DEFAULT_PRIME_MAX)]
        pmax: u64,
        #[arg(long, default_value_t = crate::congruence::DEFAULT_N_MAX)]
        nmax: u64,
    },
}

/// Runs the CLI against the process's stdout/stderr and environment.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cache = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock(), cache)
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, cache_dir: Option<PathBuf>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                EXIT_PASS
            } else {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            };
        }
    };
    match dispatch(cli, out, cache_dir) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, cache_dir: Option<PathBuf>) -> Result<i32, String> {
    let catalog = load_catalog(cli.catalog.as_deref()).map_err(|e| e.to_string())?;
    let jobs = cli.jobs.map(usize::from).unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    let cache = cache_dir.map(|dir| Cache { dir });
    let runner = Runner { jobs, cache: cache.as_ref(), format: cli.format };
    match cli.cmd {
        Command::List { kind, status } => {
            list(&catalog, kind.map(Kind::from), status.map(Status::from), cli.format, out);
            Ok(EXIT_PASS)
        }
        Command::Constants { digits } => constants(digits, cli.format, out),
        Command::Verify { sel, opts } => {
            let entries = select(&catalog, &sel, &[Kind::Series, Kind::DerivativeSeries], false)?;
            let cfg = RunConfig { digits: opts.digits, max_terms: opts.max_terms, ..RunConfig::default() };
            Ok(runner.run(&entries, &cfg, false, out))
        }
        Command::Cong { sel, pmax, show_primes } => {
            let entries = select(&catalog, &sel, &[Kind::Congruence], true)?;
            let cfg = RunConfig { prime_max: pmax, ..RunConfig::default() };
            Ok(runner.run(&entries, &cfg, show_primes, out))
        }
        Command::Integrality { sel, nmax } => {
            let entries = select(&catalog, &sel, &[Kind::Integrality], true)?;
            let cfg = RunConfig { n_max: nmax, ..RunConfig::default() };
            Ok(runner.run(&entries, &cfg, false, out))
        }
        Command::Report { opts, pmax, nmax } => {
            let entries: Vec<&ConjectureEntry> = catalog.entries.iter().collect();
            let cfg = RunConfig { digits: opts.digits, max_terms: opts.max_terms, prime_max: pmax, n_max: nmax };
            Ok(runner.run(&entries, &cfg, false, out))
        }
    }
}

/// Resolves ids and group names; with `strict`, named entries must have one of `kinds`.
fn select<'a>(
    catalog: &'a Catalog,
    sel: &Selection,
    kinds: &[Kind],
    strict: bool,
) -> Result<Vec<&'a ConjectureEntry>, String> {
    if sel.all {
        return Ok(catalog.entries.iter().filter(|e| kinds.contains(&e.kind())).collect());
    }
    let mut picked: Vec<&ConjectureEntry> = Vec::new();
    for id in &sel.ids {
        let found = catalog.select(id);
        if found.is_empty() {
            return Err(format!("no catalog entry or group named {id:?}"));
        }
        for e in found {
            if strict && !kinds.contains(&e.kind()) {
                return Err(format!("{} is a {} entry", e.id, e.kind()));
            }
            if !picked.iter().any(|p| p.id == e.id) {
                picked.push(e);
            }
        }
    }
    Ok(picked)
}

pub fn exit_code(verdicts: &[&Verdict]) -> i32 {
    if verdicts.iter().any(|v| v.is_fail()) {
        EXIT_FAIL
    } else if verdicts.iter().any(|v| v.is_inconclusive()) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    }
}

struct Cache {
    dir: PathBuf,
}

impl Cache {
    fn key(entry: &ConjectureEntry, cfg: &RunConfig) -> String {
        let mut h = Sha256::new();
        h.update(ENGINE.as_bytes());
        h.update(serde_json::to_vec(entry).expect("entry serializes"));
        h.update(format!("|{}|{}|{}|{}", cfg.digits, cfg.max_terms, cfg.prime_max, cfg.n_max).as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    fn load(&self, key: &str) -> Option<VerificationReport> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let mut rep: VerificationReport = serde_json::from_str(&text).ok()?;
        rep.cached = true;
        Some(rep)
    }

    fn store(&self, key: &str, rep: &VerificationReport) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(rep).expect("report serializes"))?;
        fs::rename(tmp, self.path(key))
    }
}

struct Runner<'a> {
    jobs: usize,
    cache: Option<&'a Cache>,
    format: Format,
}

impl Runner<'_> {
    fn check(&self, entry: &ConjectureEntry, cfg: &RunConfig) -> VerificationReport {
        let Some(cache) = self.cache else {
            return verify_entry(entry, cfg);
        };
        let key = Cache::key(entry, cfg);
        if let Some(rep) = cache.load(&key) {
            return rep;
        }
        let rep = verify_entry(entry, cfg);
        // a cache that cannot be written only costs recomputation
        let _ = cache.store(&key, &rep);
        rep
    }

    fn run(&self, entries: &[&ConjectureEntry], cfg: &RunConfig, show_primes: bool, out: &mut dyn Write) -> i32 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build().expect("thread pool");
        let reports: Vec<VerificationReport> =
            pool.install(|| entries.par_iter().map(|e| self.check(e, cfg)).collect());
        match self.format {
            Format::Json => {
                let _ = writeln!(out, "{}", json_report(&reports, cfg));
            }
            Format::Text => write_text(&reports, show_primes, out),
        }
        let verdicts: Vec<&Verdict> = reports.iter().map(|r| &r.verdict).collect();
        exit_code(&verdicts)
    }
}

#[derive(Serialize, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub skip: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Summary {
        let mut s = Summary { total: reports.len(), ..Summary::default() };
        for r in reports {
            match r.verdict {
                Verdict::Pass { .. } => s.pass += 1,
                Verdict::Fail { .. } => s.fail += 1,
                Verdict::Inconclusive { .. } => s.inconclusive += 1,
                Verdict::Skip { .. } => s.skip += 1,
            }
        }
        s
    }
}

#[derive(Serialize)]
struct ConfigOut {
    digits: u32,
    max_terms: usize,
    prime_max: u64,
    n_max: u64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    engine: &'static str,
    config: ConfigOut,
    summary: Summary,
    reports: &'a [VerificationReport],
}

/// The JSON report; contains no timings so identical inputs give identical bytes.
pub fn json_report(reports: &[VerificationReport], cfg: &RunConfig) -> String {
    let doc = JsonReport {
        engine: ENGINE,
        config: ConfigOut { digits: cfg.digits, max_terms: cfg.max_terms, prime_max: cfg.prime_max, n_max: cfg.n_max },
        summary: Summary::of(reports),
        reports,
    };
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

pub fn text_line(r: &VerificationReport) -> String {
    let mut parts = vec![format!("{:<16}", r.id), format!("{:<13}", r.verdict.to_string())];
    if let Some(b) = &r.diff_bound {
        parts.push(format!("|lhs−rhs|≤{b}"));
    }
    if let Some(d) = &r.diagnostics {
        parts.push(format!("terms={}", d.terms_used));
    }
    if let Some(d) = &r.detail {
        parts.push(d.clone());
    }
    if let Verdict::Inconclusive { reason } = &r.verdict {
        parts.push(format!("({reason})"));
    }
    parts.push(if r.cached { "t=cached".to_string() } else { format!("t={}ms", r.elapsed_ms) });
    if !r.anomalies.is_empty() {
        parts.push(format!("[{}]", r.anomalies.join(", ")));
    }
    parts.join("  ")
}

fn prime_line(c: &crate::congruence::CaseReport) -> String {
    let verdict = match c.verdict {
        PrimeVerdict::Pass => "PASS",
        PrimeVerdict::Fail => "FAIL",
        PrimeVerdict::Skip => "SKIP",
        PrimeVerdict::NoCase => "NO_CASE",
    };
    let mut s = format!("    p={:<4} {verdict:<7}", c.p);
    if let Some(case) = &c.case {
        s.push_str(&format!("  case: {case}"));
    }
    if let Some((x, y)) = c.witness {
        s.push_str(&format!("  (x,y)=({x},{y})"));
    }
    if let (Some(l), Some(r), Some(m)) = (c.lhs, c.rhs, c.modulus) {
        s.push_str(&format!("  lhs={l} rhs={r} mod {m}"));
    }
    if c.flipped_sign_matches == Some(true) {
        s.push_str("  (matches with the sign flipped)");
    }
    s
}

fn write_text(reports: &[VerificationReport], show_primes: bool, out: &mut dyn Write) {
    for r in reports {
        let _ = writeln!(out, "{}", text_line(r));
        if show_primes {
            for c in &r.primes {
                let _ = writeln!(out, "{}", prime_line(c));
            }
        }
    }
    let s = Summary::of(reports);
    let _ = writeln!(
        out,
        "\n{} checks: {} PASS, {} FAIL, {} INCONCLUSIVE, {} SKIP",
        s.total, s.pass, s.fail, s.inconclusive, s.skip
    );
    let failed: Vec<&str> = reports.iter().filter(|r| r.verdict.is_fail()).map(|r| r.id.as_str()).collect();
    if !failed.is_empty() {
        let _ = writeln!(out, "FAIL (possible errata): {}", failed.join(", "));
    }
}

#[derive(Serialize)]
struct ListItem<'a> {
    id: &'a str,
    kind: Kind,
    status: Status,
    source: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    date: Option<&'a str>,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    anomalies: &'a [String],
}

fn list(catalog: &Catalog, kind: Option<Kind>, status: Option<Status>, format: Format, out: &mut dyn Write) {
    let items: Vec<ListItem> = catalog
        .entries
        .iter()
        .filter(|e| kind.map_or(true, |k| e.kind() == k) && status.map_or(true, |s| e.status == s))
        .map(|e| ListItem {
            id: &e.id,
            kind: e.kind(),
            status: e.status,
            source: &e.source,
            date: e.date.as_deref(),
            anomalies: &e.anomalies,
        })
        .collect();
    match format {
        Format::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&items).expect("list serializes"));
        }
        Format::Text => {
            for i in &items {
                let status = match i.status {
                    Status::Conjecture => "conjecture",
                    Status::ProvenReference => "proven-reference",
                };
                let mut line = format!("{:<16}  {:<17}  {:<16}  {}", i.id, i.kind.as_str(), status, i.source);
                if !i.anomalies.is_empty() {
                    line.push_str(&format!("  [{}]", i.anomalies.join(", ")));
                }
                let _ = writeln!(out, "{line}");
            }
        }
    }
}

pub const CONSTANT_TABLE: &[(&str, &str)] = &[
    ("pi", "pi"),
    ("gamma", "gamma"),
    ("log(2)", "log(2)"),
    ("zeta(2)", "zeta(2)"),
    ("zeta(3)", "zeta(3)"),
    ("zeta(4)", "zeta(4)"),
    ("zeta(5)", "zeta(5)"),
    ("zeta(6)", "zeta(6)"),
    ("zeta(7)", "zeta(7)"),
    ("zeta(8)", "zeta(8)"),
    ("zeta(9)", "zeta(9)"),
    ("Catalan", "G"),
    ("L_-3(2)", "L3(2)"),
    ("L_-3(3)", "L3(3)"),
    ("L_-3(4)", "L3(4)"),
    ("zeta(5,3)", "zeta(5,3)"),
];

#[derive(Serialize)]
struct ConstOut {
    name: &'static str,
    value: String,
}

fn constants(digits: u32, format: Format, out: &mut dyn Write) -> Result<i32, String> {
    let prec = Precision::from_digits(digits + 5);
    let mut rows = Vec::new();
    for (name, text) in CONSTANT_TABLE {
        let e: ConstExpr = text.parse().map_err(|e: crate::Error| e.to_string())?;
        let v = e.eval(prec).map_err(|e| e.to_string())?;
        let d = digits as usize;
        rows.push(ConstOut { name, value: format!("{v:.d$}") });
    }
    match format {
        Format::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("constants serialize"));
        }
        Format::Text => {
            for r in &rows {
                let _ = writeln!(out, "{:<10}  {}", r.name, r.value);
            }
        }
    }
    Ok(EXIT_PASS)
}
