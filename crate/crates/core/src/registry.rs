//! The conjecture catalog: typed entries, loading and validation.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ball::{ComplexBall, Precision};
use crate::congruence::{CongruenceSpec, IntegralitySpec};
use crate::constants::ConstExpr;
use crate::error::{Error, Result};
use crate::series::SummandSpec;
use crate::taylor::DerivativeSeriesSpec;

pub const BUILTIN_JSON: &str = include_str!("../catalog/builtin.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Series,
    DerivativeSeries,
    Congruence,
    Integrality,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Series => "series",
            Kind::DerivativeSeries => "derivative-series",
            Kind::Congruence => "congruence",
            Kind::Integrality => "integrality",
        }
    }

    pub fn needs_rhs(self) -> bool {
        matches!(self, Kind::Series | Kind::DerivativeSeries)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Conjecture,
    ProvenReference,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Series(SummandSpec),
    DerivativeSeries(DerivativeSeriesSpec),
    Congruence(CongruenceSpec),
    Integrality(IntegralitySpec),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Series(_) => Kind::Series,
            Payload::DerivativeSeries(_) => Kind::DerivativeSeries,
            Payload::Congruence(_) => Kind::Congruence,
            Payload::Integrality(_) => Kind::Integrality,
        }
    }

    fn to_value(&self) -> serde_json::Value {
        let v = match self {
            Payload::Series(s) => serde_json::to_value(s),
            Payload::DerivativeSeries(s) => serde_json::to_value(s),
            Payload::Congruence(s) => serde_json::to_value(s),
            Payload::Integrality(s) => serde_json::to_value(s),
        };
        v.expect("payload types serialize to JSON")
    }

    fn from_value(kind: Kind, v: serde_json::Value) -> std::result::Result<Payload, String> {
        fn typed<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> std::result::Result<T, String> {
            serde_path_to_error::deserialize(v).map_err(|e| {
                let path = pointer(e.path());
                format!("payload{path}: {}", e.inner())
            })
        }
        Ok(match kind {
            Kind::Series => Payload::Series(typed(v)?),
            Kind::DerivativeSeries => Payload::DerivativeSeries(typed(v)?),
            Kind::Congruence => Payload::Congruence(typed(v)?),
            Kind::Integrality => Payload::Integrality(typed(v)?),
        })
    }

    fn validate(&self) -> std::result::Result<(), String> {
        match self {
            Payload::Series(s) => s.validate(),
            Payload::DerivativeSeries(s) => s.validate(),
            Payload::Congruence(s) => s.validate(),
            Payload::Integrality(s) => s.validate(),
        }
    }
}

/// Closed-form right side; `im` is absent for real values.
#[derive(Clone, Debug, PartialEq)]
pub struct Rhs {
    pub re: ConstExpr,
    pub im: Option<ConstExpr>,
}

impl Rhs {
    pub fn real(re: ConstExpr) -> Rhs {
        Rhs { re, im: None }
    }

    pub fn eval(&self, prec: Precision) -> Result<ComplexBall> {
        let re = self.re.eval(prec)?;
        match &self.im {
            None => Ok(re),
            Some(im) => {
                let im = im.eval(prec)?;
                let i_im = im.mul(&ComplexBall::i(), prec);
                Ok(re.add(&i_im, prec))
            }
        }
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.im {
            None => write!(f, "{}", self.re),
            Some(im) => write!(f, "({}) + i*({})", self.re, im),
        }
    }
}

#[derive(Serialize)]
struct ComplexRepr<'a> {
    #[serde(with = "crate::serde_big::const_expr")]
    re: &'a ConstExpr,
    #[serde(with = "crate::serde_big::const_expr")]
    im: &'a ConstExpr,
}

impl Serialize for Rhs {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.im {
            None => crate::serde_big::const_expr::serialize(&self.re, s),
            Some(im) => ComplexRepr { re: &self.re, im }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Rhs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rhs, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Complex {
            #[serde(with = "crate::serde_big::const_expr")]
            re: ConstExpr,
            #[serde(with = "crate::serde_big::const_expr")]
            im: ConstExpr,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Complex(Complex),
            Single(#[serde(with = "crate::serde_big::const_expr")] ConstExpr),
        }
        match Repr::deserialize(d).map_err(|_| {
            serde::de::Error::custom("expected a constant expression or an object {\"re\": ..., \"im\": ...}")
        })? {
            Repr::Complex(c) => Ok(Rhs { re: c.re, im: Some(c.im) }),
            Repr::Single(e) => Ok(Rhs::real(e)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEntry", into = "RawEntry")]
pub struct ConjectureEntry {
    pub id: String,
    /// Entries sharing a display share a group, e.g. "3.1".
    pub group: Option<String>,
    pub status: Status,
    pub source: String,
    pub date: Option<String>,
    pub payload: Payload,
    pub rhs: Option<Rhs>,
    pub anomalies: Vec<String>,
}

impl ConjectureEntry {
    pub fn kind(&self) -> Kind {
        self.payload.kind()
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("empty id".into());
        }
        self.payload.validate()?;
        match (self.kind().needs_rhs(), &self.rhs) {
            (true, None) => return Err(format!("{} entries need an rhs", self.kind())),
            (false, Some(_)) => return Err(format!("{} entries take no rhs", self.kind())),
            _ => {}
        }
        if self.status == Status::ProvenReference
            && !(self.source.starts_with("Remark") || self.source.starts_with("Section"))
        {
            return Err(format!("reference entry must cite its remark, got source {:?}", self.source));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    kind: Kind,
    status: Status,
    source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    date: Option<String>,
    payload: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rhs: Option<Rhs>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    anomalies: Vec<String>,
}

impl TryFrom<RawEntry> for ConjectureEntry {
    type Error = String;

    fn try_from(r: RawEntry) -> std::result::Result<Self, String> {
        let payload = Payload::from_value(r.kind, r.payload)?;
        let e = ConjectureEntry {
            id: r.id,
            group: r.group,
            status: r.status,
            source: r.source,
            date: r.date,
            payload,
            rhs: r.rhs,
            anomalies: r.anomalies,
        };
        e.validate()?;
        Ok(e)
    }
}

impl From<ConjectureEntry> for RawEntry {
    fn from(e: ConjectureEntry) -> RawEntry {
        RawEntry {
            id: e.id,
            group: e.group,
            kind: e.payload.kind(),
            status: e.status,
            source: e.source,
            date: e.date,
            payload: e.payload.to_value(),
            rhs: e.rhs,
            anomalies: e.anomalies,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub version: u32,
    pub entries: Vec<ConjectureEntry>,
}

impl Catalog {
    pub fn get(&self, id: &str) -> Option<&ConjectureEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Entries whose id equals `sel`, or whose group equals it, in catalog order.
    pub fn select(&self, sel: &str) -> Vec<&ConjectureEntry> {
        if let Some(e) = self.get(sel) {
            return vec![e];
        }
        self.entries.iter().filter(|e| e.group.as_deref() == Some(sel)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cat: Catalog = serde_path_to_error::deserialize(de)
        .map_err(|e| Error::SchemaViolation { pointer: pointer(e.path()), message: e.inner().to_string() })?;
    let mut seen = HashSet::new();
    for e in &cat.entries {
        if !seen.insert(e.id.as_str()) {
            return Err(Error::DuplicateId(e.id.clone()));
        }
    }
    Ok(cat)
}

pub fn builtin() -> Catalog {
    parse_catalog(BUILTIN_JSON).expect("built-in catalog is valid")
}

/// The built-in catalog, or the file at `path`.
pub fn load_catalog(path: Option<&Path>) -> Result<Catalog> {
    match path {
        None => parse_catalog(BUILTIN_JSON),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            parse_catalog(&text)
        }
    }
}
