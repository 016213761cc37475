//! Serde adapters: arbitrary-precision integers and rationals travel as
//! decimal strings ("-12", "64/3").

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

use crate::exact::{format_rational, parse_rational, Integer, Rational};

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(|_| D::Error::custom(format!("invalid integer string {s:?}")))
    }
}

pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| s.trim().parse().map_err(|_| D::Error::custom(format!("invalid integer string {s:?}"))))
            .collect()
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational string {s:?}")))
    }
}

pub mod opt_rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational string {s:?}"))))
            .transpose()
    }
}

/// Constant expressions: written as text (`"pi^2/6"`), read from either text or
/// the tagged tree form.
pub mod const_expr {
    use super::*;
    use crate::constants::ConstExpr;
    use serde::Serialize;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Tree(ConstExpr),
    }

    pub fn serialize<S: Serializer>(v: &ConstExpr, s: S) -> Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ConstExpr, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Text(t) => t.parse().map_err(|e| D::Error::custom(format!("{e}"))),
            Repr::Tree(e) => e.validate().map(|_| e).map_err(D::Error::custom),
        }
    }
}
