use std::fmt;
use std::str::FromStr;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::modular::jacobi;
use crate::error::{Error, Result};
use crate::exact::{Integer, Rational};
use crate::parse::{parse, Ast};

/// Integer-valued formula in p, x, y with Jacobi symbols `J(a, n)` and
/// rational constants, e.g. `J(p,19)*(4*x^2-2*p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    text: String,
    ast: Ast,
}

#[derive(Clone, Copy, Debug)]
pub struct Vars {
    pub p: u64,
    pub x: Option<i64>,
    pub y: Option<i64>,
}

impl Formula {
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn uses_witness(&self) -> bool {
        fn walk(a: &Ast) -> bool {
            match a {
                Ast::Ident(n) => n == "x" || n == "y",
                Ast::Int(_) => false,
                Ast::Call(_, args) => args.iter().any(walk),
                Ast::Neg(a) => walk(a),
                Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b) | Ast::Pow(a, b) => walk(a) || walk(b),
            }
        }
        walk(&self.ast)
    }

    /// Exact value; None if it needs a witness that is absent or a Jacobi
    /// symbol is taken modulo an even or nonpositive number.
    pub fn eval(&self, v: Vars) -> Option<Rational> {
        eval(&self.ast, v)
    }
}

fn eval(a: &Ast, v: Vars) -> Option<Rational> {
    Some(match a {
        Ast::Int(n) => Rational::from_integer(n.clone()),
        Ast::Ident(n) => match n.as_str() {
            "p" => Rational::from_integer(v.p.into()),
            "x" => Rational::from_integer(v.x?.into()),
            "y" => Rational::from_integer(v.y?.into()),
            _ => return None,
        },
        Ast::Call(_, args) => {
            let a = eval(&args[0], v)?;
            let n = eval(&args[1], v)?;
            if !a.is_integer() || !n.is_integer() {
                return None;
            }
            let n = n.to_integer();
            if !n.is_positive() || n.is_even() {
                return None;
            }
            Rational::from_integer(jacobi(&a.to_integer(), &n).into())
        }
        Ast::Neg(a) => -eval(a, v)?,
        Ast::Add(a, b) => eval(a, v)? + eval(b, v)?,
        Ast::Sub(a, b) => eval(a, v)? - eval(b, v)?,
        Ast::Mul(a, b) => eval(a, v)? * eval(b, v)?,
        Ast::Div(a, b) => {
            let d = eval(b, v)?;
            if d.is_zero() {
                return None;
            }
            eval(a, v)? / d
        }
        Ast::Pow(a, b) => {
            let base = eval(a, v)?;
            let e = eval(b, v)?.to_integer().to_usize()?;
            num_traits::pow(base, e)
        }
    })
}

fn check(a: &Ast) -> std::result::Result<(), String> {
    match a {
        Ast::Int(_) => Ok(()),
        Ast::Ident(n) if matches!(n.as_str(), "p" | "x" | "y") => Ok(()),
        Ast::Ident(n) => Err(format!("unknown variable {n:?} (expected p, x or y)")),
        Ast::Call(name, args) if name == "J" && args.len() == 2 => args.iter().try_for_each(check),
        Ast::Call(name, _) => Err(format!("unknown function {name:?} (only J(a, n) is allowed)")),
        Ast::Neg(a) => check(a),
        Ast::Pow(a, b) => match b.as_int() {
            Some(e) if !e.is_negative() => check(a),
            _ => Err("exponents must be nonnegative integer literals".into()),
        },
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b) => {
            check(a)?;
            check(b)
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        let ast = parse(s)?;
        check(&ast).map_err(|m| Error::Parse { input: s.to_string(), message: m })?;
        Ok(Formula { text: s.to_string(), ast })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Formula, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|e: Error| serde::de::Error::custom(e.to_string()))
    }
}

impl Formula {
    pub fn one() -> Formula {
        Formula { text: "1".into(), ast: Ast::Int(Integer::one()) }
    }
}
