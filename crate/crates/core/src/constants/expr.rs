use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ball::{ComplexBall, Precision, RealBall};
use crate::error::{Error, Result};
use crate::exact::{format_rational, Integer, Rational};
use crate::parse::{parse, Ast};

/// Closed-form constant built from rationals, pi, gamma, square roots,
/// logarithms, zeta-like values and the imaginary unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstExpr {
    Rational(#[serde(with = "crate::serde_big::rational")] Rational),
    Pi,
    EulerGamma,
    Sqrt(#[serde(with = "crate::serde_big::int")] Integer),
    SqrtOf(Box<ConstExpr>),
    Log(#[serde(with = "crate::serde_big::rational")] Rational),
    Zeta(u32),
    Beta(u32),
    Lm3(u32),
    Zeta53,
    ImaginaryUnit,
    Add(Vec<ConstExpr>),
    Sub(Box<ConstExpr>, Box<ConstExpr>),
    Mul(Vec<ConstExpr>),
    Div(Box<ConstExpr>, Box<ConstExpr>),
    Neg(Box<ConstExpr>),
    IntPow(Box<ConstExpr>, i32),
}

pub const MAX_DEPTH: usize = 64;

impl ConstExpr {
    pub fn int(n: i64) -> ConstExpr {
        ConstExpr::Rational(Rational::from_integer(n.into()))
    }

    pub fn depth(&self) -> usize {
        use ConstExpr::*;
        match self {
            Add(xs) | Mul(xs) => 1 + xs.iter().map(|x| x.depth()).max().unwrap_or(0),
            Sub(a, b) | Div(a, b) => 1 + a.depth().max(b.depth()),
            Neg(a) | SqrtOf(a) | IntPow(a, _) => 1 + a.depth(),
            _ => 1,
        }
    }

    /// Structural checks that do not require evaluation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.depth() > MAX_DEPTH {
            return Err(format!("expression deeper than {MAX_DEPTH}"));
        }
        self.validate_node()
    }

    fn validate_node(&self) -> std::result::Result<(), String> {
        use ConstExpr::*;
        match self {
            Sqrt(n) if !n.is_positive() => Err(format!("sqrt of non-positive integer {n}")),
            Log(q) if !q.is_positive() => Err(format!("log of non-positive rational {}", format_rational(q))),
            Zeta(s) if *s < 2 => Err(format!("zeta({s}) needs s >= 2")),
            Beta(s) | Lm3(s) if *s < 1 => Err("beta/L3 need s >= 1".to_string()),
            Div(_, b) if b.as_rational().is_some_and(|q| q.is_zero()) => Err("division by literal zero".to_string()),
            Add(xs) | Mul(xs) if xs.is_empty() => Err("empty operand list".to_string()),
            Add(xs) | Mul(xs) => xs.iter().try_for_each(|x| x.validate_node()),
            Sub(a, b) | Div(a, b) => {
                a.validate_node()?;
                b.validate_node()
            }
            Neg(a) | SqrtOf(a) | IntPow(a, _) => a.validate_node(),
            _ => Ok(()),
        }
    }

    /// Value of an expression built only from rational literals.
    pub fn as_rational(&self) -> Option<Rational> {
        use ConstExpr::*;
        match self {
            Rational(q) => Some(q.clone()),
            Neg(a) => a.as_rational().map(|q| -q),
            Add(xs) => xs.iter().map(|x| x.as_rational()).sum(),
            Mul(xs) => xs.iter().map(|x| x.as_rational()).product(),
            Sub(a, b) => Some(a.as_rational()? - b.as_rational()?),
            Div(a, b) => {
                let d = b.as_rational()?;
                (!d.is_zero()).then(|| a.as_rational().map(|n| n / d)).flatten()
            }
            IntPow(a, n) => {
                let q = a.as_rational()?;
                if q.is_zero() && *n < 0 {
                    return None;
                }
                Some(num_traits::pow::pow(q.clone(), n.unsigned_abs() as usize)).map(|v| if *n < 0 { v.recip() } else { v })
            }
            _ => None,
        }
    }

    fn from_ast(ast: &Ast, input: &str) -> Result<ConstExpr> {
        let err = |m: String| Error::Parse { input: input.to_string(), message: m };
        let small = |a: &Ast, what: &str| -> Result<u32> {
            a.as_int()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| err(format!("{what} needs a nonnegative integer argument")))
        };
        Ok(match ast {
            Ast::Int(n) => ConstExpr::Rational(Rational::from_integer(n.clone())),
            Ast::Ident(name) => match name.as_str() {
                "pi" | "Pi" => ConstExpr::Pi,
                "gamma" | "EulerGamma" => ConstExpr::EulerGamma,
                "i" | "ImaginaryUnit" => ConstExpr::ImaginaryUnit,
                "z53" | "Zeta53" => ConstExpr::Zeta53,
                "G" | "Catalan" => ConstExpr::Beta(2),
                _ => return Err(err(format!("unknown constant {name}"))),
            },
            Ast::Call(name, args) => match (name.as_str(), args.as_slice()) {
                ("sqrt", [a]) => match a.as_int() {
                    Some(n) if n.is_positive() => ConstExpr::Sqrt(n),
                    _ => ConstExpr::SqrtOf(Box::new(ConstExpr::from_ast(a, input)?)),
                },
                ("log", [a]) => {
                    let q = ConstExpr::from_ast(a, input)?
                        .as_rational()
                        .filter(|q| q.is_positive())
                        .ok_or_else(|| err("log needs a positive rational argument".into()))?;
                    ConstExpr::Log(q)
                }
                ("zeta", [s]) => ConstExpr::Zeta(small(s, "zeta")?),
                ("zeta", [a, b]) if a.as_int() == Some(5.into()) && b.as_int() == Some(3.into()) => ConstExpr::Zeta53,
                ("beta", [s]) => ConstExpr::Beta(small(s, "beta")?),
                ("L3" | "Lm3", [s]) => ConstExpr::Lm3(small(s, "L3")?),
                _ => return Err(err(format!("unknown function {name}/{}", args.len()))),
            },
            Ast::Neg(a) => match ConstExpr::from_ast(a, input)? {
                ConstExpr::Rational(q) => ConstExpr::Rational(-q),
                e => ConstExpr::Neg(Box::new(e)),
            },
            Ast::Add(a, b) => {
                let mut xs = Vec::new();
                for e in [ConstExpr::from_ast(a, input)?, ConstExpr::from_ast(b, input)?] {
                    match e {
                        ConstExpr::Add(inner) => xs.extend(inner),
                        e => xs.push(e),
                    }
                }
                ConstExpr::Add(xs)
            }
            Ast::Mul(a, b) => {
                let mut xs = Vec::new();
                for e in [ConstExpr::from_ast(a, input)?, ConstExpr::from_ast(b, input)?] {
                    match e {
                        ConstExpr::Mul(inner) => xs.extend(inner),
                        e => xs.push(e),
                    }
                }
                ConstExpr::Mul(xs)
            }
            Ast::Sub(a, b) => ConstExpr::Sub(
                Box::new(ConstExpr::from_ast(a, input)?),
                Box::new(ConstExpr::from_ast(b, input)?),
            ),
            Ast::Div(a, b) => {
                let (x, y) = (ConstExpr::from_ast(a, input)?, ConstExpr::from_ast(b, input)?);
                match (&x, &y) {
                    (ConstExpr::Rational(p), ConstExpr::Rational(q)) if !q.is_zero() => ConstExpr::Rational(p / q),
                    _ => ConstExpr::Div(Box::new(x), Box::new(y)),
                }
            }
            Ast::Pow(a, n) => {
                let n = n
                    .as_int()
                    .and_then(|n| i32::try_from(n).ok())
                    .ok_or_else(|| err("exponent must be an integer literal".into()))?;
                ConstExpr::IntPow(Box::new(ConstExpr::from_ast(a, input)?), n)
            }
        })
    }

    /// Encloses the value at (at least) `prec` bits.
    pub fn eval(&self, prec: Precision) -> Result<ComplexBall> {
        let wp = prec.plus(32);
        self.eval_at(wp)
    }

    fn eval_at(&self, wp: Precision) -> Result<ComplexBall> {
        use ConstExpr::*;
        let real = |r: Result<RealBall>| r.map(ComplexBall::from_real);
        match self {
            Rational(q) => Ok(ComplexBall::from_rational(q, wp)),
            Pi => Ok(ComplexBall::from_real(super::pi(wp))),
            EulerGamma => Ok(ComplexBall::from_real(super::euler_gamma(wp))),
            Sqrt(n) => real(super::sqrt_int(n, wp)),
            SqrtOf(a) => {
                let v = a.eval_at(wp)?;
                if !v.is_real() {
                    return Err(Error::DomainViolation("square root of a non-real value".into()));
                }
                real(crate::ball::sqrt(v.re(), wp))
            }
            Log(q) => real(super::log_rational(q, wp)),
            Zeta(s) => real(super::zeta(*s, wp)),
            Beta(s) => real(super::beta(*s, wp)),
            Lm3(s) => real(super::lm3(*s, wp)),
            Zeta53 => real(super::zeta53(wp)),
            ImaginaryUnit => Ok(ComplexBall::i()),
            Add(xs) => {
                let mut acc = ComplexBall::zero();
                for x in xs {
                    acc = acc.add(&x.eval_at(wp)?, wp);
                }
                Ok(acc)
            }
            Mul(xs) => {
                let mut acc = ComplexBall::one();
                for x in xs {
                    acc = acc.mul(&x.eval_at(wp)?, wp);
                }
                Ok(acc)
            }
            Sub(a, b) => Ok(a.eval_at(wp)?.sub(&b.eval_at(wp)?, wp)),
            Div(a, b) => a.eval_at(wp)?.div(&b.eval_at(wp)?, wp),
            Neg(a) => Ok(a.eval_at(wp)?.neg()),
            IntPow(a, n) => a.eval_at(wp)?.pow(*n, wp),
        }
    }

    fn level(&self) -> u8 {
        use ConstExpr::*;
        match self {
            Rational(q) if q.is_integer() && !q.is_negative() => 5,
            Rational(_) => 2,
            Add(_) | Sub(..) => 1,
            Mul(_) | Div(..) => 2,
            Neg(_) => 3,
            IntPow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        use ConstExpr::*;
        match self {
            Rational(q) => write!(f, "{}", format_rational(q)),
            Pi => write!(f, "pi"),
            EulerGamma => write!(f, "gamma"),
            Sqrt(n) => write!(f, "sqrt({n})"),
            SqrtOf(a) => {
                write!(f, "sqrt(")?;
                a.write_at(f, 0)?;
                write!(f, ")")
            }
            Log(q) => write!(f, "log({})", format_rational(q)),
            Zeta(s) => write!(f, "zeta({s})"),
            Beta(s) => write!(f, "beta({s})"),
            Lm3(s) => write!(f, "L3({s})"),
            Zeta53 => write!(f, "zeta(5,3)"),
            ImaginaryUnit => write!(f, "i"),
            Add(xs) => {
                for (j, x) in xs.iter().enumerate() {
                    if j > 0 {
                        write!(f, " + ")?;
                    }
                    x.write_at(f, if j == 0 { 1 } else { 2 })?;
                }
                Ok(())
            }
            Mul(xs) => {
                for (j, x) in xs.iter().enumerate() {
                    if j > 0 {
                        write!(f, "*")?;
                    }
                    x.write_at(f, if j == 0 { 2 } else { 3 })?;
                }
                Ok(())
            }
            Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " - ")?;
                b.write_at(f, 2)
            }
            Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "/")?;
                b.write_at(f, 3)
            }
            Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            IntPow(a, n) => {
                a.write_at(f, 5)?;
                write!(f, "^{n}")
            }
        }
    }
}

impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl FromStr for ConstExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<ConstExpr> {
        let e = ConstExpr::from_ast(&parse(s)?, s)?;
        e.validate().map_err(|m| Error::Parse { input: s.to_string(), message: m })?;
        Ok(e)
    }
}

impl From<Rational> for ConstExpr {
    fn from(q: Rational) -> Self {
        ConstExpr::Rational(q)
    }
}

impl ConstExpr {
    pub fn one() -> ConstExpr {
        ConstExpr::Rational(Rational::one())
    }
}
