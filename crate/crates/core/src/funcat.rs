//! Named built-in functions, expression adapters, and the composite `h^s`.
//!
//! Catalog names are stable strings: `identity`, `one`, `reciprocal`,
//! `power(p)` for weight functions `h` on `[0, 1]`, and `ln`, `square`,
//! `identity`, `power(p)`, `abs`, `exp` (alias `expfn`) for integrands.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{DomainError, DomainReason, Error, Result};
use crate::expr::{self, EvalOutcome, Expression};
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Unbounded,
    Closed(f64),
    Open(f64),
}

/// Natural domain of a [`RealFunction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lower: Bound,
    pub upper: Bound,
}

impl Domain {
    pub const REAL_LINE: Domain = Domain {
        lower: Bound::Unbounded,
        upper: Bound::Unbounded,
    };

    pub fn closed(iv: Interval) -> Self {
        Domain {
            lower: Bound::Closed(iv.a()),
            upper: Bound::Closed(iv.b()),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = match self.lower {
            Bound::Unbounded => true,
            Bound::Closed(lo) => x >= lo,
            Bound::Open(lo) => x > lo,
        };
        let below = match self.upper {
            Bound::Unbounded => true,
            Bound::Closed(hi) => x <= hi,
            Bound::Open(hi) => x < hi,
        };
        above && below && !x.is_nan()
    }

    pub fn contains_interval(&self, iv: Interval) -> bool {
        self.contains(iv.a()) && self.contains(iv.b())
    }

    pub fn intersect(&self, iv: Interval) -> Domain {
        let lower = match self.lower {
            Bound::Unbounded => Bound::Closed(iv.a()),
            Bound::Closed(lo) if lo >= iv.a() => Bound::Closed(lo),
            Bound::Open(lo) if lo >= iv.a() => Bound::Open(lo),
            _ => Bound::Closed(iv.a()),
        };
        let upper = match self.upper {
            Bound::Unbounded => Bound::Closed(iv.b()),
            Bound::Closed(hi) if hi <= iv.b() => Bound::Closed(hi),
            Bound::Open(hi) if hi <= iv.b() => Bound::Open(hi),
            _ => Bound::Closed(iv.b()),
        };
        Domain { lower, upper }
    }
}

type Evaluator = dyn Fn(f64) -> EvalOutcome + Send + Sync;

/// An evaluable real function of one variable with a declared domain.
/// Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct RealFunction {
    name: String,
    domain: Domain,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl Serialize for RealFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

impl RealFunction {
    pub fn new<F>(name: impl Into<String>, domain: Domain, eval: F) -> Self
    where
        F: Fn(f64) -> EvalOutcome + Send + Sync + 'static,
    {
        RealFunction {
            name: name.into(),
            domain,
            eval: Arc::new(eval),
        }
    }

    /// Wraps a parsed expression; its natural domain is the real line and
    /// failures surface from evaluation itself.
    pub fn from_expression(expr: Expression) -> Self {
        let name = expr.to_string();
        RealFunction::new(name, Domain::REAL_LINE, move |x| expr.evaluate(x))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn eval(&self, x: f64) -> EvalOutcome {
        if !self.domain.contains(x) {
            return Err(DomainError::new(
                self.name.clone(),
                x,
                DomainReason::OutsideDomain,
            ));
        }
        let v = (self.eval)(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DomainError::new(
                self.name.clone(),
                x,
                DomainReason::NonFinite,
            ))
        }
    }

    /// Same evaluator, domain narrowed to `iv`. Fails when `iv` reaches
    /// outside the current domain.
    pub fn restricted(&self, iv: Interval) -> Result<RealFunction> {
        if !self.domain.contains_interval(iv) {
            return Err(Error::DomainIncompatible {
                name: self.name.clone(),
                a: iv.a(),
                b: iv.b(),
            });
        }
        Ok(RealFunction {
            name: self.name.clone(),
            domain: Domain::closed(iv),
            eval: Arc::clone(&self.eval),
        })
    }

    /// Narrows the domain to `iv` without the compatibility check. Used for
    /// expression-backed functions whose failures are pointwise.
    pub fn clipped(&self, iv: Interval) -> RealFunction {
        RealFunction {
            name: self.name.clone(),
            domain: self.domain.intersect(iv),
            eval: Arc::clone(&self.eval),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Weight functions on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HName {
    Identity,
    One,
    Reciprocal,
    Power(f64),
}

/// Integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FName {
    Ln,
    Square,
    Identity,
    Power(f64),
    Abs,
    Exp,
}

/// Splits `power(0.5)` into `("power", Some("0.5"))`.
fn split_call(name: &str) -> Option<(&str, Option<&str>)> {
    let name = name.trim();
    match name.find('(') {
        None => Some((name, None)),
        Some(open) => {
            let inner = name[open + 1..].strip_suffix(')')?;
            Some((name[..open].trim(), Some(inner.trim())))
        }
    }
}

fn parse_power_arg(arg: Option<&str>, full: &str, what: &'static str) -> Result<f64> {
    let unknown = || Error::UnknownName {
        what,
        name: full.to_owned(),
    };
    let p: f64 = arg.ok_or_else(unknown)?.parse().map_err(|_| unknown())?;
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "power exponent",
            value: p,
            reason: "must be positive",
        });
    }
    Ok(p)
}

impl HName {
    pub fn parse(name: &str) -> Result<HName> {
        let unknown = || Error::UnknownName {
            what: "weight function",
            name: name.to_owned(),
        };
        let (head, arg) = split_call(name).ok_or_else(unknown)?;
        match (head, arg) {
            ("identity", None) => Ok(HName::Identity),
            ("one", None) => Ok(HName::One),
            ("reciprocal", None) => Ok(HName::Reciprocal),
            ("power", arg) => Ok(HName::Power(parse_power_arg(arg, name, "weight function")?)),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for HName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HName::Identity => f.write_str("identity"),
            HName::One => f.write_str("one"),
            HName::Reciprocal => f.write_str("reciprocal"),
            HName::Power(p) => write!(f, "power({p})"),
        }
    }
}

impl FName {
    pub fn parse(name: &str) -> Result<FName> {
        let unknown = || Error::UnknownName {
            what: "function",
            name: name.to_owned(),
        };
        let (head, arg) = split_call(name).ok_or_else(unknown)?;
        match (head, arg) {
            ("ln", None) => Ok(FName::Ln),
            ("square", None) => Ok(FName::Square),
            ("identity", None) => Ok(FName::Identity),
            ("abs", None) => Ok(FName::Abs),
            ("exp" | "expfn", None) => Ok(FName::Exp),
            ("power", arg) => Ok(FName::Power(parse_power_arg(arg, name, "function")?)),
            _ => Err(unknown()),
        }
    }

    fn natural_domain(self) -> Domain {
        match self {
            FName::Ln => Domain {
                lower: Bound::Open(0.0),
                upper: Bound::Unbounded,
            },
            FName::Power(_) => Domain {
                lower: Bound::Closed(0.0),
                upper: Bound::Unbounded,
            },
            _ => Domain::REAL_LINE,
        }
    }
}

impl fmt::Display for FName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FName::Ln => f.write_str("ln"),
            FName::Square => f.write_str("square"),
            FName::Identity => f.write_str("identity"),
            FName::Power(p) => write!(f, "power({p})"),
            FName::Abs => f.write_str("abs"),
            FName::Exp => f.write_str("exp"),
        }
    }
}

/// Catalog weight function on `[0, 1]` (`(0, 1]` for `reciprocal`).
pub fn builtin_h(name: HName) -> RealFunction {
    let unit = Domain {
        lower: Bound::Closed(0.0),
        upper: Bound::Closed(1.0),
    };
    let label = name.to_string();
    match name {
        HName::Identity => RealFunction::new(label, unit, Ok),
        HName::One => RealFunction::new(label, unit, |_| Ok(1.0)),
        HName::Reciprocal => RealFunction::new(
            label,
            Domain {
                lower: Bound::Open(0.0),
                upper: Bound::Closed(1.0),
            },
            |t| Ok(1.0 / t),
        ),
        HName::Power(p) => RealFunction::new(label, unit, move |t| Ok(t.powf(p))),
    }
}

/// Catalog integrand restricted to `domain`.
pub fn builtin_f(name: FName, domain: Interval) -> Result<RealFunction> {
    let label = name.to_string();
    let natural = name.natural_domain();
    let f = match name {
        FName::Ln => RealFunction::new(label, natural, |x| Ok(x.ln())),
        FName::Square => RealFunction::new(label, natural, |x| Ok(x * x)),
        FName::Identity => RealFunction::new(label, natural, Ok),
        FName::Power(p) => RealFunction::new(label, natural, move |x| Ok(x.powf(p))),
        FName::Abs => RealFunction::new(label, natural, |x| Ok(x.abs())),
        FName::Exp => RealFunction::new(label, natural, |x| Ok(x.exp())),
    };
    f.restricted(domain)
}

/// Resolves a command-line function spec: a catalog name first, otherwise
/// an expression in the free variable.
pub fn resolve_f(spec: &str, domain: Interval) -> Result<RealFunction> {
    match FName::parse(spec) {
        Ok(name) => builtin_f(name, domain),
        Err(e @ Error::InvalidParameter { .. }) => Err(e),
        Err(_) => {
            let expr = expr::parse(spec)?;
            Ok(RealFunction::from_expression(expr).clipped(domain))
        }
    }
}

/// Resolves a weight-function spec the same way; expressions are clipped
/// to `[0, 1]`.
pub fn resolve_h(spec: &str) -> Result<RealFunction> {
    match HName::parse(spec) {
        Ok(name) => Ok(builtin_h(name)),
        Err(e @ Error::InvalidParameter { .. }) => Err(e),
        Err(_) => {
            let expr = expr::parse(spec)?;
            Ok(RealFunction::from_expression(expr).clipped(Interval::unit()))
        }
    }
}

pub(crate) fn validate_s(s: f64) -> Result<f64> {
    if s.is_finite() && s > 0.0 && s <= 1.0 {
        Ok(s)
    } else {
        Err(Error::InvalidParameter {
            name: "s",
            value: s,
            reason: "must lie in (0, 1]",
        })
    }
}

/// The composite `t -> h(t)^s`.
#[derive(Debug, Clone)]
pub struct HPower {
    h: RealFunction,
    s: f64,
}

impl HPower {
    pub fn h(&self) -> &RealFunction {
        &self.h
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `h(t)^s`. Zero maps to zero; `s = 1` passes `h(t)` through untouched.
    pub fn eval(&self, t: f64) -> EvalOutcome {
        let v = self.h.eval(t)?;
        if v < 0.0 {
            return Err(DomainError::new(
                self.h.name().to_owned(),
                t,
                DomainReason::NegativeWeight,
            ));
        }
        if self.s == 1.0 {
            return Ok(v);
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        let r = v.powf(self.s);
        if r.is_finite() {
            Ok(r)
        } else {
            Err(DomainError::new(
                self.h.name().to_owned(),
                t,
                DomainReason::NonFinite,
            ))
        }
    }
}

pub fn h_power(h: &RealFunction, s: f64) -> Result<HPower> {
    Ok(HPower {
        h: h.clone(),
        s: validate_s(s)?,
    })
}
