use anyhow::{anyhow, bail, Context};
use hsconvex::funcat::{resolve_f, resolve_h};
use hsconvex::means::NamedMean;
use hsconvex::{
    chain_check, check_membership, evaluate_theorem, find_valid_s_range, mean, p_log_mean,
    proposition_check, random_subintervals, sweep, ChainReport, ClassKind, ClassSpec,
    InequalityReport, Interval, MeanKind, MembershipVerdict, PropositionId, PropositionReport,
    SRangeReport, SweepSpec, TheoremId, TheoremInput,
};
use serde::Serialize;

use crate::settings::Settings;

pub const DEFAULT_S_VALUES: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, Serialize)]
pub struct PLogValue {
    pub p: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeansReport {
    pub a: f64,
    pub b: f64,
    pub means: Vec<NamedMean>,
    pub p_logarithmic: Option<PLogValue>,
    pub chain: Option<ChainReport>,
}

pub enum Reports {
    Membership(Vec<MembershipVerdict>),
    SRange(Vec<SRangeReport>),
    Inequality(Vec<InequalityReport>),
    Means(Vec<MeansReport>),
    Propositions(Vec<PropositionReport>),
}

impl Reports {
    /// Whether every requested check holds; decides the exit status.
    pub fn all_hold(&self) -> bool {
        match self {
            Reports::Membership(v) => v.iter().all(MembershipVerdict::is_member),
            Reports::SRange(v) => v.iter().all(|r| !r.intervals.is_empty()),
            Reports::Inequality(v) => v.iter().all(|r| r.holds),
            Reports::Means(v) => v.iter().all(|r| r.chain.as_ref().is_none_or(|c| c.holds)),
            Reports::Propositions(v) => v.iter().all(|r| r.holds_as_printed && r.holds_as_derived),
        }
    }
}

fn need<T: Copy>(value: Option<T>, flag: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| anyhow!("missing required --{flag}"))
}

fn need_str<'a>(value: &'a Option<String>, flag: &str) -> anyhow::Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| anyhow!("missing required --{flag}"))
}

fn interval(settings: &Settings) -> anyhow::Result<Interval> {
    let (a, b) = (need(settings.a, "a")?, need(settings.b, "b")?);
    Interval::new(a, b).map_err(|e| anyhow!("--a {a} --b {b}: {e}"))
}

fn function(spec: &str, flag: &str, iv: Interval) -> anyhow::Result<hsconvex::RealFunction> {
    resolve_f(spec, iv).with_context(|| format!("--{flag} {spec:?}"))
}

fn weight(spec: &str) -> anyhow::Result<hsconvex::RealFunction> {
    resolve_h(spec).with_context(|| format!("--h {spec:?}"))
}

fn class_kind(settings: &Settings, default: Option<ClassKind>) -> anyhow::Result<ClassKind> {
    match (&settings.class, default) {
        (Some(c), _) => c.parse().with_context(|| format!("--class {c:?}")),
        (None, Some(d)) => Ok(d),
        (None, None) => bail!("missing required --class"),
    }
}

pub fn class_check(settings: &Settings) -> anyhow::Result<Reports> {
    let iv = interval(settings)?;
    let kind = class_kind(settings, None)?;
    let f = function(need_str(&settings.f, "f")?, "f", iv)?;
    let h = if kind.needs_h() {
        Some(weight(settings.h.as_deref().unwrap_or("identity"))?)
    } else {
        None
    };
    let s = if kind.needs_s() {
        Some(need(settings.s, "s")?)
    } else {
        None
    };
    let spec = ClassSpec::new(kind, h, s)?;
    let verdict = check_membership(&spec, &f, iv, &settings.search())?;
    Ok(Reports::Membership(vec![verdict]))
}

pub fn s_range(settings: &Settings) -> anyhow::Result<Reports> {
    let iv = interval(settings)?;
    let kind = class_kind(settings, Some(ClassKind::HsSecond))?;
    let f = function(need_str(&settings.f, "f")?, "f", iv)?;
    let h = if kind.needs_h() {
        Some(weight(settings.h.as_deref().unwrap_or("identity"))?)
    } else {
        None
    };
    let report = find_valid_s_range(kind, h.as_ref(), &f, iv, &settings.search())?;
    Ok(Reports::SRange(vec![report]))
}

pub fn verify(settings: &Settings) -> anyhow::Result<Reports> {
    let iv = interval(settings)?;
    let spec = need_str(&settings.theorem, "theorem")?;
    let id: TheoremId = spec
        .parse()
        .with_context(|| format!("--theorem {spec:?}"))?;
    let mut input = TheoremInput::new(function(need_str(&settings.f, "f")?, "f", iv)?, iv)
        .quad_tol(settings.tol());
    if let Some(g) = &settings.g {
        input.g = Some(function(g, "g", iv)?);
    }
    if let Some(h) = &settings.h {
        input.h = Some(weight(h)?);
    }
    input.s = settings.s;
    if settings.check_hypothesis {
        input = input.check_hypothesis(settings.search());
    }
    Ok(Reports::Inequality(vec![evaluate_theorem(id, &input)?]))
}

fn parse_interval(text: &str) -> anyhow::Result<Interval> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("interval {text:?} is not written a:b"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| anyhow!("interval {text:?}: {v:?} is not a number"))
    };
    Ok(Interval::new(parse(a)?, parse(b)?)?)
}

pub fn sweep_grid(settings: &Settings) -> anyhow::Result<Reports> {
    let mut spec = SweepSpec::new(need_str(&settings.f, "f")?);
    if let Some(names) = &settings.theorems {
        spec.theorems = names
            .iter()
            .map(|n| n.parse().with_context(|| format!("--theorems {n:?}")))
            .collect::<anyhow::Result<_>>()?;
    }
    spec.g = settings.g.clone();
    spec.h = settings.h.clone();
    spec.s_values = settings
        .s_values
        .clone()
        .or(settings.s.map(|s| vec![s]))
        .unwrap_or_else(|| DEFAULT_S_VALUES.to_vec());
    spec.intervals = match (&settings.intervals, settings.random_intervals) {
        (Some(_), Some(_)) => bail!("--intervals and --random-intervals are exclusive"),
        (Some(list), None) => list
            .iter()
            .map(|t| parse_interval(t))
            .collect::<anyhow::Result<_>>()?,
        (None, Some(n)) => random_subintervals(interval(settings)?, n, settings.seed()),
        (None, None) => vec![interval(settings)?],
    };
    spec.quad_tol = settings.tol();
    spec.check_hypothesis = settings.check_hypothesis;
    spec.search = settings.search();
    Ok(Reports::Inequality(sweep(&spec)?))
}

pub fn means(settings: &Settings) -> anyhow::Result<Reports> {
    let (a, b) = (need(settings.a, "a")?, need(settings.b, "b")?);
    let kinds = [
        MeanKind::Arithmetic,
        MeanKind::Geometric,
        MeanKind::Harmonic,
        MeanKind::Quadratic,
        MeanKind::Logarithmic,
        MeanKind::Identric,
    ];
    let means = kinds
        .into_iter()
        .map(|k| {
            Ok(NamedMean {
                name: k.symbol(),
                value: mean(k, a, b)?,
            })
        })
        .collect::<hsconvex::Result<Vec<_>>>()?;
    let p_logarithmic = match settings.p {
        Some(p) => Some(PLogValue {
            p,
            value: p_log_mean(a, b, p)?,
        }),
        None => None,
    };
    let chain = if settings.chain {
        Some(chain_check(a, b)?)
    } else {
        None
    };
    Ok(Reports::Means(vec![MeansReport {
        a,
        b,
        means,
        p_logarithmic,
        chain,
    }]))
}

pub fn props(settings: &Settings) -> anyhow::Result<Reports> {
    let (a, b) = (need(settings.a, "a")?, need(settings.b, "b")?);
    let s = need(settings.s, "s")?;
    let ids = match &settings.id {
        Some(ids) => ids
            .iter()
            .map(|&i| PropositionId::new(i))
            .collect::<hsconvex::Result<Vec<_>>>()?,
        None => PropositionId::ALL.to_vec(),
    };
    let search = settings.search();
    let reports = ids
        .into_iter()
        .map(|id| proposition_check(id, a, b, s, &search))
        .collect::<hsconvex::Result<Vec<_>>>()?;
    Ok(Reports::Propositions(reports))
}
