use std::fmt::Write as _;

use hsconvex::{to_json, Envelope, MembershipStatus};
use serde::Serialize;

use crate::commands::Reports;
use crate::settings::{Format, Settings};

pub fn render(settings: &Settings, reports: &Reports) -> anyhow::Result<String> {
    match settings.format() {
        Format::Json => json(settings, reports),
        Format::Csv => csv_text(reports),
        Format::Text => Ok(text(reports)),
    }
}

fn envelope<R: Serialize>(settings: &Settings, reports: &[R]) -> anyhow::Result<String> {
    Ok(to_json(&Envelope::new(
        settings,
        settings.seed(),
        reports.iter().collect(),
    ))?)
}

fn json(settings: &Settings, reports: &Reports) -> anyhow::Result<String> {
    match reports {
        Reports::Membership(v) => envelope(settings, v),
        Reports::SRange(v) => envelope(settings, v),
        Reports::Inequality(v) => envelope(settings, v),
        Reports::Means(v) => envelope(settings, v),
        Reports::Propositions(v) => envelope(settings, v),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_text(reports: &Reports) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match reports {
        Reports::Membership(v) => {
            w.write_record([
                "class",
                "h",
                "s",
                "function",
                "a",
                "b",
                "status",
                "x",
                "y",
                "t",
                "defect",
                "max_defect",
                "tolerance",
                "evaluations",
                "partial",
            ])?;
            for r in v {
                let wit = r.witness.as_ref();
                w.write_record([
                    r.class.kind().to_string(),
                    r.class.h().map(|h| h.name().to_owned()).unwrap_or_default(),
                    opt(r.class.s()),
                    r.function.clone(),
                    r.interval.a().to_string(),
                    r.interval.b().to_string(),
                    status(r.status).to_owned(),
                    opt(wit.map(|w| w.x)),
                    opt(wit.map(|w| w.y)),
                    opt(wit.map(|w| w.t)),
                    opt(wit.map(|w| w.defect)),
                    r.max_defect.defect.to_string(),
                    r.tolerance.to_string(),
                    r.evaluations.to_string(),
                    r.partial.to_string(),
                ])?;
            }
        }
        Reports::SRange(v) => {
            w.write_record([
                "class", "h", "function", "a", "b", "s_lo", "s_hi", "partial",
            ])?;
            for r in v {
                for run in &r.intervals {
                    w.write_record([
                        r.kind.to_string(),
                        r.h.clone().unwrap_or_default(),
                        r.function.clone(),
                        r.interval.a().to_string(),
                        r.interval.b().to_string(),
                        run.lo.to_string(),
                        run.hi.to_string(),
                        r.partial.to_string(),
                    ])?;
                }
            }
        }
        Reports::Inequality(v) => {
            w.write_record([
                "theorem",
                "f",
                "g",
                "h",
                "s",
                "a",
                "b",
                "lhs",
                "lhs_value",
                "rhs",
                "rhs_value",
                "margin",
                "slack",
                "holds",
                "hypothesis",
                "converged",
            ])?;
            for r in v {
                let hyp = match &r.hypothesis {
                    None => "unchecked",
                    Some(h) if h.established => "established",
                    Some(_) => "not_established",
                };
                for c in &r.comparisons {
                    w.write_record([
                        r.theorem.to_string(),
                        r.f.clone(),
                        r.g.clone().unwrap_or_default(),
                        r.h.clone().unwrap_or_default(),
                        opt(r.s),
                        r.interval.a().to_string(),
                        r.interval.b().to_string(),
                        c.lhs.clone(),
                        c.lhs_value.to_string(),
                        c.rhs.clone(),
                        c.rhs_value.to_string(),
                        c.margin.to_string(),
                        c.slack.to_string(),
                        c.holds.to_string(),
                        hyp.to_owned(),
                        r.converged.to_string(),
                    ])?;
                }
            }
        }
        Reports::Means(v) => {
            w.write_record(["a", "b", "row", "lhs", "rhs", "value", "holds"])?;
            for r in v {
                let (a, b) = (r.a.to_string(), r.b.to_string());
                for m in &r.means {
                    w.write_record([&a, &b, "mean", m.name, "", &m.value.to_string(), ""])?;
                }
                if let Some(p) = &r.p_logarithmic {
                    let label = format!("L_{}", p.p);
                    w.write_record([&a, &b, "mean", &label, "", &p.value.to_string(), ""])?;
                }
                for l in r.chain.iter().flat_map(|c| &c.links) {
                    let (margin, holds) = (l.margin.to_string(), l.holds.to_string());
                    w.write_record([&a, &b, "margin", l.lhs, l.rhs, &margin, &holds])?;
                }
            }
        }
        Reports::Propositions(v) => {
            w.write_record([
                "id",
                "a",
                "b",
                "s",
                "source_theorem",
                "left",
                "middle",
                "middle_quadrature",
                "right_printed",
                "right_derived",
                "holds_as_printed",
                "holds_as_derived",
                "hypothesis",
            ])?;
            for r in v {
                w.write_record([
                    r.id.get().to_string(),
                    r.a.to_string(),
                    r.b.to_string(),
                    r.s.to_string(),
                    r.source_theorem.to_string(),
                    opt(r.left),
                    r.middle.to_string(),
                    r.middle_quadrature.to_string(),
                    r.right_printed.to_string(),
                    r.right_derived.to_string(),
                    r.holds_as_printed.to_string(),
                    r.holds_as_derived.to_string(),
                    match r.hypothesis_established {
                        None => "unchecked",
                        Some(true) => "established",
                        Some(false) => "not_established",
                    }
                    .to_owned(),
                ])?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn status(s: MembershipStatus) -> &'static str {
    match s {
        MembershipStatus::MemberOnGrid => "member_on_grid",
        MembershipStatus::Violated => "violated",
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "FAILS"
    }
}

fn text(reports: &Reports) -> String {
    let mut out = String::new();
    match reports {
        Reports::Membership(v) => {
            for r in v {
                let _ = writeln!(
                    out,
                    "{} {} on [{}, {}]: {}",
                    r.class.kind(),
                    r.function,
                    r.interval.a(),
                    r.interval.b(),
                    status(r.status)
                );
                if let Some(w) = &r.witness {
                    let _ = writeln!(
                        out,
                        "  witness x={} y={} t={} defect={:e}",
                        w.x, w.y, w.t, w.defect
                    );
                }
                if let Some(n) = &r.negative_value {
                    let _ = writeln!(out, "  negative value f({}) = {}", n.x, n.value);
                }
                let _ = writeln!(
                    out,
                    "  max defect {:e}, tolerance {:e}, {} evaluations{}",
                    r.max_defect.defect,
                    r.tolerance,
                    r.evaluations,
                    if r.partial { ", partial search" } else { "" }
                );
            }
        }
        Reports::SRange(v) => {
            for r in v {
                let runs: Vec<String> = r
                    .intervals
                    .iter()
                    .map(|i| format!("[{}, {}]", i.lo, i.hi))
                    .collect();
                let _ = writeln!(
                    out,
                    "{} {} on [{}, {}]: s in {}",
                    r.kind,
                    r.function,
                    r.interval.a(),
                    r.interval.b(),
                    if runs.is_empty() {
                        "(none)".to_owned()
                    } else {
                        runs.join(" ")
                    }
                );
            }
        }
        Reports::Inequality(v) => {
            for r in v {
                let s = r.s.map(|s| format!(" s={s}")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{} f={} on [{}, {}]{s}: {}",
                    r.theorem,
                    r.f,
                    r.interval.a(),
                    r.interval.b(),
                    verdict(r.holds)
                );
                for c in &r.comparisons {
                    let _ = writeln!(
                        out,
                        "  {} {} <= {} {}  margin {:e}  {}",
                        c.lhs,
                        c.lhs_value,
                        c.rhs,
                        c.rhs_value,
                        c.margin,
                        verdict(c.holds)
                    );
                }
                if let Some(h) = &r.hypothesis {
                    let state = if h.established {
                        "established"
                    } else {
                        "not established"
                    };
                    let _ = writeln!(out, "  hypothesis {}: {state}", h.class);
                }
                for n in &r.notes {
                    let _ = writeln!(out, "  note: {n}");
                }
            }
        }
        Reports::Means(v) => {
            for r in v {
                for m in &r.means {
                    let _ = writeln!(out, "{}({}, {}) = {}", m.name, r.a, r.b, m.value);
                }
                if let Some(p) = &r.p_logarithmic {
                    let _ = writeln!(out, "L_{}({}, {}) = {}", p.p, r.a, r.b, p.value);
                }
                if let Some(c) = &r.chain {
                    for l in &c.links {
                        let _ = writeln!(
                            out,
                            "  {} <= {}  margin {:e}  {}",
                            l.lhs,
                            l.rhs,
                            l.margin,
                            verdict(l.holds)
                        );
                    }
                }
            }
        }
        Reports::Propositions(v) => {
            for r in v {
                let _ = writeln!(
                    out,
                    "proposition {} at a={} b={} s={} (via {}): ln I = {}",
                    r.id.get(),
                    r.a,
                    r.b,
                    r.s,
                    r.source_theorem,
                    r.middle
                );
                if let Some(l) = r.left {
                    let _ = writeln!(out, "  lower bound {l}");
                }
                let _ = writeln!(
                    out,
                    "  printed bound {}: {}; derived bound {}: {}",
                    r.right_printed,
                    verdict(r.holds_as_printed),
                    r.right_derived,
                    verdict(r.holds_as_derived)
                );
                let hyp = match r.hypothesis_established {
                    None => "unchecked",
                    Some(true) => "established",
                    Some(false) => "not established",
                };
                let _ = writeln!(out, "  hypothesis: {hyp}");
            }
        }
    }
    out
}
