//! Numerical membership in convexity classes.
//!
//! Every class here is defined by an inequality
//! `f(t x + (1 - t) y) <= w1(t) f(x) + w2(t) f(y)`; the defect is the left
//! side minus the right. A search maximizes the defect over a uniform
//! `(x, y, t)` grid, then polishes the best positive cells by coordinate
//! ascent. `MemberOnGrid` means no sampled defect exceeded the tolerance,
//! nothing more.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{DomainError, DomainReason, Error, Result};
use crate::funcat::{h_power, validate_s, HPower, RealFunction};
use crate::interval::Interval;

/// Margin kept from a singular end of the `t` range.
pub const OPEN_T_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Convex,
    GodunovaLevin,
    PFunction,
    SConvex2,
    HConvex,
    HsFirst,
    HsSecond,
}

impl ClassKind {
    pub const ALL: [ClassKind; 7] = [
        ClassKind::Convex,
        ClassKind::GodunovaLevin,
        ClassKind::PFunction,
        ClassKind::SConvex2,
        ClassKind::HConvex,
        ClassKind::HsFirst,
        ClassKind::HsSecond,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::Convex => "convex",
            ClassKind::GodunovaLevin => "godunova_levin",
            ClassKind::PFunction => "p_function",
            ClassKind::SConvex2 => "s_convex_2",
            ClassKind::HConvex => "h_convex",
            ClassKind::HsFirst => "hs_first",
            ClassKind::HsSecond => "hs_second",
        }
    }

    pub fn needs_h(self) -> bool {
        matches!(
            self,
            ClassKind::HConvex | ClassKind::HsFirst | ClassKind::HsSecond
        )
    }

    pub fn needs_s(self) -> bool {
        matches!(
            self,
            ClassKind::SConvex2 | ClassKind::HsFirst | ClassKind::HsSecond
        )
    }

    /// Every class except plain convexity is defined for non-negative `f`.
    pub fn requires_nonnegative(self) -> bool {
        !matches!(self, ClassKind::Convex)
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ClassKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownName {
                what: "class",
                name: s.to_owned(),
            })
    }
}

/// A class together with the parameters it needs.
#[derive(Debug, Clone)]
pub struct ClassSpec {
    kind: ClassKind,
    h: Option<RealFunction>,
    s: Option<f64>,
    hs: Option<HPower>,
}

impl ClassSpec {
    pub fn new(kind: ClassKind, h: Option<RealFunction>, s: Option<f64>) -> Result<Self> {
        if kind.needs_h() != h.is_some() {
            return Err(Error::InvalidArgument(format!(
                "class {kind} {} a weight function h",
                if kind.needs_h() {
                    "requires"
                } else {
                    "does not take"
                }
            )));
        }
        if kind.needs_s() != s.is_some() {
            return Err(Error::InvalidArgument(format!(
                "class {kind} {} a parameter s",
                if kind.needs_s() {
                    "requires"
                } else {
                    "does not take"
                }
            )));
        }
        let s = s.map(validate_s).transpose()?;
        let hs = match (&h, s) {
            (Some(h), Some(s)) => Some(h_power(h, s)?),
            _ => None,
        };
        Ok(ClassSpec { kind, h, s, hs })
    }

    pub fn convex() -> Self {
        ClassSpec::new(ClassKind::Convex, None, None).expect("convex takes no parameters")
    }

    pub fn hs_second(h: RealFunction, s: f64) -> Result<Self> {
        ClassSpec::new(ClassKind::HsSecond, Some(h), Some(s))
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn h(&self) -> Option<&RealFunction> {
        self.h.as_ref()
    }

    pub fn s(&self) -> Option<f64> {
        self.s
    }

    fn t_admissible(&self, t: f64) -> bool {
        match self.kind {
            ClassKind::GodunovaLevin => t > 0.0 && t < 1.0,
            ClassKind::HConvex | ClassKind::HsSecond => {
                let d = self.h.as_ref().expect("validated").domain();
                d.contains(t) && d.contains(1.0 - t)
            }
            ClassKind::HsFirst => self.h.as_ref().expect("validated").domain().contains(t),
            _ => true,
        }
    }

    /// The `t` range searched: `[0, 1]`, pulled in by [`OPEN_T_MARGIN`] at
    /// any end where a weight is undefined.
    pub fn t_range(&self) -> (f64, f64) {
        let lo = if self.t_admissible(0.0) {
            0.0
        } else {
            OPEN_T_MARGIN
        };
        let hi = if self.t_admissible(1.0) {
            1.0
        } else {
            1.0 - OPEN_T_MARGIN
        };
        (lo, hi)
    }

    /// `(w1(t), w2(t))`.
    pub fn weights(&self, t: f64) -> std::result::Result<(f64, f64), DomainError> {
        let u = 1.0 - t;
        match self.kind {
            ClassKind::Convex => Ok((t, u)),
            ClassKind::GodunovaLevin => {
                if t <= 0.0 || u <= 0.0 {
                    return Err(DomainError::new("1/t", t, DomainReason::OutsideDomain));
                }
                Ok((1.0 / t, 1.0 / u))
            }
            ClassKind::PFunction => Ok((1.0, 1.0)),
            ClassKind::SConvex2 => {
                let s = self.s.expect("validated");
                Ok((t.powf(s), u.powf(s)))
            }
            ClassKind::HConvex => {
                let h = self.h.as_ref().expect("validated");
                Ok((h.eval(t)?, h.eval(u)?))
            }
            ClassKind::HsFirst => {
                let w = self.hs.as_ref().expect("validated").eval(t)?;
                Ok((w, 1.0 - w))
            }
            ClassKind::HsSecond => {
                let hs = self.hs.as_ref().expect("validated");
                Ok((hs.eval(t)?, hs.eval(u)?))
            }
        }
    }
}

impl Serialize for ClassSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            kind: ClassKind,
            #[serde(skip_serializing_if = "Option::is_none")]
            h: Option<&'a str>,
            #[serde(skip_serializing_if = "Option::is_none")]
            s: Option<f64>,
        }
        Repr {
            kind: self.kind,
            h: self.h.as_ref().map(|h| h.name()),
            s: self.s,
        }
        .serialize(s)
    }
}

/// The point `t x + (1 - t) y`, kept inside `[min(x, y), max(x, y)]` and
/// exactly `x` when `x == y`.
fn combine(x: f64, y: f64, t: f64) -> f64 {
    if x == y {
        return x;
    }
    (t * x + (1.0 - t) * y).clamp(x.min(y), x.max(y))
}

#[inline]
fn defect_from(fz: f64, fx: f64, fy: f64, w: (f64, f64)) -> f64 {
    fz - w.0 * fx - w.1 * fy
}

fn point_defect(
    spec: &ClassSpec,
    f: &RealFunction,
    x: f64,
    y: f64,
    t: f64,
) -> std::result::Result<f64, DomainError> {
    let w = spec.weights(t)?;
    let fz = f.eval(combine(x, y, t))?;
    Ok(defect_from(fz, f.eval(x)?, f.eval(y)?, w))
}

/// LHS minus RHS of the class inequality at one point; positive means the
/// inequality fails there.
pub fn defect(
    spec: &ClassSpec,
    f: &RealFunction,
    interval: Interval,
    x: f64,
    y: f64,
    t: f64,
) -> Result<f64> {
    if !interval.contains(x) || !interval.contains(y) {
        return Err(Error::InvalidArgument(format!(
            "points ({x}, {y}) must lie in [{}, {}]",
            interval.a(),
            interval.b()
        )));
    }
    if !(0.0..=1.0).contains(&t) || !spec.t_admissible(t) {
        return Err(Error::InvalidArgument(format!(
            "t = {t} is outside the admissible range for class {}",
            spec.kind
        )));
    }
    point_defect(spec, f, x, y, t).map_err(|source| Error::SearchDomain { x, y, t, source })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub grid_x: usize,
    pub grid_y: usize,
    pub grid_t: usize,
    /// Number of best positive grid cells polished by coordinate ascent.
    pub refine_top_k: usize,
    /// Ascent stops once every step is below this fraction of its range.
    pub min_step: f64,
    /// Cap on ascent moves per polished cell.
    pub max_refine_iters: usize,
    /// Relative tolerance: a defect counts as a violation when it exceeds
    /// `tolerance * (1 + max |f| on the grid)`.
    pub tolerance: f64,
    /// Maximum number of defect evaluations.
    pub budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_x: 41,
            grid_y: 41,
            grid_t: 41,
            refine_top_k: 16,
            min_step: 1e-6,
            max_refine_iters: 2_000,
            tolerance: 1e-9,
            budget: 10_000_000,
        }
    }
}

impl SearchConfig {
    pub fn with_grid(n: usize) -> Self {
        SearchConfig {
            grid_x: n,
            grid_y: n,
            grid_t: n,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("grid_x", self.grid_x),
            ("grid_y", self.grid_y),
            ("grid_t", self.grid_t),
        ] {
            if n < 2 {
                return Err(Error::InvalidParameter {
                    name,
                    value: n as f64,
                    reason: "grid needs at least two points",
                });
            }
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                value: self.tolerance,
                reason: "must be positive",
            });
        }
        if !(self.min_step.is_finite() && self.min_step > 0.0) {
            return Err(Error::InvalidParameter {
                name: "min_step",
                value: self.min_step,
                reason: "must be positive",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ViolationWitness {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativeValue {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipStatus {
    MemberOnGrid,
    Violated,
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipVerdict {
    pub class: ClassSpec,
    pub function: String,
    pub interval: Interval,
    pub status: MembershipStatus,
    /// Present when some defect exceeded the tolerance.
    pub witness: Option<ViolationWitness>,
    /// Present when the class needs `f >= 0` and a grid value was negative.
    pub negative_value: Option<NegativeValue>,
    pub grid: [usize; 3],
    pub t_range: (f64, f64),
    /// Largest defect seen anywhere in the search, and where.
    pub max_defect: ViolationWitness,
    /// Absolute tolerance actually applied.
    pub tolerance: f64,
    pub evaluations: usize,
    /// Set when the budget ran out before the search finished.
    pub partial: bool,
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        self.status == MembershipStatus::MemberOnGrid
    }
}

/// Orders candidates: larger defect first, then lexicographically smaller
/// `(x, y, t)`.
fn rank(a: &ViolationWitness, b: &ViolationWitness) -> Ordering {
    b.defect
        .total_cmp(&a.defect)
        .then(a.x.total_cmp(&b.x))
        .then(a.y.total_cmp(&b.y))
        .then(a.t.total_cmp(&b.t))
}

fn push_top(top: &mut Vec<ViolationWitness>, w: ViolationWitness, k: usize) {
    if k == 0 || w.defect <= 0.0 {
        return;
    }
    if top.len() == k && rank(&w, top.last().expect("non-empty")) != Ordering::Less {
        return;
    }
    let at = top.partition_point(|o| rank(o, &w) == Ordering::Less);
    top.insert(at, w);
    top.truncate(k);
}

struct RowOutcome {
    best: ViolationWitness,
    top: Vec<ViolationWitness>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

struct Searcher<'a> {
    spec: &'a ClassSpec,
    f: &'a RealFunction,
    interval: Interval,
    t_range: (f64, f64),
    config: &'a SearchConfig,
}

impl Searcher<'_> {
    fn eval(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        point_defect(self.spec, self.f, x, y, t).map_err(|source| Error::SearchDomain {
            x,
            y,
            t,
            source,
        })
    }

    /// Coordinate ascent from a grid cell.
    /// Returns the polished point and whether the budget cut it short.
    fn polish(
        &self,
        start: ViolationWitness,
        evals: &mut usize,
    ) -> Result<(ViolationWitness, bool)> {
        let cfg = self.config;
        let lo = [self.interval.a(), self.interval.a(), self.t_range.0];
        let hi = [self.interval.b(), self.interval.b(), self.t_range.1];
        let span = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];
        let mut frac = [
            0.5 / (cfg.grid_x - 1) as f64,
            0.5 / (cfg.grid_y - 1) as f64,
            0.5 / (cfg.grid_t - 1) as f64,
        ];
        let mut cur = start;
        let mut moves = 0;
        while frac.iter().any(|&s| s >= cfg.min_step) && moves < cfg.max_refine_iters {
            if *evals + 6 > cfg.budget {
                return Ok((cur, true));
            }
            let mut improved = false;
            for axis in 0..3 {
                for dir in [1.0, -1.0] {
                    let mut p = [cur.x, cur.y, cur.t];
                    p[axis] = (p[axis] + dir * frac[axis] * span[axis]).clamp(lo[axis], hi[axis]);
                    if p[axis] == [cur.x, cur.y, cur.t][axis] {
                        continue;
                    }
                    *evals += 1;
                    let d = self.eval(p[0], p[1], p[2])?;
                    let cand = ViolationWitness {
                        x: p[0],
                        y: p[1],
                        t: p[2],
                        defect: d,
                    };
                    if rank(&cand, &cur) == Ordering::Less {
                        cur = cand;
                        improved = true;
                    }
                }
            }
            moves += 1;
            if !improved {
                frac.iter_mut().for_each(|s| *s *= 0.5);
            }
        }
        Ok((cur, false))
    }
}

/// Searches for a violation of `spec` by `f` on `interval`.
pub fn check_membership(
    spec: &ClassSpec,
    f: &RealFunction,
    interval: Interval,
    config: &SearchConfig,
) -> Result<MembershipVerdict> {
    config.validate()?;
    let t_range = spec.t_range();
    let xs = interval.grid(config.grid_x);
    let ys = interval.grid(config.grid_y);
    let ts = linspace(t_range.0, t_range.1, config.grid_t);

    let eval_f = |x: f64| {
        f.eval(x).map_err(|source| Error::SearchDomain {
            x,
            y: x,
            t: 0.0,
            source,
        })
    };
    let fx: Vec<f64> = xs.iter().map(|&x| eval_f(x)).collect::<Result<_>>()?;
    let fy: Vec<f64> = ys.iter().map(|&y| eval_f(y)).collect::<Result<_>>()?;
    let weights: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            spec.weights(t).map_err(|source| Error::SearchDomain {
                x: xs[0],
                y: ys[0],
                t,
                source,
            })
        })
        .collect::<Result<_>>()?;

    let max_abs = fx.iter().chain(&fy).fold(0.0f64, |m, v| m.max(v.abs()));
    let tol_abs = config.tolerance * (1.0 + max_abs);

    let negative_value = if spec.kind.requires_nonnegative() {
        xs.iter()
            .zip(&fx)
            .chain(ys.iter().zip(&fy))
            .filter(|(_, &v)| v < -tol_abs)
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.total_cmp(b.0)))
            .map(|(&x, &value)| NegativeValue { x, value })
    } else {
        None
    };

    let per_row = config.grid_y * config.grid_t;
    let rows = (config.budget / per_row).min(config.grid_x);
    let mut partial = rows < config.grid_x;
    let k = config.refine_top_k;

    let row_results: Vec<Result<RowOutcome>> = (0..rows)
        .into_par_iter()
        .map(|i| {
            let x = xs[i];
            let mut best: Option<ViolationWitness> = None;
            let mut top = Vec::with_capacity(k);
            for (j, &y) in ys.iter().enumerate() {
                for (l, &t) in ts.iter().enumerate() {
                    let z = combine(x, y, t);
                    let fz = f
                        .eval(z)
                        .map_err(|source| Error::SearchDomain { x, y, t, source })?;
                    let d = defect_from(fz, fx[i], fy[j], weights[l]);
                    let w = ViolationWitness { x, y, t, defect: d };
                    if best.is_none_or(|b| rank(&w, &b) == Ordering::Less) {
                        best = Some(w);
                    }
                    push_top(&mut top, w, k);
                }
            }
            Ok(RowOutcome {
                best: best.expect("rows are non-empty"),
                top,
            })
        })
        .collect();

    let mut evaluations = rows * per_row;
    let mut best: Option<ViolationWitness> = None;
    let mut top = Vec::with_capacity(k);
    for row in row_results {
        let row = row?;
        if best.is_none_or(|b| rank(&row.best, &b) == Ordering::Less) {
            best = Some(row.best);
        }
        for w in row.top {
            push_top(&mut top, w, k);
        }
    }

    let searcher = Searcher {
        spec,
        f,
        interval,
        t_range,
        config,
    };
    let mut best = best.unwrap_or(ViolationWitness {
        x: interval.a(),
        y: interval.a(),
        t: t_range.0,
        defect: f64::NEG_INFINITY,
    });
    for cell in top {
        if evaluations >= config.budget {
            partial = true;
            break;
        }
        let (polished, exhausted) = searcher.polish(cell, &mut evaluations)?;
        partial |= exhausted;
        if rank(&polished, &best) == Ordering::Less {
            best = polished;
        }
    }

    let witness = (best.defect > tol_abs).then_some(best);
    let status = if witness.is_some() || negative_value.is_some() {
        MembershipStatus::Violated
    } else {
        MembershipStatus::MemberOnGrid
    };
    Ok(MembershipVerdict {
        class: spec.clone(),
        function: f.name().to_owned(),
        interval,
        status,
        witness,
        negative_value,
        grid: [config.grid_x, config.grid_y, config.grid_t],
        t_range,
        max_defect: best,
        tolerance: tol_abs,
        evaluations,
        partial,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SInterval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SProbe {
    pub s: f64,
    pub member: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SRangeReport {
    pub kind: ClassKind,
    pub h: Option<String>,
    pub function: String,
    pub interval: Interval,
    /// Maximal runs of probed `s` values where the check passed.
    pub intervals: Vec<SInterval>,
    pub probes: Vec<SProbe>,
    pub resolution: f64,
    pub partial: bool,
}

pub const S_RESOLUTION: f64 = 1e-3;
const S_COARSE_STEP: f64 = 0.05;

/// Scans `s` over `(0, 1]` and bisects every status change down to
/// [`S_RESOLUTION`].
pub fn find_valid_s_range(
    kind: ClassKind,
    h: Option<&RealFunction>,
    f: &RealFunction,
    interval: Interval,
    config: &SearchConfig,
) -> Result<SRangeReport> {
    if !kind.needs_s() {
        return Err(Error::InvalidArgument(format!(
            "class {kind} has no parameter s to scan"
        )));
    }
    let mut partial = false;
    let mut probe = |s: f64| -> Result<bool> {
        let spec = ClassSpec::new(kind, h.cloned(), Some(s))?;
        let v = check_membership(&spec, f, interval, config)?;
        partial |= v.partial;
        Ok(v.is_member())
    };

    let steps = (1.0 / S_COARSE_STEP).round() as usize;
    let mut coarse = vec![S_RESOLUTION];
    coarse.extend((1..=steps).map(|k| k as f64 * S_COARSE_STEP));
    *coarse.last_mut().expect("non-empty") = 1.0;

    let mut probes: Vec<SProbe> = Vec::new();
    for &s in &coarse {
        probes.push(SProbe {
            s,
            member: probe(s)?,
        });
    }
    let mut refined = Vec::new();
    for pair in probes.windows(2) {
        let (mut lo, mut hi) = (pair[0], pair[1]);
        if lo.member == hi.member {
            continue;
        }
        while hi.s - lo.s > S_RESOLUTION {
            let s = 0.5 * (lo.s + hi.s);
            let p = SProbe {
                s,
                member: probe(s)?,
            };
            refined.push(p);
            if p.member == lo.member {
                lo = p;
            } else {
                hi = p;
            }
        }
    }
    probes.extend(refined);
    probes.sort_by(|a, b| a.s.total_cmp(&b.s));

    let mut intervals = Vec::new();
    let mut run: Option<SInterval> = None;
    for p in &probes {
        match (p.member, run.as_mut()) {
            (true, Some(r)) => r.hi = p.s,
            (true, None) => run = Some(SInterval { lo: p.s, hi: p.s }),
            (false, Some(_)) => intervals.extend(run.take()),
            (false, None) => {}
        }
    }
    intervals.extend(run);

    Ok(SRangeReport {
        kind,
        h: h.map(|h| h.name().to_owned()),
        function: f.name().to_owned(),
        interval,
        intervals,
        probes,
        resolution: S_RESOLUTION,
        partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcat::{builtin_f, builtin_h, FName, HName};

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn id() -> RealFunction {
        builtin_h(HName::Identity)
    }

    #[test]
    fn parameter_presence_is_enforced() {
        assert!(ClassSpec::new(ClassKind::Convex, Some(id()), None).is_err());
        assert!(ClassSpec::new(ClassKind::HsSecond, Some(id()), None).is_err());
        assert!(ClassSpec::new(ClassKind::HsSecond, None, Some(0.5)).is_err());
        assert!(ClassSpec::new(ClassKind::SConvex2, None, Some(0.0)).is_err());
        assert!(ClassSpec::new(ClassKind::SConvex2, None, Some(0.5)).is_ok());
        assert!(ClassSpec::new(ClassKind::HConvex, Some(id()), None).is_ok());
        assert_eq!(
            "hs_second".parse::<ClassKind>().unwrap(),
            ClassKind::HsSecond
        );
        assert!("concave".parse::<ClassKind>().is_err());
    }

    #[test]
    fn t_ranges() {
        assert_eq!(ClassSpec::convex().t_range(), (0.0, 1.0));
        let gl = ClassSpec::new(ClassKind::GodunovaLevin, None, None).unwrap();
        assert_eq!(gl.t_range(), (1e-3, 1.0 - 1e-3));
        let recip = builtin_h(HName::Reciprocal);
        let hs1 = ClassSpec::new(ClassKind::HsFirst, Some(recip.clone()), Some(0.5)).unwrap();
        assert_eq!(hs1.t_range(), (1e-3, 1.0));
        let hs2 = ClassSpec::new(ClassKind::HsSecond, Some(recip), Some(0.5)).unwrap();
        assert_eq!(hs2.t_range(), (1e-3, 1.0 - 1e-3));
    }

    #[test]
    fn pointwise_defects() {
        let sq = builtin_f(FName::Square, iv(0.0, 1.0)).unwrap();
        let d = defect(&ClassSpec::convex(), &sq, iv(0.0, 1.0), 0.0, 1.0, 0.5).unwrap();
        assert_eq!(d, -0.25);

        let ln = builtin_f(FName::Ln, iv(2.0, 4.0)).unwrap();
        let d = defect(&ClassSpec::convex(), &ln, iv(2.0, 4.0), 2.0, 4.0, 0.5).unwrap();
        let want = 3f64.ln() - 0.5 * (2f64.ln() + 4f64.ln());
        assert!((d - want).abs() < 1e-15);
        assert!((d - 0.0589).abs() < 1e-4);

        assert!(defect(&ClassSpec::convex(), &ln, iv(2.0, 4.0), 1.0, 4.0, 0.5).is_err());
        assert!(defect(&ClassSpec::convex(), &ln, iv(2.0, 4.0), 2.0, 4.0, 1.5).is_err());
        let gl = ClassSpec::new(ClassKind::GodunovaLevin, None, None).unwrap();
        assert!(defect(&gl, &ln, iv(2.0, 4.0), 2.0, 4.0, 0.0).is_err());
    }

    #[test]
    fn degenerate_pairs() {
        let ln = builtin_f(FName::Ln, iv(2.0, 4.0)).unwrap();
        let p = ClassSpec::new(ClassKind::PFunction, None, None).unwrap();
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            for x in [2.0, 2.7, 3.3, 4.0] {
                let d = defect(&ClassSpec::convex(), &ln, iv(2.0, 4.0), x, x, t).unwrap();
                assert!(d.abs() <= 4.0 * f64::EPSILON, "{d}");
                // weights sum to 2: defect is -f(x)
                let dp = defect(&p, &ln, iv(2.0, 4.0), x, x, t).unwrap();
                assert_eq!(dp, -x.ln());
            }
        }
    }

    #[test]
    fn convex_equals_hs_second_identity_at_one() {
        let hs = ClassSpec::hs_second(id(), 1.0).unwrap();
        let f = builtin_f(FName::Exp, iv(-1.0, 2.0)).unwrap();
        let g = iv(-1.0, 2.0).grid(13);
        for &x in &g {
            for &y in &g {
                for k in 0..=10 {
                    let t = k as f64 / 10.0;
                    let a = defect(&ClassSpec::convex(), &f, iv(-1.0, 2.0), x, y, t).unwrap();
                    let b = defect(&hs, &f, iv(-1.0, 2.0), x, y, t).unwrap();
                    assert_eq!(a.to_bits(), b.to_bits());
                }
            }
        }
    }

    #[test]
    fn convex_square_is_member() {
        let sq = builtin_f(FName::Square, iv(0.0, 1.0)).unwrap();
        let v = check_membership(
            &ClassSpec::convex(),
            &sq,
            iv(0.0, 1.0),
            &SearchConfig::default(),
        )
        .unwrap();
        assert!(v.is_member());
        assert!(v.max_defect.defect <= v.tolerance);
        assert!(v.witness.is_none());
        assert!(!v.partial);
    }

    #[test]
    fn ln_is_not_convex() {
        let ln = builtin_f(FName::Ln, iv(2.0, 4.0)).unwrap();
        let v = check_membership(
            &ClassSpec::convex(),
            &ln,
            iv(2.0, 4.0),
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(v.status, MembershipStatus::Violated);
        let w = v.witness.unwrap();
        assert_eq!((w.x, w.y), (2.0, 4.0));
        // maximizer of ln(4 - 2t) - t ln 2 - (1 - t) ln 4 is t = 2 - 1/ln 2
        let t_star = 2.0 - 1.0 / 2f64.ln();
        assert!((w.t - t_star).abs() < 1e-4, "{}", w.t);
        assert!(w.defect >= 0.0589);
        let again = defect(&ClassSpec::convex(), &ln, iv(2.0, 4.0), w.x, w.y, w.t).unwrap();
        assert!((again - w.defect).abs() <= 1e-12);
    }

    #[test]
    fn ln_is_hs_second_at_small_s() {
        let ln = builtin_f(FName::Ln, iv(2.0, 4.0)).unwrap();
        let spec = ClassSpec::hs_second(id(), 0.1).unwrap();
        let v = check_membership(&spec, &ln, iv(2.0, 4.0), &SearchConfig::default()).unwrap();
        assert!(v.is_member(), "{:?}", v.max_defect);
    }

    #[test]
    fn negative_values_violate_nonnegative_classes() {
        let f = builtin_f(FName::Identity, iv(-1.0, 1.0)).unwrap();
        let p = ClassSpec::new(ClassKind::PFunction, None, None).unwrap();
        let v = check_membership(&p, &f, iv(-1.0, 1.0), &SearchConfig::with_grid(11)).unwrap();
        assert_eq!(v.status, MembershipStatus::Violated);
        assert_eq!(v.negative_value.unwrap().x, -1.0);
        let v = check_membership(
            &ClassSpec::convex(),
            &f,
            iv(-1.0, 1.0),
            &SearchConfig::with_grid(11),
        )
        .unwrap();
        assert!(v.is_member());
    }

    #[test]
    fn godunova_levin_and_reciprocal_h_agree() {
        // h(t) = 1/t turns h-convexity into the Godunova-Levin class.
        let f = builtin_f(FName::Ln, iv(2.0, 4.0)).unwrap();
        let gl = ClassSpec::new(ClassKind::GodunovaLevin, None, None).unwrap();
        let hc =
            ClassSpec::new(ClassKind::HConvex, Some(builtin_h(HName::Reciprocal)), None).unwrap();
        let cfg = SearchConfig::with_grid(21);
        let a = check_membership(&gl, &f, iv(2.0, 4.0), &cfg).unwrap();
        let b = check_membership(&hc, &f, iv(2.0, 4.0), &cfg).unwrap();
        assert!(a.is_member() && b.is_member());
        assert_eq!(a.t_range, b.t_range);
        assert_eq!(a.max_defect.defect.to_bits(), b.max_defect.defect.to_bits());
    }

    #[test]
    fn first_sense_weights_as_written() {
        // 1 - h^s(t) is negative for h = 1/t; evaluated without adjustment.
        let spec = ClassSpec::new(
            ClassKind::HsFirst,
            Some(builtin_h(HName::Reciprocal)),
            Some(1.0),
        )
        .unwrap();
        let (w1, w2) = spec.weights(0.25).unwrap();
        assert_eq!((w1, w2), (4.0, -3.0));
    }

    #[test]
    fn domain_error_aborts_with_location() {
        let f = crate::funcat::resolve_f("1/(x - 3)", iv(2.0, 4.0)).unwrap();
        let err = check_membership(
            &ClassSpec::convex(),
            &f,
            iv(2.0, 4.0),
            &SearchConfig::with_grid(5),
        )
        .unwrap_err();
        assert!(matches!(err, Error::SearchDomain { x, .. } if x == 3.0));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let ln = builtin_f(FName::Ln, iv(2.0, 4.0)).unwrap();
        let cfg = SearchConfig {
            budget: 41 * 41 * 10,
            ..Default::default()
        };
        let v = check_membership(&ClassSpec::convex(), &ln, iv(2.0, 4.0), &cfg).unwrap();
        assert!(v.partial);
        assert!(v.evaluations <= cfg.budget);
    }

    #[test]
    fn verdict_is_deterministic() {
        let ln = builtin_f(FName::Ln, iv(2.0, 4.0)).unwrap();
        let spec = ClassSpec::hs_second(id(), 0.97).unwrap();
        let a = check_membership(&spec, &ln, iv(2.0, 4.0), &SearchConfig::default()).unwrap();
        let b = check_membership(&spec, &ln, iv(2.0, 4.0), &SearchConfig::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn s_range_for_square_includes_one() {
        let sq = builtin_f(FName::Square, iv(0.0, 1.0)).unwrap();
        let r = find_valid_s_range(
            ClassKind::HsSecond,
            Some(&id()),
            &sq,
            iv(0.0, 1.0),
            &SearchConfig::with_grid(21),
        )
        .unwrap();
        assert_eq!(r.intervals.len(), 1);
        assert_eq!(r.intervals[0].hi, 1.0);
        assert_eq!(r.intervals[0].lo, S_RESOLUTION);
    }

    #[test]
    fn s_range_rejects_parameterless_classes() {
        let sq = builtin_f(FName::Square, iv(0.0, 1.0)).unwrap();
        assert!(find_valid_s_range(
            ClassKind::Convex,
            None,
            &sq,
            iv(0.0, 1.0),
            &SearchConfig::default()
        )
        .is_err());
    }

    #[test]
    fn monotone_nesting_in_s() {
        let cfg = SearchConfig::with_grid(17);
        let span = iv(2.0, 4.0);
        for name in [FName::Ln, FName::Power(0.5), FName::Square] {
            let f = builtin_f(name, span).unwrap();
            let mut seen_member = false;
            for k in (1..=20).rev() {
                let s = k as f64 / 20.0;
                let v = check_membership(&ClassSpec::hs_second(id(), s).unwrap(), &f, span, &cfg)
                    .unwrap();
                if seen_member {
                    assert!(v.is_member(), "{name} at s={s}");
                }
                seen_member |= v.is_member();
            }
        }
    }
}
