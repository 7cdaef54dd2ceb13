//! Batch evaluation of theorems over a grid of `(interval, s)` points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classes::SearchConfig;
use crate::error::{Error, Result};
use crate::funcat::{resolve_f, resolve_h};
use crate::hadamard::{evaluate_theorem, InequalityReport, TheoremId, TheoremInput};
use crate::interval::Interval;
use crate::quad::DEFAULT_TOL;

/// Function specs are catalog names or expressions; `f` and `g` are
/// resolved separately on every interval.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub theorems: Vec<TheoremId>,
    pub f: String,
    pub g: Option<String>,
    pub h: Option<String>,
    pub s_values: Vec<f64>,
    pub intervals: Vec<Interval>,
    pub quad_tol: f64,
    pub check_hypothesis: bool,
    pub search: SearchConfig,
}

impl SweepSpec {
    pub fn new(f: impl Into<String>) -> Self {
        SweepSpec {
            theorems: TheoremId::ALL.to_vec(),
            f: f.into(),
            g: None,
            h: None,
            s_values: Vec::new(),
            intervals: Vec::new(),
            quad_tol: DEFAULT_TOL,
            check_hypothesis: false,
            search: SearchConfig::default(),
        }
    }
}

/// `count` subintervals of `outer` with endpoints drawn uniformly from a
/// ChaCha8 stream seeded with `seed`. Draws narrower than a thousandth of
/// `outer` are discarded.
pub fn random_subintervals(outer: Interval, count: usize, seed: u64) -> Vec<Interval> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_width = 1e-3 * outer.width();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rng.random_range(outer.a()..=outer.b());
        let v = rng.random_range(outer.a()..=outer.b());
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        if hi - lo >= min_width {
            out.push(Interval::new(lo, hi).expect("ordered finite endpoints"));
        }
    }
    out
}

/// Evaluation points in output order: interval-major, then theorem, then
/// `s` (theorems without `s` get a single point per interval).
fn points(spec: &SweepSpec) -> Vec<(Interval, TheoremId, Option<f64>)> {
    let mut pts = Vec::new();
    for &iv in &spec.intervals {
        for &id in &spec.theorems {
            if id.uses_s() {
                pts.extend(spec.s_values.iter().map(|&s| (iv, id, Some(s))));
            } else {
                pts.push((iv, id, None));
            }
        }
    }
    pts
}

/// Evaluates every point in parallel. Reports come back in input order;
/// on failure the error of the earliest failing point is returned.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<InequalityReport>> {
    if spec.intervals.is_empty() || spec.theorems.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one theorem and one interval".to_owned(),
        ));
    }
    if spec.theorems.iter().any(|t| t.uses_s()) && spec.s_values.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep includes theorems that need s but no s values were given".to_owned(),
        ));
    }
    let h = spec.h.as_deref().map(resolve_h).transpose()?;
    let results: Vec<Result<InequalityReport>> = points(spec)
        .into_par_iter()
        .map(|(iv, id, s)| {
            let f = resolve_f(&spec.f, iv)?;
            let mut input = TheoremInput::new(f, iv).quad_tol(spec.quad_tol);
            input.s = s;
            if id.uses_g() {
                if let Some(g) = &spec.g {
                    input.g = Some(resolve_f(g, iv)?);
                }
            }
            if id.uses_h() {
                input.h = h.clone();
            }
            if spec.check_hypothesis {
                input = input.check_hypothesis(spec.search);
            }
            evaluate_theorem(id, &input)
        })
        .collect();
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subintervals_are_seeded_and_inside() {
        let outer = Interval::new(0.0, 4.0).unwrap();
        let a = random_subintervals(outer, 50, 42);
        assert_eq!(a, random_subintervals(outer, 50, 42));
        assert_ne!(a, random_subintervals(outer, 50, 43));
        for iv in &a {
            assert!(outer.contains(iv.a()) && outer.contains(iv.b()));
            assert!(iv.width() >= 4e-3);
        }
    }

    #[test]
    fn order_and_count() {
        let mut spec = SweepSpec::new("square");
        spec.theorems = vec![TheoremId::HhClassic, TheoremId::HsUpper];
        spec.s_values = vec![0.5, 1.0];
        spec.intervals = vec![
            Interval::new(0.0, 1.0).unwrap(),
            Interval::new(1.0, 2.0).unwrap(),
        ];
        let r = sweep(&spec).unwrap();
        let keys: Vec<(f64, TheoremId, Option<f64>)> =
            r.iter().map(|r| (r.interval.a(), r.theorem, r.s)).collect();
        assert_eq!(
            keys,
            vec![
                (0.0, TheoremId::HhClassic, None),
                (0.0, TheoremId::HsUpper, Some(0.5)),
                (0.0, TheoremId::HsUpper, Some(1.0)),
                (1.0, TheoremId::HhClassic, None),
                (1.0, TheoremId::HsUpper, Some(0.5)),
                (1.0, TheoremId::HsUpper, Some(1.0)),
            ]
        );
        assert!(r.iter().all(|r| r.holds));
    }

    #[test]
    fn errors_name_the_earliest_point() {
        let mut spec = SweepSpec::new("ln");
        spec.theorems = vec![TheoremId::HhClassic];
        spec.intervals = vec![
            Interval::new(1.0, 2.0).unwrap(),
            Interval::new(-1.0, 2.0).unwrap(),
        ];
        let err = sweep(&spec).unwrap_err();
        assert!(matches!(err, Error::DomainIncompatible { .. }), "{err}");
        spec.theorems = vec![TheoremId::HsUpper];
        assert!(sweep(&spec).is_err());
    }
}
